//! `clarklab`: run Clark-measure and composition-operator experiments and
//! emit plot-ready CSV/JSON.
//!
//! # Configuration
//!
//! `--config FILE` reads a JSON document; every key is optional and unknown
//! keys are rejected.
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `t_grid` | 33 dyadic points of `[0, 1]` | path parameters, sorted and distinct |
//! | `generation` | 12 | Cantor generation |
//! | `n` | 128 | truncation size |
//! | `alpha_grid` | 256 | equispaced base points, starting at 1 |
//! | `clark` | see below | `profile`, `atoms`, `weak_star`, `radial`, `negative_clamp`, `density_samples` |
//! | `taylor` | `{}` | `samples` (default `4n`) and `radius` (default `1 - 1/(2n)`) |
//! | `quadrature` | | Cantor quadrature: `tolerance`, `cell_ratio`, `max_depth`, `support_floor` |
//! | `max_pair_gap` | 0.25 | largest `|s - t|` paired by `continuity` |
//! | `arc_length` | `2^-10` | arc length (turns) for the no-atom check |
//! | `arc_halvings` | 2 | halvings of the arc length |
//! | `arc_centers` | 4096 | arc centers |
//! | `no_atom_epsilon` | 0.1 | bound on arc masses |
//! | `i0_half_width` | `1/16` | half-width of `I_0` in turns |
//! | `unimodular_tolerance` | `1e-9` | agreement required where `|phi*|` is near 1 |
//! | `hypothesis_samples` | 4096 | samples on `E` for symbols without a Cantor part |
//!
//! Flags `--n`, `--alpha-grid`, `--generation`, `--k-max` and `--t` override
//! the file. Run `clarklab <command> --help` for the remaining flags.
//!
//! # Outputs
//!
//! With `--out DIR` the command writes `DIR/<command>.json` and one CSV per
//! table; otherwise the JSON (or, with `--format csv`, the tables) goes to
//! stdout. CSV columns:
//!
//! * `clark-report`: `density.csv` with `angle,density`
//! * `spectrum`: `spectrum.csv` with `k,sigma`; `--matrix` adds `matrix.csv` with `j,n,re,im`
//! * `maccluer`: `maccluer.csv` with `angle,phi_mass,psi_mass,in_z`
//! * `kernel-limit`: `kernel_limit.csv` with `a,b,delta,kappa,lambda,limit,numeric`
//! * `profile`: `profile.csv` with `t,estimate,reference,alpha,skipped,sigma_2,sigma_min`
//! * `continuity`: `continuity.csv` with `s,t,gap,h2_dist,m_dist` and
//!   `continuity_summary.csv` with `k,scale,pairs,max_h2,max_m`
//! * `lemmas`: `no_atoms.csv` (`length,max_mass,t,alpha,center`), `rho.csv`
//!   (`x,distance,bound`) and `mdiff.csv`
//!   (`epsilon,measured,bound,margin,samples,alpha`)
//!
//! Angles are in radians, `t`, `alpha` and arc positions in turns. Both
//! distance channels of `continuity` are lower-bound proxies of operator
//! distances.
//!
//! Exit status: 0 on success, 2 for usage or configuration errors, 3 for
//! numerical or output failures. Failures print a JSON record
//! `{"error": {"kind", "message", "exit_code"}}` on stderr.

mod error;
mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use clarklab::clark::{ClarkFamily, ClarkReport};
use clarklab::config::load_config;
use clarklab::hardy::{difference_norm, singular_values, truncate};
use clarklab::maccluer::{
    kernel_integral_i, kernel_integral_limit, maccluer_lower_bound, BoundConfig, BoundReport, KernelParams,
};
use clarklab::path::{check_no_atoms, continuity_modulus, ess_norm_profile, lemma_pair, PathConfig};
use clarklab::symbol::SymbolSpec;
use clarklab::{CantorMeasure, CirclePoint, Symbol};

use crate::error::CliError;
use crate::output::{emit, Artifact, Format, Meta};

#[derive(Debug, Parser)]
#[command(name = "clarklab", version, about = "Clark measures and composition operators on H^2")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; stdout when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Truncation size.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Number of base points.
    #[arg(long = "alpha-grid", global = true)]
    alpha_grid: Option<usize>,
    /// Cantor generation.
    #[arg(long, global = true)]
    generation: Option<u32>,
    /// Finest radius index of the weak* schedule.
    #[arg(long = "k-max", global = true)]
    k_max: Option<u32>,
    /// Path parameters, replacing `t_grid` (comma separated or repeated).
    #[arg(long = "t", global = true, value_delimiter = ',', allow_negative_numbers = true)]
    t: Vec<f64>,
    /// Log warnings (-v) or more (-vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    #[serde(skip)]
    verbose: u8,
}

/// Symbols are `zero`, `identity`, `constant:RE[,IM]`, `z^K`,
/// `blaschke:RE,IM;RE,IM[@ROTATION]`, `path:T`, or `@FILE` with a JSON
/// symbol description.
#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Clark measure of a symbol at one base point.
    ClarkReport {
        #[arg(long)]
        symbol: String,
        /// Base point `e^{2 pi i alpha}`, in turns.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Singular values of the `n x n` compression.
    Spectrum {
        #[arg(long)]
        symbol: String,
        /// Also emit the matrix entries.
        #[arg(long)]
        matrix: bool,
    },
    /// Atom lower bound for `||C_phi - C_psi||_e` and the compressed norm.
    Maccluer {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        /// Candidate atom locations in turns instead of grid detection.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        candidates: Vec<f64>,
    },
    /// Closed-form limit of the kernel integral, optionally against a
    /// numerical value for a symbol.
    #[command(allow_negative_numbers = true)]
    KernelLimit {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        #[arg(long)]
        lambda: f64,
        /// Symbol whose kernel integral is computed at radius `r`.
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, default_value_t = 1e-4)]
        r: f64,
    },
    /// Essential norms along the path against `sqrt(cantor_cdf(t))`.
    Profile,
    /// Distances between path members in both channels.
    Continuity,
    /// No-atom check over the grid, and the shift and difference bounds for
    /// one pair.
    Lemmas {
        #[arg(long, default_value_t = 0.7)]
        t0: f64,
        /// Second parameter; defaults to `t0 + 1/64` (or `t0 - 1/64` near 1).
        #[arg(long)]
        t1: Option<f64>,
        /// Skip the no-atom sweep.
        #[arg(long)]
        skip_no_atoms: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ClarkReport { .. } => "clark-report",
            Command::Spectrum { .. } => "spectrum",
            Command::Maccluer { .. } => "maccluer",
            Command::KernelLimit { .. } => "kernel-limit",
            Command::Profile => "profile",
            Command::Continuity => "continuity",
            Command::Lemmas { .. } => "lemmas",
        }
    }
}

fn effective_config(common: &Common) -> Result<PathConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path).map_err(CliError::Input)?,
        None => PathConfig::default(),
    };
    if let Some(n) = common.n {
        cfg.n = n;
    }
    if let Some(a) = common.alpha_grid {
        cfg.alpha_grid = a;
    }
    if let Some(g) = common.generation {
        cfg.generation = g;
    }
    if let Some(k) = common.k_max {
        cfg.clark.weak_star.k_max = k;
    }
    if !common.t.is_empty() {
        cfg.t_grid = common.t.clone();
    }
    cfg.validate().map_err(CliError::Input)?;
    Ok(cfg)
}

fn parse_symbol(text: &str, cfg: &PathConfig) -> Result<Symbol, CliError> {
    let spec: SymbolSpec = match text.strip_prefix('@') {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            serde_json::from_str(&raw).map_err(|e| CliError::Usage(format!("{path}: {e}")))?
        }
        None => text.parse().map_err(CliError::Input)?,
    };
    let spec = match spec {
        SymbolSpec::Path { t, .. } => {
            SymbolSpec::Path { t, lambda: CantorMeasure::new(cfg.generation).map_err(CliError::Input)? }
        }
        other => other,
    };
    let phi = spec.build().map_err(CliError::Input)?;
    Ok(phi)
}

fn clark_report(cfg: &PathConfig, symbol: &str, alpha: f64) -> Result<Artifact, CliError> {
    let phi = parse_symbol(symbol, cfg)?;
    let report: ClarkReport = ClarkFamily::new(&phi, cfg.clark)?.report(CirclePoint::from_turns(alpha))?;
    let mut csv = String::from("angle,density\n");
    for (a, d) in report.density_samples.angles.iter().zip(&report.density_samples.values) {
        writeln!(csv, "{a:e},{d:e}").expect("write to string");
    }
    Ok(Artifact::new(&report)?.table("density", csv))
}

fn spectrum(cfg: &PathConfig, symbol: &str, matrix: bool) -> Result<Artifact, CliError> {
    let phi = parse_symbol(symbol, cfg)?;
    let t = truncate(&phi, cfg.n, &cfg.taylor)?;
    let report = singular_values(&t)?;
    let mut artifact = Artifact::new(&report)?.table("spectrum", report.to_csv());
    if matrix {
        artifact = artifact.table("matrix", t.to_csv());
    }
    Ok(artifact)
}

#[derive(Serialize)]
struct MaccluerOutput {
    bound: BoundReport,
    n: usize,
    /// `sigma_max` of the compressed difference.
    difference_norm: f64,
}

fn maccluer(cfg: &PathConfig, phi: &str, psi: &str, alpha: f64, candidates: &[f64]) -> Result<Artifact, CliError> {
    let (phi, psi) = (parse_symbol(phi, cfg)?, parse_symbol(psi, cfg)?);
    let points: Vec<CirclePoint> = candidates.iter().map(|&x| CirclePoint::from_turns(x)).collect();
    let bound_cfg = BoundConfig { atoms: cfg.clark.atoms, ..BoundConfig::default() };
    let bound = maccluer_lower_bound(
        &phi,
        &psi,
        CirclePoint::from_turns(alpha),
        (!points.is_empty()).then_some(points.as_slice()),
        &bound_cfg,
    )?;
    let d = difference_norm(&phi, &psi, cfg.n, &cfg.taylor)?;
    let mut csv = String::from("angle,phi_mass,psi_mass,in_z\n");
    for (z, in_z) in bound.points.iter().map(|z| (z, 1)).chain(bound.excluded.iter().map(|z| (z, 0))) {
        writeln!(csv, "{:e},{:e},{:e},{in_z}", z.location.angle(), z.phi_mass, z.psi_mass).expect("write to string");
    }
    Ok(Artifact::new(MaccluerOutput { bound, n: cfg.n, difference_norm: d })?.table("maccluer", csv))
}

#[allow(clippy::too_many_arguments)]
fn kernel_limit(
    cfg: &PathConfig,
    a: f64,
    b: f64,
    delta: f64,
    kappa: f64,
    lambda: f64,
    symbol: Option<&str>,
    r: f64,
) -> Result<Artifact, CliError> {
    let limit = kernel_integral_limit(a, b, delta, kappa, lambda)?;
    let numeric = match symbol {
        Some(s) => {
            let phi = parse_symbol(s, cfg)?;
            Some(kernel_integral_i(&phi, &KernelParams { delta, kappa, lambda_width: lambda, r, a })?)
        }
        None => None,
    };
    let csv = format!(
        "a,b,delta,kappa,lambda,limit,numeric\n{a:e},{b:e},{delta:e},{kappa:e},{lambda:e},{limit:e},{}\n",
        numeric.map(|v| format!("{v:e}")).unwrap_or_default()
    );
    let result = json!({
        "a": a, "b": b, "delta": delta, "kappa": kappa, "lambda": lambda,
        "value": limit, "numeric": numeric, "r": symbol.map(|_| r),
    });
    Ok(Artifact::new(result)?.table("kernel_limit", csv))
}

fn lemmas(cfg: &PathConfig, t0: f64, t1: Option<f64>, skip_no_atoms: bool) -> Result<Artifact, CliError> {
    let step = 1.0 / 64.0;
    let t = t1.unwrap_or(if t0 + step <= 1.0 { t0 + step } else { t0 - step });
    let (rho, mdiff) = lemma_pair(cfg, t0, t)?;
    let no_atoms = if skip_no_atoms { None } else { Some(check_no_atoms(cfg)?) };
    let mut artifact = Artifact::new(json!({ "no_atoms": no_atoms, "rho": rho, "mdiff": mdiff }))?;
    if let Some(report) = &no_atoms {
        artifact = artifact.table("no_atoms", report.to_csv());
    }
    Ok(artifact.table("rho", rho.to_csv()).table("mdiff", mdiff.to_csv()))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = effective_config(&cli.common)?;
    let command = cli.command.name();
    let artifact = match &cli.command {
        Command::ClarkReport { symbol, alpha } => clark_report(&cfg, symbol, *alpha)?,
        Command::Spectrum { symbol, matrix } => spectrum(&cfg, symbol, *matrix)?,
        Command::Maccluer { phi, psi, alpha, candidates } => maccluer(&cfg, phi, psi, *alpha, candidates)?,
        Command::KernelLimit { a, b, delta, kappa, lambda, symbol, r } => {
            kernel_limit(&cfg, *a, *b, *delta, *kappa, *lambda, symbol.as_deref(), *r)?
        }
        Command::Profile => {
            let report = ess_norm_profile(&cfg)?;
            Artifact::new(&report)?.table("profile", report.to_csv())
        }
        Command::Continuity => {
            let report = continuity_modulus(&cfg)?;
            Artifact::new(&report)?
                .table("continuity", report.to_csv())
                .table("continuity_summary", report.summary_csv())
        }
        Command::Lemmas { t0, t1, skip_no_atoms } => lemmas(&cfg, *t0, *t1, *skip_no_atoms)?,
    };
    let effective = json!({ "command": cli.command, "config": cfg, "format": cli.common.format });
    let meta = Meta::new(command, &effective);
    for path in emit(&meta, &artifact, cli.common.format, cli.common.out.as_deref())? {
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code == 2 {
                eprintln!("{}", CliError::Usage(e.kind().to_string()).record());
            }
            return ExitCode::from(code);
        }
    };
    let level = match cli.common.verbose {
        0 => log::LevelFilter::Error,
        1 => log::LevelFilter::Warn,
        2 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
