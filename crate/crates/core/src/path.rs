//! Experiments along the path `t -> phi_t`: continuity of `t -> C_{phi_t}`,
//! the essential-norm profile, and numerical checks of the estimates behind
//! continuity (no atoms, the hyperbolic shift off `I_0`, and the Clark
//! difference bound).
//!
//! Both distance channels are lower-bound proxies: the compression channel
//! measures `||P_N (C_{phi_s} - C_{phi_t}) P_N||`, the Clark channel measures
//! `sup_alpha |tau_{s, alpha} - tau_{t, alpha}|(T)` through radial
//! approximants. Continuity of the second channel transfers to `L^p` norms on
//! the model space by Riesz-Thorin interpolation; that step is not tested.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::clark::{
    alpha_grid, clark_difference_from, clark_difference_on_set, ClarkConfig, ClarkFamily, RadialSamples,
};
use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_distance_raw, CirclePoint, POISSON_ESTIMATE_CONSTANT};
use crate::hardy::{difference_norm_of, singular_values, truncate, TruncatedComposition};
use crate::measure::{Arc, ArcSet, CantorMeasure, SingularQuadrature};
use crate::symbol::{PathFamily, Symbol, TaylorConfig};

/// Relative threshold below which a singular value counts as zero.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathConfig {
    /// Cantor generation of `lambda`; also the depth of the gap-midpoint
    /// samples used by the lemma checks.
    pub generation: u32,
    /// Sorted, distinct, inside `[0, 1]`.
    pub t_grid: Vec<f64>,
    /// Truncation size of the compression channel.
    pub n: usize,
    pub alpha_grid: usize,
    pub clark: ClarkConfig,
    pub taylor: TaylorConfig,
    pub quadrature: SingularQuadrature,
    /// Largest `|s - t|` paired by the continuity experiment.
    pub max_pair_gap: f64,
    /// Arc length `delta` in turns for the no-atom check.
    pub arc_length: f64,
    /// How many times `delta` is halved when checking monotonicity.
    pub arc_halvings: u32,
    pub arc_centers: usize,
    /// Bound the arc masses must respect at length `delta`.
    pub no_atom_epsilon: f64,
    /// Half-width of `I_0` in turns.
    pub i0_half_width: f64,
    /// Sample points where a boundary modulus exceeds `1 - tol` must agree
    /// within `tol`.
    pub unimodular_tolerance: f64,
    /// Uniform samples on `E` for symbols without a Cantor part.
    pub hypothesis_samples: usize,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig {
            generation: 12,
            t_grid: dyadic_grid(5),
            n: 128,
            alpha_grid: 256,
            clark: ClarkConfig::default(),
            taylor: TaylorConfig::default(),
            quadrature: SingularQuadrature::default(),
            max_pair_gap: 0.25,
            arc_length: 1.0 / 1024.0,
            arc_halvings: 2,
            arc_centers: 4096,
            no_atom_epsilon: 0.1,
            i0_half_width: 1.0 / 16.0,
            unimodular_tolerance: 1e-9,
            hypothesis_samples: 4096,
        }
    }
}

/// `{j / 2^k : 0 <= j <= 2^k}`.
pub fn dyadic_grid(k: u32) -> Vec<f64> {
    let n = 1u64 << k;
    (0..=n).map(|j| j as f64 / n as f64).collect()
}

fn positive(value: f64, name: &str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {value}")))
    }
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        CantorMeasure::new(self.generation)?;
        if self.t_grid.is_empty() {
            return Err(Error::Config("t_grid is empty".into()));
        }
        for &t in &self.t_grid {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Domain { value: t, domain: "[0, 1]" });
            }
        }
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("t_grid must be sorted and distinct".into()));
        }
        for (v, name) in [(self.n, "n"), (self.alpha_grid, "alpha_grid"), (self.arc_centers, "arc_centers")] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
            }
        }
        if self.hypothesis_samples == 0 {
            return Err(Error::InvalidParameter("hypothesis_samples must be at least 1".into()));
        }
        positive(self.max_pair_gap, "max_pair_gap")?;
        positive(self.arc_length, "arc_length")?;
        positive(self.no_atom_epsilon, "no_atom_epsilon")?;
        positive(self.i0_half_width, "i0_half_width")?;
        positive(self.unimodular_tolerance, "unimodular_tolerance")?;
        if self.arc_length > 1.0 {
            return Err(Error::Domain { value: self.arc_length, domain: "(0, 1]" });
        }
        if self.i0_half_width >= 0.5 {
            return Err(Error::Domain { value: self.i0_half_width, domain: "(0, 1/2)" });
        }
        if self.arc_halvings > 30 {
            return Err(Error::InvalidParameter("arc_halvings above 30".into()));
        }
        self.clark.weak_star.validate()?;
        self.clark.radial.validate()?;
        self.taylor.resolve(self.n)?;
        Ok(())
    }

    pub fn family(&self) -> Result<PathFamily> {
        Ok(PathFamily::new(CantorMeasure::new(self.generation)?).with_quadrature(self.quadrature))
    }

    pub fn alphas(&self) -> Vec<CirclePoint> {
        alpha_grid(self.alpha_grid)
    }

    /// `I_0` centered at `e^{2 pi i t0}`.
    pub fn i0(&self, t0: f64) -> Arc {
        Arc::centered(CirclePoint::from_turns(t0), 2.0 * self.i0_half_width)
    }
}

/// Per-`t` data shared by all pairs of the continuity experiment.
pub struct PathDistances {
    ts: Vec<f64>,
    truncations: Vec<TruncatedComposition>,
    samples: Vec<RadialSamples>,
    alphas: Vec<CirclePoint>,
    cfg: PathConfig,
}

impl PathDistances {
    pub fn new(cfg: &PathConfig) -> Result<Self> {
        cfg.validate()?;
        let family = cfg.family()?;
        let mut truncations = Vec::with_capacity(cfg.t_grid.len());
        let mut samples = Vec::with_capacity(cfg.t_grid.len());
        for &t in &cfg.t_grid {
            let phi = family.path_symbol(t)?;
            truncations.push(truncate(&phi, cfg.n, &cfg.taylor)?);
            samples.push(RadialSamples::new(&phi, &cfg.clark.weak_star)?);
        }
        Ok(PathDistances { ts: cfg.t_grid.clone(), truncations, samples, alphas: cfg.alphas(), cfg: cfg.clone() })
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn truncation(&self, i: usize) -> &TruncatedComposition {
        &self.truncations[i]
    }

    /// Both channels for the grid points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> Result<ContinuityRow> {
        let h2 = difference_norm_of(&self.truncations[i], &self.truncations[j])?;
        let m = clark_difference_from(
            &self.samples[i],
            &self.samples[j],
            &ArcSet::full(),
            &self.alphas,
            &self.cfg.clark.weak_star,
        )?;
        Ok(ContinuityRow {
            s: self.ts[i],
            t: self.ts[j],
            gap: (self.ts[j] - self.ts[i]).abs(),
            h2_dist: h2,
            m_dist: m.value,
            m_converged: m.converged,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub s: f64,
    pub t: f64,
    pub gap: f64,
    /// Compression channel.
    pub h2_dist: f64,
    /// Clark channel.
    pub m_dist: f64,
    pub m_converged: bool,
}

/// Largest distances over pairs with `|s - t| <= 2^-k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityScale {
    pub k: u32,
    pub scale: f64,
    pub pairs: usize,
    pub max_h2: f64,
    pub max_m: f64,
}

/// Distances between the first and last grid points and the numerical ranks
/// of their compressions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointContrast {
    pub s: f64,
    pub t: f64,
    pub h2_dist: f64,
    pub m_dist: f64,
    pub rank_s: usize,
    pub rank_t: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub n: usize,
    pub rows: Vec<ContinuityRow>,
    pub summary: Vec<ContinuityScale>,
    pub endpoints: Option<EndpointContrast>,
}

impl ContinuityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,gap,h2_dist,m_dist\n");
        for r in &self.rows {
            writeln!(out, "{:e},{:e},{:e},{:e},{:e}", r.s, r.t, r.gap, r.h2_dist, r.m_dist).expect("write to string");
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("k,scale,pairs,max_h2,max_m\n");
        for s in &self.summary {
            writeln!(out, "{},{:e},{},{:e},{:e}", s.k, s.scale, s.pairs, s.max_h2, s.max_m).expect("write to string");
        }
        out
    }

    pub fn scale(&self, k: u32) -> Option<&ContinuityScale> {
        self.summary.iter().find(|s| s.k == k)
    }
}

fn numerical_rank(t: &TruncatedComposition) -> Result<usize> {
    let s = singular_values(t)?.singular_values;
    let top = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&v| v > RANK_TOLERANCE * top).count())
}

fn summarize(rows: &[ContinuityRow]) -> Vec<ContinuityScale> {
    let mut summary = Vec::new();
    for k in 0..=52 {
        let scale = (-(k as f64)).exp2();
        let within: Vec<&ContinuityRow> =
            rows.iter().filter(|r| r.gap > 0.0 && r.gap <= scale * (1.0 + 1e-9)).collect();
        if within.is_empty() {
            break;
        }
        summary.push(ContinuityScale {
            k,
            scale,
            pairs: within.len(),
            max_h2: within.iter().map(|r| r.h2_dist).fold(0.0, f64::max),
            max_m: within.iter().map(|r| r.m_dist).fold(0.0, f64::max),
        });
    }
    summary
}

/// Every pair of grid points at most `max_pair_gap` apart, plus the two
/// endpoints of the grid.
pub fn continuity_modulus(cfg: &PathConfig) -> Result<ContinuityReport> {
    let d = PathDistances::new(cfg)?;
    let last = d.len() - 1;
    let mut rows = Vec::new();
    let mut endpoint_row = None;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let gap = cfg.t_grid[j] - cfg.t_grid[i];
            let endpoints = i == 0 && j == last;
            if gap <= cfg.max_pair_gap * (1.0 + 1e-9) || endpoints {
                let row = d.distance(i, j)?;
                if endpoints {
                    endpoint_row = Some(row.clone());
                }
                rows.push(row);
            }
        }
    }
    let endpoints = match endpoint_row {
        Some(r) => Some(EndpointContrast {
            s: r.s,
            t: r.t,
            h2_dist: r.h2_dist,
            m_dist: r.m_dist,
            rank_s: numerical_rank(d.truncation(0))?,
            rank_t: numerical_rank(d.truncation(last))?,
        }),
        None => None,
    };
    let summary = summarize(&rows);
    Ok(ContinuityReport { n: cfg.n, rows, summary, endpoints })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssNormRow {
    pub t: f64,
    /// `max_alpha sqrt(tau_{t, alpha}^s(T))`, absent when every base point failed.
    pub estimate: Option<f64>,
    /// `sqrt(lambda(I(0, t)))`.
    pub reference: f64,
    /// Base point (turns) attaining the estimate.
    pub alpha: Option<f64>,
    pub skipped: usize,
    /// Second singular value of the compression; diagnostic only.
    pub sigma_2: f64,
    pub sigma_min: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssNormProfile {
    pub n: usize,
    pub alpha_grid: usize,
    pub rows: Vec<EssNormRow>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl EssNormProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,estimate,reference,alpha,skipped,sigma_2,sigma_min\n");
        for r in &self.rows {
            writeln!(
                out,
                "{:e},{},{:e},{},{},{:e},{:e}",
                r.t,
                opt(r.estimate),
                r.reference,
                opt(r.alpha),
                r.skipped,
                r.sigma_2,
                r.sigma_min
            )
            .expect("write to string");
        }
        out
    }
}

pub fn ess_norm_row(cfg: &PathConfig, family: &PathFamily, t: f64) -> Result<EssNormRow> {
    let phi = family.path_symbol(t)?;
    let reference = family.singular_mass(t)?.sqrt();
    let spectrum = singular_values(&truncate(&phi, cfg.n, &cfg.taylor)?)?.singular_values;
    let sigma_2 = spectrum.get(1).copied().unwrap_or(0.0);
    let sigma_min = spectrum.last().copied().unwrap_or(0.0);
    let estimate = ClarkFamily::new(&phi, cfg.clark).and_then(|f| f.essential_norm(&cfg.alphas()));
    Ok(match estimate {
        Ok(e) => EssNormRow {
            t,
            estimate: Some(e.value),
            reference,
            alpha: Some(e.alpha.turns()),
            skipped: e.skipped.len(),
            sigma_2,
            sigma_min,
            error: None,
        },
        Err(e) => {
            log::warn!("essential norm at t = {t} failed: {e}");
            EssNormRow {
                t,
                estimate: None,
                reference,
                alpha: None,
                skipped: cfg.alpha_grid,
                sigma_2,
                sigma_min,
                error: Some(e.to_string()),
            }
        }
    })
}

pub fn ess_norm_profile(cfg: &PathConfig) -> Result<EssNormProfile> {
    cfg.validate()?;
    let family = cfg.family()?;
    let rows = cfg.t_grid.iter().map(|&t| ess_norm_row(cfg, &family, t)).collect::<Result<Vec<_>>>()?;
    Ok(EssNormProfile { n: cfg.n, alpha_grid: cfg.alpha_grid, rows })
}

/// Largest arc mass at one arc length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoAtomRow {
    pub length: f64,
    pub max_mass: f64,
    pub t: f64,
    /// Base point in turns.
    pub alpha: f64,
    /// Arc center in turns.
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoAtomReport {
    pub epsilon: f64,
    /// Lengths `delta, delta/2, ...`.
    pub rows: Vec<NoAtomRow>,
    /// `(t, alpha)` pairs whose arc masses could not be computed.
    pub skipped: usize,
    pub passes: bool,
    pub nonincreasing: bool,
}

impl NoAtomReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,max_mass,t,alpha,center\n");
        for r in &self.rows {
            writeln!(out, "{:e},{:e},{:e},{:e},{:e}", r.length, r.max_mass, r.t, r.alpha, r.center)
                .expect("write to string");
        }
        out
    }
}

/// Max of `tau_{t, alpha}(I)` over the `(t, alpha)` grid and arcs `I` of
/// length `delta / 2^j` centered on a fixed grid.
pub fn check_no_atoms(cfg: &PathConfig) -> Result<NoAtomReport> {
    cfg.validate()?;
    let family = cfg.family()?;
    let centers: Vec<f64> = (0..cfg.arc_centers).map(|j| j as f64 / cfg.arc_centers as f64).collect();
    let lengths: Vec<f64> = (0..=cfg.arc_halvings).map(|j| cfg.arc_length / (1u64 << j) as f64).collect();
    let mut rows: Vec<NoAtomRow> = lengths
        .iter()
        .map(|&length| NoAtomRow { length, max_mass: f64::NEG_INFINITY, t: 0.0, alpha: 0.0, center: 0.0 })
        .collect();
    let alphas = cfg.alphas();
    let mut skipped = 0;
    for &t in &cfg.t_grid {
        let phi = family.path_symbol(t)?;
        let clark = match ClarkFamily::new(&phi, cfg.clark) {
            Ok(c) => c,
            Err(e) => {
                log::warn!("no boundary profile at t = {t}: {e}");
                skipped += alphas.len();
                continue;
            }
        };
        for &alpha in &alphas {
            match clark.arc_masses_multi(alpha, &centers, &lengths) {
                Ok(all) => {
                    for (row, masses) in rows.iter_mut().zip(&all) {
                        for (&c, &m) in centers.iter().zip(masses) {
                            if m > row.max_mass {
                                *row =
                                    NoAtomRow { length: row.length, max_mass: m, t, alpha: alpha.turns(), center: c };
                            }
                        }
                    }
                }
                Err(e) => {
                    log::warn!("arc masses at t = {t}, alpha = {}: {e}", alpha.turns());
                    skipped += 1;
                }
            }
        }
    }
    let passes = rows[0].max_mass.is_finite() && rows[0].max_mass <= cfg.no_atom_epsilon;
    let nonincreasing = rows.windows(2).all(|w| w[1].max_mass <= w[0].max_mass);
    Ok(NoAtomReport { epsilon: cfg.no_atom_epsilon, rows, skipped, passes, nonincreasing })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoSample {
    /// Sample point in turns.
    pub x: f64,
    pub distance: f64,
    pub bound: f64,
}

/// Hyperbolic distance between `phi_{t0}` and `phi_t` off `I_0`, against the
/// bound implied by `|H(chi_J lambda)| <= (2 / c) lambda(J)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoReport {
    pub t0: f64,
    pub t: f64,
    pub i0: Arc,
    /// Chordal distance from `J` to the complement of `I_0`.
    pub margin: f64,
    /// `lambda(J)`.
    pub lambda_j: f64,
    /// `(2 / c) lambda(J)`.
    pub shift: f64,
    pub max_distance: f64,
    /// Largest per-sample bound; a valid `epsilon` for the difference bound.
    pub bound: f64,
    pub violations: usize,
    pub holds: bool,
    pub samples: Vec<RhoSample>,
}

impl RhoReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,distance,bound\n");
        for s in &self.samples {
            writeln!(out, "{:e},{:e},{:e}", s.x, s.distance, s.bound).expect("write to string");
        }
        out
    }
}

fn chord(a: CirclePoint, b: CirclePoint) -> f64 {
    (a.value() - b.value()).norm()
}

/// `arccosh(1 + B^2 / (2 x (x - B)))`: the farthest a point of real part `x`
/// moves in the hyperbolic metric of the half-plane under a shift of size `B`.
fn shifted_distance(x: f64, shift: f64) -> f64 {
    if shift <= 0.0 {
        return 0.0;
    }
    if shift >= x {
        return f64::INFINITY;
    }
    (1.0 + shift * shift / (2.0 * x * (x - shift))).acosh()
}

pub fn check_lemma_rho(cfg: &PathConfig, t0: f64, t: f64, i0: &Arc) -> Result<RhoReport> {
    cfg.validate()?;
    let family = cfg.family()?;
    let (p0, p) = (CirclePoint::from_turns(t0), CirclePoint::from_turns(t));
    if chord(i0.midpoint(), p0) > 1e-9 {
        return Err(Error::InvalidParameter(format!("I_0 is not centered at t0 = {t0}")));
    }
    if i0.is_full() {
        return Err(Error::Margin("I_0 is the whole circle".into()));
    }
    let margin = [i0.start(), i0.end()].iter().flat_map(|&e| [chord(e, p), chord(e, p0)]).fold(f64::INFINITY, f64::min);
    if !i0.contains(p) || margin <= 0.0 {
        return Err(Error::Margin(format!("e^(2 pi i t) with t = {t} is not interior to I_0")));
    }
    let lambda_j = family.lambda().interval_mass(t0.min(t), t0.max(t));
    let shift = 2.0 * lambda_j / margin;
    let datum0 = family.datum(t0)?;
    let (phi0, phi) = (family.path_symbol(t0)?, family.path_symbol(t)?);
    let mut samples = Vec::new();
    for x in family.lambda().gap_midpoints() {
        let zeta = CirclePoint::from_turns(x);
        if i0.contains(zeta) {
            continue;
        }
        let theta = TAU * x;
        let x0 = datum0.boundary_herglotz(zeta)?.re;
        let distance = hyperbolic_distance_raw(phi0.boundary_value(theta)?, phi.boundary_value(theta)?);
        samples.push(RhoSample { x, distance, bound: shifted_distance(x0, shift) });
    }
    let violations = samples.iter().filter(|s| !(s.distance <= s.bound * (1.0 + 1e-9) + 1e-12)).count();
    Ok(RhoReport {
        t0,
        t,
        i0: *i0,
        margin,
        lambda_j,
        shift,
        max_distance: samples.iter().map(|s| s.distance).fold(0.0, f64::max),
        bound: samples.iter().map(|s| s.bound).fold(0.0, f64::max),
        violations,
        holds: violations == 0,
        samples,
    })
}

/// `sup_alpha |tau_{phi, alpha} - tau_{psi, alpha}|(E)` against
/// `2 (e - 1) epsilon / (1 - |phi(0)|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MDiffReport {
    pub epsilon: f64,
    pub measured: f64,
    pub bound: f64,
    /// `bound - measured`.
    pub margin: f64,
    pub holds: bool,
    pub samples: usize,
    /// Base point (turns) attaining the measured value.
    pub alpha: f64,
    pub converged: bool,
}

impl MDiffReport {
    pub fn to_csv(&self) -> String {
        format!(
            "epsilon,measured,bound,margin,samples,alpha\n{:e},{:e},{:e},{:e},{},{:e}\n",
            self.epsilon, self.measured, self.bound, self.margin, self.samples, self.alpha
        )
    }
}

fn has_cantor_part(phi: &Symbol) -> bool {
    phi.clark_datum().is_some_and(|tau| tau.has_singular_continuous_part())
}

/// Points of `E` (turns) where the hypothesis `rho(phi*, psi*) <= epsilon` is
/// checked: Cantor gap midpoints when either symbol has a Cantor part,
/// uniform cell midpoints otherwise.
fn hypothesis_points(phi: &Symbol, psi: &Symbol, set: &ArcSet, cfg: &PathConfig) -> Result<Vec<f64>> {
    let raw: Vec<f64> = if has_cantor_part(phi) || has_cantor_part(psi) {
        CantorMeasure::new(cfg.generation)?.gap_midpoints()
    } else {
        let m = cfg.hypothesis_samples;
        (0..m).map(|j| (j as f64 + 0.5) / m as f64).collect()
    };
    Ok(raw.into_iter().filter(|&x| set.contains_turns(x)).collect())
}

pub fn check_lemma_mdiff(
    phi: &Symbol,
    psi: &Symbol,
    set: &ArcSet,
    epsilon: f64,
    cfg: &PathConfig,
) -> Result<MDiffReport> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain { value: epsilon, domain: "[0, 1]" });
    }
    if set.is_empty() {
        return Err(Error::InvalidParameter("empty set E".into()));
    }
    let tol = cfg.unimodular_tolerance;
    let points = hypothesis_points(phi, psi, set, cfg)?;
    let mut offending = Vec::new();
    for &x in &points {
        let theta = TAU * x;
        let (u, v) = (phi.boundary_value(theta)?, psi.boundary_value(theta)?);
        let ok = if u.norm().max(v.norm()) > 1.0 - tol {
            (u - v).norm() <= tol
        } else {
            hyperbolic_distance_raw(u, v) <= epsilon * (1.0 + 1e-12) + 1e-15
        };
        if !ok {
            offending.push(theta);
        }
    }
    if let Some(&first_angle) = offending.first() {
        return Err(Error::Hypothesis { count: offending.len(), first_angle });
    }
    let estimate = clark_difference_on_set(phi, psi, set, &cfg.alphas(), &cfg.clark.weak_star)?;
    let bound = 2.0 * POISSON_ESTIMATE_CONSTANT * epsilon / (1.0 - phi.at_zero().norm());
    Ok(MDiffReport {
        epsilon,
        measured: estimate.value,
        bound,
        margin: bound - estimate.value,
        holds: estimate.value <= bound,
        samples: points.len(),
        alpha: estimate.alpha.turns(),
        converged: estimate.converged,
    })
}

/// The shift check on `I_0` followed by the difference bound on its
/// complement, with `epsilon` taken from the shift bound.
pub fn lemma_pair(cfg: &PathConfig, t0: f64, t: f64) -> Result<(RhoReport, MDiffReport)> {
    let i0 = cfg.i0(t0);
    let rho = check_lemma_rho(cfg, t0, t, &i0)?;
    let family = cfg.family()?;
    let set = ArcSet::from_arc(&i0).complement();
    let mdiff = check_lemma_mdiff(&family.path_symbol(t0)?, &family.path_symbol(t)?, &set, rho.bound, cfg)?;
    Ok((rho, mdiff))
}
