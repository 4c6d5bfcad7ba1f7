//! Analytic self-maps of the disc.
//!
//! A [`Symbol`] is either a closed-form catalog entry (zero, constants, the
//! identity, monomials, finite Blaschke products) or the map
//! `phi = (H - 1) / (H + 1)` induced by the Herglotz integral `H` of a
//! positive measure, whose Clark measure at 1 is that measure.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CirclePoint, DiscPoint};
use crate::measure::{cantor_cdf, Arc, BoundaryMeasure, CantorMeasure, SingularQuadrature};

/// Serializable description of a symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Zero {},
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Identity {},
    Monomial {
        power: u32,
    },
    /// `e^{i rotation} prod (z - a) / (1 - conj(a) z)`.
    Blaschke {
        zeros: Vec<[f64; 2]>,
        #[serde(default)]
        rotation: f64,
    },
    /// The symbol whose Clark measure at 1 is `measure`.
    ClarkDatum {
        measure: BoundaryMeasure,
    },
    /// Member `t` of the path family.
    Path {
        t: f64,
        #[serde(default)]
        lambda: CantorMeasure,
    },
}

impl SymbolSpec {
    pub fn build(&self) -> Result<Symbol> {
        make_standard(self)
    }
}

/// Parses the short forms `zero`, `identity`, `constant:RE[,IM]`,
/// `monomial:K` (or `z^K`), `blaschke:RE,IM;RE,IM[@ROTATION]` and `path:T`.
impl FromStr for SymbolSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (s, None),
        };
        let num = |v: &str| -> Result<f64> {
            v.trim().parse::<f64>().map_err(|_| Error::InvalidParameter(format!("cannot parse number `{v}` in `{s}`")))
        };
        let missing = || Error::InvalidParameter(format!("`{head}` needs a parameter"));
        if let Some(k) = head.strip_prefix("z^") {
            let power = k.parse().map_err(|_| Error::InvalidParameter(format!("bad monomial power in `{s}`")))?;
            return Ok(SymbolSpec::Monomial { power });
        }
        match head {
            "zero" => Ok(SymbolSpec::Zero {}),
            "identity" | "z" => Ok(SymbolSpec::Identity {}),
            "constant" => {
                let r = rest.ok_or_else(missing)?;
                let (re, im) = match r.split_once(',') {
                    Some((a, b)) => (num(a)?, num(b)?),
                    None => (num(r)?, 0.0),
                };
                Ok(SymbolSpec::Constant { re, im })
            }
            "monomial" => {
                let r = rest.ok_or_else(missing)?;
                let power = r.parse().map_err(|_| Error::InvalidParameter(format!("bad monomial power in `{s}`")))?;
                Ok(SymbolSpec::Monomial { power })
            }
            "blaschke" => {
                let r = rest.ok_or_else(missing)?;
                let (zs, rotation) = match r.split_once('@') {
                    Some((z, rot)) => (z, num(rot)?),
                    None => (r, 0.0),
                };
                let zeros = zs
                    .split(';')
                    .map(|pair| {
                        let (a, b) = pair.split_once(',').unwrap_or((pair, "0"));
                        Ok([num(a)?, num(b)?])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SymbolSpec::Blaschke { zeros, rotation })
            }
            "path" => Ok(SymbolSpec::Path { t: num(rest.ok_or_else(missing)?)?, lambda: CantorMeasure::default() }),
            _ => Err(Error::InvalidParameter(format!("unknown symbol `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Zero,
    Constant(Complex64),
    Identity,
    Monomial(u32),
    Blaschke { zeros: Vec<Complex64>, unimodular: Complex64 },
    Herglotz(BoundaryMeasure),
}

/// An analytic map of the disc into itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    kind: Kind,
    spec: SymbolSpec,
    at_zero: Complex64,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Builds a symbol from its description, validating parameters.
pub fn make_standard(spec: &SymbolSpec) -> Result<Symbol> {
    match spec {
        SymbolSpec::Zero {} => Ok(Symbol::zero()),
        SymbolSpec::Constant { re, im } => Symbol::constant(Complex64::new(*re, *im)),
        SymbolSpec::Identity {} => Ok(Symbol::identity()),
        SymbolSpec::Monomial { power } => Symbol::monomial(*power),
        SymbolSpec::Blaschke { zeros, rotation } => {
            Symbol::blaschke(zeros.iter().map(|[a, b]| Complex64::new(*a, *b)).collect(), *rotation)
        }
        SymbolSpec::ClarkDatum { measure } => symbol_from_clark_datum(measure.clone()),
        SymbolSpec::Path { t, lambda } => PathFamily::new(*lambda).path_symbol(*t),
    }
}

/// The map `(H - 1) / (H + 1)` where `H` is the Herglotz integral of `tau`.
pub fn symbol_from_clark_datum(tau: BoundaryMeasure) -> Result<Symbol> {
    Symbol::from_clark_datum(tau)
}

impl Symbol {
    pub fn zero() -> Self {
        Symbol { kind: Kind::Zero, spec: SymbolSpec::Zero {}, at_zero: Complex64::new(0.0, 0.0) }
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        if !(c.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("constant {c} must lie in the open disc")));
        }
        if c == Complex64::new(0.0, 0.0) {
            return Ok(Self::zero());
        }
        Ok(Symbol { kind: Kind::Constant(c), spec: SymbolSpec::Constant { re: c.re, im: c.im }, at_zero: c })
    }

    pub fn identity() -> Self {
        Symbol { kind: Kind::Identity, spec: SymbolSpec::Identity {}, at_zero: Complex64::new(0.0, 0.0) }
    }

    /// `z^k` for `k >= 1`.
    pub fn monomial(power: u32) -> Result<Self> {
        match power {
            0 => Err(Error::InvalidParameter("monomial power must be at least 1".into())),
            1 => Ok(Self::identity()),
            k => Ok(Symbol { kind: Kind::Monomial(k), spec: SymbolSpec::Monomial { power: k }, at_zero: 0.0.into() }),
        }
    }

    pub fn blaschke(zeros: Vec<Complex64>, rotation: f64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidParameter("a Blaschke product needs at least one zero".into()));
        }
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidParameter(format!("Blaschke zero {a} must lie in the open disc")));
        }
        let unimodular = Complex64::cis(rotation);
        let at_zero = zeros.iter().fold(unimodular, |acc, a| acc * -a);
        let spec = SymbolSpec::Blaschke { zeros: zeros.iter().map(|a| [a.re, a.im]).collect(), rotation };
        Ok(Symbol { kind: Kind::Blaschke { zeros, unimodular }, spec, at_zero })
    }

    pub fn from_clark_datum(tau: BoundaryMeasure) -> Result<Self> {
        tau.validate()?;
        let h0 = tau.herglotz_integral(DiscPoint::origin())?;
        let at_zero = (h0 - 1.0) / (h0 + 1.0);
        Ok(Symbol { spec: SymbolSpec::ClarkDatum { measure: tau.clone() }, kind: Kind::Herglotz(tau), at_zero })
    }

    fn with_spec(mut self, spec: SymbolSpec) -> Self {
        self.spec = spec;
        self
    }

    pub fn spec(&self) -> &SymbolSpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        match &self.spec {
            SymbolSpec::Zero {} => "zero".into(),
            SymbolSpec::Constant { re, im } if *im == 0.0 => format!("constant:{re}"),
            SymbolSpec::Constant { re, im } => format!("constant:{re},{im}"),
            SymbolSpec::Identity {} => "identity".into(),
            SymbolSpec::Monomial { power } => format!("z^{power}"),
            SymbolSpec::Blaschke { zeros, rotation } => {
                let z: Vec<String> = zeros.iter().map(|[a, b]| format!("{a},{b}")).collect();
                format!("blaschke:{}@{rotation}", z.join(";"))
            }
            SymbolSpec::ClarkDatum { .. } => "clark_datum".into(),
            SymbolSpec::Path { t, .. } => format!("path:{t}"),
        }
    }

    /// `phi(0)`.
    pub fn at_zero(&self) -> Complex64 {
        self.at_zero
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, Kind::Zero | Kind::Constant(_))
    }

    /// The measure whose Herglotz integral induces the symbol, if any.
    pub fn clark_datum(&self) -> Option<&BoundaryMeasure> {
        match &self.kind {
            Kind::Herglotz(tau) => Some(tau),
            _ => None,
        }
    }

    pub fn eval(&self, z: DiscPoint) -> Result<Complex64> {
        self.eval_raw(z.value())
    }

    /// Evaluation without the disc check; `|z| <= 1` is expected and closed
    /// forms are used on the circle.
    pub(crate) fn eval_raw(&self, z: Complex64) -> Result<Complex64> {
        Ok(match &self.kind {
            Kind::Zero => Complex64::new(0.0, 0.0),
            Kind::Constant(c) => *c,
            Kind::Identity => z,
            Kind::Monomial(k) => z.powu(*k),
            Kind::Blaschke { zeros, unimodular } => {
                zeros.iter().fold(*unimodular, |acc, a| acc * (z - a) / (1.0 - a.conj() * z))
            }
            Kind::Herglotz(tau) => {
                let h = tau.herglotz_raw(z)?;
                (h - 1.0) / (h + 1.0)
            }
        })
    }

    /// Circular distance in turns from `e^{i theta}` to the support of the
    /// singular part of the inducing measure (infinite for catalog symbols).
    pub fn singular_support_distance(&self, theta: f64) -> f64 {
        match &self.kind {
            Kind::Herglotz(tau) => tau.singular_support_distance(CirclePoint::from_angle(theta)),
            _ => f64::INFINITY,
        }
    }

    /// Nontangential boundary value `phi*(e^{i theta})`.
    ///
    /// Catalog symbols use their closed forms. Herglotz symbols use the
    /// boundary Herglotz value when the inducing measure admits one, and the
    /// radial schedule otherwise.
    pub fn boundary_value(&self, theta: f64) -> Result<Complex64> {
        self.boundary_value_with(theta, &RadialSchedule::default())
    }

    pub fn boundary_value_with(&self, theta: f64, schedule: &RadialSchedule) -> Result<Complex64> {
        match &self.kind {
            Kind::Herglotz(tau) => {
                if tau.has_boundary_formula() {
                    let h = tau.boundary_herglotz(CirclePoint::from_angle(theta))?;
                    Ok(herglotz_to_disc(h))
                } else {
                    self.boundary_value_radial(theta, schedule)
                }
            }
            _ => self.eval_raw(Complex64::cis(theta)),
        }
    }

    /// Radial limit along `r_k = 1 - 2^-k` with Richardson extrapolation of
    /// the last pair, assuming an error linear in `1 - r`.
    pub fn boundary_value_radial(&self, theta: f64, schedule: &RadialSchedule) -> Result<Complex64> {
        schedule.validate()?;
        let zeta = Complex64::cis(theta);
        let mut prev = self.eval_raw(zeta * schedule.radius(schedule.k_min))?;
        let mut change = f64::INFINITY;
        for k in schedule.k_min + 1..=schedule.k_max {
            let cur = self.eval_raw(zeta * schedule.radius(k))?;
            change = (cur - prev).norm();
            if change < schedule.tolerance {
                let w = 2.0 * cur - prev;
                return Ok(if w.norm() > 1.0 { w / w.norm() } else { w });
            }
            prev = cur;
        }
        Err(Error::NonConvergence { what: "radial boundary limit", last_change: change })
    }

    /// `phi(r e^{2 pi i m / M})` for `m = 0..M`.
    pub fn circle_samples(&self, samples: usize, radius: f64) -> Result<Vec<Complex64>> {
        (0..samples).map(|m| self.eval_raw(Complex64::from_polar(radius, TAU * m as f64 / samples as f64))).collect()
    }

    /// Taylor coefficients `c_0..c_{n-1}` from equispaced samples on the
    /// circle of radius `r`.
    pub fn taylor_coefficients(&self, n: usize, cfg: &TaylorConfig) -> Result<Vec<Complex64>> {
        let (samples, radius) = cfg.resolve(n)?;
        let values = self.circle_samples(samples, radius)?;
        let mut planner = FftPlanner::new();
        Ok(coefficients_from_samples(&mut planner, values, radius, n))
    }
}

/// Coefficients `c_j = (1/M) sum_m f_m e^{-2 pi i j m / M} / r^j`, `j < n`.
pub fn coefficients_from_samples(
    planner: &mut FftPlanner<f64>,
    mut samples: Vec<Complex64>,
    radius: f64,
    n: usize,
) -> Vec<Complex64> {
    let m = samples.len();
    planner.plan_fft_forward(m).process(&mut samples);
    let mut scale = 1.0 / m as f64;
    let mut out = Vec::with_capacity(n);
    for c in samples.into_iter().take(n) {
        out.push(c * scale);
        scale /= radius;
    }
    out.resize(n, Complex64::new(0.0, 0.0));
    out
}

fn herglotz_to_disc(h: Complex64) -> Complex64 {
    if h.is_infinite() {
        return Complex64::new(1.0, 0.0);
    }
    (h - 1.0) / (h + 1.0)
}

/// Radii `r_k = 1 - 2^-k`, `k_min <= k <= k_max`, for radial limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadialSchedule {
    pub k_min: u32,
    pub k_max: u32,
    pub tolerance: f64,
}

impl Default for RadialSchedule {
    fn default() -> Self {
        RadialSchedule { k_min: 4, k_max: 40, tolerance: 1e-10 }
    }
}

impl RadialSchedule {
    pub fn radius(&self, k: u32) -> f64 {
        1.0 - (-(k as f64)).exp2()
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_min == 0 || self.k_min >= self.k_max || self.k_max > 52 || !(self.tolerance > 0.0) {
            return Err(Error::Config(format!(
                "radial schedule needs 1 <= k_min < k_max <= 52 and a positive tolerance, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Sampling for Taylor coefficients: `M` points on radius `r`. Unset fields
/// default to `M = 4N` and `r = 1 - 1/(2N)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TaylorConfig {
    pub samples: Option<usize>,
    pub radius: Option<f64>,
}

impl TaylorConfig {
    pub fn resolve(&self, n: usize) -> Result<(usize, f64)> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one coefficient".into()));
        }
        let samples = self.samples.unwrap_or(4 * n);
        if samples < 2 * n {
            return Err(Error::Sampling { samples, required: 2 * n });
        }
        let radius = self.radius.unwrap_or(1.0 - 0.5 / n as f64);
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::Config(format!("sampling radius {radius} must lie in (0, 1]")));
        }
        Ok((samples, radius))
    }
}

/// The family `t -> phi_t` whose Clark measure at 1 is
/// `m + chi_{I(0, t)} lambda`, with `lambda` the Cantor measure.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathFamily {
    lambda: CantorMeasure,
    quadrature: SingularQuadrature,
}

impl PathFamily {
    pub fn new(lambda: CantorMeasure) -> Self {
        PathFamily { lambda, quadrature: SingularQuadrature::default() }
    }

    pub fn with_quadrature(mut self, quadrature: SingularQuadrature) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn lambda(&self) -> CantorMeasure {
        self.lambda
    }

    fn check(t: f64) -> Result<()> {
        if (0.0..=1.0).contains(&t) {
            Ok(())
        } else {
            Err(Error::Domain { value: t, domain: "[0, 1]" })
        }
    }

    /// `m + chi_{I(0, t)} lambda`.
    pub fn datum(&self, t: f64) -> Result<BoundaryMeasure> {
        Self::check(t)?;
        let part = BoundaryMeasure::cantor(self.lambda).restrict_arc(&Arc::initial(t));
        Ok(BoundaryMeasure::lebesgue().add(&part).with_quadrature(self.quadrature))
    }

    /// `lambda(I(0, t))`, the singular mass of the Clark measure at 1.
    pub fn singular_mass(&self, t: f64) -> Result<f64> {
        Self::check(t)?;
        cantor_cdf(t)
    }

    pub fn path_symbol(&self, t: f64) -> Result<Symbol> {
        let spec = SymbolSpec::Path { t, lambda: self.lambda };
        Ok(Symbol::from_clark_datum(self.datum(t)?)?.with_spec(spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_disc(rng: &mut ChaCha8Rng) -> Complex64 {
        let r = rng.gen::<f64>().sqrt() * 0.999;
        Complex64::from_polar(r, rng.gen_range(0.0..TAU))
    }

    #[test]
    fn catalog_examples() {
        let half_i = DiscPoint::from_re_im(0.0, 0.5).unwrap();
        let sq = Symbol::monomial(2).unwrap();
        assert!((sq.eval(half_i).unwrap() - Complex64::new(-0.25, 0.0)).norm() < 1e-15);
        assert_eq!(Symbol::constant(Complex64::new(0.0, 0.0)).unwrap(), Symbol::zero());
        let b = Symbol::blaschke(vec![Complex64::new(0.0, 0.0)], 0.7).unwrap();
        let z = Complex64::new(0.2, -0.4);
        let ratio = b.eval_raw(z).unwrap() / z;
        assert!((ratio.norm() - 1.0).abs() < 1e-15);
        assert!(Symbol::constant(Complex64::new(1.0, 0.0)).is_err());
        assert!(Symbol::monomial(0).is_err());
    }

    #[test]
    fn clark_datum_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let zero = symbol_from_clark_datum(BoundaryMeasure::lebesgue()).unwrap();
        let ident = symbol_from_clark_datum(BoundaryMeasure::dirac(CirclePoint::one())).unwrap();
        let third = symbol_from_clark_datum(BoundaryMeasure::constant_density(2.0)).unwrap();
        for _ in 0..50 {
            let z = random_disc(&mut rng);
            assert_eq!(zero.eval_raw(z).unwrap(), Complex64::new(0.0, 0.0));
            assert!((ident.eval_raw(z).unwrap() - z).norm() < 1e-12);
            assert!((third.eval_raw(z).unwrap() - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn path_family_values_at_origin() {
        let family = PathFamily::default();
        let phi0 = family.path_symbol(0.0).unwrap();
        assert_eq!(phi0.eval_raw(Complex64::new(0.3, 0.8)).unwrap(), Complex64::new(0.0, 0.0));
        assert!((family.path_symbol(1.0).unwrap().at_zero() - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((family.path_symbol(1.0 / 3.0).unwrap().at_zero() - Complex64::new(0.2, 0.0)).norm() < 1e-10);
        assert!(family.path_symbol(1.5).is_err());
    }

    #[test]
    fn path_boundary_values_lie_on_horocycle() {
        let phi = PathFamily::default().path_symbol(0.7).unwrap();
        for x in [0.5, 1.5 / 9.0, 0.8, 0.95] {
            let w = phi.boundary_value(TAU * x).unwrap();
            let h = (1.0 + w) / (1.0 - w);
            assert!((h.re - 1.0).abs() < 1e-9, "x = {x}: {h}");
            assert!(((w - 0.5).norm() - 0.5).abs() < 1e-9);
        }
        assert!(matches!(phi.boundary_value(TAU * 0.25), Err(Error::SupportProximity { .. })));
    }

    #[test]
    fn radial_fallback_matches_closed_form() {
        let phi = Symbol::blaschke(vec![Complex64::new(0.3, 0.4), Complex64::new(-0.5, 0.1)], 1.0).unwrap();
        for theta in [0.1, 2.0, 4.5] {
            let exact = phi.boundary_value(theta).unwrap();
            let radial = phi.boundary_value_radial(theta, &RadialSchedule::default()).unwrap();
            assert!((exact - radial).norm() < 1e-9);
        }
    }

    #[test]
    fn taylor_examples() {
        let cfg = TaylorConfig::default();
        let n = 16;
        let id = Symbol::identity().taylor_coefficients(n, &cfg).unwrap();
        let sq = Symbol::monomial(2).unwrap().taylor_coefficients(n, &cfg).unwrap();
        let c = Complex64::new(0.3, -0.2);
        let cs = Symbol::constant(c).unwrap().taylor_coefficients(n, &cfg).unwrap();
        for j in 0..n {
            let e = |k: usize| if j == k { 1.0 } else { 0.0 };
            assert!((id[j] - e(1)).norm() < 1e-13);
            assert!((sq[j] - e(2)).norm() < 1e-13);
            assert!((cs[j] - c * e(0)).norm() < 1e-13);
        }
        let bad = TaylorConfig { samples: Some(20), radius: None };
        assert!(matches!(Symbol::identity().taylor_coefficients(n, &bad), Err(Error::Sampling { .. })));
    }

    #[test]
    fn herglotz_taylor_sums_back_to_values() {
        let tau = BoundaryMeasure::lebesgue().add(&BoundaryMeasure::atom(CirclePoint::from_angle(1.0), 0.5));
        let phi = symbol_from_clark_datum(tau).unwrap();
        let n = 12;
        let coeffs = phi.taylor_coefficients(n, &TaylorConfig { samples: Some(256), radius: Some(0.5) }).unwrap();
        let z = Complex64::new(0.1, 0.2);
        let series: Complex64 = coeffs.iter().enumerate().map(|(j, c)| c * z.powu(j as u32)).sum();
        assert!((series - phi.eval_raw(z).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn spec_parsing_and_json() {
        assert_eq!("identity".parse::<SymbolSpec>().unwrap(), SymbolSpec::Identity {});
        assert_eq!("z^3".parse::<SymbolSpec>().unwrap(), SymbolSpec::Monomial { power: 3 });
        assert_eq!("constant:0.5".parse::<SymbolSpec>().unwrap(), SymbolSpec::Constant { re: 0.5, im: 0.0 });
        let b: SymbolSpec = "blaschke:0.1,0.2;-0.3,0@1.5".parse().unwrap();
        assert_eq!(b, SymbolSpec::Blaschke { zeros: vec![[0.1, 0.2], [-0.3, 0.0]], rotation: 1.5 });
        assert!("bogus".parse::<SymbolSpec>().is_err());
        let json = serde_json::to_string(&SymbolSpec::Path { t: 0.5, lambda: CantorMeasure::default() }).unwrap();
        let back: SymbolSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap().name(), "path:0.5");
        assert!(serde_json::from_str::<SymbolSpec>(r#"{"kind": "identity", "extra": 1}"#).is_err());
    }
}
