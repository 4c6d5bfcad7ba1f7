//! Normalized reproducing kernels, the kernel integral `I(delta, kappa,
//! lambda, r)` and its `r -> 0` limit, and the atom lower bound
//! `||C_phi - C_psi||_e^2 >= tau_{phi, alpha}(Z)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clark::{atom_mass_at, detect_atoms, AtomDetection};
use crate::error::{Error, Result};
use crate::geometry::{CirclePoint, DiscPoint};
use crate::quadrature::adaptive_gauss_legendre;
use crate::symbol::Symbol;

/// Relative tolerance of the kernel integral quadrature.
pub const KERNEL_QUADRATURE_TOLERANCE: f64 = 1e-9;

/// `f_w(z) = sqrt(1 - |w|^2) / (1 - conj(w) z)`, of unit `H^2` norm.
pub fn reproducing_kernel(w: DiscPoint, z: DiscPoint) -> Complex64 {
    kernel_raw(w.value(), z.value())
}

fn kernel_raw(w: Complex64, z: Complex64) -> Complex64 {
    (1.0 - w.norm_sqr()).sqrt() / (1.0 - w.conj() * z)
}

/// Taylor coefficients `sqrt(1 - |w|^2) conj(w)^k`, `k < n`.
pub fn kernel_coefficients(w: DiscPoint, n: usize) -> Vec<Complex64> {
    let w = w.value();
    let scale = (1.0 - w.norm_sqr()).sqrt();
    let mut p = Complex64::new(scale, 0.0);
    (0..n)
        .map(|_| {
            let c = p;
            p *= w.conj();
            c
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelParams {
    pub delta: f64,
    pub kappa: f64,
    pub lambda_width: f64,
    pub r: f64,
    /// Hypothesized mass `tau_{phi, 1}({1})`.
    pub a: f64,
}

impl KernelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.delta, self.kappa, self.lambda_width, self.r, self.a];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter(format!("kernel parameters must be positive: {self:?}")));
        }
        if !(self.r < 1.0 && self.delta * self.r < 1.0) {
            return Err(Error::InvalidParameter(format!("need r < 1 and delta r < 1: {self:?}")));
        }
        Ok(())
    }
}

/// `(1/2pi) ∫ |f_w(phi(z_r(t)))|^2 dt` over `[kappa r a - lambda r, kappa r a + lambda r]`,
/// with `w = (1 - r) e^{i kappa r}` and `z_r(t) = (1 - delta r) e^{it}`.
pub fn kernel_integral_i(phi: &Symbol, p: &KernelParams) -> Result<f64> {
    p.validate()?;
    kernel_integral_multi(phi, CirclePoint::one(), &[(CirclePoint::one(), p.a)], p).map(|m| m.value)
}

/// The kernel integral over intervals centered at `t_k + kappa r a_k` for
/// points `zeta_k = e^{i t_k}` with hypothesized masses `a_k`, with the
/// kernel point rotated to `w = alpha (1 - r) e^{i kappa r}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiKernelIntegral {
    pub value: f64,
    /// Radius actually used; halved from the requested one until the
    /// intervals were disjoint.
    pub r: f64,
}

pub fn kernel_integral_multi(
    phi: &Symbol,
    alpha: CirclePoint,
    points: &[(CirclePoint, f64)],
    p: &KernelParams,
) -> Result<MultiKernelIntegral> {
    p.validate()?;
    if points.is_empty() {
        return Err(Error::InvalidParameter("kernel integral needs at least one point".into()));
    }
    if let Some((_, a)) = points.iter().find(|(_, a)| !(*a > 0.0)) {
        return Err(Error::InvalidParameter(format!("hypothesized atom mass {a} must be positive")));
    }
    let mut r = p.r;
    let intervals = loop {
        let iv: Vec<(f64, f64)> = points
            .iter()
            .map(|(z, a)| {
                let c = z.angle() + p.kappa * r * a;
                (c - p.lambda_width * r, c + p.lambda_width * r)
            })
            .collect();
        if disjoint_on_circle(&iv) {
            break iv;
        }
        r *= 0.5;
        if r < 1e-14 {
            return Err(Error::InvalidParameter("kernel intervals overlap at every radius".into()));
        }
    };
    if r < p.r {
        log::debug!("kernel radius reduced from {} to {r} for disjoint intervals", p.r);
    }
    let w = alpha.value() * Complex64::from_polar(1.0 - r, p.kappa * r);
    let rho = 1.0 - p.delta * r;
    let mut failure = None;
    let mut integrand = |t: f64| match phi.eval_raw(Complex64::from_polar(rho, t)) {
        Ok(v) => kernel_raw(w, v).norm_sqr(),
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let mut value = 0.0;
    for (lo, hi) in intervals {
        value += adaptive_gauss_legendre(&mut integrand, lo, hi, KERNEL_QUADRATURE_TOLERANCE, 40)?.value;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(MultiKernelIntegral { value: value / TAU, r })
}

fn disjoint_on_circle(intervals: &[(f64, f64)]) -> bool {
    if intervals.iter().any(|(lo, hi)| hi - lo >= TAU) {
        return false;
    }
    let mut v: Vec<(f64, f64)> = intervals
        .iter()
        .map(|&(lo, hi)| {
            let s = lo.rem_euclid(TAU);
            (s, s + (hi - lo))
        })
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = v.len();
    (0..n).all(|i| {
        let next = if i + 1 < n { v[i + 1].0 } else { v[0].0 + TAU };
        n == 1 || v[i].1 < next
    })
}

/// `lim_{r -> 0} I = (a/pi) ∫_{-lambda/a}^{lambda/a} du / ((1 + delta/b)^2 + ((1 - a/b) kappa - a u / b)^2)`
/// where `b = tau_{phi, 1}({1})`, via the arctan antiderivative; zero when `b = 0`.
pub fn kernel_integral_limit(a: f64, b: f64, delta: f64, kappa: f64, lambda_width: f64) -> Result<f64> {
    if !(a > 0.0 && delta > 0.0 && lambda_width > 0.0 && kappa >= 0.0 && b >= 0.0) || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kernel limit needs a, delta, lambda > 0 and b, kappa >= 0 (a={a}, b={b}, delta={delta}, kappa={kappa}, lambda={lambda_width})"
        )));
    }
    if b == 0.0 {
        return Ok(0.0);
    }
    let big_a = 1.0 + delta / b;
    let big_b = (1.0 - a / b) * kappa;
    let s = lambda_width / b;
    Ok(b / (PI * big_a) * (((big_b + s) / big_a).atan() - ((big_b - s) / big_a).atan()))
}

/// `c(delta, lambda) = (2/pi) arctan(lambda / (a + delta))`, so that the
/// matched limit equals `a c / (1 + delta/a)`.
pub fn kernel_constant(a: f64, delta: f64, lambda_width: f64) -> f64 {
    2.0 / PI * (lambda_width / (a + delta)).atan()
}

/// A point of `Z` with the masses both Clark measures put there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZPoint {
    pub location: CirclePoint,
    pub phi_mass: f64,
    pub psi_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomSource {
    /// Atoms of `tau_{phi, alpha}` found by grid screening.
    Detected,
    /// Caller-supplied candidate points.
    Candidates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub alpha: CirclePoint,
    pub points: Vec<ZPoint>,
    /// `sqrt(tau_{phi, alpha}(Z))`.
    pub bound: f64,
    pub source: AtomSource,
    /// Atoms of `phi` left out of `Z` because `psi` carries the same mass.
    pub excluded: Vec<ZPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundConfig {
    pub atoms: AtomDetection,
    /// Masses closer than this are treated as equal.
    pub mass_tolerance: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { atoms: AtomDetection::default(), mass_tolerance: 1e-3 }
    }
}

/// `sqrt(tau_{phi, alpha}(Z))` for `Z` the atoms of `tau_{phi, alpha}` whose
/// mass differs from that of `tau_{psi, alpha}` at the same point.
pub fn maccluer_lower_bound(
    phi: &Symbol,
    psi: &Symbol,
    alpha: CirclePoint,
    candidates: Option<&[CirclePoint]>,
    cfg: &BoundConfig,
) -> Result<BoundReport> {
    let (atoms, source) = match candidates {
        Some(points) => {
            let mut v = Vec::with_capacity(points.len());
            for &z in points {
                let m = mass_at(phi, alpha, z, &cfg.atoms)?;
                if m > cfg.atoms.threshold {
                    v.push((z, m));
                }
            }
            (v, AtomSource::Candidates)
        }
        None => {
            let found = detect_atoms(phi, alpha, &cfg.atoms)?;
            (found.into_iter().map(|f| (f.location, f.mass)).collect(), AtomSource::Detected)
        }
    };
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for (location, phi_mass) in atoms {
        if (phi_mass - cfg.atoms.threshold).abs() < 0.1 * cfg.atoms.threshold {
            log::warn!("atom mass {phi_mass} at angle {} is marginal", location.angle());
        }
        let psi_mass = mass_at(psi, alpha, location, &cfg.atoms)?;
        let z = ZPoint { location, phi_mass, psi_mass };
        if (phi_mass - psi_mass).abs() > cfg.mass_tolerance {
            points.push(z);
        } else {
            excluded.push(z);
        }
    }
    let bound = points.iter().map(|z| z.phi_mass).sum::<f64>().sqrt();
    Ok(BoundReport { alpha, points, bound, source, excluded })
}

fn mass_at(phi: &Symbol, alpha: CirclePoint, z: CirclePoint, cfg: &AtomDetection) -> Result<f64> {
    if phi.is_constant() {
        return Ok(0.0);
    }
    atom_mass_at(phi, alpha, z, cfg)
}
