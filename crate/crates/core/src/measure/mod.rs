//! Positive finite measures on the unit circle.
//!
//! A [`BoundaryMeasure`] is a finite sum of atoms, absolutely continuous
//! terms (a constant density on a finite union of arcs, or a tabulated
//! quadrature rule) and restricted Cantor parts. Every operation keeps that
//! form, so arc masses, Poisson integrals and Herglotz integrals are
//! available in closed form or through the certified cell quadrature.

mod arc;
mod cantor;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use arc::{Arc, ArcSet};
pub use cantor::{cantor_cdf, CantorMeasure, CantorPart, CellSum, QUADRATURE_MAX_DEPTH};

use crate::error::{Error, Result};
use crate::geometry::{CirclePoint, DiscPoint};

/// Quadrature settings for singular-continuous parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SingularQuadrature {
    /// Target accuracy of every measure integral.
    pub tolerance: f64,
    /// Cells are accepted once (angular radius) <= ratio * (clearance).
    pub cell_ratio: f64,
    pub max_depth: u32,
    /// Boundary evaluations closer than this (in turns) to the singular
    /// support are refused.
    pub support_floor: f64,
}

impl Default for SingularQuadrature {
    fn default() -> Self {
        SingularQuadrature { tolerance: 1e-8, cell_ratio: 0.02, max_depth: QUADRATURE_MAX_DEPTH, support_floor: 1e-13 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    #[serde(rename = "angle")]
    pub point: CirclePoint,
    pub mass: f64,
}

/// One absolutely continuous term of a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityTerm {
    /// `value * chi_window dm`.
    Constant {
        value: f64,
        #[serde(default = "ArcSet::full")]
        window: ArcSet,
    },
    /// A density known only at quadrature nodes: the measure
    /// `sum_j weights[j] * values[j] * delta_{angles[j]}` is used as its
    /// discretization for every integral.
    Tabulated { angles: Vec<f64>, weights: Vec<f64>, values: Vec<f64> },
}

impl DensityTerm {
    fn total_mass(&self) -> f64 {
        match self {
            DensityTerm::Constant { value, window } => value * window.length(),
            DensityTerm::Tabulated { weights, values, .. } => weights.iter().zip(values).map(|(w, v)| w * v).sum(),
        }
    }

    fn set_mass(&self, set: &ArcSet) -> f64 {
        match self {
            DensityTerm::Constant { value, window } => value * window.intersect(set).length(),
            DensityTerm::Tabulated { angles, weights, values } => angles
                .iter()
                .zip(weights.iter().zip(values))
                .filter(|(a, _)| set.contains(CirclePoint::from_angle(**a)))
                .map(|(_, (w, v))| w * v)
                .sum(),
        }
    }

    fn restrict(&self, set: &ArcSet) -> DensityTerm {
        match self {
            DensityTerm::Constant { value, window } => {
                DensityTerm::Constant { value: *value, window: window.intersect(set) }
            }
            DensityTerm::Tabulated { angles, weights, values } => {
                let keep: Vec<usize> =
                    (0..angles.len()).filter(|&j| set.contains(CirclePoint::from_angle(angles[j]))).collect();
                DensityTerm::Tabulated {
                    angles: keep.iter().map(|&j| angles[j]).collect(),
                    weights: keep.iter().map(|&j| weights[j]).collect(),
                    values: keep.iter().map(|&j| values[j]).collect(),
                }
            }
        }
    }

    fn scaled(&self, factor: f64) -> DensityTerm {
        match self {
            DensityTerm::Constant { value, window } => {
                DensityTerm::Constant { value: value * factor, window: window.clone() }
            }
            DensityTerm::Tabulated { angles, weights, values } => DensityTerm::Tabulated {
                angles: angles.clone(),
                weights: weights.clone(),
                values: values.iter().map(|v| v * factor).collect(),
            },
        }
    }

    /// Value of the density at `p` (tabulated terms: nearest node).
    fn density_at(&self, p: CirclePoint) -> f64 {
        match self {
            DensityTerm::Constant { value, window } => {
                if window.contains(p) {
                    *value
                } else {
                    0.0
                }
            }
            DensityTerm::Tabulated { angles, values, .. } => angles
                .iter()
                .zip(values)
                .min_by(|a, b| angular_gap(*a.0, p.angle()).total_cmp(&angular_gap(*b.0, p.angle())))
                .map_or(0.0, |(_, v)| *v),
        }
    }

    fn herglotz(&self, z: Complex64) -> Complex64 {
        match self {
            DensityTerm::Constant { value, window } => {
                if window.is_full() {
                    return Complex64::new(*value, 0.0);
                }
                window.intervals().iter().map(|&(lo, hi)| arc_herglotz(lo, hi, z)).sum::<Complex64>() * *value
            }
            DensityTerm::Tabulated { angles, weights, values } => angles
                .iter()
                .zip(weights.iter().zip(values))
                .map(|(a, (w, v))| {
                    let zeta = Complex64::cis(*a);
                    (zeta + z) / (zeta - z) * (w * v)
                })
                .sum(),
        }
    }

    fn poisson(&self, z: Complex64) -> f64 {
        match self {
            DensityTerm::Constant { value, window } => {
                if window.is_full() {
                    return *value;
                }
                value * window.intervals().iter().map(|&(lo, hi)| arc_harmonic_measure(lo, hi, z)).sum::<f64>()
            }
            DensityTerm::Tabulated { angles, weights, values } => {
                let s = 1.0 - z.norm_sqr();
                angles
                    .iter()
                    .zip(weights.iter().zip(values))
                    .map(|(a, (w, v))| w * v * s / (Complex64::cis(*a) - z).norm_sqr())
                    .sum()
            }
        }
    }

    fn boundary_herglotz(&self, p: CirclePoint) -> Result<Complex64> {
        match self {
            DensityTerm::Constant { value, window } => {
                if window.is_full() {
                    return Ok(Complex64::new(*value, 0.0));
                }
                let x = p.turns();
                let zeta = p.value();
                let mut h = Complex64::new(0.0, 0.0);
                for &(lo, hi) in window.intervals() {
                    let (a, b) = (Complex64::cis(TAU * lo), Complex64::cis(TAU * hi));
                    let (da, db) = ((a - zeta).norm(), (b - zeta).norm());
                    if da < 1e-15 || db < 1e-15 {
                        return Err(Error::SupportProximity { angle: p.angle(), distance: 0.0 });
                    }
                    let inside = lo < x && x < hi;
                    h += Complex64::new(if inside { 1.0 } else { 0.0 }, -(db / da).ln() / PI);
                }
                Ok(h * *value)
            }
            DensityTerm::Tabulated { .. } => {
                Err(Error::InvalidParameter("tabulated densities have no boundary Herglotz values".into()))
            }
        }
    }
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Increase of `arg(zeta - z)` as `zeta` runs counterclockwise over the arc
/// `[lo, hi]` (turns). Lies in `[0, 2pi]` because `arg(zeta - z)` is
/// monotone for `z` inside the disc.
fn subtended_angle(lo: f64, hi: f64, z: Complex64) -> (f64, f64) {
    if hi - lo >= 1.0 {
        return (TAU, 0.0);
    }
    let a = Complex64::cis(TAU * lo) - z;
    let b = Complex64::cis(TAU * hi) - z;
    let ratio = b / a;
    let mut delta = ratio.arg();
    if delta < 0.0 {
        delta += TAU;
    }
    if hi > lo && delta == 0.0 && (hi - lo) > 0.5 {
        delta = TAU;
    }
    (delta, ratio.norm().ln())
}

/// Harmonic measure of the arc `[lo, hi]` at `z`: `Delta / pi - length`.
fn arc_harmonic_measure(lo: f64, hi: f64, z: Complex64) -> f64 {
    let (delta, _) = subtended_angle(lo, hi, z);
    (delta / PI - (hi - lo)).max(0.0)
}

/// `∫_{[lo, hi]} (zeta + z) / (zeta - z) dm(zeta)` in closed form.
fn arc_herglotz(lo: f64, hi: f64, z: Complex64) -> Complex64 {
    let (delta, log_ratio) = subtended_angle(lo, hi, z);
    Complex64::new(delta / PI - (hi - lo), -log_ratio / PI)
}

/// Positive finite Borel measure on the circle.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryMeasure {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    density: Vec<DensityTerm>,
    #[serde(default)]
    singular: Vec<CantorPart>,
    #[serde(default)]
    quadrature: SingularQuadrature,
}

impl BoundaryMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Normalized Lebesgue measure `m`.
    pub fn lebesgue() -> Self {
        Self::constant_density(1.0)
    }

    pub fn constant_density(value: f64) -> Self {
        BoundaryMeasure { density: vec![DensityTerm::Constant { value, window: ArcSet::full() }], ..Self::default() }
    }

    pub fn dirac(point: CirclePoint) -> Self {
        Self::atom(point, 1.0)
    }

    pub fn atom(point: CirclePoint, mass: f64) -> Self {
        BoundaryMeasure { atoms: vec![Atom { point, mass }], ..Self::default() }
    }

    pub fn atoms_from(atoms: impl IntoIterator<Item = (CirclePoint, f64)>) -> Self {
        BoundaryMeasure {
            atoms: atoms.into_iter().map(|(point, mass)| Atom { point, mass }).collect(),
            ..Self::default()
        }
    }

    /// The Cantor measure on the whole circle (total mass 1).
    pub fn cantor(measure: CantorMeasure) -> Self {
        BoundaryMeasure { singular: vec![CantorPart::new(1.0, ArcSet::full(), measure)], ..Self::default() }
    }

    pub fn tabulated(angles: Vec<f64>, weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if angles.len() != weights.len() || angles.len() != values.len() {
            return Err(Error::InvalidParameter("tabulated density arrays differ in length".into()));
        }
        Ok(BoundaryMeasure { density: vec![DensityTerm::Tabulated { angles, weights, values }], ..Self::default() })
    }

    pub fn with_quadrature(mut self, quadrature: SingularQuadrature) -> Self {
        self.quadrature = quadrature;
        self
    }

    /// Checks nonnegativity and finiteness of every component.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Error::InvalidParameter(format!("{what} {v} must be finite and nonnegative"));
        for a in &self.atoms {
            if !(a.mass.is_finite() && a.mass >= 0.0) {
                return Err(bad("atom mass", a.mass));
            }
        }
        for d in &self.density {
            match d {
                DensityTerm::Constant { value, .. } if !(value.is_finite() && *value >= 0.0) => {
                    return Err(bad("density", *value))
                }
                DensityTerm::Tabulated { angles, weights, values } => {
                    if angles.len() != weights.len() || angles.len() != values.len() {
                        return Err(Error::InvalidParameter("tabulated density arrays differ in length".into()));
                    }
                    if let Some(v) = weights.iter().chain(values).find(|v| !(v.is_finite() && **v >= 0.0)) {
                        return Err(bad("tabulated entry", *v));
                    }
                }
                _ => {}
            }
        }
        for s in &self.singular {
            if !(s.weight().is_finite() && s.weight() >= 0.0) {
                return Err(bad("singular weight", s.weight()));
            }
        }
        Ok(())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density_terms(&self) -> &[DensityTerm] {
        &self.density
    }

    pub fn singular_parts(&self) -> &[CantorPart] {
        &self.singular
    }

    pub fn quadrature(&self) -> SingularQuadrature {
        self.quadrature
    }

    /// Whether boundary Herglotz values are available in closed form
    /// (tabulated densities only have interior values).
    pub fn has_boundary_formula(&self) -> bool {
        self.density.iter().all(|d| matches!(d, DensityTerm::Constant { .. }))
    }

    pub fn has_singular_continuous_part(&self) -> bool {
        self.singular.iter().any(|s| s.total_mass() > 0.0)
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn ac_mass(&self) -> f64 {
        self.density.iter().map(DensityTerm::total_mass).sum()
    }

    pub fn singular_continuous_mass(&self) -> f64 {
        self.singular.iter().map(CantorPart::total_mass).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.ac_mass() + self.singular_continuous_mass()
    }

    /// Density of the absolutely continuous part at `p`.
    pub fn density_at(&self, p: CirclePoint) -> f64 {
        self.density.iter().map(|d| d.density_at(p)).sum()
    }

    pub fn arc_mass(&self, arc: &Arc) -> f64 {
        self.set_mass(&ArcSet::from_arc(arc))
    }

    /// Mass of a finite union of closed arcs.
    pub fn set_mass(&self, set: &ArcSet) -> f64 {
        let atoms: f64 = self.atoms.iter().filter(|a| set.contains(a.point)).map(|a| a.mass).sum();
        let ac: f64 = self.density.iter().map(|d| d.set_mass(set)).sum();
        let sc: f64 = self.singular.iter().map(|s| s.set_mass(set)).sum();
        atoms + ac + sc
    }

    /// The measure `B -> mu(set ∩ B)`.
    pub fn restrict(&self, set: &ArcSet) -> BoundaryMeasure {
        BoundaryMeasure {
            atoms: self.atoms.iter().filter(|a| set.contains(a.point)).copied().collect(),
            density: self.density.iter().map(|d| d.restrict(set)).filter(|d| d.total_mass() > 0.0).collect(),
            singular: self.singular.iter().map(|s| s.restrict(set)).filter(|s| s.total_mass() > 0.0).collect(),
            quadrature: self.quadrature,
        }
    }

    pub fn restrict_arc(&self, arc: &Arc) -> BoundaryMeasure {
        self.restrict(&ArcSet::from_arc(arc))
    }

    /// Componentwise sum; the quadrature settings of `self` are kept.
    pub fn add(&self, other: &BoundaryMeasure) -> BoundaryMeasure {
        let mut out = self.clone();
        out.atoms.extend(other.atoms.iter().copied());
        out.density.extend(other.density.iter().cloned());
        out.singular.extend(other.singular.iter().cloned());
        out.simplify();
        out
    }

    pub fn scaled(&self, factor: f64) -> BoundaryMeasure {
        let mut out = BoundaryMeasure {
            atoms: self.atoms.iter().map(|a| Atom { point: a.point, mass: a.mass * factor }).collect(),
            density: self.density.iter().map(|d| d.scaled(factor)).collect(),
            singular: self.singular.iter().map(|s| s.scaled(factor)).collect(),
            quadrature: self.quadrature,
        };
        out.simplify();
        out
    }

    /// Merges full-circle constant densities and coincident atoms.
    fn simplify(&mut self) {
        let mut constant = 0.0;
        let mut seen_constant = false;
        self.density.retain(|d| match d {
            DensityTerm::Constant { value, window } if window.is_full() => {
                constant += value;
                seen_constant = true;
                false
            }
            _ => true,
        });
        if seen_constant {
            self.density.insert(0, DensityTerm::Constant { value: constant, window: ArcSet::full() });
        }
        let mut merged: Vec<Atom> = Vec::with_capacity(self.atoms.len());
        for a in self.atoms.drain(..) {
            match merged.iter_mut().find(|b| angular_gap(b.point.angle(), a.point.angle()) < 1e-15) {
                Some(b) => b.mass += a.mass,
                None => merged.push(a),
            }
        }
        self.atoms = merged;
        self.atoms.retain(|a| a.mass > 0.0);
    }

    fn singular_sum<T, K>(&self, target: Complex64, mut kernel: K) -> Result<T>
    where
        T: Copy + Default + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
        K: FnMut(Complex64) -> T,
    {
        let q = self.quadrature;
        let mut total = T::default();
        for part in &self.singular {
            let s = part.integrate(target, q.cell_ratio, q.max_depth, &mut kernel);
            if s.unresolved_mass > q.tolerance {
                return Err(Error::Resolution { requested: q.tolerance, achieved: s.unresolved_mass });
            }
            total += s.value;
        }
        Ok(total)
    }

    /// `∫ P_z dmu`.
    pub fn poisson_integral(&self, z: DiscPoint) -> Result<f64> {
        let z = z.value();
        let s = 1.0 - z.norm_sqr();
        let atoms: f64 = self.atoms.iter().map(|a| a.mass * s / (a.point.value() - z).norm_sqr()).sum();
        let ac: f64 = self.density.iter().map(|d| d.poisson(z)).sum();
        let sc: f64 = self.singular_sum(z, |zeta| s / (zeta - z).norm_sqr())?;
        Ok(atoms + ac + sc)
    }

    /// `∫ (zeta + z) / (zeta - z) dmu(zeta)`.
    pub fn herglotz_integral(&self, z: DiscPoint) -> Result<Complex64> {
        self.herglotz_raw(z.value())
    }

    pub(crate) fn herglotz_raw(&self, z: Complex64) -> Result<Complex64> {
        let atoms: Complex64 = self
            .atoms
            .iter()
            .map(|a| {
                let zeta = a.point.value();
                (zeta + z) / (zeta - z) * a.mass
            })
            .sum();
        let ac: Complex64 = self.density.iter().map(|d| d.herglotz(z)).sum();
        let sc: Complex64 = self.singular_sum(z, |zeta| (zeta + z) / (zeta - z))?;
        Ok(atoms + ac + sc)
    }

    /// Circular distance in turns from `p` to the support of the atoms and
    /// singular-continuous parts.
    pub fn singular_support_distance(&self, p: CirclePoint) -> f64 {
        let x = p.turns();
        let atoms =
            self.atoms.iter().map(|a| angular_gap(a.point.angle(), p.angle()) / TAU).fold(f64::INFINITY, f64::min);
        let sc = self.singular.iter().map(|s| s.support_distance(x)).fold(f64::INFINITY, f64::min);
        atoms.min(sc)
    }

    /// Nontangential boundary value of the Herglotz integral at `p`, which
    /// must lie off the singular support. Off the support the kernel of the
    /// singular parts is purely imaginary, so the real part is the density.
    pub fn boundary_herglotz(&self, p: CirclePoint) -> Result<Complex64> {
        let distance = self.singular_support_distance(p);
        if distance < self.quadrature.support_floor {
            return Err(Error::SupportProximity { angle: p.angle(), distance });
        }
        let zeta = p.value();
        let atoms: Complex64 = self
            .atoms
            .iter()
            .map(|a| {
                let xi = a.point.value();
                Complex64::new(0.0, ((xi + zeta) / (xi - zeta)).im * a.mass)
            })
            .sum();
        let mut ac = Complex64::new(0.0, 0.0);
        for d in &self.density {
            ac += d.boundary_herglotz(p)?;
        }
        let sc: Complex64 = self.singular_sum(zeta, |xi| Complex64::new(0.0, ((xi + zeta) / (xi - zeta)).im))?;
        Ok(atoms + ac + sc)
    }
}
