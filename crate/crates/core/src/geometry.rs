//! Geometry of the unit disc and the right half-plane.
//!
//! Angles are radians normalized to `[0, 2pi)`. Arc lengths elsewhere in the
//! crate are normalized so that the full circle has length 1.

use std::f64::consts::{E, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible `|alpha - z|` for the Cayley transform.
pub const PROXIMITY_FLOOR: f64 = 1e-14;

/// Explicit constant `C` in `|P_z(a) - P_w(a)| <= C rho(z, w) P_z(a)`,
/// valid whenever `rho(z, w) <= 1`.
pub const POISSON_ESTIMATE_CONSTANT: f64 = E - 1.0;

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() < 1.0 && z.is_finite() {
            Ok(DiscPoint(z))
        } else {
            Err(Error::OutsideDisc(z))
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub const fn origin() -> Self {
        DiscPoint(Complex64::new(0.0, 0.0))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// A point `e^{i angle}` of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "f64", from = "f64")]
pub struct CirclePoint {
    angle: f64,
}

impl CirclePoint {
    pub fn from_angle(angle: f64) -> Self {
        CirclePoint { angle: normalize_angle(angle) }
    }

    /// The point `e^{2 pi i x}`.
    pub fn from_turns(x: f64) -> Self {
        Self::from_angle(TAU * x)
    }

    /// Projects a nonzero complex number radially onto the circle.
    pub fn from_complex(z: Complex64) -> Self {
        Self::from_angle(z.arg())
    }

    pub const fn one() -> Self {
        CirclePoint { angle: 0.0 }
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.angle
    }

    /// Angle as a fraction of the full turn, in `[0, 1)`.
    #[inline]
    pub fn turns(self) -> f64 {
        self.angle / TAU
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        Complex64::cis(self.angle)
    }
}

impl From<CirclePoint> for f64 {
    fn from(p: CirclePoint) -> f64 {
        p.angle
    }
}

impl From<f64> for CirclePoint {
    fn from(angle: f64) -> Self {
        CirclePoint::from_angle(angle)
    }
}

/// A point of the open right half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(Complex64);

impl HalfPlanePoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.re > 0.0 && z.is_finite() {
            Ok(HalfPlanePoint(z))
        } else {
            Err(Error::OutsideHalfPlane(z))
        }
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// Maps any angle into `[0, 2pi)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// `P_z(zeta) = (1 - |z|^2) / |zeta - z|^2`.
#[inline]
pub fn poisson_kernel(z: DiscPoint, zeta: CirclePoint) -> f64 {
    poisson_kernel_raw(z.value(), zeta.value())
}

#[inline]
pub(crate) fn poisson_kernel_raw(z: Complex64, zeta: Complex64) -> f64 {
    (1.0 - z.norm_sqr()) / (zeta - z).norm_sqr()
}

/// Pseudo-hyperbolic distance `|(z - w) / (1 - conj(z) w)|`.
#[inline]
pub fn pseudo_hyperbolic(z: Complex64, w: Complex64) -> f64 {
    ((z - w) / (1.0 - z.conj() * w)).norm()
}

/// Hyperbolic distance for the metric `2|dz| / (1 - |z|^2)`.
pub fn hyperbolic_distance_disc(z: DiscPoint, w: DiscPoint) -> f64 {
    hyperbolic_distance_raw(z.value(), w.value())
}

pub(crate) fn hyperbolic_distance_raw(z: Complex64, w: Complex64) -> f64 {
    let p = pseudo_hyperbolic(z, w).min(1.0);
    if p >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * p.atanh()
}

/// Hyperbolic distance for the metric `|dz| / Re z` on the right half-plane.
///
/// Evaluated as `2 asinh(|a - b| / (2 sqrt(Re a Re b)))`, which equals
/// `arccosh(1 + |a - b|^2 / (2 Re a Re b))` without the cancellation near 0.
pub fn hyperbolic_distance_halfplane(a: HalfPlanePoint, b: HalfPlanePoint) -> f64 {
    halfplane_distance_raw(a.value(), b.value())
}

pub(crate) fn halfplane_distance_raw(a: Complex64, b: Complex64) -> f64 {
    let s = (a - b).norm() / (2.0 * (a.re * b.re).sqrt());
    2.0 * s.asinh()
}

/// `z' = (alpha + z) / (alpha - z)`, an isometry of the disc onto the
/// right half-plane sending `alpha` to infinity.
pub fn cayley_to_halfplane(alpha: CirclePoint, z: DiscPoint) -> Result<HalfPlanePoint> {
    let a = alpha.value();
    let gap = (a - z.value()).norm();
    if gap < PROXIMITY_FLOOR {
        return Err(Error::Proximity { distance: gap, floor: PROXIMITY_FLOOR });
    }
    // |alpha|^2 - |z|^2 > 0 forces Re z' > 0 up to rounding
    let w = (a + z.value()) / (a - z.value());
    HalfPlanePoint::new(Complex64::new(w.re.max(f64::MIN_POSITIVE), w.im))
}

/// Inverse of [`cayley_to_halfplane`].
pub fn cayley_from_halfplane(alpha: CirclePoint, w: HalfPlanePoint) -> DiscPoint {
    let a = alpha.value();
    let z = a * (w.value() - 1.0) / (w.value() + 1.0);
    // |z| < 1 holds exactly for Re w > 0
    DiscPoint(z)
}

/// Disc automorphism `T_a(z) = (z - a) / (1 - conj(a) z)`.
pub fn disc_automorphism(a: DiscPoint, z: DiscPoint) -> DiscPoint {
    let (a, z) = (a.value(), z.value());
    let w = (z - a) / (1.0 - a.conj() * z);
    if w.norm() < 1.0 {
        DiscPoint(w)
    } else {
        DiscPoint(w / (w.norm() * (1.0 + f64::EPSILON)))
    }
}

/// Point at hyperbolic distance `rho` from `z` in direction `direction`
/// (an angle), obtained by moving `tanh(rho/2) e^{i direction}` by the
/// automorphism that sends 0 to `z`.
pub fn hyperbolic_offset(z: DiscPoint, rho: f64, direction: f64) -> DiscPoint {
    let v = Complex64::from_polar((rho / 2.0).tanh(), direction);
    let zv = z.value();
    let w = (zv + v) / (1.0 + zv.conj() * v);
    if w.norm() < 1.0 {
        DiscPoint(w)
    } else {
        DiscPoint(w / (w.norm() * (1.0 + f64::EPSILON)))
    }
}
