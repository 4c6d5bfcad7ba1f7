//! Numerical laboratory for Aleksandrov-Clark measures and composition
//! operators on the Hardy space `H^2` of the unit disc.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: Poisson kernel, hyperbolic metrics, Cayley transform.
//! * [`quadrature`]: Gauss-Legendre rules and adaptive integration.
//! * [`measure`]: positive measures on the circle (atoms, densities and
//!   restricted Cantor parts) with arc masses, Poisson and Herglotz integrals.
//! * [`symbol`]: analytic self-maps of the disc, including maps built from a
//!   prescribed Clark measure and the path family `t -> phi_t`.
//! * [`clark`]: extraction of Clark measures of a symbol at any base point.
//! * [`hardy`]: finite compressions of `C_phi` in the monomial basis.
//! * [`maccluer`]: reproducing-kernel estimates and the atom lower bound for
//!   essential norms of differences.
//! * [`path`]: experiments along the path family.
//! * [`config`]: JSON experiment configuration.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod clark;
pub mod config;
pub mod error;
pub mod geometry;
pub mod hardy;
pub mod maccluer;
pub mod measure;
pub mod path;
pub mod quadrature;
pub mod symbol;

/// Version of this crate, stamped into experiment outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use geometry::{CirclePoint, DiscPoint, HalfPlanePoint};
pub use measure::{Arc, ArcSet, BoundaryMeasure, CantorMeasure};
pub use num_complex::Complex64;
pub use symbol::{PathFamily, Symbol};
