use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} does not lie in the open unit disc")]
    OutsideDisc(Complex64),

    #[error("point {0} does not lie in the open right half-plane")]
    OutsideHalfPlane(Complex64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("point is within {distance:e} of the boundary pole (floor {floor:e})")]
    Proximity { distance: f64, floor: f64 },

    #[error("angle {angle} is within {distance:e} turns of the singular support")]
    SupportProximity { angle: f64, distance: f64 },

    #[error("Clark density is indeterminate at angle {angle}: boundary value equals the base point")]
    Indeterminate { angle: f64 },

    #[error("quadrature could not reach tolerance {requested:e} (estimated error {achieved:e})")]
    Resolution { requested: f64, achieved: f64 },

    #[error("{what} did not converge (last change {last_change:e})")]
    NonConvergence { what: &'static str, last_change: f64 },

    #[error("sampling needs at least {required} samples, got {samples}")]
    Sampling { samples: usize, required: usize },

    #[error("hypothesis violated at {} sample point(s), first at angle {first_angle}", .count)]
    Hypothesis { count: usize, first_angle: f64 },

    #[error("margin violated: {0}")]
    Margin(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Stable short identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OutsideDisc(_) => "outside_disc",
            Error::OutsideHalfPlane(_) => "outside_half_plane",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Domain { .. } => "domain",
            Error::Proximity { .. } => "proximity",
            Error::SupportProximity { .. } => "support_proximity",
            Error::Indeterminate { .. } => "indeterminate",
            Error::Resolution { .. } => "resolution",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Sampling { .. } => "sampling",
            Error::Hypothesis { .. } => "hypothesis",
            Error::Margin(_) => "margin",
            Error::Config(_) => "config",
        }
    }
}
