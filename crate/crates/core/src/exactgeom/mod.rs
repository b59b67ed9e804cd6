//! Exact rational cones and fans.

mod cone;
mod fan;
pub(crate) mod linalg;
mod partition;
mod refine;
mod vector;

pub use cone::{dd_convert, faces, relint_sign, Cone, Sign};
pub use fan::{fan_from_hyperplanes, is_valid_fan, star_fan, Fan, FanCone, StarFan};
pub use partition::{cone_partition, delta_max, LabeledRegion};
pub use refine::stellar_refine_to_simplicial;
pub use vector::{fmt_rational, parse_rational, rat, rat_frac, Functional, Rational, RationalVector};

/// Largest ambient dimension accepted by the cone routines.
pub const MAX_AMBIENT_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {dim} exceeds the cap of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("cone is not pointed (lineality dimension {lineality_dim})")]
    PointednessViolation { lineality_dim: usize },
    #[error("cannot refine cone with rays {rays}: avoid functional vanishes on it")]
    RefinementObstruction { rays: String },
    #[error("cone is not in the fan")]
    NotInFan,
    #[error("delta {delta} exceeds delta_max {delta_max}")]
    DeltaTooLarge { delta: String, delta_max: String },
    #[error("delta must be positive")]
    NonPositiveDelta,
}
