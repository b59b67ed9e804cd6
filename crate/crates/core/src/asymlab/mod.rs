//! Floating-point checks of the exact predictions: lattice-sum asymptotics
//! for split-torus actions on `Z^d`, Poisson summation, and regularized
//! Mellin integrals on the half line.

mod lattice;
mod mellin;
mod quad;
mod sum;

pub use lattice::{
    box_sum, fit_exponent, lattice_sum, lattice_sum_detailed, poisson_identity_check, residual_check,
    theta, theta_tail_bound, LatticeSum, LatticeSumProbe, ProbeFunction, TorusAction,
};
pub use mellin::{invariance_check, mellin_regularize, plain_integral, AsymFun1D};
pub use quad::{integrate_gk21, Integral};
pub use sum::NeumaierSum;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AsymError {
    #[error("invalid torus action: {0}")]
    InvalidAction(String),
    #[error("invalid probe: {0}")]
    InvalidProbe(String),
    #[error("scale factor {0:e} is outside [1e-12, 1e12]")]
    Overflow(f64),
    #[error("grid spans {decades:.2} decades with {points} points; need at least 2 decades and 8 points")]
    GridTooShort { decades: f64, points: usize },
    #[error("direction is not in the relative interior of the cone")]
    OutsideRelint,
    #[error("critical exponent at {0}")]
    CriticalExponent(&'static str),
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { estimate: f64, tolerance: f64 },
    #[error("unknown function: {0}")]
    UnknownFunction(String),
}
