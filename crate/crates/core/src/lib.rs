//! Weight fans, exponent arrangements and criticality of regularized orbital
//! integrals, with a floating-point laboratory for the predicted asymptotics.

pub mod exactgeom;
pub mod rootdata;
pub mod repspec;
pub mod arrangement;
pub mod criticality;
pub mod asymlab;
