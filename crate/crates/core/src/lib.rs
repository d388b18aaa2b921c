//! Complex Gaussian quadrature for oscillatory integrals with a stationary
//! point, built on polynomials orthogonal with respect to `e^{i z^r}` on a
//! steepest-descent contour, together with the large-degree asymptotics of
//! those polynomials for `r = 3`.

pub mod asymptotics;
pub mod error;
pub mod linalg;
pub mod opq;
pub mod oscquad;
pub mod precision;
pub mod quadrature;
pub mod scurve;

pub use error::{Error, Result};
pub use precision::{Complex, PrecisionContext, Real};
