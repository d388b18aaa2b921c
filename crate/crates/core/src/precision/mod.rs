//! Extended-precision arithmetic and the special functions built on it.

mod airy;
mod branch;
mod complex;
mod context;
mod gamma;

pub use airy::{airy_ai, airy_ai_prime, airy_pair, airy_switchover_radius, verify_airy_switchover};
pub use branch::{branch_sqrt_product, TwoPointCut};
pub(crate) use branch::polyline_distance;
pub use complex::Complex;
pub use context::{format_real, PrecisionContext};
pub use gamma::gamma;

/// Extended-precision real.
pub type Real = rug::Float;
