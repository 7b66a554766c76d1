//! Symplectic polarity, ℓ_p-sum volumes and symplectic capacity brackets for
//! convex bodies.

pub mod capacities;
pub mod characteristics;
pub mod convex;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod optim;
pub mod scalar;
pub mod symplectic;

pub use convex::ConvexBody;
pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
