//! Taylor expansions of a root of `g(z) + sum_i a_i z^gamma_i` around a
//! simple zero of `g`, with exact and numeric engines and tools to check
//! the expansions against independent computations.

pub mod branch;
pub mod combinatorics;
pub mod error;
pub mod numeric;
pub mod problem;
pub mod series;
pub mod symbolic;
pub mod verify;

pub use branch::{branch_pow, BranchPoint};
pub use error::{Error, Result};
pub use numeric::{NumScalar, Scalar};
