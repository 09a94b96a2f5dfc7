//! Exact arithmetic: polynomials, Laurent polynomials, Smith normal form,
//! integer factorization and the algebraic-integer tests on factors.

pub mod factor;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod snf;
pub mod sparse;
pub mod units;

pub use laurent::LaurentPoly;
pub use matrix::Matrix;
pub use num_rational::BigRational;
pub use poly::{IntPoly, QPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial is constant")]
    Constant,
    #[error("polynomial vanishes at 0")]
    ZeroRoot,
    #[error("polynomial {0} is not irreducible and primitive")]
    NotIrreducible(String),
    #[error("monodromy must be nonzero")]
    ZeroMonodromy,
}
