//! Exact Schouten calculus and Poisson cohomology on Z2-graded polynomial algebras.

pub mod closedform;
pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod planar;
pub mod schouten;
pub mod superalgebra;
pub mod univariate;

pub use error::{GpError, Result};
pub use superalgebra::{
    gcd_univariate, poly_mul, rat, ratio, AlgebraSignature, GradedMonomial, GradedPolynomial, LinearSubstitution,
    Parity, Rational, Var,
};
