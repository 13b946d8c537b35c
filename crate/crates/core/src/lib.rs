//! Structured read-once oblivious algebraic branching programs: explicit
//! commutative and diagonal constructions, Nisan width profiles, the
//! algebra of commuting coefficient matrices (normal sets, border bases,
//! multiplication matrices, varieties, dual spaces), Waring decompositions
//! with derivative-functional evaluation plans, and the conversion of
//! commutative ROABPs into diagonal ones.
//!
//! Exact computations (ranks, normal sets, ideal membership) run over
//! arbitrary-precision rationals; varieties, dual bases, and converted
//! coefficients live in complex doubles. All core containers are generic
//! over the [`Scalar`] field, with concrete aliases below.

pub mod convert;
pub mod dualspace;
pub mod eigen;
pub mod error;
pub mod json;
pub mod matring;
pub mod matrix;
pub mod poly;
pub mod roabp;
pub mod scalar;
pub mod waring;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use poly::{DerivOperator, Monomial, MonomialOrder, Poly};
pub use scalar::{ComplexF, Rational, Scalar};

/// Polynomial over exact rationals.
pub type QPoly = Poly<Rational>;
/// Polynomial over complex doubles.
pub type CPoly = Poly<ComplexF>;
/// Matrix over exact rationals.
pub type QMatrix = Matrix<Rational>;
/// Matrix over complex doubles.
pub type CMatrix = Matrix<ComplexF>;
/// General ROABP over exact rationals.
pub type QRoabp = roabp::Roabp<Rational>;
/// Commutative ROABP over exact rationals.
pub type QCommRoabp = roabp::CommRoabp<Rational>;
/// Diagonal ROABP over exact rationals.
pub type QDiagRoabp = roabp::DiagRoabp<Rational>;
/// Diagonal ROABP over complex doubles (conversion output).
pub type CDiagRoabp = roabp::DiagRoabp<ComplexF>;
