//! Exact computations with vector invariants of matrix groups.
//!
//! All algorithms are generic over [`scalar::Field`]; the aliases below are
//! the coefficient fields used by the command-line tool.

pub mod error;
pub mod filtration;
pub mod group;
pub mod input;
pub mod matrix;
pub mod polarize;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod scenario;
pub mod span;

pub use error::{Error, Result};
pub use poly::{Monomial, Poly, Var};
pub use ring::RingCtx;
pub use scalar::{Field, Fp};

/// The rationals.
pub type Q = num_rational::BigRational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
