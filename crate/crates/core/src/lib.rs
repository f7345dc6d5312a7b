//! Exact computations with modules over Artinian commutative local algebras:
//! syzygies, Ext, duals, total reflexivity and reducing sequences.
//!
//! Everything is generic over the field through [`Scalar`]; the aliases below
//! fix the common choices.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod exactlin;
pub mod homalg;
pub mod invariants;
pub mod module;
pub mod reducing;
pub mod resolution;
pub mod scalar;
pub mod workspace;

pub use error::{Error, Result};
pub use scalar::{Fp, Scalar};

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type Q = num_rational::BigRational;
