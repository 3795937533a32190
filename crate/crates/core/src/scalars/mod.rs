//! Exact scalar rings.
//!
//! [`Scalar`] is the 12th cyclotomic field ℚ(ζ₁₂): it contains the rationals,
//! the imaginary unit `i = ζ³` and the primitive cubic root of unity
//! `j = ζ⁴ = ζ² − 1`, which is everything the cubic-matrix brackets and the
//! Pauli comparison need. [`Fp`] is a prime field used for randomized
//! identity testing; [`embed_fp`] maps the former into the latter.

mod cyclotomic;
mod fp;
mod text;

pub use cyclotomic::Scalar;
pub use fp::{embed_fp, DefaultFp, Fp, DEFAULT_PRIME};
pub use text::{format_scalar, parse_scalar};

use std::fmt;

use thiserror::Error;

/// Errors raised by scalar arithmetic, parsing and embeddings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("modulus {0} is not congruent to 1 mod 12")]
    ModulusNotOneMod12(u64),
    #[error("{0} is not a primitive 12th root of unity")]
    NotPrimitiveRoot(u64),
    #[error("denominator divisible by the modulus {0}")]
    DenominatorDivisibleByModulus(u64),
}

/// Commutative ring with identity, as used by the dense tensor code.
///
/// Method names deliberately shadow `std::ops`; generic code calls them
/// explicitly and concrete types additionally implement the operators.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(v: i64) -> Self;

    fn add_assign(&mut self, rhs: &Self) {
        *self = Ring::add(self, rhs);
    }

    /// `self += a * b`, the inner step of every contraction.
    fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.add_assign(&a.mul(b));
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Result<Self, ScalarError>;

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&rhs.inv()?))
    }
}
