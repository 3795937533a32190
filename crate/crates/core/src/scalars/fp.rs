use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Field, Ring, Scalar, ScalarError};

/// 15·2²⁷ + 1. Prime, ≡ 1 mod 12, and above 2³⁰.
pub const DEFAULT_PRIME: u64 = 2_013_265_921;

/// Prime field used by the randomized associativity screen.
pub type DefaultFp = Fp<DEFAULT_PRIME>;

/// Element of 𝔽_P, kept reduced in `[0, P)`. `P` must be prime and below 2³².
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn random<G: rand::Rng + ?Sized>(rng: &mut G) -> Self {
        Fp(rng.gen_range(0..P))
    }

    /// Reduction of an integer (any size) mod P.
    pub fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("reduced residue fits in u64"))
    }

    /// Reduction of a rational, failing when P divides the denominator.
    pub fn from_rational(r: &BigRational) -> Result<Self, ScalarError> {
        let den = Self::from_bigint(r.denom());
        if den.is_zero() {
            return Err(ScalarError::DenominatorDivisibleByModulus(P));
        }
        Ok(Self::from_bigint(r.numer()) * den.inv()?)
    }

    /// True iff `self` has multiplicative order exactly 12.
    pub fn is_primitive_12th_root(self) -> bool {
        self.pow(12) == Fp(1) && self.pow(6) != Fp(1) && self.pow(4) != Fp(1)
    }

    /// Smallest-generator primitive 12th root of unity: g^((P−1)/12) for the
    /// first g that yields order exactly 12.
    pub fn primitive_12th_root() -> Result<Self, ScalarError> {
        if P % 12 != 1 {
            return Err(ScalarError::ModulusNotOneMod12(P));
        }
        (2..P)
            .map(|g| Fp::<P>(g).pow((P - 1) / 12))
            .find(|z| z.is_primitive_12th_root())
            .ok_or(ScalarError::ModulusNotOneMod12(P))
    }
}

/// Ring homomorphism ℚ(ζ₁₂) → 𝔽_P sending ζ to `zeta_p`.
///
/// `zeta_p` must be a primitive 12th root of unity; P must be ≡ 1 mod 12 and
/// must not divide any denominator of `a`.
pub fn embed_fp<const P: u64>(a: &Scalar, zeta_p: Fp<P>) -> Result<Fp<P>, ScalarError> {
    if P % 12 != 1 {
        return Err(ScalarError::ModulusNotOneMod12(P));
    }
    if !zeta_p.is_primitive_12th_root() {
        return Err(ScalarError::NotPrimitiveRoot(zeta_p.value()));
    }
    let mut acc = Fp::<P>(0);
    let mut power = Fp::<P>(1);
    for c in a.coords() {
        acc = acc + Fp::from_rational(c)? * power;
        power = power * zeta_p;
    }
    Ok(acc)
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;

    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Ring for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1 % P)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn neg(&self) -> Self {
        -*self
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        *self = *self + *a * *b;
    }
}

impl<const P: u64> Field for Fp<P> {
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.0 == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.pow(P - 2))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
