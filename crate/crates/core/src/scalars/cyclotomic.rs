use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Field, Ring, ScalarError};

/// Coordinates of ζ^k, k = 0..12, in the basis {1, ζ, ζ², ζ³}
/// modulo Φ₁₂(ζ) = ζ⁴ − ζ² + 1.
const ZETA_POWERS: [[i64; 4]; 12] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [-1, 0, 1, 0],
    [0, -1, 0, 1],
    [-1, 0, 0, 0],
    [0, -1, 0, 0],
    [0, 0, -1, 0],
    [0, 0, 0, -1],
    [1, 0, -1, 0],
    [0, 1, 0, -1],
];

/// Element of ℚ(ζ₁₂), stored as c₀ + c₁ζ + c₂ζ² + c₃ζ³ with exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    c: [BigRational; 4],
}

impl Scalar {
    pub fn new(c: [BigRational; 4]) -> Self {
        Scalar { c }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Scalar {
            c: c.map(|v| BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            c: [
                r,
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        }
    }

    /// The rational `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// Random element whose four coordinates are drawn independently and
    /// uniformly from the integers in `[-bound, bound]`.
    pub fn random<G: rand::Rng + ?Sized>(rng: &mut G, bound: i64) -> Self {
        Scalar {
            c: std::array::from_fn(|_| {
                BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))
            }),
        }
    }

    /// Size of the sample set used by [`Scalar::random`].
    pub fn sample_set_size(bound: i64) -> u64 {
        (2 * bound as u64 + 1).pow(4)
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(k: i64) -> Self {
        Self::from_ints(ZETA_POWERS[k.rem_euclid(12) as usize])
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// The imaginary unit, ζ³.
    pub fn i() -> Self {
        Self::zeta_pow(3)
    }

    /// The primitive cubic root of unity j = e^{2πi/3} = ζ⁴.
    pub fn j() -> Self {
        Self::zeta_pow(4)
    }

    /// j² = ζ⁸ = conj(j).
    pub fn j2() -> Self {
        Self::zeta_pow(8)
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    /// Rational value, if the element lies in ℚ.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.c[0].clone())
    }

    /// True when the element lies in ℚ(j) = ℚ(ζ²).
    pub fn in_eisenstein_field(&self) -> bool {
        self.c[1].is_zero() && self.c[3].is_zero()
    }

    /// Complex conjugation, the automorphism ζ ↦ ζ¹¹ = ζ − ζ³.
    pub fn conj(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        Scalar {
            c: [c0 + c2, c1.clone(), -c2, -(c1 + c3)],
        }
    }

    /// The Galois automorphism ζ ↦ ζ^k, for k coprime to 12.
    pub fn galois(&self, k: i64) -> Self {
        debug_assert!(matches!(k.rem_euclid(12), 1 | 5 | 7 | 11));
        let mut acc = Scalar::zero();
        for (m, cm) in self.c.iter().enumerate() {
            if cm.is_zero() {
                continue;
            }
            let term = Scalar::zeta_pow(k * m as i64).scale(cm);
            acc = &acc + &term;
        }
        acc
    }

    /// Multiplication by a rational.
    pub fn scale(&self, r: &BigRational) -> Self {
        Scalar {
            c: std::array::from_fn(|k| &self.c[k] * r),
        }
    }

    /// Field norm down to ℚ: the product of the four Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let p = &(&(self * &self.galois(5)) * &self.galois(7)) * &self.galois(11);
        debug_assert!(p.is_rational());
        p.c[0].clone()
    }

    /// Floating-point preview (re, im); never used on a correctness path.
    pub fn to_complex(&self) -> (f64, f64) {
        let half_sqrt3 = 3f64.sqrt() / 2.0;
        // ζ^m = cos(mπ/6) + i sin(mπ/6)
        let re_im = [(1.0, 0.0), (half_sqrt3, 0.5), (0.5, half_sqrt3), (0.0, 1.0)];
        let mut re = 0.0;
        let mut im = 0.0;
        for (cm, (r, i)) in self.c.iter().zip(re_im) {
            let v = cm.to_f64().unwrap_or(f64::NAN);
            re += v * r;
            im += v * i;
        }
        (re, im)
    }

    fn mul_impl(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero_impl() || rhs.is_zero_impl() {
            return Scalar::zero_impl();
        }
        let mut d: [BigRational; 7] = std::array::from_fn(|_| BigRational::zero());
        for (a, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                d[a + b] += x * y;
            }
        }
        // ζ⁶ = −1, ζ⁵ = ζ³ − ζ, ζ⁴ = ζ² − 1
        let d6 = std::mem::take(&mut d[6]);
        d[0] -= d6;
        let d5 = std::mem::take(&mut d[5]);
        d[3] += &d5;
        d[1] -= d5;
        let d4 = std::mem::take(&mut d[4]);
        d[2] += &d4;
        d[0] -= d4;
        let [c0, c1, c2, c3, ..] = d;
        Scalar {
            c: [c0, c1, c2, c3],
        }
    }

    fn is_zero_impl(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    fn zero_impl() -> Scalar {
        Scalar {
            c: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    /// True if every coordinate is an integer (denominators all 1).
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|r| r.is_integer())
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero_impl()
    }

    fn one() -> Self {
        Scalar::from_ints([1, 0, 0, 0])
    }

    fn is_zero(&self) -> bool {
        self.is_zero_impl()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn from_i64(v: i64) -> Self {
        Scalar::from_ints([v, 0, 0, 0])
    }

    fn add_assign(&mut self, rhs: &Self) {
        for (x, y) in self.c.iter_mut().zip(&rhs.c) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }
}

impl Field for Scalar {
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero_impl() {
            return Err(ScalarError::DivisionByZero);
        }
        let cofactor = &(&self.galois(5) * &self.galois(7)) * &self.galois(11);
        let n = self.norm();
        Ok(cofactor.scale(&n.recip()))
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero_impl()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            c: std::array::from_fn(|k| &self.c[k] + &rhs.c[k]),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            c: std::array::from_fn(|k| &self.c[k] - &rhs.c[k]),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.mul_impl(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            c: std::array::from_fn(|k| -&self.c[k]),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;

    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        self.mul_impl(&rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format_scalar(self))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", super::format_scalar(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Scalar {
        Scalar::one()
    }

    #[test]
    fn cube_root_relations() {
        let j = Scalar::j();
        let j2 = Scalar::j2();
        assert_eq!(&j * &j2, one());
        assert!((&one() + &(&j + &j2)).is_zero());
        assert_eq!(&(&j * &j) * &j, one());
        assert_eq!(&j * &j, j2);
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = Scalar::i();
        assert_eq!(&i * &i, -&one());
    }

    #[test]
    fn zeta_satisfies_cyclotomic_polynomial() {
        let z = Scalar::zeta();
        let z2 = &z * &z;
        let z4 = &z2 * &z2;
        assert!((&(&z4 - &z2) + &one()).is_zero());
        assert_eq!(Scalar::zeta_pow(12), one());
        assert_eq!(Scalar::zeta_pow(-1), Scalar::zeta_pow(11));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(Scalar::j().conj(), Scalar::j2());
        assert_eq!(Scalar::i().conj(), -&Scalar::i());
        let r = Scalar::ratio(3, 2);
        assert_eq!(r.conj(), r);
        assert_eq!(Scalar::zeta().conj(), Scalar::zeta_pow(11));
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let a = Scalar::from_ints([1, 2, -3, 5]);
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, one());
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(
            Field::div(&one(), &Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn complex_preview_of_j() {
        let (re, im) = Scalar::j().to_complex();
        assert!((re + 0.5).abs() < 1e-12);
        assert!((im - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }
}
