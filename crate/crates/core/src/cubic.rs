//! Cubic and space matrices, the two induced linear maps, and the cyclic
//! symmetry decomposition.
//!
//! Indices are 0-based in the API and 1-based in every text or JSON form.
//!
//! The "symmetric" summand of the decomposition is the cyclically invariant
//! part, `A_{ikl} = A_{kli} = A_{lik}`. A reversal `A_{ikl} = A_{lki}` would
//! not reproduce the dimension count `(n³ − n)/3 + n`, so cyclic invariance
//! is what [`SymClass::CyclicSymmetric`] means throughout.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalars::{Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("empty linear combination")]
    Empty,
    #[error("order must be positive")]
    ZeroOrder,
    #[error("entry ({0}, {1}, {2}) is out of range")]
    OutOfRange(usize, usize, usize),
}

/// An order-n cube of ring elements `A_{ijk}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CubicMatrix<R = Scalar> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> CubicMatrix<R> {
    pub fn zeros(n: usize) -> Self {
        CubicMatrix {
            n,
            data: vec![R::zero(); n * n * n],
        }
    }

    /// Elementary matrix with a single 1 at `(i, j, k)`.
    pub fn unit(n: usize, i: usize, j: usize, k: usize) -> Self {
        let mut m = Self::zeros(n);
        m[(i, j, k)] = R::one();
        m
    }

    /// Elementary matrix number `idx` in lexicographic order.
    pub fn basis(n: usize, idx: usize) -> Self {
        let mut m = Self::zeros(n);
        m.data[idx] = R::one();
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data.push(f(i, j, k));
                }
            }
        }
        CubicMatrix { n, data }
    }

    /// Wraps a flat lexicographic coordinate vector of length n³.
    pub fn from_coords(n: usize, data: Vec<R>) -> Result<Self, CubicError> {
        if data.len() != n * n * n {
            return Err(CubicError::LengthMismatch {
                expected: n * n * n,
                got: data.len(),
            });
        }
        Ok(CubicMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Flat coordinates in lexicographic `(i, j, k)` order.
    pub fn coords(&self) -> &[R] {
        &self.data
    }

    pub fn into_coords(self) -> Vec<R> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    #[inline]
    pub fn flat_index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Nonzero entries `(i, j, k, value)` in lexicographic order, 0-based.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &R)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(idx, v)| (idx / (n * n), (idx / n) % n, idx % n, v))
    }

    fn check_order(&self, other: &Self) -> Result<(), CubicError> {
        if self.n != other.n {
            return Err(CubicError::OrderMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CubicError> {
        self.check_order(other)?;
        Ok(CubicMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CubicError> {
        self.check_order(other)?;
        Ok(CubicMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &R) -> Self {
        CubicMatrix {
            n: self.n,
            data: self.data.iter().map(|a| s.mul(a)).collect(),
        }
    }

    pub fn map<S>(&self, f: impl FnMut(&R) -> S) -> CubicMatrix<S> {
        CubicMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `Σ c·A` over the given terms.
    pub fn lincomb<'a>(
        terms: impl IntoIterator<Item = (&'a R, &'a Self)>,
    ) -> Result<Self, CubicError> {
        let mut out: Option<Self> = None;
        for (c, a) in terms {
            let acc = out.get_or_insert_with(|| Self::zeros(a.n));
            acc.check_order(a)?;
            for (x, y) in acc.data.iter_mut().zip(&a.data) {
                x.add_product(c, y);
            }
        }
        out.ok_or(CubicError::Empty)
    }

    /// The square matrix `L_{ij} = Σ_k A_{ijk} x_k`.
    pub fn vec_to_op(&self, x: &[R]) -> Result<Matrix<R>, CubicError> {
        if x.len() != self.n {
            return Err(CubicError::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(Matrix::from_fn(self.n, self.n, |i, j| {
            let mut acc = R::zero();
            for (k, xk) in x.iter().enumerate() {
                acc.add_product(&self[(i, j, k)], xk);
            }
            acc
        }))
    }

    /// The vector `x_i = Σ_{j,k} A_{ijk} L_{jk}`.
    pub fn op_to_vec(&self, l: &Matrix<R>) -> Result<Vec<R>, CubicError> {
        if l.shape() != (self.n, self.n) {
            return Err(CubicError::LengthMismatch {
                expected: self.n,
                got: l.rows(),
            });
        }
        Ok((0..self.n)
            .map(|i| {
                let mut acc = R::zero();
                for j in 0..self.n {
                    for k in 0..self.n {
                        acc.add_product(&self[(i, j, k)], &l[(j, k)]);
                    }
                }
                acc
            })
            .collect())
    }

    /// Slice `k` is the square matrix `(A_{ijk})_{i,j}`.
    pub fn slices(&self) -> Vec<Matrix<R>> {
        (0..self.n)
            .map(|k| Matrix::from_fn(self.n, self.n, |i, j| self[(i, j, k)].clone()))
            .collect()
    }

    pub fn from_slices(slices: &[Matrix<R>]) -> Result<Self, CubicError> {
        let n = slices.len();
        if let Some(bad) = slices.iter().find(|s| s.shape() != (n, n)) {
            return Err(CubicError::OrderMismatch {
                expected: n,
                got: bad.rows(),
            });
        }
        Ok(Self::from_fn(n, |i, j, k| slices[k][(i, j)].clone()))
    }

    /// `B_{ikl} = A_{kli}`: the cyclic shift of index positions.
    pub fn cyclic_shift(&self) -> Self {
        Self::from_fn(self.n, |i, k, l| self[(k, l, i)].clone())
    }
}

impl<R> std::ops::Index<(usize, usize, usize)> for CubicMatrix<R> {
    type Output = R;

    #[inline]
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &R {
        assert!(i < self.n && j < self.n && k < self.n, "index out of range");
        &self.data[(i * self.n + j) * self.n + k]
    }
}

impl<R> std::ops::IndexMut<(usize, usize, usize)> for CubicMatrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut R {
        assert!(i < self.n && j < self.n && k < self.n, "index out of range");
        &mut self.data[(i * self.n + j) * self.n + k]
    }
}

impl<R: Ring + fmt::Display> fmt::Debug for CubicMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubicMatrix(n={}; ", self.n)?;
        let mut first = true;
        for (i, j, k, v) in self.nonzero_entries() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}{}{}: {}", i + 1, j + 1, k + 1, v)?;
        }
        write!(f, ")")
    }
}

/// A `K × M × N` array `A_{k m n}` over a ring.
#[derive(Clone, PartialEq, Eq)]
pub struct SpaceMatrix<R = Scalar> {
    extents: [usize; 3],
    data: Vec<R>,
}

impl<R: Ring> SpaceMatrix<R> {
    pub fn zeros(k: usize, m: usize, n: usize) -> Self {
        SpaceMatrix {
            extents: [k, m, n],
            data: vec![R::zero(); k * m * n],
        }
    }

    pub fn from_fn(
        k: usize,
        m: usize,
        n: usize,
        mut f: impl FnMut(usize, usize, usize) -> R,
    ) -> Self {
        let mut data = Vec::with_capacity(k * m * n);
        for a in 0..k {
            for b in 0..m {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        SpaceMatrix {
            extents: [k, m, n],
            data,
        }
    }

    pub fn extents(&self) -> [usize; 3] {
        self.extents
    }

    pub fn add(&self, other: &Self) -> Result<Self, CubicError> {
        if self.extents != other.extents {
            return Err(CubicError::LengthMismatch {
                expected: self.data.len(),
                got: other.data.len(),
            });
        }
        Ok(SpaceMatrix {
            extents: self.extents,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &R) -> Self {
        SpaceMatrix {
            extents: self.extents,
            data: self.data.iter().map(|a| s.mul(a)).collect(),
        }
    }

    /// The cubic matrix with the same entries, when all extents agree.
    pub fn to_cubic(&self) -> Option<CubicMatrix<R>> {
        let [k, m, n] = self.extents;
        (k == m && m == n).then(|| CubicMatrix {
            n,
            data: self.data.clone(),
        })
    }
}

impl<R> std::ops::Index<(usize, usize, usize)> for SpaceMatrix<R> {
    type Output = R;

    fn index(&self, (a, b, c): (usize, usize, usize)) -> &R {
        let [k, m, n] = self.extents;
        assert!(a < k && b < m && c < n, "index out of range");
        &self.data[(a * m + b) * n + c]
    }
}

impl<R> std::ops::IndexMut<(usize, usize, usize)> for SpaceMatrix<R> {
    fn index_mut(&mut self, (a, b, c): (usize, usize, usize)) -> &mut R {
        let [k, m, n] = self.extents;
        assert!(a < k && b < m && c < n, "index out of range");
        &mut self.data[(a * m + b) * n + c]
    }
}

impl<R: Ring> From<CubicMatrix<R>> for SpaceMatrix<R> {
    fn from(c: CubicMatrix<R>) -> Self {
        SpaceMatrix {
            extents: [c.n; 3],
            data: c.data,
        }
    }
}

/// Summands of the cyclic decomposition
/// `CMat_n = j-skew ⊕ j²-skew ⊕ off-diagonal cyclic ⊕ diagonal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymClass {
    /// `A_{ikl} = j·A_{kli} = j²·A_{lik}`.
    JSkew,
    /// `A_{ikl} = j²·A_{kli} = j·A_{lik}`.
    J2Skew,
    /// `A_{ikl} = A_{kli} = A_{lik}`, diagonal included.
    CyclicSymmetric,
    /// Supported on `(i, i, i)` only.
    Diagonal,
    /// Cyclic-symmetric with zero diagonal.
    OffdiagSymmetric,
}

impl SymClass {
    pub const ALL: [SymClass; 5] = [
        SymClass::JSkew,
        SymClass::J2Skew,
        SymClass::CyclicSymmetric,
        SymClass::Diagonal,
        SymClass::OffdiagSymmetric,
    ];

    /// The four summands of the direct-sum decomposition.
    pub const SUMMANDS: [SymClass; 4] = [
        SymClass::JSkew,
        SymClass::J2Skew,
        SymClass::OffdiagSymmetric,
        SymClass::Diagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymClass::JSkew => "j_skew",
            SymClass::J2Skew => "j2_skew",
            SymClass::CyclicSymmetric => "cyclic_symmetric",
            SymClass::Diagonal => "diagonal",
            SymClass::OffdiagSymmetric => "offdiag_symmetric",
        }
    }

    /// Coefficients `(1, ω, ω²)` of the cyclic averaging projector, if the
    /// class is one.
    fn cyclic_weights(self) -> Option<[Scalar; 3]> {
        match self {
            SymClass::JSkew => Some([Scalar::one(), Scalar::j(), Scalar::j2()]),
            SymClass::J2Skew => Some([Scalar::one(), Scalar::j2(), Scalar::j()]),
            SymClass::CyclicSymmetric => Some([Scalar::one(), Scalar::one(), Scalar::one()]),
            SymClass::Diagonal | SymClass::OffdiagSymmetric => None,
        }
    }

    /// Projection onto the class along the other summands.
    pub fn project(self, a: &CubicMatrix) -> CubicMatrix {
        let third = Scalar::ratio(1, 3);
        let diag = |a: &CubicMatrix| {
            CubicMatrix::from_fn(a.n, |i, j, k| {
                if i == j && j == k {
                    a[(i, j, k)].clone()
                } else {
                    Scalar::zero()
                }
            })
        };
        match self.cyclic_weights() {
            Some([w0, w1, w2]) => CubicMatrix::from_fn(a.n, |i, k, l| {
                let mut acc = w0.mul(&a[(i, k, l)]);
                acc.add_product(&w1, &a[(k, l, i)]);
                acc.add_product(&w2, &a[(l, i, k)]);
                acc.mul(&third)
            }),
            None if self == SymClass::Diagonal => diag(a),
            None => {
                let cyc = SymClass::CyclicSymmetric.project(a);
                cyc.sub(&diag(a)).expect("same order")
            }
        }
    }

    /// Whether `a` satisfies the defining relations of the class.
    pub fn contains(self, a: &CubicMatrix) -> bool {
        let n = a.n;
        let triples =
            || (0..n).flat_map(move |i| (0..n).flat_map(move |k| (0..n).map(move |l| (i, k, l))));
        match self {
            SymClass::Diagonal => a.nonzero_entries().all(|(i, j, k, _)| i == j && j == k),
            SymClass::OffdiagSymmetric => {
                SymClass::CyclicSymmetric.contains(a) && (0..n).all(|i| a[(i, i, i)].is_zero())
            }
            _ => {
                let [_, w, _] = self.cyclic_weights().expect("cyclic class");
                // A_{ikl} = ω·A_{kli} for all triples implies the second relation
                triples().all(|(i, k, l)| a[(i, k, l)] == w.mul(&a[(k, l, i)]))
            }
        }
    }

    /// Basis of the class: one element per cyclic orbit of index triples,
    /// orbits ordered by their minimal triple, normalized to 1 there.
    pub fn basis(self, n: usize) -> Vec<CubicMatrix> {
        match self {
            SymClass::Diagonal => (0..n).map(|i| CubicMatrix::unit(n, i, i, i)).collect(),
            _ => {
                let three = Scalar::from_i64(3);
                let include_diagonal = self == SymClass::CyclicSymmetric;
                orbit_minima(n)
                    .into_iter()
                    .filter(|&(i, j, k)| include_diagonal || !(i == j && j == k))
                    .map(|(i, j, k)| {
                        let e = CubicMatrix::unit(n, i, j, k);
                        if i == j && j == k {
                            e
                        } else {
                            self.project(&e).scale(&three)
                        }
                    })
                    .collect()
            }
        }
    }

    /// Expected basis size `(n³ − n)/3` (or `n`, or their sum).
    pub fn dimension(self, n: usize) -> usize {
        let off = (n * n * n - n) / 3;
        match self {
            SymClass::JSkew | SymClass::J2Skew | SymClass::OffdiagSymmetric => off,
            SymClass::Diagonal => n,
            SymClass::CyclicSymmetric => off + n,
        }
    }
}

impl fmt::Display for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SymClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SymClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown symmetry class {s:?}"))
    }
}

pub fn project(a: &CubicMatrix, class: SymClass) -> CubicMatrix {
    class.project(a)
}

pub fn is_in_class(a: &CubicMatrix, class: SymClass) -> bool {
    class.contains(a)
}

pub fn class_basis(n: usize, class: SymClass) -> Vec<CubicMatrix> {
    class.basis(n)
}

/// Lexicographically minimal triple of each cyclic orbit, in order.
fn orbit_minima(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let t = (i, j, k);
                if t <= (j, k, i) && t <= (k, i, j) {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct CubicJson {
    n: usize,
    entries: Vec<(usize, usize, usize, Scalar)>,
}

impl Serialize for CubicMatrix<Scalar> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CubicJson {
            n: self.n,
            entries: self
                .nonzero_entries()
                .map(|(i, j, k, v)| (i + 1, j + 1, k + 1, v.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubicMatrix<Scalar> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = CubicJson::deserialize(d)?;
        if raw.n == 0 {
            return Err(D::Error::custom(CubicError::ZeroOrder));
        }
        let mut m = CubicMatrix::zeros(raw.n);
        for (i, j, k, v) in raw.entries {
            let ok =
                (1..=raw.n).contains(&i) && (1..=raw.n).contains(&j) && (1..=raw.n).contains(&k);
            if !ok {
                return Err(D::Error::custom(CubicError::OutOfRange(i, j, k)));
            }
            m[(i - 1, j - 1, k - 1)] = v;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize, k: usize) -> CubicMatrix {
        CubicMatrix::unit(n, i - 1, j - 1, k - 1)
    }

    #[test]
    fn lincomb_examples() {
        let a = e(2, 1, 1, 2);
        let minus_one = Scalar::from_i64(-1);
        let z = CubicMatrix::lincomb([(&Scalar::one(), &a), (&minus_one, &a)]).unwrap();
        assert!(z.is_zero());
        let s = CubicMatrix::lincomb([(&Scalar::j(), &a), (&Scalar::j2(), &a)]).unwrap();
        assert_eq!(s, a.scale(&minus_one));
        assert_eq!(
            CubicMatrix::lincomb([(&Scalar::one(), &a), (&Scalar::one(), &e(3, 1, 1, 1))]),
            Err(CubicError::OrderMismatch {
                expected: 2,
                got: 3
            })
        );
    }

    #[test]
    fn induced_maps() {
        let x = [Scalar::zero(), Scalar::one()];
        let l = e(2, 1, 2, 2).vec_to_op(&x).unwrap();
        assert_eq!(
            l.nonzero_entries()
                .map(|(r, c, _)| (r, c))
                .collect::<Vec<_>>(),
            [(0, 1)]
        );

        let id = Matrix::<Scalar>::identity(2);
        assert_eq!(
            e(2, 1, 1, 1).op_to_vec(&id).unwrap(),
            [Scalar::one(), Scalar::zero()]
        );
        let mut single = Matrix::zeros(2, 2);
        single[(0, 1)] = Scalar::one();
        assert_eq!(
            e(2, 2, 1, 2).op_to_vec(&single).unwrap(),
            [Scalar::zero(), Scalar::one()]
        );
    }

    #[test]
    fn projector_on_unit() {
        let p = SymClass::JSkew.project(&e(2, 1, 1, 2));
        let third = Scalar::ratio(1, 3);
        let expected = CubicMatrix::lincomb([
            (&third, &e(2, 1, 1, 2)),
            (&third.mul(&Scalar::j()), &e(2, 2, 1, 1)),
            (&third.mul(&Scalar::j2()), &e(2, 1, 2, 1)),
        ])
        .unwrap();
        assert_eq!(p, expected);
        assert!(!SymClass::JSkew.contains(&e(2, 1, 1, 2)));
    }

    #[test]
    fn basis_sizes_and_membership() {
        for n in 1..=4 {
            let mut total = 0;
            for class in SymClass::SUMMANDS {
                let b = class.basis(n);
                assert_eq!(b.len(), class.dimension(n), "{class} at n={n}");
                assert!(b.iter().all(|m| class.contains(m)));
                total += b.len();
            }
            assert_eq!(total, n * n * n);
        }
        assert!(SymClass::JSkew.basis(1).is_empty());
    }

    #[test]
    fn zero_is_in_every_class() {
        let z = CubicMatrix::zeros(3);
        assert!(SymClass::ALL.iter().all(|c| c.contains(&z)));
    }

    #[test]
    fn slices_of_unit() {
        let s = e(3, 1, 2, 3).slices();
        assert!(s[0].is_zero() && s[1].is_zero());
        assert_eq!(
            s[2].nonzero_entries()
                .map(|(r, c, _)| (r, c))
                .collect::<Vec<_>>(),
            [(0, 1)]
        );
    }

    #[test]
    fn json_is_one_based_and_sorted() {
        let a = CubicMatrix::lincomb([
            (&Scalar::j(), &e(2, 2, 1, 1)),
            (&Scalar::from_i64(2), &e(2, 1, 1, 2)),
        ])
        .unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"n":2,"entries":[[1,1,2,"2"],[2,1,1,"w"]]}"#);
        assert_eq!(serde_json::from_str::<CubicMatrix>(&json).unwrap(), a);
        assert!(serde_json::from_str::<CubicMatrix>(r#"{"n":2,"entries":[[3,1,1,"1"]]}"#).is_err());
    }
}
