//! The ternary algebra of rectangular matrices `τ(X, Y, Z) = X·Y*·Z`, its
//! Jordan-type product σ, the 2×2 block algebra and the Lie algebra
//! represented inside it.
//!
//! Every check draws exact random matrices and involves conjugate
//! transposes, so passing checks are reported with the coordinate-wise
//! sampling bound.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{Matrix, ShapeError};
use crate::sampling::{coordinate_sample_bound, sample_scalar, stream_rng};
use crate::scalars::{Ring, Scalar};
use crate::verdict::Verdict;

pub type RectMatrix = Matrix<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimoduleError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("at least one sample is required")]
    NoSamples,
    #[error("matrix dimensions must be positive")]
    ZeroShape,
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

fn same_shape(ms: &[&RectMatrix]) -> Result<(), ShapeError> {
    let expected = ms[0].shape();
    match ms.iter().find(|m| m.shape() != expected) {
        Some(m) => Err(ShapeError::Mismatch {
            expected,
            got: m.shape(),
        }),
        None => Ok(()),
    }
}

/// `φ(m ⊗ n̄) = m·n*`.
pub fn phi(m: &RectMatrix, n: &RectMatrix) -> Result<RectMatrix, ShapeError> {
    m.matmul(&n.adjoint())
}

/// `ψ(n̄ ⊗ p) = n*·p`.
pub fn psi(n: &RectMatrix, p: &RectMatrix) -> Result<RectMatrix, ShapeError> {
    n.adjoint().matmul(p)
}

pub fn rect_tau(x: &RectMatrix, y: &RectMatrix, z: &RectMatrix) -> Result<RectMatrix, ShapeError> {
    same_shape(&[x, y, z])?;
    phi(x, y)?.matmul(z)
}

/// `σ(X, Y, Z) = X·Y*·Z + Z·Y*·X`.
pub fn sigma(x: &RectMatrix, y: &RectMatrix, z: &RectMatrix) -> Result<RectMatrix, ShapeError> {
    rect_tau(x, y, z)?.add(&rect_tau(z, y, x)?)
}

/// `φ(m ⊗ n̄)·p + m·ψ(n̄ ⊗ p)`, which equals `2τ`.
pub fn sigma_literal(
    x: &RectMatrix,
    y: &RectMatrix,
    z: &RectMatrix,
) -> Result<RectMatrix, ShapeError> {
    same_shape(&[x, y, z])?;
    phi(x, y)?.matmul(z)?.add(&x.matmul(&psi(y, z)?)?)
}

/// Which σ the Jordan, five-argument and bracket checks use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaForm {
    Symmetric,
    Literal,
}

impl SigmaForm {
    pub const ALL: [SigmaForm; 2] = [SigmaForm::Symmetric, SigmaForm::Literal];

    pub fn apply(
        self,
        x: &RectMatrix,
        y: &RectMatrix,
        z: &RectMatrix,
    ) -> Result<RectMatrix, ShapeError> {
        match self {
            SigmaForm::Symmetric => sigma(x, y, z),
            SigmaForm::Literal => sigma_literal(x, y, z),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SigmaForm::Symmetric => "symmetric",
            SigmaForm::Literal => "literal",
        }
    }
}

/// `[[a, m], [n̄, b]]` with `a: m×m`, `b: n×n`, `m: m×n` and the lower
/// block `n̄` stored as the `n×m` matrix `n*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMatrix2 {
    pub a: RectMatrix,
    pub b: RectMatrix,
    pub m_blk: RectMatrix,
    pub nbar_blk: RectMatrix,
}

impl BlockMatrix2 {
    pub fn zeros(m: usize, n: usize) -> Self {
        BlockMatrix2 {
            a: Matrix::zeros(m, m),
            b: Matrix::zeros(n, n),
            m_blk: Matrix::zeros(m, n),
            nbar_blk: Matrix::zeros(n, m),
        }
    }

    pub fn unit(m: usize, n: usize) -> Self {
        BlockMatrix2 {
            a: Matrix::identity(m),
            b: Matrix::identity(n),
            ..Self::zeros(m, n)
        }
    }

    pub fn random<G: rand::Rng + ?Sized>(m: usize, n: usize, rng: &mut G) -> Self {
        let mut r = |rows, cols| Matrix::from_fn(rows, cols, |_, _| sample_scalar(rng));
        BlockMatrix2 {
            a: r(m, m),
            b: r(n, n),
            m_blk: r(m, n),
            nbar_blk: r(n, m),
        }
    }

    /// `(m, n)`.
    pub fn shape(&self) -> (usize, usize) {
        self.m_blk.shape()
    }

    pub fn is_zero(&self) -> bool {
        [&self.a, &self.b, &self.m_blk, &self.nbar_blk]
            .iter()
            .all(|x| x.is_zero())
    }

    fn zip(
        &self,
        o: &Self,
        f: impl Fn(&RectMatrix, &RectMatrix) -> Result<RectMatrix, ShapeError>,
    ) -> Result<Self, ShapeError> {
        Ok(BlockMatrix2 {
            a: f(&self.a, &o.a)?,
            b: f(&self.b, &o.b)?,
            m_blk: f(&self.m_blk, &o.m_blk)?,
            nbar_blk: f(&self.nbar_blk, &o.nbar_blk)?,
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self, ShapeError> {
        self.zip(o, RectMatrix::add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, ShapeError> {
        self.zip(o, RectMatrix::sub)
    }

    pub fn neg(&self) -> Self {
        BlockMatrix2 {
            a: self.a.neg(),
            b: self.b.neg(),
            m_blk: self.m_blk.neg(),
            nbar_blk: self.nbar_blk.neg(),
        }
    }

    pub fn scale_by(&self, s: &Scalar) -> Self {
        BlockMatrix2 {
            a: self.a.scale(s),
            b: self.b.scale(s),
            m_blk: self.m_blk.scale(s),
            nbar_blk: self.nbar_blk.scale(s),
        }
    }

    /// The block product, with `φ(m ⊗ n̄′) = m·n̄′` and `ψ(n̄ ⊗ m′) = n̄·m′`.
    pub fn mul(&self, o: &Self) -> Result<Self, ShapeError> {
        if self.shape() != o.shape() {
            return Err(ShapeError::Mismatch {
                expected: self.shape(),
                got: o.shape(),
            });
        }
        Ok(BlockMatrix2 {
            a: self.a.matmul(&o.a)?.add(&self.m_blk.matmul(&o.nbar_blk)?)?,
            m_blk: self.a.matmul(&o.m_blk)?.add(&self.m_blk.matmul(&o.b)?)?,
            nbar_blk: self
                .nbar_blk
                .matmul(&o.a)?
                .add(&self.b.matmul(&o.nbar_blk)?)?,
            b: self.b.matmul(&o.b)?.add(&self.nbar_blk.matmul(&o.m_blk)?)?,
        })
    }

    pub fn commutator(&self, o: &Self) -> Result<Self, ShapeError> {
        self.mul(o)?.sub(&o.mul(self)?)
    }
}

/// Generators `U_m`, `U_{n̄}` and `S_{pq}` of the Lie algebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LieGen {
    U(RectMatrix),
    Ubar(RectMatrix),
    S(RectMatrix, RectMatrix),
}

pub fn rep(g: &LieGen) -> Result<BlockMatrix2, ShapeError> {
    Ok(match g {
        LieGen::U(x) => {
            let (m, n) = x.shape();
            BlockMatrix2 {
                m_blk: x.clone(),
                ..BlockMatrix2::zeros(m, n)
            }
        }
        LieGen::Ubar(x) => {
            let (m, n) = x.shape();
            BlockMatrix2 {
                nbar_blk: x.adjoint(),
                ..BlockMatrix2::zeros(m, n)
            }
        }
        LieGen::S(p, q) => {
            same_shape(&[p, q])?;
            let (m, n) = p.shape();
            BlockMatrix2 {
                a: phi(p, q)?,
                b: psi(q, p)?.neg(),
                ..BlockMatrix2::zeros(m, n)
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BimoduleCheck {
    LrAssoc,
    Jordan,
    FiveIdentity,
    PhiPsi,
    Block,
    Brackets,
    Jacobi,
}

impl BimoduleCheck {
    pub const ALL: [BimoduleCheck; 7] = [
        BimoduleCheck::LrAssoc,
        BimoduleCheck::Jordan,
        BimoduleCheck::FiveIdentity,
        BimoduleCheck::PhiPsi,
        BimoduleCheck::Block,
        BimoduleCheck::Brackets,
        BimoduleCheck::Jacobi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BimoduleCheck::LrAssoc => "lr_assoc",
            BimoduleCheck::Jordan => "jordan",
            BimoduleCheck::FiveIdentity => "five_identity",
            BimoduleCheck::PhiPsi => "phi_psi",
            BimoduleCheck::Block => "block",
            BimoduleCheck::Brackets => "brackets",
            BimoduleCheck::Jacobi => "jacobi",
        }
    }

    /// Whether the outcome depends on the choice of σ.
    pub fn uses_sigma(self) -> bool {
        matches!(
            self,
            BimoduleCheck::Jordan | BimoduleCheck::FiveIdentity | BimoduleCheck::Brackets
        )
    }

    /// Largest total degree among the identities checked.
    fn degree(self) -> u64 {
        match self {
            BimoduleCheck::LrAssoc | BimoduleCheck::FiveIdentity => 5,
            BimoduleCheck::Jordan => 7,
            BimoduleCheck::PhiPsi | BimoduleCheck::Block => 3,
            BimoduleCheck::Brackets => 4,
            BimoduleCheck::Jacobi => 6,
        }
    }
}

impl fmt::Display for BimoduleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BimoduleCheck {
    type Err = BimoduleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().replace('-', "_");
        BimoduleCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or(BimoduleError::UnknownCheck(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LieParams {
    pub m: usize,
    pub n: usize,
    pub samples: u32,
    pub seed: u64,
}

impl Default for LieParams {
    fn default() -> Self {
        LieParams {
            m: 2,
            n: 3,
            samples: 200,
            seed: 0,
        }
    }
}

/// A failing sample; the arguments are reproducible from `(seed, sample)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BimoduleWitness {
    pub relation: &'static str,
    pub seed: u64,
    pub sample: u32,
    pub args: Vec<RectMatrix>,
}

/// Named equalities of one sample: `(relation, lhs, rhs)` for rectangular
/// or block matrices.
#[allow(clippy::large_enum_variant)]
enum Eq2 {
    Rect(&'static str, RectMatrix, RectMatrix),
    Block(&'static str, BlockMatrix2, BlockMatrix2),
}

impl Eq2 {
    fn failing(&self) -> Option<&'static str> {
        match self {
            Eq2::Rect(name, l, r) => (l != r).then_some(*name),
            Eq2::Block(name, l, r) => (l != r).then_some(*name),
        }
    }
}

fn sample_equations(
    check: BimoduleCheck,
    form: SigmaForm,
    m: usize,
    n: usize,
    x: &[RectMatrix; 5],
    rng: &mut impl rand::Rng,
) -> Result<Vec<Eq2>, ShapeError> {
    let t = rect_tau;
    let s = |a: &RectMatrix, b: &RectMatrix, c: &RectMatrix| form.apply(a, b, c);
    let [a, b, c, d, f] = x;
    let mut out = Vec::new();
    match check {
        BimoduleCheck::LrAssoc => {
            out.push(Eq2::Rect(
                "lr",
                t(&t(a, b, c)?, d, f)?,
                t(a, b, &t(c, d, f)?)?,
            ));
            out.push(Eq2::Rect(
                "fixed_middle",
                t(&t(a, b, c)?, b, f)?,
                t(a, b, &t(c, b, f)?)?,
            ));
        }
        BimoduleCheck::Jordan => {
            out.push(Eq2::Rect("outer_symmetry", s(a, b, c)?, s(c, b, a)?));
            let aba = s(a, b, a)?;
            out.push(Eq2::Rect(
                "nested",
                s(&s(a, b, c)?, b, &aba)?,
                s(a, b, &s(c, b, &aba)?)?,
            ));
        }
        BimoduleCheck::FiveIdentity => {
            let (mm, nn, p, q, r) = (a, b, c, d, f);
            let lhs = s(mm, nn, &s(p, q, r)?)?
                .sub(&s(p, q, &s(mm, nn, r)?)?)?
                .add(&s(&s(p, q, mm)?, nn, r)?)?
                .sub(&s(mm, &s(q, p, nn)?, r)?)?;
            out.push(Eq2::Rect("five", lhs.clone(), lhs.scale(&Scalar::zero())));
        }
        BimoduleCheck::PhiPsi => {
            out.push(Eq2::Rect("phi_adjoint", phi(a, b)?.adjoint(), phi(b, a)?));
            out.push(Eq2::Rect("psi_adjoint", psi(a, b)?.adjoint(), psi(b, a)?));
            out.push(Eq2::Rect(
                "compatibility",
                phi(a, b)?.matmul(c)?,
                a.matmul(&psi(b, c)?)?,
            ));
        }
        BimoduleCheck::Block => {
            let [p, q, r] = std::array::from_fn(|_| BlockMatrix2::random(m, n, rng));
            out.push(Eq2::Block(
                "associativity",
                p.mul(&q)?.mul(&r)?,
                p.mul(&q.mul(&r)?)?,
            ));
            let e = BlockMatrix2::unit(m, n);
            out.push(Eq2::Block("left_unit", e.mul(&p)?, p.clone()));
            out.push(Eq2::Block("right_unit", p.mul(&e)?, p));
        }
        BimoduleCheck::Brackets => {
            let (mm, nn, p, q) = (a, b, c, d);
            let u = |x: &RectMatrix| rep(&LieGen::U(x.clone()));
            let ub = |x: &RectMatrix| rep(&LieGen::Ubar(x.clone()));
            let sg = |x: &RectMatrix, y: &RectMatrix| rep(&LieGen::S(x.clone(), y.clone()));
            out.push(Eq2::Block(
                "u_ubar",
                u(mm)?.commutator(&ub(nn)?)?,
                sg(mm, nn)?,
            ));
            out.push(Eq2::Block(
                "s_u",
                sg(p, q)?.commutator(&u(mm)?)?,
                u(&s(p, q, mm)?)?,
            ));
            out.push(Eq2::Block(
                "s_ubar",
                sg(p, q)?.commutator(&ub(nn)?)?,
                ub(&s(q, p, nn)?)?.neg(),
            ));
            out.push(Eq2::Block(
                "s_s",
                sg(mm, nn)?.commutator(&sg(p, q)?)?,
                sg(&s(mm, nn, p)?, q)?.sub(&sg(p, &s(nn, mm, q)?)?)?,
            ));
        }
        BimoduleCheck::Jacobi => {
            let gens = [
                rep(&LieGen::U(a.clone()))?,
                rep(&LieGen::Ubar(b.clone()))?,
                rep(&LieGen::S(c.clone(), d.clone()))?,
            ];
            let [x, y, z] = std::array::from_fn(|k| {
                let other = &gens[(k + 1) % 3];
                gens[k]
                    .add(&other.scale_by(&f[(0, 0)]))
                    .expect("same shape")
            });
            let cyc = x
                .commutator(&y.commutator(&z)?)?
                .add(&y.commutator(&z.commutator(&x)?)?)?
                .add(&z.commutator(&x.commutator(&y)?)?)?;
            out.push(Eq2::Block("jacobi", cyc.clone(), BlockMatrix2::zeros(m, n)));
            let anti = x.commutator(&y)?.add(&y.commutator(&x)?)?;
            out.push(Eq2::Block("antisymmetry", anti, BlockMatrix2::zeros(m, n)));
        }
    }
    Ok(out)
}

/// Runs one check on `params.samples` random exact samples.
pub fn run_check(
    check: BimoduleCheck,
    form: SigmaForm,
    params: &LieParams,
) -> Result<Verdict<BimoduleWitness>, BimoduleError> {
    let LieParams {
        m,
        n,
        samples,
        seed,
    } = *params;
    if samples == 0 {
        return Err(BimoduleError::NoSamples);
    }
    if m == 0 || n == 0 {
        return Err(BimoduleError::ZeroShape);
    }
    for sample in 0..samples {
        let mut rng = stream_rng(seed, &[check as u64, sample as u64]);
        let x: [RectMatrix; 5] =
            std::array::from_fn(|_| Matrix::from_fn(m, n, |_, _| sample_scalar(&mut rng)));
        let eqs = sample_equations(check, form, m, n, &x, &mut rng)?;
        if let Some(relation) = eqs.iter().find_map(Eq2::failing) {
            return Ok(Verdict::fails(BimoduleWitness {
                relation,
                seed,
                sample,
                args: x.to_vec(),
            }));
        }
    }
    Ok(Verdict::holds_probable(coordinate_sample_bound(
        check.degree(),
        samples,
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: BimoduleCheck,
    pub sigma: SigmaForm,
    #[serde(flatten)]
    pub verdict: Verdict<BimoduleWitness>,
}

/// Every check; those depending on σ are run for both forms.
pub fn run_all(params: &LieParams) -> Result<Vec<CheckOutcome>, BimoduleError> {
    let mut out = Vec::new();
    for check in BimoduleCheck::ALL {
        let forms: &[SigmaForm] = if check.uses_sigma() {
            &SigmaForm::ALL
        } else {
            &[SigmaForm::Symmetric]
        };
        for &sigma in forms {
            out.push(CheckOutcome {
                check,
                sigma,
                verdict: run_check(check, sigma, params)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Status;

    fn int(rows: &[&[i64]]) -> RectMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn small() -> LieParams {
        LieParams {
            samples: 20,
            ..LieParams::default()
        }
    }

    #[test]
    fn tau_examples() {
        let two = int(&[&[2]]);
        assert_eq!(rect_tau(&two, &two, &two).unwrap(), int(&[&[8]]));
        let e = int(&[&[1, 0, 0], &[0, 0, 0]]);
        assert_eq!(rect_tau(&e, &e, &e).unwrap(), e);
        assert!(rect_tau(&e, &Matrix::zeros(2, 3), &e).unwrap().is_zero());
        assert!(rect_tau(&e, &two, &e).is_err());
        let one = int(&[&[1]]);
        assert_eq!(sigma(&one, &one, &one).unwrap(), int(&[&[2]]));
        let i = Matrix::from_fn(1, 1, |_, _| Scalar::i());
        assert_eq!(rect_tau(&one, &i, &one).unwrap(), i.neg());
    }

    #[test]
    fn literal_sigma_is_twice_tau() {
        let mut rng = stream_rng(0, &[]);
        let [x, y, z] =
            std::array::from_fn(|_| Matrix::from_fn(2, 3, |_, _| sample_scalar(&mut rng)));
        let tau = rect_tau(&x, &y, &z).unwrap();
        assert_eq!(sigma_literal(&x, &y, &z).unwrap(), tau.add(&tau).unwrap());
    }

    #[test]
    fn rep_examples() {
        let one = int(&[&[1]]);
        let s = rep(&LieGen::S(one.clone(), one.clone())).unwrap();
        assert_eq!(s.a, one);
        assert_eq!(s.b, one.neg());
        assert!(rep(&LieGen::U(Matrix::zeros(2, 3))).unwrap().is_zero());

        let p = int(&[&[1, 2, 0], &[0, -1, 3]]);
        let q = int(&[&[0, 1, 1], &[2, 0, -1]]);
        let pm = rep(&LieGen::U(p.clone())).unwrap();
        let qn = rep(&LieGen::Ubar(q.clone())).unwrap();
        let prod = pm.mul(&qn).unwrap();
        assert_eq!(prod.a, phi(&p, &q).unwrap());
        assert!(prod.b.is_zero() && prod.m_blk.is_zero() && prod.nbar_blk.is_zero());
        assert_eq!(pm.commutator(&qn).unwrap(), rep(&LieGen::S(p, q)).unwrap());
    }

    #[test]
    fn symmetric_sigma_passes_everything() {
        for outcome in run_all(&small()).unwrap() {
            if outcome.sigma == SigmaForm::Symmetric {
                assert_eq!(
                    outcome.verdict.status,
                    Status::HoldsProbable,
                    "{:?}",
                    outcome.check
                );
            }
        }
    }

    #[test]
    fn literal_sigma_failures() {
        let p = small();
        let status = |c| run_check(c, SigmaForm::Literal, &p).unwrap();
        assert!(status(BimoduleCheck::FiveIdentity).holds());
        let jordan = status(BimoduleCheck::Jordan);
        assert_eq!(jordan.witness.unwrap().relation, "outer_symmetry");
        let brackets = status(BimoduleCheck::Brackets);
        assert_eq!(brackets.witness.unwrap().relation, "s_u");
    }

    #[test]
    fn deterministic_and_validated() {
        let p = small();
        assert_eq!(
            run_check(BimoduleCheck::Block, SigmaForm::Symmetric, &p),
            run_check(BimoduleCheck::Block, SigmaForm::Symmetric, &p)
        );
        let none = LieParams { samples: 0, ..p };
        assert_eq!(
            run_check(BimoduleCheck::Block, SigmaForm::Symmetric, &none),
            Err(BimoduleError::NoSamples)
        );
        assert_eq!(
            "five-identity".parse::<BimoduleCheck>().unwrap(),
            BimoduleCheck::FiveIdentity
        );
    }
}
