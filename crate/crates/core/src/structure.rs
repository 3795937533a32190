//! Finite-dimensional ternary algebras given by structure constants
//! `τ(e_α, e_β, e_γ) = C^δ_{αβγ} e_δ`.
//!
//! Identities that are multilinear are decided exactly on all basis tuples.
//! The second Jordan identity is not multilinear, so it is checked on all
//! basis triples plus random exact samples and only ever reported as
//! probable.
//!
//! Identity pairs are taken independent of the element they are attached
//! to: `(e, ẽ)` is an identity `i`-pair iff `L^i(e, ẽ)` is the identity.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::associativity::{AssocRelation, TotalKind};
use crate::brackets::BracketKind;
use crate::matrix::{Matrix, ShapeError};
use crate::patterns::ContractionPattern;
use crate::sampling::{sample_bound, sample_scalar, stream_rng};
use crate::scalars::{Ring, Scalar};
use crate::verdict::Verdict;

/// Largest dimension materialized as structure constants.
pub const MAX_DIMENSION: usize = 64;

/// Random exact samples used for the non-multilinear Jordan identity.
pub const JORDAN_SAMPLES: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("dimension {got} does not match {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} exceeds the limit of {MAX_DIMENSION}")]
    TooLarge(usize),
    #[error("no product given for basis triple ({0}, {1}, {2})")]
    MissingTriple(usize, usize, usize),
    #[error("slot must be 1, 2 or 3, got {0}")]
    BadSlot(usize),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Coordinates `a^α` of an element in the chosen basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<Scalar>);

impl Element {
    pub fn zero(r: usize) -> Self {
        Element(vec![Scalar::zero(); r])
    }

    pub fn basis(r: usize, alpha: usize) -> Self {
        let mut e = Self::zero(r);
        e.0[alpha] = Scalar::one();
        e
    }

    pub fn random<G: Rng + ?Sized>(r: usize, rng: &mut G) -> Self {
        Element((0..r).map(|_| sample_scalar(rng)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Ring::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Element(self.0.iter().map(|a| s.mul(a)).collect())
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().enumerate().filter(|(_, v)| !v.is_zero())
    }
}

/// Sparse products of basis triples: `products[(α·r + β)·r + γ]` lists
/// `(δ, C^δ_{αβγ})` for nonzero constants, sorted by δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryStructure {
    r: usize,
    products: Vec<Vec<(usize, Scalar)>>,
}

fn sparse(v: &Element) -> Vec<(usize, Scalar)> {
    v.nonzero().map(|(k, s)| (k, s.clone())).collect()
}

fn check_slot(i: usize) -> Result<(), StructureError> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(StructureError::BadSlot(i))
    }
}

/// Basis triples `(α, β, γ)` in lexicographic order.
fn triples(r: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..r).flat_map(move |a| (0..r).flat_map(move |b| (0..r).map(move |c| (a, b, c))))
}

impl TernaryStructure {
    pub fn zero(r: usize) -> Self {
        TernaryStructure {
            r,
            products: vec![Vec::new(); r * r * r],
        }
    }

    /// Builds from the products of basis triples.
    pub fn from_fn(
        r: usize,
        mut f: impl FnMut(usize, usize, usize) -> Element,
    ) -> Result<Self, StructureError> {
        if r > MAX_DIMENSION {
            return Err(StructureError::TooLarge(r));
        }
        let mut products = Vec::with_capacity(r * r * r);
        for (a, b, c) in triples(r) {
            let v = f(a, b, c);
            if v.dim() != r {
                return Err(StructureError::DimensionMismatch {
                    expected: r,
                    got: v.dim(),
                });
            }
            products.push(sparse(&v));
        }
        Ok(TernaryStructure { r, products })
    }

    /// Builds from an explicit table that must cover every basis triple.
    pub fn from_trilinear(
        r: usize,
        table: &HashMap<(usize, usize, usize), Element>,
    ) -> Result<Self, StructureError> {
        if let Some((a, b, c)) = triples(r).find(|t| !table.contains_key(t)) {
            return Err(StructureError::MissingTriple(a + 1, b + 1, c + 1));
        }
        Self::from_fn(r, |a, b, c| table[&(a, b, c)].clone())
    }

    /// The pattern product on order-`n` cubic matrices, in the basis of
    /// elementary matrices in lexicographic order.
    pub fn from_pattern(p: &ContractionPattern, n: usize) -> Result<Self, StructureError> {
        let r = n * n * n;
        if r > MAX_DIMENSION {
            return Err(StructureError::TooLarge(r));
        }
        let products = p
            .basis_product_table(n)
            .into_iter()
            .map(|e| {
                e.map(|d| vec![(d as usize, Scalar::one())])
                    .unwrap_or_default()
            })
            .collect();
        Ok(TernaryStructure { r, products })
    }

    /// Random structure with about `density·r` nonzero constants per triple.
    pub fn random<G: Rng + ?Sized>(r: usize, density: f64, rng: &mut G) -> Self {
        let mut products = vec![Vec::new(); r * r * r];
        for slot in &mut products {
            for d in 0..r {
                if rng.gen_bool(density) {
                    let v = sample_scalar(rng);
                    if !v.is_zero() {
                        slot.push((d, v));
                    }
                }
            }
        }
        TernaryStructure { r, products }
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.r + b) * self.r + c
    }

    /// `τ(e_α, e_β, e_γ)` as sparse `(δ, C^δ_{αβγ})` pairs.
    pub fn product(&self, a: usize, b: usize, c: usize) -> &[(usize, Scalar)] {
        &self.products[self.idx(a, b, c)]
    }

    /// The constant `C^δ_{αβγ}`.
    pub fn constant(&self, delta: usize, a: usize, b: usize, c: usize) -> Scalar {
        self.product(a, b, c)
            .iter()
            .find(|(d, _)| *d == delta)
            .map_or_else(Scalar::zero, |(_, v)| v.clone())
    }

    pub fn basis_product(&self, a: usize, b: usize, c: usize) -> Element {
        let mut out = Element::zero(self.r);
        for (d, v) in self.product(a, b, c) {
            out.0[*d] = v.clone();
        }
        out
    }

    fn check_dim(&self, e: &Element) -> Result<(), StructureError> {
        if e.dim() != self.r {
            return Err(StructureError::DimensionMismatch {
                expected: self.r,
                got: e.dim(),
            });
        }
        Ok(())
    }

    /// `τ(a, b, c) = C^δ_{αβγ} a^α b^β c^γ e_δ`.
    pub fn multiply(
        &self,
        a: &Element,
        b: &Element,
        c: &Element,
    ) -> Result<Element, StructureError> {
        for e in [a, b, c] {
            self.check_dim(e)?;
        }
        Ok(self.mul(a, b, c))
    }

    fn mul(&self, a: &Element, b: &Element, c: &Element) -> Element {
        let mut out = Element::zero(self.r);
        for (al, x) in a.nonzero() {
            for (be, y) in b.nonzero() {
                let xy = x.mul(y);
                for (ga, z) in c.nonzero() {
                    let prods = self.product(al, be, ga);
                    if prods.is_empty() {
                        continue;
                    }
                    let xyz = xy.mul(z);
                    for (d, v) in prods {
                        out.0[*d].add_product(&xyz, v);
                    }
                }
            }
        }
        out
    }

    /// Structure constants in the basis `ẽ_α = A^ε_α e_ε` (column α of
    /// `a`): `C̃(α,β,γ) = A⁻¹ · τ(ẽ_α, ẽ_β, ẽ_γ)`.
    pub fn change_basis(&self, a: &Matrix<Scalar>) -> Result<Self, StructureError> {
        if a.shape() != (self.r, self.r) {
            return Err(StructureError::DimensionMismatch {
                expected: self.r,
                got: a.rows(),
            });
        }
        let inv = a.inverse()?;
        let cols: Vec<Element> = (0..self.r).map(|k| Element(a.column(k))).collect();
        Self::from_fn(self.r, |x, y, z| {
            let v = self.mul(&cols[x], &cols[y], &cols[z]);
            Element(inv.mul_vec(&v.0).expect("square"))
        })
    }

    /// The structure of `B(a,b,c) = τ(a,b,c) + ω·τ(b,c,a) + ω²·τ(c,a,b)`.
    pub fn bracket(&self, kind: BracketKind) -> Self {
        let [w0, w1, w2] = kind.weights();
        Self::from_fn(self.r, |a, b, c| {
            let mut v = self.basis_product(a, b, c).scale(&w0);
            v = v.add(&self.basis_product(b, c, a).scale(&w1));
            v.add(&self.basis_product(c, a, b).scale(&w2))
        })
        .expect("same dimension")
    }

    /// The structure of `σ(a,b,c) = τ(a,b,c) + τ(c,b,a)`.
    pub fn symmetrize_outer(&self) -> Self {
        Self::from_fn(self.r, |a, b, c| {
            self.basis_product(a, b, c)
                .add(&self.basis_product(c, b, a))
        })
        .expect("same dimension")
    }

    /// `τ(a,b,c) + ⋆τ(⋆c, ⋆b, ⋆a)` for the involution `⋆x = J·x̄`.
    pub fn hermitian_part(&self, j: &Matrix<Scalar>) -> Self {
        let inv = Involution(j);
        Self::from_fn(self.r, |a, b, c| {
            let e = |k| inv.apply(&Element::basis(self.r, k));
            let mirrored = inv.apply(&self.mul(&e(c), &e(b), &e(a)));
            self.basis_product(a, b, c).add(&mirrored)
        })
        .expect("same dimension")
    }

    /// The binary product obtained by fixing slot `i` (1-based) to `a`.
    pub fn induced_binary(&self, i: usize, a: &Element) -> Result<BinaryStructure, StructureError> {
        check_slot(i)?;
        self.check_dim(a)?;
        let r = self.r;
        let mut k = vec![Vec::new(); r * r];
        for x in 0..r {
            for y in 0..r {
                let mut acc = Element::zero(r);
                for (g, ag) in a.nonzero() {
                    let (p, q, s) = match i {
                        1 => (g, x, y),
                        2 => (x, g, y),
                        _ => (x, y, g),
                    };
                    for (d, v) in self.product(p, q, s) {
                        acc.0[*d].add_product(ag, v);
                    }
                }
                k[x * r + y] = sparse(&acc);
            }
        }
        Ok(BinaryStructure { r, k })
    }

    /// The operator `L^i(a, b)` as an `r × r` matrix whose column γ is the
    /// image of `e_γ`.
    pub fn l_operator(
        &self,
        i: usize,
        a: &Element,
        b: &Element,
    ) -> Result<Matrix<Scalar>, StructureError> {
        check_slot(i)?;
        self.check_dim(a)?;
        self.check_dim(b)?;
        let images: Vec<Element> = (0..self.r)
            .map(|g| {
                let c = Element::basis(self.r, g);
                match i {
                    1 => self.mul(&c, a, b),
                    2 => self.mul(a, &c, b),
                    _ => self.mul(a, b, &c),
                }
            })
            .collect();
        Ok(Matrix::from_fn(self.r, self.r, |row, col| {
            images[col].0[row].clone()
        }))
    }

    /// Whether `L^i(e, ẽ)` is the identity.
    pub fn is_identity_pair(
        &self,
        i: usize,
        e: &Element,
        e_tilde: &Element,
    ) -> Result<bool, StructureError> {
        Ok(self.l_operator(i, e, e_tilde)? == Matrix::identity(self.r))
    }

    /// Solves `L^i(e, x) = id` for `x` (linear in `x`). Free coordinates are
    /// set to zero; `None` if there is no solution.
    pub fn solve_partner(&self, i: usize, e: &Element) -> Result<Option<Element>, StructureError> {
        let r = self.r;
        let mut columns = Vec::with_capacity(r);
        for beta in 0..r {
            columns.push(self.l_operator(i, e, &Element::basis(r, beta))?);
        }
        // unknowns x^β; one equation per entry of the r×r operator
        let system = Matrix::from_fn(r * r, r, |eq, beta| columns[beta][(eq / r, eq % r)].clone());
        let rhs: Vec<Scalar> = (0..r * r)
            .map(|eq| {
                if eq / r == eq % r {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        Ok(system.solve(&rhs)?.map(Element))
    }

    /// Decides one associativity relation on all basis 5-tuples.
    pub fn check_assoc(&self, rel: AssocRelation) -> Verdict<StructWitness> {
        let r = self.r;
        let t = |a: &Element, b: &Element, c: &Element| self.mul(a, b, c);
        let basis: Vec<Element> = (0..r).map(|k| Element::basis(r, k)).collect();
        let failure = (0..r).into_par_iter().find_map_first(|a| {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        for f in 0..r {
                            let args = [a, b, c, d, f].map(|k| basis[k].clone());
                            if !rel.holds_on(&t, &args) {
                                return Some(vec![a, b, c, d, f]);
                            }
                        }
                    }
                }
            }
            None
        });
        basis_verdict(failure)
    }

    /// Total associativity of the given kind, from exact per-relation checks.
    pub fn check_total(&self, kind: TotalKind) -> Verdict<StructWitness> {
        let verdicts: Vec<(AssocRelation, Verdict<StructWitness>)> = kind
            .chain()
            .into_iter()
            .map(|rel| (rel, self.check_assoc(rel)))
            .collect();
        let holds = |r: AssocRelation| verdicts.iter().any(|(x, v)| *x == r && v.holds());
        if kind.holds(holds) {
            Verdict::holds_exact()
        } else {
            let (_, v) = verdicts
                .into_iter()
                .find(|(_, v)| !v.holds())
                .expect("some relation fails");
            v
        }
    }

    /// `τⁱ_a(τⁱ_b(c, d), f) = τⁱ_b(c, τⁱ_a(d, f))` on random exact samples.
    pub fn assoc_family_check(
        &self,
        i: usize,
        trials: u32,
        seed: u64,
    ) -> Result<Verdict<StructWitness>, StructureError> {
        check_slot(i)?;
        let bin = |a: &Element, x: &Element, y: &Element| match i {
            1 => self.mul(a, x, y),
            2 => self.mul(x, a, y),
            _ => self.mul(x, y, a),
        };
        for trial in 0..trials {
            let mut rng = stream_rng(seed, &[i as u64, trial as u64]);
            let [a, b, c, d, f] = std::array::from_fn(|_| Element::random(self.r, &mut rng));
            let lhs = bin(&a, &bin(&b, &c, &d), &f);
            let rhs = bin(&b, &c, &bin(&a, &d, &f));
            if lhs != rhs {
                return Ok(Verdict::fails(StructWitness::Sample {
                    seed,
                    trial,
                    args: vec![a, b, c, d, f],
                }));
            }
        }
        Ok(Verdict::holds_probable(sample_bound(5, trials)))
    }

    /// `Σ_{π∈S₃} τ(a_π(1), a_π(2), a_π(3)) = 0` on all basis triples.
    pub fn lie_type_first(&self) -> Verdict<StructWitness> {
        self.check_basis_triples(|a, b, c| {
            let perms = [
                (a, b, c),
                (b, c, a),
                (c, a, b),
                (a, c, b),
                (c, b, a),
                (b, a, c),
            ];
            let sum = perms.iter().fold(Element::zero(self.r), |acc, &(x, y, z)| {
                acc.add(&self.basis_product(x, y, z))
            });
            sum.is_zero()
        })
    }

    /// `τ(a,b,c) + τ(b,c,a) + τ(c,a,b) = 0` on all basis triples.
    pub fn lie_type_second(&self) -> Verdict<StructWitness> {
        self.check_basis_triples(|a, b, c| {
            self.basis_product(a, b, c)
                .add(&self.basis_product(b, c, a))
                .add(&self.basis_product(c, a, b))
                .is_zero()
        })
    }

    /// `τ(a,b,c) = j·τ(b,c,a) = j²·τ(c,a,b)` on all basis triples.
    pub fn is_j_skew(&self) -> Verdict<StructWitness> {
        self.check_basis_triples(|a, b, c| {
            let v = self.basis_product(a, b, c);
            v == self.basis_product(b, c, a).scale(&Scalar::j())
                && v == self.basis_product(c, a, b).scale(&Scalar::j2())
        })
    }

    /// `τ(a,b,c) = ⋆τ(⋆c, ⋆b, ⋆a)` on all basis triples, for `⋆x = J·x̄`.
    pub fn is_hermitian(&self, j: &Matrix<Scalar>) -> Verdict<StructWitness> {
        let inv = Involution(j);
        self.check_basis_triples(|a, b, c| {
            self.basis_product(a, b, c) == inv.adjoint_product(self, c, b, a)
        })
    }

    /// `τ(a,b,c) = j²·τ*(b,a,c) = j·τ*(a,c,b)` with `τ*(x,y,z) = ⋆τ(⋆x,⋆y,⋆z)`,
    /// on all basis triples.
    pub fn hermitian_j_skew_chain(&self, j: &Matrix<Scalar>) -> Verdict<StructWitness> {
        let inv = Involution(j);
        self.check_basis_triples(|a, b, c| {
            let v = self.basis_product(a, b, c);
            v == inv.adjoint_product(self, b, a, c).scale(&Scalar::j2())
                && v == inv.adjoint_product(self, a, c, b).scale(&Scalar::j())
        })
    }

    /// Both Jordan identities: outer symmetry exactly on basis triples; the
    /// nested identity on basis triples and [`JORDAN_SAMPLES`] random exact
    /// triples.
    pub fn is_jordan_type(&self, seed: u64) -> Verdict<StructWitness> {
        let symmetric = self.check_basis_triples(|a, b, c| {
            self.basis_product(a, b, c) == self.basis_product(c, b, a)
        });
        if !symmetric.holds() {
            return symmetric;
        }
        let nested = |a: &Element, b: &Element, c: &Element| {
            let aba = self.mul(a, b, a);
            self.mul(&self.mul(a, b, c), b, &aba) == self.mul(a, b, &self.mul(c, b, &aba))
        };
        let basis: Vec<Element> = (0..self.r).map(|k| Element::basis(self.r, k)).collect();
        if let Some((a, b, c)) =
            triples(self.r).find(|&(a, b, c)| !nested(&basis[a], &basis[b], &basis[c]))
        {
            return Verdict::fails(StructWitness::Basis {
                indices: vec![a + 1, b + 1, c + 1],
            });
        }
        for trial in 0..JORDAN_SAMPLES {
            let mut rng = stream_rng(seed, &[trial as u64]);
            let [a, b, c] = std::array::from_fn(|_| Element::random(self.r, &mut rng));
            if !nested(&a, &b, &c) {
                return Verdict::fails(StructWitness::Sample {
                    seed,
                    trial,
                    args: vec![a, b, c],
                });
            }
        }
        Verdict::holds_probable(sample_bound(7, JORDAN_SAMPLES))
    }

    fn check_basis_triples(
        &self,
        pred: impl Fn(usize, usize, usize) -> bool + Sync,
    ) -> Verdict<StructWitness> {
        let r = self.r;
        let failure = (0..r).into_par_iter().find_map_first(|a| {
            (0..r)
                .flat_map(|b| (0..r).map(move |c| (b, c)))
                .find(|&(b, c)| !pred(a, b, c))
                .map(|(b, c)| vec![a, b, c])
        });
        basis_verdict(failure)
    }

    /// Nonzero constants `(δ, α, β, γ, value)`, 0-based, lexicographic.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, usize, Scalar)> {
        let mut out: Vec<_> = triples(self.r)
            .flat_map(|(a, b, c)| {
                self.product(a, b, c)
                    .iter()
                    .map(move |(d, v)| (*d, a, b, c, v.clone()))
            })
            .collect();
        out.sort_by_key(|x| (x.0, x.1, x.2, x.3));
        out
    }
}

fn basis_verdict(failure: Option<Vec<usize>>) -> Verdict<StructWitness> {
    match failure {
        None => Verdict::holds_exact(),
        Some(idx) => Verdict::fails(StructWitness::Basis {
            indices: idx.into_iter().map(|k| k + 1).collect(),
        }),
    }
}

/// The antilinear involution `⋆x = J·x̄`.
struct Involution<'a>(&'a Matrix<Scalar>);

impl Involution<'_> {
    fn apply(&self, x: &Element) -> Element {
        let conj: Vec<Scalar> = x.0.iter().map(Scalar::conj).collect();
        Element(self.0.mul_vec(&conj).expect("dimension checked by caller"))
    }

    /// `⋆τ(⋆e_x, ⋆e_y, ⋆e_z)`.
    fn adjoint_product(&self, s: &TernaryStructure, x: usize, y: usize, z: usize) -> Element {
        let e = |k| self.apply(&Element::basis(s.r, k));
        self.apply(&s.mul(&e(x), &e(y), &e(z)))
    }
}

/// Counterexample to a structure identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructWitness {
    /// 1-based basis indices.
    Basis { indices: Vec<usize> },
    /// Random exact elements, reproducible from `(seed, trial)`.
    Sample {
        seed: u64,
        trial: u32,
        args: Vec<Element>,
    },
}

/// Binary algebra `x·y = K^δ_{αβ} x^α y^β e_δ`, stored sparsely per `(α, β)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryStructure {
    r: usize,
    k: Vec<Vec<(usize, Scalar)>>,
}

impl BinaryStructure {
    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn constant(&self, delta: usize, a: usize, b: usize) -> Scalar {
        self.k[a * self.r + b]
            .iter()
            .find(|(d, _)| *d == delta)
            .map_or_else(Scalar::zero, |(_, v)| v.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.k.iter().all(Vec::is_empty)
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero(self.r);
        for (a, xa) in x.nonzero() {
            for (b, yb) in y.nonzero() {
                let xy = xa.mul(yb);
                for (d, v) in &self.k[a * self.r + b] {
                    out.0[*d].add_product(&xy, v);
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    r: usize,
    #[serde(rename = "C")]
    c: Vec<(usize, usize, usize, usize, Scalar)>,
}

impl Serialize for TernaryStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StructureJson {
            r: self.r,
            c: self
                .nonzero_constants()
                .into_iter()
                .map(|(d, a, b, c, v)| (d + 1, a + 1, b + 1, c + 1, v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TernaryStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = StructureJson::deserialize(d)?;
        let r = raw.r;
        if r > MAX_DIMENSION {
            return Err(D::Error::custom(StructureError::TooLarge(r)));
        }
        let mut out = TernaryStructure::zero(r);
        for (dl, a, b, c, v) in raw.c {
            if [dl, a, b, c].iter().any(|&x| x == 0 || x > r) {
                return Err(D::Error::custom(format!(
                    "index out of range in ({dl}, {a}, {b}, {c})"
                )));
            }
            let idx = out.idx(a - 1, b - 1, c - 1);
            let slot = &mut out.products[idx];
            slot.retain(|(x, _)| *x != dl - 1);
            if !v.is_zero() {
                slot.push((dl - 1, v));
                slot.sort_by_key(|(x, _)| *x);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::CubicMatrix;
    use crate::patterns::NamedProduct;
    use crate::verdict::Status;

    fn t1() -> TernaryStructure {
        TernaryStructure::from_pattern(&NamedProduct::T1.pattern(), 2).unwrap()
    }

    #[test]
    fn pattern_structure_matches_evaluation() {
        let p = NamedProduct::T1.pattern();
        let s = t1();
        let mut rng = stream_rng(3, &[]);
        for _ in 0..3 {
            let m: [CubicMatrix; 3] =
                std::array::from_fn(|_| CubicMatrix::from_fn(2, |_, _, _| sample_scalar(&mut rng)));
            let e = m.each_ref().map(|x| Element(x.coords().to_vec()));
            let direct = p.evaluate(&m[0], &m[1], &m[2]).unwrap();
            assert_eq!(s.multiply(&e[0], &e[1], &e[2]).unwrap().0, direct.coords());
        }
    }

    #[test]
    fn order_one_collapses() {
        for p in NamedProduct::ALL {
            let s = TernaryStructure::from_pattern(&p.pattern(), 1).unwrap();
            assert_eq!(s.constant(0, 0, 0, 0), Scalar::one());
        }
    }

    #[test]
    fn change_basis_scalar_and_round_trip() {
        let s = t1();
        let two = Matrix::identity(8).scale(&Scalar::from_i64(2));
        let scaled = s.change_basis(&two).unwrap();
        for (d, a, b, c, v) in s.nonzero_constants() {
            assert_eq!(scaled.constant(d, a, b, c), v.mul(&Scalar::from_i64(4)));
        }
        let mut a = Matrix::identity(8);
        a[(0, 3)] = Scalar::from_i64(2);
        a[(5, 1)] = Scalar::j();
        a[(6, 7)] = Scalar::from_i64(-1);
        let back = s
            .change_basis(&a)
            .unwrap()
            .change_basis(&a.inverse().unwrap())
            .unwrap();
        assert_eq!(back, s);
        assert_eq!(s.change_basis(&Matrix::identity(8)).unwrap(), s);
    }

    #[test]
    fn change_basis_composes() {
        let mut rng = stream_rng(5, &[]);
        let s = TernaryStructure::random(3, 0.5, &mut rng);
        let unipotent = |rng: &mut rand_chacha::ChaCha8Rng| {
            Matrix::from_fn(3, 3, |r, c| match r.cmp(&c) {
                std::cmp::Ordering::Equal => Scalar::one(),
                std::cmp::Ordering::Less => sample_scalar(rng),
                std::cmp::Ordering::Greater => Scalar::zero(),
            })
        };
        let a = unipotent(&mut rng);
        let b = unipotent(&mut rng).transpose();
        let stepwise = s.change_basis(&a).unwrap().change_basis(&b).unwrap();
        assert_eq!(stepwise, s.change_basis(&a.matmul(&b).unwrap()).unwrap());
        assert!(matches!(
            s.change_basis(&Matrix::zeros(3, 3)),
            Err(StructureError::Shape(ShapeError::Singular))
        ));
    }

    #[test]
    fn induced_binary_agrees_with_multiply() {
        let s = t1();
        let mut rng = stream_rng(1, &[]);
        let a = Element::random(8, &mut rng);
        let (x, y) = (Element::random(8, &mut rng), Element::random(8, &mut rng));
        for i in 1..=3 {
            let k = s.induced_binary(i, &a).unwrap();
            let expected = match i {
                1 => s.multiply(&a, &x, &y),
                2 => s.multiply(&x, &a, &y),
                _ => s.multiply(&x, &y, &a),
            }
            .unwrap();
            assert_eq!(k.multiply(&x, &y), expected);
        }
        assert!(s.induced_binary(2, &Element::zero(8)).unwrap().is_zero());
        let k = s.induced_binary(3, &Element::basis(8, 5)).unwrap();
        assert_eq!(k.constant(0, 0, 5), s.constant(0, 0, 5, 5));
    }

    #[test]
    fn l_operator_relations_and_identity_pair() {
        let s = t1();
        let mut rng = stream_rng(2, &[]);
        let [a, b, c] = std::array::from_fn(|_| Element::random(8, &mut rng));
        let apply = |m: &Matrix<Scalar>, v: &Element| Element(m.mul_vec(&v.0).unwrap());
        let l1 = apply(&s.l_operator(1, &c, &b).unwrap(), &a);
        let l2 = apply(&s.l_operator(2, &a, &b).unwrap(), &c);
        let l3 = apply(&s.l_operator(3, &a, &c).unwrap(), &b);
        assert_eq!(l1, l2);
        assert_eq!(l2, l3);

        // E_{il1} = δ_{il}: entries (1,1,1) and (2,2,1)
        let mut e = Element::zero(8);
        e.0[0] = Scalar::one();
        e.0[6] = Scalar::one();
        assert!(s.is_identity_pair(3, &e, &e).unwrap());
        let partner = s.solve_partner(3, &e).unwrap().unwrap();
        assert!(s.is_identity_pair(3, &e, &partner).unwrap());
        assert_eq!(s.solve_partner(3, &Element::zero(8)).unwrap(), None);
        assert!(!TernaryStructure::zero(8)
            .is_identity_pair(3, &e, &e)
            .unwrap());
    }

    #[test]
    fn matrix_triple_product_is_first_kind() {
        let unit = |k: usize| {
            Matrix::from_fn(2, 2, |r, c| {
                if r * 2 + c == k {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
        };
        let mut table = HashMap::new();
        for (a, b, c) in triples(4) {
            let p = unit(a).matmul(&unit(b)).unwrap().matmul(&unit(c)).unwrap();
            table.insert(
                (a, b, c),
                Element((0..4).map(|k| p[(k / 2, k % 2)].clone()).collect()),
            );
        }
        let s = TernaryStructure::from_trilinear(4, &table).unwrap();
        assert_eq!(s.check_total(TotalKind::First).status, Status::HoldsExact);
        table.remove(&(1, 2, 3));
        assert_eq!(
            TernaryStructure::from_trilinear(4, &table),
            Err(StructureError::MissingTriple(2, 3, 4))
        );
    }

    #[test]
    fn family_relation() {
        let s = t1();
        assert!(s.assoc_family_check(2, 5, 1).unwrap().holds());
        let circ = TernaryStructure::from_pattern(&NamedProduct::Circ.pattern(), 2).unwrap();
        assert_eq!(
            circ.assoc_family_check(2, 5, 1).unwrap().status,
            Status::Fails
        );
    }

    #[test]
    fn bracket_predicates() {
        let circ = TernaryStructure::from_pattern(&NamedProduct::Circ.pattern(), 2).unwrap();
        let b = circ.bracket(BracketKind::J);
        assert!(b.is_j_skew().holds());
        assert!(b.lie_type_second().holds());
        assert!(b.lie_type_first().holds());
        assert!(!circ.lie_type_second().holds());
        let anti = circ.bracket(BracketKind::Anti);
        let rot = |a, b, c| anti.basis_product(a, b, c);
        assert_eq!(rot(0, 3, 5), rot(3, 5, 0));
    }

    #[test]
    fn hermitian_j_skew_chain() {
        let mut rng = stream_rng(8, &[]);
        let s = TernaryStructure::random(3, 0.4, &mut rng).bracket(BracketKind::J);
        let id = Matrix::identity(3);
        let h = s.hermitian_part(&id);
        assert!(h.is_hermitian(&id).holds());
        assert!(h.is_j_skew().holds());
        assert!(h.hermitian_j_skew_chain(&id).holds());
        assert!(!s.is_hermitian(&id).holds());
    }

    #[test]
    fn jordan_from_t1() {
        let sigma = t1().symmetrize_outer();
        assert_eq!(sigma.is_jordan_type(4).status, Status::HoldsProbable);
    }

    #[test]
    fn json_round_trip() {
        let s = t1();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"r":8,"C":[[1,1,1,1,"1"]"#));
        assert_eq!(serde_json::from_str::<TernaryStructure>(&json).unwrap(), s);
    }
}
