//! Ternary commutators of order-2 cubic matrices under the cyclic product,
//! their tables in the generator basis, and the Pauli-matrix analogue.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubic::{CubicError, CubicMatrix};
use crate::matrix::{Matrix, ShapeError};
use crate::patterns::NamedProduct;
use crate::scalars::{Ring, Scalar};

#[derive(Debug, Error)]
pub enum BracketError {
    #[error("unknown bracket kind `{0}` (expected j, j2 or anti)")]
    UnknownKind(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("golden data is for the {golden} bracket, table is for {table}")]
    KindMismatch {
        golden: BracketKind,
        table: BracketKind,
    },
    #[error("malformed golden data: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// `[a,b,c] = abc + ω·bca + ω²·cab` with ω = j, j² or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BracketKind {
    J,
    J2,
    Anti,
}

impl BracketKind {
    pub const ALL: [BracketKind; 3] = [BracketKind::J, BracketKind::J2, BracketKind::Anti];

    pub fn name(self) -> &'static str {
        match self {
            BracketKind::J => "j",
            BracketKind::J2 => "j2",
            BracketKind::Anti => "anti",
        }
    }

    /// Coefficients of the three cyclic rotations.
    pub fn weights(self) -> [Scalar; 3] {
        match self {
            BracketKind::J => [Scalar::one(), Scalar::j(), Scalar::j2()],
            BracketKind::J2 => [Scalar::one(), Scalar::j2(), Scalar::j()],
            BracketKind::Anti => [Scalar::one(), Scalar::one(), Scalar::one()],
        }
    }

    /// Generators whose span contains every bracket of generators.
    pub fn claimed_span(self) -> &'static [Generator] {
        use Generator::*;
        match self {
            BracketKind::J => &[Rhob1, Rhob2],
            BracketKind::J2 => &[Rho1, Rho2],
            BracketKind::Anti => &[Eta1, Eta2, Om1, Om2],
        }
    }
}

impl fmt::Display for BracketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BracketKind {
    type Err = BracketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BracketKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| BracketError::UnknownKind(s.to_string()))
    }
}

/// The bracket of cubic matrices of any order, using the cyclic product.
pub fn ternary_bracket(
    kind: BracketKind,
    a: &CubicMatrix,
    b: &CubicMatrix,
    c: &CubicMatrix,
) -> Result<CubicMatrix, CubicError> {
    let p = NamedProduct::Circ.pattern();
    let [w0, w1, w2] = kind.weights();
    let terms = [
        p.evaluate(a, b, c)?.scale(&w0),
        p.evaluate(b, c, a)?.scale(&w1),
        p.evaluate(c, a, b)?.scale(&w2),
    ];
    terms[0].add(&terms[1])?.add(&terms[2])
}

/// The bracket of square matrices under the ordinary product.
pub fn square_ternary_bracket(
    kind: BracketKind,
    x: &Matrix<Scalar>,
    y: &Matrix<Scalar>,
    z: &Matrix<Scalar>,
) -> Result<Matrix<Scalar>, ShapeError> {
    let [w0, w1, w2] = kind.weights();
    let xyz = x.matmul(y)?.matmul(z)?;
    let yzx = y.matmul(z)?.matmul(x)?;
    let zxy = z.matmul(x)?.matmul(y)?;
    xyz.scale(&w0).add(&yzx.scale(&w1))?.add(&zxy.scale(&w2))
}

/// `[σ₁, σ₂, σ₃]`.
pub fn pauli() -> [Matrix<Scalar>; 3] {
    let (o, z, i) = (Scalar::one(), Scalar::zero(), Scalar::i());
    let row = |a: &Scalar, b: &Scalar| vec![a.clone(), b.clone()];
    [
        Matrix::from_rows(vec![row(&z, &o), row(&o, &z)]),
        Matrix::from_rows(vec![row(&z, &i.neg()), row(&i, &z)]),
        Matrix::from_rows(vec![row(&o, &z), row(&z, &o.neg())]),
    ]
    .map(|m| m.expect("2x2"))
}

/// Generators of the order-2 cubic matrices, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Eta1,
    Eta2,
    Om1,
    Om2,
    Rho1,
    Rho2,
    Rhob1,
    Rhob2,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::Eta1,
        Generator::Eta2,
        Generator::Om1,
        Generator::Om2,
        Generator::Rho1,
        Generator::Rho2,
        Generator::Rhob1,
        Generator::Rhob2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Eta1 => "eta1",
            Generator::Eta2 => "eta2",
            Generator::Om1 => "om1",
            Generator::Om2 => "om2",
            Generator::Rho1 => "rho1",
            Generator::Rho2 => "rho2",
            Generator::Rhob1 => "rhob1",
            Generator::Rhob2 => "rhob2",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The generator as a cubic matrix; entries listed 1-based.
    pub fn matrix(self) -> CubicMatrix {
        let (one, j, j2) = (Scalar::one(), Scalar::j(), Scalar::j2());
        let entries: Vec<((usize, usize, usize), Scalar)> = match self {
            Generator::Eta1 => vec![((1, 1, 1), one)],
            Generator::Eta2 => vec![((2, 2, 2), one)],
            Generator::Om1 => vec![
                ((2, 1, 2), one.clone()),
                ((2, 2, 1), one.clone()),
                ((1, 2, 2), one),
            ],
            Generator::Om2 => vec![
                ((1, 2, 1), one.clone()),
                ((1, 1, 2), one.clone()),
                ((2, 1, 1), one),
            ],
            Generator::Rho1 => vec![((2, 1, 2), one), ((1, 2, 2), j2), ((2, 2, 1), j)],
            Generator::Rho2 => vec![((1, 2, 1), one), ((2, 1, 1), j2), ((1, 1, 2), j)],
            Generator::Rhob1 => vec![((2, 1, 2), one), ((1, 2, 2), j), ((2, 2, 1), j2)],
            Generator::Rhob2 => vec![((1, 2, 1), one), ((2, 1, 1), j), ((1, 1, 2), j2)],
        };
        let mut m = CubicMatrix::zeros(2);
        for ((i, k, l), v) in entries {
            m[(i - 1, k - 1, l - 1)] = v;
        }
        m
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = BracketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| BracketError::UnknownGenerator(s.to_string()))
    }
}

pub type Coords = [Scalar; 8];

/// The eight generators together with the inverse of their coordinate
/// matrix, for expressing order-2 cubic matrices in the generator basis.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    matrices: [CubicMatrix; 8],
    inverse: Matrix<Scalar>,
}

impl Default for GeneratorBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl GeneratorBasis {
    pub fn new() -> Self {
        let matrices = Generator::ALL.map(Generator::matrix);
        let cols = Matrix::from_fn(8, 8, |r, c| matrices[c].coords()[r].clone());
        let inverse = cols.inverse().expect("generators are linearly independent");
        GeneratorBasis { matrices, inverse }
    }

    pub fn get(&self, g: Generator) -> &CubicMatrix {
        &self.matrices[g.index()]
    }

    pub fn coords(&self, m: &CubicMatrix) -> Result<Coords, BracketError> {
        if m.n() != 2 {
            return Err(CubicError::OrderMismatch {
                expected: 2,
                got: m.n(),
            }
            .into());
        }
        let v = self.inverse.mul_vec(m.coords())?;
        Ok(std::array::from_fn(|k| v[k].clone()))
    }

    pub fn combine(&self, coords: &Coords) -> CubicMatrix {
        let terms: Vec<_> = coords.iter().zip(&self.matrices).collect();
        CubicMatrix::lincomb(terms).expect("eight order-2 terms")
    }
}

pub type Triple = [Generator; 3];

/// Brackets of all ordered generator triples, in the generator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorTable {
    pub kind: BracketKind,
    pub entries: BTreeMap<Triple, Coords>,
}

/// All 512 ordered generator triples, lexicographic.
pub fn generator_triples() -> Vec<Triple> {
    let g = Generator::ALL;
    g.into_iter()
        .flat_map(|a| {
            g.into_iter()
                .flat_map(move |b| g.into_iter().map(move |c| [a, b, c]))
        })
        .collect()
}

pub fn build_table(kind: BracketKind) -> CommutatorTable {
    let basis = GeneratorBasis::new();
    let entries = generator_triples()
        .into_par_iter()
        .map(|t| {
            let [a, b, c] = t.map(|g| basis.get(g));
            let m = ternary_bracket(kind, a, b, c).expect("order 2");
            let coords = basis.coords(&m).expect("generators span");
            debug_assert_eq!(basis.combine(&coords), m);
            (t, coords)
        })
        .collect();
    CommutatorTable { kind, entries }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    args: Triple,
    coords: BTreeMap<Generator, Scalar>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    bracket: BracketKind,
    entries: Vec<EntryJson>,
}

fn sparse_coords(c: &Coords) -> BTreeMap<Generator, Scalar> {
    Generator::ALL
        .into_iter()
        .zip(c)
        .filter(|(_, v)| !v.is_zero())
        .map(|(g, v)| (g, v.clone()))
        .collect()
}

fn dense_coords(m: &BTreeMap<Generator, Scalar>) -> Coords {
    std::array::from_fn(|k| {
        m.get(&Generator::ALL[k])
            .cloned()
            .unwrap_or_else(Scalar::zero)
    })
}

impl CommutatorTable {
    pub fn get(&self, t: &Triple) -> Option<&Coords> {
        self.entries.get(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = TableJson {
            bracket: self.kind,
            entries: self
                .entries
                .iter()
                .map(|(args, c)| EntryJson {
                    args: *args,
                    coords: sparse_coords(c),
                })
                .collect(),
        };
        serde_json::to_value(t).expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("arg1,arg2,arg3");
        for g in Generator::ALL {
            out.push_str(&format!(",coeff_{g}"));
        }
        out.push('\n');
        for (args, coords) in &self.entries {
            let cells: Vec<String> = args
                .iter()
                .map(|g| g.to_string())
                .chain(coords.iter().map(|v| v.to_string()))
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Transcribed table rows. Rows may repeat and need not cover every triple.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenTable {
    pub kind: BracketKind,
    pub rows: Vec<(Triple, Coords)>,
}

impl GoldenTable {
    pub fn from_json(text: &str) -> Result<Self, BracketError> {
        let raw: TableJson = serde_json::from_str(text)?;
        Ok(GoldenTable {
            kind: raw.bracket,
            rows: raw
                .entries
                .iter()
                .map(|e| (e.args, dense_coords(&e.coords)))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub row: usize,
    pub args: Triple,
    pub expected: BTreeMap<Generator, Scalar>,
    pub computed: BTreeMap<Generator, Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenDiff {
    pub rows: usize,
    pub mismatches: Vec<Mismatch>,
}

impl GoldenDiff {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn compare_golden(
    table: &CommutatorTable,
    golden: &GoldenTable,
) -> Result<GoldenDiff, BracketError> {
    if table.kind != golden.kind {
        return Err(BracketError::KindMismatch {
            golden: golden.kind,
            table: table.kind,
        });
    }
    let mismatches = golden
        .rows
        .iter()
        .enumerate()
        .filter_map(|(row, (args, expected))| {
            let computed = table.get(args).expect("table is complete");
            (computed != expected).then(|| Mismatch {
                row: row + 1,
                args: *args,
                expected: sparse_coords(expected),
                computed: sparse_coords(computed),
            })
        })
        .collect();
    Ok(GoldenDiff {
        rows: golden.rows.len(),
        mismatches,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanClass {
    Zero,
    Proportional(Generator),
    Mixed,
    Outside,
}

pub fn classify_entry(kind: BracketKind, coords: &Coords) -> SpanClass {
    let claimed = kind.claimed_span();
    let support: Vec<Generator> = Generator::ALL
        .into_iter()
        .filter(|g| !coords[g.index()].is_zero())
        .collect();
    match support.as_slice() {
        [] => SpanClass::Zero,
        s if s.iter().any(|g| !claimed.contains(g)) => SpanClass::Outside,
        [g] => SpanClass::Proportional(*g),
        _ => SpanClass::Mixed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanReport {
    pub bracket: BracketKind,
    pub claimed: Vec<Generator>,
    pub total: usize,
    pub zero: usize,
    pub proportional: usize,
    pub mixed: usize,
    pub outside: usize,
    pub mixed_entries: Vec<Triple>,
    pub outside_entries: Vec<Triple>,
}

impl SpanReport {
    pub fn within_span(&self) -> bool {
        self.outside == 0
    }
}

pub fn span_report(table: &CommutatorTable) -> SpanReport {
    let mut r = SpanReport {
        bracket: table.kind,
        claimed: table.kind.claimed_span().to_vec(),
        total: table.entries.len(),
        zero: 0,
        proportional: 0,
        mixed: 0,
        outside: 0,
        mixed_entries: Vec::new(),
        outside_entries: Vec::new(),
    };
    for (args, coords) in &table.entries {
        match classify_entry(table.kind, coords) {
            SpanClass::Zero => r.zero += 1,
            SpanClass::Proportional(_) => r.proportional += 1,
            SpanClass::Mixed => {
                r.mixed += 1;
                r.mixed_entries.push(*args);
            }
            SpanClass::Outside => {
                r.outside += 1;
                r.outside_entries.push(*args);
            }
        }
    }
    r
}
