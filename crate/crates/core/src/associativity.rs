//! Partial and total associativity of pattern products, and the
//! classification of all 7560 canonical patterns.
//!
//! Each relation compares two of the four bracketings of a five-argument
//! product:
//!
//! | side | expression |
//! |------|------------|
//! | `L`  | τ(τ(a,b,c),d,f) |
//! | `C1` | τ(a,τ(b,c,d),f) |
//! | `C2` | τ(a,τ(d,c,b),f) |
//! | `R`  | τ(a,b,τ(c,d,f)) |
//!
//! `LR = L·R`, `LC1 = L·C1`, `CR1 = C1·R` (first kind) and `LC2 = L·C2`,
//! `CR2 = C2·R` (second kind). A product is totally associative of the first
//! kind when any two of `LR, LC1, CR1` hold, and of the second kind when
//! `LR` and one of `LC2, CR2` hold.
//!
//! Both sides are multilinear, so an identity holds iff it holds on every
//! 5-tuple of elementary cubic matrices. On elementary inputs a pattern
//! product is again elementary or zero, which makes the exact check a pure
//! table-lookup loop. The random check evaluates over 𝔽_p with a
//! Schwartz–Zippel bound of `(5/p)^trials`.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cubic::CubicMatrix;
use crate::patterns::{enumerate_patterns, ContractionPattern, Label};
use crate::sampling::stream_rng;
use crate::scalars::{DefaultFp, Ring, Scalar, DEFAULT_PRIME};
use crate::verdict::{ProbBound, Status, Verdict};

/// Largest order accepted by [`check_exact`].
pub const MAX_EXACT_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssocError {
    #[error("order {0} is too large for the exact check (max {MAX_EXACT_ORDER})")]
    OrderTooLarge(usize),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("order must be positive")]
    ZeroOrder,
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
}

/// One bracketing of the five-argument product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    L,
    C1,
    C2,
    R,
}

impl Side {
    /// Evaluates this bracketing of `t` on `(a, b, c, d, f)`.
    pub fn apply<X, T: Fn(&X, &X, &X) -> X>(self, t: &T, args: &[X; 5]) -> X {
        let [a, b, c, d, f] = args;
        match self {
            Side::L => t(&t(a, b, c), d, f),
            Side::C1 => t(a, &t(b, c, d), f),
            Side::C2 => t(a, &t(d, c, b), f),
            Side::R => t(a, b, &t(c, d, f)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AssocRelation {
    LR,
    LC1,
    CR1,
    LC2,
    CR2,
}

impl AssocRelation {
    pub const ALL: [AssocRelation; 5] = [
        AssocRelation::LR,
        AssocRelation::LC1,
        AssocRelation::CR1,
        AssocRelation::LC2,
        AssocRelation::CR2,
    ];

    pub const FIRST_KIND: [AssocRelation; 3] =
        [AssocRelation::LR, AssocRelation::LC1, AssocRelation::CR1];

    pub const SECOND_KIND: [AssocRelation; 3] =
        [AssocRelation::LR, AssocRelation::LC2, AssocRelation::CR2];

    pub fn sides(self) -> (Side, Side) {
        match self {
            AssocRelation::LR => (Side::L, Side::R),
            AssocRelation::LC1 => (Side::L, Side::C1),
            AssocRelation::CR1 => (Side::C1, Side::R),
            AssocRelation::LC2 => (Side::L, Side::C2),
            AssocRelation::CR2 => (Side::C2, Side::R),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AssocRelation::LR => "LR",
            AssocRelation::LC1 => "LC1",
            AssocRelation::CR1 => "CR1",
            AssocRelation::LC2 => "LC2",
            AssocRelation::CR2 => "CR2",
        }
    }

    /// Whether the relation holds for the product `t` on one argument tuple.
    pub fn holds_on<X: PartialEq, T: Fn(&X, &X, &X) -> X>(self, t: &T, args: &[X; 5]) -> bool {
        let (l, r) = self.sides();
        l.apply(t, args) == r.apply(t, args)
    }
}

impl fmt::Display for AssocRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AssocRelation {
    type Err = AssocError;

    fn from_str(s: &str) -> Result<Self, AssocError> {
        AssocRelation::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| AssocError::UnknownRelation(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TotalKind {
    First,
    Second,
}

impl TotalKind {
    /// Decides the total kind from per-relation outcomes.
    pub fn holds(self, holds: impl Fn(AssocRelation) -> bool) -> bool {
        use AssocRelation::*;
        match self {
            TotalKind::First => [LR, LC1, CR1].into_iter().filter(|&r| holds(r)).count() >= 2,
            TotalKind::Second => holds(LR) && (holds(LC2) || holds(CR2)),
        }
    }

    /// The relations of the full chain for this kind.
    pub fn chain(self) -> [AssocRelation; 3] {
        match self {
            TotalKind::First => AssocRelation::FIRST_KIND,
            TotalKind::Second => AssocRelation::SECOND_KIND,
        }
    }
}

impl FromStr for TotalKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "first" => Ok(TotalKind::First),
            "second" => Ok(TotalKind::Second),
            _ => Err(format!("unknown kind {s:?}, expected first or second")),
        }
    }
}

/// Where a counterexample came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessOrigin {
    /// Random tuple over 𝔽_p, reproducible from `(seed, trial)`.
    Random { seed: u64, trial: u32, modulus: u64 },
    /// Elementary matrices at the given 1-based index triples.
    Basis { indices: [[usize; 3]; 5] },
}

/// A 5-tuple on which the two sides of a relation differ. Random witnesses
/// are lifted to integer representatives, so every witness is exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssocWitness {
    pub origin: WitnessOrigin,
    pub args: [CubicMatrix; 5],
}

impl AssocWitness {
    /// Re-evaluates both sides exactly; true iff they differ.
    pub fn confirms(&self, p: &ContractionPattern, rel: AssocRelation) -> bool {
        let t = |a: &CubicMatrix, b: &CubicMatrix, c: &CubicMatrix| {
            p.evaluate(a, b, c).expect("equal orders")
        };
        !rel.holds_on(&t, &self.args)
    }
}

pub type AssocVerdict = Verdict<AssocWitness>;

/// A verdict labelled with its relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationVerdict {
    pub relation: AssocRelation,
    #[serde(flatten)]
    pub verdict: AssocVerdict,
}

/// Stable integer key of a pattern (base-6 digits of its labels).
fn pattern_key(p: &ContractionPattern) -> u64 {
    p.slots()
        .iter()
        .fold(0, |acc, l| acc * 6 + l.index() as u64)
}

fn trial_rng(
    p: &ContractionPattern,
    rel: AssocRelation,
    n: usize,
    seed: u64,
    trial: u32,
) -> ChaCha8Rng {
    stream_rng(seed, &[pattern_key(p), rel as u64, n as u64, trial as u64])
}

fn lift(m: &CubicMatrix<DefaultFp>) -> CubicMatrix {
    m.map(|v| Scalar::from_i64(v.value() as i64))
}

/// Checks `rel` on `trials` uniformly random 5-tuples over 𝔽_p. The random
/// stream depends only on `(seed, pattern, rel, n, trial)`.
pub fn check_random(
    p: &ContractionPattern,
    rel: AssocRelation,
    n: usize,
    trials: u32,
    seed: u64,
) -> Result<AssocVerdict, AssocError> {
    if trials == 0 {
        return Err(AssocError::NoTrials);
    }
    if n == 0 {
        return Err(AssocError::ZeroOrder);
    }
    let t = |a: &CubicMatrix<DefaultFp>, b: &CubicMatrix<DefaultFp>, c: &CubicMatrix<DefaultFp>| {
        p.evaluate(a, b, c).expect("equal orders")
    };
    for trial in 0..trials {
        let mut rng = trial_rng(p, rel, n, seed, trial);
        let args: [CubicMatrix<DefaultFp>; 5] =
            std::array::from_fn(|_| CubicMatrix::from_fn(n, |_, _, _| DefaultFp::random(&mut rng)));
        if !rel.holds_on(&t, &args) {
            return Ok(Verdict::fails(AssocWitness {
                origin: WitnessOrigin::Random {
                    seed,
                    trial,
                    modulus: DEFAULT_PRIME,
                },
                args: args.each_ref().map(lift),
            }));
        }
    }
    Ok(Verdict::holds_probable(ProbBound {
        numerator: 5,
        denominator: DEFAULT_PRIME,
        trials,
    }))
}

const NONE: u32 = u32::MAX;

/// First basis 5-tuple (lexicographic) violating `rel`, if any.
fn exact_kernel(table: &[u32], r: usize, rel: AssocRelation) -> Option<[usize; 5]> {
    let t = |x: &u32, y: &u32, z: &u32| {
        if *x == NONE || *y == NONE || *z == NONE {
            NONE
        } else {
            table[(*x as usize * r + *y as usize) * r + *z as usize]
        }
    };
    (0..r).into_par_iter().find_map_first(|a| {
        for b in 0..r {
            for c in 0..r {
                for d in 0..r {
                    for f in 0..r {
                        let args = [a, b, c, d, f].map(|x| x as u32);
                        if !rel.holds_on(&t, &args) {
                            return Some([a, b, c, d, f]);
                        }
                    }
                }
            }
        }
        None
    })
}

/// Decides `rel` exactly by checking all `(n³)⁵` elementary 5-tuples.
pub fn check_exact(
    p: &ContractionPattern,
    rel: AssocRelation,
    n: usize,
) -> Result<AssocVerdict, AssocError> {
    if n == 0 {
        return Err(AssocError::ZeroOrder);
    }
    if n > MAX_EXACT_ORDER {
        return Err(AssocError::OrderTooLarge(n));
    }
    let table: Vec<u32> = p
        .basis_product_table(n)
        .into_iter()
        .map(|e| e.unwrap_or(NONE))
        .collect();
    let r = n * n * n;
    Ok(match exact_kernel(&table, r, rel) {
        None => Verdict::holds_exact(),
        Some(tuple) => {
            let triple = |x: usize| [x / (n * n) + 1, (x / n) % n + 1, x % n + 1];
            Verdict::fails(AssocWitness {
                origin: WitnessOrigin::Basis {
                    indices: tuple.map(triple),
                },
                args: tuple.map(|x| CubicMatrix::basis(n, x)),
            })
        }
    })
}

/// Exact verdicts for all five relations.
pub fn check_all_exact(
    p: &ContractionPattern,
    n: usize,
) -> Result<Vec<RelationVerdict>, AssocError> {
    AssocRelation::ALL
        .into_iter()
        .map(|relation| {
            Ok(RelationVerdict {
                relation,
                verdict: check_exact(p, relation, n)?,
            })
        })
        .collect()
}

/// Whether the pattern has the index shape of the named theorem products:
/// the first output index sits in the first slot of `A` and the third in
/// the last slot of `C`.
pub fn is_theorem_shape(p: &ContractionPattern) -> bool {
    p.slots()[0] == Label::F1 && p.slots()[8] == Label::F3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyParams {
    pub n_exact: usize,
    pub confirm: Vec<usize>,
    pub trials: u32,
    pub seed: u64,
    pub screen_trials: u32,
    pub prime: u64,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            n_exact: 2,
            confirm: vec![3, 4],
            trials: 20,
            seed: 0,
            screen_trials: 2,
            prime: DEFAULT_PRIME,
        }
    }
}

/// Verdicts for one pattern that survived the screen for some total kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Survivor {
    pub pattern: String,
    pub cross: bool,
    /// Final status of each relation at `n_exact`.
    pub relations: Vec<(AssocRelation, Status)>,
    /// `(order, relation, status)` for every re-screened relation.
    pub confirmations: Vec<(usize, AssocRelation, Status)>,
    pub first_kind: bool,
    pub second_kind: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub total: usize,
    pub first_kind: Vec<String>,
    pub second_kind_cross: Vec<String>,
    pub second_kind_self: Vec<String>,
    /// Cross-matrix second-kind patterns with the theorem index shape.
    pub second_kind_theorem_shape: Vec<String>,
    /// Total-kind members for which the full three-relation chain fails.
    pub chain_failures: Vec<String>,
    pub inconsistencies: Vec<String>,
    pub screen_survivors: usize,
    pub survivors: Vec<Survivor>,
    pub params: ClassifyParams,
}

struct Outcome {
    pattern: ContractionPattern,
    survivor: Option<Survivor>,
    inconsistencies: Vec<String>,
}

fn classify_one(p: &ContractionPattern, params: &ClassifyParams) -> Result<Outcome, AssocError> {
    let n = params.n_exact;
    let mut screen = Vec::with_capacity(5);
    for rel in AssocRelation::ALL {
        screen.push((
            rel,
            check_random(p, rel, n, params.screen_trials, params.seed)?,
        ));
    }
    let passed = |r: AssocRelation| screen.iter().any(|(x, v)| *x == r && v.holds());
    let candidate = TotalKind::First.holds(passed) || TotalKind::Second.holds(passed);
    if !candidate {
        return Ok(Outcome {
            pattern: *p,
            survivor: None,
            inconsistencies: Vec::new(),
        });
    }

    let mut issues = Vec::new();
    let mut relations = Vec::with_capacity(5);
    for (rel, v) in &screen {
        let status = if v.holds() {
            let exact = check_exact(p, *rel, n)?;
            if !exact.holds() {
                issues.push(format!(
                    "{p}: {rel} passed the screen but fails exactly at n={n}"
                ));
            }
            exact.status
        } else {
            let w = v
                .witness
                .as_ref()
                .expect("failing verdicts carry a witness");
            if !w.confirms(p, *rel) {
                issues.push(format!("{p}: {rel} random witness not confirmed exactly"));
            }
            Status::Fails
        };
        relations.push((*rel, status));
    }
    let holds = |r: AssocRelation| relations.iter().any(|(x, s)| *x == r && s.holds());

    let mut confirmations = Vec::new();
    for &order in &params.confirm {
        for &(rel, status) in &relations {
            if !status.holds() {
                continue;
            }
            let v = check_random(p, rel, order, params.trials, params.seed)?;
            if !v.holds() {
                issues.push(format!(
                    "{p}: {rel} holds exactly at n={n} but fails at n={order}"
                ));
            }
            confirmations.push((order, rel, v.status));
        }
    }

    Ok(Outcome {
        pattern: *p,
        survivor: Some(Survivor {
            pattern: p.to_string(),
            cross: p.is_cross(),
            first_kind: TotalKind::First.holds(holds),
            second_kind: TotalKind::Second.holds(holds),
            relations,
            confirmations,
        }),
        inconsistencies: issues,
    })
}

/// Classifies every canonical pattern: a short random screen at `n_exact`,
/// exact verification of the surviving relations, and random re-checks at
/// each confirmation order. Output order is the enumeration order and does
/// not depend on the thread count.
pub fn classify(params: &ClassifyParams) -> Result<ClassificationReport, AssocError> {
    if params.n_exact > MAX_EXACT_ORDER {
        return Err(AssocError::OrderTooLarge(params.n_exact));
    }
    if params.trials == 0 || params.screen_trials == 0 {
        return Err(AssocError::NoTrials);
    }
    let patterns = enumerate_patterns();
    let outcomes: Vec<Outcome> = patterns
        .par_iter()
        .map(|p| classify_one(p, params))
        .collect::<Result<_, _>>()?;

    let mut report = ClassificationReport {
        total: patterns.len(),
        first_kind: Vec::new(),
        second_kind_cross: Vec::new(),
        second_kind_self: Vec::new(),
        second_kind_theorem_shape: Vec::new(),
        chain_failures: Vec::new(),
        inconsistencies: Vec::new(),
        screen_survivors: 0,
        survivors: Vec::new(),
        params: params.clone(),
    };
    for o in outcomes {
        report.inconsistencies.extend(o.inconsistencies);
        let Some(s) = o.survivor else { continue };
        report.screen_survivors += 1;
        let holds = |r: AssocRelation| s.relations.iter().any(|(x, st)| *x == r && st.holds());
        for kind in [TotalKind::First, TotalKind::Second] {
            let member = match kind {
                TotalKind::First => s.first_kind,
                TotalKind::Second => s.second_kind,
            };
            if member && !kind.chain().into_iter().all(holds) {
                report
                    .chain_failures
                    .push(format!("{} ({kind:?})", s.pattern));
            }
        }
        if s.first_kind {
            report.first_kind.push(s.pattern.clone());
        }
        if s.second_kind {
            if s.cross {
                report.second_kind_cross.push(s.pattern.clone());
                if is_theorem_shape(&o.pattern) {
                    report.second_kind_theorem_shape.push(s.pattern.clone());
                }
            } else {
                report.second_kind_self.push(s.pattern.clone());
            }
        }
        report.survivors.push(s);
    }
    Ok(report)
}
