//! Contraction patterns: candidate triple products of cubic matrices.
//!
//! A pattern assigns each of the nine index slots of `A_{..}B_{..}C_{..}` a
//! label. Free labels `F1, F2, F3` are the first, second and third output
//! subscripts and occur once each; summed labels `S1, S2, S3` occur twice
//! each. In text, free labels are written `i, j, k` (or `i, k, l`) and summed
//! labels `p, q, r`:
//!
//! ```text
//! A[i,p,q] B[r,p,q] C[r,j,k]
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubic::{CubicError, CubicMatrix};
use crate::scalars::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("label {label} occurs {count} times, expected {expected}")]
    Multiplicity {
        label: &'static str,
        count: usize,
        expected: usize,
    },
    #[error("unknown named product {0:?}")]
    UnknownName(String),
}

/// Slot label. The derived order `F1 < F2 < F3 < S1 < S2 < S3` is the
/// lexicographic order used for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    F1,
    F2,
    F3,
    S1,
    S2,
    S3,
}

impl Label {
    pub const ALL: [Label; 6] = [
        Label::F1,
        Label::F2,
        Label::F3,
        Label::S1,
        Label::S2,
        Label::S3,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_free(self) -> bool {
        self.index() < 3
    }

    fn from_index(k: usize) -> Label {
        Label::ALL[k]
    }

    /// Text letter used when formatting.
    pub fn letter(self) -> char {
        ['i', 'j', 'k', 'p', 'q', 'r'][self.index()]
    }

    fn name(self) -> &'static str {
        ["F1", "F2", "F3", "S1", "S2", "S3"][self.index()]
    }
}

/// Nine slot labels: `A` slots 1–3, then `B`, then `C`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractionPattern {
    slots: [Label; 9],
}

impl ContractionPattern {
    /// Validates label multiplicities.
    pub fn new(slots: [Label; 9]) -> Result<Self, PatternError> {
        for label in Label::ALL {
            let count = slots.iter().filter(|&&l| l == label).count();
            let expected = if label.is_free() { 1 } else { 2 };
            if count != expected {
                return Err(PatternError::Multiplicity {
                    label: label.name(),
                    count,
                    expected,
                });
            }
        }
        Ok(ContractionPattern { slots })
    }

    pub fn slots(&self) -> &[Label; 9] {
        &self.slots
    }

    /// Labels of matrix `m` (0 = A, 1 = B, 2 = C).
    pub fn matrix_slots(&self, m: usize) -> [Label; 3] {
        [
            self.slots[3 * m],
            self.slots[3 * m + 1],
            self.slots[3 * m + 2],
        ]
    }

    /// Renames summed labels by first occurrence.
    pub fn canonicalize(&self) -> Self {
        let mut rename = [None::<Label>; 6];
        let mut next = Label::S1.index();
        let mut slots = self.slots;
        for s in slots.iter_mut() {
            if s.is_free() {
                continue;
            }
            let target = *rename[s.index()].get_or_insert_with(|| {
                let l = Label::from_index(next);
                next += 1;
                l
            });
            *s = target;
        }
        ContractionPattern { slots }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    /// True when every summed pair joins two different matrices.
    pub fn is_cross(&self) -> bool {
        [Label::S1, Label::S2, Label::S3].into_iter().all(|s| {
            let pos: Vec<usize> = (0..9).filter(|&k| self.slots[k] == s).collect();
            pos[0] / 3 != pos[1] / 3
        })
    }

    /// Label index of each slot.
    fn label_of_slot(&self) -> [usize; 9] {
        self.slots.map(Label::index)
    }

    /// The triple product `τ(A, B, C)` defined by the pattern.
    pub fn evaluate<R: Ring>(
        &self,
        a: &CubicMatrix<R>,
        b: &CubicMatrix<R>,
        c: &CubicMatrix<R>,
    ) -> Result<CubicMatrix<R>, CubicError> {
        let n = a.n();
        for m in [b, c] {
            if m.n() != n {
                return Err(CubicError::OrderMismatch {
                    expected: n,
                    got: m.n(),
                });
            }
        }
        let lab = self.label_of_slot();
        let mut out = CubicMatrix::<R>::zeros(n);
        let mut v = [0usize; 6];
        let flat = |v: &[usize; 6], m: usize| {
            (v[lab[3 * m]] * n + v[lab[3 * m + 1]]) * n + v[lab[3 * m + 2]]
        };
        let total = n.pow(6);
        for t in 0..total {
            let mut rest = t;
            for d in v.iter_mut().rev() {
                *d = rest % n;
                rest /= n;
            }
            let x = &a.coords()[flat(&v, 0)];
            if x.is_zero() {
                continue;
            }
            let y = &b.coords()[flat(&v, 1)];
            if y.is_zero() {
                continue;
            }
            let xy = x.mul(y);
            out[(v[0], v[1], v[2])].add_product(&xy, &c.coords()[flat(&v, 2)]);
        }
        Ok(out)
    }

    /// Product of elementary cubic matrices: `τ(E_a, E_b, E_c)` is either a
    /// single elementary matrix `E_d` or zero. Returns the table indexed by
    /// `(a·n³ + b)·n³ + c` with `Some(d)` or `None`.
    pub fn basis_product_table(&self, n: usize) -> Vec<Option<u32>> {
        let r = n * n * n;
        let lab = self.label_of_slot();
        let mut table = vec![None; r * r * r];
        let digits = |x: usize| [x / (n * n), (x / n) % n, x % n];
        for (abc, entry) in table.iter_mut().enumerate() {
            let (a, b, c) = (abc / (r * r), (abc / r) % r, abc % r);
            let mut vals = [usize::MAX; 6];
            let slot_vals = [digits(a), digits(b), digits(c)];
            let consistent = (0..9).all(|s| {
                let v = slot_vals[s / 3][s % 3];
                let l = lab[s];
                if vals[l] == usize::MAX {
                    vals[l] = v;
                    true
                } else {
                    vals[l] == v
                }
            });
            if consistent {
                *entry = Some(((vals[0] * n + vals[1]) * n + vals[2]) as u32);
            }
        }
        table
    }

    fn labels_to_string(labels: [Label; 3]) -> [String; 3] {
        labels.map(|l| l.letter().to_string())
    }
}

impl fmt::Display for ContractionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, name) in ["A", "B", "C"].into_iter().enumerate() {
            if m > 0 {
                f.write_str(" ")?;
            }
            let [x, y, z] = self.matrix_slots(m).map(Label::letter);
            write!(f, "{name}[{x},{y},{z}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ContractionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContractionPattern({self})")
    }
}

impl FromStr for ContractionPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, PatternError> {
        parse_pattern(s)
    }
}

/// Parses the text form. Free labels may be spelled `i,j,k` or `i,k,l`
/// (not mixed); they map to `F1, F2, F3` in alphabetical order. Summed
/// labels `p, q, r` map to `S1, S2, S3`. The result is not canonicalized.
pub fn parse_pattern(text: &str) -> Result<ContractionPattern, PatternError> {
    let src = text.as_bytes();
    let mut pos = 0;
    let err = |pos: usize, msg: &str| PatternError::Syntax {
        pos,
        msg: msg.to_owned(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < src.len() && src[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let expect = |pos: &mut usize, c: u8| -> Result<(), PatternError> {
        skip_ws(pos);
        if src.get(*pos) == Some(&c) {
            *pos += 1;
            Ok(())
        } else {
            Err(err(*pos, &format!("expected '{}'", c as char)))
        }
    };
    let mut letters = Vec::with_capacity(9);
    for &name in b"ABC" {
        expect(&mut pos, name)?;
        expect(&mut pos, b'[')?;
        for slot in 0..3 {
            if slot > 0 {
                expect(&mut pos, b',')?;
            }
            skip_ws(&mut pos);
            match src.get(pos) {
                Some(&c @ (b'i' | b'j' | b'k' | b'l' | b'p' | b'q' | b'r')) => {
                    letters.push((c, pos));
                    pos += 1;
                }
                _ => return Err(err(pos, "expected a label in {i,j,k,p,q,r}")),
            }
        }
        expect(&mut pos, b']')?;
    }
    skip_ws(&mut pos);
    if pos != src.len() {
        return Err(err(pos, "unexpected trailing input"));
    }
    let has = |c: u8| letters.iter().any(|&(x, _)| x == c);
    let free_spelling: &[u8; 3] = if has(b'l') {
        if let Some(&(_, p)) = letters.iter().find(|&&(x, _)| x == b'j') {
            return Err(err(p, "free labels must be spelled i,j,k or i,k,l"));
        }
        b"ikl"
    } else {
        b"ijk"
    };
    let mut slots = [Label::F1; 9];
    for (slot, &(c, _)) in slots.iter_mut().zip(&letters) {
        *slot = match c {
            b'p' => Label::S1,
            b'q' => Label::S2,
            b'r' => Label::S3,
            _ => {
                let k = free_spelling
                    .iter()
                    .position(|&x| x == c)
                    .expect("validated letter");
                Label::from_index(k)
            }
        };
    }
    ContractionPattern::new(slots)
}

pub fn format_pattern(p: &ContractionPattern) -> String {
    p.to_string()
}

/// All canonical patterns in lexicographic order (7560 of them).
pub fn enumerate_patterns() -> Vec<ContractionPattern> {
    let mut out = Vec::with_capacity(7560);
    for f1 in 0..9 {
        for f2 in (0..9).filter(|&x| x != f1) {
            for f3 in (0..9).filter(|&x| x != f1 && x != f2) {
                let rest: Vec<usize> = (0..9).filter(|&x| x != f1 && x != f2 && x != f3).collect();
                for pairing in pairings(&rest) {
                    let mut slots = [Label::F1; 9];
                    slots[f2] = Label::F2;
                    slots[f3] = Label::F3;
                    for (k, (x, y)) in pairing.into_iter().enumerate() {
                        let l = Label::from_index(3 + k);
                        slots[x] = l;
                        slots[y] = l;
                    }
                    out.push(ContractionPattern { slots }.canonicalize());
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Perfect matchings of a 6-element set (15 of them).
fn pairings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for k in 1..items.len() {
        let rest: Vec<usize> = items[1..]
            .iter()
            .copied()
            .filter(|&x| x != items[k])
            .collect();
        for mut tail in pairings(&rest) {
            tail.insert(0, (first, items[k]));
            out.push(tail);
        }
    }
    out
}

/// Products with established names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedProduct {
    T1,
    T2,
    T3,
    T4,
    #[serde(rename = "CIRC")]
    Circ,
}

impl NamedProduct {
    pub const ALL: [NamedProduct; 5] = [
        NamedProduct::T1,
        NamedProduct::T2,
        NamedProduct::T3,
        NamedProduct::T4,
        NamedProduct::Circ,
    ];

    /// The four cross-matrix products that are totally associative of the
    /// second kind.
    pub const THEOREM: [NamedProduct; 4] = [
        NamedProduct::T1,
        NamedProduct::T2,
        NamedProduct::T3,
        NamedProduct::T4,
    ];

    pub fn text(self) -> &'static str {
        match self {
            NamedProduct::T1 => "A[i,p,q] B[r,p,q] C[r,j,k]",
            NamedProduct::T2 => "A[i,p,q] B[r,q,p] C[r,j,k]",
            NamedProduct::T3 => "A[i,j,p] B[q,r,p] C[r,q,k]",
            NamedProduct::T4 => "A[i,j,p] B[q,r,p] C[q,r,k]",
            NamedProduct::Circ => "A[p,i,q] B[q,j,r] C[r,k,p]",
        }
    }

    pub fn pattern(self) -> ContractionPattern {
        parse_pattern(self.text())
            .expect("named products are well formed")
            .canonicalize()
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedProduct::T1 => "T1",
            NamedProduct::T2 => "T2",
            NamedProduct::T3 => "T3",
            NamedProduct::T4 => "T4",
            NamedProduct::Circ => "CIRC",
        }
    }
}

impl FromStr for NamedProduct {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, PatternError> {
        NamedProduct::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PatternError::UnknownName(s.to_owned()))
    }
}

impl fmt::Display for NamedProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn named_product(name: &str) -> Result<ContractionPattern, PatternError> {
    Ok(name.parse::<NamedProduct>()?.pattern())
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    #[serde(rename = "A")]
    a: [String; 3],
    #[serde(rename = "B")]
    b: [String; 3],
    #[serde(rename = "C")]
    c: [String; 3],
}

impl Serialize for ContractionPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PatternJson {
            a: Self::labels_to_string(self.matrix_slots(0)),
            b: Self::labels_to_string(self.matrix_slots(1)),
            c: Self::labels_to_string(self.matrix_slots(2)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ContractionPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PatternJson::deserialize(d)?;
        let text = format!(
            "A[{}] B[{}] C[{}]",
            raw.a.join(","),
            raw.b.join(","),
            raw.c.join(",")
        );
        parse_pattern(&text).map_err(serde::de::Error::custom)
    }
}
