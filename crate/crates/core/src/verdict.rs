//! Outcome of an identity check.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Decided exactly (all basis tuples, or a complete finite check).
    HoldsExact,
    /// Every random trial passed; see the attached [`ProbBound`].
    HoldsProbable,
    /// A counterexample was found.
    Fails,
}

impl Status {
    pub fn holds(self) -> bool {
        self != Status::Fails
    }
}

/// Upper bound `(numerator / denominator)^trials` on the probability that a
/// false identity passes every trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbBound {
    pub numerator: u64,
    pub denominator: u64,
    pub trials: u32,
}

impl ProbBound {
    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numerator), BigInt::from(self.denominator))
            .pow(self.trials as i32)
    }

    pub fn log10(&self) -> f64 {
        self.trials as f64 * ((self.numerator as f64).log10() - (self.denominator as f64).log10())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict<W> {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<ProbBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn holds_exact() -> Self {
        Verdict {
            status: Status::HoldsExact,
            bound: None,
            witness: None,
        }
    }

    pub fn holds_probable(bound: ProbBound) -> Self {
        Verdict {
            status: Status::HoldsProbable,
            bound: Some(bound),
            witness: None,
        }
    }

    pub fn fails(witness: W) -> Self {
        Verdict {
            status: Status::Fails,
            bound: None,
            witness: Some(witness),
        }
    }

    pub fn holds(&self) -> bool {
        self.status.holds()
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        Verdict {
            status: self.status,
            bound: self.bound,
            witness: self.witness.map(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_is_exact_power() {
        let b = ProbBound {
            numerator: 5,
            denominator: 7,
            trials: 2,
        };
        assert_eq!(b.value(), BigRational::new(25.into(), 49.into()));
        assert!((b.log10() - (25f64 / 49.0).log10()).abs() < 1e-12);
    }
}
