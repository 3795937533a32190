//! Reproducible random streams and exact sample elements.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalars::Scalar;
use crate::verdict::ProbBound;

/// Coordinate bound for exact random samples.
pub const SAMPLE_BOUND: i64 = 10;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D1_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Hashes a seed together with stream coordinates.
pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |h, &p| splitmix64(h ^ splitmix64(p)))
}

/// Independent generator for the stream `(seed, parts)`.
pub fn stream_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, parts))
}

pub fn sample_scalar<G: rand::Rng + ?Sized>(rng: &mut G) -> Scalar {
    Scalar::random(rng, SAMPLE_BOUND)
}

/// Schwartz–Zippel bound for a polynomial identity of total `degree` in the
/// sampled scalars, checked on `trials` samples from [`sample_scalar`].
pub fn sample_bound(degree: u64, trials: u32) -> ProbBound {
    ProbBound {
        numerator: degree,
        denominator: Scalar::sample_set_size(SAMPLE_BOUND),
        trials,
    }
}

/// Bound for identities that also involve complex conjugation of the
/// samples. These are polynomial only in the rational coordinates, each
/// drawn from `2·SAMPLE_BOUND + 1` values.
pub fn coordinate_sample_bound(degree: u64, trials: u32) -> ProbBound {
    ProbBound {
        numerator: degree,
        denominator: (2 * SAMPLE_BOUND + 1) as u64,
        trials,
    }
}
