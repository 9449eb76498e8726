//! Seeded shot sampling from a measurement distribution.
//!
//! Shots are drawn as one multinomial sample, realized as a chain of
//! conditional binomials: category `i` receives `Binomial(remaining,
//! pᵢ / rest)` shots given what earlier categories consumed. This costs one
//! binomial draw per category — independent of the shot count — and the
//! joint law is exactly multinomial. The generator is a ChaCha stream
//! cipher seeded from a caller-supplied 64-bit value, so equal inputs give
//! equal counts on every platform.

use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;

use crate::error::{Error, Result};

/// How far a sampled distribution's total may sit from 1 before it is
/// rejected as malformed.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-6;

/// Result of a sampling run: how many of the `shots` landed in each
/// category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    counts: Vec<u64>,
    shots: u64,
}

impl ShotCounts {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Observed relative frequencies; they sum to 1 exactly in rationals and
    /// to 1 within round-off in floats.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.shots as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

/// Draws `shots` measurement outcomes from `probabilities` using the seeded
/// generator. The distribution must be nonnegative and sum to 1 within
/// [`DISTRIBUTION_TOLERANCE`].
pub fn sample(probabilities: &[f64], shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    for (index, &p) in probabilities.iter().enumerate() {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::NegativeMass { index, value: p });
        }
    }
    // entries are finite by the check above, so the sum is an honest number
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::InvalidDistribution {
            sum,
            tolerance: DISTRIBUTION_TOLERANCE,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probabilities.len()];
    let mut remaining = shots;
    let mut rest = sum;
    for (index, &p) in probabilities.iter().enumerate() {
        if index + 1 == probabilities.len() {
            counts[index] = remaining;
            break;
        }
        if remaining == 0 {
            break;
        }
        let conditional = if rest > 0.0 {
            (p / rest).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let drawn = Binomial::new(remaining, conditional)
            .expect("probability clamped to [0, 1]")
            .sample(&mut rng);
        counts[index] = drawn;
        remaining -= drawn;
        rest -= p;
    }
    Ok(ShotCounts { counts, shots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const DIST: [f64; 4] = [0.647, 0.143, 0.185, 0.025];

    #[test]
    fn equal_seeds_give_equal_counts() {
        let a = sample(&DIST, 1024, 7).unwrap();
        let b = sample(&DIST, 1024, 7).unwrap();
        assert_eq!(a, b);
        let c = sample(&DIST, 1024, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn counts_always_sum_to_the_shot_count() {
        for seed in 0..50 {
            let counts = sample(&DIST, 1024, seed).unwrap();
            assert_eq!(counts.counts().iter().sum::<u64>(), 1024);
            assert_eq!(counts.shots(), 1024);
        }
    }

    #[test]
    fn point_mass_sends_every_shot_to_one_category() {
        let counts = sample(&[0.0, 1.0, 0.0], 4096, 3).unwrap();
        assert_eq!(counts.counts(), &[0, 4096, 0]);
        assert_eq!(counts.frequencies(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn frequencies_concentrate_around_the_distribution() {
        // modest shot count: every cell lands close for many seeds
        for seed in 0..200 {
            let counts = sample(&DIST, 1024, seed).unwrap();
            for (freq, &truth) in counts.frequencies().iter().zip(&DIST) {
                assert!(
                    (freq - truth).abs() <= 0.06,
                    "seed {seed}: {freq} vs {truth}"
                );
            }
        }
        // large shot count: tight
        let counts = sample(&DIST, 1_000_000, 42).unwrap();
        for (freq, &truth) in counts.frequencies().iter().zip(&DIST) {
            assert_abs_diff_eq!(freq, &truth, epsilon = 5e-3);
        }
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(matches!(sample(&DIST, 0, 1), Err(Error::ZeroShots)));
        assert!(matches!(
            sample(&[0.5, 0.4], 10, 1),
            Err(Error::InvalidDistribution { .. })
        ));
        assert!(matches!(
            sample(&[1.5, -0.5], 10, 1),
            Err(Error::NegativeMass { index: 1, .. })
        ));
        assert!(matches!(
            sample(&[f64::NAN, 1.0], 10, 1),
            Err(Error::NegativeMass { index: 0, .. })
        ));
    }
}
