//! Seeded Monte-Carlo estimates with Wilson score intervals.
//!
//! Sampled probabilities are never reported bare: every estimate carries
//! its trial count, seed, and a 99% confidence radius.

use serde::{Deserialize, Serialize};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575829303548901;

/// Wilson score interval for `successes` out of `trials` at 99% confidence.
/// Returns `(center, radius)`.
pub fn wilson_99(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0, "wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_99 * Z_99;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let radius = Z_99 * ((p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()) / denom;
    (center, radius)
}

/// A seeded Monte-Carlo estimate of an acceptance probability.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub seed: u64,
    /// Plain success frequency.
    pub estimate: f64,
    /// 99% Wilson interval radius around the Wilson center.
    pub radius99: f64,
}

impl Estimate {
    pub fn new(successes: u64, trials: u64, seed: u64) -> Self {
        let (_, radius99) = wilson_99(successes, trials);
        Estimate {
            successes,
            trials,
            seed,
            estimate: successes as f64 / trials as f64,
            radius99,
        }
    }
}
