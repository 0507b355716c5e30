//! Normalized cosine sums F_N(t) over fixed frequency sets, their histogram
//! normality under uniform sampling of t, and Weyl equidistribution sums.

use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use crate::stats_core::{normal_fit, RngStream};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Strictly increasing frequency list lambda_1..lambda_N.
pub struct FrequencySet {
    pub kind: FrequencyKind,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrequencyKind {
    /// lambda_k = k + frac(k sqrt 2)/2 + frac(k sqrt 3)/4 — increasing with
    /// O(1) spacing and rationally independent almost surely
    IndependentIrrationals,
    /// lambda_k = log(k + 1)
    LogIntegers,
    /// lambda_k = log p_k
    LogPrimes,
}

impl FrequencySet {
    pub fn build(kind: FrequencyKind, n: usize, store: Option<&PrimeStore>) -> Result<FrequencySet> {
        if n == 0 {
            return Err(Error::Domain("empty frequency set".into()));
        }
        let values: Vec<f64> = match kind {
            FrequencyKind::IndependentIrrationals => (1..=n)
                .map(|k| {
                    let kf = k as f64;
                    kf + (kf * 2f64.sqrt()).fract() * 0.5 + (kf * 3f64.sqrt()).fract() * 0.25
                })
                .collect(),
            FrequencyKind::LogIntegers => (1..=n).map(|k| ((k + 1) as f64).ln()).collect(),
            FrequencyKind::LogPrimes => {
                let store =
                    store.ok_or_else(|| Error::Domain("log-prime frequencies need a prime store".into()))?;
                store.first_n(n)?.iter().map(|&p| (p as f64).ln()).collect()
            }
        };
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        Ok(FrequencySet { kind, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// F_N(t) = sqrt(2/N) * sum_k cos(lambda_k t).
pub fn f_n(t: f64, freq: &FrequencySet) -> f64 {
    let n = freq.len() as f64;
    (2.0 / n).sqrt() * freq.values.iter().map(|&l| (l * t).cos()).sum::<f64>()
}

pub struct KacReport {
    pub t_half_width: f64,
    pub samples: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

/// Histogram F_N at t drawn uniformly on (-T, T) and fit a normal.
pub fn kac_histogram(
    freq: &FrequencySet,
    t_half_width: f64,
    sample_count: usize,
    seed: u64,
) -> Result<KacReport> {
    if sample_count < 1000 {
        return Err(Error::Domain(format!(
            "need at least 1000 samples, got {sample_count}"
        )));
    }
    if t_half_width <= 0.0 {
        return Err(Error::Domain("t half-width must be positive".into()));
    }
    let mut rng = RngStream::new(seed, 0);
    let ts: Vec<f64> = (0..sample_count).map(|_| rng.symmetric(t_half_width)).collect();
    let samples: Vec<f64> = ts.par_iter().map(|&t| f_n(t, freq)).collect();
    let (mean, std) = normal_fit(&samples)?;
    Ok(KacReport { t_half_width, samples, mean, std })
}

/// |n^-1 sum_{k<=n} e^{2 pi i m a_k}| at each checkpoint n; vanishing
/// magnitudes are the equidistribution criterion for {a_k} mod 1.
pub fn weyl_sum(sequence: &[f64], m: i64, checkpoints: &[usize]) -> Result<Vec<(usize, f64)>> {
    if sequence.len() < 10 {
        return Err(Error::Domain("need at least 10 sequence terms".into()));
    }
    if m == 0 {
        return Err(Error::Domain("frequency m must be nonzero".into()));
    }
    let mut cps: Vec<usize> = checkpoints
        .iter()
        .copied()
        .filter(|&c| c >= 1 && c <= sequence.len())
        .collect();
    cps.sort_unstable();
    cps.dedup();
    if cps.is_empty() {
        return Err(Error::Domain("no checkpoint within the sequence".into()));
    }
    let mut out = Vec::with_capacity(cps.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut next = 0usize;
    for (i, &a) in sequence.iter().enumerate() {
        let phase = 2.0 * PI * m as f64 * a;
        acc += Complex64::new(phase.cos(), phase.sin());
        if i + 1 == cps[next] {
            out.push((i + 1, acc.norm() / (i + 1) as f64));
            next += 1;
            if next == cps.len() {
                break;
            }
        }
    }
    Ok(out)
}
