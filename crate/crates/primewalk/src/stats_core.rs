//! Shared numeric kernels: seeded RNG streams, histograms, normal fits,
//! Kolmogorov-Smirnov distance, least squares, and a direct DFT.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// splitmix64 step: the standard finalizer-style generator used for seeding.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic random stream: xorshift64* state seeded through splitmix64.
///
/// The exact recurrence (so any language can reproduce the stream):
/// - seeding: `s0 = splitmix64(seed ^ splitmix64(stream_index))`, retried with
///   successive splitmix64 outputs until nonzero;
/// - step: `x ^= x >> 12; x ^= x << 25; x ^= x >> 27; output = x * 0x2545F4914F6CDD1D`;
/// - `uniform01` takes the top 53 bits of the output: `(out >> 11) * 2^-53`;
/// - `below(n)` maps the output by the multiply-high trick: `(out as u128 * n) >> 64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
    state: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut mix = stream;
        let idx = splitmix64(&mut mix);
        let mut s = seed ^ idx;
        let mut state = splitmix64(&mut s);
        while state == 0 {
            state = splitmix64(&mut s);
        }
        RngStream { seed, stream, state }
    }

    /// Fork a sub-stream; independent of `self`'s position.
    pub fn fork(&self, stream: u64) -> Self {
        RngStream::new(self.seed, self.stream.wrapping_mul(0x9E37_79B9).wrapping_add(stream).wrapping_add(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform in (-half_width, half_width).
    pub fn symmetric(&mut self, half_width: f64) -> f64 {
        (2.0 * self.uniform01() - 1.0) * half_width
    }
}

#[derive(Clone, Debug)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    /// Freedman-Diaconis bin width; falls back to Sturges when the IQR vanishes.
    pub fn freedman_diaconis(samples: &[f64]) -> Result<Histogram> {
        if samples.len() < 2 {
            return Err(Error::Degenerate("histogram needs at least 2 samples".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let n = sorted.len();
        let q1 = sorted[n / 4];
        let q3 = sorted[(3 * n) / 4];
        let iqr = q3 - q1;
        let span = sorted[n - 1] - sorted[0];
        if span == 0.0 {
            return Err(Error::Degenerate("all samples equal".into()));
        }
        let width = if iqr > 0.0 {
            2.0 * iqr / (n as f64).cbrt()
        } else {
            span / (1.0 + (n as f64).log2())
        };
        let bins = ((span / width).ceil() as usize).clamp(1, 100_000);
        Ok(Self::with_bins(&sorted, sorted[0], sorted[n - 1], bins))
    }

    pub fn with_bins(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Histogram {
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        for &x in samples {
            if x < lo || x > hi {
                continue;
            }
            let mut idx = ((x - lo) / width) as usize;
            if idx >= bins {
                idx = bins - 1;
            }
            counts[idx] += 1;
        }
        let total = counts.iter().sum();
        Histogram { edges, counts, total }
    }
}

/// Sample mean and standard deviation (maximum-likelihood, divisor n).
pub fn normal_fit(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::Degenerate("normal fit needs at least 2 samples".into()));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

/// Error function, |erf(x)| accurate to ~1e-13: Maclaurin series for small x,
/// Lentz continued fraction for erfc beyond.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 2.0 {
        // erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        for n in 1..200 {
            term *= -x2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum * 2.0 / std::f64::consts::PI.sqrt()
    } else {
        1.0 - erfc_cf(x)
    }
}

/// erfc via the classical continued fraction, valid for x >= 2.
fn erfc_cf(x: f64) -> f64 {
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
    let mut f = 0.0;
    for k in (1..=60).rev() {
        f = (k as f64 / 2.0) / (x + f);
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / (x + f)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Two-sided Kolmogorov-Smirnov sup-distance of the samples to N(mu, sigma).
pub fn ks_distance(samples: &[f64], mu: f64, sigma: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Degenerate("KS distance of empty sample".into()));
    }
    if sigma <= 0.0 {
        return Err(Error::Degenerate("KS distance needs sigma > 0".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = normal_cdf((x - mu) / sigma);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug)]
pub struct LinFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
}

/// Ordinary least squares y = slope*x + intercept.
pub fn linfit(x: &[f64], y: &[f64]) -> Result<LinFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Degenerate("linfit needs >= 2 paired points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("linfit: x values all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let dof = (x.len().max(3) - 2) as f64;
    let stderr = (ss_res / dof / sxx).sqrt();
    Ok(LinFit { slope, intercept, stderr })
}

/// Direct DFT, unitary convention: X[k] = n^{-1/2} sum_j x[j] e^{2 pi i k j / n}.
pub fn dft(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let norm = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in values.iter().enumerate() {
                let phase = 2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / n as f64;
                acc += v * Complex64::new(phase.cos(), phase.sin());
            }
            acc * norm
        })
        .collect()
}

/// Inverse of [`dft`] (conjugate transform, same normalization).
pub fn idft(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let norm = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in values.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / n as f64;
                acc += v * Complex64::new(phase.cos(), phase.sin());
            }
            acc * norm
        })
        .collect()
}
