//! Grosswald-Schnitzer random-prime states p'_n = p_n + m_n q, the series
//! B'_N(t), and the Lyapunov central-limit statistic (B'_N - m_N)/s_N.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use crate::series::SeriesTrace;
use crate::stats_core::{normal_fit, splitmix64, RngStream};
use rayon::prelude::*;

/// One random state P': offsets m_n in [0, M], deterministic per (seed, stream).
#[derive(Clone, Debug)]
pub struct RandomPrimeState {
    pub q: u64,
    pub m_max: u64,
    pub seed: u64,
    pub offsets: Vec<u32>,
}

impl RandomPrimeState {
    /// p'_n for the n-th prime (1-based index into the store).
    pub fn shifted(&self, p: u64, n: usize) -> u64 {
        p + self.offsets[n - 1] as u64 * self.q
    }
}

/// Draw offsets i.i.d. uniform on {0..M} from the seeded stream.
pub fn sample_state(q: u64, m_max: u64, n: usize, seed: u64) -> RandomPrimeState {
    sample_state_stream(q, m_max, n, seed, 0)
}

/// Per-state sub-seeding: state i uses the stream `seed xor splitmix(i)`.
pub fn sample_state_stream(q: u64, m_max: u64, n: usize, seed: u64, stream: u64) -> RandomPrimeState {
    let mut rng = RngStream::new(seed, stream);
    let offsets = (0..n).map(|_| rng.below(m_max + 1) as u32).collect();
    RandomPrimeState { q, m_max, seed, offsets }
}

/// B'_N(t) trace: cos(t log p'_n - theta_{p_n}), angle at the ORIGINAL prime
/// (p'_n = p_n mod q, so the angle is unchanged).
pub fn b_prime_series(
    state: &RandomPrimeState,
    chi: &DirichletCharacter,
    t: f64,
    store: &PrimeStore,
) -> Result<SeriesTrace> {
    if chi.modulus() != state.q {
        return Err(Error::Domain(format!(
            "state modulus {} != character modulus {}",
            state.q,
            chi.modulus()
        )));
    }
    let n = state.offsets.len();
    let primes = store.first_n(n)?;
    let q = chi.modulus();
    let theta: Vec<Option<f64>> = (0..q).map(|m| chi.theta(m as i64)).collect();
    let mut values = Vec::with_capacity(n);
    let mut acc = 0.0;
    for (i, &p) in primes.iter().enumerate() {
        if let Some(th) = theta[(p as u64 % q) as usize] {
            let pp = p as u64 + state.offsets[i] as u64 * q;
            acc += (t * (pp as f64).ln() - th).cos();
        }
        values.push(acc);
    }
    Ok(SeriesTrace { t, q, values })
}

/// Per-index Lyapunov moments and their partial sums.
pub struct LyapunovMoments {
    pub mu: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub m_n: f64,
    pub s2_n: f64,
}

/// mu_n = (M+1)^-1 sum_m cos(t log(p_n + m q) - theta_{p_n}),
/// sigma2_n = (M+1)^-1 sum_m cos^2(...) - mu_n^2; skips contribute zero.
pub fn lyapunov_moments(
    chi: &DirichletCharacter,
    t: f64,
    m_max: u64,
    n: usize,
    store: &PrimeStore,
) -> Result<LyapunovMoments> {
    let primes = store.first_n(n)?;
    let q = chi.modulus();
    let theta: Vec<Option<f64>> = (0..q).map(|m| chi.theta(m as i64)).collect();
    let inv = 1.0 / (m_max + 1) as f64;
    let mut mu = Vec::with_capacity(n);
    let mut sigma2 = Vec::with_capacity(n);
    for &p in primes {
        match theta[(p as u64 % q) as usize] {
            None => {
                mu.push(0.0);
                sigma2.push(0.0);
            }
            Some(th) => {
                let mut s = 0.0;
                let mut s2 = 0.0;
                for m in 0..=m_max {
                    let c = (t * ((p as u64 + m * q) as f64).ln() - th).cos();
                    s += c;
                    s2 += c * c;
                }
                let m1 = s * inv;
                mu.push(m1);
                sigma2.push((s2 * inv - m1 * m1).max(0.0));
            }
        }
    }
    let m_n = mu.iter().sum();
    let s2_n = sigma2.iter().sum();
    Ok(LyapunovMoments { mu, sigma2, m_n, s2_n })
}

/// Result of a CLT experiment over many random states.
pub struct CltReport {
    pub t: f64,
    pub n: usize,
    pub m_max: u64,
    pub state_count: usize,
    pub samples: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

/// Histogram the normalized statistic (B'_N - m_N)/s_N over `state_count`
/// independently seeded states and fit a normal.
pub fn clt_experiment(
    chi: &DirichletCharacter,
    t: f64,
    m_max: u64,
    n: usize,
    state_count: usize,
    seed: u64,
    store: &PrimeStore,
) -> Result<CltReport> {
    if t == 0.0 {
        return Err(Error::Degenerate("s_N = 0 at t = 0: the statistic is degenerate".into()));
    }
    if m_max == 0 {
        return Err(Error::Degenerate("M = 0 gives a single deterministic state".into()));
    }
    let primes = store.first_n(n)?;
    let q = chi.modulus();
    let theta: Vec<Option<f64>> = (0..q).map(|m| chi.theta(m as i64)).collect();
    // cos table per (offset, index): the per-state sum is then a pure lookup pass.
    let mm = (m_max + 1) as usize;
    let mut table = vec![0.0f64; mm * n];
    for (i, &p) in primes.iter().enumerate() {
        if let Some(th) = theta[(p as u64 % q) as usize] {
            for m in 0..mm {
                table[m * n + i] = (t * ((p as u64 + m as u64 * q) as f64).ln() - th).cos();
            }
        }
    }
    let moments = lyapunov_moments(chi, t, m_max, n, store)?;
    let s_n = moments.s2_n.sqrt();
    if s_n == 0.0 {
        return Err(Error::Degenerate("s_N = 0".into()));
    }
    let samples: Vec<f64> = (0..state_count)
        .into_par_iter()
        .map(|i| {
            // per-state sub-seed: seed xor splitmix(i), on stream 0 so the
            // xor is not undone by the per-stream mixing inside the generator
            let mut sub = i as u64;
            let mut rng = RngStream::new(seed ^ splitmix64(&mut sub), 0);
            let mut b = 0.0;
            for idx in 0..n {
                let m = rng.below(m_max + 1) as usize;
                b += table[m * n + idx];
            }
            (b - moments.m_n) / s_n
        })
        .collect();
    let (mean, std) = if samples.len() >= 2 {
        normal_fit(&samples)?
    } else {
        (samples.first().copied().unwrap_or(0.0), 0.0)
    };
    Ok(CltReport { t, n, m_max, state_count, samples, mean, std })
}

/// Lyapunov ratio s_N^-(2+delta) * sum_n E|x_n - mu_n|^(2+delta) along a
/// dyadic ramp of N, for the decrease check.
pub fn lyapunov_condition_check(
    chi: &DirichletCharacter,
    t: f64,
    m_max: u64,
    n: usize,
    delta: f64,
    store: &PrimeStore,
) -> Result<Vec<(usize, f64)>> {
    if delta <= 0.0 {
        return Err(Error::Domain("delta must be > 0".into()));
    }
    if m_max == 0 {
        return Err(Error::Degenerate("M = 0: s_N = 0, ratio undefined".into()));
    }
    let primes = store.first_n(n)?;
    let q = chi.modulus();
    let theta: Vec<Option<f64>> = (0..q).map(|m| chi.theta(m as i64)).collect();
    let moments = lyapunov_moments(chi, t, m_max, n, store)?;
    let inv = 1.0 / (m_max + 1) as f64;
    // absolute central moment of order 2+delta per index
    let mut acm = Vec::with_capacity(n);
    for (i, &p) in primes.iter().enumerate() {
        match theta[(p as u64 % q) as usize] {
            None => acm.push(0.0),
            Some(th) => {
                let mut s = 0.0;
                for m in 0..=m_max {
                    let c = (t * ((p as u64 + m * q) as f64).ln() - th).cos();
                    s += (c - moments.mu[i]).abs().powf(2.0 + delta);
                }
                acm.push(s * inv);
            }
        }
    }
    let mut out = Vec::new();
    let mut nn = 16;
    let mut sum_acm = 0.0;
    let mut sum_s2 = 0.0;
    let mut idx = 0;
    while nn <= n {
        while idx < nn {
            sum_acm += acm[idx];
            sum_s2 += moments.sigma2[idx];
            idx += 1;
        }
        if sum_s2 > 0.0 {
            out.push((nn, sum_acm / sum_s2.powf(1.0 + delta / 2.0)));
        }
        nn *= 2;
    }
    if out.is_empty() {
        return Err(Error::Degenerate("s_N = 0 throughout".into()));
    }
    Ok(out)
}
