//! Statistics of the realized angle sequence: per-angle frequencies, windowed
//! frequencies, k-step transition matrices, Markov residuals, pair-density
//! predictions for prime residue pairs, autocorrelation, spectral density.

use crate::characters::{gcd, totient, DirichletCharacter};
use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use crate::stats_core::dft;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

const CHUNK: usize = 1 << 16;

/// 1-based angle index of each of the first/windowed primes; residues sharing
/// a factor with q land in the angle-0 bucket, matching the frequency tables.
fn angle_indices(chi: &DirichletCharacter, ell: usize, n: usize, store: &PrimeStore) -> Result<Vec<u32>> {
    if ell == 0 {
        return Err(Error::Domain("window start is 1-based, got 0".into()));
    }
    let end = ell
        .checked_add(n)
        .and_then(|e| e.checked_sub(1))
        .ok_or_else(|| Error::Domain("window overflow".into()))?;
    store.first_n(end)?;
    let primes = &store.as_slice()[ell - 1..end];
    let q = chi.modulus();
    let lut: Vec<u32> = (0..q).map(|r| chi.angle_index(r as i64) as u32).collect();
    Ok(primes
        .par_chunks(CHUNK)
        .flat_map_iter(|chunk| {
            chunk
                .iter()
                .map(|&p| lut[(p as u64 % q) as usize])
                .collect::<Vec<u32>>()
        })
        .collect())
}

/// Per-angle probabilities over the first n primes: counts/n indexed by angle
/// rank 1..=order.
pub fn frequencies(chi: &DirichletCharacter, n: usize, store: &PrimeStore) -> Result<Vec<f64>> {
    windowed_frequencies(chi, 1, n, store)
}

/// Frequencies restricted to the prime-index window [ell, ell + n).
pub fn windowed_frequencies(
    chi: &DirichletCharacter,
    ell: usize,
    n: usize,
    store: &PrimeStore,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Domain("empty window".into()));
    }
    let idx = angle_indices(chi, ell, n, store)?;
    let r = chi.order() as usize;
    let mut counts = vec![0u64; r + 1];
    for &i in &idx {
        counts[i as usize] += 1;
    }
    Ok(counts[1..].iter().map(|&c| c as f64 / n as f64).collect())
}

/// k-step transition counts over pairs (theta at p_i, theta at p_{i+k}).
pub struct TransitionMatrix {
    pub q: u64,
    pub k: usize,
    pub n: usize,
    /// angle ranks 1..=order, row/column order
    pub labels: Vec<usize>,
    pub counts: Vec<Vec<u64>>,
    /// rows normalized by their own totals
    pub probs: Vec<Vec<f64>>,
}

pub fn transition_matrix(
    chi: &DirichletCharacter,
    k: usize,
    n: usize,
    store: &PrimeStore,
) -> Result<TransitionMatrix> {
    if k == 0 || n <= k {
        return Err(Error::Domain(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    let idx = angle_indices(chi, 1, n, store)?;
    let r = chi.order() as usize;
    // parallel chunked reduction over pair windows, merged in chunk order
    let counts = idx[..n - k]
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            let base = ci * CHUNK;
            let mut m = vec![vec![0u64; r]; r];
            for (off, &a) in chunk.iter().enumerate() {
                let b = idx[base + off + k];
                m[a as usize - 1][b as usize - 1] += 1;
            }
            m
        })
        .reduce(
            || vec![vec![0u64; r]; r],
            |mut acc, m| {
                for (ra, rm) in acc.iter_mut().zip(&m) {
                    for (ca, cm) in ra.iter_mut().zip(rm) {
                        *ca += cm;
                    }
                }
                acc
            },
        );
    let probs = counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            row.iter()
                .map(|&c| if total > 0 { c as f64 / total as f64 } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(TransitionMatrix { q: chi.modulus(), k, n, labels: (1..=r).collect(), counts, probs })
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let r = a.len();
    let mut out = vec![vec![0.0; r]; r];
    for i in 0..r {
        for l in 0..r {
            let ail = a[i][l];
            for j in 0..r {
                out[i][j] += ail * b[l][j];
            }
        }
    }
    out
}

/// k-th power of a row-stochastic matrix.
pub fn mat_pow(m: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let r = m.len();
    let mut out: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..k {
        out = mat_mul(&out, m);
    }
    out
}

/// Max-abs entry difference between the measured k-step matrix and the k-th
/// power of the one-step matrix; nonzero residuals mean the angle sequence is
/// not Markovian at length n.
pub fn markov_residual(chi: &DirichletCharacter, k: usize, n: usize, store: &PrimeStore) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("markov residual needs k >= 2, got {k}")));
    }
    let direct = transition_matrix(chi, k, n, store)?;
    let one = transition_matrix(chi, 1, n, store)?;
    let powered = mat_pow(&one.probs, k);
    let mut worst = 0.0f64;
    for (rd, rp) in direct.probs.iter().zip(&powered) {
        for (d, p) in rd.iter().zip(rp) {
            worst = worst.max((d - p).abs());
        }
    }
    Ok(worst)
}

/// Predicted pair densities f_ab(x, q, k) for prime q. For k = 1 only the
/// diagonal and the symmetric sum f_ab + f_ba are constrained; for k >= 2 the
/// full off-diagonal entry is predicted.
pub struct LosPrediction {
    pub q: u64,
    pub x: f64,
    pub k: usize,
    /// f_aa
    pub diag: f64,
    /// k = 1: f_ab + f_ba (a != b); k >= 2: f_ab itself
    pub offdiag: f64,
    /// unreported-constant error scale (log x)^(-7/4)
    pub band: f64,
}

pub fn los_prediction(q: u64, x: f64, k: usize) -> Result<LosPrediction> {
    let is_prime = q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0);
    if !is_prime {
        return Err(Error::Domain(format!("pair-density formulas need prime q, got {q}")));
    }
    if x < 100.0 {
        return Err(Error::Domain(format!("need x >= 100, got {x}")));
    }
    if k == 0 {
        return Err(Error::Domain("k >= 1 required".into()));
    }
    let phi = totient(q) as f64;
    let lx = x.ln();
    let (diag, offdiag) = if k == 1 {
        let llx = lx.ln();
        let lq = (q as f64 / (2.0 * PI)).ln();
        (
            (1.0 / (phi * phi)) * (1.0 - (phi - 1.0) * llx / (2.0 * lx) + (phi - 1.0) * lq / (2.0 * lx)),
            (2.0 / (phi * phi)) * (1.0 + llx / (2.0 * lx) - lq / (2.0 * lx)),
        )
    } else {
        let c = 1.0 / (2.0 * (k as f64 - 1.0) * lx);
        ((1.0 / (phi * phi)) * (1.0 - (phi - 1.0) * c), (1.0 / (phi * phi)) * (1.0 + c))
    };
    Ok(LosPrediction { q, x, k, diag, offdiag, band: lx.powf(-1.75) })
}

/// Empirical pair densities over residues vs the prediction at x = p_n.
pub struct LosComparison {
    pub q: u64,
    pub k: usize,
    pub x: f64,
    /// unit residues mod q, ascending — matrix row/column order
    pub residues: Vec<u64>,
    /// pair counts / n
    pub empirical: Vec<Vec<f64>>,
    pub predicted: LosPrediction,
}

impl LosComparison {
    /// (max |diag - f_aa|, max |sym-sum or entry - prediction|) over the matrix
    pub fn max_deviation(&self) -> (f64, f64) {
        let r = self.residues.len();
        let mut d = 0.0f64;
        let mut o = 0.0f64;
        for a in 0..r {
            d = d.max((self.empirical[a][a] - self.predicted.diag).abs());
            for b in 0..r {
                if a == b {
                    continue;
                }
                let emp = if self.k == 1 {
                    self.empirical[a][b] + self.empirical[b][a]
                } else {
                    self.empirical[a][b]
                };
                o = o.max((emp - self.predicted.offdiag).abs());
            }
        }
        (d, o)
    }
}

pub fn los_compare(q: u64, k: usize, n: usize, store: &PrimeStore) -> Result<LosComparison> {
    let primes = store.first_n(n)?;
    let x = *primes.last().ok_or_else(|| Error::Domain("empty prime range".into()))? as f64;
    let predicted = los_prediction(q, x, k)?;
    let residues: Vec<u64> = (1..q).filter(|&r| gcd(r, q) == 1).collect();
    let pos: Vec<Option<usize>> = (0..q)
        .map(|r| residues.iter().position(|&u| u == r))
        .collect();
    let r = residues.len();
    let mut counts = vec![vec![0u64; r]; r];
    for i in 0..n - k {
        if let (Some(a), Some(b)) = (
            pos[(primes[i] as u64 % q) as usize],
            pos[(primes[i + k] as u64 % q) as usize],
        ) {
            counts[a][b] += 1;
        }
    }
    // densities use pi(x) = n as denominator
    let empirical = counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / n as f64).collect())
        .collect();
    Ok(LosComparison { q, k, x, residues, empirical, predicted })
}

/// Sample autocorrelation C(0..=maxlag), C(0) = 1.
pub fn autocorrelation(series: &[f64], maxlag: usize) -> Result<Vec<f64>> {
    if series.len() <= maxlag {
        return Err(Error::Domain(format!(
            "series length {} <= max lag {maxlag}",
            series.len()
        )));
    }
    let n = series.len();
    let mu = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|y| y - mu).collect();
    let var: f64 = centered.iter().map(|c| c * c).sum();
    if var == 0.0 {
        return Err(Error::Degenerate("constant series has no autocorrelation".into()));
    }
    Ok((0..=maxlag)
        .into_par_iter()
        .map(|j| {
            let num: f64 = centered[..n - j]
                .iter()
                .zip(&centered[j..])
                .map(|(a, b)| a * b)
                .sum();
            num / var
        })
        .collect())
}

/// Spectral density |F(k)|^2 of the autocorrelation sequence (unitary DFT).
pub fn spectral_density(corr: &[f64]) -> Vec<f64> {
    let input: Vec<Complex64> = corr.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    dft(&input).iter().map(|z| z.norm_sqr()).collect()
}
