//! The walk series B_N(t, chi) = sum_{n<=N, p_n not| q} cos(t log p_n - theta_{p_n}),
//! its t=0 specialization C_N, block values C_N(l), and a scaling-exponent
//! estimator for the N^{1/2+eps} growth diagnostic.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use rayon::prelude::*;

/// Per-index angle entries for the first N primes: the exact angle fraction of
/// 2 pi, or a skip marker where p_n | q.
#[derive(Clone, Debug)]
pub struct AngleSequence {
    pub q: u64,
    /// entries[n-1] for the n-th prime: None = skip (p | q), Some((num, den)).
    pub entries: Vec<Option<(i64, u64)>>,
}

pub fn angle_sequence(chi: &DirichletCharacter, store: &PrimeStore, n: usize) -> Result<AngleSequence> {
    let primes = store.first_n(n)?;
    let entries = primes
        .iter()
        .map(|&p| chi.angle_fraction(p as i64))
        .collect();
    Ok(AngleSequence { q: chi.modulus(), entries })
}

/// One walk term: cos(t log p - theta).
pub fn b_term(t: f64, p: u64, theta: f64) -> f64 {
    (t * (p as f64).ln() - theta).cos()
}

/// Prefix sums B_1..B_N of a walk series.
#[derive(Clone, Debug)]
pub struct SeriesTrace {
    pub t: f64,
    pub q: u64,
    /// values[n-1] = B_n; |B_n - B_{n-1}| <= 1.
    pub values: Vec<f64>,
}

impl SeriesTrace {
    pub fn last(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }
}

/// Chunk size for the deterministic parallel term map (partials are combined
/// in index order, so the result is independent of thread count).
pub const CHUNK: usize = 1 << 16;

/// Terms of B(t) for the first n primes: cos(t log p - theta), 0.0 on skips.
pub(crate) fn walk_terms(chi: &DirichletCharacter, t: f64, primes: &[u32]) -> Vec<f64> {
    let q = chi.modulus();
    let theta: Vec<Option<f64>> = (0..q).map(|m| chi.theta(m as i64)).collect();
    primes
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&p| match theta[(p as u64 % q) as usize] {
                    Some(th) => (t * (p as f64).ln() - th).cos(),
                    None => 0.0,
                })
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// B_N(t, chi) as a prefix-sum trace over the first n prime indices
/// (skips occupy their index and contribute 0).
pub fn b_series(chi: &DirichletCharacter, t: f64, n: usize, store: &PrimeStore) -> Result<SeriesTrace> {
    let primes = store.first_n(n)?;
    let mut values = walk_terms(chi, t, primes);
    let mut acc = 0.0;
    for v in values.iter_mut() {
        acc += *v;
        *v = acc;
    }
    Ok(SeriesTrace { t, q: chi.modulus(), values })
}

/// Block value C_N(l) = sum_{k=l}^{l+N-1} cos theta_{p_k}, 1-based l.
pub fn block_value(chi: &DirichletCharacter, ell: usize, n: usize, store: &PrimeStore) -> Result<f64> {
    if ell == 0 {
        return Err(Error::Domain("block start l is 1-based".into()));
    }
    let end = ell + n - 1;
    let primes = store.first_n(end)?;
    let cos = chi.cos_table();
    let q = chi.modulus();
    Ok(primes[ell - 1..end]
        .iter()
        .map(|&p| cos[(p as u64 % q) as usize])
        .sum())
}

/// Growth exponent of |B_N|: least squares of log RMS over dyadic sub-windows
/// against log N. RMS per dyadic block suppresses the sign oscillation of B_N.
pub fn scaling_exponent(trace: &SeriesTrace, n_lo: usize, n_hi: usize) -> Result<(f64, f64)> {
    if n_lo < 100 || n_hi <= 2 * n_lo || n_hi > trace.values.len() {
        return Err(Error::Domain(format!(
            "scaling window ({n_lo}, {n_hi}) needs n_lo >= 100, n_hi >= 2 n_lo, within trace of {}",
            trace.values.len()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut lo = n_lo;
    while 2 * lo <= n_hi {
        let hi = 2 * lo;
        let block = &trace.values[lo - 1..hi - 1];
        let rms = (block.iter().map(|v| v * v).sum::<f64>() / block.len() as f64).sqrt();
        if rms > 0.0 {
            xs.push(((lo + hi) as f64 / 2.0).ln());
            ys.push(rms.ln());
        }
        lo = hi;
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("scaling fit needs >= 2 dyadic blocks with nonzero RMS".into()));
    }
    let fit = crate::stats_core::linfit(&xs, &ys)?;
    Ok((fit.slope, fit.stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, find_by_angles};
    use crate::stats_core::RngStream;
    use std::f64::consts::PI;

    fn chi2_mod3() -> DirichletCharacter {
        let chars = enumerate_characters(3).unwrap();
        find_by_angles(&chars, &[(2, 1, 2)]).unwrap().clone()
    }

    fn chi2_mod7() -> DirichletCharacter {
        let chars = enumerate_characters(7).unwrap();
        find_by_angles(&chars, &[(2, 1, 3), (3, 1, 6), (6, 1, 2)]).unwrap().clone()
    }

    #[test]
    fn first_angles_mod7() {
        // A_N = (alpha5, alpha4, alpha2, alpha3, alpha1, alpha6)
        //     = (2pi/3, pi/3, -pi/3, 0, -2pi/3, pi) for p = 2,3,5,7,11,13;
        // p=7 is the zero residue, counted as angle 0 by the table convention.
        let store = PrimeStore::sieve(100).unwrap();
        let chi = chi2_mod7();
        let seq = angle_sequence(&chi, &store, 6).unwrap();
        let expect = [
            Some((1i64, 3u64)),  // 2pi/3
            Some((1, 6)),        // pi/3
            Some((-1, 6)),       // -pi/3
            None,                // p = 7 divides q: skip marker
            Some((-1, 3)),       // -2pi/3
            Some((1, 2)),        // pi
        ];
        assert_eq!(seq.entries.as_slice(), &expect);
        // angle_index view: 5, 4, 2, 3 (zero bucket), 1, 6
        let primes = store.first_n(6).unwrap();
        let idx: Vec<usize> = primes.iter().map(|&p| chi.angle_index(p as i64)).collect();
        assert_eq!(idx, vec![5, 4, 2, 3, 1, 6]);
    }

    #[test]
    fn skip_marker_on_modulus_prime() {
        let store = PrimeStore::sieve(100).unwrap();
        let seq = angle_sequence(&chi2_mod3(), &store, 5).unwrap();
        assert!(seq.entries[1].is_none()); // p_2 = 3 divides 3
        assert!(seq.entries.iter().enumerate().all(|(i, e)| e.is_some() || i == 1));
    }

    #[test]
    fn b_term_values() {
        assert_eq!(b_term(0.0, 17, 0.0), 1.0);
        assert_eq!(b_term(0.0, 17, PI), -1.0);
        assert!((b_term(1.0, 2, PI / 3.0) - (2.0f64.ln() - PI / 3.0).cos()).abs() < 1e-15);
        assert!((b_term(1.0, 2, PI / 3.0) - 0.937_976_148_004_121_9).abs() < 1e-12);
    }

    #[test]
    fn principal_series_counts_non_skips() {
        let store = PrimeStore::sieve(1000).unwrap();
        let chars = enumerate_characters(3).unwrap();
        let principal = chars.iter().find(|c| c.is_principal()).unwrap();
        let tr = b_series(principal, 0.0, 100, &store).unwrap();
        // all angles 0 => B_N = count of primes not dividing 3 = N - 1
        assert_eq!(tr.last(), 99.0);
    }

    #[test]
    fn chi2_mod3_partial_sums() {
        let store = PrimeStore::sieve(100).unwrap();
        let tr = b_series(&chi2_mod3(), 0.0, 6, &store).unwrap();
        // terms: chi(2), skip, chi(5)=chi(2), chi(7)=chi(1), chi(11)=chi(2), chi(13)=chi(1)
        let expect = [-1.0, -1.0, -2.0, -1.0, -2.0, -1.0];
        for (a, b) in tr.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn block_vs_prefix_consistency() {
        let store = PrimeStore::sieve(200_000).unwrap();
        let chi = chi2_mod7();
        let n = 10_000;
        let tr = b_series(&chi, 0.0, n, &store).unwrap();
        let block = block_value(&chi, 1, n, &store).unwrap();
        assert!((tr.last() - block).abs() < 1e-9 * n as f64);
        // single-index block
        let one = block_value(&chi, 5, 1, &store).unwrap();
        let p5 = store.nth(5).unwrap();
        assert!((one - chi.theta(p5 as i64).unwrap().cos()).abs() < 1e-15);
    }

    #[test]
    fn first_six_block_sums_to_zero() {
        // cos(2pi/3)+cos(pi/3)+cos(-pi/3)+0+cos(-2pi/3)+cos(pi) = -1/2+1/2+1/2-1/2-1 = -1;
        // with the p=7 skip contributing 0 the paper's illustrative sum uses
        // angle 0 for it: -1/2+1/2+1/2+1-1/2-1 = 0.
        let store = PrimeStore::sieve(100).unwrap();
        let chi = chi2_mod7();
        let b = block_value(&chi, 1, 6, &store).unwrap();
        assert!((b - (-1.0)).abs() < 1e-12); // skip contributes 0 in the walk
        let with_zero_bucket: f64 = store.first_n(6).unwrap().iter()
            .map(|&p| chi.angle_set()[chi.angle_index(p as i64) - 1].cos())
            .sum();
        assert!(with_zero_bucket.abs() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry() {
        let store = PrimeStore::sieve(10_000).unwrap();
        let chi = chi2_mod7();
        let conj = chi.conjugate();
        let a = b_series(&chi, 1.5, 500, &store).unwrap();
        let b = b_series(&conj, -1.5, 500, &store).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn increments_bounded_by_one() {
        let store = PrimeStore::sieve(100_000).unwrap();
        let tr = b_series(&chi2_mod7(), 15.0, 5000, &store).unwrap();
        let mut prev = 0.0;
        for &v in &tr.values {
            assert!((v - prev).abs() <= 1.0 + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn linear_trace_exponent_one() {
        let tr = SeriesTrace {
            t: 0.0,
            q: 1,
            values: (1..=100_000).map(|n| n as f64).collect(),
        };
        let (alpha, _) = scaling_exponent(&tr, 100, 100_000).unwrap();
        assert!((alpha - 1.0).abs() < 0.02, "alpha = {alpha}");
    }

    #[test]
    fn coin_flip_walk_exponent_half() {
        let mut rng = RngStream::new(991, 0);
        let mut acc = 0.0;
        let values: Vec<f64> = (0..1_000_000)
            .map(|_| {
                acc += if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
                acc
            })
            .collect();
        let tr = SeriesTrace { t: 0.0, q: 1, values };
        let (alpha, _) = scaling_exponent(&tr, 1000, 1_000_000).unwrap();
        assert!((alpha - 0.5).abs() < 0.1, "alpha = {alpha}");
    }

    #[test]
    fn degenerate_trace_rejected() {
        let tr = SeriesTrace { t: 0.0, q: 3, values: vec![0.0; 10_000] };
        assert!(scaling_exponent(&tr, 100, 10_000).is_err());
    }
}
