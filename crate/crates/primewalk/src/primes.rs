//! Segmented sieve, 1-based prime indexing, the logarithmic integral, and the
//! Cramér gap check.

use crate::error::{Error, Result};

/// Immutable ordered store of all primes up to `limit`.
///
/// Primes are kept as `u32` (valid for limits below 2^32), which keeps a
/// 10^7-prime store under 40 MB and a 6.7x10^7-prime store under 270 MB.
pub struct PrimeStore {
    limit: u64,
    primes: Vec<u32>,
}

const SEGMENT_BITS: usize = 1 << 20;

impl PrimeStore {
    /// Sieve of Eratosthenes over odd numbers, processed in fixed segments.
    pub fn sieve(limit: u64) -> Result<PrimeStore> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit {limit} < 2: empty domain")));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::Resource(format!("sieve limit {limit} exceeds the u32 store bound")));
        }
        let reserve = if limit > 100 {
            (limit as f64 / (limit as f64).ln() * 1.12) as usize
        } else {
            32
        };
        let mut primes: Vec<u32> = Vec::with_capacity(reserve);
        primes.push(2);

        // Base primes up to sqrt(limit), plain sieve.
        let root = (limit as f64).sqrt() as usize + 1;
        let mut base = vec![true; root + 1];
        for i in 3..=root {
            if base[i] && i * i <= root {
                let mut j = i * i;
                while j <= root {
                    base[j] = false;
                    j += i;
                }
            }
        }
        // (odd base prime, next odd multiple to cross off)
        let mut crossers: Vec<(usize, u64)> = (3..=root)
            .step_by(2)
            .filter(|&i| base[i])
            .map(|i| (i, (i * i) as u64))
            .collect();

        let mut segment = vec![true; SEGMENT_BITS];
        let top = if limit % 2 == 0 { limit - 1 } else { limit }; // largest odd candidate
        let mut lo = 3u64; // segment covers odd numbers lo, lo+2, ...
        while lo <= limit {
            let hi = (lo + (2 * SEGMENT_BITS as u64 - 2)).min(top);
            let len = ((hi - lo) / 2 + 1) as usize;
            segment[..len].fill(true);
            for (p, next) in crossers.iter_mut() {
                let p64 = *p as u64;
                let mut m = *next;
                if m < lo {
                    let k = (lo - m).div_ceil(2 * p64);
                    m += k * 2 * p64;
                }
                while m <= hi {
                    segment[((m - lo) / 2) as usize] = false;
                    m += 2 * p64;
                }
                *next = m;
            }
            for (i, &is_prime) in segment[..len].iter().enumerate() {
                if is_prime {
                    let n = lo + 2 * i as u64;
                    if n >= 3 {
                        primes.push(n as u32);
                    }
                }
            }
            lo = hi + 2;
        }
        Ok(PrimeStore { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.primes
    }

    /// The n-th prime, 1-based (`nth(1) == 2`).
    pub fn nth(&self, n: usize) -> Result<u64> {
        if n == 0 || n > self.primes.len() {
            return Err(self.insufficient(n));
        }
        Ok(self.primes[n - 1] as u64)
    }

    /// First `n` primes as a slice.
    pub fn first_n(&self, n: usize) -> Result<&[u32]> {
        if n > self.primes.len() {
            return Err(self.insufficient(n));
        }
        Ok(&self.primes[..n])
    }

    /// Prime counting function over the store (x <= limit).
    pub fn pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p as u64 <= x)
    }

    fn insufficient(&self, needed: usize) -> Error {
        Error::InsufficientSieve {
            needed,
            have: self.primes.len(),
            suggested_limit: required_limit(needed),
        }
    }

    /// Indices n (with p_n > 7) where p_{n+1} - p_n >= log^2 p_n. Expected empty.
    pub fn cramer_gap_violations(&self) -> Vec<(u64, u64)> {
        self.primes
            .windows(2)
            .filter_map(|w| {
                let p = w[0] as u64;
                let gap = (w[1] - w[0]) as u64;
                let l = (p as f64).ln();
                if p > 7 && (gap as f64) >= l * l {
                    Some((p, gap))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Upper estimate of the sieve limit needed for the first `n` primes:
/// n(log n + log log n) with a safety margin.
pub fn required_limit(n: usize) -> u64 {
    if n < 6 {
        return 16;
    }
    let nf = n as f64;
    (nf * (nf.ln() + nf.ln().ln()) * 1.2) as u64
}

/// Principal-value logarithmic integral Li(x) = PV int_1^x dt/log t, x > 1.
///
/// Evaluated through the classical expansion
/// `li(x) = gamma + log log x + sum_{k>=1} (log x)^k / (k * k!)`,
/// which equals the principal-value integral and converges quickly for the
/// desk-scale arguments used here.
pub fn log_integral(x: f64) -> Result<f64> {
    if x <= 1.0 {
        return Err(Error::Domain(format!("Li(x) needs x > 1, got {x}")));
    }
    const EULER_GAMMA: f64 = 0.5772156649015329;
    let u = x.ln();
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..1000 {
        term *= u / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-16 * sum.abs().max(1.0) {
            break;
        }
    }
    Ok(EULER_GAMMA + u.ln() + sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_pi(x: u64) -> usize {
        (2..=x).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).count()
    }

    #[test]
    fn small_sieve_exact() {
        let s = PrimeStore::sieve(10).unwrap();
        assert_eq!(s.as_slice(), &[2, 3, 5, 7]);
        let s = PrimeStore::sieve(2).unwrap();
        assert_eq!(s.as_slice(), &[2]);
        assert!(PrimeStore::sieve(1).is_err());
    }

    #[test]
    fn pi_of_one_million() {
        let s = PrimeStore::sieve(1_000_000).unwrap();
        assert_eq!(s.len(), 78_498);
        assert_eq!(s.pi(1_000_000), 78_498);
    }

    #[test]
    fn counts_match_trial_division_on_samples() {
        let s = PrimeStore::sieve(20_000).unwrap();
        for x in [2u64, 97, 541, 1000, 7919, 19_999] {
            assert_eq!(s.pi(x), trial_division_pi(x), "pi({x})");
        }
    }

    #[test]
    fn first_n_and_nth() {
        let s = PrimeStore::sieve(1000).unwrap();
        assert_eq!(s.first_n(1).unwrap(), &[2]);
        let f25 = s.first_n(25).unwrap();
        assert_eq!(*f25.last().unwrap(), 97);
        assert_eq!(s.first_n(125).unwrap().len(), 125);
        assert_eq!(s.nth(25).unwrap(), 97);
        assert!(matches!(s.first_n(10_000), Err(Error::InsufficientSieve { .. })));
    }

    #[test]
    fn segmented_agrees_across_boundaries() {
        // Limit larger than one segment so several segment merges happen.
        let s = PrimeStore::sieve(5_000_000).unwrap();
        assert_eq!(s.len(), 348_513); // pi(5e6)
        assert!(s.as_slice().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cramer_gaps_empty() {
        let s = PrimeStore::sieve(1_000_000).unwrap();
        assert!(s.cramer_gap_violations().is_empty());
        // The 7 -> 11 gap (4 >= log^2 7 = 3.79) is excluded by the p > 7 rule.
        let s = PrimeStore::sieve(1000).unwrap();
        assert!(s.cramer_gap_violations().is_empty());
    }

    #[test]
    fn log_integral_values() {
        // High-precision quadrature oracle: Li(2) = 1.0451637801174927848
        assert!((log_integral(2.0).unwrap() - 1.04516378011749278).abs() < 1e-10);
        // Li(10^6) = 78627.549159; within 0.3% of pi(10^6) = 78498
        let li = log_integral(1e6).unwrap();
        assert!((li - 78_627.549_159).abs() < 1e-3);
        assert!((li - 78_498.0).abs() / 78_498.0 < 0.003);
        // vanishing toward x -> 1+
        assert!(log_integral(1.0 + 1e-9).is_ok());
        assert!(log_integral(1.0).is_err());
        // strictly increasing
        let mut prev = log_integral(1.5).unwrap();
        for i in 2..100 {
            let v = log_integral(i as f64).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
}
