//! Ensembles of block sums C_N(l) of cos(theta) over disjoint prime-index
//! windows, the finite-size variance prediction sigma^2 = b^2 (N lambda + rho),
//! slope regressions of the normalized blocks, and normality fits.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use crate::stats_core::{erf, ks_distance, linfit, normal_fit, LinFit, RngStream};
use rayon::prelude::*;

/// Variance of cos over the character's angle set: 1 for real non-principal
/// characters, 1/2 for complex ones.
pub fn b_squared(chi: &DirichletCharacter) -> Result<f64> {
    if chi.is_principal() {
        return Err(Error::Domain("principal character has no angle walk".into()));
    }
    let angles = chi.angle_set();
    let r = angles.len() as f64;
    Ok(angles.iter().map(|v| v.cos().powi(2)).sum::<f64>() / r)
}

/// Exact harmonic partial sum H_m.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|j| 1.0 / j as f64).sum()
}

fn log_p(ell: usize, store: &PrimeStore) -> Result<f64> {
    let p = store.nth(ell)? as f64;
    if p <= std::f64::consts::E {
        return Err(Error::Domain(format!(
            "block start prime {p} <= e: log log undefined"
        )));
    }
    Ok(p.ln())
}

/// lambda(N, l) = 1 + (1 - H_{N-2})/log p_l - log log p_l / log p_l.
pub fn lambda_factor(n: usize, ell: usize, store: &PrimeStore) -> Result<f64> {
    let lp = log_p(ell, store)?;
    Ok(1.0 + (1.0 - harmonic(n.saturating_sub(2))) / lp - lp.ln() / lp)
}

/// rho(N, l) = (log(q log p_l / (2 pi e^2)) + H_{N-2}) / log p_l.
pub fn rho_factor(n: usize, ell: usize, q: u64, store: &PrimeStore) -> Result<f64> {
    let lp = log_p(ell, store)?;
    let two_pi_e2 = 2.0 * std::f64::consts::PI * std::f64::consts::E.powi(2);
    Ok(((q as f64 * lp / two_pi_e2).ln() + harmonic(n.saturating_sub(2))) / lp)
}

/// sigma^2_N(l) = b^2 (N lambda + rho).
pub fn predicted_variance(chi: &DirichletCharacter, n: usize, ell: usize, store: &PrimeStore) -> Result<f64> {
    let b2 = b_squared(chi)?;
    let lambda = lambda_factor(n, ell, store)?;
    let rho = rho_factor(n, ell, chi.modulus(), store)?;
    Ok(b2 * (n as f64 * lambda + rho))
}

/// Gap between consecutive blocks, in prime indices.
#[derive(Clone, Copy, Debug)]
pub enum GapPolicy {
    Fixed(usize),
    Random { lo: usize, hi: usize },
}

/// Block layout over the index interval [n1, n2): length-n blocks left to
/// right, separated per the gap policy.
#[derive(Clone, Copy, Debug)]
pub struct EnsembleSpec {
    pub n1: usize,
    pub n2: usize,
    pub n: usize,
    pub gap: GapPolicy,
    pub seed: u64,
}

pub struct BlockSample {
    pub ell: usize,
    /// C_N(l)
    pub value: f64,
    /// C_N(l) / sqrt(b^2 lambda(N, l)) — rho deliberately omitted, so the
    /// squared-normalized-block mean regresses against N with unit slope
    pub normalized: f64,
}

/// Lay out and evaluate the block ensemble. Deterministic given the spec.
pub fn build_ensemble(
    chi: &DirichletCharacter,
    spec: &EnsembleSpec,
    store: &PrimeStore,
) -> Result<Vec<BlockSample>> {
    if spec.n1 == 0 || spec.n2 <= spec.n1 {
        return Err(Error::Domain(format!("bad interval [{}, {})", spec.n1, spec.n2)));
    }
    if spec.n == 0 || spec.n > (spec.n2 - spec.n1) / 10 {
        return Err(Error::Domain(format!(
            "block length {} not well inside the interval of {} indices",
            spec.n,
            spec.n2 - spec.n1
        )));
    }
    if let GapPolicy::Random { lo, hi } = spec.gap {
        if lo > hi {
            return Err(Error::Domain(format!("bad random gap range [{lo}, {hi}]")));
        }
    }
    store.first_n(spec.n2 - 1)?;
    let b2 = b_squared(chi)?;
    let mut rng = RngStream::new(spec.seed, 0);
    let mut starts = Vec::new();
    let mut ell = spec.n1;
    while ell + spec.n <= spec.n2 {
        starts.push(ell);
        let gap = match spec.gap {
            GapPolicy::Fixed(d) => d,
            GapPolicy::Random { lo, hi } => lo + rng.below((hi - lo + 1) as u64) as usize,
        };
        ell += spec.n + gap;
    }
    if starts.len() < 100 {
        return Err(Error::Domain(format!(
            "only {} blocks fit the interval; at least 100 required",
            starts.len()
        )));
    }
    let q = chi.modulus();
    let lut = chi.cos_table();
    let primes = store.as_slice();
    starts
        .par_iter()
        .map(|&ell| {
            let value: f64 = primes[ell - 1..ell - 1 + spec.n]
                .iter()
                .map(|&p| lut[(p as u64 % q) as usize])
                .sum();
            let lambda = lambda_factor(spec.n, ell, store)?;
            if lambda <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "lambda({}, {ell}) = {lambda} <= 0: block starts too early",
                    spec.n
                )));
            }
            Ok(BlockSample { ell, value, normalized: value / (b2 * lambda).sqrt() })
        })
        .collect()
}

/// Least squares of E[normalized C^2] against N over rebuilt ensembles.
pub fn variance_regression(
    chi: &DirichletCharacter,
    n_list: &[usize],
    template: &EnsembleSpec,
    store: &PrimeStore,
) -> Result<LinFit> {
    let mut distinct = n_list.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 5 {
        return Err(Error::Domain(format!(
            "need at least 5 distinct block lengths, got {}",
            distinct.len()
        )));
    }
    let mut xs = Vec::with_capacity(distinct.len());
    let mut ys = Vec::with_capacity(distinct.len());
    for &n in &distinct {
        let spec = EnsembleSpec { n, ..*template };
        let samples = build_ensemble(chi, &spec, store)?;
        let mean_sq =
            samples.iter().map(|s| s.normalized * s.normalized).sum::<f64>() / samples.len() as f64;
        xs.push(n as f64);
        ys.push(mean_sq);
    }
    linfit(&xs, &ys)
}

/// Sample mean, sample std, and the KS distance to the standard normal.
pub fn normality_fit(samples: &[f64]) -> Result<(f64, f64, f64)> {
    let (mu, sigma) = normal_fit(samples)?;
    if sigma == 0.0 {
        return Err(Error::Degenerate("constant samples: zero spread".into()));
    }
    let ks = ks_distance(samples, 0.0, 1.0)?;
    Ok((mu, sigma, ks))
}

/// Lower bounds on Pr[|C_N| < d sqrt(N)] under the normal limit: the explicit
/// leading-term tail bound and the exact Gaussian mass erf(d/sqrt 2).
pub fn tail_probability_bound(d: f64) -> Result<(f64, f64)> {
    if d <= 0.0 {
        return Err(Error::Domain(format!("need d > 0, got {d}")));
    }
    let leading = 1.0 - (2.0 / d) * (-d * d / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let exact = erf(d / std::f64::consts::SQRT_2);
    Ok((leading, exact))
}

/// Relative change of 1/log p across [n1, n2] — small values mean the interval
/// is statistically uniform enough for a stationary block ensemble.
pub fn inertial_interval_report(n1: usize, n2: usize, store: &PrimeStore) -> Result<(f64, bool)> {
    let a = 1.0 / log_p(n1, store)?;
    let b = 1.0 / log_p(n2, store)?;
    let rel = (a - b).abs() / a.max(b);
    Ok((rel, rel <= 0.25))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, find_by_angles};

    #[test]
    fn b_squared_values() {
        let chars3 = enumerate_characters(3).unwrap();
        let real = find_by_angles(&chars3, &[(2, 1, 2)]).unwrap();
        assert_eq!(b_squared(real).unwrap(), 1.0);
        let chars5 = enumerate_characters(5).unwrap();
        let complex = chars5.iter().find(|c| !c.is_real()).unwrap();
        assert!((b_squared(complex).unwrap() - 0.5).abs() < 1e-15);
        // order-3 character mod 7: angles {0, +-2pi/3} -> (1 + 1/4 + 1/4)/3
        let chars7 = enumerate_characters(7).unwrap();
        let chi3 = find_by_angles(&chars7, &[(3, 1, 3)]).unwrap();
        assert!((b_squared(chi3).unwrap() - 0.5).abs() < 1e-15);
        let principal = chars7.iter().find(|c| c.is_principal()).unwrap();
        assert!(b_squared(principal).is_err());
    }

    #[test]
    fn lambda_rho_asymptotics() {
        let store = PrimeStore::sieve(200_000_00).unwrap();
        let n = 1000;
        // lambda < 1 at finite l, increasing toward 1; rho decreasing toward 0
        let mut prev_lambda = f64::NEG_INFINITY;
        let mut prev_rho = f64::INFINITY;
        for ell in [100_000usize, 300_000, 1_000_000] {
            let l = lambda_factor(n, ell, &store).unwrap();
            let r = rho_factor(n, ell, 7, &store).unwrap();
            assert!(l < 1.0 && l > prev_lambda, "lambda {l}");
            assert!(r > 0.0 && r < prev_rho, "rho {r}");
            prev_lambda = l;
            prev_rho = r;
        }
        // H_{N-2} ~ log N + gamma
        let h = harmonic(10_000 - 2);
        assert!((h - (10_000f64.ln() + 0.5772156649015329)).abs() < 1e-3);
        // p_l <= e rejected
        assert!(lambda_factor(100, 1, &store).is_err());
        assert!(lambda_factor(100, 2, &store).is_ok()); // p_2 = 3 > e
    }

    #[test]
    fn predicted_variance_properties() {
        let store = PrimeStore::sieve(2_000_000).unwrap();
        let chars7 = enumerate_characters(7).unwrap();
        let chi = chars7.iter().find(|c| !c.is_principal() && c.is_real()).unwrap();
        let b2 = b_squared(chi).unwrap();
        for &(n, ell) in &[(1000usize, 100_000usize), (3000, 50_000), (500, 10_000)] {
            let v = predicted_variance(chi, n, ell, &store).unwrap();
            let lambda = lambda_factor(n, ell, &store).unwrap();
            let rho = rho_factor(n, ell, 7, &store).unwrap();
            assert!((v / b2 - n as f64 * lambda - rho).abs() < 1e-9);
            assert!(v < b2 * n as f64, "anti-correlation: {v} vs {}", b2 * n as f64);
        }
        // modulus enters only through rho
        let l5 = lambda_factor(1000, 100_000, &store).unwrap();
        let l7 = lambda_factor(1000, 100_000, &store).unwrap();
        assert_eq!(l5, l7);
    }

    #[test]
    fn ensemble_layout() {
        let store = PrimeStore::sieve(2_000_000).unwrap();
        let chars7 = enumerate_characters(7).unwrap();
        let chi = chars7.iter().find(|c| !c.is_principal() && c.is_real()).unwrap();
        let spec = EnsembleSpec {
            n1: 10_000,
            n2: 110_000,
            n: 100,
            gap: GapPolicy::Fixed(100),
            seed: 1,
        };
        let samples = build_ensemble(chi, &spec, &store).unwrap();
        assert_eq!(samples.len(), (110_000 - 10_000) / 200);
        // disjoint, ordered, in range
        for w in samples.windows(2) {
            assert!(w[0].ell + spec.n <= w[1].ell);
        }
        assert!(samples.last().unwrap().ell + spec.n <= spec.n2);
        for s in &samples {
            assert!(s.value.abs() <= spec.n as f64);
        }
        // ensemble mean near zero
        let mean = samples.iter().map(|s| s.value).sum::<f64>() / samples.len() as f64;
        let b2 = b_squared(chi).unwrap();
        assert!(mean.abs() <= 3.0 * (b2 * spec.n as f64 / samples.len() as f64).sqrt(), "mean {mean}");
        // random policy reproducible per seed, different across seeds
        let r1 = EnsembleSpec { gap: GapPolicy::Random { lo: 50, hi: 150 }, ..spec };
        let a = build_ensemble(chi, &r1, &store).unwrap();
        let b = build_ensemble(chi, &r1, &store).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.ell == y.ell));
        let r2 = EnsembleSpec { seed: 2, ..r1 };
        let c = build_ensemble(chi, &r2, &store).unwrap();
        assert!(a.iter().zip(&c).any(|(x, y)| x.ell != y.ell));
        // failure modes
        let too_few = EnsembleSpec { n2: 12_000, n: 150, ..spec };
        assert!(build_ensemble(chi, &too_few, &store).is_err());
        let too_long = EnsembleSpec { n: 50_000, ..spec };
        assert!(build_ensemble(chi, &too_long, &store).is_err());
    }

    #[test]
    fn regression_scaled_protocol() {
        let store = PrimeStore::sieve(18_000_000).unwrap();
        let chars5 = enumerate_characters(5).unwrap();
        let chi = chars5.iter().find(|c| !c.is_principal() && !c.is_real()).unwrap();
        let template = EnsembleSpec {
            n1: 100_000,
            n2: 1_000_000,
            n: 0,
            gap: GapPolicy::Random { lo: 400, hi: 1200 },
            seed: 20_260_824,
        };
        let n_list: Vec<usize> = (500..=3000).step_by(500).collect();
        let fit = variance_regression(chi, &n_list, &template, &store).unwrap();
        assert!(fit.slope > 0.8 && fit.slope < 1.2, "slope {}", fit.slope);
        // too few lengths rejected
        assert!(variance_regression(chi, &[500, 1000], &template, &store).is_err());
    }

    #[test]
    fn normality_fit_contracts() {
        // sum of 12 uniforms minus 6 is close to standard normal
        let mut rng = RngStream::new(9, 0);
        let samples: Vec<f64> = (0..4000)
            .map(|_| (0..12).map(|_| rng.uniform01()).sum::<f64>() - 6.0)
            .collect();
        let (mu, sigma, ks) = normality_fit(&samples).unwrap();
        assert!(mu.abs() < 0.06, "mu {mu}");
        assert!((sigma - 1.0).abs() < 0.06, "sigma {sigma}");
        assert!(ks < 1.36 / (samples.len() as f64).sqrt() + 0.01, "ks {ks}");
        assert!(normality_fit(&[2.0, 2.0, 2.0]).is_err());
    }

    #[test]
    fn tail_bound_values() {
        let (leading, exact) = tail_probability_bound(3.0).unwrap();
        assert!((exact - 0.9973002039367398).abs() < 1e-12);
        assert!(leading < exact && leading > 0.99);
        let (l8, e8) = tail_probability_bound(8.0).unwrap();
        assert!(l8 > 1.0 - 1e-13 && e8 > 1.0 - 1e-13);
        assert!(tail_probability_bound(0.0).is_err());
    }

    #[test]
    fn inertial_report() {
        let store = PrimeStore::sieve(2_000_000).unwrap();
        let (rel, ok) = inertial_interval_report(10_000, 100_000, &store).unwrap();
        assert!(rel > 0.0 && rel < 0.25 && ok);
    }
}
