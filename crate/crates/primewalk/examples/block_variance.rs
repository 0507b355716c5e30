//! Block ensembles of the angle walk: the variance of the normalized block
//! variable grows linearly in the block length with unit slope, and the
//! normalized histogram is close to a standard normal.

use primewalk::block_ensemble::{
    build_ensemble, normality_fit, predicted_variance, variance_regression, EnsembleSpec, GapPolicy,
};
use primewalk::characters::{enumerate_characters, find_by_angles};
use primewalk::primes::{required_limit, PrimeStore};

fn main() -> primewalk::Result<()> {
    let store = PrimeStore::sieve(required_limit(1_000_000))?;
    let chars = enumerate_characters(7)?;
    let chi = find_by_angles(&chars, &[(2, 1, 3), (3, 1, 6)]).unwrap().clone();

    let template = EnsembleSpec {
        n1: 100_000,
        n2: 1_000_000,
        n: 0,
        gap: GapPolicy::Random { lo: 400, hi: 1200 },
        seed: 20_260_824,
    };
    let lengths: Vec<usize> = (500..=3000).step_by(250).collect();
    let fit = variance_regression(&chi, &lengths, &template, &store)?;
    println!(
        "E[normalized C^2] vs block length N over [500, 3000]: slope {:.4} (+- {:.4})",
        fit.slope, fit.stderr
    );

    let n = 2000;
    let spec = EnsembleSpec { n, gap: GapPolicy::Fixed(100), ..template };
    let samples = build_ensemble(&chi, &spec, &store)?;
    let normalized: Vec<f64> = samples
        .iter()
        .map(|s| Ok(s.value / predicted_variance(&chi, n, s.ell, &store)?.sqrt()))
        .collect::<primewalk::Result<_>>()?;
    let (mu, sigma, ks) = normality_fit(&normalized)?;
    println!(
        "{} blocks of length {n}: fitted mean {mu:.4}, std {sigma:.4}, KS vs N(0,1) {ks:.4}",
        samples.len()
    );
    Ok(())
}
