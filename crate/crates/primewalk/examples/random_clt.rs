//! Central limit behavior of the walk over random prime states: shift each
//! prime by a random multiple of q, histogram the normalized partial sum.

use primewalk::characters::{enumerate_characters, find_by_angles};
use primewalk::primes::{required_limit, PrimeStore};
use primewalk::random_ensemble::{clt_experiment, lyapunov_moments};
use primewalk::stats_core::Histogram;

fn main() -> primewalk::Result<()> {
    let n = 10_000;
    let store = PrimeStore::sieve(required_limit(n))?;
    let chars = enumerate_characters(3)?;
    let chi = find_by_angles(&chars, &[(2, 1, 2)]).unwrap().clone();

    let moments = lyapunov_moments(&chi, 100.0, 3, n, &store)?;
    println!("walk over {n} shifted primes at t = 100, offsets in 0..=3 times q = 3");
    println!("theoretical mean m_N = {:.4}, variance s^2_N = {:.4}", moments.m_n, moments.s2_n);

    let rep = clt_experiment(&chi, 100.0, 3, n, 5000, 1, &store)?;
    println!("\n5000 random states: fitted mean {:.4}, std {:.4}", rep.mean, rep.std);

    let h = Histogram::with_bins(&rep.samples, -4.0, 4.0, 16);
    let peak = h.counts.iter().copied().max().unwrap_or(1).max(1);
    println!("normalized-statistic histogram:");
    for (i, &c) in h.counts.iter().enumerate() {
        let bar = "#".repeat((c * 50 / peak) as usize);
        println!("  [{:+.2}, {:+.2}) {bar}", h.edges[i], h.edges[i + 1]);
    }
    Ok(())
}
