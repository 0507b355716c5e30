//! Cosine sums over fixed frequency sets: with many independent frequencies
//! the time-sampled histogram is normal, with one frequency it is arcsine;
//! Weyl sums separate equidistributed sequences from logarithmic ones.

use primewalk::kac::{kac_histogram, weyl_sum, FrequencyKind, FrequencySet};
use primewalk::primes::{required_limit, PrimeStore};

fn main() -> primewalk::Result<()> {
    for n in [1usize, 10, 1000] {
        let freq = FrequencySet::build(FrequencyKind::IndependentIrrationals, n, None)?;
        let rep = kac_histogram(&freq, 1e5, 20_000, 777)?;
        let tail = rep.samples.iter().filter(|x| x.abs() > 1.2).count() as f64
            / rep.samples.len() as f64;
        println!(
            "N = {n:>4}: fitted mean {:+.4}, std {:.4}, mass beyond 1.2 = {tail:.3} (normal: 0.230)",
            rep.mean, rep.std
        );
    }
    println!("the N = 1 sum keeps the unit variance but the arcsine shape piles mass at the edges\n");

    let store = PrimeStore::sieve(required_limit(100_000))?;
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let sequences: Vec<(&str, Vec<f64>)> = vec![
        ("k * golden ratio", (1..=100_000).map(|k| k as f64 * golden).collect()),
        ("log k", (1..=100_000).map(|k| (k as f64).ln()).collect()),
        ("log p_k", store.first_n(100_000)?.iter().map(|&p| (p as f64).ln()).collect()),
    ];
    println!("Weyl sum magnitude |n^-1 sum e^(2 pi i a_k)| at n = 10^5:");
    for (name, seq) in &sequences {
        let mag = weyl_sum(seq, 1, &[100_000])?[0].1;
        println!("  {name:>16}: {mag:.5}");
    }
    println!("only the golden-ratio rotation equidistributes; the log sequences oscillate");
    Ok(())
}
