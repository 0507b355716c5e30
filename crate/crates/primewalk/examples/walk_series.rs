//! Cosine walks over prime angles: trace a walk, then compare its growth
//! exponent across several frequencies t.

use primewalk::characters::{enumerate_characters, find_by_angles};
use primewalk::primes::{required_limit, PrimeStore};
use primewalk::series::{b_series, scaling_exponent};

fn main() -> primewalk::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1_000_000);
    let store = PrimeStore::sieve(required_limit(n))?;
    let chars = enumerate_characters(7)?;
    let chi = find_by_angles(&chars, &[(2, 1, 3), (3, 1, 6)])
        .expect("order-6 character mod 7")
        .clone();

    let trace = b_series(&chi, 0.0, n, &store)?;
    println!("walk for the order-6 character mod 7 at t = 0:");
    for &k in &[100, 10_000, 1_000_000] {
        println!("  B_{k:>9} = {:+.3}", trace.values[k - 1]);
    }

    println!("\ngrowth exponent alpha (RMS over dyadic blocks, window [1000, {n}]):");
    for &t in &[0.0, 1.0, 15.0, 100.0] {
        let tr = b_series(&chi, t, n, &store)?;
        let (alpha, stderr) = scaling_exponent(&tr, 1000, n)?;
        println!("  t = {t:>5}: alpha = {alpha:.3} +- {stderr:.3}");
    }
    println!("\na diffusive walk has alpha = 1/2; ballistic growth would be 1");
    Ok(())
}
