//! Scan |L(1/2 + it)| for a character mod 3, list the zero candidates, and
//! show that a randomized Euler product dips at the same ordinates.

use primewalk::characters::{enumerate_characters, find_by_angles};
use primewalk::lfunc::{gs_zero_match, zero_count_estimate, TGrid};
use primewalk::primes::{required_limit, PrimeStore};
use primewalk::random_ensemble::sample_state;

fn main() -> primewalk::Result<()> {
    let n = 200_000;
    let store = PrimeStore::sieve(required_limit(n))?;
    let chars = enumerate_characters(3)?;
    let chi = find_by_angles(&chars, &[(2, 1, 2)]).unwrap().clone();

    let state = sample_state(3, 2, n, 7);
    let grid = TGrid::new(0.0, 25.0, 0.01)?;
    let rep = gs_zero_match(&chi, &state, 0.5, grid, n, &store)?;

    println!("|L| minima on the critical line, t in [0, 25]:");
    for m in &rep.analytic.minima {
        println!("  t* = {:>7.3}   |L| = {:.4}", m.t, m.value);
    }
    println!(
        "one-sided count estimate at T = 25: {:.1}",
        zero_count_estimate(3, 25.0) / 2.0
    );

    println!("\npairing against the randomized product over {n} shifted primes:");
    for (a, p, d) in &rep.pairs {
        println!("  |L| dip {a:>7.3} <-> product dip {p:>7.3}  (|delta| = {d:.3})");
    }
    println!("max pairing distance {:.3}", rep.max_distance);
    Ok(())
}
