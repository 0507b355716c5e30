//! Pair statistics of consecutive prime angles: the one-step transition
//! matrix, its deviation from Markov behavior, and the consecutive-residue
//! bias against the asymptotic pair-density prediction.

use primewalk::characters::{enumerate_characters, find_by_angles};
use primewalk::primes::{required_limit, PrimeStore};
use primewalk::residue_stats::{los_compare, markov_residual, transition_matrix};

fn main() -> primewalk::Result<()> {
    let n = 5usize.pow(9);
    let store = PrimeStore::sieve(required_limit(n))?;
    let chars = enumerate_characters(7)?;
    let chi = find_by_angles(&chars, &[(2, 1, 3), (3, 1, 6)]).unwrap().clone();

    let t = transition_matrix(&chi, 1, n, &store)?;
    println!("one-step transition probabilities at N = 5^9 (rows sum to 1):");
    for row in &t.probs {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.5}")).collect();
        println!("  [{}]", cells.join(", "));
    }
    println!("note the suppressed diagonal: equal consecutive angles are the rarest");

    println!("\nMarkov check: max |P(k) - P(1)^k|");
    for k in [2usize, 6] {
        println!("  k = {k}: {:.5}", markov_residual(&chi, k, n, &store)?);
    }

    let cmp = los_compare(7, 1, n, &store)?;
    println!("\nconsecutive-residue pair densities vs asymptotic prediction (band {:.4}):", cmp.predicted.band);
    println!("  diagonal:  empirical {:.5}, predicted {:.5}", cmp.empirical[0][0], cmp.predicted.diag);
    println!("  off-diag:  empirical {:.5}, predicted {:.5} (symmetric pair sum)",
        cmp.empirical[0][1] + cmp.empirical[1][0], cmp.predicted.offdiag);
    Ok(())
}
