//! Evaluate Dirichlet L-functions three ways (series, Hurwitz combination,
//! Euler product) and verify the functional equation of the completed form.

use num_complex::Complex64;
use primewalk::characters::{enumerate_characters, find_by_angles};
use primewalk::lfunc::{euler_product, functional_equation_residual, l_hurwitz, l_series, root_number};
use primewalk::primes::{required_limit, PrimeStore};

fn main() -> primewalk::Result<()> {
    let store = PrimeStore::sieve(required_limit(100_000))?;
    let chars = enumerate_characters(3)?;
    let chi = find_by_angles(&chars, &[(2, 1, 2)]).unwrap().clone();

    let s = Complex64::new(2.0, 0.0);
    println!("L(2) for the quadratic character mod 3:");
    println!("  series (10^6 terms):   {}", l_series(s, &chi, 1_000_000).value);
    println!("  Hurwitz combination:   {}", l_hurwitz(s, &chi)?);
    println!("  Euler product (10^5):  {}", euler_product(s, &chi, 100_000, None, &store)?);

    println!("\nvalue at s = 1 (finite for non-principal characters):");
    println!("  L(1) = {} (exact pi/(3 sqrt 3) = {:.17})", l_hurwitz(Complex64::new(1.0, 0.0), &chi)?, std::f64::consts::PI / (3.0 * 3f64.sqrt()));

    println!("\nroot number eps = {}", root_number(&chi)?);
    println!("functional-equation residuals |Lambda(s) - eps Lambda-bar(1-s)| / |Lambda(s)|:");
    for (sigma, t) in [(0.3, 2.0), (0.5, 8.0), (0.7, 5.0)] {
        let s = Complex64::new(sigma, t);
        println!("  s = {sigma} + {t}i: {:.2e}", functional_equation_residual(s, &chi)?);
    }
    Ok(())
}
