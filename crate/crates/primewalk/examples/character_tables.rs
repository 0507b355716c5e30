//! Enumerate the Dirichlet characters for small prime moduli and print their
//! value tables, orders, parities and Gauss sums.

use primewalk::characters::enumerate_characters;

fn main() -> primewalk::Result<()> {
    for q in [3u64, 5, 7] {
        let chars = enumerate_characters(q)?;
        println!("modulus {q}: {} characters", chars.len());
        for chi in &chars {
            let row: Vec<String> = (1..=q)
                .map(|m| match chi.angle_fraction(m as i64) {
                    None => "0".into(),
                    Some((0, 1)) => "1".into(),
                    Some((1, 2)) => "-1".into(),
                    Some((num, den)) => format!("e({num}/{den})"),
                })
                .collect();
            let g = chi.gauss_sum();
            println!(
                "  row {} order {} {} primitive={} |G|={:.6}: [{}]",
                chi.label.unwrap_or(0),
                chi.order(),
                if chi.parity() == 0 { "even" } else { "odd " },
                chi.is_primitive(),
                g.norm(),
                row.join(", ")
            );
        }
        println!();
    }
    Ok(())
}
