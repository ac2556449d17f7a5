//! Rule 22 counts, supports and generating polynomials next to brute-force simulation.
//!
//! cargo run -p eca-core --example rule22_closed_forms

use eca_core::evolution::{support, SeedEvolution, View};
use eca_core::rule22::{
    cardinality22, mersenne_poly, poly22, right_half_count22, support22, verify_closed_forms,
};
use eca_core::RuleSpec;

fn main() -> eca_core::Result<()> {
    println!(
        "{:>3} {:>6} {:>6} {:>6}  support (right half)",
        "m", "|S|", "sim", "right"
    );
    for row in SeedEvolution::new(RuleSpec::new(22)).skip(1).take(20) {
        let m = row.generation();
        let s = support22(m)?;
        assert_eq!(s, support(&row, View::RightHalf));
        println!(
            "{m:>3} {:>6} {:>6} {:>6}  {:?}",
            cardinality22(m)?,
            row.count_ones(),
            right_half_count22(m)?,
            s.positions
        );
    }

    // The formula needs no simulation, so huge generations are immediate.
    let m = (1u64 << 62) + 12345;
    println!("\n|S_m| at m = {m}: {}", cardinality22(m)?);

    for n in 2..=5 {
        println!("P_{} = {}", (1u64 << n) - 1, mersenne_poly(n)?);
        assert_eq!(mersenne_poly(n)?, poly22((1 << n) - 1)?);
    }

    let report = verify_closed_forms(512);
    println!(
        "\nverified m = 1..={}: {} mismatches",
        report.max_m,
        report.mismatches.len()
    );
    Ok(())
}
