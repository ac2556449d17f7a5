//! Block entropy and block complexity of centre columns.
//!
//! cargo run -p eca-core --example entropy

use eca_core::evolution::center_column;
use eca_core::statistics::block_entropy;
use eca_core::RuleSpec;

fn main() -> eca_core::Result<()> {
    for code in [30u8, 22, 150] {
        let column = center_column(&RuleSpec::new(code), 4095);
        let r = block_entropy(&column, 12)?;
        println!("rule {code}, N = {}", r.sequence_length);
        println!(
            "{:>3} {:>9} {:>7} {:>6} {:>8}",
            "n", "H_n", "H_n/n", "p_n", "p_n/2^n"
        );
        for b in &r.blocks {
            println!(
                "{:>3} {:>9.5} {:>7.4} {:>6} {:>8.4}",
                b.n, b.entropy, b.normalized_entropy, b.distinct, b.complexity_ratio
            );
        }
        println!();
    }
    Ok(())
}
