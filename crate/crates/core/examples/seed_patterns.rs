//! Single-seed space-time diagrams for rules 22, 150 and 30, as ASCII and P4 bitmaps.
//!
//! cargo run -p eca-core --example seed_patterns -- [OUT_DIR]

use std::path::PathBuf;

use eca_core::evolution::{center_column, evolve_single_seed, render_ascii, render_pbm};
use eca_core::RuleSpec;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    for code in [22u8, 150, 30] {
        let rule = RuleSpec::new(code);
        println!("rule {code}, 16 generations:");
        print!("{}", render_ascii(&evolve_single_seed(&rule, 16)));
        let path = dir.join(format!("rule{code}.pbm"));
        render_pbm(&evolve_single_seed(&rule, 64), &path)?;
        println!("wrote {}\n", path.display());
    }
    let column: String = center_column(&RuleSpec::new(30), 40)
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    println!("rule 30 centre column: {column}");
    Ok(())
}
