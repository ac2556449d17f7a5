//! Classifies all 256 elementary rules and prints the symmetric nonlinear ones.
//!
//! cargo run -p eca-core --example rule_census

use eca_core::rule_algebra::{census, classify};

fn main() -> eca_core::Result<()> {
    let c = census();
    println!(
        "{:>4}  {:<38} {:>5} {:>5} {:>5}",
        "code", "anf", "left", "right", "ctr"
    );
    for r in c
        .rules
        .iter()
        .filter(|r| r.flags.s3_symmetric && !r.flags.linear)
    {
        let f = r.flags;
        println!(
            "{:>4}  {:<38} {:>5} {:>5} {:>5}",
            r.code,
            r.anf.to_string(),
            f.left_permutive,
            f.right_permutive,
            f.center_permutive
        );
    }
    let s = c.summary;
    println!();
    println!(
        "symmetric: {}  symmetric and nonlinear: {}  linear: {}",
        s.s3_symmetric, s.s3_symmetric_nonlinear, s.linear
    );
    println!(
        "left-permutive: {}  right-permutive: {}  centre-permutive: {}",
        s.left_permutive, s.right_permutive, s.center_permutive
    );

    for code in [22, 30, 86, 135, 150] {
        let r = classify(code)?;
        println!("rule {code:>3}: {}  mirror {}", r.anf, r.mirror().code);
    }
    Ok(())
}
