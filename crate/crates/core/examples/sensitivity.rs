//! Boolean sensitivity of the centre cell to each initial cell, rule 30 versus rule 22.
//!
//! cargo run -p eca-core --release --example sensitivity

use eca_core::statistics::{
    equidistribution_test, mutual_information, sensitivity_profile, sensitivity_profile_exhaustive,
};
use eca_core::RuleSpec;

const SEED: u64 = 20_260_322;

fn main() -> eca_core::Result<()> {
    let t = 20;
    for code in [30u8, 22] {
        let p = sensitivity_profile(&RuleSpec::new(code), t, 5000, SEED)?;
        println!("rule {code}, t = {t}, {} trials, seed {SEED}", p.trials);
        for (j, e) in p.offsets.iter().zip(&p.estimates) {
            println!("{j:>4} {e:.3} {}", "#".repeat((e * 50.0).round() as usize));
        }
        println!(
            "sigma_left {:.3}  sigma_right {:.3}  ratio {:.3}\n",
            p.sigma_left,
            p.sigma_right,
            p.asymmetry_ratio()
        );
    }

    // Left permutivity pins the far-left edge to exactly 1.
    let exact = sensitivity_profile_exhaustive(&RuleSpec::new(30), 4)?;
    println!("rule 30 exhaustive t = 4: {:?}", exact.estimates);

    for code in [30u8, 22] {
        let e = equidistribution_test(&RuleSpec::new(code), 10, 100_000, SEED)?;
        let mi = mutual_information(&RuleSpec::new(code), 10, 100_000, SEED)?;
        println!(
            "rule {code}: P(eta_10(0) = 1) = {:.4} (z = {:.1}), I = {:.2e} bits",
            e.p_hat, e.z_score, mi.bits
        );
    }
    Ok(())
}
