//! Rule 30 active-cell counts against the rule 22 formula, with a log-log fit.
//!
//! cargo run -p eca-core --example deviation_fit

use eca_core::statistics::{deviation, fit_deviation, CountView};

fn main() -> eca_core::Result<()> {
    for view in [CountView::Total, CountView::Right] {
        let points = deviation(128, view);
        let fit = fit_deviation(&points)?;
        println!("{view:?} counts, m <= 128");
        for p in points
            .iter()
            .filter(|p| p.m.is_power_of_two() || (p.m + 1).is_power_of_two())
        {
            println!(
                "  m={:<4} rule30={:<5} rule22={:<5} eps={}",
                p.m, p.rule30, p.rule22, p.epsilon
            );
        }
        println!(
            "  eps ~ m^b with b = {:.4}, ln a = {:.4}, r^2 = {:.3}, {} points; {}\n",
            fit.slope, fit.intercept, fit.r_squared, fit.n_points, fit.filter_note
        );
    }
    Ok(())
}
