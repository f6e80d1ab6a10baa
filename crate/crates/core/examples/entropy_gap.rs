//! A proper subshift of the golden mean has strictly smaller entropy.

use num::rational::Ratio;
use symdyn::entropy::entropy_gap_experiment;
use symdyn::shift::builders::{forbidding_symbols, full_shift, golden_mean};

fn main() -> symdyn::Result<()> {
    let delta = Ratio::new(1, 1000);
    let schedule: Vec<_> = [10, 16].into_iter().map(|d| (d, delta)).collect();
    let eps = Ratio::new(1, 4);
    let pairs = [
        ("golden mean", golden_mean(), "0^Z", forbidding_symbols(2, &[1])),
        ("full shift", full_shift(2), "golden mean", golden_mean()),
    ];
    for (xn, x, yn, y) in pairs {
        let g = entropy_gap_experiment(&x, &y, &schedule, eps, 0.0)?;
        println!(
            "{xn} vs {yn}: lower(X) = {:.9}, upper(Y) = {:.9}, gap {:.9}, witness {}",
            g.x.lower,
            g.y.upper,
            g.gap(),
            g.witness.describe(x.alphabet())
        );
    }
    Ok(())
}
