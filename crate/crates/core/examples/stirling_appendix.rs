//! Binomial tail bound, the subset identity and the factorial chain.

use num::rational::Ratio;
use num::BigRational;
use symdyn::stirling::{binomial_subset_identity, d_zero, kappa, stirling_factorial_bounds, verify_tail_bound};

fn main() -> symdyn::Result<()> {
    for gamma in [Ratio::new(1, 20), Ratio::new(1, 10), Ratio::new(1, 4), Ratio::new(2, 5)] {
        let d0 = d_zero(gamma)?;
        let t = verify_tail_bound(gamma, d0, d0 + 500)?;
        let first = &t.rows[0];
        println!(
            "gamma = {gamma}: kappa = {:.9}, d0 = {d0}, slack at d0 = {:.6}, slope {:.6}",
            kappa(gamma)?,
            first.slack,
            t.slack_slope()
        );
    }
    let (lhs, rhs) = binomial_subset_identity(30, &BigRational::new(3.into(), 5.into()))?;
    println!("subset identity at n = 30: {}", lhs == rhs);
    for m in [1, 10, 100] {
        let b = stirling_factorial_bounds(m)?;
        println!("m = {m}: {:.6e} <= m! <= {:.6e}", b.lower, b.upper);
    }
    Ok(())
}
