//! Microstate entropy of the golden mean shift against the transfer-matrix value.

use num::rational::Ratio;
use symdyn::entropy::{estimate_entropy, pattern_complexity_bound, transfer_matrix_entropy};
use symdyn::shift::builders::golden_mean;

fn main() -> symdyn::Result<()> {
    let x = golden_mean();
    let delta = Ratio::new(1, 1000);
    let schedule: Vec<_> = [8, 12, 16, 20].into_iter().map(|d| (d, delta)).collect();
    let est = estimate_entropy(&x, &schedule, Ratio::new(1, 4))?;
    // |Per_d| is a Lucas number, which overshoots phi^d for even d
    for row in &est.trace {
        println!("d = {:2}  N_eps = {:6}  rate = {:.9}", row.side, row.n_eps, row.rate);
    }
    println!("lower  {:.9}", est.lower);
    println!("oracle {:.9}", transfer_matrix_entropy(&x)?);
    println!("upper  {:.9} (window {})", est.upper, est.upper_n);
    for n in [4, 8, 12] {
        println!("log|L_{n}| / {n} = {:.9}", pattern_complexity_bound(&x, n)?);
    }
    Ok(())
}
