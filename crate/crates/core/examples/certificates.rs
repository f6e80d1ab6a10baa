//! Gluing certificates over Z and Z^2.

use symdyn::group::FiniteSubset;
use symdyn::shift::builders::{golden_mean, hard_ball};
use symdyn::shift::{check_splicable_with, check_strong_irreducibility_with, BoxWindow, Verdict, DEFAULT_WORK};

fn main() -> symdyn::Result<()> {
    let golden = golden_mean();
    let delta = FiniteSubset::integers(-1..=1);
    report("golden mean", &golden, &delta, 8)?;

    let squares = hard_ball(2, &[vec![1, 0], vec![0, 1]])?;
    report("hard squares", &squares, &BoxWindow::centered(2, 1).to_subset(), 4)?;
    Ok(())
}

fn report(name: &str, x: &symdyn::shift::Subshift, delta: &FiniteSubset, budget: usize) -> symdyn::Result<()> {
    match check_strong_irreducibility_with(x, delta, budget, 2, DEFAULT_WORK)? {
        Verdict::Certified(c) => println!(
            "{name}: strongly irreducible on [0,{budget})^r ({}, {} pairs)",
            c.exactness, c.closed_pairs
        ),
        v => println!("{name}: strong irreducibility {}", v.label()),
    }
    match check_splicable_with(x, delta, budget, 2, DEFAULT_WORK)? {
        Verdict::Certified(c) => println!("{name}: splicable ({}, {} sets)", c.exactness, c.sets),
        v => println!("{name}: splicing {}", v.label()),
    }
    Ok(())
}
