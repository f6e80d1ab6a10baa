//! Every rule on a small memory set: injective rules turn out surjective.

use symdyn::automaton::surjunctivity_sweep;
use symdyn::group::FiniteSubset;
use symdyn::shift::builders::{full_shift, golden_mean, weiss_sft};

fn main() -> symdyn::Result<()> {
    let cases = [
        ("full shift", full_shift(2), FiniteSubset::integers(-1..=1)),
        ("golden mean", golden_mean(), FiniteSubset::integers([0, 1])),
        ("weiss", weiss_sft(), FiniteSubset::integers([-1, 0])),
    ];
    for (name, x, memory) in cases {
        let r = surjunctivity_sweep(&x, &memory)?;
        println!(
            "{name:12} S = {memory}: {} rules, {} preserve X, {} injective, {} surjective, {} injective but not onto",
            r.total,
            r.preserving,
            r.injective,
            r.surjective,
            r.violations.len()
        );
        for v in &r.violations {
            println!("    rule {} table {}", v.index, x.alphabet().decode(&v.table));
        }
    }
    Ok(())
}
