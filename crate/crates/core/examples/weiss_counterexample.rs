//! An injective endomorphism of a non-strongly-irreducible SFT that is not onto.

use symdyn::automaton::{decide_injective, decide_surjective, Endomorphism, LocalRule, Surjectivity};
use symdyn::group::FiniteSubset;
use symdyn::shift::builders::weiss_sft;
use symdyn::shift::{check_splicable, check_strong_irreducibility, Verdict};

fn main() -> symdyn::Result<()> {
    let x = weiss_sft();
    let f = Endomorphism::new(LocalRule::weiss(), x.clone())?;
    println!("injective: {}", decide_injective(&f)?.is_injective());
    if let Surjectivity::NotSurjective { orphan } = decide_surjective(&f)? {
        println!("orphan: {}", x.alphabet().decode(&orphan));
    }

    let delta = FiniteSubset::integers(-1..=1);
    match check_strong_irreducibility(&x, &delta, 8)? {
        Verdict::Refuted(w) => println!(
            "not strongly irreducible: {} and {} cannot coexist",
            w.p1.display(x.alphabet()),
            w.p2.display(x.alphabet())
        ),
        v => println!("strong irreducibility: {}", v.label()),
    }
    println!("splicable with {delta}: {}", check_splicable(&x, &delta, 8)?.label());
    Ok(())
}
