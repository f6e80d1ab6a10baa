//! Semi-decisions for cellular automata on Z^2 from periodic points.

use symdyn::automaton::{periodic_collision, periodic_orphan, Endomorphism, LocalRule, SemiDecision};
use symdyn::group::FiniteSubset;
use symdyn::shift::builders::hard_square;

fn main() -> symdyn::Result<()> {
    let x = hard_square();
    let memory = FiniteSubset::from_coords(2, [vec![0, 0], vec![1, 0], vec![0, 1]])?;
    // reads only the cell at the origin, so it is the identity
    let keep = LocalRule::from_fn(2, memory.clone(), |p| p[0])?;
    let erase = LocalRule::constant(2, memory, 0)?;
    for (name, rule) in [("projection", keep), ("erase", erase)] {
        let f = Endomorphism::new(rule, x.clone())?;
        let inj = match periodic_collision(&f, 4)? {
            SemiDecision::Refuted(_) => "not injective".to_string(),
            SemiDecision::Unknown(why) => why,
        };
        let surj = match periodic_orphan(&f, 2, 2)? {
            SemiDecision::Refuted(p) => format!("orphan {}", p.display(x.alphabet())),
            SemiDecision::Unknown(why) => why,
        };
        println!("{name}: {inj}; {surj}");
    }
    Ok(())
}
