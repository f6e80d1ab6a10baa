//! Group models, balls, configurations, the metric and periodic points.

use symdyn::group::GroupModel;
use symdyn::shift::builders::{golden_mean, hard_square};
use symdyn::shift::{config_distance, enumerate_patterns, periodic_points, Configuration, LineGraph};

fn main() -> symdyn::Result<()> {
    for g in [GroupModel::Lattice(1), GroupModel::Lattice(2), GroupModel::Free(2)] {
        println!("{g}: |ball(3)| = {}", g.ball(3).len());
    }

    let x = golden_mean();
    let zero = Configuration::constant(1, 0);
    let y = zero.with_override(&[3], 1);
    println!("rho(0^Z, 0^Z with a 1 at 3) = {}", config_distance(&zero, &y));
    println!("in X: {}", x.contains(&y));

    let words = enumerate_patterns(&x, &GroupModel::Lattice(1).ball(3))?;
    println!("patterns on Omega_3: {}", words.len());
    let g = LineGraph::new(&x)?;
    println!("words of length 10: {}", g.count_words(10));
    for d in 1..=6 {
        println!("|Per_{d}| = {}", periodic_points(&x, d)?.len());
    }
    println!("hard squares, 3x3-periodic points: {}", periodic_points(&hard_square(), 3)?.len());
    Ok(())
}
