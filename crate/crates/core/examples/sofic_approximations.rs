//! Cyclic, torus and random word-extension approximations and their quality.

use symdyn::group::GroupModel;
use symdyn::sofic::{cyclic_approximation, quality, torus_approximation, word_extension_random};

fn main() -> symdyn::Result<()> {
    let z = GroupModel::Lattice(1);
    let cyc = cyclic_approximation(64)?;
    let q = quality(&cyc, &z.ball(3))?;
    println!("cyclic(64) on Omega_3: max defect {}, min separation {}", q.max_defect(), q.min_separation().unwrap());

    let torus = torus_approximation(10, 2)?;
    let q = quality(&torus, &GroupModel::Lattice(2).ball(2))?;
    println!("torus(10, 2) on Omega_2: max defect {}, min separation {}", q.max_defect(), q.min_separation().unwrap());

    let f2 = GroupModel::Free(2);
    for seed in [1, 2, 3] {
        // support radius 6 covers products of two words of length <= 3
        let a = word_extension_random(2, 2000, seed, 6)?;
        let q = quality(&a, &f2.ball(3))?;
        let sep = q.min_separation().unwrap();
        println!(
            "F_2, d = 2000, seed {seed}: max defect {}, min separation {sep} = {:.4}",
            q.max_defect(),
            *sep.numer() as f64 / *sep.denom() as f64
        );
    }
    print!("{}", cyclic_approximation(4)?.dump());
    Ok(())
}
