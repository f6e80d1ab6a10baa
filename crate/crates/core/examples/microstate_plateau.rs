//! The separated count does not depend on the scale once it is below the
//! expansivity constant, and perturbing the lifts barely moves it.

use num::rational::Ratio;
use symdyn::entropy::{
    count_separated, good_coordinate_set, is_good_map, periodic_lift, ConfigDictionary, CountMode, EntropyParams,
    MicrostateSpace,
};
use symdyn::group::GroupModel;
use symdyn::shift::builders::golden_mean;
use symdyn::shift::Configuration;
use symdyn::sofic::cyclic_approximation_with_radius;

fn main() -> symdyn::Result<()> {
    let x = golden_mean();
    let d = 18;
    let f = GroupModel::Lattice(1).ball(2);
    let approx = cyclic_approximation_with_radius(d, 1)?;
    let delta = Ratio::new(1, 1000);
    for eps in [Ratio::new(1, 4), Ratio::new(1, 8), Ratio::new(1, 16)] {
        let params = EntropyParams::new(f.clone(), delta, eps, approx.clone())?;
        let mut space = MicrostateSpace::from_periodic_lifts(&x, params)?;
        let lifts = count_separated(&space, eps, CountMode::Greedy)?;
        let added = space.perturb(&x, 10, 1)?;
        let perturbed = count_separated(&space, eps, CountMode::Greedy)?;
        println!(
            "eps = {eps:4}: lifts {lifts} -> {:.9}; with {added} perturbed maps {perturbed} -> {:.9}",
            (lifts as f64).ln() / d as f64,
            (perturbed as f64).ln() / d as f64
        );
    }

    // the good coordinates of a lift are all of [d]
    let mut dict = ConfigDictionary::new();
    let point = Configuration::periodic(&[d], vec![0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0]);
    let phi = periodic_lift(&mut dict, &point, &approx)?;
    let params = EntropyParams::new(f.clone(), Ratio::new(1, 8), Ratio::new(1, 4), approx.clone())?;
    println!("good map: {}", is_good_map(&dict, &phi, &params)?);
    let w = good_coordinate_set(&dict, &phi, &f, Ratio::new(1, 8), &approx)?;
    println!("|W_phi| = {} of {d}", w.len());
    Ok(())
}
