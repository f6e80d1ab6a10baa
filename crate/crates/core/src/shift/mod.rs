//! Subshifts of finite type over `Z^r` and the point-level machinery around them.

mod alphabet;
pub mod builders;
mod certify;
mod config;
pub(crate) mod csp;
mod enumerate;
mod line;
mod metric;
pub(crate) mod subshift;
mod window;

pub use alphabet::Alphabet;
pub use certify::{
    check_splicable, check_splicable_with, check_strong_irreducibility, check_strong_irreducibility_with,
    uniform_expansivity_witness, ExpansivityCertificate, GluingCounterexample, IrreducibilityCertificate,
    SpliceCounterexample, SplicabilityCertificate, Verdict, DEFAULT_WORK, MAX_WINDOW_CELLS,
};
pub use config::{Configuration, LineConfig, TorusConfig};
pub(crate) use config::{torus_index, torus_point};
pub use enumerate::{
    enumerate_box, enumerate_patterns, periodic_cells, periodic_points, Exactness, PatternSet, DEFAULT_MARGIN,
};
pub use line::{Edge, LineGraph};
pub use metric::{config_distance, orbit_distance, Dyadic};
pub use subshift::{Pattern, Subshift};
pub use window::BoxWindow;

use crate::group::GroupElement;

/// `g x`, with `(g x)(h) = x(h - g)`.
pub fn shift_apply(g: &GroupElement, x: &Configuration) -> Configuration {
    x.shift_by(g)
}
