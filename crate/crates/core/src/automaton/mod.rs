//! Cellular automata on subshifts: local rules, their induced maps, and
//! injectivity/surjectivity decisions.

mod decide;
mod lattice;
mod rule;
mod sweep;

pub use decide::{confirm_orphan, decide_injective, decide_surjective, Injectivity, Surjectivity, MAX_SUBSET_STATES};
pub use lattice::{periodic_collision, periodic_image, periodic_orphan, SemiDecision};
pub use rule::{preserves_subshift, Endomorphism, LocalRule};
pub use sweep::{surjunctivity_sweep, surjunctivity_sweep_with, RuleRecord, SweepReport, DEFAULT_RULE_BUDGET};
