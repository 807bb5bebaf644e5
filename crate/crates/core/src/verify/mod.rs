//! Sweeps over finite groups checking Kneser's theorem and the finite
//! analogs of the structural lemmas. Any violation is reported with a
//! replayable witness.

mod checks;
mod sweep;

pub use checks::{
    check_gap_bound, check_jin_analog, check_kneser, check_push_analog, check_two_subgroups,
    CheckOutcome, Witness,
};
pub use sweep::{
    sweep_exhaustive, sweep_random, CheckTally, SweepOptions, SweepRun, SweepStats, Violations,
    EXHAUSTIVE_MAX_ORDER, MAX_WITNESSES, RANDOM_MAX_ORDER, SAMPLED_MAX_ORDER,
};
