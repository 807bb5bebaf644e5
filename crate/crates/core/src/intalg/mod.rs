//! Exact symbolic subsets of ℕ.
//!
//! Everything is 128-bit integer arithmetic. Sets are described by a small
//! AST ([`StructuredSet`], parsed from a text DSL) and evaluated on windows
//! into piecewise-periodic [`SegmentSet`]s, which support exact counting,
//! boolean operations and capped sumsets without enumerating elements.
//! [`IntervalUnion`] is the fully materialized form.

mod interval;
mod parse;
mod pattern;
mod schedule;
mod segments;
mod structured;

pub use interval::{
    iu_boolean, iu_count, iu_sumset, periodize, BoolOp, IntervalUnion, SUMSET_MAX_PAIRS,
};
pub use parse::{parse_schedule, parse_set};
pub use pattern::{Pattern, PATTERN_MAX_MODULUS, SUM_MAX_MODULUS};
pub use schedule::{Schedule, SCHEDULE_LIMIT};
pub use segments::{Segment, SegmentSet, DEFAULT_INTERVAL_BUDGET, MAX_SEGMENTS};
pub use structured::{to_intervals, to_intervals_with_budget, Endpoint, Frac, StructuredSet};
