//! Følner prefixes and exact densities along them.
//!
//! A prefix is a finite list of windows `F_1, ..., F_T`. Limits along the
//! infinite sequence are approximated by minima and maxima over the last
//! terms; reports carry exact rationals so that the truncation is the only
//! approximation.

mod density;
mod prefix;
mod scan;
mod torus;

pub use density::{
    count_in_window, defect_report, density, density_segments, density_torus, density_with,
    DefectReport, DensityOptions, DensityReport,
};
pub use prefix::{make_prefix, parse_prefix, FolnerPrefix, PrefixKind, Window};
pub(crate) use scan::candidates as scan_candidates;
pub use scan::{
    default_tail_from, lad_scan, lad_scan_segments, ubd_estimate, window_search, LadRecord,
    UbdRecord, WindowHit, WINDOW_SEARCH_MAX_SEGMENTS,
};
pub use torus::{TorusSet, BOX_MAX_CELLS};
