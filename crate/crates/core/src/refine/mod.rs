//! Constructive side of the density theorems: KJ-stabilizers of periodic
//! models, the search for refined Følner windows, the upper-density chain
//! and the numeric check of Kneser's density theorem.

mod examples;
mod kj;
mod lad;
mod pipeline;
mod search;

pub use examples::{
    half_blocks_example, rec3_example, tower_example, Criterion, HalfBlocksReport, Rec3Report,
    TowerReport, TOWER_WITNESS_FLOOR,
};
pub use kj::{kj_stabilizer_periodic, kj_stabilizer_torus, KjReport, Period};
pub use lad::{cofiniteness_witness, verify_kneser_lad, KneserLadReport};
pub use pipeline::{ubd_pipeline, PipelineOptions, UbdPipelineReport};
pub use search::{
    density_gap, refinement_search, verify_folner_theorem, Family, FamilyKind, FolnerCheck,
    GapReport, Instance, PsiDensities, RefinementResult, Residuals, SearchOptions,
};
