//! Finite abelian groups, their subgroups and quotients, and sublattices of
//! `Z^d`.
//!
//! Elements of a finite group are addressed by their mixed-radix index so
//! that subsets can be stored as bit vectors (see [`crate::setalg`]).

mod group;
mod lattice;
mod quotient;
mod subgroup;

pub use group::{Ambient, FiniteGroup, GroupElement, GroupRef, DEFAULT_MAX_ORDER};
pub use lattice::{enumerate_sublattices, hnf_reduce, Sublattice, MAX_SUBLATTICE_INDEX};
pub use quotient::{lattice_quotient, quotient, Projection, QuotientGroup, QUOTIENT_MAX_ORDER};
pub use subgroup::{enumerate_subgroups, subgroup_closure, Subgroup, SUBGROUP_SWEEP_MAX};
