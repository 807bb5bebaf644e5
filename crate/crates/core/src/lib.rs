//! Kneser-type sumset machinery for discrete abelian groups.
//!
//! The crate is split along the objects it manipulates:
//!
//! * [`grouplat`]: finite abelian groups `Z_{n1} x ... x Z_{nd}`, subgroups,
//!   coset-table quotients and sublattices of `Z^d` in Hermite normal form.
//! * [`setalg`]: bit-vector subsets of finite groups: sumsets (direct and
//!   FFT), stabilizers, Kneser certificates and the KJ reduction.
//! * [`intalg`]: exact symbolic subsets of `N` (periodic pieces, scheduled
//!   blocks, interval unions with 128-bit endpoints) and the set DSL.
//! * [`folner`]: finite Følner prefixes, defect reports and exact densities.
//! * [`refine`]: KJ-stabilizers of periodic models, the refinement search for
//!   sub-windows `Psi_j ⊆ F_{n_j}`, and density-level theorem checkers.
//! * [`verify`]: exhaustive and seeded random sweeps over finite groups.

pub mod error;
pub mod folner;
pub mod grouplat;
pub mod intalg;
pub mod rational;
pub mod refine;
pub mod rng;
pub mod setalg;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Exact;
