//! Binary locally repairable codes that tolerate two or three erasures under
//! sequential local repair.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf2`]: bit-packed linear algebra over the two-element field and the
//!   [`LinearCode`] type.
//! * [`combinatorics`]: Gale–Ryser realization, subset substitution, the
//!   two-erasure subset cover and the red/blue line meshes.
//! * [`constructions`]: systematic codes built from parity maps, covers and
//!   meshes.
//! * [`repair`]: exhaustive oracles for repair sets, sequential repair
//!   schedules, the exact-LRC predicate and failure simulation.
//! * [`graphs`]: repair graphs, minimal source sets and structural checks.
//! * [`bounds`]: closed-form length, rate and distance bounds.
//! * [`formats`]: text file formats (`.lrc`, `.mesh`, `.cover`, `.rg`).

pub mod bounds;
pub mod combinatorics;
pub mod constructions;
mod error;
pub mod formats;
pub mod gf2;
pub mod graphs;
pub mod repair;
pub mod report;
mod subsets;

pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BitVec, CodeParams, LinearCode, RowSpace};
pub use report::{Check, ValidationReport, Witness};

/// Default work budget for exhaustive searches, in elementary steps.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;
