//! Qubit codes inside a single large spin whose Clifford gates are spatial
//! rotations, with the group theory, gate constructions, noise model,
//! optimal recovery and spin Wigner functions needed to analyse them.
//!
//! Basis convention throughout: spin-j vectors are indexed by m descending,
//! index 0 is |j, j⟩ and index 2j is |j, −j⟩.

pub mod code;
pub mod codefile;
pub mod error;
pub mod gates;
pub mod group;
pub mod linalg;
pub mod noise;
pub mod recovery;
pub mod su2;
pub mod wigner;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use su2::{GroupElement, SpinJ};
