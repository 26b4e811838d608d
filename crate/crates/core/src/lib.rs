//! Finitely presented groups with peripheral structure: presentations and
//! Tietze moves, homomorphisms into finite groups, characteristic cores and
//! Dehn fillings, invariants, a bounded word-problem solver and an
//! isomorphism semi-decider.

pub mod budget;
pub mod charcore;
pub mod digest;
pub mod error;
pub mod filling;
pub mod fingerprint;
pub mod finite;
pub mod format;
pub mod homs;
pub mod iso;
pub mod par;
pub mod perm;
pub mod presentation;
pub mod schreier;
pub mod snf;
pub mod tietze;
pub mod word;
pub mod wordproblem;

pub use budget::{Budgets, Control, ExecMode};
pub use error::{Error, Result};
pub use presentation::{MarkedGroup, PeripheralRecord, Presentation};
pub use word::{Letter, Word};
