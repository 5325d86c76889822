//! Sums of the shape `ax^2 + by^2 + cT_z`, `ax^2 + bT_y + cT_z` and
//! `aT_x + bT_y + cT_z`, where `T_n = n(n+1)/2`.
//!
//! The crate decides which of these forms represent every natural number
//! (universal), all sufficiently large ones (almost universal) or all of them
//! outside a finite union of arithmetic progressions and square classes
//! (asymptotically universal), and computes the finite exceptional sets by a
//! bitset sieve.

pub mod arith;
pub mod classify;
mod error;
pub mod forms;
pub mod local;
pub mod regression;
pub mod sieve;
pub mod twoadic;

pub use classify::{classify, Classification, TriState};
pub use error::{Error, Result};
pub use forms::{FormKind, MixedForm};
pub use sieve::{exceptional_set, ExceptionalSetReport, SieveConfig};
