//! Exact symbolic engine for the free biword algebra over `Z[t, 1/t, q, 1/q]`.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: Laurent polynomials in `t` and `q`, words, biwords and
//!   finitely supported expressions, together with their text grammar.
//! - [`stats`]: biword statistics (`inv⁻`, `exc`, `den`), circuits and the
//!   weight maps `phi`, `phi_sf` and `psi`.
//! - [`rewrite`]: the seven built-in reduction systems, leftmost reduction,
//!   positional rewriting and normal-form enumeration.
//! - [`series`]: truncated Boson/Fermion series, product slices and the
//!   Master-Theorem verification drivers.
//! - [`idealcheck`]: graded two-sided ideal membership by exact elimination.
//! - [`cli`]: command implementations behind the `qmm` binary.

pub mod algebra;
pub mod cli;
pub mod idealcheck;
pub mod rewrite;
pub mod series;
pub mod stats;

pub use algebra::{Biword, Expression, LaurentPoly, Letter, Word};
pub use rewrite::{ReductionSystem, SystemName};
pub use series::Variant;
