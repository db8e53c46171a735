//! Exact arithmetic for Laurent polynomials in `t, q` and for finite linear
//! combinations of biwords.

mod expr;
mod parse;
mod poly;
mod word;

use thiserror::Error;

pub use expr::{expr_add, expr_eq, expr_mul, poly_add, poly_mul, poly_scale, Expression, TermRecord};
pub use parse::{parse_biword, parse_expression, parse_poly};
pub use poly::{LaurentPoly, Monomial};
pub use word::{biword_concat, inversions, sorted_rearrangement, word_inv, Biword, Letter, Word};

pub(crate) use expr::fmt_term;
pub(crate) use parse::Parser;
pub(crate) use poly::{coef_from_json, coef_to_json};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("letter {letter} outside the alphabet{}", r.map(|r| format!(" 1..={r}")).unwrap_or_default())]
    LetterOutOfRange { letter: u16, r: Option<u16> },
    #[error("top word has length {top} but bottom word has length {bottom}")]
    LengthMismatch { top: usize, bottom: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
