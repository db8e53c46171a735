//! Biword statistics and the weight maps built from them.
//!
//! `exc(α)` counts columns whose bottom letter exceeds the top letter.
//! `den(α)` is defined on biwords with a non-decreasing top word as the sum of
//! the exceedance positions, plus `imv` of the bottom letters at exceedance
//! positions, plus `inv` of the remaining bottom letters. `imv` counts weak
//! inversions (`i < j`, `v_i >= v_j`); on repeated letters this is what makes
//! `(exc, den)` constant on SH classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    coef_from_json, coef_to_json, fmt_term, inversions, AlgebraError, Biword, Expression, LaurentPoly, Letter,
    Parser, Word,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("den is only defined on biwords with a non-decreasing top word, got {0}")]
    NonSortedTop(Biword),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StatPair {
    pub exc: usize,
    pub den: usize,
}

/// `inv(bottom) - inv(top)`.
pub fn inv_minus(b: &Biword) -> i64 {
    b.bottom().inv() as i64 - b.top().inv() as i64
}

pub fn exc(b: &Biword) -> usize {
    b.columns().filter(|(top, bottom)| bottom > top).count()
}

/// Weak inversions: pairs `i < j` with `v[i] >= v[j]`.
pub fn imv<T: Ord>(v: &[T]) -> usize {
    let mut n = 0;
    for (i, x) in v.iter().enumerate() {
        n += v[i + 1..].iter().filter(|y| x >= *y).count();
    }
    n
}

pub fn den(b: &Biword) -> Result<usize, StatsError> {
    if !b.top().is_sorted() {
        return Err(StatsError::NonSortedTop(b.clone()));
    }
    let mut position_sum = 0;
    let mut exceeding: Vec<Letter> = Vec::new();
    let mut rest: Vec<Letter> = Vec::new();
    for (i, (top, bottom)) in b.columns().enumerate() {
        if bottom > top {
            position_sum += i + 1;
            exceeding.push(bottom);
        } else {
            rest.push(bottom);
        }
    }
    Ok(position_sum + imv(&exceeding) + inversions(&rest))
}

pub fn stat_pair(b: &Biword) -> Result<StatPair, StatsError> {
    Ok(StatPair { exc: exc(b), den: den(b)? })
}

/// True iff the top word is a rearrangement of the bottom word.
pub fn is_circuit(b: &Biword) -> bool {
    b.top().sorted() == b.bottom().sorted()
}

pub fn is_circular(e: &Expression) -> bool {
    e.support().all(is_circuit)
}

/// `α ↦ q^{inv⁻ α} α`, extended linearly.
pub fn phi(e: &Expression) -> Expression {
    e.map_terms(|b, c| c.shift(0, inv_minus(b) as i32))
}

/// `α ↦ t^{exc α} q^{inv⁻ α} α`, extended linearly.
pub fn phi_sf(e: &Expression) -> Expression {
    e.map_terms(|b, c| c.shift(exc(b) as i32, inv_minus(b) as i32))
}

/// `(u|v) ↦ t^{exc} q^{den} u`, extended linearly into the word algebra.
pub fn psi(e: &Expression) -> Result<WordExpression, StatsError> {
    let mut out = WordExpression::zero();
    for (b, c) in e.iter() {
        let d = den(b)?;
        out.add_term(b.top().clone(), c.shift(exc(b) as i32, d as i32));
    }
    Ok(out)
}

/// `psi` applied to a single biword, without summation, as `(top, weight)`.
pub fn psi_monomial(b: &Biword) -> Result<(Word, LaurentPoly), StatsError> {
    Ok((b.top().clone(), LaurentPoly::monomial(1, exc(b) as i32, den(b)? as i32)))
}

/// A finite linear combination of words with Laurent coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WordExpression {
    terms: BTreeMap<Word, LaurentPoly>,
}

impl WordExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut w = Self::zero();
        w.add_term(Word::empty(), LaurentPoly::one());
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Word::empty()).is_some_and(LaurentPoly::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_expr(&mut self, other: &WordExpression) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn to_records(&self) -> Vec<WordTermRecord> {
        let mut out = Vec::new();
        for (w, c) in &self.terms {
            for (m, v) in c.iter().rev() {
                out.push(WordTermRecord { t_exp: m.t, q_exp: m.q, coef: coef_to_json(v), word: w.values() });
            }
        }
        out
    }

    pub fn from_records(records: &[WordTermRecord]) -> Result<Self, AlgebraError> {
        let mut out = Self::zero();
        for r in records {
            let c = coef_from_json(&r.coef)
                .ok_or_else(|| AlgebraError::Parse { pos: 0, msg: format!("bad coefficient {}", r.coef) })?;
            out.add_term(Word::from_values(&r.word)?, LaurentPoly::monomial(c, r.t_exp, r.q_exp));
        }
        Ok(out)
    }
}

impl Serialize for WordExpression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WordExpression", 2)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("terms", &self.to_records())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WordTermRecord {
    pub t_exp: i32,
    pub q_exp: i32,
    pub coef: serde_json::Value,
    pub word: Vec<u16>,
}

impl fmt::Display for WordExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            fmt_term(f, c, &format!("({w})"), i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for WordExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordExpression({self})")
    }
}

impl FromStr for WordExpression {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let mut out = WordExpression::zero();
        for (w, c) in p.sum(Parser::bare_word, Word::empty)? {
            out.add_term(w, c);
        }
        Ok(out)
    }
}
