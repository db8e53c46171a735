//! Membership in the homogeneous components of the two-sided ideal `I(S)`
//! generated by the differences `α - E_α`, decided over the rationals.
//!
//! Every rule of the `q = 1` systems permutes letters inside the top row and
//! inside the bottom row, so each generator lives in a single content class
//! (sorted top, sorted bottom). Membership is therefore decided class by class,
//! by integer row reduction with content normalization.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Biword, Expression, Word};
use crate::rewrite::{all_biwords, ReductionSystem, RewriteError, SystemName};
use crate::series::{product_slice, DegreeResidual, VerificationMode, VerificationReport, Variant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("expression is not homogeneous of degree {expected} (found a term of length {found})")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("coefficient of {0} depends on t or q")]
    NonConstantCoefficients(Biword),
    #[error("ideal membership is only checked for the q = 1 systems sm, sf, sr, sh (got {0})")]
    UnsupportedSystem(SystemName),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// All generators `β₁·(α - E_α)·β₂` of total length `n` over `1..=r`.
#[derive(Clone, Debug)]
pub struct GradedGeneratorSet {
    pub system: SystemName,
    pub r: u16,
    pub degree: usize,
    pub generators: Vec<Expression>,
}

impl GradedGeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A generator `β₁·(α - E_α)·β₂` is `β - (β with α rewritten at that spot)`,
/// where `β = β₁αβ₂`, so the set is enumerated as `β - reduce_at(β, i)` over
/// every biword `β` and every matching position `i`.
pub fn graded_generators(sys: &ReductionSystem, r: u16, n: usize) -> GradedGeneratorSet {
    let generators = if n < 2 {
        Vec::new()
    } else {
        all_biwords(r, n)
            .collect::<Vec<_>>()
            .into_par_iter()
            .flat_map_iter(|b| {
                sys.match_positions(&b)
                    .into_iter()
                    .map(|i| {
                        let rewritten = sys.reduce_at(&b, i + 1).expect("position matches");
                        &Expression::from_biword(b.clone()) - &rewritten
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    GradedGeneratorSet { system: sys.name(), r, degree: n, generators }
}

/// Number of `(x, y, a, b)` over `1..=r` matched by a rule of `sys`.
pub fn matched_pairs(sys: &ReductionSystem, r: u16) -> usize {
    all_biwords(r, 2).filter(|b| !sys.match_positions(b).is_empty()).count()
}

type Content = (Word, Word);
type Key = (usize, usize, Biword);

fn content(b: &Biword) -> Content {
    (b.top().sorted(), b.bottom().sorted())
}

fn key(b: &Biword) -> Key {
    (b.top().inv(), b.bottom().inv(), b.clone())
}

/// Sparse integer row keyed so that the rewriting measure orders the columns.
type Row = BTreeMap<Key, BigInt>;

fn integer_row(e: &Expression) -> Result<Row, IdealError> {
    e.iter()
        .map(|(b, c)| {
            let c = c.as_constant().ok_or_else(|| IdealError::NonConstantCoefficients(b.clone()))?;
            Ok((key(b), c))
        })
        .collect()
}

fn normalize(row: &mut Row) {
    let g = row.values().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.values_mut() {
            *c /= &g;
        }
    }
}

/// `row := c_p·row - c_r·pivot`, cancelling `row`'s entry at the pivot's lead.
fn eliminate(row: &mut Row, lead: &Key, pivot: &Row) {
    let c_r = row[lead].clone();
    let c_p = &pivot[lead];
    if !c_p.is_one() {
        for c in row.values_mut() {
            *c *= c_p;
        }
    }
    for (k, v) in pivot {
        let entry = row.entry(k.clone()).or_insert_with(BigInt::zero);
        *entry -= &c_r * v;
        if entry.is_zero() {
            row.remove(k);
        }
    }
    normalize(row);
}

/// Echelon basis of one content class, indexed by leading key.
#[derive(Default)]
struct Echelon {
    pivots: HashMap<Key, Row>,
}

impl Echelon {
    /// Reduces `row` until its leading key has no pivot; returns whether it vanished.
    fn reduce(&self, row: &mut Row) -> bool {
        loop {
            let Some(lead) = row.keys().next_back().cloned() else { return true };
            match self.pivots.get(&lead) {
                Some(p) => eliminate(row, &lead, p),
                None => return false,
            }
        }
    }

    fn insert(&mut self, mut row: Row) {
        if !self.reduce(&mut row) {
            let lead = row.keys().next_back().cloned().expect("nonzero row");
            if row[&lead].is_negative() {
                for c in row.values_mut() {
                    *c = -&*c;
                }
            }
            self.pivots.insert(lead, row);
        }
    }
}

fn split_by_content(e: &Expression) -> BTreeMap<Content, Expression> {
    let mut parts: BTreeMap<Content, Expression> = BTreeMap::new();
    for (b, c) in e.iter() {
        parts.entry(content(b)).or_default().add_term(b.clone(), c.clone());
    }
    parts
}

/// Whether `e` lies in the rational span of `g`.
pub fn member(e: &Expression, g: &GradedGeneratorSet) -> Result<bool, IdealError> {
    if let Some(b) = e.support().find(|b| b.len() != g.degree) {
        return Err(IdealError::DegreeMismatch { expected: g.degree, found: b.len() });
    }
    let targets = split_by_content(e);
    let mut classes: BTreeMap<&Content, Echelon> = targets.keys().map(|c| (c, Echelon::default())).collect();
    for gen in &g.generators {
        let Some(first) = gen.support().next() else { continue };
        if let Some(ech) = classes.get_mut(&content(first)) {
            ech.insert(integer_row(gen)?);
        }
    }
    for (c, part) in &targets {
        let mut row = integer_row(part)?;
        if !classes[c].reduce(&mut row) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weak Master Theorem: `(Ferm × Bos)_n - δ_{n,0}` lies in `I(S)` for every
/// `n ≤ max_degree`.
pub fn verify_weak_master(sys: &ReductionSystem, r: u16, max_degree: usize) -> Result<VerificationReport, IdealError> {
    if !sys.name().is_classical() {
        return Err(IdealError::UnsupportedSystem(sys.name()));
    }
    let started = Instant::now();
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|n| {
            let mut residual = product_slice(r, n, Variant::One);
            if n == 0 {
                residual = &residual - &Expression::one();
            }
            let in_ideal = if n == 0 {
                residual.is_zero()
            } else {
                member(&residual, &graded_generators(sys, r, n))?
            };
            Ok(DegreeResidual { degree: n, residual, psi_image: None, in_ideal: Some(in_ideal), ok: in_ideal })
        })
        .collect::<Result<Vec<_>, IdealError>>()?;
    let mut report =
        VerificationReport::assemble(sys.name(), Variant::One, VerificationMode::Weak, r, max_degree, degrees, started);
    // The residual here is the unreduced slice, so the strong flag is meaningless.
    report.strong_residual_nonzero = false;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub system: SystemName,
    pub r: u16,
    pub degree: usize,
    pub generators: usize,
    pub member: bool,
}

/// Membership of a homogeneous expression in `I(S)`, with its degree inferred.
pub fn ideal_member(sys: &ReductionSystem, r: u16, e: &Expression) -> Result<MembershipReport, IdealError> {
    if !sys.name().is_classical() {
        return Err(IdealError::UnsupportedSystem(sys.name()));
    }
    let degree = e.support().map(Biword::len).next().unwrap_or(0);
    let g = graded_generators(sys, r, degree);
    let member = member(e, &g)?;
    Ok(MembershipReport { system: sys.name(), r, degree, generators: g.len(), member })
}
