//! Reduction systems on adjacent biletter pairs and the leftmost-reduction
//! operator.
//!
//! Every built-in rule rewrites a factor `(xy|ab)` into a combination of the
//! four biwords obtained by optionally swapping the two top letters and
//! optionally swapping the two bottom letters, so a right-hand side is stored
//! as a short list of [`PairTerm`]s.
//!
//! Termination is certified by the lexicographic measure
//! `(inv(top), inv(bottom))`: each replacement strictly decreases it (see
//! [`certify_measure`]). [`ReductionSystem::leftmost_reduce`] relies on that
//! order to process every biword at most once.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Biword, Expression, LaurentPoly, Letter};

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;
pub const DEFAULT_NODE_BUDGET: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("unknown reduction system {0:?} (expected one of sm, sf, sf_q, sq_q, sr, sr_q, sh)")]
    UnknownSystem(String),
    #[error("leftmost reduction exceeded the step budget of {0} rule applications")]
    StepBudgetExceeded(u64),
    #[error("no rule of {system} matches {biword} at position {position}")]
    NoMatchAtPosition { system: SystemName, biword: Biword, position: usize },
    #[error("normal-form enumeration exceeded {budget} nodes ({} forms found so far)", partial.forms.len())]
    BudgetExceeded { budget: usize, partial: Box<NormalFormSet> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SystemName {
    #[serde(rename = "sm")]
    Sm,
    #[serde(rename = "sf")]
    Sf,
    #[serde(rename = "sf_q")]
    SfQ,
    #[serde(rename = "sq_q")]
    SqQ,
    #[serde(rename = "sr")]
    Sr,
    #[serde(rename = "sr_q")]
    SrQ,
    #[serde(rename = "sh")]
    Sh,
}

impl SystemName {
    pub const ALL: [SystemName; 7] =
        [SystemName::Sm, SystemName::Sf, SystemName::SfQ, SystemName::SqQ, SystemName::Sr, SystemName::SrQ, SystemName::Sh];

    pub fn cli_name(self) -> &'static str {
        match self {
            SystemName::Sm => "sm",
            SystemName::Sf => "sf",
            SystemName::SfQ => "sf_q",
            SystemName::SqQ => "sq_q",
            SystemName::Sr => "sr",
            SystemName::SrQ => "sr_q",
            SystemName::Sh => "sh",
        }
    }

    /// True for the systems whose rules carry no `q`.
    pub fn is_classical(self) -> bool {
        matches!(self, SystemName::Sm | SystemName::Sf | SystemName::Sr | SystemName::Sh)
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SystemName::Sm => "SM",
            SystemName::Sf => "SF",
            SystemName::SfQ => "SF_q",
            SystemName::SqQ => "SQ_q",
            SystemName::Sr => "SR",
            SystemName::SrQ => "SR_q",
            SystemName::Sh => "SH",
        };
        f.write_str(s)
    }
}

impl FromStr for SystemName {
    type Err = RewriteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase();
        SystemName::ALL
            .into_iter()
            .find(|n| n.cli_name() == key || n.cli_name().replace('_', "") == key)
            .ok_or_else(|| RewriteError::UnknownSystem(s.to_string()))
    }
}

/// One term `sign * q^q_exp * (pair with optional swaps)` of a rule's
/// right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairTerm {
    pub negative: bool,
    pub q_exp: i32,
    pub swap_top: bool,
    pub swap_bottom: bool,
}

const fn term(negative: bool, q_exp: i32, swap_top: bool, swap_bottom: bool) -> PairTerm {
    PairTerm { negative, q_exp, swap_top, swap_bottom }
}

const SWAP_COLUMNS: &[PairTerm] = &[term(false, 0, true, true)];
const SWAP_COLUMNS_Q: &[PairTerm] = &[term(false, 1, true, true)];
const SWAP_COLUMNS_Q2: &[PairTerm] = &[term(false, 2, true, true)];
const SWAP_TOPS: &[PairTerm] = &[term(false, 0, true, false)];
const SWAP_TOPS_Q: &[PairTerm] = &[term(false, 1, true, false)];
const SWAP_BOTTOMS_Q: &[PairTerm] = &[term(false, 1, false, true)];
// (yx|ba) + (q - 1/q)(yx|ab)
const SQ_MIXED: &[PairTerm] = &[term(false, 0, true, true), term(false, 1, true, false), term(true, -1, true, false)];
// (yx|ba) + (yx|ab) - (xy|ba)
const SR_MIXED: &[PairTerm] = &[term(false, 0, true, true), term(false, 0, true, false), term(true, 0, false, true)];
// (yx|ba) + q(yx|ab) - 1/q (xy|ba)
const SRQ_MIXED: &[PairTerm] = &[term(false, 0, true, true), term(false, 1, true, false), term(true, -1, false, true)];

/// A matched rule: its index within the system (1-based, in display order)
/// and its right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairRule {
    pub rule: u8,
    pub terms: &'static [PairTerm],
}

/// Right-hand side of a rule instance as an expression on length-2 biwords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleOutcome {
    pub rule: u8,
    pub replacement: Expression,
}

/// Sign of `V(x,y,a,b) = (a-x-1/2)(a-y-1/2)(b-x-1/2)(b-y-1/2)`, computed
/// on the doubled factors `2a-2x-1` etc. which are odd integers.
pub fn v_sign(x: Letter, y: Letter, a: Letter, b: Letter) -> Ordering {
    let f = |u: Letter, v: Letter| 2 * i64::from(u.value()) - 2 * i64::from(v.value()) - 1;
    let prod = f(a, x) * f(a, y) * f(b, x) * f(b, y);
    assert_ne!(prod, 0, "V vanishes only off the integer lattice");
    prod.cmp(&0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReductionSystem {
    name: SystemName,
    step_budget: u64,
}

/// One rewrite applied to one term of an expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// The biword that was rewritten.
    #[serde(serialize_with = "ser_display")]
    pub biword: Biword,
    /// 1-based position `i` of the rewritten factor `(i, i+1)`.
    pub position: usize,
    pub rule: u8,
    /// The whole expression after the step.
    #[serde(serialize_with = "ser_display")]
    pub result: Expression,
}

pub(crate) fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pos={}: {}", self.position, self.result)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    #[serde(serialize_with = "ser_display")]
    pub expression: Expression,
    pub trace: Vec<TraceStep>,
}

/// Irreducible expressions reachable from a start expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormSet {
    pub system: SystemName,
    #[serde(serialize_with = "ser_display")]
    pub start: Expression,
    /// Sorted by expression.
    pub forms: Vec<NormalForm>,
    pub nodes_explored: usize,
    pub complete: bool,
}

impl NormalFormSet {
    pub fn expressions(&self) -> Vec<&Expression> {
        self.forms.iter().map(|f| &f.expression).collect()
    }
}

fn swap_delta(left: Letter, right: Letter) -> isize {
    match left.cmp(&right) {
        Ordering::Greater => -1,
        Ordering::Less => 1,
        Ordering::Equal => 0,
    }
}

impl ReductionSystem {
    pub fn new(name: SystemName) -> Self {
        ReductionSystem { name, step_budget: DEFAULT_STEP_BUDGET }
    }

    pub fn with_step_budget(mut self, budget: u64) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn name(&self) -> SystemName {
        self.name
    }

    pub fn step_budget(&self) -> u64 {
        self.step_budget
    }

    /// The rule matching the factor `(xy|ab)`, if any.
    pub fn pair_rule(&self, x: Letter, y: Letter, a: Letter, b: Letter) -> Option<PairRule> {
        let rule = |rule, terms| Some(PairRule { rule, terms });
        match self.name {
            SystemName::Sm | SystemName::Sf => (x > y).then_some(PairRule { rule: 1, terms: SWAP_COLUMNS }),
            SystemName::SfQ => {
                if x <= y {
                    return None;
                }
                match a.cmp(&b) {
                    Ordering::Greater => rule(1, SWAP_COLUMNS),
                    Ordering::Equal => rule(2, SWAP_COLUMNS_Q),
                    Ordering::Less => rule(3, SWAP_COLUMNS_Q2),
                }
            }
            SystemName::SqQ => match (x.cmp(&y), a.cmp(&b)) {
                (Ordering::Greater, Ordering::Equal) => rule(1, SWAP_TOPS_Q),
                (Ordering::Equal, Ordering::Greater) => rule(2, SWAP_BOTTOMS_Q),
                (Ordering::Greater, Ordering::Less) => rule(3, SWAP_COLUMNS),
                (Ordering::Greater, Ordering::Greater) => rule(4, SQ_MIXED),
                _ => None,
            },
            SystemName::Sr | SystemName::SrQ => {
                if x <= y {
                    return None;
                }
                let q = self.name == SystemName::SrQ;
                match a.cmp(&b) {
                    Ordering::Equal => rule(1, if q { SWAP_TOPS_Q } else { SWAP_TOPS }),
                    Ordering::Greater => rule(2, if q { SRQ_MIXED } else { SR_MIXED }),
                    Ordering::Less => None,
                }
            }
            SystemName::Sh => {
                if x <= y {
                    return None;
                }
                match v_sign(x, y, a, b) {
                    Ordering::Greater => rule(1, SWAP_TOPS),
                    _ => rule(2, SWAP_COLUMNS),
                }
            }
        }
    }

    /// The matcher on two biletters `(x|a)` and `(y|b)`.
    pub fn matcher(&self, left: (Letter, Letter), right: (Letter, Letter)) -> Option<RuleOutcome> {
        let pr = self.pair_rule(left.0, right.0, left.1, right.1)?;
        let pair = Biword::from_columns([left, right]);
        let mut replacement = Expression::zero();
        for t in pr.terms {
            let (b, c) = apply_term(&pair, 0, t, &LaurentPoly::one());
            replacement.add_term(b, c);
        }
        Some(RuleOutcome { rule: pr.rule, replacement })
    }

    fn rule_at(&self, b: &Biword, i: usize) -> Option<PairRule> {
        let (x, a) = b.column(i);
        let (y, bb) = b.column(i + 1);
        self.pair_rule(x, y, a, bb)
    }

    /// 0-based start of the leftmost matching factor.
    pub fn leftmost_match(&self, b: &Biword) -> Option<usize> {
        (0..b.len().saturating_sub(1)).find(|&i| self.rule_at(b, i).is_some())
    }

    /// All 0-based positions with a matching factor.
    pub fn match_positions(&self, b: &Biword) -> Vec<usize> {
        (0..b.len().saturating_sub(1)).filter(|&i| self.rule_at(b, i).is_some()).collect()
    }

    pub fn is_irreducible(&self, b: &Biword) -> bool {
        self.leftmost_match(b).is_none()
    }

    pub fn is_irreducible_expr(&self, e: &Expression) -> bool {
        e.support().all(|b| self.is_irreducible(b))
    }

    /// Rewrites the factor starting at 0-based `i`, returning the rule index
    /// and the weighted successor biwords.
    fn rewrite_terms(&self, b: &Biword, i: usize, coef: &LaurentPoly) -> Option<(u8, Vec<(Biword, LaurentPoly)>)> {
        let pr = self.rule_at(b, i)?;
        Some((pr.rule, pr.terms.iter().map(|t| apply_term(b, i, t, coef)).collect()))
    }

    /// Single rewrite at the 1-based position `position` (factor
    /// `(position, position+1)`), embedded in its context.
    pub fn reduce_at(&self, b: &Biword, position: usize) -> Result<Expression, RewriteError> {
        self.reduce_at_with_rule(b, position).map(|(_, e)| e)
    }

    pub fn reduce_at_with_rule(&self, b: &Biword, position: usize) -> Result<(u8, Expression), RewriteError> {
        let no_match = || RewriteError::NoMatchAtPosition { system: self.name, biword: b.clone(), position };
        if position == 0 || position >= b.len() {
            return Err(no_match());
        }
        let (rule, terms) = self.rewrite_terms(b, position - 1, &LaurentPoly::one()).ok_or_else(no_match)?;
        Ok((rule, Expression::from_terms(terms)))
    }

    /// The leftmost reduction `[E]_S`.
    ///
    /// Terms are processed in decreasing `(inv(top), inv(bottom), biword)`
    /// order, so contributions to the same biword are merged (and may cancel)
    /// before that biword is rewritten at its leftmost matching factor.
    pub fn leftmost_reduce(&self, e: &Expression) -> Result<Expression, RewriteError> {
        type Key = (usize, usize, Biword);
        let mut pending: BTreeMap<Key, LaurentPoly> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<Key, LaurentPoly>, key: Key, c: LaurentPoly| {
            if let Some(slot) = pending.get_mut(&key) {
                *slot += &c;
                if slot.is_zero() {
                    pending.remove(&key);
                }
            } else if !c.is_zero() {
                pending.insert(key, c);
            }
        };
        for (b, c) in e.iter() {
            push(&mut pending, (b.top().inv(), b.bottom().inv(), b.clone()), c.clone());
        }
        let mut out = Expression::zero();
        let mut steps = 0u64;
        while let Some(((inv_top, inv_bottom, b), c)) = pending.pop_last() {
            let Some(i) = self.leftmost_match(&b) else {
                out.add_term(b, c);
                continue;
            };
            steps += 1;
            if steps > self.step_budget {
                return Err(RewriteError::StepBudgetExceeded(self.step_budget));
            }
            let pr = self.rule_at(&b, i).expect("matched");
            let (x, a) = b.column(i);
            let (y, bb) = b.column(i + 1);
            for t in pr.terms {
                let (nb, nc) = apply_term(&b, i, t, &c);
                let dt = if t.swap_top { swap_delta(x, y) } else { 0 };
                let db = if t.swap_bottom { swap_delta(a, bb) } else { 0 };
                let key = (inv_top.wrapping_add_signed(dt), inv_bottom.wrapping_add_signed(db), nb);
                push(&mut pending, key, nc);
            }
        }
        Ok(out)
    }

    pub fn reduce_biword(&self, b: &Biword) -> Result<Expression, RewriteError> {
        self.leftmost_reduce(&Expression::from_biword(b.clone()))
    }

    /// Leftmost reduction of a single biword, one rewrite per step, for
    /// display. Each step rewrites the first reducible term (in canonical
    /// order) at its leftmost factor; the endpoint equals
    /// [`ReductionSystem::leftmost_reduce`].
    pub fn leftmost_trace(&self, e: &Expression) -> Result<Vec<TraceStep>, RewriteError> {
        let mut cur = e.clone();
        let mut steps = Vec::new();
        loop {
            let found = cur.iter().find_map(|(b, c)| self.leftmost_match(b).map(|i| (b.clone(), c.clone(), i)));
            let Some((b, c, i)) = found else { break };
            if steps.len() as u64 >= self.step_budget {
                return Err(RewriteError::StepBudgetExceeded(self.step_budget));
            }
            let (rule, terms) = self.rewrite_terms(&b, i, &c).expect("matched");
            cur.add_term(b.clone(), -c);
            for (nb, nc) in terms {
                cur.add_term(nb, nc);
            }
            steps.push(TraceStep { biword: b, position: i + 1, rule, result: cur.clone() });
        }
        Ok(steps)
    }

    /// Explores every rewrite strategy from `start` breadth-first over
    /// normalized expressions and returns the distinct irreducible endpoints,
    /// each with one witnessing chain.
    pub fn enumerate_normal_forms(&self, start: &Expression, node_budget: usize) -> Result<NormalFormSet, RewriteError> {
        struct Node {
            expr: Expression,
            parent: Option<(usize, TraceStep)>,
        }
        let mut nodes = vec![Node { expr: start.clone(), parent: None }];
        let mut seen: HashMap<Expression, usize> = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([0usize]);
        let mut terminal: Vec<usize> = Vec::new();
        let mut complete = true;
        while let Some(idx) = queue.pop_front() {
            let expr = nodes[idx].expr.clone();
            let mut any = false;
            for (b, c) in expr.iter() {
                for i in self.match_positions(b) {
                    any = true;
                    let (rule, terms) = self.rewrite_terms(b, i, c).expect("matched");
                    let mut next = expr.clone();
                    next.add_term(b.clone(), -c);
                    for (nb, nc) in terms {
                        next.add_term(nb, nc);
                    }
                    if seen.contains_key(&next) {
                        continue;
                    }
                    if nodes.len() >= node_budget {
                        complete = false;
                        continue;
                    }
                    let step = TraceStep { biword: b.clone(), position: i + 1, rule, result: next.clone() };
                    seen.insert(next.clone(), nodes.len());
                    queue.push_back(nodes.len());
                    nodes.push(Node { expr: next, parent: Some((idx, step)) });
                }
            }
            if !any {
                terminal.push(idx);
            }
        }
        let mut forms: Vec<NormalForm> = terminal
            .into_iter()
            .map(|mut idx| {
                let expression = nodes[idx].expr.clone();
                let mut trace = Vec::new();
                while let Some((p, step)) = &nodes[idx].parent {
                    trace.push(step.clone());
                    idx = *p;
                }
                trace.reverse();
                NormalForm { expression, trace }
            })
            .collect();
        forms.sort_by(|a, b| a.expression.cmp(&b.expression));
        let set = NormalFormSet { system: self.name, start: start.clone(), forms, nodes_explored: nodes.len(), complete };
        if complete {
            Ok(set)
        } else {
            Err(RewriteError::BudgetExceeded { budget: node_budget, partial: Box::new(set) })
        }
    }
}

/// Applies one right-hand-side term to the factor at `i` of `b`.
fn apply_term(b: &Biword, i: usize, t: &PairTerm, coef: &LaurentPoly) -> (Biword, LaurentPoly) {
    let mut nb = b.clone();
    let (top, bottom) = nb.rows_mut();
    if t.swap_top {
        top.swap(i, i + 1);
    }
    if t.swap_bottom {
        bottom.swap(i, i + 1);
    }
    let mut c = coef.shift(0, t.q_exp);
    if t.negative {
        c = -c;
    }
    (nb, c)
}

pub fn builtin_system(name: &str) -> Result<ReductionSystem, RewriteError> {
    Ok(ReductionSystem::new(name.parse()?))
}

pub fn is_irreducible(sys: &ReductionSystem, b: &Biword) -> bool {
    sys.is_irreducible(b)
}

pub fn leftmost_reduce(sys: &ReductionSystem, e: &Expression) -> Result<Expression, RewriteError> {
    sys.leftmost_reduce(e)
}

pub fn reduce_at(sys: &ReductionSystem, b: &Biword, position: usize) -> Result<Expression, RewriteError> {
    sys.reduce_at(b, position)
}

pub fn enumerate_normal_forms(sys: &ReductionSystem, b: &Biword, budget: usize) -> Result<NormalFormSet, RewriteError> {
    sys.enumerate_normal_forms(&Expression::from_biword(b.clone()), budget)
}

/// A rule instance whose replacement does not decrease `(inv(top), inv(bottom))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureViolation {
    pub lhs: Biword,
    pub rhs: Biword,
}

/// Checks the termination measure on every rule instance over letters `1..=r`.
/// Returns the number of matched instances.
pub fn certify_measure(sys: &ReductionSystem, r: u16) -> Result<usize, MeasureViolation> {
    let mut matched = 0;
    for [x, y, a, b] in all_words(r, 4).map(|w| [w[0], w[1], w[2], w[3]]) {
        let Some(out) = sys.matcher((x, a), (y, b)) else { continue };
        matched += 1;
        let lhs = Biword::from_columns([(x, a), (y, b)]);
        let key = |w: &Biword| (w.top().inv(), w.bottom().inv());
        for rhs in out.replacement.support() {
            if key(rhs) >= key(&lhs) {
                return Err(MeasureViolation { lhs, rhs: rhs.clone() });
            }
        }
    }
    Ok(matched)
}

/// All words of length `n` over `1..=r` in lexicographic order.
pub fn all_words(r: u16, n: usize) -> impl Iterator<Item = Vec<Letter>> {
    let total = (r as u64).pow(n as u32);
    (0..total).map(move |mut k| {
        let mut w = vec![Letter::raw(1); n];
        for slot in w.iter_mut().rev() {
            *slot = Letter::raw((k % r as u64) as u16 + 1);
            k /= r as u64;
        }
        w
    })
}

/// All biwords of length `n` over `1..=r` in canonical order.
pub fn all_biwords(r: u16, n: usize) -> impl Iterator<Item = Biword> {
    all_words(r, 2 * n).map(move |w| Biword::from_columns(w[..n].iter().copied().zip(w[n..].iter().copied())))
}

pub fn random_biword<R: Rng>(rng: &mut R, r: u16, n: usize) -> Biword {
    Biword::from_columns((0..n).map(|_| (Letter::raw(rng.gen_range(1..=r)), Letter::raw(rng.gen_range(1..=r)))))
}

/// A biword whose two rows reach different normal forms.
#[derive(Clone, Debug, Serialize)]
pub struct UniquenessViolation {
    #[serde(serialize_with = "ser_display")]
    pub biword: Biword,
    /// Two distinct irreducible endpoints: the leftmost reduction, then one
    /// reached by first rewriting at `position`.
    pub position: usize,
    #[serde(serialize_with = "ser_display")]
    pub leftmost: Expression,
    #[serde(serialize_with = "ser_display")]
    pub alternative: Expression,
}

/// A factorization `β = β₁β₂β₃` with `[β]_S ≠ [β₁ [β₂]_S β₃]_S`.
#[derive(Clone, Debug, Serialize)]
pub struct FactorViolation {
    #[serde(serialize_with = "ser_display")]
    pub biword: Biword,
    /// Column range of the middle factor `β₂`.
    pub middle: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthCoverage {
    pub length: usize,
    pub exhaustive: bool,
    pub checked: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub system: SystemName,
    pub r: u16,
    pub max_len: usize,
    pub coverage: Vec<LengthCoverage>,
    pub violation_count: usize,
    /// In canonical biword order, truncated to the first few.
    pub violations: Vec<UniquenessViolation>,
    pub factor_violation_count: usize,
    pub factor_violations: Vec<FactorViolation>,
}

impl UniquenessReport {
    pub fn unique(&self) -> bool {
        self.violation_count == 0 && self.factor_violation_count == 0
    }
}

/// Biword counts above this are sampled instead of enumerated.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000;
const REPORTED_VIOLATIONS: usize = 16;

/// Desk-scale test of reduction-uniqueness.
///
/// For each biword `β` checked, every one-step rewrite `β → E'` must
/// satisfy `[E']_S = [β]_S`. Over a set of biwords closed under rewriting
/// (all biwords of a given length) this is equivalent to every rewrite
/// strategy ending in the leftmost reduction. Condition C5 is checked on all
/// factorizations of the same biwords.
pub fn check_reduction_unique(
    sys: &ReductionSystem,
    r: u16,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> Result<UniquenessReport, RewriteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coverage = Vec::new();
    let mut violations = Vec::new();
    let mut factor_violations = Vec::new();
    for n in 0..=max_len {
        let count = (r as u64).checked_pow(2 * n as u32).unwrap_or(u64::MAX);
        let exhaustive = count <= EXHAUSTIVE_LIMIT;
        let biwords: Vec<Biword> = if exhaustive {
            all_biwords(r, n).collect()
        } else {
            let mut v: Vec<Biword> = (0..samples).map(|_| random_biword(&mut rng, r, n)).collect();
            v.sort();
            v.dedup();
            v
        };
        coverage.push(LengthCoverage { length: n, exhaustive, checked: biwords.len() });
        let results: Vec<(Vec<UniquenessViolation>, Vec<FactorViolation>)> = biwords
            .par_iter()
            .map(|b| check_one(sys, b))
            .collect::<Result<_, _>>()?;
        for (v, f) in results {
            violations.extend(v);
            factor_violations.extend(f);
        }
    }
    let violation_count = violations.len();
    let factor_violation_count = factor_violations.len();
    violations.truncate(REPORTED_VIOLATIONS);
    factor_violations.truncate(REPORTED_VIOLATIONS);
    Ok(UniquenessReport {
        system: sys.name,
        r,
        max_len,
        coverage,
        violation_count,
        violations,
        factor_violation_count,
        factor_violations,
    })
}

fn check_one(sys: &ReductionSystem, b: &Biword) -> Result<(Vec<UniquenessViolation>, Vec<FactorViolation>), RewriteError> {
    let leftmost = sys.reduce_biword(b)?;
    let mut violations = Vec::new();
    for i in sys.match_positions(b) {
        let alt = sys.leftmost_reduce(&sys.reduce_at(b, i + 1)?)?;
        if alt != leftmost {
            violations.push(UniquenessViolation { biword: b.clone(), position: i + 1, leftmost: leftmost.clone(), alternative: alt });
            break;
        }
    }
    let mut factor_violations = Vec::new();
    let n = b.len();
    for start in 0..n {
        for end in start + 2..=n {
            if start == 0 && end == n {
                continue;
            }
            let prefix = Expression::from_biword(b.slice(0, start));
            let suffix = Expression::from_biword(b.slice(end, n));
            let middle = sys.reduce_biword(&b.slice(start, end))?;
            let rhs = sys.leftmost_reduce(&(&(&prefix * &middle) * &suffix))?;
            if rhs != leftmost {
                factor_violations.push(FactorViolation { biword: b.clone(), middle: (start + 1, end) });
            }
        }
    }
    Ok((violations, factor_violations))
}

/// Count of biwords of length `n` over `1..=r` that are irreducible for `sys`.
pub fn irreducible_count(sys: &ReductionSystem, r: u16, n: usize) -> u64 {
    all_biwords(r, n).filter(|b| sys.is_irreducible(b)).count() as u64
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(t: &str, u: &str) -> Biword {
        Biword::from_digits(t, u).unwrap()
    }

    fn l(v: u16) -> Letter {
        Letter::new(v).unwrap()
    }

    fn sys(n: SystemName) -> ReductionSystem {
        ReductionSystem::new(n)
    }

    #[test]
    fn names_parse() {
        for n in SystemName::ALL {
            assert_eq!(n.cli_name().parse::<SystemName>().unwrap(), n);
        }
        assert!(matches!(builtin_system("xx"), Err(RewriteError::UnknownSystem(_))));
    }

    #[test]
    fn sr_q_matcher_on_2121() {
        let out = sys(SystemName::SrQ).matcher((l(2), l(2)), (l(1), l(1))).unwrap();
        assert_eq!(out.rule, 2);
        assert_eq!(out.replacement, "(12|12) + q*(12|21) - q^-1*(21|12)".parse().unwrap());
    }

    #[test]
    fn sh_matcher_swaps_tops_when_v_positive() {
        assert_eq!(v_sign(l(3), l(2), l(2), l(1)), Ordering::Greater);
        let out = sys(SystemName::Sh).matcher((l(3), l(2)), (l(2), l(1))).unwrap();
        assert_eq!(out.replacement, Expression::from_biword(b("23", "21")));
    }

    #[test]
    fn sm_guard() {
        assert!(sys(SystemName::Sm).matcher((l(1), l(2)), (l(2), l(1))).is_none());
    }

    #[test]
    fn sh_rule_for_2112_is_column_swap() {
        // (2·1-2·2-1)(2·1-2·1-1)(2·2-2·2-1)(2·2-2·1-1) = (-3)(-1)(-1)(1) = -3
        assert_eq!(v_sign(l(2), l(1), l(1), l(2)), Ordering::Less);
        let out = sys(SystemName::Sh).matcher((l(2), l(1)), (l(1), l(2))).unwrap();
        assert_eq!(out.replacement, Expression::from_biword(b("12", "21")));
    }

    #[test]
    fn irreducibility() {
        assert!(sys(SystemName::Sr).is_irreducible(&b("12", "21")));
        assert!(sys(SystemName::SrQ).is_irreducible(&b("21", "12")));
        let sh = sys(SystemName::Sh);
        for bw in all_biwords(3, 3) {
            assert_eq!(sh.is_irreducible(&bw), bw.top().is_sorted(), "{bw}");
        }
    }

    #[test]
    fn leftmost_reduce_examples() {
        let srq = sys(SystemName::SrQ);
        assert_eq!(
            srq.reduce_biword(&b("21", "21")).unwrap(),
            "(12|12) + q*(12|21) - q^-1*(21|12)".parse().unwrap()
        );
        for n in SystemName::ALL {
            assert_eq!(sys(n).reduce_biword(&b("12", "12")).unwrap(), Expression::from_biword(b("12", "12")));
        }
        let sh = sys(SystemName::Sh);
        assert_eq!(sh.reduce_biword(&b("321", "213")).unwrap(), Expression::from_biword(b("123", "321")));
        let trace = sh.leftmost_trace(&Expression::from_biword(b("321", "213"))).unwrap();
        let positions: Vec<usize> = trace.iter().map(|s| s.position).collect();
        assert_eq!(positions, vec![1, 2, 1]);
        assert_eq!(trace[0].result.to_string(), "(231|213)");
        assert_eq!(trace[1].result.to_string(), "(213|231)");
    }

    #[test]
    fn reduce_at_examples() {
        let sh = sys(SystemName::Sh);
        assert_eq!(sh.reduce_at(&b("321", "213"), 2).unwrap(), Expression::from_biword(b("312", "213")));
        assert_eq!(sh.reduce_at(&b("312", "213"), 1).unwrap(), Expression::from_biword(b("132", "123")));
        assert_eq!(sh.reduce_at(&b("132", "123"), 2).unwrap(), Expression::from_biword(b("123", "132")));
        assert!(matches!(sh.reduce_at(&b("123", "123"), 1), Err(RewriteError::NoMatchAtPosition { .. })));
        assert!(sh.reduce_at(&b("321", "123"), 3).is_err());
    }

    #[test]
    fn step_budget_is_enforced() {
        let tight = sys(SystemName::Sr).with_step_budget(2);
        assert_eq!(tight.reduce_biword(&b("321", "321")), Err(RewriteError::StepBudgetExceeded(2)));
    }

    #[test]
    fn sh_counterexample_has_two_normal_forms() {
        let set = enumerate_normal_forms(&sys(SystemName::Sh), &b("321", "213"), 1000).unwrap();
        let forms: Vec<String> = set.forms.iter().map(|f| f.expression.to_string()).collect();
        assert_eq!(forms, vec!["(123|132)", "(123|321)"]);
        let pos = |k: usize| set.forms[k].trace.iter().map(|s| s.position).collect::<Vec<_>>();
        assert_eq!(pos(0), vec![2, 1, 2]);
        assert_eq!(pos(1), vec![1, 2, 1]);
    }

    #[test]
    fn sr_normal_form_of_counterexample_is_unique() {
        let set = enumerate_normal_forms(&sys(SystemName::Sr), &b("321", "213"), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(set.forms.len(), 1);
        assert_eq!(set.forms[0].expression, sys(SystemName::Sr).reduce_biword(&b("321", "213")).unwrap());
    }

    #[test]
    fn irreducible_start_is_its_own_normal_form() {
        let set = enumerate_normal_forms(&sys(SystemName::SfQ), &b("123", "312"), 10).unwrap();
        assert_eq!(set.forms.len(), 1);
        assert!(set.forms[0].trace.is_empty());
    }

    #[test]
    fn node_budget_reports_partial() {
        let err = enumerate_normal_forms(&sys(SystemName::Sr), &b("3321", "3211"), 5).unwrap_err();
        match err {
            RewriteError::BudgetExceeded { partial, .. } => assert!(!partial.complete),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn measure_descends_for_every_system() {
        for n in SystemName::ALL {
            for r in 1..=6 {
                certify_measure(&sys(n), r).unwrap_or_else(|v| panic!("{n}: {v:?}"));
            }
        }
    }

    #[test]
    fn leftmost_match_has_irreducible_prefix() {
        for n in SystemName::ALL {
            let s = sys(n);
            for bw in all_biwords(2, 3) {
                if let Some(i) = s.leftmost_match(&bw) {
                    assert!(s.is_irreducible(&bw.slice(0, i + 1)));
                }
            }
        }
    }

    #[test]
    fn uniqueness_examples() {
        let sh = check_reduction_unique(&sys(SystemName::Sh), 3, 3, 0, 1).unwrap();
        assert!(!sh.unique());
        assert!(sh.violations.iter().any(|v| v.biword == b("321", "213")) || sh.violation_count > sh.violations.len());
        let sm = check_reduction_unique(&sys(SystemName::Sm), 2, 3, 0, 1).unwrap();
        assert!(sm.unique());
    }

    #[test]
    fn irreducible_census() {
        // sorted tops with free bottoms
        let sf = sys(SystemName::Sf);
        for n in 0..=3usize {
            let expected = binomial(n as u64 + 2, n as u64) * BigInt::from(3u64.pow(n as u32));
            assert_eq!(BigInt::from(irreducible_count(&sf, 3, n)), expected);
        }
        // multisets of columns
        let sq = sys(SystemName::SqQ);
        for n in 0..=3usize {
            assert_eq!(BigInt::from(irreducible_count(&sq, 2, n)), binomial(n as u64 + 3, n as u64));
        }
    }
}
