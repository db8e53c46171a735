//! Truncated Boson and Fermion series, their product slices `(FB)_n`, and the
//! drivers that check the Master-Theorem identities degree by degree.
//!
//! The Fermion carries the factor `(-1)^{|J|} (-1/q)^{inv σ}` (times
//! `t^{exc}` in the `(t,q)` variant), which is the image of the classical
//! Fermion under `phi` (resp. `phi_sf`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Biword, Expression, LaurentPoly, Letter, Word};
use crate::rewrite::{all_words, ser_display, ReductionSystem, RewriteError, SystemName, DEFAULT_NODE_BUDGET};
use crate::stats::{exc, phi, phi_sf, psi, stat_pair, StatsError, WordExpression};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("no Master Theorem is checked for {system} with the {variant} weights")]
    IncompatiblePairing { system: SystemName, variant: Variant },
    #[error("{system} is not compared against {target} as a subalgebra")]
    IncompatibleSubalgebra { system: SystemName, target: SystemName },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Which weights the series carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// `t = q = 1`.
    #[serde(rename = "1")]
    One,
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "tq")]
    TQ,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::One => "1",
            Variant::Q => "q",
            Variant::TQ => "tq",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "one" => Ok(Variant::One),
            "q" => Ok(Variant::Q),
            "tq" | "t,q" => Ok(Variant::TQ),
            _ => Err(format!("unknown variant {s:?} (expected 1, q or tq)")),
        }
    }
}

/// The variant each strong theorem is stated for, or `None` for SH.
pub fn default_variant(sys: SystemName) -> Option<Variant> {
    match sys {
        SystemName::Sm | SystemName::Sf | SystemName::Sr => Some(Variant::One),
        SystemName::SqQ | SystemName::SrQ => Some(Variant::Q),
        SystemName::SfQ => Some(Variant::TQ),
        SystemName::Sh => None,
    }
}

fn letters(r: u16) -> Vec<Letter> {
    (1..=r).map(|v| Letter::new(v).expect("nonzero")).collect()
}

/// Degree-`n` slice of the Boson: `Σ_w weight(w) (sorted(w) | w)` over all
/// `r^n` words `w`.
pub fn bos_slice(r: u16, n: usize, variant: Variant) -> Expression {
    let mut out = Expression::zero();
    for w in all_words(r, n) {
        let bottom = Word::new(w);
        let inv = bottom.inv() as i32;
        let b = Biword::new(bottom.sorted(), bottom).expect("equal lengths");
        let coef = match variant {
            Variant::One => LaurentPoly::one(),
            Variant::Q => LaurentPoly::q_pow(inv),
            Variant::TQ => LaurentPoly::monomial(1, exc(&b) as i32, inv),
        };
        out.add_term(b, coef);
    }
    out
}

/// The full Fermion: `Σ_J (-1)^{|J|} Σ_σ weight(σ) (σ(i_1)..σ(i_l) | i_1..i_l)`.
pub fn ferm(r: u16, variant: Variant) -> Expression {
    let alphabet = letters(r);
    let mut out = Expression::zero();
    for size in 0..=alphabet.len() {
        for subset in alphabet.iter().copied().combinations(size) {
            for perm in subset.iter().copied().permutations(size) {
                let inv = crate::algebra::inversions(&perm) as i32;
                let b = Biword::new(Word::new(perm), Word::new(subset.clone())).expect("equal lengths");
                let sign = if (size as i32 + inv) % 2 == 0 { 1 } else { -1 };
                let coef = match variant {
                    Variant::One => LaurentPoly::constant(sign),
                    Variant::Q => LaurentPoly::monomial(sign, 0, -inv),
                    Variant::TQ => LaurentPoly::monomial(sign, exc(&b) as i32, -inv),
                };
                out.add_term(b, coef);
            }
        }
    }
    out
}

/// `Σ_{l=0}^{r} C(r,l) l!`, the number of Fermion terms.
pub fn ferm_term_count(r: u16) -> u64 {
    let r = r as u64;
    let mut total = 0;
    let mut falling = 1;
    for l in 0..=r {
        total += falling;
        falling *= r - l;
    }
    total
}

/// The length-`n` part of `Ferm × Bos`.
pub fn product_slice(r: u16, n: usize, variant: Variant) -> Expression {
    product_slice_with(&ferm(r, variant), r, n, variant)
}

fn product_slice_with(fermion: &Expression, r: u16, n: usize, variant: Variant) -> Expression {
    let mut out = Expression::zero();
    for l in 0..=n.min(r as usize) {
        let f = fermion.degree_part(l);
        if f.is_zero() {
            continue;
        }
        out.add_expr(&(&f * &bos_slice(r, n - l, variant)));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationMode {
    /// `[Ferm × Bos]_S = 1`.
    Strong,
    /// `psi([Ferm × Bos]_SH) = 1`.
    SemiStrong,
    /// `Ferm × Bos ≡ 1` modulo the ideal.
    Weak,
}

impl fmt::Display for VerificationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerificationMode::Strong => "strong",
            VerificationMode::SemiStrong => "semi-strong",
            VerificationMode::Weak => "weak",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeResidual {
    pub degree: usize,
    /// The reduced slice (strong, semi-strong) or the slice itself (weak).
    pub residual: Expression,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_image: Option<WordExpression>,
    /// Ideal membership of the slice minus its expected value (weak mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_ideal: Option<bool>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub system: SystemName,
    pub variant: Variant,
    pub mode: VerificationMode,
    pub r: u16,
    pub max_degree: usize,
    pub degrees: Vec<DegreeResidual>,
    /// Whether some reduced slice of positive degree is nonzero.
    pub strong_residual_nonzero: bool,
    pub pass: bool,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn residual(&self, degree: usize) -> Option<&Expression> {
        self.degrees.iter().find(|d| d.degree == degree).map(|d| &d.residual)
    }

    pub(crate) fn assemble(
        system: SystemName,
        variant: Variant,
        mode: VerificationMode,
        r: u16,
        max_degree: usize,
        mut degrees: Vec<DegreeResidual>,
        started: Instant,
    ) -> Self {
        degrees.sort_by_key(|d| d.degree);
        let strong_residual_nonzero = degrees.iter().any(|d| d.degree > 0 && !d.residual.is_zero());
        let pass = degrees.iter().all(|d| d.ok);
        VerificationReport {
            system,
            variant,
            mode,
            r,
            max_degree,
            degrees,
            strong_residual_nonzero,
            pass,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

fn check_pairing(sys: SystemName, variant: Variant) -> Result<(), SeriesError> {
    if default_variant(sys) == Some(variant) {
        Ok(())
    } else {
        Err(SeriesError::IncompatiblePairing { system: sys, variant })
    }
}

/// Strong form: reduces every product slice of degree `0..=max_degree`; passes
/// iff degree 0 gives 1 and every other degree gives 0.
pub fn verify_master(
    sys: &ReductionSystem,
    r: u16,
    max_degree: usize,
    variant: Variant,
) -> Result<VerificationReport, SeriesError> {
    check_pairing(sys.name(), variant)?;
    let started = Instant::now();
    let fermion = ferm(r, variant);
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|n| {
            let residual = sys.leftmost_reduce(&product_slice_with(&fermion, r, n, variant))?;
            let ok = if n == 0 { residual.is_one() } else { residual.is_zero() };
            Ok(DegreeResidual { degree: n, residual, psi_image: None, in_ideal: None, ok })
        })
        .collect::<Result<Vec<_>, SeriesError>>()?;
    Ok(VerificationReport::assemble(sys.name(), variant, VerificationMode::Strong, r, max_degree, degrees, started))
}

/// Semi-strong form for SH: leftmost reduction followed by `psi`. Passes iff
/// the `psi`-image is 1 in degree 0 and 0 in every other degree.
pub fn verify_semi_strong(r: u16, max_degree: usize) -> Result<VerificationReport, SeriesError> {
    let started = Instant::now();
    let sys = ReductionSystem::new(SystemName::Sh);
    let fermion = ferm(r, Variant::One);
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|n| {
            let residual = sys.leftmost_reduce(&product_slice_with(&fermion, r, n, Variant::One))?;
            let image = psi(&residual)?;
            let ok = if n == 0 { image.is_one() } else { image.is_zero() };
            Ok(DegreeResidual { degree: n, residual, psi_image: Some(image), in_ideal: None, ok })
        })
        .collect::<Result<Vec<_>, SeriesError>>()?;
    Ok(VerificationReport::assemble(
        SystemName::Sh,
        Variant::One,
        VerificationMode::SemiStrong,
        r,
        max_degree,
        degrees,
        started,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct SubalgebraFailure {
    #[serde(serialize_with = "ser_display")]
    pub relation: Expression,
    #[serde(serialize_with = "ser_display")]
    pub reduced: Expression,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubalgebraReport {
    pub system: SystemName,
    pub target: SystemName,
    pub r: u16,
    /// Number of target rule instances checked.
    pub relations: usize,
    pub failures: Vec<SubalgebraFailure>,
    pub pass: bool,
}

/// Checks that every relation `α - E_α` of `target` over `1..=r` reduces to
/// zero under `sys`, so that the quotient by `sys` satisfies the relations of
/// `target`.
pub fn check_subalgebra(sys: &ReductionSystem, target: SystemName, r: u16) -> Result<SubalgebraReport, SeriesError> {
    use SystemName::*;
    let allowed = matches!((sys.name(), target), (Sm | Sf | Sh, Sr) | (SfQ | SqQ, SrQ));
    if !allowed {
        return Err(SeriesError::IncompatibleSubalgebra { system: sys.name(), target });
    }
    let target_sys = ReductionSystem::new(target);
    let mut relations = 0;
    let mut failures = Vec::new();
    for w in all_words(r, 4) {
        let (x, y, a, b) = (w[0], w[1], w[2], w[3]);
        let Some(outcome) = target_sys.matcher((x, a), (y, b)) else { continue };
        relations += 1;
        let relation = &Expression::from_biword(Biword::from_columns([(x, a), (y, b)])) - &outcome.replacement;
        let reduced = sys.leftmost_reduce(&relation)?;
        if reduced.is_zero() {
            continue;
        }
        let reaches_zero = match sys.enumerate_normal_forms(&relation, DEFAULT_NODE_BUDGET) {
            Ok(set) => set.forms.iter().any(|f| f.expression.is_zero()),
            Err(RewriteError::BudgetExceeded { partial, .. }) => partial.forms.iter().any(|f| f.expression.is_zero()),
            Err(e) => return Err(e.into()),
        };
        if !reaches_zero {
            failures.push(SubalgebraFailure { relation, reduced });
        }
    }
    Ok(SubalgebraReport { system: sys.name(), target, r, relations, pass: failures.is_empty(), failures })
}

/// Value of an expression when biletter `(x|a)` is the commuting scalar
/// `values[x-1][a-1]` and `t = q = 1`.
pub fn commutative_value(e: &Expression, values: &[Vec<BigRational>]) -> BigRational {
    let mut total = BigRational::zero();
    for (b, c) in e.iter() {
        let mut prod = BigRational::from_integer(c.eval_at_one());
        for (x, a) in b.columns() {
            prod *= &values[x.value() as usize - 1][a.value() as usize - 1];
        }
        total += prod;
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericTrial {
    #[serde(serialize_with = "ser_display")]
    pub max_abs_value: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub fermion: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub error: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub bound: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub r: u16,
    pub max_degree: usize,
    pub seed: u64,
    pub trials: Vec<NumericTrial>,
    pub pass: bool,
}

/// Evaluates `Ferm · Σ_{n ≤ max_degree} Bos_n` at the given commuting values
/// and compares `|product - 1|` with the geometric tail `Σ_{n > max_degree} ρ^n`,
/// `ρ = r · max|c|`.
pub fn numeric_check(r: u16, max_degree: usize, values: &[Vec<BigRational>]) -> NumericTrial {
    let fermion = commutative_value(&ferm(r, Variant::One), values);
    let mut bos = BigRational::zero();
    for n in 0..=max_degree {
        bos += commutative_value(&bos_slice(r, n, Variant::One), values);
    }
    let error = (&fermion * &bos - BigRational::one()).abs();
    let max_abs_value = values.iter().flatten().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero);
    let rho = &max_abs_value * BigRational::from_integer(BigInt::from(r));
    let bound = if rho.is_zero() {
        BigRational::zero()
    } else {
        num_traits::pow(rho.clone(), max_degree + 1) / (BigRational::one() - &rho)
    };
    let pass = error <= bound;
    NumericTrial { max_abs_value, fermion, error, bound, pass }
}

/// Random rational values with `|c| ≤ 1/(4r)`.
pub fn random_values<R: Rng>(rng: &mut R, r: u16) -> Vec<Vec<BigRational>> {
    const SCALE: i64 = 12;
    let denom = BigInt::from(4 * i64::from(r) * SCALE);
    (0..r)
        .map(|_| {
            (0..r)
                .map(|_| BigRational::new(BigInt::from(rng.gen_range(-SCALE..=SCALE)), denom.clone()))
                .collect()
        })
        .collect()
}

pub fn numeric_oracle(r: u16, max_degree: usize, trials: usize, seed: u64) -> NumericReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials: Vec<NumericTrial> =
        (0..trials).map(|_| numeric_check(r, max_degree, &random_values(&mut rng, r))).collect();
    let pass = trials.iter().all(|t| t.pass);
    NumericReport { r, max_degree, seed, trials, pass }
}

/// A random circuit of length `n`: a random bottom word over `1..=r` under a
/// random rearrangement of itself.
pub fn random_circuit<R: Rng>(rng: &mut R, r: u16, n: usize) -> Biword {
    let bottom: Vec<Letter> = (0..n).map(|_| Letter::new(rng.gen_range(1..=r)).expect("nonzero")).collect();
    let mut top = bottom.clone();
    top.shuffle(rng);
    Biword::new(Word::new(top), Word::new(bottom)).expect("equal lengths")
}

/// A few random circuits of length at most `max_len` with small integer
/// coefficients.
pub fn random_circular<R: Rng>(rng: &mut R, r: u16, max_len: usize) -> Expression {
    let mut e = Expression::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let n = rng.gen_range(0..=max_len);
        let c: i64 = rng.gen_range(-3..=3);
        e.add_term(random_circuit(rng, r, n), LaurentPoly::constant(c));
    }
    e
}

/// Outcome of a randomized identity check.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipleReport {
    pub identity: String,
    pub r: u16,
    pub max_len: usize,
    pub samples: usize,
    pub seed: u64,
    pub failures: usize,
    /// The first sample on which the two sides differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub pass: bool,
}

fn run_principle<F>(identity: &str, r: u16, max_len: usize, samples: usize, seed: u64, mut check: F) -> Result<PrincipleReport, SeriesError>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<Option<String>, SeriesError>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut witness = None;
    for _ in 0..samples {
        if let Some(w) = check(&mut rng)? {
            failures += 1;
            witness.get_or_insert(w);
        }
    }
    Ok(PrincipleReport { identity: identity.to_string(), r, max_len, samples, seed, failures, witness, pass: failures == 0 })
}

/// `phi([E]_SR) = [phi(E)]_SR_q` on random circular `E`.
pub fn check_phi_principle(r: u16, max_len: usize, samples: usize, seed: u64) -> Result<PrincipleReport, SeriesError> {
    transport(r, max_len, samples, seed, SystemName::Sr, SystemName::SrQ, phi, "phi([E]_SR) = [phi(E)]_SR_q")
}

/// `phi_sf([E]_SF) = [phi_sf(E)]_SF_q` on random circular `E`.
pub fn check_phi_sf_principle(r: u16, max_len: usize, samples: usize, seed: u64) -> Result<PrincipleReport, SeriesError> {
    transport(r, max_len, samples, seed, SystemName::Sf, SystemName::SfQ, phi_sf, "phi_sf([E]_SF) = [phi_sf(E)]_SF_q")
}

#[allow(clippy::too_many_arguments)]
fn transport(
    r: u16,
    max_len: usize,
    samples: usize,
    seed: u64,
    classical: SystemName,
    quantum: SystemName,
    weight: fn(&Expression) -> Expression,
    identity: &str,
) -> Result<PrincipleReport, SeriesError> {
    let (s1, sq) = (ReductionSystem::new(classical), ReductionSystem::new(quantum));
    run_principle(identity, r, max_len, samples, seed, |rng| {
        let e = random_circular(rng, r, max_len);
        let lhs = weight(&s1.leftmost_reduce(&e)?);
        let rhs = sq.leftmost_reduce(&weight(&e))?;
        Ok((lhs != rhs).then(|| format!("E = {e}: {lhs} vs {rhs}")))
    })
}

/// `phi(EF) = phi(E) phi(F)` and the same for `phi_sf`, on random circular pairs.
pub fn check_phi_multiplicative(r: u16, max_len: usize, samples: usize, seed: u64) -> Result<PrincipleReport, SeriesError> {
    run_principle("phi(EF) = phi(E) phi(F)", r, max_len, samples, seed, |rng| {
        let e = random_circular(rng, r, max_len);
        let f = random_circular(rng, r, max_len);
        let ef = &e * &f;
        let ok = phi(&ef) == &phi(&e) * &phi(&f) && phi_sf(&ef) == &phi_sf(&e) * &phi_sf(&f);
        Ok((!ok).then(|| format!("E = {e}, F = {f}")))
    })
}

/// All SH normal forms of a random circuit share one `(exc, den)` pair.
pub fn check_denert_invariance(r: u16, max_len: usize, samples: usize, seed: u64) -> Result<PrincipleReport, SeriesError> {
    let sh = ReductionSystem::new(SystemName::Sh);
    run_principle("(exc, den) constant on SH normal forms", r, max_len, samples, seed, |rng| {
        let n = rng.gen_range(1..=max_len);
        let b = random_circuit(rng, r, n);
        let set = sh.enumerate_normal_forms(&Expression::from_biword(b.clone()), DEFAULT_NODE_BUDGET)?;
        let mut pairs = BTreeSet::new();
        for form in &set.forms {
            for (x, _) in form.expression.iter() {
                pairs.insert(stat_pair(x)?);
            }
        }
        Ok((pairs.len() != 1).then(|| format!("{b}: {} normal forms, pairs {pairs:?}", set.forms.len())))
    })
}
