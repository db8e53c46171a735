use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::poly::{coef_from_json, coef_to_json, LaurentPoly, Monomial};
use super::word::{Biword, Letter, Word};
use super::AlgebraError;

/// A finite `Z[t, 1/t, q, 1/q]`-linear combination of biwords.
///
/// The zero expression has empty support and the unit is the empty biword
/// with coefficient one. Terms iterate in canonical order (length, top word,
/// bottom word).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Expression {
    terms: BTreeMap<Biword, LaurentPoly>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_biword(Biword::empty())
    }

    pub fn from_biword(b: Biword) -> Self {
        Self::term(LaurentPoly::one(), b)
    }

    pub fn term(coef: LaurentPoly, b: Biword) -> Self {
        let mut e = Self::zero();
        e.add_term(b, coef);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Biword, LaurentPoly)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Biword::empty()).is_some_and(LaurentPoly::is_one)
    }

    /// Number of biwords in the support.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Biword, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Biword> {
        self.terms.keys()
    }

    pub fn coefficient(&self, b: &Biword) -> LaurentPoly {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, b: Biword, coef: LaurentPoly) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_term_ref(&mut self, b: &Biword, coef: &LaurentPoly) {
        if coef.is_zero() {
            return;
        }
        if let Some(c) = self.terms.get_mut(b) {
            *c += coef;
            if c.is_zero() {
                self.terms.remove(b);
            }
        } else {
            self.terms.insert(b.clone(), coef.clone());
        }
    }

    pub fn add_expr(&mut self, other: &Expression) {
        for (b, c) in &other.terms {
            self.add_term_ref(b, c);
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Expression {
        Expression::from_terms(self.terms.iter().map(|(b, x)| (b.clone(), x * c)))
    }

    /// Applies `f` to each coefficient, dropping terms that become zero.
    pub fn map_terms<F>(&self, mut f: F) -> Expression
    where
        F: FnMut(&Biword, &LaurentPoly) -> LaurentPoly,
    {
        Expression::from_terms(self.terms.iter().map(|(b, c)| (b.clone(), f(b, c))))
    }

    /// Homogeneous component of length `n`.
    pub fn degree_part(&self, n: usize) -> Expression {
        Expression {
            terms: self.terms.iter().filter(|(b, _)| b.len() == n).map(|(b, c)| (b.clone(), c.clone())).collect(),
        }
    }

    pub fn is_homogeneous_of(&self, n: usize) -> bool {
        self.terms.keys().all(|b| b.len() == n)
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.terms.keys().filter_map(Biword::max_letter).max()
    }

    pub fn check(&self, r: u16) -> Result<(), AlgebraError> {
        self.terms.keys().try_for_each(|b| b.check(r))
    }

    /// Renders with an explicit leading sign, e.g. `+(12|12) - q*(21|12)`.
    pub fn render_signed(&self) -> String {
        let s = self.to_string();
        if s.starts_with('-') || s == "0" {
            s
        } else {
            format!("+{s}")
        }
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        let mut out = Vec::new();
        for (b, c) in &self.terms {
            for (m, v) in c.iter().rev() {
                out.push(TermRecord {
                    t_exp: m.t,
                    q_exp: m.q,
                    coef: coef_to_json(v),
                    top: b.top().values(),
                    bottom: b.bottom().values(),
                });
            }
        }
        out
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Expression, AlgebraError> {
        let mut e = Expression::zero();
        for r in records {
            let coef = coef_from_json(&r.coef)
                .ok_or_else(|| AlgebraError::Parse { pos: 0, msg: format!("bad coefficient {}", r.coef) })?;
            let b = Biword::new(Word::from_values(&r.top)?, Word::from_values(&r.bottom)?)?;
            e.add_term(b, LaurentPoly::monomial(coef, r.t_exp, r.q_exp));
        }
        Ok(e)
    }
}

/// Serialized as `{"text": ..., "terms": [records]}`.
impl Serialize for Expression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Expression", 2)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("terms", &self.to_records())?;
        st.end()
    }
}

/// One `(biword, monomial)` pair of the structured report format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TermRecord {
    pub t_exp: i32,
    pub q_exp: i32,
    pub coef: serde_json::Value,
    pub top: Vec<u16>,
    pub bottom: Vec<u16>,
}

/// Writes `coef*key` in the text grammar. `first` controls whether a
/// positive term gets a `+` separator.
pub(crate) fn fmt_term(f: &mut fmt::Formatter<'_>, coef: &LaurentPoly, key: &str, first: bool) -> fmt::Result {
    let (neg, body) = match coef.as_monomial() {
        // A monomial multiple of the empty biword prints as the bare coefficient.
        Some((c, _)) if key == "(|)" => {
            let neg = c.is_negative();
            let abs = if neg { -coef } else { coef.clone() };
            return fmt_sign(f, first, neg).and_then(|_| write!(f, "{abs}"));
        }
        Some((c, m)) => {
            let neg = c.is_negative();
            let abs = if neg { -coef } else { coef.clone() };
            let body = if c.abs().is_one() && m == Monomial::ONE { String::new() } else { format!("{abs}*") };
            (neg, body)
        }
        None => (false, format!("({coef})*")),
    };
    fmt_sign(f, first, neg)?;
    write!(f, "{body}{key}")
}

fn fmt_sign(f: &mut fmt::Formatter<'_>, first: bool, neg: bool) -> fmt::Result {
    match (first, neg) {
        (true, true) => f.write_str("-"),
        (true, false) => Ok(()),
        (false, true) => f.write_str(" - "),
        (false, false) => f.write_str(" + "),
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let commas = self.max_letter().is_some_and(|l| l.value() > 9);
        for (i, (b, c)) in self.terms.iter().enumerate() {
            fmt_term(f, c, &b.render(commas), i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({self})")
    }
}

impl Add for &Expression {
    type Output = Expression;

    fn add(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        out.add_expr(rhs);
        out
    }
}

impl Add for Expression {
    type Output = Expression;

    fn add(mut self, rhs: Expression) -> Expression {
        self.add_expr(&rhs);
        self
    }
}

impl Neg for &Expression {
    type Output = Expression;

    fn neg(self) -> Expression {
        Expression { terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect() }
    }
}

impl Neg for Expression {
    type Output = Expression;

    fn neg(self) -> Expression {
        -&self
    }
}

impl Sub for &Expression {
    type Output = Expression;

    fn sub(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), -c);
        }
        out
    }
}

impl Sub for Expression {
    type Output = Expression;

    fn sub(self, rhs: Expression) -> Expression {
        &self - &rhs
    }
}

impl Mul for &Expression {
    type Output = Expression;

    /// Bilinear extension of biword concatenation.
    fn mul(self, rhs: &Expression) -> Expression {
        let mut out = Expression::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl Mul for Expression {
    type Output = Expression;

    fn mul(self, rhs: Expression) -> Expression {
        &self * &rhs
    }
}

impl From<Biword> for Expression {
    fn from(b: Biword) -> Self {
        Expression::from_biword(b)
    }
}

pub fn expr_add(a: &Expression, b: &Expression) -> Expression {
    a + b
}

pub fn expr_mul(a: &Expression, b: &Expression) -> Expression {
    a * b
}

pub fn expr_eq(a: &Expression, b: &Expression) -> bool {
    a == b
}

pub fn poly_add(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a + b
}

pub fn poly_mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a * b
}

pub fn poly_scale(a: &LaurentPoly, c: impl Into<BigInt>) -> LaurentPoly {
    a.scale(&c.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(t: &str, u: &str) -> Biword {
        Biword::from_digits(t, u).unwrap()
    }

    fn e(t: &str, u: &str) -> Expression {
        Expression::from_biword(b(t, u))
    }

    #[test]
    fn cancellation_gives_empty_support() {
        let x = e("12", "12");
        let sum = expr_add(&x, &x.scale(&LaurentPoly::constant(-1)));
        assert!(sum.is_zero());
        assert_eq!(sum.len(), 0);
    }

    #[test]
    fn addition_of_distinct_and_equal_terms() {
        assert_eq!(expr_add(&e("1", "1"), &e("2", "2")).len(), 2);
        let qx = Expression::term(LaurentPoly::q(), b("12", "21"));
        assert_eq!(expr_add(&qx, &qx), Expression::term(LaurentPoly::monomial(2, 0, 1), b("12", "21")));
    }

    #[test]
    fn square_of_degree_one_sum() {
        let s = &e("1", "1") + &e("2", "2");
        let expected = Expression::from_terms(
            [b("11", "11"), b("12", "12"), b("21", "21"), b("22", "22")].into_iter().map(|x| (x, LaurentPoly::one())),
        );
        assert_eq!(expr_mul(&s, &s), expected);
    }

    #[test]
    fn zero_annihilates_and_one_is_unit() {
        let x = &e("12", "21") + &Expression::term(LaurentPoly::q(), b("1", "2"));
        assert!(expr_mul(&x, &Expression::zero()).is_zero());
        assert_eq!(expr_mul(&x, &Expression::one()), x);
        assert_eq!(expr_mul(&Expression::one(), &x), x);
    }

    #[test]
    fn equality_is_on_normal_forms() {
        let qq = LaurentPoly::q() * LaurentPoly::q_pow(-1);
        assert!(expr_eq(&Expression::term(qq, b("12", "12")), &e("12", "12")));
        assert!(!expr_eq(&e("12", "12"), &e("12", "21")));
    }

    #[test]
    fn rendering() {
        let x = Expression::from_terms([
            (b("12", "12"), LaurentPoly::one()),
            (b("12", "21"), LaurentPoly::q()),
            (b("21", "12"), -LaurentPoly::q_pow(-1)),
        ]);
        assert_eq!(x.to_string(), "(12|12) + q*(12|21) - q^-1*(21|12)");
        assert_eq!(x.render_signed(), "+(12|12) + q*(12|21) - q^-1*(21|12)");
        let y = Expression::term(LaurentPoly::q() - LaurentPoly::q_pow(-1), b("12", "21"));
        assert_eq!(y.to_string(), "(q - q^-1)*(12|21)");
        assert_eq!(Expression::one().to_string(), "1");
        assert_eq!(Expression::zero().to_string(), "0");
    }

    #[test]
    fn records_round_trip() {
        let x = Expression::from_terms([
            (b("12", "21"), LaurentPoly::q() - LaurentPoly::monomial(3, 1, -1)),
            (b("", ""), LaurentPoly::one()),
        ]);
        let recs = x.to_records();
        assert_eq!(recs.len(), 3);
        assert_eq!(Expression::from_records(&recs).unwrap(), x);
    }

    #[test]
    fn poly_helpers() {
        let q = LaurentPoly::q();
        assert!(poly_add(&q, &-&q).is_zero());
        assert!(poly_mul(&q, &LaurentPoly::q_pow(-1)).is_one());
        assert_eq!(poly_scale(&q, 3), LaurentPoly::monomial(3, 0, 1));
    }
}
