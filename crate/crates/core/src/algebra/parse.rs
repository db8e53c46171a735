//! Recursive-descent parser for the expression text grammar:
//!
//! ```text
//! expression := "0" | term { ('+' | '-') term }
//! term       := [sign] [coef '*'] key
//! coef       := monomial | '(' polynomial ')'
//! monomial   := factor { '*' factor },  factor := integer | 't' ['^' int] | 'q' ['^' int]
//! key        := '(' word '|' word ')'     (biword)   |   '(' word ')'   (word)
//! ```
//!
//! Words are contiguous digits, or comma separated integers. A term with a
//! coefficient and no key is read as a multiple of the unit.

use std::str::FromStr;

use num_bigint::BigInt;

use super::poly::LaurentPoly;
#[cfg(test)]
use super::poly::Monomial;
use super::word::{Biword, Letter, Word};
use super::AlgebraError;

pub(crate) struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), AlgebraError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn unsigned(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<i32, AlgebraError> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        let neg = self.eat(b'-');
        let v: i32 = self
            .unsigned()?
            .try_into()
            .map_err(|_| AlgebraError::Parse { pos: self.pos, msg: "exponent too large".into() })?;
        Ok(if neg { -v } else { v })
    }

    /// Position just after the `)` matching the `(` at the current position,
    /// or `None` when unbalanced.
    fn matching_paren_end(&mut self) -> Option<usize> {
        self.skip_ws();
        let mut depth = 0usize;
        for (i, &c) in self.src[self.pos..].iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(self.pos + i + 1);
                    }
                }
                _ => {}
            }
        }
        None
    }

    /// True when the parenthesised group at the cursor is a coefficient,
    /// i.e. it is followed by `*`.
    fn paren_is_coef(&mut self) -> bool {
        match self.matching_paren_end() {
            Some(end) => self.src[end..].iter().find(|c| !c.is_ascii_whitespace()) == Some(&b'*'),
            None => false,
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, AlgebraError> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(LaurentPoly::monomial(1, self.exponent()?, 0))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(LaurentPoly::monomial(1, 0, self.exponent()?))
            }
            Some(c) if c.is_ascii_digit() => Ok(LaurentPoly::constant(self.unsigned()?)),
            Some(b'(') => {
                self.pos += 1;
                let p = self.polynomial()?;
                self.expect(b')')?;
                Ok(p)
            }
            _ => self.err("expected coefficient factor"),
        }
    }

    /// `[sign] monomial { (+|-) monomial }`
    pub(crate) fn polynomial(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut acc = LaurentPoly::zero();
        let mut first = true;
        loop {
            let neg = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                break;
            };
            let mut m = self.factor()?;
            while self.eat(b'*') {
                m = m * self.factor()?;
            }
            if neg {
                acc -= &m;
            } else {
                acc += &m;
            }
            first = false;
            if !matches!(self.peek(), Some(b'+') | Some(b'-')) {
                break;
            }
        }
        Ok(acc)
    }

    fn word(&mut self) -> Result<Word, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b',') {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let letters: Result<Vec<Letter>, AlgebraError> = if s.contains(',') {
            s.split(',')
                .map(|p| {
                    p.parse::<u16>()
                        .map_err(|_| AlgebraError::Parse { pos: start, msg: format!("bad letter {p:?}") })
                        .and_then(Letter::new)
                })
                .collect()
        } else {
            s.bytes().map(|d| Letter::new((d - b'0') as u16)).collect()
        };
        letters.map(Word::new)
    }

    pub(crate) fn biword(&mut self) -> Result<Biword, AlgebraError> {
        self.expect(b'(')?;
        let top = self.word()?;
        self.expect(b'|')?;
        let bottom = self.word()?;
        self.expect(b')')?;
        Biword::new(top, bottom)
    }

    pub(crate) fn bare_word(&mut self) -> Result<Word, AlgebraError> {
        self.expect(b'(')?;
        let w = self.word()?;
        self.expect(b')')?;
        Ok(w)
    }

    /// Parses a full sum of terms whose keys are read by `key`.
    pub(crate) fn sum<K>(
        &mut self,
        mut key: impl FnMut(&mut Self) -> Result<K, AlgebraError>,
        unit: impl Fn() -> K,
    ) -> Result<Vec<(K, LaurentPoly)>, AlgebraError> {
        let mut out = Vec::new();
        if self.at_end() {
            return self.err("empty input");
        }
        let mut first = true;
        while !self.at_end() {
            let neg = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                return self.err("expected '+' or '-'");
            };
            first = false;
            let mut coef = LaurentPoly::one();
            let k = loop {
                match self.peek() {
                    Some(b'(') if !self.paren_is_coef() => break Some(key(self)?),
                    Some(_) => {
                        coef = coef * self.factor()?;
                        if !self.eat(b'*') {
                            break None;
                        }
                    }
                    None => return self.err("unexpected end of input"),
                }
            };
            if neg {
                coef = -coef;
            }
            out.push((k.unwrap_or_else(&unit), coef));
        }
        Ok(out)
    }
}

pub fn parse_poly(src: &str) -> Result<LaurentPoly, AlgebraError> {
    let mut p = Parser::new(src);
    let v = p.polynomial()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parses an expression and checks every letter against the alphabet bound `r`.
pub fn parse_expression(src: &str, r: Option<u16>) -> Result<super::Expression, AlgebraError> {
    let mut p = Parser::new(src);
    let terms = p.sum(Parser::biword, Biword::empty)?;
    let e = super::Expression::from_terms(terms);
    if let Some(r) = r {
        e.check(r)?;
    }
    Ok(e)
}

pub fn parse_biword(src: &str) -> Result<Biword, AlgebraError> {
    let mut p = Parser::new(src);
    let b = p.biword()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(b)
}

impl FromStr for LaurentPoly {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

impl FromStr for super::Expression {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s, None)
    }
}

impl FromStr for Biword {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_biword(s)
    }
}
