use std::cmp::Ordering;
use std::fmt;

use super::AlgebraError;

/// A letter of the alphabet `{1, .., r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Letter(u16);

impl Letter {
    /// Fails on zero; the upper bound is checked against an alphabet with
    /// [`Letter::check`].
    pub fn new(value: u16) -> Result<Self, AlgebraError> {
        if value == 0 {
            return Err(AlgebraError::LetterOutOfRange { letter: 0, r: None });
        }
        Ok(Letter(value))
    }

    pub(crate) const fn raw(value: u16) -> Self {
        Letter(value)
    }

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn check(self, r: u16) -> Result<Self, AlgebraError> {
        if self.0 == 0 || self.0 > r {
            Err(AlgebraError::LetterOutOfRange { letter: self.0, r: Some(r) })
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of pairs `i < j` with `w[i] > w[j]`.
pub fn inversions<T: Ord>(w: &[T]) -> usize {
    let mut n = 0;
    for (i, a) in w.iter().enumerate() {
        n += w[i + 1..].iter().filter(|b| a > *b).count();
    }
    n
}

/// A finite word over the alphabet. Ordered by length first, then
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw values, rejecting zero.
    pub fn from_values(values: &[u16]) -> Result<Self, AlgebraError> {
        values.iter().map(|&v| Letter::new(v)).collect::<Result<Vec<_>, _>>().map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn values(&self) -> Vec<u16> {
        self.0.iter().map(|l| l.0).collect()
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }

    pub fn check(&self, r: u16) -> Result<(), AlgebraError> {
        self.0.iter().try_for_each(|l| l.check(r).map(|_| ()))
    }

    pub fn inv(&self) -> usize {
        inversions(&self.0)
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn sorted(&self) -> Word {
        let mut v = self.0.clone();
        v.sort_unstable();
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub(crate) fn letters_mut(&mut self) -> &mut Vec<Letter> {
        &mut self.0
    }

    /// Digits when every letter is at most 9, comma separated otherwise.
    pub(crate) fn render(&self, commas: bool) -> String {
        let sep = if commas { "," } else { "" };
        self.0.iter().map(|l| l.0.to_string()).collect::<Vec<_>>().join(sep)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let commas = self.max_letter().is_some_and(|l| l.0 > 9);
        f.write_str(&self.render(commas))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

pub fn word_inv(w: &Word) -> usize {
    w.inv()
}

pub fn sorted_rearrangement(w: &Word) -> Word {
    w.sorted()
}

/// A two-row array of letters: the monomials of the free biword algebra.
///
/// The derived order compares length, then the top word, then the bottom
/// word, which is the canonical term order of [`super::Expression`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Biword {
    top: Word,
    bottom: Word,
}

impl Biword {
    pub fn new(top: Word, bottom: Word) -> Result<Self, AlgebraError> {
        if top.len() != bottom.len() {
            return Err(AlgebraError::LengthMismatch { top: top.len(), bottom: bottom.len() });
        }
        Ok(Biword { top, bottom })
    }

    /// Convenience constructor from digit strings such as `("123", "213")`.
    pub fn from_digits(top: &str, bottom: &str) -> Result<Self, AlgebraError> {
        let parse = |s: &str| -> Result<Word, AlgebraError> {
            s.chars()
                .map(|c| {
                    let d = c.to_digit(10).ok_or_else(|| AlgebraError::Parse {
                        pos: 0,
                        msg: format!("not a digit: {c:?}"),
                    })?;
                    Letter::new(d as u16)
                })
                .collect()
        };
        Biword::new(parse(top)?, parse(bottom)?)
    }

    pub fn empty() -> Self {
        Biword::default()
    }

    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    pub fn top(&self) -> &Word {
        &self.top
    }

    pub fn bottom(&self) -> &Word {
        &self.bottom
    }

    /// Column `i` (0-based) as `(top, bottom)`.
    pub fn column(&self, i: usize) -> (Letter, Letter) {
        (self.top.0[i], self.bottom.0[i])
    }

    pub fn columns(&self) -> impl Iterator<Item = (Letter, Letter)> + '_ {
        self.top.0.iter().copied().zip(self.bottom.0.iter().copied())
    }

    pub fn from_columns<I: IntoIterator<Item = (Letter, Letter)>>(cols: I) -> Self {
        let (top, bottom): (Vec<_>, Vec<_>) = cols.into_iter().unzip();
        Biword { top: Word(top), bottom: Word(bottom) }
    }

    pub fn concat(&self, other: &Biword) -> Biword {
        Biword { top: self.top.concat(&other.top), bottom: self.bottom.concat(&other.bottom) }
    }

    /// Sub-biword of columns `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Biword {
        Biword {
            top: Word(self.top.0[start..end].to_vec()),
            bottom: Word(self.bottom.0[start..end].to_vec()),
        }
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.top.max_letter().max(self.bottom.max_letter())
    }

    pub fn check(&self, r: u16) -> Result<(), AlgebraError> {
        self.top.check(r)?;
        self.bottom.check(r)
    }

    pub(crate) fn rows_mut(&mut self) -> (&mut Vec<Letter>, &mut Vec<Letter>) {
        (self.top.letters_mut(), self.bottom.letters_mut())
    }

    pub(crate) fn render(&self, commas: bool) -> String {
        format!("({}|{})", self.top.render(commas), self.bottom.render(commas))
    }
}

impl fmt::Display for Biword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let commas = self.max_letter().is_some_and(|l| l.0 > 9);
        f.write_str(&self.render(commas))
    }
}

impl fmt::Debug for Biword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Biword{self}")
    }
}

pub fn biword_concat(a: &Biword, b: &Biword) -> Biword {
    a.concat(b)
}
