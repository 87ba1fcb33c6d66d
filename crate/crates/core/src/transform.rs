//! Total functions on a finite state set `{0, .., n-1}`.
//!
//! Functions act on the right and compose left to right: `q·(s t) = (q·s)·t`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A total function on `{0, .., n-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Transformation {
    image: Vec<usize>,
}

impl Transformation {
    /// Builds a transformation, checking that every entry is a valid state.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::NoStates);
        }
        if let Some(&bad) = image.iter().find(|&&v| v >= n) {
            return Err(Error::StateOutOfRange {
                value: bad,
                n,
                context: "transformation".into(),
            });
        }
        Ok(Transformation { image })
    }

    pub(crate) fn from_image_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(image.iter().all(|&v| v < image.len()));
        Transformation { image }
    }

    pub fn identity(n: usize) -> Self {
        Transformation {
            image: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        assert!(value < n);
        Transformation {
            image: vec![value; n],
        }
    }

    /// `i ↦ i + 1 mod n`.
    pub fn standard_cycle(n: usize) -> Self {
        Transformation {
            image: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// The state `q·self`.
    pub fn apply(&self, q: usize) -> usize {
        self.image[q]
    }

    /// `self` followed by `other`, checking that both act on the same set.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    /// `self` followed by `other`. Panics on a degree mismatch.
    pub fn then(&self, other: &Transformation) -> Transformation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Transformation {
            image: self.image.iter().map(|&q| other.image[q]).collect(),
        }
    }

    /// `self` composed with itself `k` times; `pow(0)` is the identity.
    pub fn pow(&self, k: usize) -> Transformation {
        let mut acc = Transformation::identity(self.degree());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn image_set(&self) -> BTreeSet<usize> {
        self.image.iter().copied().collect()
    }

    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for &q in &self.image {
            if !seen[q] {
                seen[q] = true;
                count += 1;
            }
        }
        count
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(q, &p)| q == p)
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.degree()
    }

    pub fn is_idempotent(&self) -> bool {
        self.image.iter().all(|&p| self.image[p] == p)
    }

    /// True iff `self` is a bijection consisting of one cycle through every state.
    pub fn is_circular_permutation(&self) -> bool {
        if !self.is_permutation() {
            return false;
        }
        let n = self.degree();
        let mut q = 0;
        for step in 1..=n {
            q = self.image[q];
            if q == 0 {
                return step == n;
            }
        }
        false
    }

    /// Swaps the two image values pointwise. Defined only for rank 2.
    pub fn complement(&self) -> Result<Transformation> {
        let rank = self.rank();
        if rank != 2 {
            return Err(Error::RankNotTwo(rank));
        }
        let mut values = self.image_set().into_iter();
        let (i, j) = (values.next().unwrap(), values.next().unwrap());
        Ok(Transformation {
            image: self
                .image
                .iter()
                .map(|&v| if v == i { j } else { i })
                .collect(),
        })
    }

    /// Two-row form: the domain on top, images below.
    pub fn two_row(&self) -> String {
        let width = self.degree().saturating_sub(1).to_string().len();
        let top: Vec<String> = (0..self.degree()).map(|q| format!("{q:>width$}")).collect();
        let bottom: Vec<String> = self.image.iter().map(|q| format!("{q:>width$}")).collect();
        format!("( {} )\n( {} )", top.join(" "), bottom.join(" "))
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, q) in self.image.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Transformation {
    type Err = Error;

    /// Parses the one-line form `[1 2 0]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| Error::Parse {
            line: 1,
            message: message.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| bad("expected `[q0 q1 ...]`"))?;
        let image = inner
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| bad(&format!("not a state index: `{tok}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Transformation::new(image)
    }
}

/// A word over an automaton's alphabet, stored as letter indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter);
    }

    /// Appends `letter` repeated `k` times.
    pub fn push_power(&mut self, letter: usize, k: usize) {
        self.0.extend(std::iter::repeat_n(letter, k));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Renders the word with the given letter names; `ε` for the empty word.
    pub fn render(&self, alphabet: &[String]) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        let single = alphabet.iter().all(|name| name.chars().count() == 1);
        let names: Vec<&str> = self.0.iter().map(|&l| alphabet[l].as_str()).collect();
        if single {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    /// Parses a word written with single-character letter names, or
    /// space-separated names. `ε` and the empty string are the empty word.
    pub fn parse(text: &str, alphabet: &[String]) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let lookup = |name: &str| {
            alphabet
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Error::UnknownLetter(name.to_string()))
        };
        let letters = if text.contains(char::is_whitespace) {
            text.split_whitespace().map(lookup).collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| lookup(&c.to_string()))
                .collect::<Result<_>>()?
        };
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_laws() {
        let c = t(&[1, 2, 0]);
        assert_eq!(Transformation::identity(3).compose(&c).unwrap(), c);
        assert_eq!(c.compose(&t(&[0, 0, 0])).unwrap(), t(&[0, 0, 0]));
        assert_eq!(c.compose(&t(&[0, 0])), Err(Error::DimensionMismatch(3, 2)));
    }

    #[test]
    fn rank_values() {
        assert_eq!(Transformation::identity(5).rank(), 5);
        assert_eq!(t(&[0, 0, 2]).rank(), 2);
        assert_eq!(Transformation::constant(4, 3).rank(), 1);
    }

    #[test]
    fn idempotents() {
        assert!(Transformation::identity(4).is_idempotent());
        assert!(Transformation::constant(4, 2).is_idempotent());
        let b = t(&[2, 2, 0, 0]);
        assert!(!b.is_idempotent());
        let b2 = b.then(&b);
        assert_eq!(b2, t(&[0, 0, 2, 2]));
        assert!(b2.is_idempotent());
    }

    #[test]
    fn circular_permutations() {
        assert!(t(&[1, 2, 3, 0]).is_circular_permutation());
        assert!(t(&[2, 0, 3, 1]).is_circular_permutation());
        assert!(!t(&[1, 0, 3, 2]).is_circular_permutation());
        assert!(!Transformation::identity(3).is_circular_permutation());
        assert!(Transformation::identity(1).is_circular_permutation());
        assert!(!t(&[1, 1, 0]).is_circular_permutation());
    }

    #[test]
    fn complement_swaps_image_values() {
        let b = t(&[1, 0, 0, 0]);
        let c = b.complement().unwrap();
        assert_eq!(c, t(&[0, 1, 1, 1]));
        assert_eq!(c.complement().unwrap(), b);
        assert_eq!(t(&[2, 0, 2, 2]).complement().unwrap(), t(&[0, 2, 0, 0]));
        assert_eq!(
            Transformation::identity(3).complement(),
            Err(Error::RankNotTwo(3))
        );
        assert_eq!(
            Transformation::constant(3, 0).complement(),
            Err(Error::RankNotTwo(1))
        );
    }

    #[test]
    fn parse_and_display() {
        let x: Transformation = "[1 2 0]".parse().unwrap();
        assert_eq!(x, t(&[1, 2, 0]));
        assert_eq!(x.to_string(), "[1 2 0]");
        assert!("[1 3 0]".parse::<Transformation>().is_err());
        assert!("1 2 0".parse::<Transformation>().is_err());
        assert_eq!(x.two_row(), "( 0 1 2 )\n( 1 2 0 )");
    }

    #[test]
    fn words_render_and_parse() {
        let alphabet = vec!["a".to_string(), "b".to_string()];
        let w = Word::parse("abba", &alphabet).unwrap();
        assert_eq!(w.letters(), &[0, 1, 1, 0]);
        assert_eq!(w.render(&alphabet), "abba");
        assert_eq!(Word::empty().render(&alphabet), "ε");
        assert!(Word::parse("abc", &alphabet).is_err());
    }
}
