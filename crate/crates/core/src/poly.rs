//! Noncommutative polynomials over a two-letter alphabet with big-integer
//! coefficients.
//!
//! The same machinery serves the ab-basis (`a`, `b`, both of degree 1) and
//! the cd-basis (`c` of degree 1, `d` of degree 2). Words are packed
//! bit-strings: letter `i` of a word is bit `i`, with the first letter of
//! the alphabet stored as 0.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Longest representable word.
pub const MAX_WORD_LEN: usize = 64;

pub trait Alphabet: Copy + Eq + fmt::Debug + 'static {
    /// The two letters, in sort order.
    const LETTERS: [char; 2];
    /// Degree contributed by each letter.
    const DEGREES: [usize; 2];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cd;

impl Alphabet for Ab {
    const LETTERS: [char; 2] = ['a', 'b'];
    const DEGREES: [usize; 2] = [1, 1];
}

impl Alphabet for Cd {
    const LETTERS: [char; 2] = ['c', 'd'];
    const DEGREES: [usize; 2] = [1, 2];
}

/// A word over a two-letter alphabet, ordered lexicographically as a string.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const EMPTY: Word = Word { bits: 0, len: 0 };

    /// Builds a word from letter indices (0 or 1).
    pub fn from_letters(letters: impl IntoIterator<Item = u8>) -> Word {
        let mut w = Word::EMPTY;
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Letter index at position `i`.
    pub fn letter(self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        (self.bits >> i & 1) as u8
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn push(&mut self, letter: u8) {
        assert!(
            self.len() < MAX_WORD_LEN,
            "word longer than {MAX_WORD_LEN} letters"
        );
        self.bits |= u64::from(letter & 1) << self.len;
        self.len += 1;
    }

    pub fn concat(self, other: Word) -> Word {
        assert!(
            self.len() + other.len() <= MAX_WORD_LEN,
            "word longer than {MAX_WORD_LEN} letters"
        );
        Word {
            bits: self.bits | other.bits.checked_shl(self.len as u32).unwrap_or(0),
            len: self.len + other.len,
        }
    }

    /// Number of occurrences of the second letter.
    pub fn count_second(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn degree<A: Alphabet>(self) -> usize {
        self.letters().map(|l| A::DEGREES[l as usize]).sum()
    }

    pub fn render<A: Alphabet>(self) -> String {
        self.letters().map(|l| A::LETTERS[l as usize]).collect()
    }

    pub fn parse<A: Alphabet>(s: &str) -> Option<Word> {
        let mut w = Word::EMPTY;
        for ch in s.chars() {
            let l = A::LETTERS.iter().position(|&c| c == ch)?;
            if w.len() == MAX_WORD_LEN {
                return None;
            }
            w.push(l as u8);
        }
        Some(w)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters().cmp(other.letters())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters().map(|l| char::from(b'0' + l)).collect();
        write!(f, "Word({s})")
    }
}

/// Integer combination of words; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly<A: Alphabet> {
    terms: BTreeMap<Word, BigInt>,
    _alphabet: PhantomData<A>,
}

pub type AbPolynomial = NcPoly<Ab>;
pub type CdPolynomial = NcPoly<Cd>;

impl<A: Alphabet> Default for NcPoly<A> {
    fn default() -> Self {
        NcPoly {
            terms: BTreeMap::new(),
            _alphabet: PhantomData,
        }
    }
}

impl<A: Alphabet> NcPoly<A> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::EMPTY, 1)
    }

    pub fn monomial(word: Word, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff.into());
        p
    }

    /// The single-letter polynomial for letter index `l`.
    pub fn letter(l: u8) -> Self {
        Self::monomial(Word::from_letters([l]), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: Word, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn coeff(&self, word: Word) -> BigInt {
        self.terms.get(&word).cloned().unwrap_or_default()
    }

    pub fn coeff_of(&self, word: &str) -> BigInt {
        Word::parse::<A>(word)
            .map(|w| self.coeff(w))
            .unwrap_or_default()
    }

    /// Terms in lexicographic word order.
    pub fn terms(&self) -> impl Iterator<Item = (Word, &BigInt)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(d)` when every term has degree `d`; `None` for zero or mixed degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|w| w.degree::<A>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.degree::<A>())
                .or_default()
                .add_term(*w, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        if k.is_zero() {
            return out;
        }
        for (w, c) in &self.terms {
            out.terms.insert(*w, c * k);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Evaluates at both letters equal to 1.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Word-to-coefficient map with words rendered as letter strings.
    pub fn to_string_map(&self) -> Vec<(String, BigInt)> {
        self.terms
            .iter()
            .map(|(w, c)| (w.render::<A>(), c.clone()))
            .collect()
    }
}

impl<A: Alphabet> Add for &NcPoly<A> {
    type Output = NcPoly<A>;
    fn add(self, rhs: Self) -> NcPoly<A> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl<A: Alphabet> Sub for &NcPoly<A> {
    type Output = NcPoly<A>;
    fn sub(self, rhs: Self) -> NcPoly<A> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c);
        }
        out
    }
}

impl<A: Alphabet> Mul for &NcPoly<A> {
    type Output = NcPoly<A>;
    fn mul(self, rhs: Self) -> NcPoly<A> {
        let mut out = NcPoly::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &rhs.terms {
                out.add_term(u.concat(*v), cu * cv);
            }
        }
        out
    }
}

impl<A: Alphabet> Neg for &NcPoly<A> {
    type Output = NcPoly<A>;
    fn neg(self) -> NcPoly<A> {
        self.scale(&-BigInt::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<A: Alphabet> $tr for NcPoly<A> {
            type Output = NcPoly<A>;
            fn $m(self, rhs: Self) -> NcPoly<A> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<A: Alphabet> fmt::Display for NcPoly<A> {
    /// Renders like `aa + 3ab - 2ba`; the empty word prints as its coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                write!(f, "{}", w.render::<A>())?;
            }
        }
        Ok(())
    }
}

impl<A: Alphabet> fmt::Debug for NcPoly<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial term `{0}`")]
pub struct ParsePolyError(pub String);

impl<A: Alphabet> FromStr for NcPoly<A> {
    type Err = ParsePolyError;

    /// Parses sums of terms `[coeff]word` such as `aa + 3ab - ba`. Words are
    /// spelled out letter by letter; there is no exponent syntax.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Self::zero();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(out);
        }
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map_or(body.len(), |i| i + 1);
            let term = &body[..end];
            rest = &body[end..];
            let split = term
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(term.len());
            let (digits, letters) = term.split_at(split);
            if digits.is_empty() && letters.is_empty() {
                return Err(ParsePolyError(term.into()));
            }
            let coeff: BigInt = if digits.is_empty() {
                BigInt::one()
            } else {
                digits.parse().map_err(|_| ParsePolyError(term.into()))?
            };
            let word = Word::parse::<A>(letters).ok_or_else(|| ParsePolyError(term.into()))?;
            out.add_term(word, coeff * sign);
        }
        Ok(out)
    }
}
