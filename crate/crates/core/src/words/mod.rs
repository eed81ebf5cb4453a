//! Reduced words in a free group over an indexed basis.
//!
//! Letters carry only a generator index and a sign; human-readable names are
//! handled by [`Alphabet`].

mod lattice;
mod text;

pub use lattice::{AbelianVector, IntegerLattice};
pub use text::Alphabet;

use std::fmt;

use serde::{Deserialize, Serialize};

/// A signed basis letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub negative: bool,
}

impl Letter {
    pub const fn pos(generator: usize) -> Self {
        Letter {
            generator,
            negative: false,
        }
    }

    pub const fn neg(generator: usize) -> Self {
        Letter {
            generator,
            negative: true,
        }
    }

    pub const fn new(generator: usize, sign: i8) -> Self {
        Letter {
            generator,
            negative: sign < 0,
        }
    }

    pub const fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            negative: !self.negative,
        }
    }

    pub const fn sign(self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// Dense index in `0..2n`: `2g` for `g`, `2g + 1` for `g⁻¹`.
    pub const fn slot(self) -> usize {
        2 * self.generator + self.negative as usize
    }

    pub const fn from_slot(slot: usize) -> Self {
        Letter {
            generator: slot / 2,
            negative: slot % 2 == 1,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.negative != other.negative
    }
}

/// A freely reduced word. Equality is letter-by-letter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Builds a word from `(generator, sign)` pairs.
    pub fn from_signed(pairs: &[(usize, i8)]) -> Self {
        Word::reduce(pairs.iter().map(|&(g, s)| Letter::new(g, s)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Self {
        let mut left = self.0.as_slice();
        let mut right = other.0.as_slice();
        while let (Some(&a), Some(&b)) = (left.last(), right.first()) {
            if !a.cancels(b) {
                break;
            }
            left = &left[..left.len() - 1];
            right = &right[1..];
        }
        let mut v = Vec::with_capacity(left.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(right);
        Word(v)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Self {
        words
            .into_iter()
            .fold(Word::identity(), |acc, w| acc.mul(w))
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// `self · other · self⁻¹`
    pub fn conjugate(&self, other: &Word) -> Self {
        self.mul(other).mul(&self.inverse())
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`
    pub fn commutator(u: &Word, v: &Word) -> Self {
        Word::product([u, v, &u.inverse(), &v.inverse()])
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || !a.cancels(b),
            _ => true,
        }
    }

    /// Splits the word as `conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k].cancels(self.0[n - 1 - k]) {
            k += 1;
        }
        let conjugator = Word(self.0[..k].to_vec());
        let core = Word(self.0[k..n - k].to_vec());
        (core, conjugator)
    }

    /// Rotation `w[k..] w[..k]` (no further reduction needed for cyclically
    /// reduced input).
    pub fn rotate(&self, k: usize) -> Self {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word::reduce(v)
    }

    pub fn abelianize(&self, rank: usize) -> AbelianVector {
        let mut coords = vec![0i64; rank];
        for l in &self.0 {
            coords[l.generator] += l.sign();
        }
        AbelianVector::new(coords)
    }

    /// Generators occurring with either sign.
    pub fn support(&self) -> std::collections::BTreeSet<usize> {
        self.0.iter().map(|l| l.generator).collect()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    pub fn contains_subword(&self, sub: &Word) -> bool {
        sub.is_empty() || self.0.windows(sub.len()).any(|w| w == sub.0.as_slice())
    }
}

impl fmt::Display for Word {
    /// Index-based rendering (`g0 g1'`); use [`Alphabet`] for named output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}{}", l.generator, if l.negative { "'" } else { "" })?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
