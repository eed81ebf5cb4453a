//! Automorphisms of a free group given by images of basis letters, and the
//! basic Nielsen and invert moves.
//!
//! `f.compose(&g)` is `f ∘ g`: `g` acts first. A product written left to
//! right is evaluated with the rightmost factor acting first unless
//! [`Convention::LeftmostFirst`] is requested.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stallings::{fold_rose, FoldOrder};
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// `x ↦ x·y`
    RightMult,
    /// `x ↦ y·x`
    LeftMult,
    /// `x ↦ x⁻¹`
    Invert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveDescriptor {
    pub kind: MoveKind,
    pub x: usize,
    pub y: Option<usize>,
    /// `1` or `-1`.
    pub exponent: i8,
}

impl MoveDescriptor {
    pub fn right(x: usize, y: usize) -> Self {
        MoveDescriptor {
            kind: MoveKind::RightMult,
            x,
            y: Some(y),
            exponent: 1,
        }
    }

    pub fn left(x: usize, y: usize) -> Self {
        MoveDescriptor {
            kind: MoveKind::LeftMult,
            x,
            y: Some(y),
            exponent: 1,
        }
    }

    pub fn invert(x: usize) -> Self {
        MoveDescriptor {
            kind: MoveKind::Invert,
            x,
            y: None,
            exponent: 1,
        }
    }

    /// Same move with the exponent flipped.
    pub fn inverse(self) -> Self {
        MoveDescriptor {
            exponent: -self.exponent,
            ..self
        }
    }

    pub fn validate(&self, rank: usize) -> Result<()> {
        let check = |g: usize| {
            if g >= rank {
                Err(Error::GeneratorOutOfRange { generator: g, rank })
            } else {
                Ok(())
            }
        };
        check(self.x)?;
        match (self.kind, self.y) {
            (MoveKind::Invert, None) => Ok(()),
            (MoveKind::Invert, Some(_)) | (_, None) => Err(Error::MalformedMove {
                text: format!("{self:?}"),
                position: 0,
                reason: "second letter must be present exactly for ρ and λ".into(),
            }),
            (_, Some(y)) => {
                check(y)?;
                if y == self.x {
                    Err(Error::DegenerateMove(y))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn letters(&self) -> Vec<usize> {
        std::iter::once(self.x).chain(self.y).collect()
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        let body = match (self.kind, self.y) {
            (MoveKind::RightMult, Some(y)) => {
                format!("r({},{})", alphabet.name(self.x), alphabet.name(y))
            }
            (MoveKind::LeftMult, Some(y)) => {
                format!("l({},{})", alphabet.name(self.x), alphabet.name(y))
            }
            _ => format!("i({})", alphabet.name(self.x)),
        };
        if self.exponent < 0 {
            body + "^-1"
        } else {
            body
        }
    }
}

/// Parses a product such as `r(ha2,a4)^-1 l(x,y) i(a1)`, resolving letter
/// names with `resolve`. Error positions count moves from 0.
pub fn parse_moves_with(
    text: &str,
    resolve: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<MoveDescriptor>> {
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    let malformed = |pos: usize, reason: &str| Error::MalformedMove {
        text: text.to_string(),
        position: pos,
        reason: reason.to_string(),
    };
    while !rest.is_empty() {
        let pos = out.len();
        let kind = match rest.chars().next() {
            Some('r') => MoveKind::RightMult,
            Some('l') => MoveKind::LeftMult,
            Some('i') => MoveKind::Invert,
            _ => return Err(malformed(pos, "expected r(, l( or i(")),
        };
        rest = rest[1..].trim_start();
        let Some(after_open) = rest.strip_prefix('(') else {
            return Err(malformed(pos, "expected `(`"));
        };
        let Some(close) = after_open.find(')') else {
            return Err(malformed(pos, "missing `)`"));
        };
        let args: Vec<&str> = after_open[..close].split(',').map(str::trim).collect();
        let lookup = |name: &str| {
            resolve(name).ok_or_else(|| malformed(pos, &format!("unknown letter `{name}`")))
        };
        let (x, y) = match (kind, args.as_slice()) {
            (MoveKind::Invert, [x]) => (lookup(x)?, None),
            (MoveKind::Invert, _) => return Err(malformed(pos, "i() takes one letter")),
            (_, [x, y]) => (lookup(x)?, Some(lookup(y)?)),
            _ => return Err(malformed(pos, "r() and l() take two letters")),
        };
        rest = after_open[close + 1..].trim_start();
        let exponent = match rest.strip_prefix("^-1") {
            Some(r) => {
                rest = r.trim_start();
                -1
            }
            None => 1,
        };
        if y == Some(x) {
            return Err(malformed(pos, "move uses the same letter twice"));
        }
        out.push(MoveDescriptor {
            kind,
            x,
            y,
            exponent,
        });
    }
    Ok(out)
}

pub fn parse_moves(alphabet: &Alphabet, text: &str) -> Result<Vec<MoveDescriptor>> {
    parse_moves_with(text, |name| alphabet.index(name))
}

/// An invertible endomorphism, stored with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Automorphism {
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl Automorphism {
    pub fn identity(rank: usize) -> Self {
        let images: Vec<Word> = (0..rank).map(Word::generator).collect();
        Automorphism {
            inverse_images: images.clone(),
            images,
        }
    }

    /// General automorphism from letter images. Fails unless the images form
    /// a basis; the inverse is computed at the same time.
    pub fn from_images(images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        let inverse_images = invert_images(&images)?;
        let f = Automorphism {
            images,
            inverse_images,
        };
        debug_assert!((0..rank).all(|i| f.apply_inverse(&f.apply(&Word::generator(i))) == Word::generator(i)));
        Ok(f)
    }

    pub fn basic(rank: usize, m: &MoveDescriptor) -> Result<Self> {
        m.validate(rank)?;
        let x = Word::generator(m.x);
        let mut fwd = Automorphism::identity(rank);
        match (m.kind, m.y) {
            (MoveKind::RightMult, Some(y)) => {
                let y = Word::generator(y);
                fwd.images[m.x] = x.mul(&y);
                fwd.inverse_images[m.x] = x.mul(&y.inverse());
            }
            (MoveKind::LeftMult, Some(y)) => {
                let y = Word::generator(y);
                fwd.images[m.x] = y.mul(&x);
                fwd.inverse_images[m.x] = y.inverse().mul(&x);
            }
            _ => {
                fwd.images[m.x] = x.inverse();
                fwd.inverse_images[m.x] = x.inverse();
            }
        }
        Ok(if m.exponent < 0 { fwd.inverse() } else { fwd })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| *w == Word::generator(i))
    }

    pub fn apply(&self, w: &Word) -> Word {
        substitute(&self.images, w)
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        substitute(&self.inverse_images, w)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        assert_eq!(self.rank(), other.rank(), "ambient ranks differ");
        Automorphism {
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| other.apply_inverse(w))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// `c ∘ self ∘ c⁻¹`.
    pub fn conjugate_by(&self, c: &Automorphism) -> Automorphism {
        c.compose(self).compose(&c.inverse())
    }

    /// Letters whose image is the letter itself.
    pub fn fixed_letters(&self) -> BTreeSet<usize> {
        (0..self.rank())
            .filter(|&i| self.images[i] == Word::generator(i))
            .collect()
    }

    /// Generators occurring in the image of letter `i`.
    pub fn letters_used(&self, i: usize) -> BTreeSet<usize> {
        self.images[i].support()
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, w)| **w != Word::generator(*i))
            .map(|(i, w)| format!("{} -> {}", alphabet.name(i), alphabet.format_word(w)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "g{i} -> {w}")?;
        }
        Ok(())
    }
}

fn substitute(images: &[Word], w: &Word) -> Word {
    let mut raw = Vec::new();
    for l in w {
        let img = &images[l.generator];
        if l.negative {
            raw.extend(img.iter().rev().map(|x| x.inverse()));
        } else {
            raw.extend(img.iter().copied());
        }
    }
    Word::reduce(raw)
}

/// Inverse images via tagged folding: the images form a basis iff their rose
/// folds to a single vertex with one loop per generator, and the tag on the
/// loop for `x_k` spells `f⁻¹(x_k)` in the input letters.
fn invert_images(images: &[Word]) -> Result<Vec<Word>> {
    let rank = images.len();
    let not_invertible = |reason: String| Error::NotInvertible { rank, reason };
    if let Some(i) = images.iter().position(Word::is_empty) {
        return Err(not_invertible(format!("image of letter {i} is trivial")));
    }
    let folded = fold_rose(rank, images, FoldOrder::Forward)?;
    let g = &folded.graph;
    if g.vertex_count() != 1 || g.edges().len() != rank {
        return Err(not_invertible(format!(
            "folded graph has {} vertices and rank {}",
            g.vertex_count(),
            g.rank()
        )));
    }
    let mut inverse: Vec<Option<Word>> = vec![None; rank];
    for (e, tag) in g.edges().iter().zip(&folded.tags) {
        inverse[e.generator] = Some(tag.clone());
    }
    inverse
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| not_invertible(format!("letter {i} is not accepted"))))
        .collect()
}

/// Which factor of a left-to-right product acts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    RightmostFirst,
    LeftmostFirst,
}

impl Convention {
    pub fn other(self) -> Self {
        match self {
            Convention::RightmostFirst => Convention::LeftmostFirst,
            Convention::LeftmostFirst => Convention::RightmostFirst,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::RightmostFirst => "rightmost-first",
            Convention::LeftmostFirst => "leftmost-first",
        })
    }
}

/// Evaluates the product `factors[0] · factors[1] · …`.
pub fn product(rank: usize, factors: &[Automorphism], convention: Convention) -> Automorphism {
    let id = Automorphism::identity(rank);
    match convention {
        Convention::RightmostFirst => factors.iter().fold(id, |acc, f| acc.compose(f)),
        Convention::LeftmostFirst => factors.iter().fold(id, |acc, f| f.compose(&acc)),
    }
}

pub fn product_of_moves(
    rank: usize,
    moves: &[MoveDescriptor],
    convention: Convention,
) -> Result<Automorphism> {
    let factors = moves
        .iter()
        .map(|m| Automorphism::basic(rank, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(product(rank, &factors, convention))
}
