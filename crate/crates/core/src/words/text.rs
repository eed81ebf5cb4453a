use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Letter, Word};
use crate::error::{Error, Result};

/// Names for the generators of a fixed basis.
///
/// Words are written as whitespace-separated letter names, with a trailing
/// `'` marking an inverse (`a1 ha1' n a2`). The empty word is written `1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
    #[serde(skip)]
    lookup: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let lookup = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Alphabet { names, lookup }
    }

    /// `ha1 a1 ha2 a2 …` (orientable) or `n ha1 a1 …` (nonorientable).
    pub fn surface(genus: usize, one_sided: bool) -> Self {
        let mut names = Vec::with_capacity(2 * genus + 1);
        if one_sided {
            names.push("n".to_string());
        }
        for i in 1..=genus {
            names.push(format!("ha{i}"));
            names.push(format!("a{i}"));
        }
        Alphabet::new(names)
    }

    /// Smallest surface alphabet naming every token in `text`: nonorientable
    /// when `n` appears, genus = largest index seen.
    pub fn infer(text: &str) -> Self {
        let mut genus = 1;
        let mut one_sided = false;
        for tok in text.split_whitespace() {
            let tok = tok.trim_end_matches('\'');
            if tok == "n" {
                one_sided = true;
            } else if let Some(idx) = tok
                .strip_prefix("ha")
                .or_else(|| tok.strip_prefix('a'))
                .and_then(|s| s.parse::<usize>().ok())
            {
                genus = genus.max(idx);
            }
        }
        Alphabet::surface(genus, one_sided)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, generator: usize) -> &str {
        &self.names[generator]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        if self.lookup.is_empty() && !self.names.is_empty() {
            return self.names.iter().position(|n| n == name);
        }
        self.lookup.get(name).copied()
    }

    pub fn parse_letter(&self, token: &str, position: usize) -> Result<Letter> {
        let (base, negative) = match token.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (token, false),
        };
        let generator = self.index(base).ok_or_else(|| Error::UnknownLetter {
            token: token.to_string(),
            position,
        })?;
        Ok(Letter {
            generator,
            negative,
        })
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Word::identity());
        }
        let letters = text
            .split_whitespace()
            .enumerate()
            .map(|(i, t)| self.parse_letter(t, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(letters))
    }

    pub fn format_letter(&self, l: Letter) -> String {
        format!(
            "{}{}",
            self.names[l.generator],
            if l.negative { "'" } else { "" }
        )
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter()
            .map(|&l| self.format_letter(l))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
