//! Heegaard diagrams held as relator words.
//!
//! A closed 3-manifold of Heegaard genus `g` is a genus-`g` handlebody with
//! `g` 2-handles and a 3-handle attached. Only the homotopy class of each
//! 2-handle attaching circle in the handlebody matters for `pi_1` and `H_1`, so
//! each circle is recorded as a word in the free generators `x1..xg`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{cokernel, AbelianGroup, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeegaardError {
    #[error("relator {relator} uses generator x{generator}, but the genus is {genus}")]
    UnknownGenerator {
        relator: usize,
        generator: usize,
        genus: usize,
    },
    #[error("a closed genus {genus} diagram needs {genus} relators, got {got}")]
    RelatorCount { genus: usize, got: usize },
    #[error("cannot parse relator {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// One occurrence of a generator. `generator` is 0-based, `exponent` is ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1, "exponent must be ±1");
        Self { generator, exponent }
    }

    pub fn inverse(self) -> Self {
        Self {
            generator: self.generator,
            exponent: -self.exponent,
        }
    }
}

/// A word in the free group; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Cancels adjacent `x x^-1` pairs until none remain.
    pub fn freely_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(&top) if top == l.inverse() => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Exponent sum of each of the first `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut sums = vec![0i64; n];
        for l in &self.0 {
            sums[l.generator] += l.exponent as i64;
        }
        sums
    }

    fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Prints with generator names `x` (genus 1) or `x1..xg`.
    pub fn display(&self, genus: usize) -> WordDisplay<'_> {
        WordDisplay { word: self, genus }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    genus: usize,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.word.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if self.genus == 1 && l.generator == 0 {
                f.write_str("x")?;
            } else {
                write!(f, "x{}", l.generator + 1)?;
            }
            if l.exponent < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Default rendering uses `x1..`; see [`Word::display`] for genus-aware names.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(usize::MAX))
    }
}

/// Syntax: letters `x<k>` with optional `^-1` or `^1`, whitespace optional.
/// A bare `x` is `x1`. `1` or the empty string is the empty word.
impl FromStr for Word {
    type Err = HeegaardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| HeegaardError::Parse {
            text: s.to_string(),
            reason,
        };
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::default());
        }
        let bytes = trimmed.as_bytes();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if c != b'x' {
                return Err(err(format!("unexpected {:?} at offset {i}", c as char)));
            }
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let index: usize = if start == i {
                1
            } else {
                trimmed[start..i]
                    .parse()
                    .map_err(|_| err("generator index too large".into()))?
            };
            if index == 0 {
                return Err(err("generators are numbered from 1".into()));
            }
            let mut exponent = 1;
            if trimmed[i..].starts_with("^-1") {
                exponent = -1;
                i += 3;
            } else if trimmed[i..].starts_with("^1") {
                i += 2;
            } else if trimmed[i..].starts_with('^') {
                return Err(err(
                    "only exponents 1 and -1 are allowed; repeat letters for powers".into()
                ));
            }
            letters.push(Letter::new(index - 1, exponent));
        }
        Ok(Word(letters))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegaardDiagram {
    genus: usize,
    relators: Vec<Word>,
}

impl HeegaardDiagram {
    /// A closed diagram: exactly `genus` relators over `x1..x_genus`.
    pub fn new(genus: usize, relators: Vec<Word>) -> Result<Self, HeegaardError> {
        if relators.len() != genus {
            return Err(HeegaardError::RelatorCount {
                genus,
                got: relators.len(),
            });
        }
        for (k, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator().filter(|&g| g >= genus) {
                return Err(HeegaardError::UnknownGenerator {
                    relator: k + 1,
                    generator: g + 1,
                    genus,
                });
            }
        }
        Ok(Self { genus, relators })
    }

    pub fn parse(genus: usize, relators: &[&str]) -> Result<Self, HeegaardError> {
        let words = relators.iter().map(|r| r.parse()).collect::<Result<Vec<Word>, _>>()?;
        Self::new(genus, words)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Rows are generators, columns relators.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.genus, self.relators.len());
        for (j, r) in self.relators.iter().enumerate() {
            for (i, s) in r.exponent_sums(self.genus).into_iter().enumerate() {
                m.set(i, j, s.into());
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn freely_reduced(&self) -> GroupPresentation {
        GroupPresentation {
            generators: self.generators,
            relators: self.relators.iter().map(Word::freely_reduced).collect(),
        }
    }
}

/// `<x | x>`, `<x1, x2 | x1 x2, 1>`, `< | >` for the trivial presentation.
impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = match self.generators {
            1 => vec!["x".into()],
            n => (1..=n).map(|k| format!("x{k}")).collect(),
        };
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display(self.generators).to_string())
            .collect();
        write!(f, "<{} | {}>", gens.join(", "), rels.join(", "))
    }
}

/// The presentation read off the diagram, relators verbatim.
pub fn pi1_presentation(d: &HeegaardDiagram) -> GroupPresentation {
    GroupPresentation {
        generators: d.genus,
        relators: d.relators.clone(),
    }
}

/// Abelianisation: the cokernel of the exponent-sum matrix.
pub fn h1(d: &HeegaardDiagram) -> AbelianGroup {
    cokernel(&d.exponent_matrix())
}
