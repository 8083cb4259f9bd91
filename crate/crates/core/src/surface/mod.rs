//! Surfaces as arrow words.
//!
//! A compact surface is built from one 0-handle (a disc) by attaching
//! 1-handles along pairs of intervals in its boundary circle, viewed as
//! `R ∪ {∞}`, and then capping every boundary circle with a 2-handle. A
//! [`SurfaceWord`] records the attaching intervals left to right. Each
//! interval carries an arrow; a handle whose two arrows point the same way is
//! twisted (a Möbius band), otherwise untwisted.
//!
//! Words are linear. Moving an arrow across `∞` is the explicit
//! [`SurfaceMove::Rotate`] move.

mod classify;
mod moves;
mod normalize;

pub use classify::{boundary_components, canonical_word, classify, orientable, SurfaceClass};
pub use moves::{applicable_moves, apply_move, Direction, Side, SurfaceMove};
pub use normalize::{normalize, normalize_with_budget, verify_trace, MoveTrace, TraceFailure, DEFAULT_BUDGET};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Arrow direction along the real line: `+` points right, `-` points left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowToken {
    pub label: String,
    pub sign: Sign,
}

impl ArrowToken {
    pub fn new(label: impl Into<String>, sign: Sign) -> Self {
        Self {
            label: label.into(),
            sign,
        }
    }
}

impl fmt::Display for ArrowToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, self.sign.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("label {label} occurs {count} times, expected exactly 2")]
    BadArity { label: String, count: usize },
    #[error("cannot parse arrow word: {0}")]
    Parse(String),
    #[error("move {mv} is inapplicable: {reason}")]
    Inapplicable { mv: String, reason: String },
    #[error("word has {boundary} boundary circles; normalisation needs exactly 1")]
    NotClosedForm { boundary: usize },
    #[error("normalisation budget of {budget} moves exceeded")]
    NormalizationBudgetExceeded { budget: usize, partial: Box<MoveTrace> },
    #[error("orientable word with odd Euler characteristic {chi}")]
    ParityError { chi: i64 },
}

/// Sequence of arrow tokens on `∂h0 = R ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SurfaceWord {
    tokens: Vec<ArrowToken>,
}

impl SurfaceWord {
    pub fn new(tokens: Vec<ArrowToken>) -> Self {
        Self { tokens }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn tokens(&self) -> &[ArrowToken] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Every label must occur exactly twice.
    pub fn validate(&self) -> Result<(), SurfaceError> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        let mut order = Vec::new();
        for t in &self.tokens {
            let c = counts.entry(&t.label).or_insert(0);
            if *c == 0 {
                order.push(t.label.as_str());
            }
            *c += 1;
        }
        match order.into_iter().find(|l| counts[l] != 2) {
            Some(label) => Err(SurfaceError::BadArity {
                label: label.to_string(),
                count: counts[label],
            }),
            None => Ok(()),
        }
    }

    /// Handle count `n`.
    pub fn handle_count(&self) -> usize {
        self.tokens.len() / 2
    }

    /// Labels in order of first appearance.
    pub fn labels(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for t in &self.tokens {
            if !seen.contains(&t.label.as_str()) {
                seen.push(t.label.as_str());
            }
        }
        seen
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.tokens.iter().any(|t| t.label == label)
    }

    /// Index of the other token carrying the label of `tokens[i]`.
    pub fn partner(&self, i: usize) -> Option<usize> {
        let label = &self.tokens.get(i)?.label;
        self.tokens
            .iter()
            .enumerate()
            .find(|&(k, t)| k != i && &t.label == label)
            .map(|(k, _)| k)
    }

    /// Positions of the two tokens of `label`, in order.
    pub fn positions(&self, label: &str) -> Option<(usize, usize)> {
        let mut it = self
            .tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.label == label)
            .map(|(k, _)| k);
        let first = it.next()?;
        let second = it.next()?;
        it.next().is_none().then_some((first, second))
    }

    /// A handle is twisted iff both of its arrows point the same way.
    pub fn is_twisted(&self, label: &str) -> Option<bool> {
        let (i, j) = self.positions(label)?;
        Some(self.tokens[i].sign == self.tokens[j].sign)
    }

    /// Renames labels to `a, b, c, ...` in order of first appearance.
    pub fn relabeled(&self) -> SurfaceWord {
        let labels = self.labels();
        let names: BTreeMap<&str, String> = labels.iter().enumerate().map(|(k, l)| (*l, label_name(k))).collect();
        SurfaceWord::new(
            self.tokens
                .iter()
                .map(|t| ArrowToken::new(names[t.label.as_str()].clone(), t.sign))
                .collect(),
        )
    }

    /// A label not yet used in the word.
    pub fn fresh_label(&self) -> String {
        (0..)
            .map(label_name)
            .find(|l| !self.contains_label(l))
            .expect("unbounded label supply")
    }
}

/// `a, ..., z, a1, ..., z1, a2, ...`
pub(crate) fn label_name(k: usize) -> String {
    let letter = (b'a' + (k % 26) as u8) as char;
    match k / 26 {
        0 => letter.to_string(),
        round => format!("{letter}{round}"),
    }
}

/// Whitespace-separated tokens `label+` / `label-`; the empty word prints as "".
impl fmt::Display for SurfaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.tokens.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for ArrowToken {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let sign = chars
            .next_back()
            .and_then(Sign::from_symbol)
            .ok_or_else(|| SurfaceError::Parse(format!("token {s:?} must end in '+' or '-'")))?;
        let label = chars.as_str();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(SurfaceError::Parse(format!("label in {s:?} must be alphanumeric")));
        }
        Ok(ArrowToken::new(label, sign))
    }
}

impl FromStr for SurfaceWord {
    type Err = SurfaceError;

    /// Parses the token syntax only; arity is checked by [`SurfaceWord::validate`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(SurfaceWord::new)
    }
}
