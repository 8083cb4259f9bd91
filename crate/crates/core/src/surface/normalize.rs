use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::moves::slides;
use super::{
    apply_move, boundary_components, canonical_word, classify, ArrowToken, Side, Sign, SurfaceError, SurfaceMove,
    SurfaceWord,
};

pub const DEFAULT_BUDGET: usize = 100_000;

/// Longest window searched when fixing up finished blocks.
const LOCAL_DEPTH: usize = 10;

/// A replayable certificate: `moves` carry `initial` to `final_word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTrace {
    pub initial: SurfaceWord,
    pub moves: Vec<SurfaceMove>,
    pub final_word: SurfaceWord,
}

/// Why a trace was rejected. `step` is `None` when every move applied but
/// the replay did not reach the recorded final word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFailure {
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for TraceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(s) => write!(f, "step {}: {}", s + 1, self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

impl MoveTrace {
    /// Replays every move through [`apply_move`].
    pub fn check(&self) -> Result<(), TraceFailure> {
        let mut w = self.initial.clone();
        for (step, mv) in self.moves.iter().enumerate() {
            w = apply_move(&w, mv).map_err(|e| TraceFailure {
                step: Some(step),
                reason: e.to_string(),
            })?;
        }
        if w != self.final_word {
            return Err(TraceFailure {
                step: None,
                reason: format!("replay reaches \"{w}\", trace claims \"{}\"", self.final_word),
            });
        }
        Ok(())
    }
}

pub fn verify_trace(t: &MoveTrace) -> bool {
    t.check().is_ok()
}

/// [`normalize_with_budget`] with [`DEFAULT_BUDGET`].
pub fn normalize(w: &SurfaceWord) -> Result<(SurfaceWord, MoveTrace), SurfaceError> {
    normalize_with_budget(w, DEFAULT_BUDGET)
}

/// Reduces a one-boundary word to the model word of its class, keeping the
/// word's own labels, so `result.relabeled() == canonical_word(classify(w))`.
///
/// The word is processed left to right as a finished prefix of blocks and a
/// remainder. A twisted handle in the remainder is made adjacent by sliding
/// everything between its arrows across it, then carried to the front of the
/// remainder as a crosscap `x x`. Without twisted handles two interleaved
/// handles are gathered into a torus block `x y x' y'`. Finally torus blocks
/// next to a crosscap are traded for two crosscaps, and block directions are
/// fixed, each by a short breadth-first search over slides inside the affected
/// blocks.
pub fn normalize_with_budget(w: &SurfaceWord, budget: usize) -> Result<(SurfaceWord, MoveTrace), SurfaceError> {
    let b = boundary_components(w)?;
    if b != 1 {
        return Err(SurfaceError::NotClosedForm { boundary: b });
    }
    let class = classify(w)?;
    let mut n = Normalizer {
        initial: w.clone(),
        word: w.clone(),
        moves: Vec::new(),
        budget,
    };
    let blocks = n.form_blocks()?;
    n.finish(blocks, class.orientable)?;
    debug_assert_eq!(n.word.relabeled(), canonical_word(class));
    let trace = MoveTrace {
        initial: n.initial,
        moves: n.moves,
        final_word: n.word.clone(),
    };
    Ok((n.word, trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    Crosscap,
    Torus,
}

impl Block {
    fn len(self) -> usize {
        match self {
            Block::Crosscap => 2,
            Block::Torus => 4,
        }
    }
}

struct Normalizer {
    initial: SurfaceWord,
    word: SurfaceWord,
    moves: Vec<SurfaceMove>,
    budget: usize,
}

impl Normalizer {
    fn apply(&mut self, mv: SurfaceMove) -> Result<(), SurfaceError> {
        if self.moves.len() >= self.budget {
            return Err(SurfaceError::NormalizationBudgetExceeded {
                budget: self.budget,
                partial: Box::new(MoveTrace {
                    initial: self.initial.clone(),
                    moves: self.moves.clone(),
                    final_word: self.word.clone(),
                }),
            });
        }
        self.word = apply_move(&self.word, &mv)?;
        self.moves.push(mv);
        Ok(())
    }

    fn slide(&mut self, at: usize, side: Side) -> Result<(), SurfaceError> {
        let o = match side {
            Side::Left => at - 1,
            Side::Right => at + 1,
        };
        let over = self.word.tokens()[o].label.clone();
        let twisted = self.word.is_twisted(&over).expect("validated word");
        self.apply(SurfaceMove::Slide {
            at,
            side,
            over,
            twisted,
        })
    }

    fn partner(&self, i: usize) -> usize {
        self.word.partner(i).expect("validated word")
    }

    fn form_blocks(&mut self) -> Result<Vec<Block>, SurfaceError> {
        let mut blocks = Vec::new();
        let mut start = 0;
        while start < self.word.len() {
            let block = if self.crosscap_at(start)? {
                Block::Crosscap
            } else {
                self.torus_at(start)?;
                Block::Torus
            };
            start += block.len();
            blocks.push(block);
        }
        Ok(blocks)
    }

    /// Builds a crosscap at `start` if the remainder has a twisted handle.
    fn crosscap_at(&mut self, start: usize) -> Result<bool, SurfaceError> {
        let found = (start..self.word.len()).find(|&k| {
            let p = self.partner(k);
            p > k && self.word.tokens()[k].sign == self.word.tokens()[p].sign
        });
        let Some(mut i) = found else {
            return Ok(false);
        };
        let mut j = self.partner(i);
        while j > i + 1 {
            // right of one arrow of a twisted handle -> right of the other
            self.slide(i + 1, Side::Left)?;
            j -= 1;
        }
        while i > start {
            // u x x -> x u' x -> x x u
            self.slide(i - 1, Side::Right)?;
            self.slide(i, Side::Left)?;
            i -= 1;
        }
        Ok(true)
    }

    /// Builds a torus block at `start` from a remainder of untwisted handles.
    fn torus_at(&mut self, start: usize) -> Result<(), SurfaceError> {
        let len = self.word.len();
        let pattern = (start..len).find_map(|p| {
            let q = self.partner(p);
            if q < p {
                return None;
            }
            (p + 1..q).find_map(|r| {
                let s = self.partner(r);
                (s > q).then_some((p, r, q, s))
            })
        });
        let Some((mut p, mut r, mut q, s)) = pattern else {
            return self.search_fallback(start);
        };
        while r > p + 1 {
            self.slide(p + 1, Side::Left)?;
            r -= 1;
        }
        while q > r + 1 {
            self.slide(r + 1, Side::Left)?;
            q -= 1;
        }
        while s > q + 1 {
            self.slide(q + 1, Side::Left)?;
            p += 1;
            q += 1;
        }
        while p > start {
            // carry the token in front of the block across all four arrows
            self.slide(p - 1, Side::Right)?;
            self.slide(p + 2, Side::Right)?;
            self.slide(p + 1, Side::Right)?;
            self.slide(p, Side::Right)?;
            p -= 1;
        }
        Ok(())
    }

    /// Unreachable for one-boundary words: an untwisted remainder without an
    /// interleaved pair would have more than one boundary circle.
    fn search_fallback(&mut self, start: usize) -> Result<(), SurfaceError> {
        let len = self.word.len() - start;
        let found = self.local_search(start, len, |seg| is_torus_block(&seg[..4.min(seg.len())]))?;
        if !found {
            return Err(SurfaceError::Inapplicable {
                mv: "normalize".into(),
                reason: format!("no interleaved handle pair in \"{}\"", self.word),
            });
        }
        Ok(())
    }

    fn finish(&mut self, mut blocks: Vec<Block>, orientable: bool) -> Result<(), SurfaceError> {
        if orientable {
            let mut start = 0;
            for _ in &blocks {
                if !is_torus_block(&self.word.tokens()[start..start + 4]) {
                    self.fix_window(start, 4, is_torus_block)?;
                }
                start += 4;
            }
            return Ok(());
        }

        if blocks == [Block::Crosscap] && self.word.tokens()[0].sign == Sign::Minus {
            return self.flip_lone_crosscap();
        }
        let mut idx = 0;
        let mut start = 0;
        while idx < blocks.len() {
            let done = blocks[idx] == Block::Crosscap && self.word.tokens()[start].sign == Sign::Plus;
            if done {
                start += 2;
                idx += 1;
                continue;
            }
            // Merge with the previous (already positive crosscap) block, or
            // with the next one at the very front.
            let (lo, hi, at) = if idx > 0 {
                (idx - 1, idx, start - 2)
            } else {
                (idx, idx + 1, start)
            };
            let len = blocks[lo].len() + blocks[hi].len();
            self.fix_window(at, len, all_positive_crosscaps)?;
            let count = len / 2;
            blocks.splice(lo..=hi, std::iter::repeat_n(Block::Crosscap, count));
            idx = lo;
            start = at;
        }
        Ok(())
    }

    /// `x- x-` on its own: borrow a cancelling handle to flip it.
    fn flip_lone_crosscap(&mut self) -> Result<(), SurfaceError> {
        let x = self.word.tokens()[0].label.clone();
        let y = self.word.fresh_label();
        self.apply(SurfaceMove::Create {
            label: y,
            at: 0,
            sign: Sign::Plus,
        })?;
        self.slide(1, Side::Right)?;
        self.slide(1, Side::Left)?;
        self.apply(SurfaceMove::Cancel {
            label: x,
            at: 2,
            sign: Sign::Plus,
        })
    }

    fn fix_window(&mut self, at: usize, len: usize, goal: fn(&[ArrowToken]) -> bool) -> Result<(), SurfaceError> {
        if self.local_search(at, len, goal)? {
            Ok(())
        } else {
            Err(SurfaceError::Inapplicable {
                mv: "normalize".into(),
                reason: format!(
                    "no slide sequence of length <= {LOCAL_DEPTH} fixes positions {}..{} of \"{}\"",
                    at + 1,
                    at + len,
                    self.word
                ),
            })
        }
    }

    /// Breadth-first search over slides confined to a closed window (every
    /// handle with an arrow in it has both arrows there). Applies the
    /// shortest sequence found and reports whether one was found.
    fn local_search(
        &mut self,
        at: usize,
        len: usize,
        goal: impl Fn(&[ArrowToken]) -> bool,
    ) -> Result<bool, SurfaceError> {
        let start = SurfaceWord::new(self.word.tokens()[at..at + len].to_vec());
        let mut parent: HashMap<SurfaceWord, Option<(SurfaceWord, SurfaceMove)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = VecDeque::from([(start, 0usize)]);
        let mut hit = None;
        while let Some((w, depth)) = queue.pop_front() {
            if goal(w.tokens()) {
                hit = Some(w);
                break;
            }
            if depth == LOCAL_DEPTH {
                continue;
            }
            for mv in slides(&w) {
                let next = apply_move(&w, &mv)?;
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next.clone(), Some((w.clone(), mv)));
                queue.push_back((next, depth + 1));
            }
        }
        let Some(mut w) = hit else {
            return Ok(false);
        };
        let mut path = Vec::new();
        while let Some(Some((prev, mv))) = parent.get(&w) {
            path.push(mv.clone());
            w = prev.clone();
        }
        for mv in path.into_iter().rev() {
            let SurfaceMove::Slide {
                at: k,
                side,
                over,
                twisted,
            } = mv
            else {
                unreachable!("local search only slides");
            };
            self.apply(SurfaceMove::Slide {
                at: k + at,
                side,
                over,
                twisted,
            })?;
        }
        Ok(true)
    }
}

/// `x+ y+ x- y-` with `x != y`.
fn is_torus_block(t: &[ArrowToken]) -> bool {
    t.len() == 4
        && t[0].label == t[2].label
        && t[1].label == t[3].label
        && t[0].label != t[1].label
        && t[0].sign == Sign::Plus
        && t[1].sign == Sign::Plus
        && t[2].sign == Sign::Minus
        && t[3].sign == Sign::Minus
}

fn all_positive_crosscaps(t: &[ArrowToken]) -> bool {
    t.len().is_multiple_of(2)
        && t.chunks(2)
            .all(|c| c[0].label == c[1].label && c[0].sign == Sign::Plus && c[1].sign == Sign::Plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceClass;

    fn w(s: &str) -> SurfaceWord {
        s.parse().unwrap()
    }

    fn check(s: &str) -> (SurfaceWord, MoveTrace) {
        let word = w(s);
        let (out, trace) = normalize(&word).unwrap();
        assert!(verify_trace(&trace), "{s}: {:?}", trace.check());
        assert_eq!(out.relabeled(), canonical_word(classify(&word).unwrap()), "{s}");
        (out, trace)
    }

    #[test]
    fn torus_plus_crosscap_becomes_three_crosscaps() {
        let (out, trace) = check("1+ 2+ 1- 2- 3+ 3+");
        assert_eq!(classify(&out).unwrap(), SurfaceClass::crosscaps(3));
        assert!(trace.moves.iter().all(SurfaceMove::is_slide));
    }

    #[test]
    fn canonical_words_are_fixed_points() {
        for c in [
            SurfaceClass::genus(0),
            SurfaceClass::genus(2),
            SurfaceClass::crosscaps(3),
        ] {
            let (out, trace) = normalize(&canonical_word(c)).unwrap();
            assert_eq!(out, canonical_word(c));
            assert!(trace.moves.is_empty());
        }
    }

    #[test]
    fn assorted_words() {
        check("b+ a+ b- a-");
        check("a- b- a+ b+");
        check("a- a-");
        check("a+ b- a+ b+");
        check("a+ b- c+ a+ c+ b+");
        check("c+ a+ b+ a- b- c+");
    }

    #[test]
    fn rejects_multiple_boundaries() {
        assert_eq!(
            normalize(&w("a+ a-")).unwrap_err(),
            SurfaceError::NotClosedForm { boundary: 2 }
        );
    }

    #[test]
    fn budget_exceeded_returns_partial_trace() {
        let err = normalize_with_budget(&w("1+ 2+ 1- 2- 3+ 3+"), 2).unwrap_err();
        let SurfaceError::NormalizationBudgetExceeded { partial, .. } = err else {
            panic!("expected budget error, got {err:?}");
        };
        assert_eq!(partial.moves.len(), 2);
        assert!(verify_trace(&partial));
    }

    #[test]
    fn trace_failures_name_the_step() {
        let (_, mut trace) = check("1+ 2+ 1- 2- 3+ 3+");
        assert_eq!(
            MoveTrace {
                initial: w("a+ a+"),
                moves: vec![],
                final_word: w("b+ b+"),
            }
            .check()
            .unwrap_err()
            .step,
            None
        );
        if let SurfaceMove::Slide { twisted, .. } = &mut trace.moves[1] {
            *twisted = !*twisted;
        }
        assert_eq!(trace.check().unwrap_err().step, Some(1));
    }
}
