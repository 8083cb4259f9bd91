use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{ArrowToken, Sign, SurfaceError, SurfaceWord};

/// Which way a rotation carries an end token across `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// First token wraps around to the end.
    Left,
    /// Last token wraps around to the front.
    Right,
}

/// Which neighbour of the moving token is the arrow it slides across.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Elementary moves on arrow words. Positions are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceMove {
    Rotate(Direction),
    /// Slide the attaching region at `at` across the handle `over`, whose
    /// arrow is the immediate neighbour on `side`. `twisted` records the
    /// over-handle's twistedness and must match the word.
    Slide {
        at: usize,
        side: Side,
        over: String,
        twisted: bool,
    },
    /// Delete the adjacent opposite-sign pair of `label` starting at `at`.
    Cancel {
        label: String,
        at: usize,
        sign: Sign,
    },
    /// Insert `label(sign) label(-sign)` at position `at`.
    Create {
        label: String,
        at: usize,
        sign: Sign,
    },
}

impl SurfaceMove {
    fn inapplicable(&self, reason: impl Into<String>) -> SurfaceError {
        SurfaceError::Inapplicable {
            mv: self.to_string(),
            reason: reason.into(),
        }
    }

    /// The move undoing `self` when applied to `before`.
    pub fn inverse(&self, before: &SurfaceWord) -> Result<SurfaceMove, SurfaceError> {
        Ok(match self {
            SurfaceMove::Rotate(Direction::Left) => SurfaceMove::Rotate(Direction::Right),
            SurfaceMove::Rotate(Direction::Right) => SurfaceMove::Rotate(Direction::Left),
            SurfaceMove::Slide { over, twisted, .. } => {
                let (_, at, side) = slide(before, self)?;
                SurfaceMove::Slide {
                    at,
                    side,
                    over: over.clone(),
                    twisted: *twisted,
                }
            }
            SurfaceMove::Cancel { label, at, sign } => SurfaceMove::Create {
                label: label.clone(),
                at: *at,
                sign: *sign,
            },
            SurfaceMove::Create { label, at, sign } => SurfaceMove::Cancel {
                label: label.clone(),
                at: *at,
                sign: *sign,
            },
        })
    }

    pub fn is_slide(&self) -> bool {
        matches!(self, SurfaceMove::Slide { .. })
    }
}

/// Applies one move, checking every precondition.
///
/// Slides follow the band: an arrow adjacent to the back (or front) of one
/// attaching arrow of the over-handle reappears at the back (or front) of the
/// partner arrow. Across an untwisted handle that lands on the mirrored side
/// and keeps its direction; across a twisted handle it lands on the same side
/// and its direction flips.
pub fn apply_move(w: &SurfaceWord, m: &SurfaceMove) -> Result<SurfaceWord, SurfaceError> {
    w.validate()?;
    let mut tokens = w.tokens().to_vec();
    match m {
        SurfaceMove::Rotate(dir) => {
            if tokens.is_empty() {
                return Err(m.inapplicable("cannot rotate the empty word"));
            }
            match dir {
                Direction::Left => tokens.rotate_left(1),
                Direction::Right => tokens.rotate_right(1),
            }
            Ok(SurfaceWord::new(tokens))
        }
        SurfaceMove::Slide { .. } => slide(w, m).map(|(word, _, _)| word),
        SurfaceMove::Cancel { label, at, sign } => {
            let ok = tokens.get(*at).is_some_and(|t| &t.label == label && t.sign == *sign)
                && tokens
                    .get(at + 1)
                    .is_some_and(|t| &t.label == label && t.sign == sign.flip());
            if !ok {
                return Err(m.inapplicable(format!(
                    "expected {label}{} {label}{} at position {}",
                    sign.symbol(),
                    sign.flip().symbol(),
                    at + 1
                )));
            }
            tokens.drain(*at..at + 2);
            Ok(SurfaceWord::new(tokens))
        }
        SurfaceMove::Create { label, at, sign } => {
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(m.inapplicable("label must be alphanumeric"));
            }
            if w.contains_label(label) {
                return Err(m.inapplicable(format!("label {label} already in use")));
            }
            if *at > tokens.len() {
                return Err(m.inapplicable(format!("position {} past end of word", at + 1)));
            }
            tokens.splice(
                *at..*at,
                [
                    ArrowToken::new(label.clone(), *sign),
                    ArrowToken::new(label.clone(), sign.flip()),
                ],
            );
            Ok(SurfaceWord::new(tokens))
        }
    }
}

/// Returns the slid word plus the new position of the moving token and the
/// side its over-handle arrow now sits on.
fn slide(w: &SurfaceWord, m: &SurfaceMove) -> Result<(SurfaceWord, usize, Side), SurfaceError> {
    let SurfaceMove::Slide {
        at,
        side,
        over,
        twisted,
    } = m
    else {
        unreachable!("slide called with a non-slide move");
    };
    let (at, side) = (*at, *side);
    let tokens = w.tokens();
    let moving = tokens
        .get(at)
        .ok_or_else(|| m.inapplicable(format!("no token at position {}", at + 1)))?;
    let o = match side {
        Side::Left => at.checked_sub(1),
        Side::Right => Some(at + 1).filter(|&k| k < tokens.len()),
    }
    .ok_or_else(|| m.inapplicable("no neighbouring arrow on that side"))?;
    if &tokens[o].label != over {
        return Err(m.inapplicable(format!("neighbour is {}, not an arrow of {over}", tokens[o])));
    }
    if &moving.label == over {
        return Err(m.inapplicable("a handle cannot slide across itself"));
    }
    let partner = w
        .partner(o)
        .ok_or_else(|| m.inapplicable(format!("handle {over} has no partner arrow")))?;
    let actual_twist = tokens[o].sign == tokens[partner].sign;
    if actual_twist != *twisted {
        return Err(m.inapplicable(format!(
            "handle {over} is {}",
            if actual_twist { "twisted" } else { "untwisted" }
        )));
    }

    // Side of `o` the moving token occupies, and the side of the partner it lands on.
    let from_side = side.opposite();
    let to_side = if actual_twist { from_side } else { from_side.opposite() };
    let sign = if actual_twist { moving.sign.flip() } else { moving.sign };

    let mut rest: Vec<ArrowToken> = tokens.to_vec();
    let token = rest.remove(at);
    let partner = if partner > at { partner - 1 } else { partner };
    let insert = match to_side {
        Side::Left => partner,
        Side::Right => partner + 1,
    };
    rest.insert(insert, ArrowToken::new(token.label, sign));
    Ok((SurfaceWord::new(rest), insert, to_side.opposite()))
}

/// Every move applicable to `w`, in a fixed order: rotations, slides,
/// cancellations, then creations of one fresh label at every position.
pub fn applicable_moves(w: &SurfaceWord) -> Vec<SurfaceMove> {
    let mut out = Vec::new();
    if w.validate().is_err() {
        return out;
    }
    if !w.is_empty() {
        out.push(SurfaceMove::Rotate(Direction::Left));
        out.push(SurfaceMove::Rotate(Direction::Right));
    }
    out.extend(slides(w));
    let tokens = w.tokens();
    for at in 0..tokens.len().saturating_sub(1) {
        let (a, b) = (&tokens[at], &tokens[at + 1]);
        if a.label == b.label && a.sign != b.sign {
            out.push(SurfaceMove::Cancel {
                label: a.label.clone(),
                at,
                sign: a.sign,
            });
        }
    }
    let label = w.fresh_label();
    for at in 0..=tokens.len() {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push(SurfaceMove::Create {
                label: label.clone(),
                at,
                sign,
            });
        }
    }
    out
}

/// All applicable slides of a valid word.
pub(crate) fn slides(w: &SurfaceWord) -> Vec<SurfaceMove> {
    let tokens = w.tokens();
    let mut out = Vec::new();
    for at in 0..tokens.len() {
        for side in [Side::Left, Side::Right] {
            let o = match side {
                Side::Left => at.checked_sub(1),
                Side::Right => Some(at + 1).filter(|&k| k < tokens.len()),
            };
            let Some(o) = o else { continue };
            if tokens[o].label == tokens[at].label {
                continue;
            }
            let Some(p) = w.partner(o) else { continue };
            out.push(SurfaceMove::Slide {
                at,
                side,
                over: tokens[o].label.clone(),
                twisted: tokens[o].sign == tokens[p].sign,
            });
        }
    }
    out
}

/// Trace syntax with 1-based positions, e.g. `slide at=3 side=left over=a kind=twisted`.
impl fmt::Display for SurfaceMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceMove::Rotate(d) => write!(
                f,
                "rotate dir={}",
                match d {
                    Direction::Left => "left",
                    Direction::Right => "right",
                }
            ),
            SurfaceMove::Slide {
                at,
                side,
                over,
                twisted,
            } => write!(
                f,
                "slide at={} side={} over={} kind={}",
                at + 1,
                match side {
                    Side::Left => "left",
                    Side::Right => "right",
                },
                over,
                if *twisted { "twisted" } else { "untwisted" }
            ),
            SurfaceMove::Cancel { label, at, sign } => {
                write!(f, "cancel label={label} at={} sign={}", at + 1, sign.symbol())
            }
            SurfaceMove::Create { label, at, sign } => {
                write!(f, "create label={label} at={} sign={}", at + 1, sign.symbol())
            }
        }
    }
}

impl FromStr for SurfaceMove {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| SurfaceError::Parse(msg);
        let mut parts = s.split_whitespace();
        let kind = parts.next().ok_or_else(|| bad("empty move".into()))?;
        let mut params = BTreeMap::new();
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| bad(format!("parameter {p:?} is not key=value")))?;
            params.insert(k, v);
        }
        let get = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| bad(format!("{kind} needs parameter {k}")))
        };
        let pos = |k: &str| -> Result<usize, SurfaceError> {
            let v = get(k)?;
            match v.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n - 1),
                _ => Err(bad(format!("{k}={v} is not a 1-based position"))),
            }
        };
        let sign = |k: &str| -> Result<Sign, SurfaceError> {
            let v = get(k)?;
            let mut c = v.chars();
            match (c.next().and_then(Sign::from_symbol), c.next()) {
                (Some(s), None) => Ok(s),
                _ => Err(bad(format!("{k}={v} is not '+' or '-'"))),
            }
        };
        let side = |v: &str| match v {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(bad(format!("side {v:?} is not left/right"))),
        };
        match kind {
            "rotate" => match get("dir")? {
                "left" => Ok(SurfaceMove::Rotate(Direction::Left)),
                "right" => Ok(SurfaceMove::Rotate(Direction::Right)),
                v => Err(bad(format!("rotate dir {v:?} is not left/right"))),
            },
            "slide" => Ok(SurfaceMove::Slide {
                at: pos("at")?,
                side: side(get("side")?)?,
                over: get("over")?.to_string(),
                twisted: match get("kind")? {
                    "twisted" => true,
                    "untwisted" => false,
                    v => return Err(bad(format!("slide kind {v:?}"))),
                },
            }),
            "cancel" => Ok(SurfaceMove::Cancel {
                label: get("label")?.to_string(),
                at: pos("at")?,
                sign: sign("sign")?,
            }),
            "create" => Ok(SurfaceMove::Create {
                label: get("label")?.to_string(),
                at: pos("at")?,
                sign: sign("sign")?,
            }),
            other => Err(bad(format!("unknown surface move {other:?}"))),
        }
    }
}
