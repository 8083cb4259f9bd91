//! Textual trace files and the independent checker.
//!
//! ```text
//! TRACE surface line=4 name=w
//! INITIAL 1+ 2+ 1- 2- 3+ 3+
//! MOVE slide at=3 side=left over=2 kind=untwisted
//! FINAL ...
//! END
//! ```
//!
//! Congruence traces use `TRACE congruence`, matrix literals and the moves
//! `add i= j= eps=`, `swap i= j=`, `negate i=`, `append sign=`, `remove i=`.
//! Positions and indices are 1-based. The checker replays every move through
//! the public move application functions and nothing else.

use std::fmt::{self, Write as _};

use thiserror::Error;

use handlecalc::algebra::{CongruenceCert, CongruenceMove, IntMatrix};
use handlecalc::surface::{apply_move, MoveTrace, SurfaceMove, SurfaceWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceBody {
    Surface(MoveTrace),
    Congruence(CongruenceCert),
}

/// A trace emitted while running a script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    /// Script line of the statement that produced it.
    pub line: usize,
    pub name: String,
    pub body: TraceBody,
}

impl TraceRecord {
    pub fn move_count(&self) -> usize {
        match &self.body {
            TraceBody::Surface(t) => t.moves.len(),
            TraceBody::Congruence(c) => c.moves.len(),
        }
    }
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            TraceBody::Surface(t) => {
                writeln!(f, "TRACE surface line={} name={}", self.line, self.name)?;
                writeln!(f, "INITIAL {}", t.initial)?;
                for m in &t.moves {
                    writeln!(f, "MOVE {m}")?;
                }
                writeln!(f, "FINAL {}", t.final_word)?;
            }
            TraceBody::Congruence(c) => {
                writeln!(f, "TRACE congruence line={} name={}", self.line, self.name)?;
                writeln!(f, "INITIAL {}", c.source)?;
                for m in &c.moves {
                    writeln!(f, "MOVE {m}")?;
                }
                writeln!(f, "FINAL {}", c.target)?;
            }
        }
        writeln!(f, "END")
    }
}

pub fn render_traces(traces: &[TraceRecord]) -> String {
    let mut out = String::new();
    for t in traces {
        write!(out, "{t}").expect("writing to a string");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Surface,
    Congruence,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Surface => "surface",
            TraceKind::Congruence => "congruence",
        })
    }
}

/// A trace as read from a file. Moves stay as text so that a malformed move
/// is reported as a failure at its step rather than as a file error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTrace {
    pub kind: TraceKind,
    pub initial: String,
    pub moves: Vec<String>,
    pub final_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("trace file line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

pub fn parse_traces(text: &str) -> Result<Vec<RawTrace>, TraceParseError> {
    let err = |line: usize, message: &str| TraceParseError {
        line,
        message: message.to_string(),
    };
    let mut out = Vec::new();
    let mut current: Option<(RawTrace, bool, bool)> = None;
    let mut last = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last = line;
        let l = raw.trim_end();
        if l.trim().is_empty() {
            continue;
        }
        let (head, rest) = l.split_once(' ').unwrap_or((l, ""));
        match (head, current.as_mut()) {
            ("TRACE", None) => {
                let kind = match rest.split_whitespace().next() {
                    Some("surface") => TraceKind::Surface,
                    Some("congruence") => TraceKind::Congruence,
                    _ => return Err(err(line, "TRACE must name `surface` or `congruence`")),
                };
                current = Some((
                    RawTrace {
                        kind,
                        initial: String::new(),
                        moves: Vec::new(),
                        final_text: String::new(),
                    },
                    false,
                    false,
                ));
            }
            ("TRACE", Some(_)) => return Err(err(line, "TRACE inside an unfinished trace")),
            (_, None) => return Err(err(line, "expected TRACE")),
            ("INITIAL", Some((t, seen_initial, seen_final))) => {
                if *seen_initial || *seen_final || !t.moves.is_empty() {
                    return Err(err(line, "INITIAL must come first and only once"));
                }
                t.initial = rest.trim().to_string();
                *seen_initial = true;
            }
            ("MOVE", Some((t, seen_initial, seen_final))) => {
                if !*seen_initial || *seen_final {
                    return Err(err(line, "MOVE must come between INITIAL and FINAL"));
                }
                t.moves.push(rest.trim().to_string());
            }
            ("FINAL", Some((t, seen_initial, seen_final))) => {
                if !*seen_initial || *seen_final {
                    return Err(err(line, "FINAL must follow INITIAL, once"));
                }
                t.final_text = rest.trim().to_string();
                *seen_final = true;
            }
            ("END", Some((_, _, seen_final))) => {
                if !*seen_final {
                    return Err(err(line, "END before FINAL"));
                }
                out.push(current.take().expect("open trace").0);
            }
            (other, Some(_)) => return Err(err(line, &format!("unknown directive {other:?}"))),
        }
    }
    if current.is_some() {
        return Err(err(last, "trace not closed with END"));
    }
    Ok(out)
}

/// Result of replaying one trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Accepted {
        moves: usize,
    },
    /// `step` is 1-based; `None` means every move applied but the replay
    /// did not end at the expected final object.
    Rejected {
        step: Option<usize>,
        reason: String,
    },
}

impl CheckOutcome {
    pub fn accepted(&self) -> bool {
        matches!(self, CheckOutcome::Accepted { .. })
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Accepted { moves } => write!(f, "accepted ({moves} moves)"),
            CheckOutcome::Rejected { step: Some(s), reason } => write!(f, "rejected at step {s}: {reason}"),
            CheckOutcome::Rejected { step: None, reason } => write!(f, "rejected: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    File(#[from] TraceParseError),
    #[error("cannot read {what} {text:?}: {reason}")]
    Endpoint {
        what: &'static str,
        text: String,
        reason: String,
    },
}

fn rejected(step: usize, reason: impl fmt::Display) -> CheckOutcome {
    CheckOutcome::Rejected {
        step: Some(step + 1),
        reason: reason.to_string(),
    }
}

/// Replays `t` from `initial` (default: its INITIAL line) and compares with
/// `final_text` (default: its FINAL line).
pub fn check_raw(t: &RawTrace, initial: Option<&str>, final_text: Option<&str>) -> Result<CheckOutcome, CheckError> {
    let initial = initial.unwrap_or(&t.initial);
    let final_text = final_text.unwrap_or(&t.final_text);
    let endpoint = |what: &'static str, text: &str, reason: String| CheckError::Endpoint {
        what,
        text: text.to_string(),
        reason,
    };
    match t.kind {
        TraceKind::Surface => {
            let start: SurfaceWord = initial
                .parse()
                .map_err(|e| endpoint("initial word", initial, format!("{e}")))?;
            let goal: SurfaceWord = final_text
                .parse()
                .map_err(|e| endpoint("final word", final_text, format!("{e}")))?;
            let mut w = start;
            for (step, text) in t.moves.iter().enumerate() {
                let mv: SurfaceMove = match text.parse() {
                    Ok(m) => m,
                    Err(e) => return Ok(rejected(step, e)),
                };
                w = match apply_move(&w, &mv) {
                    Ok(next) => next,
                    Err(e) => return Ok(rejected(step, e)),
                };
            }
            if w != goal {
                return Ok(CheckOutcome::Rejected {
                    step: None,
                    reason: format!("replay ends at \"{w}\", expected \"{goal}\""),
                });
            }
        }
        TraceKind::Congruence => {
            let start: IntMatrix = initial
                .parse()
                .map_err(|e| endpoint("initial matrix", initial, format!("{e}")))?;
            let goal: IntMatrix = final_text
                .parse()
                .map_err(|e| endpoint("final matrix", final_text, format!("{e}")))?;
            let mut m = start;
            for (step, text) in t.moves.iter().enumerate() {
                let mv: CongruenceMove = match text.parse() {
                    Ok(mv) => mv,
                    Err(e) => return Ok(rejected(step, e)),
                };
                m = match mv.apply(&m) {
                    Ok(next) => next,
                    Err(e) => return Ok(rejected(step, e)),
                };
            }
            if m != goal {
                return Ok(CheckOutcome::Rejected {
                    step: None,
                    reason: format!("replay ends at {m}, expected {goal}"),
                });
            }
        }
    }
    Ok(CheckOutcome::Accepted { moves: t.moves.len() })
}

/// Checks the single trace in `text`, or every trace when no endpoints are
/// given. Endpoints require exactly one trace in the file.
pub fn check_trace(
    text: &str,
    initial: Option<&str>,
    final_text: Option<&str>,
) -> Result<Vec<CheckOutcome>, CheckError> {
    let traces = parse_traces(text)?;
    if (initial.is_some() || final_text.is_some()) && traces.len() != 1 {
        return Err(CheckError::File(TraceParseError {
            line: 0,
            message: format!(
                "explicit endpoints need exactly one trace, the file has {}",
                traces.len()
            ),
        }));
    }
    traces.iter().map(|t| check_raw(t, initial, final_text)).collect()
}
