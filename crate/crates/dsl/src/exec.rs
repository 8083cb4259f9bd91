//! Script execution.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use handlecalc::algebra::congruence_search;
use handlecalc::heegaard::{h1, pi1_presentation, HeegaardDiagram};
use handlecalc::kirby::{
    blow_down, blow_up, boundary_h1, closed_invariants, handle_slide, intersection_form, KirbyDiagram,
};
use handlecalc::legendrian::{classical_invariants, stabilize_component, to_kirby, FrontDiagram};
use handlecalc::openbook::{five_invariants, identify_known, OpenBook};
use handlecalc::surface::{
    apply_move, boundary_components, canonical_word, classify, normalize_with_budget, MoveTrace, Side, Sign,
    SurfaceError, SurfaceMove, SurfaceWord,
};

use crate::ast::{Assertion, CompareOp, Ident, KirbySource, Operand, Query, QueryKind, Script, Statement};
use crate::trace::{TraceBody, TraceRecord};

pub const DEFAULT_MAX_STEPS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecOptions {
    /// Move budget for `normalize` and state budget for `cert` statements
    /// without an explicit `budget`.
    pub max_steps: usize,
}

impl Default for ExecOptions {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Assertion,
    Name,
    Unsupported,
    Budget,
    Error,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Assertion => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureKind::Assertion => "assertion failed",
            FailureKind::Name => "name error",
            FailureKind::Unsupported => "unsupported",
            FailureKind::Budget => "budget exceeded",
            FailureKind::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub line: usize,
    pub column: usize,
    pub kind: FailureKind,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}: {}",
            self.line, self.column, self.kind, self.message
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub line: usize,
    pub statement: String,
    pub result: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub entries: Vec<ReportEntry>,
    pub traces: Vec<TraceRecord>,
    pub failure: Option<Failure>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.failure.as_ref().map_or(0, |f| f.kind.exit_code())
    }

    /// The text printed by `run`: one line per statement with a result, then
    /// a status line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            writeln!(out, "{:>4}  {}  =>  {}", e.line, e.statement, e.result).expect("string write");
        }
        match &self.failure {
            None => writeln!(out, "status: ok ({} traces)", self.traces.len()),
            Some(f) => writeln!(out, "status: {} (exit {})", f.kind, f.kind.exit_code()),
        }
        .expect("string write");
        out
    }
}

#[derive(Clone, Debug)]
enum Value {
    Surface(SurfaceWord),
    Heegaard(HeegaardDiagram),
    Kirby(KirbyDiagram),
    Front(FrontDiagram),
    OpenBook(OpenBook),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Surface(_) => "surface",
            Value::Heegaard(_) => "heegaard",
            Value::Kirby(_) => "kirby",
            Value::Front(_) => "front",
            Value::OpenBook(_) => "openbook",
        }
    }
}

struct Stop {
    column: usize,
    kind: FailureKind,
    message: String,
}

impl Stop {
    fn new(column: usize, kind: FailureKind, message: impl Into<String>) -> Self {
        Self {
            column,
            kind,
            message: message.into(),
        }
    }
}

type Step<T> = Result<T, Stop>;

struct Recording {
    initial: SurfaceWord,
    moves: Vec<SurfaceMove>,
}

struct Machine {
    options: ExecOptions,
    env: HashMap<String, Value>,
    recordings: HashMap<String, Recording>,
    report: RunReport,
    line: usize,
}

/// Kinds each statement accepts, checked before anything runs.
fn expected_kinds(s: &Statement) -> Vec<(&Ident, &'static [&'static str])> {
    const SURFACE: &[&str] = &["surface"];
    const ANY: &[&str] = &["surface", "heegaard", "kirby", "front", "openbook"];
    fn query(q: &Query) -> (&Ident, &'static [&'static str]) {
        let kinds: &'static [&'static str] = match q.kind {
            QueryKind::Class => &["surface"],
            QueryKind::H1 => &["heegaard", "kirby"],
            QueryKind::Tb => &["front"],
            QueryKind::Invariants => &["surface", "kirby", "front", "openbook"],
            QueryKind::Identify => &["openbook"],
            QueryKind::Pi1 => &["heegaard"],
            QueryKind::Form => &["kirby"],
            QueryKind::Show => ANY,
        };
        (&q.target, kinds)
    }
    match s {
        Statement::Surface { .. } | Statement::Heegaard { .. } | Statement::Front { .. } => vec![],
        Statement::Kirby { source, .. } => match source {
            KirbySource::Literal { .. } => vec![],
            KirbySource::Fronts(fs) => fs.iter().map(|f| (f, &["front"] as &[&str])).collect(),
        },
        Statement::OpenBook { page, .. } => vec![(page, &["kirby"])],
        Statement::Slide { target, .. } => vec![(target, &["surface", "kirby"])],
        Statement::Rotate { target, .. }
        | Statement::Cancel { target, .. }
        | Statement::Create { target, .. }
        | Statement::Normalize { target }
        | Statement::TraceBegin { target }
        | Statement::TraceEnd { target } => vec![(target, SURFACE)],
        Statement::Stabilize { target, .. } => vec![(target, &["front"])],
        Statement::BlowUp { target, .. } | Statement::BlowDown { target, .. } => vec![(target, &["kirby"])],
        Statement::Cert { left, right, .. } => vec![(left, &["kirby"]), (right, &["kirby"])],
        Statement::Query(q) => vec![query(q)],
        Statement::Assert(a) => match a {
            Assertion::Compare { left, right, .. } => {
                let mut v = vec![query(left)];
                if let Operand::Query(q) = right {
                    v.push(query(q));
                }
                v
            }
            Assertion::Canonical(n) => vec![(n, SURFACE)],
            Assertion::Cert { left, right, .. } => vec![(left, &["kirby"]), (right, &["kirby"])],
        },
    }
}

fn defined(s: &Statement) -> Option<(&Ident, &'static str)> {
    match s {
        Statement::Surface { name, .. } => Some((name, "surface")),
        Statement::Heegaard { name, .. } => Some((name, "heegaard")),
        Statement::Kirby { name, .. } => Some((name, "kirby")),
        Statement::Front { name, .. } => Some((name, "front")),
        Statement::OpenBook { name, .. } => Some((name, "openbook")),
        _ => None,
    }
}

/// Checks that every name is defined before use and has a suitable kind.
pub fn resolve(script: &Script) -> Result<(), Failure> {
    let mut kinds: HashMap<&str, &'static str> = HashMap::new();
    for located in &script.statements {
        for (ident, allowed) in expected_kinds(&located.statement) {
            let fail = |message: String| Failure {
                line: located.line,
                column: ident.column,
                kind: FailureKind::Name,
                message,
            };
            match kinds.get(ident.name.as_str()) {
                None => return Err(fail(format!("`{}` is not defined", ident.name))),
                Some(k) if !allowed.contains(k) => {
                    return Err(fail(format!(
                        "`{}` is a {k}; expected {}",
                        ident.name,
                        allowed.join(" or ")
                    )))
                }
                Some(_) => {}
            }
        }
        if let Some((name, kind)) = defined(&located.statement) {
            kinds.insert(&name.name, kind);
        }
    }
    Ok(())
}

/// Runs the statements in order, stopping at the first failure.
pub fn exec_script(script: &Script, options: &ExecOptions) -> RunReport {
    let mut m = Machine {
        options: *options,
        env: HashMap::new(),
        recordings: HashMap::new(),
        report: RunReport::default(),
        line: 0,
    };
    if let Err(f) = resolve(script) {
        m.report.failure = Some(f);
        return m.report;
    }
    for located in &script.statements {
        m.line = located.line;
        if let Err(stop) = m.run(&located.statement) {
            m.report.failure = Some(Failure {
                line: located.line,
                column: if stop.column == 0 { located.column } else { stop.column },
                kind: stop.kind,
                message: stop.message,
            });
            break;
        }
    }
    m.report
}

fn sign_i8(s: Sign) -> i8 {
    match s {
        Sign::Plus => 1,
        Sign::Minus => -1,
    }
}

fn error(e: impl fmt::Display) -> Stop {
    Stop::new(0, FailureKind::Error, e.to_string())
}

impl Machine {
    fn get(&self, id: &Ident) -> &Value {
        self.env.get(&id.name).expect("names resolved before execution")
    }

    fn surface(&self, id: &Ident) -> SurfaceWord {
        match self.get(id) {
            Value::Surface(w) => w.clone(),
            _ => unreachable!("kinds resolved"),
        }
    }

    fn kirby(&self, id: &Ident) -> KirbyDiagram {
        match self.get(id) {
            Value::Kirby(k) => k.clone(),
            _ => unreachable!("kinds resolved"),
        }
    }

    fn emit(&mut self, statement: &Statement, result: impl Into<String>) {
        self.report.entries.push(ReportEntry {
            line: self.line,
            statement: statement.to_string(),
            result: result.into(),
        });
    }

    fn set_surface(&mut self, id: &Ident, w: SurfaceWord, moves: &[SurfaceMove]) {
        if let Some(r) = self.recordings.get_mut(&id.name) {
            r.moves.extend_from_slice(moves);
        }
        self.env.insert(id.name.clone(), Value::Surface(w));
    }

    fn surface_move(&mut self, id: &Ident, mv: SurfaceMove) -> Step<SurfaceWord> {
        let w = self.surface(id);
        let next = apply_move(&w, &mv).map_err(error)?;
        self.set_surface(id, next.clone(), &[mv]);
        Ok(next)
    }

    fn run(&mut self, s: &Statement) -> Step<()> {
        match s {
            Statement::Surface { name, word } => {
                self.recordings.remove(&name.name);
                self.env.insert(name.name.clone(), Value::Surface(word.clone()));
            }
            Statement::Heegaard { name, diagram } => {
                self.env.insert(name.name.clone(), Value::Heegaard(diagram.clone()));
            }
            Statement::Kirby { name, source } => {
                let d = match source {
                    KirbySource::Literal {
                        one_handles,
                        linking,
                        incidence,
                    } => KirbyDiagram::new(*one_handles, linking.clone(), incidence.clone()).map_err(error)?,
                    KirbySource::Fronts(ids) => {
                        let fronts: Vec<FrontDiagram> = ids
                            .iter()
                            .map(|i| match self.get(i) {
                                Value::Front(f) => f.clone(),
                                _ => unreachable!("kinds resolved"),
                            })
                            .collect();
                        let d = to_kirby(&fronts).map_err(error)?;
                        self.emit(s, d.to_string());
                        d
                    }
                };
                self.env.insert(name.name.clone(), Value::Kirby(d));
            }
            Statement::Front { name, front } => {
                handlecalc::legendrian::validate_front(front).map_err(error)?;
                self.env.insert(name.name.clone(), Value::Front(front.clone()));
            }
            Statement::OpenBook { name, page } => {
                let ob = OpenBook::new(self.kirby(page));
                self.env.insert(name.name.clone(), Value::OpenBook(ob));
            }
            Statement::Slide {
                target,
                at,
                over,
                side,
                sign,
            } => match self.get(target).clone() {
                Value::Surface(w) => {
                    if sign.is_some() {
                        return Err(Stop::new(0, FailureKind::Unsupported, "surface slides take no sign"));
                    }
                    let mv = self.surface_slide(&w, *at - 1, over, *side)?;
                    let next = self.surface_move(target, mv)?;
                    self.emit(s, next.to_string());
                }
                Value::Kirby(d) => {
                    if side.is_some() {
                        return Err(Stop::new(0, FailureKind::Unsupported, "Kirby slides take no side"));
                    }
                    let j: usize = match over.parse::<usize>() {
                        Ok(j) if j >= 1 => j - 1,
                        _ => return Err(error(format!("`{over}` is not a 1-based handle index"))),
                    };
                    let eps = sign.map_or(1, sign_i8);
                    let next = handle_slide(&d, *at - 1, j, eps).map_err(error)?;
                    self.emit(s, next.to_string());
                    self.env.insert(target.name.clone(), Value::Kirby(next));
                }
                _ => unreachable!("kinds resolved"),
            },
            Statement::Rotate { target, direction } => {
                let next = self.surface_move(target, SurfaceMove::Rotate(*direction))?;
                self.emit(s, next.to_string());
            }
            Statement::Cancel { target, label } => {
                let w = self.surface(target);
                let Some((i, _)) = w.positions(label) else {
                    return Err(error(format!("no handle `{label}` in \"{w}\"")));
                };
                let mv = SurfaceMove::Cancel {
                    label: label.clone(),
                    at: i,
                    sign: w.tokens()[i].sign,
                };
                let next = self.surface_move(target, mv)?;
                self.emit(s, next.to_string());
            }
            Statement::Create {
                target,
                label,
                at,
                sign,
            } => {
                let mv = SurfaceMove::Create {
                    label: label.clone(),
                    at: *at - 1,
                    sign: *sign,
                };
                let next = self.surface_move(target, mv)?;
                self.emit(s, next.to_string());
            }
            Statement::Normalize { target } => {
                let w = self.surface(target);
                let (out, trace) = match normalize_with_budget(&w, self.options.max_steps) {
                    Ok(r) => r,
                    Err(SurfaceError::NormalizationBudgetExceeded { budget, .. }) => {
                        return Err(Stop::new(
                            0,
                            FailureKind::Budget,
                            format!("normalization needs more than {budget} moves"),
                        ))
                    }
                    Err(e @ SurfaceError::NotClosedForm { .. }) => {
                        return Err(Stop::new(0, FailureKind::Unsupported, e.to_string()))
                    }
                    Err(e) => return Err(error(e)),
                };
                self.emit(s, format!("{out} ({} moves)", trace.moves.len()));
                self.set_surface(target, out, &trace.moves);
                self.report.traces.push(TraceRecord {
                    line: self.line,
                    name: target.name.clone(),
                    body: TraceBody::Surface(trace),
                });
            }
            Statement::Stabilize {
                target,
                sign,
                component,
            } => {
                let Value::Front(f) = self.get(target).clone() else {
                    unreachable!("kinds resolved")
                };
                let next = stabilize_component(&f, component.map_or(0, |c| c - 1), sign_i8(*sign)).map_err(error)?;
                self.emit(s, next.to_string());
                self.env.insert(target.name.clone(), Value::Front(next));
            }
            Statement::BlowUp { target, sign } => {
                let next = blow_up(&self.kirby(target), sign_i8(*sign));
                self.emit(s, next.to_string());
                self.env.insert(target.name.clone(), Value::Kirby(next));
            }
            Statement::BlowDown { target, index } => {
                let next = blow_down(&self.kirby(target), *index - 1).map_err(error)?;
                self.emit(s, next.to_string());
                self.env.insert(target.name.clone(), Value::Kirby(next));
            }
            Statement::Cert { left, right, budget } => {
                let n = self.certificate(left, right, *budget)?;
                self.emit(s, format!("certificate with {n} moves"));
            }
            Statement::Query(q) => {
                let v = self.query(q)?;
                self.emit(s, v);
            }
            Statement::Assert(a) => {
                let result = self.assertion(a)?;
                self.emit(s, result);
            }
            Statement::TraceBegin { target } => {
                let initial = self.surface(target);
                self.recordings.insert(
                    target.name.clone(),
                    Recording {
                        initial,
                        moves: Vec::new(),
                    },
                );
                self.emit(s, "recording");
            }
            Statement::TraceEnd { target } => {
                let Some(rec) = self.recordings.remove(&target.name) else {
                    return Err(error(format!("no trace is being recorded for `{target}`")));
                };
                let trace = MoveTrace {
                    initial: rec.initial,
                    final_word: self.surface(target),
                    moves: rec.moves,
                };
                self.emit(s, format!("{} moves", trace.moves.len()));
                self.report.traces.push(TraceRecord {
                    line: self.line,
                    name: target.name.clone(),
                    body: TraceBody::Surface(trace),
                });
            }
        }
        Ok(())
    }

    /// Resolves `slide w AT over LABEL`: the over-arrow is whichever neighbour
    /// of position `at` carries `LABEL`.
    fn surface_slide(&self, w: &SurfaceWord, at: usize, over: &str, side: Option<Side>) -> Step<SurfaceMove> {
        let toks = w.tokens();
        if at >= toks.len() {
            return Err(error(format!("position {} is outside \"{w}\"", at + 1)));
        }
        let left = at > 0 && toks[at - 1].label == over;
        let right = at + 1 < toks.len() && toks[at + 1].label == over;
        let side = match (side, left, right) {
            (Some(s), _, _) => s,
            (None, true, false) => Side::Left,
            (None, false, true) => Side::Right,
            (None, true, true) => {
                return Err(error(format!(
                    "both neighbours of position {} carry `{over}`; add `side left` or `side right`",
                    at + 1
                )))
            }
            (None, false, false) => {
                return Err(error(format!(
                    "position {} is not next to an arrow of `{over}`",
                    at + 1
                )))
            }
        };
        let twisted = w
            .is_twisted(over)
            .ok_or_else(|| error(format!("no handle `{over}` in \"{w}\"")))?;
        Ok(SurfaceMove::Slide {
            at,
            side,
            over: over.to_string(),
            twisted,
        })
    }

    fn certificate(&mut self, left: &Ident, right: &Ident, budget: Option<usize>) -> Step<usize> {
        let a = intersection_form(&self.kirby(left))
            .map_err(|e| Stop::new(left.column, FailureKind::Unsupported, e.to_string()))?;
        let b = intersection_form(&self.kirby(right))
            .map_err(|e| Stop::new(right.column, FailureKind::Unsupported, e.to_string()))?;
        let budget = budget.unwrap_or(self.options.max_steps);
        match congruence_search(&a, &b, budget).map_err(error)? {
            Some(cert) => {
                if !cert.verify() {
                    return Err(Stop::new(0, FailureKind::Assertion, "certificate does not replay"));
                }
                let n = cert.moves.len();
                self.report.traces.push(TraceRecord {
                    line: self.line,
                    name: format!("{left}~~{right}"),
                    body: TraceBody::Congruence(cert),
                });
                Ok(n)
            }
            None => Err(Stop::new(
                0,
                FailureKind::Budget,
                format!("no certificate for {left} ~~ {right} within {budget} states (inconclusive)"),
            )),
        }
    }

    fn query(&self, q: &Query) -> Step<String> {
        let v = self.get(&q.target);
        Ok(match (q.kind, v) {
            (QueryKind::Class, Value::Surface(w)) => classify(w).map_err(error)?.to_string(),
            (QueryKind::H1, Value::Heegaard(d)) => h1(d).to_string(),
            (QueryKind::H1, Value::Kirby(d)) => boundary_h1(d).to_string(),
            (QueryKind::Tb, Value::Front(f)) => {
                let parts: Vec<String> = classical_invariants(f)
                    .map_err(error)?
                    .iter()
                    .map(|c| format!("tb={} rot={}", c.tb, c.rotation))
                    .collect();
                parts.join("; ")
            }
            (QueryKind::Invariants, Value::Surface(w)) => {
                let class = classify(w).map_err(error)?;
                let b = boundary_components(w).map_err(error)?;
                format!(
                    "n={} b={b} chi={} {class}",
                    w.handle_count(),
                    1 - w.handle_count() as i64 + b as i64
                )
            }
            (QueryKind::Invariants, Value::Kirby(d)) => {
                let c = closed_invariants(d).map_err(error)?;
                let parity = c.parity.map_or("n/a".to_string(), |p| p.to_string());
                format!(
                    "chi={} sigma={} parity={parity} g3={} h1={}",
                    c.euler_characteristic, c.signature, c.three_handles, c.h1_boundary
                )
            }
            (QueryKind::Invariants, Value::Front(f)) => {
                let k = to_kirby(std::slice::from_ref(f)).map_err(error)?;
                format!("linking={}", k.linking())
            }
            (QueryKind::Invariants, Value::OpenBook(ob)) => five_invariants(ob)
                .map_err(|e| Stop::new(q.target.column, FailureKind::Unsupported, e.to_string()))?
                .to_string(),
            (QueryKind::Identify, Value::OpenBook(ob)) => identify_known(ob).unwrap_or("unknown").to_string(),
            (QueryKind::Pi1, Value::Heegaard(d)) => pi1_presentation(d).to_string(),
            (QueryKind::Form, Value::Kirby(d)) => intersection_form(d)
                .map_err(|e| Stop::new(q.target.column, FailureKind::Unsupported, e.to_string()))?
                .to_string(),
            (QueryKind::Show, v) => match v {
                Value::Surface(w) => format!("\"{w}\""),
                Value::Heegaard(d) => pi1_presentation(d).to_string(),
                Value::Kirby(d) => d.to_string(),
                Value::Front(f) => f.to_string(),
                Value::OpenBook(ob) => format!("pages({})", ob.page),
            },
            (kind, v) => {
                return Err(Stop::new(
                    q.target.column,
                    FailureKind::Unsupported,
                    format!("{} is not defined for a {}", kind.keyword(), v.kind()),
                ))
            }
        })
    }

    fn assertion(&mut self, a: &Assertion) -> Step<String> {
        match a {
            Assertion::Compare { left, op, right } => {
                let l = self.query(left)?;
                let r = match right {
                    Operand::Query(q) => self.query(q)?,
                    Operand::Text(t) => t.clone(),
                };
                let holds = match op {
                    CompareOp::Eq => l == r,
                    CompareOp::Ne => l != r,
                };
                if !holds {
                    let rhs = match right {
                        Operand::Query(q) => format!("{q} is {r}"),
                        Operand::Text(t) => format!("\"{t}\""),
                    };
                    return Err(Stop::new(0, FailureKind::Assertion, format!("{left} is {l}; {rhs}")));
                }
                Ok("holds".into())
            }
            Assertion::Canonical(id) => {
                let w = self.surface(id);
                let class = classify(&w).map_err(error)?;
                let canonical = canonical_word(class);
                if w.relabeled() != canonical {
                    return Err(Stop::new(
                        id.column,
                        FailureKind::Assertion,
                        format!("\"{w}\" is not the model word \"{canonical}\" of {class}"),
                    ));
                }
                Ok(format!("holds ({class})"))
            }
            Assertion::Cert { left, right, budget } => {
                let n = self.certificate(left, right, *budget).map_err(|mut stop| {
                    if stop.kind == FailureKind::Budget {
                        stop.kind = FailureKind::Assertion;
                    }
                    stop
                })?;
                Ok(format!("holds ({n} moves)"))
            }
        }
    }
}
