//! Script syntax tree and its pretty-printer.

use std::fmt;

use handlecalc::algebra::IntMatrix;
use handlecalc::heegaard::HeegaardDiagram;
use handlecalc::legendrian::FrontDiagram;
use handlecalc::surface::{Direction, Side, Sign, SurfaceWord};

/// A name as written in the script. The column does not take part in
/// equality, so reformatted scripts compare equal.
#[derive(Clone, Debug, Eq)]
pub struct Ident {
    pub name: String,
    pub column: usize,
}

impl Ident {
    pub fn new(name: impl Into<String>, column: usize) -> Self {
        Self {
            name: name.into(),
            column,
        }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KirbySource {
    Literal {
        one_handles: usize,
        linking: IntMatrix,
        incidence: IntMatrix,
    },
    Fronts(Vec<Ident>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Class,
    H1,
    Tb,
    Invariants,
    Identify,
    Pi1,
    Form,
    Show,
}

impl QueryKind {
    pub fn keyword(self) -> &'static str {
        match self {
            QueryKind::Class => "class",
            QueryKind::H1 => "h1",
            QueryKind::Tb => "tb",
            QueryKind::Invariants => "invariants",
            QueryKind::Identify => "identify",
            QueryKind::Pi1 => "pi1",
            QueryKind::Form => "form",
            QueryKind::Show => "show",
        }
    }

    pub fn from_keyword(s: &str) -> Option<QueryKind> {
        Some(match s {
            "class" | "classify" => QueryKind::Class,
            "h1" => QueryKind::H1,
            "tb" => QueryKind::Tb,
            "invariants" => QueryKind::Invariants,
            "identify" => QueryKind::Identify,
            "pi1" => QueryKind::Pi1,
            "form" => QueryKind::Form,
            "show" => QueryKind::Show,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub kind: QueryKind,
    pub target: Ident,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.keyword(), self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Query(Query),
    Text(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    Compare {
        left: Query,
        op: CompareOp,
        right: Operand,
    },
    Canonical(Ident),
    Cert {
        left: Ident,
        right: Ident,
        budget: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Surface {
        name: Ident,
        word: SurfaceWord,
    },
    Heegaard {
        name: Ident,
        diagram: HeegaardDiagram,
    },
    Kirby {
        name: Ident,
        source: KirbySource,
    },
    Front {
        name: Ident,
        front: FrontDiagram,
    },
    OpenBook {
        name: Ident,
        page: Ident,
    },
    /// `at` is 1-based. On a surface `over` is a label, on a Kirby diagram a
    /// 1-based handle index.
    Slide {
        target: Ident,
        at: usize,
        over: String,
        side: Option<Side>,
        sign: Option<Sign>,
    },
    Rotate {
        target: Ident,
        direction: Direction,
    },
    Cancel {
        target: Ident,
        label: String,
    },
    Create {
        target: Ident,
        label: String,
        at: usize,
        sign: Sign,
    },
    Normalize {
        target: Ident,
    },
    Stabilize {
        target: Ident,
        sign: Sign,
        component: Option<usize>,
    },
    BlowUp {
        target: Ident,
        sign: Sign,
    },
    BlowDown {
        target: Ident,
        index: usize,
    },
    Cert {
        left: Ident,
        right: Ident,
        budget: Option<usize>,
    },
    Query(Query),
    Assert(Assertion),
    TraceBegin {
        target: Ident,
    },
    TraceEnd {
        target: Ident,
    },
}

/// A statement with the 1-based line and column where it starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub column: usize,
    pub statement: Statement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Located>,
}

impl Script {
    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.statements.iter().map(|l| &l.statement)
    }
}

fn sign_text(s: Sign) -> char {
    s.symbol()
}

fn side_text(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn budget_text(f: &mut fmt::Formatter<'_>, budget: Option<usize>) -> fmt::Result {
    match budget {
        Some(b) => write!(f, " budget {b}"),
        None => Ok(()),
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Surface { name, word } => write!(f, "surface {name} = \"{word}\""),
            Statement::Heegaard { name, diagram } => {
                let rels: Vec<String> = diagram.relators().iter().map(|r| format!("\"{r}\"")).collect();
                write!(
                    f,
                    "heegaard {name} {{ genus = {}; relators = [{}] }}",
                    diagram.genus(),
                    rels.join(", ")
                )
            }
            Statement::Kirby { name, source } => match source {
                KirbySource::Literal {
                    one_handles,
                    linking,
                    incidence,
                } => write!(
                    f,
                    "kirby {name} {{ one_handles = {one_handles}; linking = {linking}; incidence = {incidence} }}"
                ),
                KirbySource::Fronts(fs) => {
                    let names: Vec<&str> = fs.iter().map(|i| i.name.as_str()).collect();
                    write!(f, "kirby {name} = fronts({})", names.join(", "))
                }
            },
            Statement::Front { name, front } => write!(f, "front {name} = {front}"),
            Statement::OpenBook { name, page } => write!(f, "openbook {name} = pages({page})"),
            Statement::Slide {
                target,
                at,
                over,
                side,
                sign,
            } => {
                write!(f, "slide {target} {at} over {over}")?;
                if let Some(s) = side {
                    write!(f, " side {}", side_text(*s))?;
                }
                if let Some(s) = sign {
                    write!(f, " sign {}", sign_text(*s))?;
                }
                Ok(())
            }
            Statement::Rotate { target, direction } => write!(
                f,
                "rotate {target} {}",
                match direction {
                    Direction::Left => "left",
                    Direction::Right => "right",
                }
            ),
            Statement::Cancel { target, label } => write!(f, "cancel {target} {label}"),
            Statement::Create {
                target,
                label,
                at,
                sign,
            } => {
                write!(f, "create {target} {label} at {at} sign {}", sign_text(*sign))
            }
            Statement::Normalize { target } => write!(f, "normalize {target}"),
            Statement::Stabilize {
                target,
                sign,
                component,
            } => {
                write!(f, "stabilize {target} {}", sign_text(*sign))?;
                if let Some(c) = component {
                    write!(f, " component {c}")?;
                }
                Ok(())
            }
            Statement::BlowUp { target, sign } => write!(f, "blowup {target} {}", sign_text(*sign)),
            Statement::BlowDown { target, index } => write!(f, "blowdown {target} {index}"),
            Statement::Cert { left, right, budget } => {
                write!(f, "cert {left} ~~ {right}")?;
                budget_text(f, *budget)
            }
            Statement::Query(q) => match q.kind {
                QueryKind::Class => write!(f, "classify {}", q.target),
                _ => write!(f, "{q}"),
            },
            Statement::Assert(a) => {
                f.write_str("assert ")?;
                match a {
                    Assertion::Compare { left, op, right } => {
                        let op = match op {
                            CompareOp::Eq => "==",
                            CompareOp::Ne => "!=",
                        };
                        match right {
                            Operand::Query(q) => write!(f, "{left} {op} {q}"),
                            Operand::Text(t) => write!(f, "{left} {op} \"{t}\""),
                        }
                    }
                    Assertion::Canonical(n) => write!(f, "canonical {n}"),
                    Assertion::Cert { left, right, budget } => {
                        write!(f, "cert {left} ~~ {right}")?;
                        budget_text(f, *budget)
                    }
                }
            }
            Statement::TraceBegin { target } => write!(f, "trace begin {target}"),
            Statement::TraceEnd { target } => write!(f, "trace end {target}"),
        }
    }
}

/// One statement per line, comments and blank lines dropped.
impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.statement)?;
        }
        Ok(())
    }
}
