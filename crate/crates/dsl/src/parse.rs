//! Line-oriented script parser.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use handlecalc::algebra::IntMatrix;
use handlecalc::heegaard::{HeegaardDiagram, Word};
use handlecalc::kirby::KirbyDiagram;
use handlecalc::legendrian::{FrontDiagram, FrontEvent};
use handlecalc::surface::{Direction, Side, Sign, SurfaceWord};

use crate::ast::{Assertion, CompareOp, Ident, KirbySource, Located, Operand, Query, QueryKind, Script, Statement};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// What the parser would have accepted here; empty for semantic errors
    /// inside a literal.
    pub expected: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(BigInt),
    Str(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 13] = ["==", "!=", "~~", "=", "{", "}", "[", "]", "(", ")", ",", ";", "+"];

fn lex(line: usize, text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '"' {
            let end = chars[i + 1..]
                .iter()
                .position(|&d| d == '"')
                .ok_or_else(|| ParseError {
                    line,
                    column,
                    expected: vec!["closing `\"`".into()],
                    message: "unterminated string".into(),
                })?;
            out.push((Tok::Str(chars[i + 1..i + 1 + end].iter().collect()), column));
            i += end + 2;
            continue;
        }
        let negative_number = c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || negative_number {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            // `2a` and `007` are labels, not numbers
            let leading_zero = s.len() > 1 && s.starts_with('0');
            match s.parse::<BigInt>() {
                Ok(n) if !leading_zero => out.push((Tok::Int(n), column)),
                _ if !negative_number => out.push((Tok::Word(s), column)),
                _ => {
                    return Err(ParseError {
                        line,
                        column,
                        expected: vec!["integer".into()],
                        message: format!("malformed number `{s}`"),
                    })
                }
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Word(chars[start..i].iter().collect()), column));
            continue;
        }
        if c == '-' {
            out.push((Tok::Sym("-"), column));
            i += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), column));
                i += s.len();
            }
            None => {
                return Err(ParseError {
                    line,
                    column,
                    expected: vec![],
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_column: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of line".to_string(),
        };
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        Err(ParseError {
            line: self.line,
            column: self.column(),
            message: format!("expected {}, found {found}", expected.join(" or ")),
            expected,
        })
    }

    fn semantic<T>(&self, column: usize, message: String) -> PResult<T> {
        Err(ParseError {
            line: self.line,
            column,
            expected: vec![],
            message,
        })
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn sym(&mut self, s: &'static str) -> PResult<()> {
        if self.at_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&[&format!("`{s}`")])
        }
    }

    fn keyword(&mut self, w: &str) -> PResult<()> {
        if self.at_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&[&format!("`{w}`")])
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Some(Tok::Word(w)) if w.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') => {
                let (Tok::Word(w), col) = self.bump().unwrap() else {
                    unreachable!()
                };
                Ok(Ident::new(w, col))
            }
            _ => self.fail(&["name"]),
        }
    }

    /// A label or handle reference: any word or non-negative integer.
    fn atom(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Word(_)) => {
                let Some((Tok::Word(w), _)) = self.bump() else {
                    unreachable!()
                };
                Ok(w)
            }
            Some(Tok::Int(n)) if n >= &BigInt::from(0) => {
                let Some((Tok::Int(n), _)) = self.bump() else {
                    unreachable!()
                };
                Ok(n.to_string())
            }
            _ => self.fail(&["label"]),
        }
    }

    fn count(&mut self) -> PResult<usize> {
        match self.peek() {
            Some(Tok::Int(n)) => match usize::try_from(n) {
                Ok(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                Err(_) => self.fail(&["non-negative integer"]),
            },
            _ => self.fail(&["non-negative integer"]),
        }
    }

    fn position(&mut self) -> PResult<usize> {
        let col = self.column();
        let n = self.count()?;
        if n == 0 {
            return self.semantic(col, "positions and indices are 1-based".into());
        }
        Ok(n)
    }

    fn string(&mut self) -> PResult<(String, usize)> {
        match self.peek() {
            Some(Tok::Str(_)) => {
                let Some((Tok::Str(s), col)) = self.bump() else {
                    unreachable!()
                };
                Ok((s, col))
            }
            _ => self.fail(&["string"]),
        }
    }

    fn sign(&mut self) -> PResult<Sign> {
        if self.at_sym("+") {
            self.pos += 1;
            Ok(Sign::Plus)
        } else if self.at_sym("-") {
            self.pos += 1;
            Ok(Sign::Minus)
        } else {
            self.fail(&["`+`", "`-`"])
        }
    }

    fn end(&self) -> PResult<()> {
        if self.peek().is_some() {
            return self.fail(&["end of line"]);
        }
        Ok(())
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let Some((Tok::Int(n), _)) = self.bump() else {
                    unreachable!()
                };
                Ok(n)
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.sym("[")?;
        let mut out = Vec::new();
        if self.at_sym("]") {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.at_sym(",") {
                self.pos += 1;
            } else if self.at_sym("]") {
                self.pos += 1;
                return Ok(out);
            } else {
                return self.fail(&["`,`", "`]`"]);
            }
        }
    }

    fn matrix(&mut self) -> PResult<IntMatrix> {
        let col = self.column();
        let rows = self.list(|p| p.list(|q| q.int()))?;
        if rows.is_empty() {
            return Ok(IntMatrix::zeros(0, 0));
        }
        match IntMatrix::from_rows(&rows) {
            Ok(m) => Ok(m),
            Err(e) => self.semantic(col, e.to_string()),
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let Some(Tok::Word(head)) = self.peek().cloned() else {
            return self.fail(&["statement keyword"]);
        };
        self.pos += 1;
        let stmt = match head.as_str() {
            "surface" => {
                let name = self.ident()?;
                self.sym("=")?;
                let (text, col) = self.string()?;
                let word: SurfaceWord = match text.parse() {
                    Ok(w) => w,
                    Err(e) => return self.semantic(col, format!("{e}")),
                };
                if let Err(e) = word.validate() {
                    return self.semantic(col, e.to_string());
                }
                Statement::Surface { name, word }
            }
            "heegaard" => self.heegaard()?,
            "kirby" => self.kirby()?,
            "front" => {
                let name = self.ident()?;
                self.sym("=")?;
                let events = self.list(|p| {
                    let col = p.column();
                    let w = p.atom()?;
                    match w.parse::<FrontEvent>() {
                        Ok(e) => Ok(e),
                        Err(e) => p.semantic(col, e.to_string()),
                    }
                })?;
                Statement::Front {
                    name,
                    front: FrontDiagram::new(events),
                }
            }
            "openbook" => {
                let name = self.ident()?;
                self.sym("=")?;
                self.keyword("pages")?;
                self.sym("(")?;
                let page = self.ident()?;
                self.sym(")")?;
                Statement::OpenBook { name, page }
            }
            "slide" => {
                let target = self.ident()?;
                let at = self.position()?;
                self.keyword("over")?;
                let over = self.atom()?;
                let mut side = None;
                let mut sign = None;
                loop {
                    if side.is_none() && self.at_word("side") {
                        self.pos += 1;
                        side = Some(if self.at_word("left") {
                            Side::Left
                        } else if self.at_word("right") {
                            Side::Right
                        } else {
                            return self.fail(&["`left`", "`right`"]);
                        });
                        self.pos += 1;
                    } else if sign.is_none() && self.at_word("sign") {
                        self.pos += 1;
                        sign = Some(self.sign()?);
                    } else {
                        break;
                    }
                }
                Statement::Slide {
                    target,
                    at,
                    over,
                    side,
                    sign,
                }
            }
            "rotate" => {
                let target = self.ident()?;
                let direction = if self.at_word("left") {
                    Direction::Left
                } else if self.at_word("right") {
                    Direction::Right
                } else {
                    return self.fail(&["`left`", "`right`"]);
                };
                self.pos += 1;
                Statement::Rotate { target, direction }
            }
            "cancel" => Statement::Cancel {
                target: self.ident()?,
                label: self.atom()?,
            },
            "create" => {
                let target = self.ident()?;
                let label = self.atom()?;
                self.keyword("at")?;
                let at = self.position()?;
                self.keyword("sign")?;
                let sign = self.sign()?;
                Statement::Create {
                    target,
                    label,
                    at,
                    sign,
                }
            }
            "normalize" => Statement::Normalize { target: self.ident()? },
            "stabilize" => {
                let target = self.ident()?;
                let sign = self.sign()?;
                let component = if self.at_word("component") {
                    self.pos += 1;
                    Some(self.position()?)
                } else {
                    None
                };
                Statement::Stabilize {
                    target,
                    sign,
                    component,
                }
            }
            "blowup" => Statement::BlowUp {
                target: self.ident()?,
                sign: self.sign()?,
            },
            "blowdown" => Statement::BlowDown {
                target: self.ident()?,
                index: self.position()?,
            },
            "cert" => {
                let (left, right, budget) = self.cert_body()?;
                Statement::Cert { left, right, budget }
            }
            "assert" => Statement::Assert(self.assertion()?),
            "trace" => {
                if self.at_word("begin") {
                    self.pos += 1;
                    Statement::TraceBegin { target: self.ident()? }
                } else if self.at_word("end") {
                    self.pos += 1;
                    Statement::TraceEnd { target: self.ident()? }
                } else {
                    return self.fail(&["`begin`", "`end`"]);
                }
            }
            other => match QueryKind::from_keyword(other) {
                Some(kind) => Statement::Query(Query {
                    kind,
                    target: self.ident()?,
                }),
                None => {
                    self.pos -= 1;
                    return self.fail(&["statement keyword"]);
                }
            },
        };
        self.end()?;
        Ok(stmt)
    }

    fn heegaard(&mut self) -> PResult<Statement> {
        let name = self.ident()?;
        self.sym("{")?;
        self.keyword("genus")?;
        self.sym("=")?;
        let genus = self.count()?;
        self.sym(";")?;
        self.keyword("relators")?;
        self.sym("=")?;
        let col = self.column();
        let rels = self.list(|p| {
            let (text, col) = p.string()?;
            match text.parse::<Word>() {
                Ok(w) => Ok(w),
                Err(e) => p.semantic(col, e.to_string()),
            }
        })?;
        self.sym("}")?;
        match HeegaardDiagram::new(genus, rels) {
            Ok(diagram) => Ok(Statement::Heegaard { name, diagram }),
            Err(e) => self.semantic(col, e.to_string()),
        }
    }

    fn kirby(&mut self) -> PResult<Statement> {
        let name = self.ident()?;
        let col = self.column();
        let (one_handles, linking, incidence) = if self.at_sym("=") {
            self.pos += 1;
            if self.at_word("fronts") {
                self.pos += 1;
                self.sym("(")?;
                let mut fronts = vec![self.ident()?];
                while self.at_sym(",") {
                    self.pos += 1;
                    fronts.push(self.ident()?);
                }
                self.sym(")")?;
                return Ok(Statement::Kirby {
                    name,
                    source: KirbySource::Fronts(fronts),
                });
            }
            (0, self.matrix()?, None)
        } else {
            self.sym("{")?;
            let mut g = None;
            let mut l = None;
            let mut inc = None;
            loop {
                if g.is_none() && self.at_word("one_handles") {
                    self.pos += 1;
                    self.sym("=")?;
                    g = Some(self.count()?);
                } else if l.is_none() && self.at_word("linking") {
                    self.pos += 1;
                    self.sym("=")?;
                    l = Some(self.matrix()?);
                } else if inc.is_none() && self.at_word("incidence") {
                    self.pos += 1;
                    self.sym("=")?;
                    inc = Some(self.matrix()?);
                } else {
                    return self.fail(&["`one_handles`", "`linking`", "`incidence`"]);
                }
                if self.at_sym(";") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.sym("}")?;
            (g.unwrap_or(0), l.unwrap_or_else(|| IntMatrix::zeros(0, 0)), inc)
        };
        let incidence = incidence.unwrap_or_else(|| IntMatrix::zeros(one_handles, linking.cols()));
        // an empty literal stands for an empty matrix of the right shape
        let incidence = if incidence.entries().is_empty() {
            IntMatrix::zeros(one_handles, linking.cols())
        } else {
            incidence
        };
        if let Err(e) = KirbyDiagram::new(one_handles, linking.clone(), incidence.clone()) {
            return self.semantic(col, e.to_string());
        }
        Ok(Statement::Kirby {
            name,
            source: KirbySource::Literal {
                one_handles,
                linking,
                incidence,
            },
        })
    }

    fn cert_body(&mut self) -> PResult<(Ident, Ident, Option<usize>)> {
        let left = self.ident()?;
        self.sym("~~")?;
        let right = self.ident()?;
        let budget = if self.at_word("budget") {
            self.pos += 1;
            Some(self.count()?)
        } else {
            None
        };
        Ok((left, right, budget))
    }

    fn query(&mut self) -> PResult<Query> {
        let kind = match self.peek() {
            Some(Tok::Word(w)) => QueryKind::from_keyword(w),
            _ => None,
        };
        let Some(kind) = kind else {
            return self.fail(&["query (class, h1, tb, invariants, identify, pi1, form, show)"]);
        };
        self.pos += 1;
        Ok(Query {
            kind,
            target: self.ident()?,
        })
    }

    fn assertion(&mut self) -> PResult<Assertion> {
        if self.at_word("canonical") {
            self.pos += 1;
            return Ok(Assertion::Canonical(self.ident()?));
        }
        if self.at_word("cert") {
            self.pos += 1;
            let (left, right, budget) = self.cert_body()?;
            return Ok(Assertion::Cert { left, right, budget });
        }
        let left = self.query()?;
        let op = if self.at_sym("==") {
            CompareOp::Eq
        } else if self.at_sym("!=") {
            CompareOp::Ne
        } else {
            return self.fail(&["`==`", "`!=`"]);
        };
        self.pos += 1;
        let right = if matches!(self.peek(), Some(Tok::Str(_))) {
            Operand::Text(self.string()?.0)
        } else {
            Operand::Query(self.query()?)
        };
        Ok(Assertion::Compare { left, op, right })
    }
}

/// Parses a whole script. `#` starts a comment; blank lines are ignored.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut statements = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = lex(line, raw)?;
        if toks.is_empty() {
            continue;
        }
        let column = toks[0].1;
        let mut p = Parser {
            line,
            toks,
            pos: 0,
            end_column: raw.trim_end().chars().count() + 1,
        };
        let statement = p.statement()?;
        statements.push(Located {
            line,
            column,
            statement,
        });
    }
    Ok(Script { statements })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_statements() {
        let s = parse_script("surface w = \"a+ b+ a- b-\"\nclassify w\n").unwrap();
        assert_eq!(s.statements.len(), 2);
        assert_eq!(s.statements[1].line, 2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_script("# header\n\n  surface w = \"\"   # empty word\n").unwrap();
        assert_eq!(s.statements.len(), 1);
        assert_eq!((s.statements[0].line, s.statements[0].column), (3, 3));
    }

    #[test]
    fn error_positions() {
        let e = parse_script("surface w = \"a+ a+\"\nslide w 1 under a\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        assert_eq!(e.expected, vec!["`over`"]);
        let e = parse_script("surface w = \"a+ b+\"").unwrap_err();
        assert_eq!((e.line, e.column), (1, 13));
        let e = parse_script("kirby K = [[0,1],[2,0]]").unwrap_err();
        assert!(e.message.contains("symmetric"));
        let e = parse_script("frobnicate w").unwrap_err();
        assert_eq!(e.column, 1);
        let e = parse_script("classify w extra").unwrap_err();
        assert_eq!(e.expected, vec!["end of line"]);
    }

    #[test]
    fn kirby_forms() {
        let a = parse_script("kirby K = [[0,1],[1,0]]").unwrap();
        let b = parse_script("kirby K { linking = [[0,1],[1,0]] }").unwrap();
        assert_eq!(a.statements[0].statement, b.statements[0].statement);
        let c = parse_script("kirby K { one_handles = 1; linking = [[0]]; incidence = [[0]] }").unwrap();
        assert_eq!(
            c.to_string(),
            "kirby K { one_handles = 1; linking = [[0]]; incidence = [[0]] }\n"
        );
        let d = parse_script("kirby K { one_handles = 1 }").unwrap();
        assert_eq!(parse_script(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn round_trip() {
        let text = r#"
surface w = "1+ 2+ 1- 2- 3+ 3+"
heegaard H { genus = 2; relators = ["x1 x2^-1", ""] }
kirby K = [[0,1],[1,0]]
front F = [Lc0, Lc2, X1, X1, X1, Rc2, Rc0]
kirby T = fronts(F, F)
openbook M = pages(K)
slide w 3 over 2 side left
slide K 2 over 1 sign -
rotate w right
create w z at 1 sign +
cancel w z
normalize w
stabilize F - component 1
blowup K -
blowdown K 3
cert K ~~ K budget 50
classify w
h1 H
tb F
assert class w == "non-orientable crosscaps 3"
assert h1 K != h1 H
assert canonical w
assert cert K ~~ K
trace begin w
trace end w
"#;
        let s = parse_script(text).unwrap();
        assert_eq!(s.statements.len(), 25);
        let again = parse_script(&s.to_string()).unwrap();
        assert!(again.statements().eq(s.statements()));
        assert_eq!(again.to_string(), s.to_string());
    }
}
