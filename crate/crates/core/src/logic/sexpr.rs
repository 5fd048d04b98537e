//! S-expression syntax for formulas.
//!
//! ```text
//! formula  ::= "true" | "false"
//!            | "(" "not" formula ")"
//!            | "(" ("and" | "or") formula* ")"
//!            | "(" ("implies" | "iff") formula formula ")"
//!            | "(" quant name formula ")"
//!            | "(" "=" name name ")"
//!            | "(" "in" name name ")"
//!            | "(" "divisible" integer name ")"
//!            | "(" relation name* ")"
//! quant    ::= "exists" | "forall" | "exists-set" | "forall-set"
//! name     ::= any run of characters other than whitespace, "(", ")" and ";"
//! ```
//!
//! `;` starts a comment that runs to the end of the line. `iff` is read as a
//! conjunction of two implications. Keywords cannot be used as relation names.

use super::Formula;
use crate::structures::Kind;
use crate::{Error, Result};

const MAX_DEPTH: usize = 200;

const KEYWORDS: &[&str] = &[
    "true", "false", "not", "and", "or", "implies", "iff", "exists", "forall", "exists-set", "forall-set",
    "=", "in", "divisible",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
}

fn tokenize(s: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                out.push(Tok::Open);
                i += 1;
            }
            b')' => {
                out.push(Tok::Close);
                i += 1;
            }
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b'(' | b')' | b';') && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                out.push(Tok::Word(&s[start..i]));
            }
        }
    }
    out
}

pub fn parse(s: &str) -> Result<Formula> {
    let toks = tokenize(s);
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula(0)?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse("trailing input after formula".into()));
    }
    Ok(f)
}

struct Parser<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn name(&mut self) -> Result<String> {
        match self.next() {
            Some(Tok::Word(w)) if !KEYWORDS.contains(&w) => Ok(w.to_string()),
            Some(Tok::Word(w)) => Err(Error::Parse(format!("keyword `{w}` used as a name"))),
            _ => Err(Error::Parse("expected a name".into())),
        }
    }

    fn close(&mut self) -> Result<()> {
        match self.next() {
            Some(Tok::Close) => Ok(()),
            _ => Err(Error::Parse("expected `)`".into())),
        }
    }

    fn formula(&mut self, depth: usize) -> Result<Formula> {
        if depth > MAX_DEPTH {
            return Err(Error::Parse("formula nested too deeply".into()));
        }
        match self.next() {
            Some(Tok::Word("true")) => Ok(Formula::True),
            Some(Tok::Word("false")) => Ok(Formula::False),
            Some(Tok::Word(w)) => Err(Error::Parse(format!("unexpected `{w}`"))),
            Some(Tok::Close) => Err(Error::Parse("unexpected `)`".into())),
            None => Err(Error::Parse("unexpected end of input".into())),
            Some(Tok::Open) => {
                let head = match self.next() {
                    Some(Tok::Word(w)) => w,
                    _ => return Err(Error::Parse("expected an operator after `(`".into())),
                };
                let d = depth + 1;
                let f = match head {
                    "not" => Formula::not(self.formula(d)?),
                    "and" | "or" => {
                        let mut fs = Vec::new();
                        while self.toks.get(self.pos) != Some(&Tok::Close) {
                            if self.pos >= self.toks.len() {
                                return Err(Error::Parse("unexpected end of input".into()));
                            }
                            fs.push(self.formula(d)?);
                        }
                        if head == "and" {
                            Formula::And(fs)
                        } else {
                            Formula::Or(fs)
                        }
                    }
                    "implies" => {
                        let a = self.formula(d)?;
                        Formula::implies(a, self.formula(d)?)
                    }
                    "iff" => {
                        let a = self.formula(d)?;
                        Formula::iff(a, self.formula(d)?)
                    }
                    "exists" | "forall" | "exists-set" | "forall-set" => {
                        let x = self.name()?;
                        let body = Box::new(self.formula(d)?);
                        let kind = if head.ends_with("-set") { Kind::Set } else { Kind::Element };
                        if head.starts_with("exists") {
                            Formula::Exists(x, kind, body)
                        } else {
                            Formula::Forall(x, kind, body)
                        }
                    }
                    "=" => Formula::Eq(self.name()?, self.name()?),
                    "in" => Formula::In(self.name()?, self.name()?),
                    "divisible" => {
                        let p = match self.next() {
                            Some(Tok::Word(w)) => {
                                w.parse::<usize>().map_err(|_| Error::Parse(format!("bad modulus `{w}`")))?
                            }
                            _ => return Err(Error::Parse("expected a modulus".into())),
                        };
                        Formula::Div(p, self.name()?)
                    }
                    kw if KEYWORDS.contains(&kw) => {
                        return Err(Error::Parse(format!("`{kw}` cannot head a list")));
                    }
                    rel => {
                        let mut args = Vec::new();
                        while let Some(Tok::Word(_)) = self.toks.get(self.pos) {
                            args.push(self.name()?);
                        }
                        Formula::Atom(rel.to_string(), args)
                    }
                };
                self.close()?;
                Ok(f)
            }
        }
    }
}

pub fn print(f: &Formula) -> String {
    let mut s = String::new();
    write(f, &mut s);
    s
}

fn write(f: &Formula, s: &mut String) {
    match f {
        Formula::True => s.push_str("true"),
        Formula::False => s.push_str("false"),
        Formula::Atom(r, args) => {
            s.push('(');
            s.push_str(r);
            for a in args {
                s.push(' ');
                s.push_str(a);
            }
            s.push(')');
        }
        Formula::Eq(x, y) => s.push_str(&format!("(= {x} {y})")),
        Formula::In(x, y) => s.push_str(&format!("(in {x} {y})")),
        Formula::Div(p, x) => s.push_str(&format!("(divisible {p} {x})")),
        Formula::Not(g) => {
            s.push_str("(not ");
            write(g, s);
            s.push(')');
        }
        Formula::And(gs) | Formula::Or(gs) => {
            s.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in gs {
                s.push(' ');
                write(g, s);
            }
            s.push(')');
        }
        Formula::Implies(a, b) => {
            s.push_str("(implies ");
            write(a, s);
            s.push(' ');
            write(b, s);
            s.push(')');
        }
        Formula::Exists(x, k, g) | Formula::Forall(x, k, g) => {
            let q = match (matches!(f, Formula::Exists(..)), k) {
                (true, Kind::Element) => "exists",
                (true, Kind::Set) => "exists-set",
                (false, Kind::Element) => "forall",
                (false, Kind::Set) => "forall-set",
            };
            s.push_str(&format!("({q} {x} "));
            write(g, s);
            s.push(')');
        }
    }
}
