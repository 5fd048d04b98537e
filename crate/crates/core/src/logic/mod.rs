//! Counting MSO: syntax, s-expression exchange format and a brute-force evaluator.

mod eval;
mod sexpr;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::structures::{Kind, Vocabulary};
use crate::{Error, Result};

pub use eval::{evaluate, evaluate_with, holds, Budget, Model, Valuation, Value};
pub use sexpr::parse;

/// Counting MSO formula. Variables are plain names; their kind comes from the
/// binding quantifier or, when free, from how they are used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<String>),
    Eq(String, String),
    In(String, String),
    /// `|X|` is divisible by `p`.
    Div(usize, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Kind, Box<Formula>),
    Forall(String, Kind, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: &str, args: &[&str]) -> Formula {
        Formula::Atom(rel.to_string(), args.iter().map(|s| s.to_string()).collect())
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(x.into(), y.into())
    }

    pub fn member(x: &str, set: &str) -> Formula {
        Formula::In(x.into(), set.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b, a)])
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.into(), Kind::Element, Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.into(), Kind::Element, Box::new(f))
    }

    pub fn exists_set(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.into(), Kind::Set, Box::new(f))
    }

    pub fn forall_set(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.into(), Kind::Set, Box::new(f))
    }

    pub fn is_closed(&self) -> bool {
        free_variables(self).is_empty()
    }

    /// Largest number of nested set quantifiers.
    pub fn set_depth(&self) -> usize {
        match self {
            Formula::Not(f) => f.set_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(|f| f.set_depth()).max().unwrap_or(0),
            Formula::Implies(a, b) => a.set_depth().max(b.set_depth()),
            Formula::Exists(_, k, f) | Formula::Forall(_, k, f) => f.set_depth() + usize::from(*k == Kind::Set),
            _ => 0,
        }
    }

    /// Replaces free occurrences of variables by other names. Bound names
    /// that would capture a replacement are renamed.
    pub fn rename_free(&self, map: &BTreeMap<String, String>) -> Formula {
        let mut counter = 0;
        self.rename_inner(map, &mut counter)
    }

    fn rename_inner(&self, map: &BTreeMap<String, String>, counter: &mut usize) -> Formula {
        let r = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(rel, args) => Formula::Atom(rel.clone(), args.iter().map(r).collect()),
            Formula::Eq(x, y) => Formula::Eq(r(x), r(y)),
            Formula::In(x, y) => Formula::In(r(x), r(y)),
            Formula::Div(p, x) => Formula::Div(*p, r(x)),
            Formula::Not(f) => Formula::Not(Box::new(f.rename_inner(map, counter))),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename_inner(map, counter)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename_inner(map, counter)).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_inner(map, counter), b.rename_inner(map, counter))
            }
            Formula::Exists(x, k, f) | Formula::Forall(x, k, f) => {
                let mut inner = map.clone();
                inner.remove(x);
                let captured = inner.values().any(|v| v == x);
                let bound = if captured {
                    let all = all_names(f);
                    loop {
                        *counter += 1;
                        let cand = format!("{x}_{counter}");
                        if !all.contains(&cand) && !inner.values().any(|v| *v == cand) {
                            break cand;
                        }
                    }
                } else {
                    x.clone()
                };
                if captured {
                    inner.insert(x.clone(), bound.clone());
                }
                let body = Box::new(f.rename_inner(&inner, counter));
                match self {
                    Formula::Exists(..) => Formula::Exists(bound, *k, body),
                    _ => Formula::Forall(bound, *k, body),
                }
            }
        }
    }
}

fn all_names(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn go(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => out.extend(args.iter().cloned()),
            Formula::Eq(x, y) | Formula::In(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Div(_, x) => {
                out.insert(x.clone());
            }
            Formula::Not(g) => go(g, out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, out)),
            Formula::Implies(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::Exists(x, _, g) | Formula::Forall(x, _, g) => {
                out.insert(x.clone());
                go(g, out);
            }
        }
    }
    go(f, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&sexpr::print(self))
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&sexpr::print(self))
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Formula, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Formula> {
        parse(s)
    }
}

pub fn free_variables(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => args.iter().for_each(|a| see(a, bound)),
            Formula::Eq(x, y) | Formula::In(x, y) => {
                see(x, bound);
                see(y, bound);
            }
            Formula::Div(_, x) => see(x, bound),
            Formula::Not(g) => go(g, bound, out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, bound, out)),
            Formula::Implies(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Formula::Exists(x, _, g) | Formula::Forall(x, _, g) => {
                bound.push(x.clone());
                go(g, bound, out);
                bound.pop();
            }
        }
    }
    go(f, &mut Vec::new(), &mut out);
    out
}

/// Checks kinds against `vocab` and infers the kind of every free variable.
///
/// Rejects unknown relations, wrong arities, kind clashes, `p < 2` and a
/// quantifier rebinding a variable that is already bound around it.
pub fn check(f: &Formula, vocab: &Vocabulary) -> Result<BTreeMap<String, Kind>> {
    let mut free = BTreeMap::new();
    check_inner(f, vocab, &mut Vec::new(), &mut free)?;
    Ok(free)
}

fn check_inner(
    f: &Formula,
    vocab: &Vocabulary,
    bound: &mut Vec<(String, Kind)>,
    free: &mut BTreeMap<String, Kind>,
) -> Result<()> {
    let mut use_var = |v: &str, k: Kind, bound: &Vec<(String, Kind)>| -> Result<()> {
        let have = match bound.iter().rev().find(|(b, _)| b == v) {
            Some((_, bk)) => *bk,
            None => *free.entry(v.to_string()).or_insert(k),
        };
        if have != k {
            return Err(Error::Formula(format!("variable `{v}` used both as element and as set")));
        }
        Ok(())
    };
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Atom(rel, args) => {
            let kinds = vocab
                .kinds(rel)
                .ok_or_else(|| Error::Formula(format!("unknown relation `{rel}`")))?;
            if kinds.len() != args.len() {
                return Err(Error::Formula(format!(
                    "relation `{rel}` takes {} arguments, got {}",
                    kinds.len(),
                    args.len()
                )));
            }
            for (a, k) in args.iter().zip(kinds) {
                use_var(a, *k, bound)?;
            }
            Ok(())
        }
        Formula::Eq(x, y) => {
            use_var(x, Kind::Element, bound)?;
            use_var(y, Kind::Element, bound)
        }
        Formula::In(x, y) => {
            use_var(x, Kind::Element, bound)?;
            use_var(y, Kind::Set, bound)
        }
        Formula::Div(p, x) => {
            if *p < 2 {
                return Err(Error::Formula(format!("divisibility modulus {p} is below 2")));
            }
            use_var(x, Kind::Set, bound)
        }
        Formula::Not(g) => check_inner(g, vocab, bound, free),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(|g| check_inner(g, vocab, bound, free)),
        Formula::Implies(a, b) => {
            check_inner(a, vocab, bound, free)?;
            check_inner(b, vocab, bound, free)
        }
        Formula::Exists(x, k, g) | Formula::Forall(x, k, g) => {
            if bound.iter().any(|(b, _)| b == x) {
                return Err(Error::Formula(format!("variable `{x}` bound twice in one scope")));
            }
            bound.push((x.clone(), *k));
            let r = check_inner(g, vocab, bound, free);
            bound.pop();
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variable_examples() {
        assert!(free_variables(&parse("(forall x (= x x))").unwrap()).is_empty());
        let r = parse("(R x Y)").unwrap();
        assert_eq!(free_variables(&r), ["Y", "x"].iter().map(|s| s.to_string()).collect());
        let q = parse("(exists x (R x Y))").unwrap();
        assert_eq!(free_variables(&q), ["Y"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn kinds_are_inferred() {
        let v = Vocabulary::new().with("R", &[Kind::Element, Kind::Set]);
        let kinds = check(&parse("(R x Y)").unwrap(), &v).unwrap();
        assert_eq!(kinds["x"], Kind::Element);
        assert_eq!(kinds["Y"], Kind::Set);
        assert!(check(&parse("(R Y Y)").unwrap(), &v).is_err());
        assert!(check(&parse("(exists x (exists x (= x x)))").unwrap(), &v).is_err());
        assert!(check(&parse("(divisible 1 X)").unwrap(), &v).is_err());
    }

    #[test]
    fn rename_avoids_capture() {
        let f = parse("(exists y (E x y))").unwrap();
        let map = [("x".to_string(), "y".to_string())].into_iter().collect();
        let g = f.rename_free(&map);
        assert_eq!(free_variables(&g), ["y".to_string()].into_iter().collect());
        assert_eq!(g.to_string(), "(exists y_1 (E y y_1))");
    }
}
