use std::collections::{BTreeMap, HashMap, HashSet};

use super::{check, Formula};
use crate::structures::{Kind, Slot, Structure};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Elem(usize),
    Set(Mask),
}

impl Value {
    fn kind(self) -> Kind {
        match self {
            Value::Elem(_) => Kind::Element,
            Value::Set(_) => Kind::Set,
        }
    }
}

pub type Valuation = BTreeMap<String, Value>;

/// Evaluation limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Upper bound on (nested set quantifiers) × (universe size).
    pub set_work: usize,
}

impl Default for Budget {
    /// Allows two nested set quantifiers over 12 elements.
    fn default() -> Budget {
        Budget { set_work: 24 }
    }
}

/// A structure indexed for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Model<'a> {
    structure: &'a Structure,
    n: usize,
    rels: HashMap<&'a str, HashSet<Vec<u64>>>,
    budget: Budget,
}

impl<'a> Model<'a> {
    pub fn new(a: &'a Structure) -> Result<Model<'a>> {
        Model::with_budget(a, Budget::default())
    }

    pub fn with_budget(a: &'a Structure, budget: Budget) -> Result<Model<'a>> {
        if a.size() > subsets::MAX_GROUND {
            return Err(Error::Budget { what: "evaluation universe size", value: a.size(), limit: subsets::MAX_GROUND });
        }
        let rels = a
            .relations()
            .map(|(name, ts)| {
                let keys = ts.iter().map(|t| t.iter().map(slot_key).collect()).collect();
                (name, keys)
            })
            .collect();
        Ok(Model { structure: a, n: a.size(), rels, budget })
    }

    pub fn structure(&self) -> &Structure {
        self.structure
    }

    /// Checks `f` against the structure and valuation, then evaluates it.
    pub fn eval(&self, f: &Formula, v: &Valuation) -> Result<bool> {
        let free = check(f, self.structure.vocabulary())?;
        for (x, k) in &free {
            let val = v.get(x).ok_or_else(|| Error::Unbound(x.clone()))?;
            if val.kind() != *k {
                return Err(Error::Formula(format!("variable `{x}` is assigned a value of the wrong kind")));
            }
            let ok = match val {
                Value::Elem(e) => *e < self.n,
                Value::Set(m) => *m >> self.n == 0,
            };
            if !ok {
                return Err(Error::Invalid(format!("value of `{x}` is outside the universe")));
            }
        }
        crate::error::budget("set quantifier depth × universe size", f.set_depth() * self.n, self.budget.set_work)?;
        let mut env: Vec<(&str, Value)> = v.iter().map(|(k, x)| (k.as_str(), *x)).collect();
        Ok(self.ev(f, &mut env))
    }

    /// Evaluation without the up-front checks, for callers that already ran them.
    pub(crate) fn eval_unchecked<'f>(&self, f: &'f Formula, env: &mut Vec<(&'f str, Value)>) -> bool {
        self.ev(f, env)
    }

    fn ev<'f>(&self, f: &'f Formula, env: &mut Vec<(&'f str, Value)>) -> bool {
        let look = |env: &Vec<(&str, Value)>, x: &str| -> Value {
            env.iter().rev().find(|(n, _)| *n == x).map(|p| p.1).expect("checked formulas have bound variables")
        };
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(rel, args) => {
                let key: Vec<u64> = args
                    .iter()
                    .map(|a| match look(env, a) {
                        Value::Elem(e) => e as u64,
                        Value::Set(m) => m,
                    })
                    .collect();
                self.rels.get(rel.as_str()).is_some_and(|s| s.contains(&key))
            }
            Formula::Eq(x, y) => look(env, x) == look(env, y),
            Formula::In(x, y) => match (look(env, x), look(env, y)) {
                (Value::Elem(e), Value::Set(m)) => subsets::contains(m, e),
                _ => false,
            },
            Formula::Div(p, x) => match look(env, x) {
                Value::Set(m) => subsets::size(m).is_multiple_of(*p),
                Value::Elem(_) => false,
            },
            Formula::Not(g) => !self.ev(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.ev(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.ev(g, env)),
            Formula::Implies(a, b) => !self.ev(a, env) || self.ev(b, env),
            Formula::Exists(x, k, g) => self.quantify(x, *k, g, env, true),
            Formula::Forall(x, k, g) => !self.quantify(x, *k, g, env, false),
        }
    }

    /// Whether some value makes `g` evaluate to `want`.
    fn quantify<'f>(&self, x: &'f str, k: Kind, g: &'f Formula, env: &mut Vec<(&'f str, Value)>, want: bool) -> bool {
        let mut found = false;
        match k {
            Kind::Element => {
                for e in 0..self.n {
                    env.push((x, Value::Elem(e)));
                    found = self.ev(g, env) == want;
                    env.pop();
                    if found {
                        break;
                    }
                }
            }
            Kind::Set => {
                for m in 0..=subsets::full(self.n) {
                    env.push((x, Value::Set(m)));
                    found = self.ev(g, env) == want;
                    env.pop();
                    if found {
                        break;
                    }
                }
            }
        }
        found
    }
}

fn slot_key(s: &Slot) -> u64 {
    match s {
        Slot::Elem(e) => *e as u64,
        Slot::Set(xs) => subsets::from_elems(xs.iter().copied()),
    }
}

pub fn evaluate(f: &Formula, a: &Structure, v: &Valuation) -> Result<bool> {
    Model::new(a)?.eval(f, v)
}

pub fn evaluate_with(f: &Formula, a: &Structure, v: &Valuation, budget: Budget) -> Result<bool> {
    Model::with_budget(a, budget)?.eval(f, v)
}

/// The language of a sentence: whether `a` satisfies the closed formula `f`.
pub fn holds(f: &Formula, a: &Structure) -> Result<bool> {
    if !f.is_closed() {
        let free: Vec<String> = super::free_variables(f).into_iter().collect();
        return Err(Error::Unbound(free.join(", ")));
    }
    evaluate(f, a, &Valuation::new())
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::structures::{build, Vocabulary};

    fn single(name: &str, v: Value) -> Valuation {
        [(name.to_string(), v)].into_iter().collect()
    }

    #[test]
    fn divisibility_of_empty_set() {
        let a = build::bool();
        let f = parse("(divisible 2 X)").unwrap();
        assert!(evaluate(&f, &a, &single("X", Value::Set(0))).unwrap());
        assert!(holds(&parse("(exists-set X (divisible 3 X))").unwrap(), &a).unwrap());
    }

    #[test]
    fn even_labelled_children() {
        // root 0 with two children labelled l0
        let t = build::labelled_tree(2, &[None, Some(0), Some(0)], &[1, 0, 0]);
        let f = parse(
            "(forall x (exists-set X (and (divisible 2 X)
               (forall y (iff (in y X) (and (parent x y) (l0 y)))))))",
        )
        .unwrap();
        assert!(holds(&f, &t).unwrap());
        let t2 = build::labelled_tree(2, &[None, Some(0), Some(0)], &[1, 0, 1]);
        assert!(!holds(&f, &t2).unwrap());
    }

    #[test]
    fn sentences_about_size() {
        let one = build::bool();
        let two = Structure::empty(Vocabulary::new(), 2);
        let nonempty = parse("(exists x (= x x))").unwrap();
        let single_elem = parse("(forall x (forall y (= x y)))").unwrap();
        assert!(holds(&nonempty, &one).unwrap() && holds(&nonempty, &two).unwrap());
        assert!(holds(&single_elem, &one).unwrap());
        assert!(!holds(&single_elem, &two).unwrap());
        let even = parse("(exists-set X (and (forall x (in x X)) (divisible 2 X)))").unwrap();
        for n in 1..=4 {
            let a = Structure::empty(Vocabulary::new(), n);
            assert_eq!(holds(&even, &a).unwrap(), n % 2 == 0);
        }
    }

    #[test]
    fn unbound_and_budget_errors() {
        let a = build::bool();
        assert!(matches!(evaluate(&parse("(= x x)").unwrap(), &a, &Valuation::new()), Err(Error::Unbound(_))));
        let big = Structure::empty(Vocabulary::new(), 13);
        let f = parse("(exists-set X (exists-set Y (= x x)))").unwrap();
        let r = evaluate(&f, &big, &single("x", Value::Elem(0)));
        assert!(matches!(r, Err(Error::Budget { .. })));
    }
}
