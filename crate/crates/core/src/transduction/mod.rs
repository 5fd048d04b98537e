//! MSO transductions built from interpretation, filtering, copying and
//! colouring steps, applied with origin tracking.

mod encoding;
pub mod library;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::logic::{self, check, Formula, Model, Value};
use crate::structures::{canonical_form, canonical_form_coloured, ClassId, Kind, Slot, Structure, Vocabulary};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

pub use encoding::{check_encoding, EncodingFailure, EncodingReport, NativeMap, StructureMap};

/// Free variable of an interpretation's universe formula.
pub const UNIVERSE_VAR: &str = "x";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDef {
    pub name: String,
    pub kinds: Vec<Kind>,
    pub vars: Vec<String>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interpretation {
    pub universe: Formula,
    pub relations: Vec<RelationDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Interpretation(Interpretation),
    Filter(Formula),
    Copy(usize),
    Colour(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transduction {
    pub input: ClassId,
    pub output: ClassId,
    pub steps: Vec<Step>,
}

/// One result of applying a transduction: output and origin of each output element.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginTriple {
    pub input: Structure,
    pub output: Structure,
    pub origin: Vec<usize>,
}

/// How results of [`apply`] are identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dedup {
    /// Keep every produced triple.
    None,
    /// Identify outputs isomorphic by a map preserving origins.
    #[default]
    WithOrigins,
    /// Identify isomorphic outputs, ignoring origins.
    IsoOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest number of colourings `k^n` a colour step may produce.
    pub colourings: usize,
    /// Largest number of candidate tuples per interpreted relation.
    pub tuples: usize,
    pub logic: logic::Budget,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { colourings: 1 << 14, tuples: 1 << 20, logic: logic::Budget::default() }
    }
}

pub fn copy_relation(k: usize) -> String {
    format!("_copy_{k}")
}

pub fn colour_relation(i: usize) -> String {
    format!("_col_{i}")
}

pub fn is_reserved(name: &str) -> bool {
    name.starts_with("_copy_") || name.starts_with("_col_")
}

fn reject_reserved(v: &Vocabulary) -> Result<()> {
    match v.names().find(|n| is_reserved(n)) {
        Some(n) => Err(Error::Invalid(format!("relation name `{n}` is reserved"))),
        None => Ok(()),
    }
}

impl Step {
    /// Vocabulary produced from `input`, checking every formula against it.
    pub fn output_vocabulary(&self, input: &Vocabulary) -> Result<Vocabulary> {
        match self {
            Step::Interpretation(i) => {
                let free = check(&i.universe, input)?;
                if free.keys().any(|v| v != UNIVERSE_VAR) || free.get(UNIVERSE_VAR).is_some_and(|k| *k != Kind::Element) {
                    return Err(Error::Formula(format!("universe formula may only use the element variable `{UNIVERSE_VAR}`")));
                }
                let mut out = Vocabulary::new();
                for r in &i.relations {
                    if r.vars.len() != r.kinds.len() {
                        return Err(Error::Formula(format!("relation `{}` lists {} variables for {} kinds", r.name, r.vars.len(), r.kinds.len())));
                    }
                    let distinct: HashSet<&String> = r.vars.iter().collect();
                    if distinct.len() != r.vars.len() {
                        return Err(Error::Formula(format!("relation `{}` repeats a variable", r.name)));
                    }
                    let free = check(&r.formula, input)?;
                    for (v, k) in &free {
                        match r.vars.iter().position(|w| w == v) {
                            Some(p) if r.kinds[p] == *k => {}
                            Some(_) => return Err(Error::Formula(format!("variable `{v}` of `{}` has the wrong kind", r.name))),
                            None => return Err(Error::Formula(format!("free variable `{v}` of `{}` is not a parameter", r.name))),
                        }
                    }
                    if !out.insert(r.name.clone(), r.kinds.clone()) {
                        return Err(Error::Invalid(format!("relation `{}` defined twice", r.name)));
                    }
                }
                reject_reserved(&out)?;
                Ok(out)
            }
            Step::Filter(f) => {
                check(f, input)?;
                if !f.is_closed() {
                    return Err(Error::Formula("filter formula must be a sentence".into()));
                }
                Ok(input.clone())
            }
            Step::Copy(k) => {
                if *k < 2 {
                    return Err(Error::Domain("copying needs k ≥ 2".into()));
                }
                let name = copy_relation(*k);
                if input.contains(&name) {
                    return Err(Error::Invalid(format!("relation `{name}` already present")));
                }
                Ok(input.clone().with(&name, &vec![Kind::Element; *k]))
            }
            Step::Colour(k) => {
                if *k < 1 {
                    return Err(Error::Domain("colouring needs k ≥ 1".into()));
                }
                let start = input.names().filter(|n| n.starts_with("_col_")).count();
                let mut out = input.clone();
                for i in start..start + k {
                    if !out.insert(colour_relation(i), vec![Kind::Element]) {
                        return Err(Error::Invalid(format!("relation `{}` already present", colour_relation(i))));
                    }
                }
                Ok(out)
            }
        }
    }
}

impl Transduction {
    pub fn new(input: ClassId, output: ClassId, steps: Vec<Step>) -> Result<Transduction> {
        let t = Transduction { input, output, steps };
        t.validate()?;
        Ok(t)
    }

    pub fn identity(c: ClassId) -> Transduction {
        Transduction { input: c.clone(), output: c, steps: Vec::new() }
    }

    /// Checks that step vocabularies chain from the input class to the output class.
    pub fn validate(&self) -> Result<()> {
        let start = self.input.vocabulary();
        reject_reserved(&start)?;
        let end = self.steps.iter().try_fold(start, |v, s| s.output_vocabulary(&v))?;
        if end != self.output.vocabulary() {
            return Err(Error::VocabularyMismatch(format!(
                "steps end in a vocabulary different from that of {}",
                self.output
            )));
        }
        Ok(())
    }

    pub fn is_deterministic(&self) -> bool {
        !self.steps.iter().any(|s| matches!(s, Step::Colour(_)))
    }

    pub fn from_json(text: &str) -> Result<Transduction> {
        let t: Transduction = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

pub fn compose(t1: &Transduction, t2: &Transduction) -> Result<Transduction> {
    if t1.output != t2.input {
        return Err(Error::ClassMismatch(format!("{} does not match {}", t1.output, t2.input)));
    }
    let mut steps = t1.steps.clone();
    steps.extend(t2.steps.iter().cloned());
    Transduction::new(t1.input.clone(), t2.output.clone(), steps)
}

pub fn apply(t: &Transduction, a: &Structure, dedup: Dedup) -> Result<Vec<OriginTriple>> {
    apply_with(t, a, dedup, Budget::default())
}

pub fn apply_with(t: &Transduction, a: &Structure, dedup: Dedup, budget: Budget) -> Result<Vec<OriginTriple>> {
    t.validate()?;
    if a.vocabulary() != &t.input.vocabulary() {
        return Err(Error::VocabularyMismatch(format!("input is not over the vocabulary of {}", t.input)));
    }
    if let Err(v) = crate::structures::validate(a) {
        return Err(Error::Invalid(v.to_string()));
    }
    let mut current = vec![(a.clone(), (0..a.size()).collect::<Vec<usize>>())];
    for step in &t.steps {
        let mut next = Vec::new();
        for (b, origin) in &current {
            for (c, o) in apply_step(step, b, budget)? {
                let composed = o.iter().map(|&y| origin[y]).collect();
                next.push((c, composed));
            }
        }
        current = dedup_pairs(next, dedup);
    }
    let current = dedup_pairs(current, dedup);
    Ok(current
        .into_iter()
        .map(|(output, origin)| OriginTriple { input: a.clone(), output, origin })
        .collect())
}

fn dedup_pairs(v: Vec<(Structure, Vec<usize>)>, dedup: Dedup) -> Vec<(Structure, Vec<usize>)> {
    if dedup == Dedup::None {
        return v;
    }
    let mut seen = HashSet::new();
    v.into_iter()
        .filter(|(s, o)| {
            let cf = match dedup {
                Dedup::WithOrigins => canonical_form_coloured(s, o),
                _ => canonical_form(s),
            };
            seen.insert(cf)
        })
        .collect()
}

/// One elementary step; returns each output with its origin map into `a`.
pub fn apply_step(step: &Step, a: &Structure, budget: Budget) -> Result<Vec<(Structure, Vec<usize>)>> {
    let n = a.size();
    match step {
        Step::Filter(f) => {
            let m = Model::with_budget(a, budget.logic)?;
            Ok(if m.eval(f, &Default::default())? { vec![(a.clone(), (0..n).collect())] } else { Vec::new() })
        }
        Step::Copy(k) => {
            let vocab = step.output_vocabulary(a.vocabulary())?;
            let mut out = Structure::empty(vocab, k * n);
            for (name, ts) in a.relations() {
                for t in ts {
                    for i in 0..*k {
                        out.insert_unchecked(name, t.iter().map(|s| s.map(|x| i * n + x)).collect());
                    }
                }
            }
            let rel = copy_relation(*k);
            for v in 0..n {
                out.insert_unchecked(&rel, (0..*k).map(|i| Slot::Elem(i * n + v)).collect());
            }
            Ok((out, (0..k * n).map(|y| y % n).collect::<Vec<_>>())).map(|p| vec![p])
        }
        Step::Colour(k) => {
            let count = (*k as f64).powi(n as i32);
            if count > budget.colourings as f64 {
                return Err(Error::Budget { what: "colourings", value: count.min(usize::MAX as f64) as usize, limit: budget.colourings });
            }
            let vocab = step.output_vocabulary(a.vocabulary())?;
            let start = a.vocabulary().names().filter(|n| n.starts_with("_col_")).count();
            let base = {
                let mut b = Structure::empty(vocab, n);
                for (name, ts) in a.relations() {
                    for t in ts {
                        b.insert_unchecked(name, t.clone());
                    }
                }
                b
            };
            let mut out = Vec::new();
            for w in crate::structures::words_of(*k, n) {
                let mut b = base.clone();
                for (v, &c) in w.iter().enumerate() {
                    b.insert_unchecked(&colour_relation(start + c), vec![Slot::Elem(v)]);
                }
                out.push((b, (0..n).collect()));
            }
            Ok(out)
        }
        Step::Interpretation(i) => {
            let vocab = step.output_vocabulary(a.vocabulary())?;
            let m = Model::with_budget(a, budget.logic)?;
            let check_budget = |f: &Formula| {
                crate::error::budget("set quantifier depth × universe size", f.set_depth() * n, budget.logic.set_work)
            };
            check_budget(&i.universe)?;
            let mut universe = Vec::new();
            for v in 0..n {
                let mut env = vec![(UNIVERSE_VAR, Value::Elem(v))];
                if m.eval_unchecked(&i.universe, &mut env) {
                    universe.push(v);
                }
            }
            if universe.is_empty() {
                return Ok(Vec::new());
            }
            let mut index = vec![usize::MAX; n];
            for (j, &v) in universe.iter().enumerate() {
                index[v] = j;
            }
            let umask: Mask = subsets::from_elems(universe.iter().copied());
            let mut out = Structure::empty(vocab, universe.len());
            for r in &i.relations {
                check_budget(&r.formula)?;
                let sets: Vec<Mask> = subsets::submasks(umask).collect();
                let total = r.kinds.iter().try_fold(1usize, |acc, k| {
                    acc.checked_mul(match k {
                        Kind::Element => universe.len(),
                        Kind::Set => sets.len(),
                    })
                });
                let total = total.unwrap_or(usize::MAX);
                crate::error::budget("candidate tuples", total, budget.tuples)?;
                let mut choice = vec![0usize; r.kinds.len()];
                'tuples: loop {
                    let mut env: Vec<(&str, Value)> = Vec::with_capacity(r.vars.len());
                    for (p, k) in r.kinds.iter().enumerate() {
                        let val = match k {
                            Kind::Element => Value::Elem(universe[choice[p]]),
                            Kind::Set => Value::Set(sets[choice[p]]),
                        };
                        env.push((r.vars[p].as_str(), val));
                    }
                    if m.eval_unchecked(&r.formula, &mut env) {
                        let t = env
                            .iter()
                            .map(|(_, v)| match v {
                                Value::Elem(e) => Slot::Elem(index[*e]),
                                Value::Set(s) => Slot::Set(subsets::iter(*s).map(|x| index[x]).collect()),
                            })
                            .collect();
                        out.insert_unchecked(&r.name, t);
                    }
                    // odometer over the candidate tuples
                    let mut p = 0;
                    loop {
                        if p == choice.len() {
                            break 'tuples;
                        }
                        choice[p] += 1;
                        let lim = match r.kinds[p] {
                            Kind::Element => universe.len(),
                            Kind::Set => sets.len(),
                        };
                        if choice[p] < lim {
                            break;
                        }
                        choice[p] = 0;
                        p += 1;
                    }
                }
            }
            Ok(vec![(out, universe)])
        }
    }
}

/// `A ↦ some output of t on A satisfies l`.
pub fn language_compose<'a, L>(t: &'a Transduction, l: L) -> impl Fn(&Structure) -> Result<bool> + 'a
where
    L: Fn(&Structure) -> Result<bool> + 'a,
{
    move |a| {
        for r in apply(t, a, Dedup::IsoOnly)? {
            if l(&r.output)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Origins grouped by input element, as used in reports.
pub fn origin_fibres(origin: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (y, &x) in origin.iter().enumerate() {
        m.entry(x).or_default().push(y);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;
    use crate::structures::build;

    #[test]
    fn identity_keeps_structure_and_origins() {
        let t = identity_interpretation(&ClassId::Trees);
        let a = build::tree(&[None, Some(0), Some(1)]);
        let out = apply(&t, &a, Dedup::WithOrigins).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].output, a);
        assert_eq!(out[0].origin, vec![0, 1, 2]);
    }

    #[test]
    fn duplicate_ab() {
        let t = duplicate_strings(2);
        let out = apply(&t, &build::string(2, &[0, 1]), Dedup::WithOrigins).unwrap();
        assert_eq!(out.len(), 1);
        let w = build::read_string(&out[0].output, 2).unwrap();
        assert_eq!(w, vec![0, 1, 0, 1]);
        // origins listed along the output order
        let pos = positions_in_order(&out[0].output);
        let origins: Vec<usize> = pos.iter().map(|&y| out[0].origin[y]).collect();
        assert_eq!(origins, vec![0, 1, 0, 1]);
    }

    #[test]
    fn colouring_two_elements() {
        let t = Transduction::new(ClassId::Bool, ClassId::Bool, vec![]).unwrap();
        assert!(t.is_deterministic());
        let two = crate::structures::build::relation(1, 2, &[]);
        let c = Transduction {
            input: ClassId::KAryRelations(1),
            output: ClassId::KAryRelations(1),
            steps: vec![Step::Colour(2)],
        };
        assert!(c.validate().is_err());
        let out = apply_step(&Step::Colour(2), &two, Budget::default()).unwrap();
        assert_eq!(out.len(), 4);
    }

    #[test]
    fn filter_false_and_compose() {
        let c = ClassId::Strings(2);
        let f = Transduction::new(c.clone(), c.clone(), vec![Step::Filter(Formula::False)]).unwrap();
        assert!(apply(&f, &build::string(2, &[0]), Dedup::WithOrigins).unwrap().is_empty());
        let d = duplicate_strings(2);
        let dd = compose(&d, &d).unwrap();
        let out = apply(&dd, &build::string(2, &[0]), Dedup::WithOrigins).unwrap();
        assert_eq!(build::read_string(&out[0].output, 2).unwrap(), vec![0; 4]);
        assert!(compose(&d, &identity_interpretation(&ClassId::Trees)).is_err());
    }

    #[test]
    fn reserved_names_rejected() {
        let v = Vocabulary::new().with("_col_0", &[Kind::Element]);
        assert!(reject_reserved(&v).is_err());
        assert!(is_reserved("_copy_2"));
    }

    #[test]
    fn json_roundtrip() {
        let t = duplicate_strings(2);
        let back = Transduction::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(Transduction::from_json(r#"{"input":"trees","output":"trees","steps":[{"copy":1}]}"#).is_err());
    }
}
