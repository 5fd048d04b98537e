//! Vocabularies, finite structures, isomorphism, class membership and census.

mod census;
mod class;
mod iso;
mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use census::{census, census_bound, enumerate_class};
pub use class::{build, is_matroid_family, member, ClassId};
pub use iso::{canonical_form, canonical_form_coloured, is_isomorphic, CanonicalForm, IsoWitness};
pub use json::RawStructure;
pub(crate) use census::{null_structure_of_subspace, words as words_of};
pub(crate) use class::{children, depth as depth_of, hyperedges_named, letter, matrix_entries, matrix_rel, null_coefficients, tree_parents};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Element,
    Set,
}

/// Relation names with their argument kinds, kept sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    rels: BTreeMap<String, Vec<Kind>>,
}

impl Vocabulary {
    pub fn new() -> Vocabulary {
        Vocabulary::default()
    }

    /// Builds a vocabulary; fails on a repeated name.
    pub fn from_relations<I, S>(rels: I) -> Result<Vocabulary>
    where
        I: IntoIterator<Item = (S, Vec<Kind>)>,
        S: Into<String>,
    {
        let mut v = Vocabulary::new();
        for (name, kinds) in rels {
            let name = name.into();
            if v.rels.insert(name.clone(), kinds).is_some() {
                return Err(Error::Invalid(format!("duplicate relation name `{name}`")));
            }
        }
        Ok(v)
    }

    pub fn with(mut self, name: &str, kinds: &[Kind]) -> Vocabulary {
        self.rels.insert(name.to_string(), kinds.to_vec());
        self
    }

    pub fn kinds(&self, name: &str) -> Option<&[Kind]> {
        self.rels.get(name).map(|k| k.as_slice())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.rels.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Kind])> {
        self.rels.iter().map(|(n, k)| (n.as_str(), k.as_slice()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.rels.keys().map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rels.is_empty()
    }

    pub(crate) fn insert(&mut self, name: String, kinds: Vec<Kind>) -> bool {
        self.rels.insert(name, kinds).is_none()
    }
}

/// One argument of a tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Elem(usize),
    Set(Vec<usize>),
}

impl Slot {
    pub fn set<I: IntoIterator<Item = usize>>(it: I) -> Slot {
        let mut v: Vec<usize> = it.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Slot::Set(v)
    }

    pub fn kind(&self) -> Kind {
        match self {
            Slot::Elem(_) => Kind::Element,
            Slot::Set(_) => Kind::Set,
        }
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Slot {
        match self {
            Slot::Elem(x) => Slot::Elem(f(*x)),
            Slot::Set(xs) => Slot::set(xs.iter().map(|&x| f(x))),
        }
    }

    pub fn ids(&self) -> &[usize] {
        match self {
            Slot::Elem(x) => std::slice::from_ref(x),
            Slot::Set(xs) => xs,
        }
    }
}

pub type Tuple = Vec<Slot>;

/// A finite structure over elements `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Vocabulary,
    size: usize,
    rels: BTreeMap<String, BTreeSet<Tuple>>,
}

/// First violated structure invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyUniverse,
    IdOutOfRange { relation: String, id: usize },
    UnsortedSet { relation: String },
    KindMismatch { relation: String },
    DuplicateTuple { relation: String },
    DuplicateRelation { relation: String },
    UnknownRelation { relation: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyUniverse => write!(f, "empty universe"),
            Violation::IdOutOfRange { relation, id } => {
                write!(f, "id out of range: {id} in relation `{relation}`")
            }
            Violation::UnsortedSet { relation } => {
                write!(f, "set slot not sorted and duplicate-free in `{relation}`")
            }
            Violation::KindMismatch { relation } => {
                write!(f, "tuple does not match the kinds of `{relation}`")
            }
            Violation::DuplicateTuple { relation } => write!(f, "duplicate tuple in `{relation}`"),
            Violation::DuplicateRelation { relation } => {
                write!(f, "duplicate relation name `{relation}`")
            }
            Violation::UnknownRelation { relation } => {
                write!(f, "relation `{relation}` not in vocabulary")
            }
        }
    }
}

impl Structure {
    /// Structure with no tuples. Does not check `size > 0`; see [`validate`].
    pub fn empty(vocab: Vocabulary, size: usize) -> Structure {
        let rels = vocab.names().map(|n| (n.to_string(), BTreeSet::new())).collect();
        Structure { vocab, size, rels }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tuples(&self, name: &str) -> &BTreeSet<Tuple> {
        static EMPTY: BTreeSet<Tuple> = BTreeSet::new();
        self.rels.get(name).unwrap_or(&EMPTY)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &BTreeSet<Tuple>)> {
        self.rels.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn holds(&self, name: &str, tuple: &[Slot]) -> bool {
        self.rels.get(name).is_some_and(|t| t.contains(tuple))
    }

    /// Adds a tuple after checking its name, kinds and ids.
    pub fn insert(&mut self, name: &str, tuple: Tuple) -> Result<bool> {
        let kinds = self
            .vocab
            .kinds(name)
            .ok_or_else(|| Error::VocabularyMismatch(format!("unknown relation `{name}`")))?;
        if kinds.len() != tuple.len() || kinds.iter().zip(&tuple).any(|(k, s)| *k != s.kind()) {
            return Err(Error::Invalid(format!("tuple does not match the kinds of `{name}`")));
        }
        for s in &tuple {
            if let Some(&bad) = s.ids().iter().find(|&&x| x >= self.size) {
                return Err(Error::Invalid(format!("id out of range: {bad} in `{name}`")));
            }
        }
        let tuple = tuple
            .into_iter()
            .map(|s| match s {
                Slot::Set(v) => Slot::set(v),
                e => e,
            })
            .collect();
        Ok(self.rels.get_mut(name).expect("vocabulary and relations agree").insert(tuple))
    }

    /// Convenience for element-only tuples.
    pub fn add(&mut self, name: &str, elems: &[usize]) -> Result<bool> {
        self.insert(name, elems.iter().map(|&x| Slot::Elem(x)).collect())
    }

    pub(crate) fn insert_unchecked(&mut self, name: &str, tuple: Tuple) {
        self.rels.entry(name.to_string()).or_default().insert(tuple);
    }

    pub fn relabel(&self, map: &[usize], new_size: usize) -> Structure {
        let mut out = Structure::empty(self.vocab.clone(), new_size);
        for (name, ts) in &self.rels {
            let set = out.rels.get_mut(name).expect("same vocabulary");
            for t in ts {
                set.insert(t.iter().map(|s| s.map(|x| map[x])).collect());
            }
        }
        out
    }

    /// Substructure on the ids in `keep` (sorted), renumbered in order.
    /// Tuples mentioning other ids are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Structure {
        let mut map = vec![usize::MAX; self.size];
        for (i, &x) in keep.iter().enumerate() {
            map[x] = i;
        }
        let mut out = Structure::empty(self.vocab.clone(), keep.len());
        for (name, ts) in &self.rels {
            let set = out.rels.get_mut(name).expect("same vocabulary");
            for t in ts {
                if t.iter().all(|s| s.ids().iter().all(|&x| map[x] != usize::MAX)) {
                    set.insert(t.iter().map(|s| s.map(|x| map[x])).collect());
                }
            }
        }
        out
    }

    /// Elements appearing in some tuple of `name` at position `pos`.
    pub fn column(&self, name: &str, pos: usize) -> BTreeSet<usize> {
        self.tuples(name)
            .iter()
            .flat_map(|t| t[pos].ids().to_vec())
            .collect()
    }

    /// Pairs `(a, b)` of a binary element relation.
    pub fn pairs(&self, name: &str) -> Vec<(usize, usize)> {
        self.tuples(name)
            .iter()
            .filter_map(|t| match t.as_slice() {
                [Slot::Elem(a), Slot::Elem(b)] => Some((*a, *b)),
                _ => None,
            })
            .collect()
    }

    /// Elements satisfying a unary element relation.
    pub fn unary(&self, name: &str) -> BTreeSet<usize> {
        self.tuples(name)
            .iter()
            .filter_map(|t| match t.as_slice() {
                [Slot::Elem(a)] => Some(*a),
                _ => None,
            })
            .collect()
    }
}

/// Checks every structure invariant, reporting the first violation.
pub fn validate(a: &Structure) -> std::result::Result<(), Violation> {
    if a.size == 0 {
        return Err(Violation::EmptyUniverse);
    }
    for (name, ts) in &a.rels {
        let Some(kinds) = a.vocab.kinds(name) else {
            return Err(Violation::UnknownRelation { relation: name.clone() });
        };
        for t in ts {
            if t.len() != kinds.len() || t.iter().zip(kinds).any(|(s, k)| s.kind() != *k) {
                return Err(Violation::KindMismatch { relation: name.clone() });
            }
            for s in t {
                if let Some(&id) = s.ids().iter().find(|&&x| x >= a.size) {
                    return Err(Violation::IdOutOfRange { relation: name.clone(), id });
                }
                if let Slot::Set(v) = s {
                    if v.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Violation::UnsortedSet { relation: name.clone() });
                    }
                }
            }
        }
    }
    Ok(())
}

const PAIR_SELECTOR: &str = "in_a";

/// Disjoint union of `a` and `b` with a unary relation selecting `a`'s elements.
///
/// Relation names are prefixed with `a.` and `b.` so that both sides may share
/// a vocabulary.
pub fn pair(a: &Structure, b: &Structure) -> Structure {
    let mut vocab = Vocabulary::new().with(PAIR_SELECTOR, &[Kind::Element]);
    for (n, k) in a.vocab.iter() {
        vocab.insert(format!("a.{n}"), k.to_vec());
    }
    for (n, k) in b.vocab.iter() {
        vocab.insert(format!("b.{n}"), k.to_vec());
    }
    let mut out = Structure::empty(vocab, a.size + b.size);
    for x in 0..a.size {
        out.insert_unchecked(PAIR_SELECTOR, vec![Slot::Elem(x)]);
    }
    for (n, ts) in &a.rels {
        for t in ts {
            out.insert_unchecked(&format!("a.{n}"), t.clone());
        }
    }
    for (n, ts) in &b.rels {
        for t in ts {
            out.insert_unchecked(&format!("b.{n}"), t.iter().map(|s| s.map(|x| x + a.size)).collect());
        }
    }
    out
}

/// Recovers both components of a pair.
pub fn unpair(p: &Structure) -> Result<(Structure, Structure)> {
    if !p.vocab.contains(PAIR_SELECTOR) {
        return Err(Error::VocabularyMismatch("not a pair structure".into()));
    }
    let left = p.unary(PAIR_SELECTOR);
    let right: Vec<usize> = (0..p.size).filter(|x| !left.contains(x)).collect();
    let left: Vec<usize> = left.into_iter().collect();
    let mut out = Vec::new();
    for (prefix, ids) in [("a.", &left), ("b.", &right)] {
        let mut vocab = Vocabulary::new();
        for (n, k) in p.vocab.iter() {
            if let Some(rest) = n.strip_prefix(prefix) {
                vocab.insert(rest.to_string(), k.to_vec());
            }
        }
        let mut map = vec![usize::MAX; p.size];
        for (i, &x) in ids.iter().enumerate() {
            map[x] = i;
        }
        let mut s = Structure::empty(vocab, ids.len());
        for (n, ts) in &p.rels {
            let Some(rest) = n.strip_prefix(prefix) else { continue };
            for t in ts {
                if t.iter().any(|sl| sl.ids().iter().any(|&x| map[x] == usize::MAX)) {
                    return Err(Error::Invalid(format!("tuple of `{n}` crosses the pair boundary")));
                }
                s.insert_unchecked(rest, t.iter().map(|sl| sl.map(|x| map[x])).collect());
            }
        }
        out.push(s);
    }
    let b = out.pop().expect("two sides");
    let a = out.pop().expect("two sides");
    Ok((a, b))
}
