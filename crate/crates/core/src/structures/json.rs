use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Kind, Slot, Structure, Violation, Vocabulary};
use crate::{Error, Result};

/// Largest universe accepted from a file.
pub const MAX_UNIVERSE: usize = 4096;

/// Structure file contents before any invariant is checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStructure {
    pub vocabulary: Vec<RawRelation>,
    pub universe: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<RawSlot>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRelation {
    pub name: String,
    pub kinds: Vec<Kind>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawSlot {
    Elem(usize),
    Set(Vec<usize>),
}

impl RawStructure {
    pub fn parse(text: &str) -> Result<RawStructure> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// First violated invariant, checking the file-level ones that a
    /// [`Structure`] cannot represent (duplicates, unsorted sets).
    pub fn violation(&self) -> Option<Violation> {
        let mut names = BTreeSet::new();
        for r in &self.vocabulary {
            if !names.insert(r.name.as_str()) {
                return Some(Violation::DuplicateRelation { relation: r.name.clone() });
            }
        }
        if self.universe == 0 {
            return Some(Violation::EmptyUniverse);
        }
        let kinds: BTreeMap<&str, &[Kind]> =
            self.vocabulary.iter().map(|r| (r.name.as_str(), r.kinds.as_slice())).collect();
        for (name, ts) in &self.relations {
            let relation = name.clone();
            let Some(ks) = kinds.get(name.as_str()) else {
                return Some(Violation::UnknownRelation { relation });
            };
            let mut seen = BTreeSet::new();
            for t in ts {
                let ok = t.len() == ks.len()
                    && t.iter().zip(ks.iter()).all(|(s, k)| {
                        matches!((s, k), (RawSlot::Elem(_), Kind::Element) | (RawSlot::Set(_), Kind::Set))
                    });
                if !ok {
                    return Some(Violation::KindMismatch { relation });
                }
                for s in t {
                    let ids = match s {
                        RawSlot::Elem(x) => std::slice::from_ref(x),
                        RawSlot::Set(v) => v.as_slice(),
                    };
                    if let Some(&id) = ids.iter().find(|&&x| x >= self.universe) {
                        return Some(Violation::IdOutOfRange { relation, id });
                    }
                    if ids.windows(2).any(|w| w[0] >= w[1]) {
                        return Some(Violation::UnsortedSet { relation });
                    }
                }
                if !seen.insert(t) {
                    return Some(Violation::DuplicateTuple { relation });
                }
            }
        }
        None
    }

    pub fn into_structure(self) -> Result<Structure> {
        if let Some(v) = self.violation() {
            return Err(Error::Invalid(v.to_string()));
        }
        crate::error::budget("universe size", self.universe, MAX_UNIVERSE)?;
        let vocab = Vocabulary::from_relations(self.vocabulary.into_iter().map(|r| (r.name, r.kinds)))?;
        let mut a = Structure::empty(vocab, self.universe);
        for (name, ts) in self.relations {
            for t in ts {
                let t = t
                    .into_iter()
                    .map(|s| match s {
                        RawSlot::Elem(x) => Slot::Elem(x),
                        RawSlot::Set(v) => Slot::Set(v),
                    })
                    .collect();
                a.insert_unchecked(&name, t);
            }
        }
        Ok(a)
    }

    pub fn from_structure(a: &Structure) -> RawStructure {
        RawStructure {
            vocabulary: a
                .vocabulary()
                .iter()
                .map(|(n, k)| RawRelation { name: n.to_string(), kinds: k.to_vec() })
                .collect(),
            universe: a.size(),
            relations: a
                .relations()
                .map(|(n, ts)| {
                    let rows = ts
                        .iter()
                        .map(|t| {
                            t.iter()
                                .map(|s| match s {
                                    Slot::Elem(x) => RawSlot::Elem(*x),
                                    Slot::Set(v) => RawSlot::Set(v.clone()),
                                })
                                .collect()
                        })
                        .collect();
                    (n.to_string(), rows)
                })
                .collect(),
        }
    }
}

impl Structure {
    pub fn from_json(text: &str) -> Result<Structure> {
        RawStructure::parse(text)?.into_structure()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(RawStructure::from_structure(self)).expect("plain data serializes")
    }

    /// Canonical compact JSON: relations sorted by name, tuples sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawStructure::from_structure(self)).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HYP: &str = r#"{"vocabulary":[{"name":"hyperedge","kinds":["set"]}],"universe":3,
        "relations":{"hyperedge":[[[0,2]],[[]]]}}"#;

    #[test]
    fn parse_and_canonical_output() {
        let a = Structure::from_json(HYP).unwrap();
        assert_eq!(a.size(), 3);
        assert_eq!(
            a.to_json(),
            r#"{"vocabulary":[{"name":"hyperedge","kinds":["set"]}],"universe":3,"relations":{"hyperedge":[[[]],[[0,2]]]}}"#
        );
        assert_eq!(Structure::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn file_level_violations() {
        let unsorted = HYP.replace("[0,2]", "[2,0]");
        assert!(matches!(RawStructure::parse(&unsorted).unwrap().violation(), Some(Violation::UnsortedSet { .. })));
        let dup = HYP.replace("[[]]]", "[[0,2]]]");
        assert!(matches!(RawStructure::parse(&dup).unwrap().violation(), Some(Violation::DuplicateTuple { .. })));
        let kind = HYP.replace("[[]]]", "[1]]");
        assert!(matches!(RawStructure::parse(&kind).unwrap().violation(), Some(Violation::KindMismatch { .. })));
        assert!(RawStructure::parse("{").is_err());
    }
}
