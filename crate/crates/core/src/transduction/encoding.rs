use serde::Serialize;

use super::{apply, Dedup, Transduction};
use crate::structures::{is_isomorphic, Structure};
use crate::Result;

/// Anything that maps a structure to a set of structures, optionally with origins.
pub trait StructureMap {
    fn name(&self) -> String;
    fn run(&self, a: &Structure) -> Result<Vec<(Structure, Option<Vec<usize>>)>>;
}

impl StructureMap for Transduction {
    fn name(&self) -> String {
        format!("transduction {} -> {}", self.input, self.output)
    }

    fn run(&self, a: &Structure) -> Result<Vec<(Structure, Option<Vec<usize>>)>> {
        Ok(apply(self, a, Dedup::WithOrigins)?.into_iter().map(|t| (t.output, Some(t.origin))).collect())
    }
}

type MapFn = dyn Fn(&Structure) -> Result<Vec<(Structure, Option<Vec<usize>>)>> + Send + Sync;

/// A map given by Rust code rather than formulas.
pub struct NativeMap {
    name: String,
    f: Box<MapFn>,
}

impl NativeMap {
    pub fn new<F>(name: &str, f: F) -> NativeMap
    where
        F: Fn(&Structure) -> Result<Vec<(Structure, Option<Vec<usize>>)>> + Send + Sync + 'static,
    {
        NativeMap { name: name.to_string(), f: Box::new(f) }
    }

    /// A deterministic map without origin information.
    pub fn function<F>(name: &str, f: F) -> NativeMap
    where
        F: Fn(&Structure) -> Result<Structure> + Send + Sync + 'static,
    {
        NativeMap::new(name, move |a| Ok(vec![(f(a)?, None)]))
    }
}

impl StructureMap for NativeMap {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn run(&self, a: &Structure) -> Result<Vec<(Structure, Option<Vec<usize>>)>> {
        (self.f)(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodingFailure {
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodingReport {
    pub checked: usize,
    pub failures: Vec<EncodingFailure>,
}

impl EncodingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `dec ∘ enc` against the identity on each corpus member.
///
/// A member passes when some decoded output is isomorphic to it and, if both
/// maps report origins, the composed origin map of that output is a bijection.
pub fn check_encoding(enc: &dyn StructureMap, dec: &dyn StructureMap, corpus: &[Structure]) -> EncodingReport {
    let failures = corpus
        .iter()
        .enumerate()
        .filter_map(|(index, a)| check_one(enc, dec, a).err().map(|reason| EncodingFailure { index, reason }))
        .collect();
    EncodingReport { checked: corpus.len(), failures }
}

fn check_one(enc: &dyn StructureMap, dec: &dyn StructureMap, a: &Structure) -> Result<(), String> {
    let encoded = enc.run(a).map_err(|e| format!("encode failed: {e}"))?;
    if encoded.is_empty() {
        return Err("encode produced no output".into());
    }
    let mut reason = String::from("no decoded output is isomorphic to the input");
    for (b, ob) in &encoded {
        let decoded = match dec.run(b) {
            Ok(d) => d,
            Err(e) => {
                reason = format!("decode failed: {e}");
                continue;
            }
        };
        for (c, oc) in &decoded {
            if c.size() != a.size() {
                reason = format!("decoded size {} differs from input size {}", c.size(), a.size());
                continue;
            }
            if !matches!(is_isomorphic(c, a), Ok(Some(_))) {
                continue;
            }
            match (ob, oc) {
                (Some(ob), Some(oc)) => {
                    let mut hit = vec![false; a.size()];
                    for &y in oc {
                        hit[ob[y]] = true;
                    }
                    if hit.iter().all(|&h| h) {
                        return Ok(());
                    }
                    reason = "composed origins are not a bijection".into();
                }
                _ => return Ok(()),
            }
        }
    }
    Err(reason)
}

#[cfg(test)]
mod tests {
    use super::super::library::*;
    use super::super::{apply_step, Budget, Step};
    use super::*;
    use crate::structures::{build, enumerate_class, ClassId};

    #[test]
    fn identity_passes() {
        let id = Transduction::identity(ClassId::Trees);
        let corpus = enumerate_class(&ClassId::Trees, 4).unwrap();
        assert!(check_encoding(&id, &id, &corpus).passed());
    }

    #[test]
    fn four_to_two_letters_on_short_strings() {
        let mut corpus = Vec::new();
        for n in 1..=3 {
            corpus.extend(enumerate_class(&ClassId::Strings(4), n).unwrap());
        }
        let r = check_encoding(&strings_4_to_2_encode(), &strings_4_to_2_decode(), &corpus);
        assert_eq!(r.checked, 84);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn copying_is_not_inverted_by_identity() {
        let copy = NativeMap::new("copy", |a| {
            let mut out = Vec::new();
            for (b, o) in apply_step(&Step::Copy(2), a, Budget::default())? {
                out.push((b.restrict(&(0..b.size()).collect::<Vec<_>>()), Some(o)));
            }
            Ok(out)
        });
        let id = NativeMap::function("identity", |a| Ok(a.clone()));
        let r = check_encoding(&copy, &id, &[build::string(2, &[0, 1])]);
        assert_eq!(r.failures.len(), 1);
    }
}
