//! Tabulating `A ↦ L(t(A))` over all small inputs of a transduction.

use serde::{Serialize, Serializer};

use crate::logic::{self, Formula};
use crate::structures::{enumerate_class, Structure};
use crate::transduction::{apply, language_compose, Dedup, Transduction};
use crate::Result;

/// A language on the outputs of a transduction.
pub enum Language<'a> {
    Sentence(Formula),
    Native(&'a (dyn Fn(&Structure) -> Result<bool> + Sync)),
}

impl Language<'_> {
    fn test(&self, b: &Structure) -> Result<bool> {
        match self {
            Language::Sentence(f) => logic::holds(f, b),
            Language::Native(l) => l(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub size: usize,
    #[serde(serialize_with = "structure_json")]
    pub input: Structure,
    /// Whether some output lies in the language.
    pub composed: bool,
    /// The same, from every undeduplicated output checked one by one; only
    /// for sentences.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<bool>,
}

fn structure_json<S: Serializer>(a: &Structure, s: S) -> std::result::Result<S::Ok, S::Error> {
    a.to_json_value().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub input_class: String,
    pub max_size: usize,
    pub rows: Vec<ProbeRow>,
    pub accepted: usize,
    pub disagreements: usize,
}

/// Runs `t` and `l` on every input of size `1..=n`, one worker per chunk.
pub fn recognizability_probe(t: &Transduction, l: &Language, n: usize) -> Result<ProbeReport> {
    t.validate()?;
    let mut corpus = Vec::new();
    for m in 1..=n {
        corpus.extend(enumerate_class(&t.input, m)?);
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(threads).max(1);
    let parts: Vec<Result<Vec<ProbeRow>>> = std::thread::scope(|s| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|a| row(t, l, a)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("probe worker panicked")).collect()
    });
    let mut rows = Vec::with_capacity(corpus.len());
    for p in parts {
        rows.extend(p?);
    }
    let accepted = rows.iter().filter(|r| r.composed).count();
    let disagreements = rows.iter().filter(|r| r.direct.is_some_and(|d| d != r.composed)).count();
    Ok(ProbeReport { input_class: t.input.to_string(), max_size: n, rows, accepted, disagreements })
}

fn row(t: &Transduction, l: &Language, a: &Structure) -> Result<ProbeRow> {
    let composed = language_compose(t, |b| l.test(b))(a)?;
    let direct = match l {
        Language::Sentence(f) => {
            let mut any = false;
            for r in apply(t, a, Dedup::None)? {
                any |= logic::holds(f, &r.output)?;
            }
            Some(any)
        }
        Language::Native(_) => None,
    };
    Ok(ProbeRow { size: a.size(), input: a.clone(), composed, direct })
}
