//! Catalog of encodings between structure classes, each a forward map with a
//! one-sided inverse, plus the ℤ₃ weight construction for laminar hypergraphs.
//!
//! Every entry decodes any legal image of its forward map, not only the
//! canonical one: [`encode_random`] makes random legal choices and shuffles
//! the output elements.

mod graphs;
mod hypergraph;
mod matroids;
mod trees;
mod z3;

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::Serialize;

use crate::structures::{self, build, canonical_form, census, census_bound, enumerate_class, member, ClassId, Structure};
use crate::transduction::{check_encoding, library, EncodingReport, StructureMap, Transduction};
use crate::{Error, Result};

pub use hypergraph::{decode_from_hypergraph, encode_to_hypergraph};
pub use matroids::{is_sparse_paving, sparse_paving_non_bases};
pub use z3::{verify_left_right_selection, z3_weight_assignment, Selection, Z3Weights};

/// Source of the nondeterministic choices an encoding may make.
pub(crate) enum Choice<'a> {
    Least,
    Random(&'a mut dyn RngCore),
}

impl Choice<'_> {
    pub(crate) fn shuffle<T>(&mut self, v: &mut [T]) {
        if let Choice::Random(rng) = self {
            v.shuffle(*rng);
        }
    }
}

type ForwardFn = dyn Fn(&Structure, &mut Choice) -> Result<Structure> + Send + Sync;
type DecodeFn = dyn Fn(&Structure) -> Result<Structure> + Send + Sync;
type SizeFn = dyn Fn(usize) -> usize + Send + Sync;

pub struct CatalogEntry {
    pub id: String,
    pub input: ClassId,
    pub output: ClassId,
    pub summary: String,
    forward: Box<ForwardFn>,
    decode: Box<DecodeFn>,
    size_bound: Box<SizeFn>,
    corpus_max: usize,
    corpus_filter: Option<fn(&Structure) -> bool>,
    transduction: Option<(Transduction, Transduction)>,
}

impl CatalogEntry {
    fn new<F, D>(id: &str, input: ClassId, output: ClassId, summary: &str, forward: F, decode: D) -> CatalogEntry
    where
        F: Fn(&Structure, &mut Choice) -> Result<Structure> + Send + Sync + 'static,
        D: Fn(&Structure) -> Result<Structure> + Send + Sync + 'static,
    {
        CatalogEntry {
            id: id.to_string(),
            input,
            output,
            summary: summary.to_string(),
            forward: Box::new(forward),
            decode: Box::new(decode),
            size_bound: Box::new(|n| n),
            corpus_max: 3,
            corpus_filter: None,
            transduction: None,
        }
    }

    fn linear(self, k: usize) -> CatalogEntry {
        self.sized(move |n| k * n)
    }

    fn sized(mut self, f: impl Fn(usize) -> usize + Send + Sync + 'static) -> CatalogEntry {
        self.size_bound = Box::new(f);
        self
    }

    fn corpus(mut self, max: usize, filter: Option<fn(&Structure) -> bool>) -> CatalogEntry {
        self.corpus_max = max;
        self.corpus_filter = filter;
        self
    }

    /// Largest output size for inputs of size `n`.
    pub fn size_bound(&self, n: usize) -> usize {
        (self.size_bound)(n)
    }

    /// Forward and decode transductions, when the entry has them.
    pub fn transduction(&self) -> Option<&(Transduction, Transduction)> {
        self.transduction.as_ref()
    }

    /// Size bound of the documented round-trip corpus.
    pub fn corpus_max(&self) -> usize {
        self.corpus_max
    }

    pub fn encode(&self, a: &Structure) -> Result<Structure> {
        self.check_input(a)?;
        (self.forward)(a, &mut Choice::Least)
    }

    /// Encodes with random legal choices and a random numbering of the output.
    pub fn encode_random(&self, a: &Structure, rng: &mut dyn RngCore) -> Result<Structure> {
        self.check_input(a)?;
        let b = (self.forward)(a, &mut Choice::Random(rng))?;
        let mut perm: Vec<usize> = (0..b.size()).collect();
        perm.shuffle(rng);
        Ok(b.relabel(&perm, b.size()))
    }

    pub fn decode(&self, b: &Structure) -> Result<Structure> {
        if !member(&self.output, b)? {
            return Err(Error::ClassMismatch(format!("input to decoder `{}` is not in {}", self.id, self.output)));
        }
        (self.decode)(b)
    }

    fn check_input(&self, a: &Structure) -> Result<()> {
        if !member(&self.input, a)? {
            return Err(Error::ClassMismatch(format!("input to encoder `{}` is not in {}", self.id, self.input)));
        }
        Ok(())
    }

    /// The documented corpus: every input class member up to `max` elements
    /// (default [`corpus_max`](Self::corpus_max)) that satisfies the entry's side conditions.
    pub fn default_corpus(&self, max: Option<usize>) -> Result<Vec<Structure>> {
        let max = max.unwrap_or(self.corpus_max);
        let mut out = Vec::new();
        for n in 1..=max {
            for a in enumerate_class(&self.input, n)? {
                if self.corpus_filter.is_none_or(|f| f(&a)) {
                    out.push(a);
                }
            }
        }
        Ok(out)
    }
}

struct Forward<'a>(&'a CatalogEntry);
struct Decode<'a>(&'a CatalogEntry);

impl StructureMap for Forward<'_> {
    fn name(&self) -> String {
        format!("{} (encode)", self.0.id)
    }

    fn run(&self, a: &Structure) -> Result<Vec<(Structure, Option<Vec<usize>>)>> {
        Ok(vec![(self.0.encode(a)?, None)])
    }
}

impl StructureMap for Decode<'_> {
    fn name(&self) -> String {
        format!("{} (decode)", self.0.id)
    }

    fn run(&self, b: &Structure) -> Result<Vec<(Structure, Option<Vec<usize>>)>> {
        Ok(vec![(self.0.decode(b)?, None)])
    }
}

pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

pub fn entry(id: &str) -> Result<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Domain(format!("no catalog entry `{id}`")))
}

pub fn encode(id: &str, a: &Structure) -> Result<Structure> {
    entry(id)?.encode(a)
}

pub fn decode(id: &str, b: &Structure) -> Result<Structure> {
    entry(id)?.decode(b)
}

pub fn encode_random(id: &str, a: &Structure, rng: &mut dyn RngCore) -> Result<Structure> {
    entry(id)?.encode_random(a, rng)
}

/// Checks `decode ∘ encode ≅ id` on `corpus`, splitting the work across threads.
/// Transduction-backed entries are checked through their transductions as well.
pub fn roundtrip_report(id: &str, corpus: &[Structure]) -> Result<EncodingReport> {
    let e = entry(id)?;
    let mut report = parallel_check(&Forward(e), &Decode(e), corpus);
    if let Some((t, u)) = &e.transduction {
        let via = parallel_check(t, u, corpus);
        for mut f in via.failures {
            f.reason = format!("transduction: {}", f.reason);
            report.failures.push(f);
        }
        report.failures.sort_by_key(|f| f.index);
    }
    Ok(report)
}

fn parallel_check<E, D>(enc: &E, dec: &D, corpus: &[Structure]) -> EncodingReport
where
    E: StructureMap + Sync,
    D: StructureMap + Sync,
{
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(threads).max(1);
    let parts: Vec<EncodingReport> = std::thread::scope(|s| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .map(|part| s.spawn(move || check_encoding(enc, dec, part)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("round-trip worker panicked")).collect()
    });
    let mut failures = Vec::new();
    for (i, part) in parts.into_iter().enumerate() {
        failures.extend(part.failures.into_iter().map(|mut f| {
            f.index += i * chunk;
            f
        }));
    }
    EncodingReport { checked: corpus.len(), failures }
}

/// How the output side of a growth comparison was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    /// Exact census of the output class.
    Census,
    /// Number of pairwise non-isomorphic images, a lower bound on the census.
    Images,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthCheck {
    pub id: String,
    pub n: usize,
    pub input_census: usize,
    /// Inputs of size at most `n` outside the encoder's domain, left out of
    /// `input_census`.
    pub rejected: usize,
    pub output_size: usize,
    pub output_count: usize,
    pub method: CountMethod,
    pub holds: bool,
}

/// Compares the number of inputs of size at most `n` in the encoder's domain
/// with `census(output, size_bound(n))`. When the output census is out of
/// reach, the number of non-isomorphic images stands in as a certified lower
/// bound.
pub fn growth_check(id: &str, n: usize) -> Result<GrowthCheck> {
    let e = entry(id)?;
    let output_size = e.size_bound(n);
    let mut seen = HashSet::new();
    let mut rejected = 0;
    for m in 1..=n {
        for a in enumerate_class(&e.input, m)? {
            let b = match e.encode(&a) {
                Ok(b) => b,
                Err(Error::Domain(_)) => {
                    rejected += 1;
                    continue;
                }
                Err(err) => return Err(err),
            };
            if b.size() > output_size {
                return Err(Error::Internal(format!(
                    "`{id}` produced {} elements from {m}, above its bound {output_size}",
                    b.size()
                )));
            }
            seen.insert(canonical_form(&b));
        }
    }
    let input_census = census(&e.input, n)? - rejected;
    let (output_count, method) = if output_size <= census_bound(&e.output) && census_is_cheap(&e.output, output_size) {
        (census(&e.output, output_size)?, CountMethod::Census)
    } else {
        (seen.len(), CountMethod::Images)
    };
    Ok(GrowthCheck { id: id.to_string(), n, input_census, rejected, output_size, output_count, method, holds: input_census <= output_count })
}

fn census_is_cheap(c: &ClassId, n: usize) -> bool {
    match c {
        ClassId::KAryRelations(_) | ClassId::Hypergraphs | ClassId::MatroidIndependence => n <= 3,
        ClassId::Pairs(..) => n <= 6,
        _ => true,
    }
}

fn strings_forward(a: &Structure, _: &mut Choice) -> Result<Structure> {
    let w = build::read_string(a, 4).ok_or_else(|| Error::Internal("string without letters".into()))?;
    let bits: Vec<usize> = w.iter().flat_map(|&l| [l >> 1, l & 1]).collect();
    Ok(build::string(2, &bits))
}

fn strings_decode(b: &Structure) -> Result<Structure> {
    let bits = build::read_string(b, 2).ok_or_else(|| Error::Internal("string without letters".into()))?;
    if bits.len() % 2 != 0 {
        return Err(Error::Domain("odd-length string is not an image".into()));
    }
    Ok(build::string(4, &bits.chunks(2).map(|p| 2 * p[0] + p[1]).collect::<Vec<_>>()))
}

fn bipartite_sides_at_most_3(a: &Structure) -> bool {
    let l = a.unary("left").len();
    l <= 3 && a.size() - l <= 3
}

fn matrix_at_most_3x3(a: &Structure) -> bool {
    // rows and columns are told apart by the entry relations
    let q = (0..).take_while(|&v| a.vocabulary().contains(&structures::matrix_rel(v))).count();
    structures::matrix_entries(a, q).is_some_and(|(r, c, _)| r.len() <= 3 && c.len() <= 3)
}

fn build_catalog() -> Vec<CatalogEntry> {
    let mut strings = CatalogEntry::new(
        "strings-4-to-2",
        ClassId::Strings(4),
        ClassId::Strings(2),
        "two binary letters per letter, high bit first",
        strings_forward,
        strings_decode,
    )
    .linear(2)
    .corpus(4, None);
    strings.transduction = Some((library::strings_4_to_2_encode(), library::strings_4_to_2_decode()));

    let pairs_class = ClassId::Pairs(Box::new(ClassId::Trees), Box::new(ClassId::Trees));
    let pairs = CatalogEntry::new(
        "pairs",
        ClassId::Trees,
        pairs_class,
        "a tree paired with itself; decoded by the first projection",
        |a, _| Ok(structures::pair(a, a)),
        |b| Ok(structures::unpair(b)?.0),
    )
    .linear(2)
    .corpus(7, None);

    let mut out = vec![strings];
    out.extend(trees::entries());
    out.push(hypergraph::entry());
    out.extend(matroids::entries());
    out.extend(graphs::entries());
    out.push(pairs);
    out
}
