//! Any structure with element relations as a plain hypergraph.
//!
//! Element `v` becomes copies `(v, 0..=K)` (K the largest arity) joined by a
//! group hyperedge. A tuple of relation `j` becomes `{q_j, (a₁, 1), …, (a_k, k)}`.
//! Copy colours are spelled out by palette vertices `p_0..p_K` carrying the
//! chain `{p_0} ⊂ {p_0, p_1} ⊂ …` and edges `{p_c, (v, c)}`; the relation
//! markers `q_j` carry their own chain.

use std::collections::{BTreeSet, HashMap};

use super::CatalogEntry;
use crate::structures::{build, hyperedges_named, is_isomorphic, ClassId, Kind, Slot, Structure, Vocabulary};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

const INPUT: ClassId = ClassId::KAryRelations(2);

pub(super) fn entry() -> CatalogEntry {
    let (k, m) = shape(&INPUT.vocabulary()).expect("relations have element arguments");
    let extra = k + 1 + m;
    CatalogEntry::new(
        "structure-to-hypergraph",
        INPUT,
        ClassId::Hypergraphs,
        "copies per element, tuple hyperedges with relation markers, colours spelled by a palette chain",
        |a, _| encode_to_hypergraph(a),
        |b| decode_from_hypergraph(&INPUT, b),
    )
    .sized(move |n| (k + 1) * n + extra)
    .corpus(3, None)
}

/// Largest arity (at least 1) and number of relations.
fn shape(v: &Vocabulary) -> Result<(usize, usize)> {
    let mut k = 1;
    for (name, kinds) in v.iter() {
        if kinds.is_empty() || kinds.iter().any(|&x| x != Kind::Element) {
            return Err(Error::Domain(format!("relation `{name}` needs element arguments")));
        }
        k = k.max(kinds.len());
    }
    Ok((k, v.len()))
}

struct Layout {
    n: usize,
    k: usize,
    m: usize,
}

impl Layout {
    fn copy(&self, v: usize, c: usize) -> usize {
        v * (self.k + 1) + c
    }

    fn palette(&self, c: usize) -> usize {
        self.n * (self.k + 1) + c
    }

    fn marker(&self, j: usize) -> usize {
        self.n * (self.k + 1) + self.k + 1 + j
    }

    fn size(&self) -> usize {
        self.marker(self.m)
    }
}

pub fn encode_to_hypergraph(a: &Structure) -> Result<Structure> {
    let (k, m) = shape(a.vocabulary())?;
    let l = Layout { n: a.size(), k, m };
    crate::error::budget("hypergraph vertices", l.size(), subsets::MAX_GROUND)?;
    let mut edges: BTreeSet<Mask> = BTreeSet::new();
    for v in 0..l.n {
        edges.insert(subsets::from_elems((0..=k).map(|c| l.copy(v, c))));
        for c in 0..=k {
            edges.insert(subsets::from_elems([l.palette(c), l.copy(v, c)]));
        }
    }
    for c in 0..=k {
        edges.insert(subsets::from_elems((0..=c).map(|i| l.palette(i))));
    }
    for j in 0..m {
        edges.insert(subsets::from_elems((0..=j).map(|i| l.marker(i))));
    }
    for (j, (_, tuples)) in a.relations().enumerate() {
        for t in tuples {
            let mut e = subsets::singleton(l.marker(j));
            for (i, s) in t.iter().enumerate() {
                e |= subsets::singleton(l.copy(s.ids()[0], i + 1));
            }
            edges.insert(e);
        }
    }
    Ok(build::hypergraph(l.size(), &edges.into_iter().collect::<Vec<_>>()))
}

/// Reads back a member of `class`. Candidate palettes and marker chains are
/// tried in turn; a candidate is accepted when re-encoding reproduces `b`.
pub fn decode_from_hypergraph(class: &ClassId, b: &Structure) -> Result<Structure> {
    let vocab = class.vocabulary();
    let (k, m) = shape(&vocab)?;
    let total = b.size();
    let fixed = k + 1 + m;
    if total <= fixed || !(total - fixed).is_multiple_of(k + 1) {
        return Err(Error::Domain(format!("{total} vertices do not fit the gadget layout")));
    }
    let n = (total - fixed) / (k + 1);
    let edges: BTreeSet<Mask> = hyperedges_named(b, "hyperedge").into_iter().collect();
    let mut palettes = Vec::new();
    chains(&edges, 0, k + 1, &mut Vec::new(), &mut palettes);
    for pal in &palettes {
        let used = subsets::from_elems(pal.iter().copied());
        let mut markers = Vec::new();
        chains(&edges, used, m, &mut Vec::new(), &mut markers);
        for mk in &markers {
            if let Some(a) = read(&vocab, n, k, pal, mk, &edges, total) {
                if a.size() == n && is_isomorphic(&encode_to_hypergraph(&a)?, b)?.is_some() {
                    return Ok(a);
                }
            }
        }
    }
    Err(Error::Domain("no palette reading reproduces the hypergraph".into()))
}

/// Sequences `x_0, …, x_{len-1}` avoiding `used` with every prefix set a hyperedge.
fn chains(edges: &BTreeSet<Mask>, used: Mask, len: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    let have = subsets::from_elems(prefix.iter().copied());
    for &e in edges {
        if e & have == have && subsets::size(e) == prefix.len() + 1 && e & used == 0 {
            let x = (e & !have).trailing_zeros() as usize;
            prefix.push(x);
            chains(edges, used, len, prefix, out);
            prefix.pop();
        }
    }
}

fn read(
    vocab: &Vocabulary,
    n: usize,
    k: usize,
    palette: &[usize],
    markers: &[usize],
    edges: &BTreeSet<Mask>,
    total: usize,
) -> Option<Structure> {
    let special = subsets::from_elems(palette.iter().chain(markers).copied());
    let mut colour = vec![usize::MAX; total];
    for x in (0..total).filter(|&x| !subsets::contains(special, x)) {
        let cs: Vec<usize> = (0..=k)
            .filter(|&c| edges.contains(&subsets::from_elems([palette[c], x])))
            .collect();
        if cs.len() != 1 {
            return None;
        }
        colour[x] = cs[0];
    }
    // group hyperedges: one copy of every colour, nothing special
    let mut element = vec![usize::MAX; total];
    let mut count = 0;
    for &e in edges {
        if e & special != 0 || subsets::size(e) != k + 1 {
            continue;
        }
        let cs: BTreeSet<usize> = subsets::iter(e).map(|x| colour[x]).collect();
        if cs.len() != k + 1 || subsets::iter(e).any(|x| element[x] != usize::MAX) {
            continue;
        }
        for x in subsets::iter(e) {
            element[x] = count;
        }
        count += 1;
    }
    if count != n || element.iter().enumerate().any(|(x, &el)| !subsets::contains(special, x) && el == usize::MAX) {
        return None;
    }
    let mut a = Structure::empty(vocab.clone(), n);
    let names: Vec<(String, usize)> = vocab.iter().map(|(s, kinds)| (s.to_string(), kinds.len())).collect();
    let marker_index: HashMap<usize, usize> = markers.iter().enumerate().map(|(j, &q)| (q, j)).collect();
    for &e in edges {
        let ms: Vec<usize> = subsets::iter(e & special).collect();
        let [q] = ms.as_slice() else { continue };
        let Some(&j) = marker_index.get(q) else { continue };
        let arity = names[j].1;
        let rest: Vec<usize> = subsets::iter(e & !special).collect();
        if rest.len() != arity {
            continue;
        }
        let mut tuple = vec![Slot::Elem(0); arity];
        let mut seen = vec![false; arity];
        for &x in &rest {
            let c = colour[x];
            if c == 0 || c > arity || seen[c - 1] {
                return None;
            }
            seen[c - 1] = true;
            tuple[c - 1] = Slot::Elem(element[x]);
        }
        a.insert(&names[j].0, tuple).ok()?;
    }
    Some(a)
}
