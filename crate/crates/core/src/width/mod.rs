//! Bipartition rank and sensitivity of hypergraphs, hyper-rankwidth, and the
//! compile/decode pipeline for colour automata on decompositions.

mod compile;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::matroid::{independent_sets, optimal_decomposition, BranchDecomposition, Matroid};
use crate::structures::{build, hyperedges_named, Structure};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

pub use compile::{
    colour_run, compile_decomposition, decode_decomposition, leaf_order, root_edge, CompiledDecomposition,
    CompiledNode, MAX_COLOUR_BITS,
};

/// Largest vertex count for cut matrices (the matrix has 2^n cells).
pub const MAX_CUT_GROUND: usize = 20;

/// Decompositions of a hypergraph are branch decompositions over its vertices.
pub type RankDecomposition = BranchDecomposition;

/// Vertices `0..n` and a family of distinct hyperedges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Mask>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(r: RawHypergraph) -> Result<Hypergraph> {
        crate::error::budget("hypergraph vertices", r.n, subsets::MAX_GROUND)?;
        let mut edges = Vec::with_capacity(r.edges.len());
        for e in r.edges {
            if let Some(&v) = e.iter().find(|&&v| v >= r.n) {
                return Err(Error::Domain(format!("vertex {v} is out of range")));
            }
            let m = subsets::from_elems(e.iter().copied());
            if subsets::size(m) != e.len() {
                return Err(Error::Domain("hyperedge lists a vertex twice".into()));
            }
            edges.push(m);
        }
        Hypergraph::new(r.n, edges)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(g: Hypergraph) -> RawHypergraph {
        RawHypergraph { n: g.n, edges: g.edges.iter().map(|&e| subsets::elems(e)).collect() }
    }
}

impl Hypergraph {
    pub fn new<I: IntoIterator<Item = Mask>>(n: usize, edges: I) -> Result<Hypergraph> {
        if n == 0 {
            return Err(Error::Domain("a hypergraph needs at least one vertex".into()));
        }
        crate::error::budget("hypergraph vertices", n, subsets::MAX_GROUND)?;
        let mut edges: Vec<Mask> = edges.into_iter().collect();
        if let Some(e) = edges.iter().find(|&&e| e >> n != 0) {
            return Err(Error::Domain(format!("hyperedge {:?} is outside the vertex set", subsets::elems(*e))));
        }
        let len = edges.len();
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != len {
            return Err(Error::Domain("duplicate hyperedge".into()));
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[Mask] {
        &self.edges
    }

    pub fn is_edge(&self, x: Mask) -> bool {
        self.edges.binary_search(&x).is_ok()
    }

    /// Reads the `hyperedge` relation of a hypergraph-like structure.
    pub fn from_structure(a: &Structure) -> Result<Hypergraph> {
        if a.vocabulary().kinds("hyperedge").is_none() {
            return Err(Error::VocabularyMismatch("expected a `hyperedge` relation".into()));
        }
        Hypergraph::new(a.size(), hyperedges_named(a, "hyperedge"))
    }

    pub fn to_structure(&self) -> Structure {
        build::hypergraph(self.n, &self.edges)
    }

    /// Vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Hypergraph {
        let edges = self.edges.iter().map(|&e| subsets::from_elems(subsets::iter(e).map(|v| perm[v])));
        Hypergraph::new(self.n, edges).expect("permutations keep hyperedges distinct")
    }

    pub fn from_json(text: &str) -> Result<Hypergraph> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraphs serialize")
    }
}

/// Rows of the membership matrix `M[X, Z] = [X ∪ Z is a hyperedge]`, indexed by
/// `X ⊆ U` in local bit order; each row is a bitset over `Z ⊆ V ∖ U`.
fn cut_rows(g: &Hypergraph, u: Mask) -> Result<Vec<Vec<u64>>> {
    crate::error::budget("cut matrix vertices", g.n, MAX_CUT_GROUND)?;
    if u >> g.n != 0 {
        return Err(Error::Domain("cut side is not a set of vertices".into()));
    }
    let comp = subsets::full(g.n) & !u;
    let cols = 1usize << subsets::size(comp);
    let words = cols.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; 1 << subsets::size(u)];
    for &e in &g.edges {
        let x = subsets::extract(e & u, u) as usize;
        let z = subsets::extract(e & comp, comp) as usize;
        rows[x][z / 64] |= 1 << (z % 64);
    }
    Ok(rows)
}

fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[w] & b != 0 {
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn distinct(mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// GF(2) rank of the membership matrix of the cut `(U, V ∖ U)`.
pub fn bipartition_rank(g: &Hypergraph, u: Mask) -> Result<usize> {
    Ok(gf2_rank(distinct(cut_rows(g, u)?)))
}

/// Number of classes of `X ∼ Y` on subsets of `U`: no `Z ⊆ V ∖ U` tells `X ∪ Z` and `Y ∪ Z` apart.
pub fn sensitivity(g: &Hypergraph, u: Mask) -> Result<usize> {
    Ok(distinct(cut_rows(g, u)?).len())
}

/// `(rank, sensitivity)` of a cut, checking `rank ≤ sensitivity ≤ 2^rank`.
pub fn cut_profile(g: &Hypergraph, u: Mask) -> Result<(usize, usize)> {
    let rows = distinct(cut_rows(g, u)?);
    let s = rows.len();
    let r = gf2_rank(rows);
    // distinct rows of a rank-r matrix lie in a 2^r-element row space
    if r > s || (r < usize::BITS as usize && s > 1 << r) {
        return Err(Error::Internal(format!("cut with rank {r} has sensitivity {s}")));
    }
    Ok((r, s))
}

/// Class of each `X ⊆ U` (indexed by local bits), numbered 0, 1, … in order of
/// each class's lexicographically least member.
pub fn sensitivity_classes(g: &Hypergraph, u: Mask) -> Result<Vec<usize>> {
    let rows = cut_rows(g, u)?;
    let mut order: Vec<Mask> = (0..rows.len() as Mask).collect();
    order.sort_by(|&a, &b| subsets::lex_cmp(subsets::deposit(a, u), subsets::deposit(b, u)));
    let mut ids: HashMap<&[u64], usize> = HashMap::new();
    let mut class = vec![0; rows.len()];
    for x in order {
        let next = ids.len();
        class[x as usize] = *ids.entry(rows[x as usize].as_slice()).or_insert(next);
    }
    Ok(class)
}

/// Minimum over decompositions of the maximum cut rank, with the first optimal tree.
pub fn hyper_rankwidth(g: &Hypergraph) -> Result<(usize, RankDecomposition)> {
    crate::error::budget("cut matrix vertices", g.n, MAX_CUT_GROUND)?;
    optimal_decomposition(g.n, |u| bipartition_rank(g, u).expect("within budget"))
}

/// Sensitivity of `X₁` in the hypergraph whose hyperedges are the independent sets.
pub fn matroid_sensitivity<M: Matroid + ?Sized>(m: &M, x1: Mask) -> Result<usize> {
    crate::error::budget("cut matrix vertices", m.len(), MAX_CUT_GROUND)?;
    let h = Hypergraph::new(m.len(), independent_sets(m)?)?;
    sensitivity(&h, x1)
}
