use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{sensitivity_classes, Hypergraph, RankDecomposition};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

/// Largest `k`; colours are `1..=2^k` and each table has `4^k` cells.
pub const MAX_COLOUR_BITS: usize = 8;

/// Largest leaf count accepted by the decoder (it runs on every leaf subset).
const MAX_DECODE_LEAVES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CompiledNode {
    /// Colours of `∅` and of the leaf's own vertex.
    Leaf { empty: usize, single: usize },
    /// `alpha[a - 1][b - 1]` is the colour for left colour `a` and right colour `b`.
    Inner { left: usize, right: usize, alpha: Vec<Vec<usize>> },
}

/// A rooted binary tree labelled for the bottom-up colour automaton.
///
/// The decoded vertices are the leaves in left-to-right order; a leaf set is a
/// hyperedge iff its run ends in an accepting root colour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompiledDecomposition {
    pub k: usize,
    pub root: usize,
    pub nodes: Vec<CompiledNode>,
    pub accepting: Vec<usize>,
}

impl CompiledDecomposition {
    pub fn colours(&self) -> usize {
        1 << self.k
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(format!("bad compiled decomposition: {m}")));
        if self.k > MAX_COLOUR_BITS {
            return bad(format!("k = {} exceeds {MAX_COLOUR_BITS}", self.k));
        }
        let c = self.colours();
        let ok = |x: usize| (1..=c).contains(&x);
        if self.root >= self.nodes.len() {
            return bad("root out of range".into());
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                CompiledNode::Leaf { empty, single } => {
                    if !ok(*empty) || !ok(*single) {
                        return bad(format!("leaf {i} has a colour outside 1..={c}"));
                    }
                }
                CompiledNode::Inner { left, right, alpha } => {
                    for &ch in [left, right] {
                        if ch >= self.nodes.len() {
                            return bad(format!("node {i} has child {ch} out of range"));
                        }
                        parents[ch] += 1;
                    }
                    if alpha.len() != c || alpha.iter().any(|row| row.len() != c || !row.iter().all(|&x| ok(x))) {
                        return bad(format!("node {i} needs a {c}×{c} table of colours in 1..={c}"));
                    }
                }
            }
        }
        for (i, &p) in parents.iter().enumerate() {
            let want = usize::from(i != self.root);
            if p != want {
                return bad(format!("node {i} has {p} parents"));
            }
        }
        if self.reachable() != self.nodes.len() {
            return bad("not every node hangs below the root".into());
        }
        let mut seen = BTreeSet::new();
        if self.accepting.iter().any(|&a| !ok(a) || !seen.insert(a)) {
            return bad("accepting colours must be distinct and in range".into());
        }
        Ok(())
    }

    fn reachable(&self) -> usize {
        let mut stack = vec![self.root];
        let mut count = 0;
        while let Some(x) = stack.pop() {
            count += 1;
            if count > self.nodes.len() {
                break;
            }
            if let CompiledNode::Inner { left, right, .. } = &self.nodes[x] {
                stack.push(*left);
                stack.push(*right);
            }
        }
        count
    }

    pub fn from_json(text: &str) -> Result<CompiledDecomposition> {
        let s: CompiledDecomposition = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("compiled decompositions serialize")
    }
}

/// The edge whose removal leaves the smallest larger side; ties go to the
/// lexicographically least `(min, max)` endpoint pair.
pub fn root_edge(t: &RankDecomposition) -> Option<usize> {
    let n = t.len();
    let cuts = t.cuts();
    (0..t.edges.len()).min_by_key(|&i| {
        let s = subsets::size(cuts[i]);
        let (u, v) = t.edges[i];
        (s.max(n - s), u.min(v), u.max(v))
    })
}

struct Rooted {
    nodes: Vec<(Option<(usize, usize)>, Mask)>,
    leaf_element: Vec<Option<usize>>,
    root: usize,
}

/// Roots `t` at the midpoint of edge `e` (or at its only leaf).
fn root_tree(t: &RankDecomposition, e: Option<usize>) -> Result<Rooted> {
    let mut adj = vec![Vec::new(); t.nodes];
    for &(u, v) in &t.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut element = vec![None; t.nodes];
    for (x, &l) in t.leaves.iter().enumerate() {
        element[l] = Some(x);
    }
    let mut r = Rooted { nodes: Vec::new(), leaf_element: Vec::new(), root: 0 };
    fn build(x: usize, from: Option<usize>, adj: &[Vec<usize>], element: &[Option<usize>], r: &mut Rooted) -> usize {
        let id = if let Some(v) = element[x] {
            r.nodes.push((None, subsets::singleton(v)));
            r.leaf_element.push(Some(v));
            r.nodes.len() - 1
        } else {
            let kids: Vec<usize> = adj[x].iter().copied().filter(|&y| Some(y) != from).collect();
            let a = build(kids[0], Some(x), adj, element, r);
            let b = build(kids[1], Some(x), adj, element, r);
            r.nodes.push((Some((a, b)), r.nodes[a].1 | r.nodes[b].1));
            r.leaf_element.push(None);
            r.nodes.len() - 1
        };
        id
    }
    match e {
        None if t.len() == 1 => {
            r.root = build(t.leaves[0], None, &adj, &element, &mut r);
        }
        None => return Err(Error::Domain("a root edge is needed for two or more vertices".into())),
        Some(i) => {
            let &(u, v) = t.edges.get(i).ok_or_else(|| Error::Domain(format!("edge {i} out of range")))?;
            let a = build(u, Some(v), &adj, &element, &mut r);
            let b = build(v, Some(u), &adj, &element, &mut r);
            r.nodes.push((Some((a, b)), r.nodes[a].1 | r.nodes[b].1));
            r.leaf_element.push(None);
            r.root = r.nodes.len() - 1;
        }
    }
    Ok(r)
}

/// Labels the rooted decomposition with leaf colour pairs and `α` tables.
///
/// Returns the compiled tree and, for each decoded vertex (leaf in left-to-right
/// order), the original vertex. `k` defaults to the least value that fits every
/// node's sensitivity; `root` defaults to [`root_edge`].
pub fn compile_decomposition(
    g: &Hypergraph,
    t: &RankDecomposition,
    root: Option<usize>,
    k: Option<usize>,
) -> Result<(CompiledDecomposition, Vec<usize>)> {
    t.validate()?;
    if t.len() != g.len() {
        return Err(Error::Domain("decomposition and hypergraph have different vertex counts".into()));
    }
    let r = root_tree(t, root.or_else(|| root_edge(t)))?;
    let classes: Vec<Vec<usize>> = r.nodes.iter().map(|&(_, u)| sensitivity_classes(g, u)).collect::<Result<_>>()?;
    let needed = classes.iter().map(|c| c.iter().max().map_or(1, |m| m + 1)).max().unwrap_or(1);
    let fit = (0..=MAX_COLOUR_BITS).find(|&k| 1 << k >= needed);
    let k = match (k, fit) {
        (Some(k), Some(f)) if k >= f && k <= MAX_COLOUR_BITS => k,
        (Some(k), _) => {
            return Err(Error::Domain(format!("sensitivity {needed} does not fit in 2^{k} colours")));
        }
        (None, Some(f)) => f,
        (None, None) => return Err(Error::Budget { what: "colour bits", value: needed, limit: 1 << MAX_COLOUR_BITS }),
    };
    let c = 1usize << k;
    let mut nodes = Vec::with_capacity(r.nodes.len());
    for (i, &(kids, u)) in r.nodes.iter().enumerate() {
        let node = match kids {
            None => CompiledNode::Leaf { empty: classes[i][0] + 1, single: classes[i][1] + 1 },
            Some((a, b)) => {
                let (ua, ub) = (r.nodes[a].1, r.nodes[b].1);
                let mut table = vec![vec![None; c]; c];
                for y in subsets::submasks(ua) {
                    let cy = classes[a][subsets::extract(y, ua) as usize];
                    for z in subsets::submasks(ub) {
                        let cz = classes[b][subsets::extract(z, ub) as usize];
                        let cx = classes[i][subsets::extract(y | z, u) as usize] + 1;
                        match table[cy][cz] {
                            None => table[cy][cz] = Some(cx),
                            Some(prev) if prev != cx => {
                                return Err(Error::Internal(format!("colours at node {i} are not compositional")));
                            }
                            _ => {}
                        }
                    }
                }
                let alpha = table.into_iter().map(|row| row.into_iter().map(|x| x.unwrap_or(1)).collect()).collect();
                CompiledNode::Inner { left: a, right: b, alpha }
            }
        };
        nodes.push(node);
    }
    let full = subsets::full(g.len());
    let mut accepting = BTreeSet::new();
    for x in subsets::submasks(full) {
        if g.is_edge(x) {
            accepting.insert(classes[r.root][x as usize] + 1);
        }
    }
    let s = CompiledDecomposition { k, root: r.root, nodes, accepting: accepting.into_iter().collect() };
    let vertices = leaf_order(&s).into_iter().map(|l| r.leaf_element[l].expect("leaf")).collect();
    Ok((s, vertices))
}

/// Leaf node ids, left to right.
pub fn leaf_order(s: &CompiledDecomposition) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![s.root];
    while let Some(x) = stack.pop() {
        match &s.nodes[x] {
            CompiledNode::Leaf { .. } => out.push(x),
            CompiledNode::Inner { left, right, .. } => {
                stack.push(*right);
                stack.push(*left);
            }
        }
    }
    out
}

/// Colour of every node on the leaf set `x` (bit i = i-th leaf in left-to-right order).
pub fn colour_run(s: &CompiledDecomposition, x: Mask) -> Vec<usize> {
    let leaves = leaf_order(s);
    let mut chosen = vec![false; s.nodes.len()];
    for (i, &l) in leaves.iter().enumerate() {
        chosen[l] = subsets::contains(x, i);
    }
    let mut colour = vec![0; s.nodes.len()];
    fn go(v: usize, s: &CompiledDecomposition, chosen: &[bool], colour: &mut [usize]) -> usize {
        let c = match &s.nodes[v] {
            CompiledNode::Leaf { empty, single } => {
                if chosen[v] {
                    *single
                } else {
                    *empty
                }
            }
            CompiledNode::Inner { left, right, alpha } => {
                let a = go(*left, s, chosen, colour);
                let b = go(*right, s, chosen, colour);
                alpha[a - 1][b - 1]
            }
        };
        colour[v] = c;
        c
    }
    go(s.root, s, &chosen, &mut colour);
    colour
}

/// The hypergraph on the leaves whose hyperedges are the accepted leaf sets.
pub fn decode_decomposition(s: &CompiledDecomposition) -> Result<Hypergraph> {
    s.validate()?;
    let m = leaf_order(s).len();
    crate::error::budget("decoded leaves", m, MAX_DECODE_LEAVES)?;
    let accept: BTreeSet<usize> = s.accepting.iter().copied().collect();
    let edges = subsets::submasks(subsets::full(m)).filter(|&x| accept.contains(&colour_run(s, x)[s.root]));
    Hypergraph::new(m, edges)
}
