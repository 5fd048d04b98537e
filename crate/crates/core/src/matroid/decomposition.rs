use serde::{Deserialize, Serialize};

use super::{connectivity, Matroid};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

/// Largest element count for exhaustive decomposition search ((2n−5)!! trees).
pub const MAX_BRANCH_LEAVES: usize = 9;

/// An unrooted tree with internal degree 3 whose leaves are the elements.
///
/// `leaves[e]` is the node carrying element `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDecomposition {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub leaves: Vec<usize>,
}

impl BranchDecomposition {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>, leaves: Vec<usize>) -> Result<BranchDecomposition> {
        let t = BranchDecomposition { nodes, edges, leaves };
        t.validate()?;
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(format!("bad decomposition: {m}")));
        let n = self.leaves.len();
        if n == 0 {
            return bad("no elements".into());
        }
        if self.nodes == 0 || self.edges.len() + 1 != self.nodes {
            return bad("a tree on k nodes has k−1 edges".into());
        }
        let mut deg = vec![0usize; self.nodes];
        for &(u, v) in &self.edges {
            if u >= self.nodes || v >= self.nodes || u == v {
                return bad(format!("edge ({u}, {v})"));
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut is_leaf = vec![false; self.nodes];
        for &l in &self.leaves {
            if l >= self.nodes || is_leaf[l] {
                return bad(format!("leaf node {l} is out of range or repeated"));
            }
            is_leaf[l] = true;
        }
        for x in 0..self.nodes {
            let want = if is_leaf[x] { usize::from(n > 1) } else { 3 };
            if deg[x] != want {
                return bad(format!("node {x} has degree {} instead of {want}", deg[x]));
            }
        }
        let parent = self.parents();
        if parent.iter().skip(1).any(|p| p.is_none()) {
            return bad("not connected".into());
        }
        Ok(())
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Parents when rooted at node 0, with the visiting order.
    fn parents(&self) -> Vec<Option<usize>> {
        self.rooted().0
    }

    fn rooted(&self) -> (Vec<Option<usize>>, Vec<usize>) {
        let adj = self.adjacency();
        let mut parent = vec![None; self.nodes];
        let mut seen = vec![false; self.nodes];
        let mut order = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    order.push(y);
                }
            }
            i += 1;
        }
        (parent, order)
    }

    /// For each edge `(u, v)`, the elements on the `v` side.
    pub fn cuts(&self) -> Vec<Mask> {
        let (parent, order) = self.rooted();
        let mut below = vec![0 as Mask; self.nodes];
        for (e, &l) in self.leaves.iter().enumerate() {
            below[l] |= subsets::singleton(e);
        }
        for &x in order.iter().rev() {
            if let Some(p) = parent[x] {
                below[p] |= below[x];
            }
        }
        let full = subsets::full(self.len());
        self.edges
            .iter()
            .map(|&(u, v)| if parent[v] == Some(u) { below[v] } else { full & !below[u] })
            .collect()
    }

    /// Maximum of `cost` over the edge cuts; 0 for a single element.
    pub fn width(&self, cost: impl Fn(Mask) -> usize) -> usize {
        self.cuts().into_iter().map(cost).max().unwrap_or(0)
    }

    /// The same tree with element `e` renamed to `perm[e]`.
    pub fn permute(&self, perm: &[usize]) -> BranchDecomposition {
        let mut leaves = vec![0; self.leaves.len()];
        for (e, &l) in self.leaves.iter().enumerate() {
            leaves[perm[e]] = l;
        }
        BranchDecomposition { nodes: self.nodes, edges: self.edges.clone(), leaves }
    }

    /// Graphviz text; leaves are labelled by their element.
    pub fn to_dot(&self) -> String {
        let mut label = vec![String::new(); self.nodes];
        for (e, &l) in self.leaves.iter().enumerate() {
            label[l] = e.to_string();
        }
        let mut s = String::from("graph decomposition {\n");
        for (x, l) in label.iter().enumerate() {
            if l.is_empty() {
                s.push_str(&format!("  n{x} [shape=point];\n"));
            } else {
                s.push_str(&format!("  n{x} [label=\"{l}\"];\n"));
            }
        }
        for &(u, v) in &self.edges {
            s.push_str(&format!("  n{u} -- n{v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Calls `f` on every decomposition of `0..n`, each labelled tree once.
///
/// Leaf `e` is node `e`; trees are built by inserting leaf k into each edge in turn.
pub fn for_each_decomposition(n: usize, mut f: impl FnMut(&BranchDecomposition)) -> Result<()> {
    crate::error::budget("decomposition leaves", n, MAX_BRANCH_LEAVES)?;
    match n {
        0 => Err(Error::Domain("decompositions need at least one element".into())),
        1 => {
            f(&BranchDecomposition { nodes: 1, edges: vec![], leaves: vec![0] });
            Ok(())
        }
        _ => {
            let mut edges = vec![(0, 1)];
            insert(2, n, &mut edges, &mut f);
            Ok(())
        }
    }
}

fn insert(k: usize, n: usize, edges: &mut Vec<(usize, usize)>, f: &mut impl FnMut(&BranchDecomposition)) {
    if k == n {
        let nodes = if n == 2 { 2 } else { 2 * n - 2 };
        f(&BranchDecomposition { nodes, edges: edges.clone(), leaves: (0..n).collect() });
        return;
    }
    let w = n + k - 2;
    for i in 0..edges.len() {
        let (u, v) = edges[i];
        edges[i] = (u, w);
        edges.push((w, v));
        edges.push((w, k));
        insert(k + 1, n, edges, f);
        edges.pop();
        edges.pop();
        edges[i] = (u, v);
    }
}

/// Minimum width over all decompositions of `0..n`, with the first optimal tree
/// in enumeration order.
pub fn optimal_decomposition(n: usize, cost: impl Fn(Mask) -> usize) -> Result<(usize, BranchDecomposition)> {
    crate::error::budget("decomposition leaves", n, MAX_BRANCH_LEAVES)?;
    let full = subsets::full(n);
    let table: Vec<usize> = (0..=full).map(|x| if x == 0 || x == full { 0 } else { cost(x) }).collect();
    let mut best: Option<(usize, BranchDecomposition)> = None;
    for_each_decomposition(n, |t| {
        let w = t.cuts().into_iter().map(|c| table[c as usize]).max().unwrap_or(0);
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, t.clone()));
        }
    })?;
    best.ok_or_else(|| Error::Internal("no decomposition enumerated".into()))
}

/// Branchwidth with connectivity `r(X) + r(E∖X) − r(E)` as the cut cost.
pub fn branchwidth<M: Matroid + ?Sized>(m: &M) -> Result<(usize, BranchDecomposition)> {
    let full = m.ground();
    optimal_decomposition(m.len(), |x| {
        debug_assert!(x != 0 && x != full);
        connectivity(m, x).expect("proper cut")
    })
}
