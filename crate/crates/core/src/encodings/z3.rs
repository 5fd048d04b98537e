//! ℤ₃ vertex weights that single out one child of every hyperedge of a laminar
//! hypergraph, and the left-then-rights walk built from two such weightings.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::subsets::{self, Mask};
use crate::width::Hypergraph;
use crate::{Error, Result};

/// Vertex weights in ℤ₃.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Z3Weights {
    pub weights: Vec<u8>,
}

impl Z3Weights {
    /// Sum of the weights of `set`, mod 3.
    pub fn weight(&self, set: Mask) -> u8 {
        (subsets::iter(set).map(|v| self.weights[v] as usize).sum::<usize>() % 3) as u8
    }
}

/// Hyperedge containment forest of a laminar family.
struct Forest {
    edges: Vec<Mask>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Forest {
    fn new(g: &Hypergraph) -> Result<Forest> {
        let edges = g.edges().to_vec();
        for (i, &x) in edges.iter().enumerate() {
            if x == 0 {
                return Err(Error::Domain("empty hyperedge".into()));
            }
            for &y in &edges[i + 1..] {
                let m = x & y;
                if m != 0 && m != x && m != y {
                    return Err(Error::Domain(format!(
                        "hyperedges {:?} and {:?} overlap",
                        subsets::elems(x),
                        subsets::elems(y)
                    )));
                }
            }
        }
        let parent: Vec<Option<usize>> = edges
            .iter()
            .map(|&x| {
                (0..edges.len())
                    .filter(|&j| edges[j] != x && edges[j] & x == x)
                    .min_by_key(|&j| subsets::size(edges[j]))
            })
            .collect();
        let mut children = vec![Vec::new(); edges.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        Ok(Forest { edges, parent, children })
    }

    fn index(&self, x: Mask) -> Option<usize> {
        self.edges.iter().position(|&e| e == x)
    }
}

const TABLE: [[u8; 2]; 3] = [[2, 1], [1, 0], [2, 0]];

/// Weights such that the total is `target` and, below every hyperedge with at
/// least two children, the chosen child (from `chosen`, else the first child
/// in numeric order) has the unique largest weight under 0 < 1 < 2.
pub fn z3_weight_assignment(g: &Hypergraph, chosen: &BTreeMap<Mask, Mask>, target: u8) -> Result<Z3Weights> {
    if target > 2 {
        return Err(Error::Domain(format!("{target} is not in ℤ₃")));
    }
    let f = Forest::new(g)?;
    let mut pick: Vec<Option<usize>> = vec![None; f.edges.len()];
    for (&x, &c) in chosen {
        let (Some(i), Some(j)) = (f.index(x), f.index(c)) else {
            return Err(Error::Domain("chosen child map mentions a non-hyperedge".into()));
        };
        if f.parent[j] != Some(i) {
            return Err(Error::Domain(format!("{:?} is not a child of {:?}", subsets::elems(c), subsets::elems(x))));
        }
        pick[i] = Some(j);
    }
    let mut w = vec![0u8; g.len()];
    let tops: Vec<usize> = (0..f.edges.len()).filter(|&i| f.parent[i].is_none()).collect();
    assign(&f, &pick, subsets::full(g.len()), &tops, None, target, &mut w);
    let out = Z3Weights { weights: w };
    if out.weight(subsets::full(g.len())) != target {
        return Err(Error::Internal("total weight missed its target".into()));
    }
    for (i, ch) in f.children.iter().enumerate() {
        if ch.len() < 2 {
            continue;
        }
        let c = pick[i].unwrap_or(ch[0]);
        let wc = out.weight(f.edges[c]);
        if ch.iter().any(|&d| d != c && out.weight(f.edges[d]) >= wc) {
            return Err(Error::Internal("chosen child is not the unique heaviest".into()));
        }
    }
    Ok(out)
}

fn assign(f: &Forest, pick: &[Option<usize>], set: Mask, kids: &[usize], chosen: Option<usize>, a: u8, w: &mut [u8]) {
    let mut order: Vec<usize> = kids.to_vec();
    if let Some(c) = chosen.or(kids.first().copied()) {
        order.retain(|&d| d != c);
        order.insert(0, c);
    }
    let covered = kids.iter().fold(0, |m, &d| m | f.edges[d]);
    let private = set & !covered;
    let targets: Vec<u8> = match order.len() {
        0 => Vec::new(),
        1 if private != 0 => vec![0],
        1 => vec![a],
        _ => (0..order.len()).map(|i| if i < 2 { TABLE[a as usize][i] } else { 0 }).collect(),
    };
    let sum = targets.iter().map(|&t| t as usize).sum::<usize>();
    if private != 0 {
        w[private.trailing_zeros() as usize] = ((a as usize + 3 - sum % 3) % 3) as u8;
    }
    for (&d, &t) in order.iter().zip(&targets) {
        assign(f, pick, f.edges[d], &f.children[d], pick[d], t, w);
    }
}

/// Left and right child of a branching hyperedge and its representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub hyperedge: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub representative: Vec<usize>,
}

/// For every hyperedge with at least two children, takes the heaviest child
/// under each weighting as its left and right child, walks left once and then
/// right until a hyperedge with at most one child, and confirms that this
/// hyperedge is the only one meeting the walk's conditions.
pub fn verify_left_right_selection(g: &Hypergraph, left: &Z3Weights, right: &Z3Weights) -> Result<Vec<Selection>> {
    if left.weights.len() != g.len() || right.weights.len() != g.len() {
        return Err(Error::Domain("weights do not match the vertex set".into()));
    }
    let f = Forest::new(g)?;
    let m = f.edges.len();
    let heaviest = |i: usize, w: &Z3Weights| -> Result<usize> {
        let ch = &f.children[i];
        let best = ch.iter().map(|&d| w.weight(f.edges[d])).max().expect("branching");
        let top: Vec<usize> = ch.iter().copied().filter(|&d| w.weight(f.edges[d]) == best).collect();
        match top.as_slice() {
            [d] => Ok(*d),
            _ => Err(Error::Domain(format!("no unique heaviest child below {:?}", subsets::elems(f.edges[i])))),
        }
    };
    let branching = |i: usize| f.children[i].len() >= 2;
    let mut l = vec![None; m];
    let mut r = vec![None; m];
    for i in (0..m).filter(|&i| branching(i)) {
        l[i] = Some(heaviest(i, left)?);
        r[i] = Some(heaviest(i, right)?);
        if l[i] == r[i] {
            return Err(Error::Domain(format!("left and right coincide below {:?}", subsets::elems(f.edges[i]))));
        }
    }
    let is_left = |u: usize| f.parent[u].is_some_and(|p| l[p] == Some(u));
    let is_right = |u: usize| f.parent[u].is_some_and(|p| r[p] == Some(u));
    let mut out = Vec::new();
    for y in (0..m).filter(|&i| branching(i)) {
        let mut z = l[y].expect("branching");
        while branching(z) {
            z = r[z].expect("branching");
        }
        let ey = f.edges[y];
        let candidates: Vec<usize> = (0..m)
            .filter(|&c| !branching(c) && f.edges[c] & ey == f.edges[c] && c != y)
            .filter(|&c| {
                (0..m)
                    .filter(|&u| u != y && f.edges[u] & ey == f.edges[u] && f.edges[c] & f.edges[u] == f.edges[c])
                    .all(|u| {
                        let child_of_y = f.parent[u] == Some(y);
                        child_of_y == is_left(u) && (child_of_y || is_right(u)) && (u == c) == !branching(u)
                    })
            })
            .collect();
        if candidates != [z] {
            return Err(Error::Domain(format!(
                "{} hyperedges satisfy the walk conditions below {:?}",
                candidates.len(),
                subsets::elems(ey)
            )));
        }
        out.push(Selection {
            hyperedge: subsets::elems(ey),
            left: subsets::elems(f.edges[l[y].expect("branching")]),
            right: subsets::elems(f.edges[r[y].expect("branching")]),
            representative: subsets::elems(f.edges[z]),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[Mask]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().copied()).unwrap()
    }

    fn child_weights(g: &Hypergraph, w: &Z3Weights, parent: Mask) -> Vec<u8> {
        let f = Forest::new(g).unwrap();
        let i = f.index(parent).unwrap();
        f.children[i].iter().map(|&d| w.weight(f.edges[d])).collect()
    }

    #[test]
    fn table_rows() {
        // root {0..5} with children {0,1}, {2,3}, {4,5}
        let g = hg(6, &[0b111111, 0b000011, 0b001100, 0b110000]);
        let w = z3_weight_assignment(&g, &BTreeMap::new(), 1).unwrap();
        assert_eq!(child_weights(&g, &w, 0b111111), vec![1, 0, 0]);
        let g = hg(4, &[0b1111, 0b0011, 0b1100]);
        let w = z3_weight_assignment(&g, &BTreeMap::new(), 0).unwrap();
        assert_eq!(child_weights(&g, &w, 0b1111), vec![2, 1]);
    }

    #[test]
    fn single_vertex_base_case() {
        let g = hg(1, &[0b1]);
        for a in 0..3 {
            let w = z3_weight_assignment(&g, &BTreeMap::new(), a).unwrap();
            assert_eq!(w.weight(0b1), a);
        }
    }

    #[test]
    fn chosen_child_is_heaviest() {
        let g = hg(4, &[0b1111, 0b0011, 0b1100]);
        let chosen = BTreeMap::from([(0b1111, 0b1100)]);
        let w = z3_weight_assignment(&g, &chosen, 2).unwrap();
        assert_eq!(child_weights(&g, &w, 0b1111), vec![0, 2]);
        assert!(z3_weight_assignment(&g, &BTreeMap::from([(0b0011, 0b1100)]), 0).is_err());
        assert!(z3_weight_assignment(&hg(3, &[0b011, 0b110]), &BTreeMap::new(), 0).is_err());
    }

    #[test]
    fn chain_has_no_branching() {
        let g = hg(3, &[0b001, 0b011, 0b111]);
        let w = z3_weight_assignment(&g, &BTreeMap::new(), 0).unwrap();
        assert!(verify_left_right_selection(&g, &w, &w).unwrap().is_empty());
    }

    #[test]
    fn two_chains_below_a_root() {
        // root {0..3}; left chain {0,1} ⊃ {0}; right chain {2,3} ⊃ {2}
        let g = hg(4, &[0b1111, 0b0011, 0b0001, 0b1100, 0b0100]);
        let wl = z3_weight_assignment(&g, &BTreeMap::from([(0b1111, 0b0011)]), 0).unwrap();
        let wr = z3_weight_assignment(&g, &BTreeMap::from([(0b1111, 0b1100)]), 0).unwrap();
        let s = verify_left_right_selection(&g, &wl, &wr).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].representative, vec![0, 1]);
        assert!(verify_left_right_selection(&g, &wl, &wl).is_err());
    }
}
