//! Tree encodings: label gadgets, first-child-next-sibling, sibling orders and
//! the laminar hypergraph bijection.

use std::collections::BTreeMap;

use super::{CatalogEntry, Choice};
use crate::structures::{build, children, letter, tree_parents, ClassId, Slot, Structure};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

const LABELS: usize = 3;

pub(super) fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry::new(
            "labelled-tree-to-unlabelled",
            ClassId::LabelledTrees(LABELS),
            ClassId::Trees,
            "each node gets a hub child carrying label+1 leaves",
            |a, _| unlabel(a),
            relabel,
        )
        .linear(LABELS + 2)
        .corpus(5, None),
        CatalogEntry::new(
            "ordered-tree-to-labelled-binary",
            ClassId::OrderedTrees,
            ClassId::LabelledTrees(2),
            "first-child-next-sibling; label 0 for first children and the root, 1 for next siblings",
            |a, _| first_child_next_sibling(a),
            from_first_child_next_sibling,
        )
        .linear(1)
        .corpus(7, None),
        CatalogEntry::new(
            "binary-to-ordered-binary",
            ClassId::BinaryTrees,
            ClassId::OrderedTrees,
            "orders the children of every node",
            order_siblings,
            forget_order,
        )
        .linear(1)
        .corpus(7, None),
        CatalogEntry::new(
            "laminar",
            ClassId::LaminarHypergraphs,
            ClassId::Trees,
            "root, one node per hyperedge under its least superset, one leaf per vertex",
            |a, _| laminar_to_tree(a),
            tree_to_laminar,
        )
        .linear(3)
        .corpus(5, None),
        CatalogEntry::new(
            "tree-to-laminar",
            ClassId::Trees,
            ClassId::LaminarHypergraphs,
            "adds a leaf below the root and every inner node, then reads the laminar family",
            |a, _| pad_and_read(a),
            unpad,
        )
        .linear(2)
        .corpus(7, None),
    ]
}

fn parents(a: &Structure) -> Result<Vec<Option<usize>>> {
    tree_parents(a).ok_or_else(|| Error::Domain("not a rooted tree".into()))
}

fn label_of(a: &Structure, x: usize, k: usize) -> Result<usize> {
    (0..k)
        .find(|&l| a.holds(&letter(l), &[Slot::Elem(x)]))
        .ok_or_else(|| Error::Domain(format!("node {x} has no label")))
}

fn unlabel(a: &Structure) -> Result<Structure> {
    let p = parents(a)?;
    let n = p.len();
    let mut out = p.clone();
    out.extend((0..n).map(Some));
    for x in 0..n {
        for _ in 0..=label_of(a, x, LABELS)? {
            out.push(Some(n + x));
        }
    }
    Ok(build::tree(&out))
}

fn relabel(b: &Structure) -> Result<Structure> {
    let p = parents(b)?;
    let ch = children(&p);
    let leaf = |x: usize| ch[x].is_empty();
    let hub = |x: usize| !leaf(x) && ch[x].iter().all(|&c| leaf(c));
    let originals: Vec<usize> = (0..p.len()).filter(|&x| !leaf(x) && !hub(x)).collect();
    let mut index = vec![usize::MAX; p.len()];
    for (i, &x) in originals.iter().enumerate() {
        index[x] = i;
    }
    let mut parent = Vec::with_capacity(originals.len());
    let mut labels = Vec::with_capacity(originals.len());
    for &x in &originals {
        let hubs: Vec<usize> = ch[x].iter().copied().filter(|&c| hub(c)).collect();
        if hubs.len() != 1 || ch[x].iter().any(|&c| leaf(c)) {
            return Err(Error::Domain(format!("node {x} does not carry exactly one label gadget")));
        }
        let l = ch[hubs[0]].len() - 1;
        if l >= LABELS {
            return Err(Error::Domain(format!("label gadget of size {} is out of range", l + 1)));
        }
        labels.push(l);
        parent.push(p[x].map(|y| index[y]));
    }
    if originals.is_empty() || parent.contains(&Some(usize::MAX)) {
        return Err(Error::Domain("a label gadget has children of its own".into()));
    }
    Ok(build::labelled_tree(LABELS, &parent, &labels))
}

/// Children of every node in sibling order.
fn ordered_children(a: &Structure, p: &[Option<usize>]) -> Vec<Vec<usize>> {
    let mut before = vec![0usize; p.len()];
    for (_, y) in a.pairs("sib") {
        before[y] += 1;
    }
    let mut ch = children(p);
    for c in &mut ch {
        c.sort_by_key(|&x| before[x]);
    }
    ch
}

fn first_child_next_sibling(a: &Structure) -> Result<Structure> {
    let p = parents(a)?;
    let mut parent = vec![None; p.len()];
    let mut labels = vec![0; p.len()];
    for ch in ordered_children(a, &p) {
        for (i, &x) in ch.iter().enumerate() {
            if i == 0 {
                parent[x] = p[x];
            } else {
                parent[x] = Some(ch[i - 1]);
                labels[x] = 1;
            }
        }
    }
    Ok(build::labelled_tree(2, &parent, &labels))
}

fn from_first_child_next_sibling(b: &Structure) -> Result<Structure> {
    let bp = parents(b)?;
    let n = bp.len();
    let labels: Vec<usize> = (0..n).map(|x| label_of(b, x, 2)).collect::<Result<_>>()?;
    let bch = children(&bp);
    for x in 0..n {
        for l in 0..2 {
            if bch[x].iter().filter(|&&c| labels[c] == l).count() > 1 {
                return Err(Error::Domain(format!("node {x} has two children with label {l}")));
            }
        }
        if bp[x].is_none() && labels[x] != 0 {
            return Err(Error::Domain("the root must carry label 0".into()));
        }
    }
    let root = bp.iter().position(Option::is_none).expect("trees have a root");
    if bch[root].iter().any(|&c| labels[c] == 1) {
        return Err(Error::Domain("the root has no siblings".into()));
    }
    // walk down from the root so that every binary parent is resolved first
    let mut parent = vec![None; n];
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        if x != root {
            let y = bp[x].expect("non-root");
            parent[x] = if labels[x] == 0 { Some(y) } else { parent[y] };
            order[parent[x].expect("non-root")].push(x);
        }
        stack.extend(bch[x].iter().copied());
    }
    // siblings were pushed in discovery order; sort by their chain position
    let mut chain_pos = vec![0usize; n];
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &c in &bch[x] {
            chain_pos[c] = if labels[c] == 1 { chain_pos[x] + 1 } else { 0 };
            stack.push(c);
        }
    }
    for o in &mut order {
        o.sort_by_key(|&x| chain_pos[x]);
    }
    Ok(build::ordered_tree(&parent, &order))
}

fn order_siblings(a: &Structure, choice: &mut Choice) -> Result<Structure> {
    let p = parents(a)?;
    let mut ch = children(&p);
    for c in &mut ch {
        choice.shuffle(c);
    }
    Ok(build::ordered_tree(&p, &ch))
}

fn forget_order(b: &Structure) -> Result<Structure> {
    let p = parents(b)?;
    if children(&p).iter().any(|c| c.len() > 2) {
        return Err(Error::Domain("a node has more than two children".into()));
    }
    Ok(build::binary_tree(&p))
}

/// Laminar family as a tree: root `0`, vertex `v` at `1 + v`, hyperedge `i` at `1 + n + i`.
fn laminar_tree(n: usize, edges: &[Mask]) -> Vec<Option<usize>> {
    let smallest_superset = |x: Mask, strict: bool| {
        edges
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e & x == x && !(strict && e == x))
            .min_by_key(|&(_, &e)| subsets::size(e))
            .map_or(0, |(i, _)| 1 + n + i)
    };
    let mut parent = vec![None];
    parent.extend((0..n).map(|v| Some(smallest_superset(subsets::singleton(v), false))));
    parent.extend(edges.iter().map(|&e| Some(smallest_superset(e, true))));
    parent
}

fn laminar_to_tree(a: &Structure) -> Result<Structure> {
    let edges = crate::structures::hyperedges_named(a, "hyperedge");
    Ok(build::tree(&laminar_tree(a.size(), &edges)))
}

/// Inverse of [`laminar_tree`] on trees where a non-root node with one child has a leaf child.
fn read_laminar(p: &[Option<usize>]) -> Result<(usize, Vec<Mask>)> {
    let ch = children(p);
    let root = p.iter().position(Option::is_none).expect("trees have a root");
    let leaves: Vec<usize> = (0..p.len()).filter(|&x| x != root && ch[x].is_empty()).collect();
    if leaves.is_empty() {
        return Err(Error::Domain("a one-node tree has no vertices".into()));
    }
    if leaves.len() > subsets::MAX_GROUND {
        return Err(Error::Budget { what: "laminar vertices", value: leaves.len(), limit: subsets::MAX_GROUND });
    }
    let vertex: BTreeMap<usize, usize> = leaves.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut below = vec![0 as Mask; p.len()];
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(crate::structures::depth_of(p, x)));
    for &x in &order {
        if let Some(&v) = vertex.get(&x) {
            below[x] = subsets::singleton(v);
        }
        if let Some(y) = p[x] {
            below[y] |= below[x];
        }
    }
    let mut edges = Vec::new();
    for x in 0..p.len() {
        if x == root || ch[x].is_empty() {
            continue;
        }
        if ch[x].len() == 1 && !ch[ch[x][0]].is_empty() {
            return Err(Error::Domain(format!("node {x} repeats the hyperedge of its only child")));
        }
        edges.push(below[x]);
    }
    Ok((leaves.len(), edges))
}

fn tree_to_laminar(b: &Structure) -> Result<Structure> {
    let (n, edges) = read_laminar(&parents(b)?)?;
    Ok(build::laminar(n, &edges))
}

fn pad_and_read(a: &Structure) -> Result<Structure> {
    let mut p = parents(a)?;
    let ch = children(&p);
    for x in 0..ch.len() {
        if p[x].is_none() || !ch[x].is_empty() {
            p.push(Some(x));
        }
    }
    let (n, edges) = read_laminar(&p)?;
    Ok(build::laminar(n, &edges))
}

fn unpad(b: &Structure) -> Result<Structure> {
    let p = laminar_tree(b.size(), &crate::structures::hyperedges_named(b, "hyperedge"));
    let ch = children(&p);
    let mut drop = vec![false; p.len()];
    for x in 0..p.len() {
        if ch[x].is_empty() {
            continue;
        }
        let Some(&l) = ch[x].iter().find(|&&c| ch[c].is_empty()) else {
            return Err(Error::Domain(format!("inner node {x} has no padding leaf")));
        };
        drop[l] = true;
    }
    let keep: Vec<usize> = (0..p.len()).filter(|&x| !drop[x]).collect();
    let mut index = vec![usize::MAX; p.len()];
    for (i, &x) in keep.iter().enumerate() {
        index[x] = i;
    }
    let parent: Vec<Option<usize>> = keep.iter().map(|&x| p[x].map(|y| index[y])).collect();
    Ok(build::tree(&parent))
}
