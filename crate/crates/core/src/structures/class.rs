use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::{unpair, Kind, Slot, Structure, Vocabulary};
use crate::gf::Field;
use crate::subsets::{self, Mask};
use crate::{Error, Result};

/// The classes of structures known to the library.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassId {
    Strings(usize),
    Trees,
    LabelledTrees(usize),
    OrderedTrees,
    BinaryTrees,
    BoundedHeightTrees(usize),
    GraphsEdge,
    GraphsIncidence,
    AcyclicGraphs,
    Hypergraphs,
    LaminarHypergraphs,
    KUniformHypergraphs(usize),
    KAryRelations(usize),
    BipartiteGraphs,
    Matrices(usize),
    MatroidIndependence,
    MatroidNull(usize),
    Bool,
    Pairs(Box<ClassId>, Box<ClassId>),
}

const E: Kind = Kind::Element;
const S: Kind = Kind::Set;

pub(crate) fn letter(i: usize) -> String {
    format!("l{i}")
}

pub(crate) fn matrix_rel(a: usize) -> String {
    format!("v{a}")
}

impl ClassId {
    pub fn vocabulary(&self) -> Vocabulary {
        let v = Vocabulary::new();
        match self {
            ClassId::Strings(k) => (0..*k).fold(v.with("lt", &[E, E]), |v, i| v.with(&letter(i), &[E])),
            ClassId::Trees | ClassId::BinaryTrees | ClassId::BoundedHeightTrees(_) => {
                v.with("parent", &[E, E])
            }
            ClassId::LabelledTrees(k) => {
                (0..*k).fold(v.with("parent", &[E, E]), |v, i| v.with(&letter(i), &[E]))
            }
            ClassId::OrderedTrees => v.with("parent", &[E, E]).with("sib", &[E, E]),
            ClassId::GraphsEdge | ClassId::AcyclicGraphs => v.with("edge", &[E, E]),
            ClassId::GraphsIncidence => v.with("inc", &[E, E]),
            ClassId::Hypergraphs | ClassId::LaminarHypergraphs | ClassId::KUniformHypergraphs(_) => {
                v.with("hyperedge", &[S])
            }
            ClassId::KAryRelations(k) => v.with("R", &vec![E; *k]),
            ClassId::BipartiteGraphs => v.with("edge", &[E, E]).with("left", &[E]),
            ClassId::Matrices(q) => (0..*q).fold(v, |v, a| v.with(&matrix_rel(a), &[E, E])),
            ClassId::MatroidIndependence => v.with("independent", &[S]),
            ClassId::MatroidNull(q) => v.with("null", &vec![S; q.saturating_sub(1)]),
            ClassId::Bool => v,
            ClassId::Pairs(l, r) => {
                let mut out = v.with(super::PAIR_SELECTOR, &[E]);
                for (n, k) in l.vocabulary().iter() {
                    out.insert(format!("a.{n}"), k.to_vec());
                }
                for (n, k) in r.vocabulary().iter() {
                    out.insert(format!("b.{n}"), k.to_vec());
                }
                out
            }
        }
    }

    fn check_params(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Domain(format!("invalid class {self}: {m}")));
        match self {
            ClassId::Strings(0) | ClassId::LabelledTrees(0) => bad("alphabet must be nonempty"),
            ClassId::KUniformHypergraphs(0) => bad("k must be positive"),
            ClassId::Matrices(q) | ClassId::MatroidNull(q) => Field::new(*q).map(|_| ()),
            ClassId::Pairs(l, r) => {
                l.check_params()?;
                r.check_params()
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassId::Strings(k) => write!(f, "strings:{k}"),
            ClassId::Trees => write!(f, "trees"),
            ClassId::LabelledTrees(k) => write!(f, "labelled-trees:{k}"),
            ClassId::OrderedTrees => write!(f, "ordered-trees"),
            ClassId::BinaryTrees => write!(f, "binary-trees"),
            ClassId::BoundedHeightTrees(h) => write!(f, "bounded-height-trees:{h}"),
            ClassId::GraphsEdge => write!(f, "graphs-edge"),
            ClassId::GraphsIncidence => write!(f, "graphs-incidence"),
            ClassId::AcyclicGraphs => write!(f, "acyclic-graphs"),
            ClassId::Hypergraphs => write!(f, "hypergraphs"),
            ClassId::LaminarHypergraphs => write!(f, "laminar-hypergraphs"),
            ClassId::KUniformHypergraphs(k) => write!(f, "uniform-hypergraphs:{k}"),
            ClassId::KAryRelations(k) => write!(f, "relations:{k}"),
            ClassId::BipartiteGraphs => write!(f, "bipartite-graphs"),
            ClassId::Matrices(q) => write!(f, "matrices:{q}"),
            ClassId::MatroidIndependence => write!(f, "matroid-independence"),
            ClassId::MatroidNull(q) => write!(f, "matroid-null:{q}"),
            ClassId::Bool => write!(f, "bool"),
            ClassId::Pairs(l, r) => write!(f, "pairs({l},{r})"),
        }
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ClassId> {
        let s = s.trim();
        let err = || Error::Parse(format!("unknown class `{s}`"));
        if let Some(inner) = s.strip_prefix("pairs(").and_then(|r| r.strip_suffix(')')) {
            // split at the top-level comma
            let mut depth = 0usize;
            for (i, c) in inner.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth = depth.checked_sub(1).ok_or_else(err)?,
                    ',' if depth == 0 => {
                        let l = inner[..i].parse()?;
                        let r = inner[i + 1..].parse()?;
                        return Ok(ClassId::Pairs(Box::new(l), Box::new(r)));
                    }
                    _ => {}
                }
            }
            return Err(err());
        }
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a.parse::<usize>().map_err(|_| err())?)),
            None => (s, None),
        };
        let c = match (name, arg) {
            ("strings", Some(k)) => ClassId::Strings(k),
            ("trees", None) => ClassId::Trees,
            ("labelled-trees", Some(k)) => ClassId::LabelledTrees(k),
            ("ordered-trees", None) => ClassId::OrderedTrees,
            ("binary-trees", None) => ClassId::BinaryTrees,
            ("bounded-height-trees", Some(h)) => ClassId::BoundedHeightTrees(h),
            ("graphs-edge", None) => ClassId::GraphsEdge,
            ("graphs-incidence", None) => ClassId::GraphsIncidence,
            ("acyclic-graphs", None) => ClassId::AcyclicGraphs,
            ("hypergraphs", None) => ClassId::Hypergraphs,
            ("laminar-hypergraphs", None) => ClassId::LaminarHypergraphs,
            ("uniform-hypergraphs", Some(k)) => ClassId::KUniformHypergraphs(k),
            ("relations", Some(k)) => ClassId::KAryRelations(k),
            ("bipartite-graphs", None) => ClassId::BipartiteGraphs,
            ("matrices", Some(q)) => ClassId::Matrices(q),
            ("matroid-independence", None) => ClassId::MatroidIndependence,
            ("matroid-null", Some(q)) => ClassId::MatroidNull(q),
            ("bool", None) => ClassId::Bool,
            _ => return Err(err()),
        };
        c.check_params()?;
        Ok(c)
    }
}

impl serde::Serialize for ClassId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ClassId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<ClassId, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Whether `a` belongs to class `c`.
pub fn member(c: &ClassId, a: &Structure) -> Result<bool> {
    c.check_params()?;
    if a.vocabulary() != &c.vocabulary() {
        return Err(Error::VocabularyMismatch(format!("structure is not over the vocabulary of {c}")));
    }
    if super::validate(a).is_err() {
        return Ok(false);
    }
    Ok(match c {
        ClassId::Strings(k) => is_string(a, *k),
        ClassId::Trees => tree_parents(a).is_some(),
        ClassId::LabelledTrees(k) => tree_parents(a).is_some() && one_label_each(a, *k),
        ClassId::OrderedTrees => tree_parents(a).is_some_and(|p| sibling_orders_ok(a, &p)),
        ClassId::BinaryTrees => tree_parents(a).is_some_and(|p| max_children(&p) <= 2),
        ClassId::BoundedHeightTrees(h) => tree_parents(a).is_some_and(|p| tree_height(&p) <= *h),
        ClassId::GraphsEdge => simple_graph(a, "edge").is_some(),
        ClassId::AcyclicGraphs => simple_graph(a, "edge").is_some_and(|es| is_forest(a.size(), &es)),
        ClassId::GraphsIncidence => is_incidence_graph(a),
        ClassId::Hypergraphs | ClassId::KAryRelations(_) => true,
        ClassId::LaminarHypergraphs => {
            let es = hyperedges(a);
            es.iter().all(|&e| e != 0)
                && es.iter().all(|&x| es.iter().all(|&y| x & y == 0 || x & y == x || x & y == y))
        }
        ClassId::KUniformHypergraphs(k) => hyperedges(a).iter().all(|&e| subsets::size(e) == *k),
        ClassId::BipartiteGraphs => {
            let left = a.unary("left");
            simple_graph(a, "edge")
                .is_some_and(|es| es.iter().all(|&(x, y)| left.contains(&x) != left.contains(&y)))
        }
        ClassId::Matrices(q) => matrix_entries(a, *q).is_some(),
        ClassId::MatroidIndependence => {
            a.size() <= 20 && is_matroid_family(a.size(), &hyperedges_named(a, "independent"))
        }
        ClassId::MatroidNull(q) => is_null_family(a, *q)?,
        ClassId::Bool => a.size() == 1,
        ClassId::Pairs(l, r) => match unpair(a) {
            Ok((x, y)) => x.size() > 0 && y.size() > 0 && member(l, &x)? && member(r, &y)?,
            Err(_) => false,
        },
    })
}

fn is_string(a: &Structure, k: usize) -> bool {
    let n = a.size();
    let lt: BTreeSet<(usize, usize)> = a.pairs("lt").into_iter().collect();
    for x in 0..n {
        if lt.contains(&(x, x)) {
            return false;
        }
        for y in 0..n {
            if x != y && lt.contains(&(x, y)) == lt.contains(&(y, x)) {
                return false;
            }
            for z in 0..n {
                if lt.contains(&(x, y)) && lt.contains(&(y, z)) && !lt.contains(&(x, z)) {
                    return false;
                }
            }
        }
    }
    one_label_each(a, k)
}

fn one_label_each(a: &Structure, k: usize) -> bool {
    let mut count = vec![0usize; a.size()];
    for i in 0..k {
        for x in a.unary(&letter(i)) {
            count[x] += 1;
        }
    }
    count.iter().all(|&c| c == 1)
}

/// Parent array if the `parent` relation forms a rooted tree.
pub(crate) fn tree_parents(a: &Structure) -> Option<Vec<Option<usize>>> {
    let n = a.size();
    let mut parent = vec![None; n];
    for (p, c) in a.pairs("parent") {
        if parent[c].is_some() || p == c {
            return None;
        }
        parent[c] = Some(p);
    }
    if parent.iter().filter(|p| p.is_none()).count() != 1 {
        return None;
    }
    // every node must reach the root within n steps
    for start in 0..n {
        let mut x = start;
        let mut steps = 0;
        while let Some(p) = parent[x] {
            x = p;
            steps += 1;
            if steps > n {
                return None;
            }
        }
    }
    Some(parent)
}

pub(crate) fn children(parent: &[Option<usize>]) -> Vec<Vec<usize>> {
    let mut ch = vec![Vec::new(); parent.len()];
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            ch[*p].push(c);
        }
    }
    ch
}

fn max_children(parent: &[Option<usize>]) -> usize {
    children(parent).iter().map(|c| c.len()).max().unwrap_or(0)
}

pub(crate) fn depth(parent: &[Option<usize>], mut x: usize) -> usize {
    let mut d = 0;
    while let Some(p) = parent[x] {
        x = p;
        d += 1;
    }
    d
}

fn tree_height(parent: &[Option<usize>]) -> usize {
    (0..parent.len()).map(|x| depth(parent, x)).max().unwrap_or(0)
}

fn sibling_orders_ok(a: &Structure, parent: &[Option<usize>]) -> bool {
    let sib: BTreeSet<(usize, usize)> = a.pairs("sib").into_iter().collect();
    if sib.iter().any(|&(x, y)| x == y || parent[x].is_none() || parent[x] != parent[y]) {
        return false;
    }
    for ch in children(parent) {
        for &x in &ch {
            for &y in &ch {
                if x != y && sib.contains(&(x, y)) == sib.contains(&(y, x)) {
                    return false;
                }
                for &z in &ch {
                    if sib.contains(&(x, y)) && sib.contains(&(y, z)) && !sib.contains(&(x, z)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Undirected edges `a < b` of a symmetric irreflexive binary relation.
pub(crate) fn simple_graph(a: &Structure, rel: &str) -> Option<Vec<(usize, usize)>> {
    let ps: BTreeSet<(usize, usize)> = a.pairs(rel).into_iter().collect();
    if ps.iter().any(|&(x, y)| x == y || !ps.contains(&(y, x))) {
        return None;
    }
    Some(ps.into_iter().filter(|(x, y)| x < y).collect())
}

fn is_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        if uf[x] != x {
            let r = find(uf, uf[x]);
            uf[x] = r;
        }
        uf[x]
    }
    for &(x, y) in edges {
        let (rx, ry) = (find(&mut uf, x), find(&mut uf, y));
        if rx == ry {
            return false;
        }
        uf[rx] = ry;
    }
    true
}

fn is_incidence_graph(a: &Structure) -> bool {
    let inc = a.pairs("inc");
    let vertices: BTreeSet<usize> = inc.iter().map(|p| p.0).collect();
    let mut ends: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(v, e) in &inc {
        ends.entry(e).or_default().push(v);
    }
    if ends.keys().any(|e| vertices.contains(e)) {
        return false;
    }
    let mut seen = BTreeSet::new();
    for vs in ends.values() {
        if vs.len() != 2 || !seen.insert((vs[0].min(vs[1]), vs[0].max(vs[1]))) {
            return false;
        }
    }
    true
}

pub(crate) fn hyperedges(a: &Structure) -> Vec<Mask> {
    hyperedges_named(a, "hyperedge")
}

pub(crate) fn hyperedges_named(a: &Structure, rel: &str) -> Vec<Mask> {
    a.tuples(rel)
        .iter()
        .filter_map(|t| match t.as_slice() {
            [Slot::Set(xs)] => Some(subsets::from_elems(xs.iter().copied())),
            _ => None,
        })
        .collect()
}

/// Row and column ids and the entry table of a matrix structure.
/// Rows, columns and the entry at each (row, column).
pub(crate) type MatrixEntries = (Vec<usize>, Vec<usize>, BTreeMap<(usize, usize), usize>);

pub(crate) fn matrix_entries(a: &Structure, q: usize) -> Option<MatrixEntries> {
    let mut entries = BTreeMap::new();
    for v in 0..q {
        for (r, c) in a.pairs(&matrix_rel(v)) {
            if entries.insert((r, c), v).is_some() {
                return None;
            }
        }
    }
    let rows: BTreeSet<usize> = entries.keys().map(|k| k.0).collect();
    let cols: BTreeSet<usize> = entries.keys().map(|k| k.1).collect();
    if rows.intersection(&cols).next().is_some() {
        return None;
    }
    if entries.is_empty() {
        return Some(((0..a.size()).collect(), Vec::new(), entries));
    }
    if rows.len() + cols.len() != a.size() || entries.len() != rows.len() * cols.len() {
        return None;
    }
    Some((rows.into_iter().collect(), cols.into_iter().collect(), entries))
}

/// Matroid axioms on an explicit independence family.
pub fn is_matroid_family(n: usize, family: &[Mask]) -> bool {
    let fam: BTreeSet<Mask> = family.iter().copied().collect();
    if !fam.contains(&0) || fam.iter().any(|&x| x >> n != 0) {
        return false;
    }
    for &x in &fam {
        if subsets::iter(x).any(|i| !fam.contains(&(x & !(1 << i)))) {
            return false;
        }
    }
    for &i1 in &fam {
        for &i2 in &fam {
            if subsets::size(i1) < subsets::size(i2)
                && !subsets::iter(i2 & !i1).any(|x| fam.contains(&(i1 | 1 << x)))
            {
                return false;
            }
        }
    }
    true
}

/// Coefficient vector of a null tuple: element `e` gets the number of slots containing it.
pub(crate) fn null_coefficients(n: usize, q: usize, t: &[Slot]) -> Vec<u8> {
    let mut c = vec![0u8; n];
    for s in t {
        for &x in s.ids() {
            c[x] = ((c[x] as usize + 1) % q) as u8;
        }
    }
    c
}

fn is_null_family(a: &Structure, q: usize) -> Result<bool> {
    let n = a.size();
    crate::error::budget("null tuple patterns (bits)", n * (q - 1), 20)?;
    let f = Field::new(q)?;
    let present: BTreeSet<Vec<u8>> = a.tuples("null").iter().map(|t| null_coefficients(n, q, t)).collect();
    // every tuple pattern realising a present coefficient vector must be present
    let arity = q - 1;
    let full = subsets::full(n);
    let mut total = 0usize;
    let mut stack = vec![Vec::<Mask>::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == arity {
            let t: Vec<Slot> = prefix.iter().map(|&m| Slot::Set(subsets::elems(m))).collect();
            let c = null_coefficients(n, q, &t);
            if present.contains(&c) != a.holds("null", &t) {
                return Ok(false);
            }
            total += 1;
            continue;
        }
        for m in subsets::submasks(full) {
            let mut p = prefix.clone();
            p.push(m);
            stack.push(p);
        }
    }
    debug_assert!(total > 0);
    // coefficient vectors form a subspace
    if !present.contains(&vec![0u8; n]) {
        return Ok(false);
    }
    for x in &present {
        for y in &present {
            let mut s = x.clone();
            f.axpy(&mut s, 1, y);
            if !present.contains(&s) {
                return Ok(false);
            }
        }
        for c in 2..q as u8 {
            if !present.contains(&f.scale(c, x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Constructors for members of the built-in classes.
pub mod build {
    use super::*;

    pub fn string(k: usize, letters: &[usize]) -> Structure {
        let mut a = Structure::empty(ClassId::Strings(k).vocabulary(), letters.len());
        for (i, &l) in letters.iter().enumerate() {
            a.insert_unchecked(&letter(l), vec![Slot::Elem(i)]);
            for j in i + 1..letters.len() {
                a.insert_unchecked("lt", vec![Slot::Elem(i), Slot::Elem(j)]);
            }
        }
        a
    }

    /// Letters of a string structure, read along its order.
    pub fn read_string(a: &Structure, k: usize) -> Option<Vec<usize>> {
        let n = a.size();
        let lt = a.pairs("lt");
        let mut before = vec![0usize; n];
        for (_, y) in &lt {
            before[*y] += 1;
        }
        let mut pos: Vec<usize> = (0..n).collect();
        pos.sort_by_key(|&x| before[x]);
        pos.iter()
            .map(|&x| (0..k).find(|&l| a.holds(&letter(l), &[Slot::Elem(x)])))
            .collect()
    }

    fn parent_structure(c: ClassId, parent: &[Option<usize>]) -> Structure {
        let mut a = Structure::empty(c.vocabulary(), parent.len());
        for (x, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                a.insert_unchecked("parent", vec![Slot::Elem(*p), Slot::Elem(x)]);
            }
        }
        a
    }

    pub fn tree(parent: &[Option<usize>]) -> Structure {
        parent_structure(ClassId::Trees, parent)
    }

    pub fn binary_tree(parent: &[Option<usize>]) -> Structure {
        parent_structure(ClassId::BinaryTrees, parent)
    }

    pub fn bounded_tree(h: usize, parent: &[Option<usize>]) -> Structure {
        parent_structure(ClassId::BoundedHeightTrees(h), parent)
    }

    pub fn labelled_tree(k: usize, parent: &[Option<usize>], labels: &[usize]) -> Structure {
        let mut a = parent_structure(ClassId::LabelledTrees(k), parent);
        for (x, &l) in labels.iter().enumerate() {
            a.insert_unchecked(&letter(l), vec![Slot::Elem(x)]);
        }
        a
    }

    /// Ordered tree whose siblings are ordered as listed in `children`.
    pub fn ordered_tree(parent: &[Option<usize>], children: &[Vec<usize>]) -> Structure {
        let mut a = parent_structure(ClassId::OrderedTrees, parent);
        for ch in children {
            for (i, &x) in ch.iter().enumerate() {
                for &y in &ch[i + 1..] {
                    a.insert_unchecked("sib", vec![Slot::Elem(x), Slot::Elem(y)]);
                }
            }
        }
        a
    }

    fn undirected(c: ClassId, n: usize, edges: &[(usize, usize)]) -> Structure {
        let mut a = Structure::empty(c.vocabulary(), n);
        for &(x, y) in edges {
            a.insert_unchecked("edge", vec![Slot::Elem(x), Slot::Elem(y)]);
            a.insert_unchecked("edge", vec![Slot::Elem(y), Slot::Elem(x)]);
        }
        a
    }

    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        undirected(ClassId::GraphsEdge, n, edges)
    }

    pub fn acyclic_graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        undirected(ClassId::AcyclicGraphs, n, edges)
    }

    pub fn bipartite(n: usize, left: &[usize], edges: &[(usize, usize)]) -> Structure {
        let mut a = undirected(ClassId::BipartiteGraphs, n, edges);
        for &x in left {
            a.insert_unchecked("left", vec![Slot::Elem(x)]);
        }
        a
    }

    pub fn incidence_graph(vertices: usize, edges: &[(usize, usize)]) -> Structure {
        let mut a = Structure::empty(ClassId::GraphsIncidence.vocabulary(), vertices + edges.len());
        for (i, &(x, y)) in edges.iter().enumerate() {
            for v in [x, y] {
                a.insert_unchecked("inc", vec![Slot::Elem(v), Slot::Elem(vertices + i)]);
            }
        }
        a
    }

    fn set_family(c: ClassId, rel: &str, n: usize, sets: &[Mask]) -> Structure {
        let mut a = Structure::empty(c.vocabulary(), n);
        for &s in sets {
            a.insert_unchecked(rel, vec![Slot::Set(subsets::elems(s))]);
        }
        a
    }

    pub fn hypergraph(n: usize, edges: &[Mask]) -> Structure {
        set_family(ClassId::Hypergraphs, "hyperedge", n, edges)
    }

    pub fn laminar(n: usize, edges: &[Mask]) -> Structure {
        set_family(ClassId::LaminarHypergraphs, "hyperedge", n, edges)
    }

    pub fn uniform(k: usize, n: usize, edges: &[Mask]) -> Structure {
        set_family(ClassId::KUniformHypergraphs(k), "hyperedge", n, edges)
    }

    pub fn independence(n: usize, family: &[Mask]) -> Structure {
        set_family(ClassId::MatroidIndependence, "independent", n, family)
    }

    pub fn relation(k: usize, n: usize, tuples: &[Vec<usize>]) -> Structure {
        let mut a = Structure::empty(ClassId::KAryRelations(k).vocabulary(), n);
        for t in tuples {
            a.insert_unchecked("R", t.iter().map(|&x| Slot::Elem(x)).collect());
        }
        a
    }

    /// Matrix with rows `0..r` and columns `r..r+c`.
    pub fn matrix(q: usize, entries: &[Vec<usize>]) -> Structure {
        let r = entries.len();
        let c = entries.first().map_or(0, |row| row.len());
        let mut a = Structure::empty(ClassId::Matrices(q).vocabulary(), r + c);
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                a.insert_unchecked(&matrix_rel(v), vec![Slot::Elem(i), Slot::Elem(r + j)]);
            }
        }
        a
    }

    pub fn bool() -> Structure {
        Structure::empty(Vocabulary::new(), 1)
    }
}
