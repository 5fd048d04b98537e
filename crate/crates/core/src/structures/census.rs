//! Exhaustive enumeration of small class members up to isomorphism.
//!
//! Every class has a labelled generator that reaches each isomorphism class at
//! least once; results are deduplicated by canonical form. The largest
//! supported universe per class is reported by [`census_bound`]:
//!
//! | class | bound |
//! |---|---|
//! | strings over k letters | largest n with k^n ≤ 10^5 |
//! | trees, ordered, binary, bounded height | 8 |
//! | labelled trees over k labels | largest n with (n−1)!·k^n ≤ 2·10^5 |
//! | edge-represented and acyclic graphs | 6 |
//! | incidence-represented graphs | 7 |
//! | hypergraphs | 4 |
//! | laminar hypergraphs | 5 |
//! | k-uniform hypergraphs | largest n with C(n,k) ≤ 15 |
//! | k-ary relations | largest n ≤ 8 with 2^(n^k)·n! ≤ 10^9 |
//! | bipartite graphs | 6 |
//! | matrices over GF(q) | largest n with Σ q^(r·c) ≤ 2·10^5 |
//! | matroids (independence) | 4 |
//! | matroids (null, q) | largest n with q^n ≤ 256 and n(q−1) ≤ 8 |
//! | pairs | one more than the smaller side bound |

use std::collections::HashSet;

use super::class::{build, is_matroid_family, null_coefficients, ClassId};
use super::iso::canonical_form;
use super::{Slot, Structure};
use crate::gf::Field;
use crate::subsets::{self, Mask};
use crate::{Error, Result};

/// Largest `n` for which [`census`] and [`enumerate_class`] are supported.
pub fn census_bound(c: &ClassId) -> usize {
    match c {
        ClassId::Strings(k) => largest(|n| (*k as f64).powi(n as i32) <= 1e5, 12),
        ClassId::Trees | ClassId::OrderedTrees | ClassId::BinaryTrees | ClassId::BoundedHeightTrees(_) => 8,
        ClassId::LabelledTrees(k) => {
            largest(|n| factorial(n - 1) * (*k as f64).powi(n as i32) <= 2e5, 8)
        }
        ClassId::GraphsEdge | ClassId::AcyclicGraphs | ClassId::BipartiteGraphs => 6,
        ClassId::GraphsIncidence => 7,
        ClassId::Hypergraphs | ClassId::MatroidIndependence => 4,
        ClassId::LaminarHypergraphs => 5,
        ClassId::KUniformHypergraphs(k) => largest(|n| binomial(n, *k) <= 15.0, 16),
        ClassId::KAryRelations(k) => {
            largest(|n| (n as f64).powi(*k as i32) <= 30.0 && 2f64.powf((n as f64).powi(*k as i32)) * factorial(n) <= 1e9, 8)
        }
        ClassId::Matrices(q) => largest(
            |n| (1..n).map(|r| (*q as f64).powi((r * (n - r)) as i32)).sum::<f64>() <= 2e5,
            12,
        ),
        ClassId::MatroidNull(q) => largest(|n| (*q as f64).powi(n as i32) <= 256.0 && n * (q - 1) <= 8, 8),
        ClassId::Bool => 64,
        ClassId::Pairs(l, r) => {
            let side = |c: &ClassId| if *c == ClassId::Bool { usize::MAX } else { census_bound(c) };
            match side(l).min(side(r)) {
                usize::MAX => 64,
                b => b + 1,
            }
        }
    }
}

fn largest(ok: impl Fn(usize) -> bool, cap: usize) -> usize {
    (1..=cap).take_while(|&n| ok(n)).last().unwrap_or(0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

fn check_bound(c: &ClassId, n: usize) -> Result<()> {
    let b = census_bound(c);
    if n > b {
        return Err(Error::Budget { what: "census universe size", value: n, limit: b });
    }
    Ok(())
}

/// Number of isomorphism classes of `c` with universe size between 1 and `n`.
pub fn census(c: &ClassId, n: usize) -> Result<usize> {
    check_bound(c, n)?;
    let mut total = 0;
    for m in 1..=n {
        total += match c {
            ClassId::KAryRelations(k) => count_relations(*k, m),
            _ => enumerate_class(c, m)?.len(),
        };
    }
    Ok(total)
}

/// One canonical representative per isomorphism class of members of size exactly `n`,
/// in order of first discovery.
pub fn enumerate_class(c: &ClassId, n: usize) -> Result<Vec<Structure>> {
    check_bound(c, n)?;
    if let ClassId::KAryRelations(k) = c {
        crate::error::budget("relation bits for explicit enumeration", n.pow(*k as u32), 16)?;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in labelled(c, n)? {
        let cf = canonical_form(&a);
        if !seen.contains(&cf) {
            out.push(cf.structure.clone());
            seen.insert(cf);
        }
    }
    Ok(out)
}

/// Labelled members of size `n` covering every isomorphism class.
fn labelled(c: &ClassId, n: usize) -> Result<Vec<Structure>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(match c {
        ClassId::Strings(k) => words(*k, n).iter().map(|w| build::string(*k, w)).collect(),
        ClassId::Trees => parent_arrays(n).iter().map(|p| build::tree(p)).collect(),
        ClassId::BinaryTrees => parent_arrays(n)
            .iter()
            .filter(|p| super::class::children(p).iter().all(|c| c.len() <= 2))
            .map(|p| build::binary_tree(p))
            .collect(),
        ClassId::BoundedHeightTrees(h) => parent_arrays(n)
            .iter()
            .filter(|p| (0..n).all(|x| super::class::depth(p, x) <= *h))
            .map(|p| build::bounded_tree(*h, p))
            .collect(),
        ClassId::OrderedTrees => parent_arrays(n)
            .iter()
            .map(|p| build::ordered_tree(p, &super::class::children(p)))
            .collect(),
        ClassId::LabelledTrees(k) => {
            let mut out = Vec::new();
            for p in parent_arrays(n) {
                for w in words(*k, n) {
                    out.push(build::labelled_tree(*k, &p, &w));
                }
            }
            out
        }
        ClassId::GraphsEdge => edge_sets(n).iter().map(|es| build::graph(n, es)).collect(),
        ClassId::AcyclicGraphs => {
            let all: Vec<Structure> = edge_sets(n).iter().map(|es| build::acyclic_graph(n, es)).collect();
            filter_members(c, all)?
        }
        ClassId::GraphsIncidence => {
            let mut out = Vec::new();
            for v in 0..=n {
                let e = n - v;
                let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
                for chosen in combinations(pairs.len(), e) {
                    let es: Vec<_> = chosen.iter().map(|&i| pairs[i]).collect();
                    out.push(build::incidence_graph(v, &es));
                }
            }
            out
        }
        ClassId::Hypergraphs => {
            let sets = 1usize << n;
            (0..1u64 << sets)
                .map(|fam| build::hypergraph(n, &subsets::elems(fam).iter().map(|&s| s as Mask).collect::<Vec<_>>()))
                .collect()
        }
        ClassId::LaminarHypergraphs => laminar_families(n).iter().map(|f| build::laminar(n, f)).collect(),
        ClassId::KUniformHypergraphs(k) => {
            let ksets: Vec<Mask> = (0..1u64 << n).filter(|&m| subsets::size(m) == *k).collect();
            (0..1u64 << ksets.len())
                .map(|fam| {
                    let es: Vec<Mask> = subsets::iter(fam).map(|i| ksets[i]).collect();
                    build::uniform(*k, n, &es)
                })
                .collect()
        }
        ClassId::KAryRelations(k) => {
            let tuples = all_tuples(*k, n);
            (0..1u64 << tuples.len())
                .map(|m| {
                    let ts: Vec<Vec<usize>> = subsets::iter(m).map(|i| tuples[i].clone()).collect();
                    build::relation(*k, n, &ts)
                })
                .collect()
        }
        ClassId::BipartiteGraphs => {
            let mut out = Vec::new();
            for l in 0..=n {
                let left: Vec<usize> = (0..l).collect();
                let cross: Vec<(usize, usize)> = (0..l).flat_map(|a| (l..n).map(move |b| (a, b))).collect();
                for m in 0..1u64 << cross.len() {
                    let es: Vec<_> = subsets::iter(m).map(|i| cross[i]).collect();
                    out.push(build::bipartite(n, &left, &es));
                }
            }
            out
        }
        ClassId::Matrices(q) => {
            let mut out = vec![build::matrix(*q, &vec![Vec::new(); n])];
            for r in 1..n {
                let cols = n - r;
                for w in words(*q, r * cols) {
                    let rows: Vec<Vec<usize>> = w.chunks(cols).map(|c| c.to_vec()).collect();
                    out.push(build::matrix(*q, &rows));
                }
            }
            out
        }
        ClassId::MatroidIndependence => {
            let sets = 1usize << n;
            (0..1u64 << sets)
                .filter(|fam| fam & 1 == 1)
                .map(|fam| subsets::elems(fam).iter().map(|&s| s as Mask).collect::<Vec<_>>())
                .filter(|f| is_matroid_family(n, f))
                .map(|f| build::independence(n, &f))
                .collect()
        }
        ClassId::MatroidNull(q) => {
            subspaces(Field::new(*q)?, n).iter().map(|s| null_structure_of_subspace(*q, n, s)).collect()
        }
        ClassId::Bool => {
            if n == 1 {
                vec![build::bool()]
            } else {
                Vec::new()
            }
        }
        ClassId::Pairs(l, r) => {
            let mut out = Vec::new();
            for i in 1..n {
                let left = enumerate_class(l, i)?;
                let right = enumerate_class(r, n - i)?;
                for a in &left {
                    for b in &right {
                        out.push(super::pair(a, b));
                    }
                }
            }
            out
        }
    })
}

fn filter_members(c: &ClassId, all: Vec<Structure>) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    for a in all {
        if super::member(c, &a)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// All words of length `n` over `0..k`, in lexicographic order.
pub(crate) fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

/// Parent arrays with `p[i] < i`, which reach every rooted tree shape.
pub(crate) fn parent_arrays(n: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![vec![None]];
    for i in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..i).map(move |q| {
                    let mut v = p.clone();
                    v.push(Some(q));
                    v
                })
            })
            .collect();
    }
    out
}

fn edge_sets(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0..1u64 << pairs.len())
        .map(|m| subsets::iter(m).map(|i| pairs[i]).collect())
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..1u64 << n)
        .filter(|m| subsets::size(*m) == k)
        .map(subsets::elems)
        .collect()
}

fn all_tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    words(n, k)
}

/// Laminar families of nonempty subsets of `0..n`.
pub(crate) fn laminar_families(n: usize) -> Vec<Vec<Mask>> {
    let sets: Vec<Mask> = (1..1u64 << n).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(i: usize, sets: &[Mask], chosen: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        if i == sets.len() {
            out.push(chosen.clone());
            return;
        }
        go(i + 1, sets, chosen, out);
        let s = sets[i];
        if chosen.iter().all(|&t| s & t == 0 || s & t == s || s & t == t) {
            chosen.push(s);
            go(i + 1, sets, chosen, out);
            chosen.pop();
        }
    }
    go(0, &sets, &mut chosen, &mut out);
    out
}

/// All subspaces of GF(q)^n, each as its sorted list of vectors.
pub(crate) fn subspaces(f: Field, n: usize) -> Vec<Vec<Vec<u8>>> {
    let q = f.order();
    let all: Vec<Vec<u8>> = words(q, n).into_iter().map(|w| w.into_iter().map(|x| x as u8).collect()).collect();
    let span = |gens: &[Vec<u8>]| -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = words(q, gens.len())
            .iter()
            .map(|c| {
                let cs: Vec<u8> = c.iter().map(|&x| x as u8).collect();
                let refs: Vec<&[u8]> = gens.iter().map(|g| g.as_slice()).collect();
                f.combine(n, &cs, &refs)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    };
    let mut found: Vec<Vec<Vec<u8>>> = vec![span(&[])];
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            // a basis of s is recovered greedily, then extended by one vector
            let mut e = crate::gf::Echelon::new(f);
            let basis: Vec<Vec<u8>> = s.iter().filter(|v| e.insert(v)).cloned().collect();
            for v in &all {
                if s.binary_search(v).is_ok() {
                    continue;
                }
                let mut g = basis.clone();
                g.push(v.clone());
                let t = span(&g);
                if !found.contains(&t) {
                    found.push(t.clone());
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    found
}

/// Null structure whose tuples are exactly those with coefficient vector in `space`.
pub(crate) fn null_structure_of_subspace(q: usize, n: usize, space: &[Vec<u8>]) -> Structure {
    let mut a = Structure::empty(ClassId::MatroidNull(q).vocabulary(), n);
    let arity = q - 1;
    let full = subsets::full(n);
    let mut tuple: Vec<Mask> = vec![0; arity];
    fn go(
        i: usize,
        tuple: &mut Vec<Mask>,
        full: Mask,
        n: usize,
        q: usize,
        space: &[Vec<u8>],
        a: &mut Structure,
    ) {
        if i == tuple.len() {
            let t: Vec<Slot> = tuple.iter().map(|&m| Slot::Set(subsets::elems(m))).collect();
            if space.binary_search(&null_coefficients(n, q, &t)).is_ok() {
                a.insert_unchecked("null", t);
            }
            return;
        }
        for m in subsets::submasks(full) {
            tuple[i] = m;
            go(i + 1, tuple, full, n, q, space, a);
        }
    }
    go(0, &mut tuple, full, n, q, space, &mut a);
    a
}

/// Orbit count of k-ary relations on `n` elements, by testing each relation
/// for minimality within its orbit under element permutations.
fn count_relations(k: usize, n: usize) -> usize {
    let tuples = all_tuples(k, n);
    let bits = tuples.len();
    let index = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * n + x);
    debug_assert!(tuples.iter().enumerate().all(|(i, t)| index(t) == i));
    let perms = permutations(n);
    const CHUNK: usize = 8;
    let chunks = bits.div_ceil(CHUNK);
    // per permutation, per chunk, a table from chunk bits to image bits
    let tables: Vec<Vec<Vec<u64>>> = perms
        .iter()
        .filter(|p| p.iter().enumerate().any(|(i, &x)| i != x))
        .map(|p| {
            let image: Vec<usize> = tuples
                .iter()
                .map(|t| index(&t.iter().map(|&x| p[x]).collect::<Vec<_>>()))
                .collect();
            (0..chunks)
                .map(|c| {
                    (0..1usize << CHUNK)
                        .map(|byte| {
                            (0..CHUNK)
                                .filter(|b| byte >> b & 1 == 1 && c * CHUNK + b < bits)
                                .fold(0u64, |m, b| m | 1 << image[c * CHUNK + b])
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut count = 0;
    'masks: for m in 0..1u64 << bits {
        for t in &tables {
            let mut img = 0;
            for (c, tc) in t.iter().enumerate() {
                img |= tc[(m >> (c * CHUNK) & 0xff) as usize];
            }
            if img < m {
                continue 'masks;
            }
        }
        count += 1;
    }
    count
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph_counts() {
        assert_eq!(census(&ClassId::GraphsEdge, 1).unwrap(), 1);
        assert_eq!(census(&ClassId::GraphsEdge, 3).unwrap(), 7);
        // 11 graphs on 4 vertices, 34 on 5
        assert_eq!(enumerate_class(&ClassId::GraphsEdge, 4).unwrap().len(), 11);
        assert_eq!(enumerate_class(&ClassId::GraphsEdge, 5).unwrap().len(), 34);
    }

    #[test]
    fn hypergraphs_on_one_vertex() {
        assert_eq!(census(&ClassId::Hypergraphs, 1).unwrap(), 4);
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(census(&ClassId::GraphsEdge, 7), Err(Error::Budget { .. })));
        assert!(census_bound(&ClassId::GraphsEdge) >= 5);
    }

    #[test]
    fn rooted_tree_counts() {
        // unlabelled rooted trees: 1, 1, 2, 4, 9, 20
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_class(&ClassId::Trees, n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20]);
    }

    #[test]
    fn relation_orbit_count_matches_explicit_dedup() {
        for (k, n) in [(2, 2), (2, 3), (1, 3), (3, 2)] {
            let explicit = enumerate_class(&ClassId::KAryRelations(k), n).unwrap().len();
            assert_eq!(count_relations(k, n), explicit, "k={k} n={n}");
        }
    }

    #[test]
    fn gf2_subspace_counts() {
        // Gaussian binomial sums: 2, 5, 16
        let f = Field::new(2).unwrap();
        let counts: Vec<usize> = (1..=3).map(|n| subspaces(f, n).len()).collect();
        assert_eq!(counts, vec![2, 5, 16]);
    }

    #[test]
    fn enumerated_members_are_members() {
        for c in [
            ClassId::LaminarHypergraphs,
            ClassId::MatroidNull(3),
            ClassId::MatroidNull(2),
            ClassId::GraphsIncidence,
            ClassId::Matrices(2),
            ClassId::OrderedTrees,
            ClassId::BipartiteGraphs,
        ] {
            for a in enumerate_class(&c, 3).unwrap() {
                assert!(super::super::member(&c, &a).unwrap(), "{c}");
            }
        }
    }
}
