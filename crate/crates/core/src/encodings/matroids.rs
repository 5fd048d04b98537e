//! Encodings into matroids and from null representations to matrices.

use std::collections::{BTreeMap, HashSet};

use super::{CatalogEntry, Choice};
use crate::gf::{Field, Vector};
use crate::matroid::RepresentedMatroid;
use crate::structures::{
    build, hyperedges_named, matrix_entries, null_coefficients, null_structure_of_subspace, ClassId, Structure,
};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

pub(super) fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for k in [1, 2] {
        out.push(
            CatalogEntry::new(
                &format!("{k}-uniform-to-matroid"),
                ClassId::KUniformHypergraphs(k),
                ClassId::MatroidIndependence,
                "two copies per vertex; sparse paving with the doubled hyperedges as non-bases",
                move |a, _| uniform_to_matroid(k, a),
                move |b| matroid_to_uniform(k, b),
            )
            .linear(2)
            .corpus(5, None),
        );
    }
    out.push(
        CatalogEntry::new(
            "bipartite-to-matroid",
            ClassId::BipartiteGraphs,
            ClassId::MatroidIndependence,
            "right vertices as doubled unit vectors, left vertices as neighbourhood sums (distinct neighbourhoods required)",
            |a, _| bipartite_to_matroid(a),
            matroid_to_bipartite,
        )
        .linear(2)
        .corpus(6, Some(|a| super::bipartite_sides_at_most_3(a) && distinct_neighbourhoods(a))),
    );
    out.push(
        CatalogEntry::new(
            "bipartite-distinct-neighbourhoods",
            ClassId::BipartiteGraphs,
            ClassId::BipartiteGraphs,
            "a private right neighbour for every left vertex",
            |a, _| add_private_neighbours(a),
            drop_private_neighbours,
        )
        .linear(2)
        .corpus(6, Some(super::bipartite_sides_at_most_3)),
    );
    for (q, max) in [(2, 5), (3, 3)] {
        out.push(
            CatalogEntry::new(
                &format!("matroid-null-to-matrix-gf{q}"),
                ClassId::MatroidNull(q),
                ClassId::Matrices(q),
                "coefficients of every element in a basis",
                move |a, c| null_to_matrix(q, a, c),
                move |b| matrix_to_null(q, b),
            )
            .linear(2)
            .corpus(max, None),
        );
    }
    out
}

/// Non-bases `e ∪ (e + n)` of the sparse paving matroid of a k-uniform hypergraph on `n` vertices.
pub fn sparse_paving_non_bases(n: usize, edges: &[Mask]) -> Vec<Mask> {
    let mut out: Vec<Mask> = edges.iter().map(|&e| e | e << n).collect();
    out.sort_unstable();
    out
}

/// No two sets of equal size `r` share `r − 1` elements.
pub fn is_sparse_paving(non_bases: &[Mask]) -> bool {
    non_bases.iter().enumerate().all(|(i, &x)| {
        non_bases[i + 1..]
            .iter()
            .all(|&y| subsets::size(x) != subsets::size(y) || subsets::size(x & y) + 1 != subsets::size(x))
    })
}

fn uniform_to_matroid(k: usize, a: &Structure) -> Result<Structure> {
    let n = a.size();
    crate::error::budget("matroid ground set", 2 * n, crate::matroid::MAX_SUBSET_GROUND)?;
    let non_bases: HashSet<Mask> = sparse_paving_non_bases(n, &hyperedges_named(a, "hyperedge")).into_iter().collect();
    let r = (2 * k).min(2 * n);
    let family: Vec<Mask> = (0..=subsets::full(2 * n))
        .filter(|&x| subsets::size(x) < r || (subsets::size(x) == r && !non_bases.contains(&x)))
        .collect();
    Ok(build::independence(2 * n, &family))
}

fn matroid_to_uniform(k: usize, b: &Structure) -> Result<Structure> {
    let size = b.size();
    if !size.is_multiple_of(2) {
        return Err(Error::Domain("an image has an even ground set".into()));
    }
    let n = size / 2;
    let family: HashSet<Mask> = hyperedges_named(b, "independent").into_iter().collect();
    let r = (2 * k).min(size);
    let ok = (0..=subsets::full(size)).all(|x| match subsets::size(x) {
        s if s < r => family.contains(&x),
        s if s > r => !family.contains(&x),
        _ => true,
    });
    if !ok {
        return Err(Error::Domain(format!("not a rank-{r} paving family")));
    }
    let non_bases: Vec<Mask> = subsets::iter_k_subsets(size, r).filter(|x| !family.contains(x)).collect();
    if !is_sparse_paving(&non_bases) {
        return Err(Error::Domain("non-bases are not sparse paving".into()));
    }
    // copies of a vertex lie in exactly the same non-bases
    let mut by_signature: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for x in 0..size {
        let sig = (0..non_bases.len()).filter(|&i| subsets::contains(non_bases[i], x)).collect();
        by_signature.entry(sig).or_default().push(x);
    }
    let mut vertex = vec![usize::MAX; size];
    let mut first = 0 as Mask;
    let mut next = 0;
    for class in by_signature.values() {
        if class.len() % 2 != 0 {
            return Err(Error::Domain("elements do not pair into copies".into()));
        }
        for pair in class.chunks(2) {
            vertex[pair[0]] = next;
            vertex[pair[1]] = next;
            first |= subsets::singleton(pair[0]);
            next += 1;
        }
    }
    let mut edges = Vec::new();
    for &nb in &non_bases {
        let e = subsets::from_elems(subsets::iter(nb & first).map(|x| vertex[x]));
        if subsets::size(e) != k || subsets::size(nb & !first) != k {
            return Err(Error::Domain("a non-basis is not a doubled hyperedge".into()));
        }
        edges.push(e);
    }
    Ok(build::uniform(k, n, &edges))
}

fn sides(a: &Structure) -> (Vec<usize>, Vec<usize>) {
    let left = a.unary("left");
    (0..a.size()).partition(|x| left.contains(x))
}

fn neighbourhoods(a: &Structure, left: &[usize]) -> Vec<Vec<usize>> {
    let edges = a.pairs("edge");
    left.iter()
        .map(|&x| {
            let mut ns: Vec<usize> = edges.iter().filter(|e| e.0 == x).map(|e| e.1).collect();
            ns.sort_unstable();
            ns
        })
        .collect()
}

fn distinct_neighbourhoods(a: &Structure) -> bool {
    let (left, _) = sides(a);
    let ns = neighbourhoods(a, &left);
    ns.iter().collect::<HashSet<_>>().len() == ns.len()
}

/// Elements: right vertex `i` at `2i` and `2i + 1`, then the left vertices.
fn bipartite_to_matroid(a: &Structure) -> Result<Structure> {
    if !distinct_neighbourhoods(a) {
        return Err(Error::Domain("two left vertices have the same neighbourhood".into()));
    }
    let (left, right) = sides(a);
    let dim = right.len().max(1);
    let unit = |i: usize| {
        let mut v = vec![0u8; dim];
        v[i] = 1;
        v
    };
    let mut vectors: Vec<Vector> = Vec::new();
    for i in 0..right.len() {
        vectors.push(unit(i));
        vectors.push(unit(i));
    }
    for ns in neighbourhoods(a, &left) {
        let mut v = vec![0u8; dim];
        for y in ns {
            v[right.binary_search(&y).expect("neighbours are on the right")] = 1;
        }
        vectors.push(v);
    }
    RepresentedMatroid::new(2, dim, vectors)?.independence_structure()
}

fn matroid_to_bipartite(b: &Structure) -> Result<Structure> {
    let n = b.size();
    let family: HashSet<Mask> = hyperedges_named(b, "independent").into_iter().collect();
    let indep = |x: Mask| family.contains(&x);
    let loops: Vec<usize> = (0..n).filter(|&x| !indep(subsets::singleton(x))).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in (0..n).filter(|&x| indep(subsets::singleton(x))) {
        match classes.iter_mut().find(|c| !indep(subsets::singleton(c[0]) | subsets::singleton(x))) {
            Some(c) => c.push(x),
            None => classes.push(vec![x]),
        }
    }
    if loops.len() > 1 {
        return Err(Error::Domain("more than one loop".into()));
    }
    let mut right_rep = Vec::new();
    let mut left_of: Vec<(usize, Option<usize>)> = Vec::new();
    for c in &classes {
        match c.len() {
            1 => left_of.push((c[0], None)),
            2 => right_rep.push(c[0]),
            3 => {
                // a left vertex whose only neighbour is this right vertex
                left_of.push((c[2], Some(right_rep.len())));
                right_rep.push(c[0]);
            }
            s => return Err(Error::Domain(format!("parallel class of size {s}"))),
        }
    }
    let basis = subsets::from_elems(right_rep.iter().copied());
    if !indep(basis) {
        return Err(Error::Domain("right representatives are dependent".into()));
    }
    let nl = left_of.len() + loops.len();
    let nr = right_rep.len();
    let mut edges = Vec::new();
    for (i, &(x, single)) in left_of.iter().enumerate() {
        match single {
            Some(r) => edges.push((i, nl + r)),
            None => {
                let with = basis | subsets::singleton(x);
                if indep(with) {
                    return Err(Error::Domain(format!("element {x} is outside the span of the right side")));
                }
                for (r, &y) in right_rep.iter().enumerate() {
                    if indep(with & !subsets::singleton(y)) {
                        edges.push((i, nl + r));
                    }
                }
            }
        }
    }
    let left: Vec<usize> = (0..nl).collect();
    Ok(build::bipartite(nl + nr, &left, &edges))
}

fn add_private_neighbours(a: &Structure) -> Result<Structure> {
    let n = a.size();
    let (left, _) = sides(a);
    let mut edges: Vec<(usize, usize)> = a.pairs("edge").into_iter().filter(|e| e.0 < e.1).collect();
    for (i, &x) in left.iter().enumerate() {
        edges.push((x, n + i));
    }
    Ok(build::bipartite(n + left.len(), &left, &edges))
}

fn drop_private_neighbours(b: &Structure) -> Result<Structure> {
    let (left, right) = sides(b);
    let edges = b.pairs("edge");
    let mut drop = HashSet::new();
    for &x in &left {
        let private = right.iter().copied().find(|&y| {
            let ns: Vec<usize> = edges.iter().filter(|e| e.0 == y).map(|e| e.1).collect();
            ns == [x]
        });
        match private {
            Some(y) => drop.insert(y),
            None => return Err(Error::Domain(format!("left vertex {x} has no private neighbour"))),
        };
    }
    let keep: Vec<usize> = (0..b.size()).filter(|x| !drop.contains(x)).collect();
    Ok(b.restrict(&keep))
}

/// Coefficient vectors of all null tuples.
fn null_space(q: usize, a: &Structure) -> Vec<Vector> {
    let mut space: Vec<Vector> = a.tuples("null").iter().map(|t| null_coefficients(a.size(), q, t)).collect();
    space.sort();
    space.dedup();
    space
}

/// Rows are the elements, columns a basis chosen greedily (in id order, or shuffled).
fn null_to_matrix(q: usize, a: &Structure, choice: &mut Choice) -> Result<Structure> {
    let n = a.size();
    let f = Field::new(q)?;
    let space = null_space(q, a);
    let support = |v: &Vector| subsets::from_elems((0..n).filter(|&i| v[i] != 0));
    let supports: Vec<Mask> = space.iter().map(support).collect();
    let independent = |s: Mask| supports.iter().all(|&m| m == 0 || m & !s != 0);
    let mut order: Vec<usize> = (0..n).collect();
    choice.shuffle(&mut order);
    let mut basis: Vec<usize> = Vec::new();
    for &e in &order {
        let s = subsets::from_elems(basis.iter().copied().chain([e]));
        if independent(s) {
            basis.push(e);
        }
    }
    let bmask = subsets::from_elems(basis.iter().copied());
    let mut rows = Vec::with_capacity(n);
    for e in 0..n {
        let row: Vec<usize> = if let Some(j) = basis.iter().position(|&b| b == e) {
            (0..basis.len()).map(|i| usize::from(i == j)).collect()
        } else {
            let dep = space
                .iter()
                .zip(&supports)
                .find(|(v, &s)| v[e] == 1 && s & !(bmask | subsets::singleton(e)) == 0)
                .map(|(v, _)| v)
                .ok_or_else(|| Error::Domain(format!("element {e} has no basis decomposition")))?;
            basis.iter().map(|&b| f.neg(dep[b]) as usize).collect()
        };
        rows.push(row);
    }
    Ok(build::matrix(q, &rows))
}

fn matrix_to_null(q: usize, b: &Structure) -> Result<Structure> {
    let (rows, cols, entries) =
        matrix_entries(b, q).ok_or_else(|| Error::Domain("not a matrix".into()))?;
    let n = rows.len();
    crate::error::budget("null tuple patterns (bits)", n * (q - 1), crate::matroid::MAX_SUBSET_GROUND)?;
    let f = Field::new(q)?;
    let vectors: Vec<Vector> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| entries[&(r, c)] as u8).collect())
        .collect();
    let ker = f.kernel(cols.len(), &vectors);
    let space = f.span(n, &ker);
    Ok(null_structure_of_subspace(q, n, &space))
}

#[cfg(test)]
mod tests {
    use super::super::{decode, encode, entry};
    use super::*;
    use crate::matroid::{GeneralMatroid, Matroid};
    use crate::structures::{is_isomorphic, member};

    fn iso(a: &Structure, b: &Structure) -> bool {
        is_isomorphic(a, b).unwrap().is_some()
    }

    #[test]
    fn one_uniform_on_two_vertices() {
        // vertices {0, 1}, hyperedge {0}: ground {0, 1, 2, 3}, rank 2, non-basis {0, 2}
        let g = build::uniform(1, 2, &[0b01]);
        let m = encode("1-uniform-to-matroid", &g).unwrap();
        assert_eq!(m.size(), 4);
        let gm = GeneralMatroid::new(4, hyperedges_named(&m, "independent")).unwrap();
        assert_eq!(gm.rank(0b1111), 2);
        let bases = gm.bases();
        assert_eq!(bases.len(), 5);
        assert!(!bases.contains(&0b0101));
        assert!(iso(&decode("1-uniform-to-matroid", &m).unwrap(), &g));
    }

    #[test]
    fn doubled_edges_are_sparse_paving() {
        let nb = sparse_paving_non_bases(4, &[0b0011, 0b0110]);
        assert_eq!(nb, vec![0b0011_0011, 0b0110_0110]);
        assert!(is_sparse_paving(&nb));
        assert!(!is_sparse_paving(&[0b0111, 0b1011]));
    }

    #[test]
    fn bipartite_neighbourhoods() {
        // left {0, 1}, right {2, 3, 4}; N(0) = {2, 3}, N(1) = {4}
        let g = build::bipartite(5, &[0, 1], &[(0, 2), (0, 3), (1, 4)]);
        let m = encode("bipartite-to-matroid", &g).unwrap();
        assert_eq!(m.size(), 8);
        assert!(iso(&decode("bipartite-to-matroid", &m).unwrap(), &g));
        let twins = build::bipartite(3, &[0, 1], &[(0, 2), (1, 2)]);
        assert!(encode("bipartite-to-matroid", &twins).is_err());
        let fixed = encode("bipartite-distinct-neighbourhoods", &twins).unwrap();
        assert!(distinct_neighbourhoods(&fixed));
        assert!(iso(&decode("bipartite-distinct-neighbourhoods", &fixed).unwrap(), &twins));
    }

    #[test]
    fn null_to_matrix_of_a_triangle() {
        let t = RepresentedMatroid::new(2, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let a = t.null_structure().unwrap();
        let m = encode("matroid-null-to-matrix-gf2", &a).unwrap();
        assert!(member(&ClassId::Matrices(2), &m).unwrap());
        // 3 rows, 2 columns; the third row is (1, 1)
        assert!(iso(&m, &build::matrix(2, &[vec![1, 0], vec![0, 1], vec![1, 1]])));
        assert!(iso(&decode("matroid-null-to-matrix-gf2", &m).unwrap(), &a));
    }

    #[test]
    fn all_loops_give_an_empty_matrix() {
        let z = RepresentedMatroid::new(3, 1, vec![vec![0], vec![0]]).unwrap();
        let a = z.null_structure().unwrap();
        let e = entry("matroid-null-to-matrix-gf3").unwrap();
        let m = e.encode(&a).unwrap();
        assert_eq!(m.size(), 2);
        assert!(iso(&e.decode(&m).unwrap(), &a));
    }
}
