//! Matrices over GF(q) as bipartite graphs.
//!
//! Rows sit on the left, columns on the right, and every row and column gets
//! three pendant leaves. A nonzero entry `a` joins its row and column by a path
//! of odd length `2a − 1`; zero entries leave them unconnected. Originals are
//! then the vertices of degree at least three, path interiors have degree two.

use std::collections::BTreeMap;

use super::CatalogEntry;
use crate::structures::{build, matrix_entries, ClassId, Structure};
use crate::{Error, Result};

const PENDANTS: usize = 3;

pub(super) fn entries() -> Vec<CatalogEntry> {
    [2, 3]
        .into_iter()
        .map(|q| {
            CatalogEntry::new(
                &format!("matrix-to-bipartite-gf{q}"),
                ClassId::Matrices(q),
                ClassId::BipartiteGraphs,
                "pendant triples on rows and columns, entry a as a path of length 2a-1",
                move |a, _| matrix_to_bipartite(q, a),
                move |b| bipartite_to_matrix(q, b),
            )
            .sized(move |n| (PENDANTS + 1) * n + (2 * q - 4) * (n * n / 4))
            .corpus(6, Some(super::matrix_at_most_3x3))
        })
        .collect()
}

fn matrix_to_bipartite(q: usize, a: &Structure) -> Result<Structure> {
    let (rows, cols, entries) = matrix_entries(a, q).ok_or_else(|| Error::Domain("not a matrix".into()))?;
    let originals = rows.len() + cols.len();
    let mut left: Vec<usize> = (0..rows.len()).collect();
    let mut edges = Vec::new();
    let mut next = originals;
    for o in 0..originals {
        for _ in 0..PENDANTS {
            edges.push((o, next));
            if o >= rows.len() {
                left.push(next);
            }
            next += 1;
        }
    }
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            let a = entries[&(r, c)];
            if a == 0 {
                continue;
            }
            let mut prev = i;
            for step in 1..2 * a - 1 {
                edges.push((prev, next));
                if step % 2 == 0 {
                    left.push(next);
                }
                prev = next;
                next += 1;
            }
            edges.push((prev, rows.len() + j));
        }
    }
    Ok(build::bipartite(next, &left, &edges))
}

fn bipartite_to_matrix(q: usize, b: &Structure) -> Result<Structure> {
    let n = b.size();
    let mut adj = vec![Vec::new(); n];
    for (x, y) in b.pairs("edge") {
        adj[x].push(y);
    }
    let left = b.unary("left");
    let original = |x: usize| adj[x].len() >= PENDANTS;
    let rows: Vec<usize> = (0..n).filter(|&x| original(x) && left.contains(&x)).collect();
    let cols: Vec<usize> = (0..n).filter(|&x| original(x) && !left.contains(&x)).collect();
    let col_index: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(j, &c)| (c, j)).collect();
    let mut accounted = rows.len() + cols.len();
    for &o in rows.iter().chain(&cols) {
        let leaves = adj[o].iter().filter(|&&y| adj[y].len() == 1).count();
        if leaves != PENDANTS {
            return Err(Error::Domain(format!("vertex {o} has {leaves} pendant leaves")));
        }
        accounted += leaves;
    }
    let mut entries = vec![vec![0usize; cols.len()]; rows.len()];
    let mut seen = vec![vec![false; cols.len()]; rows.len()];
    for (i, &r) in rows.iter().enumerate() {
        for &start in &adj[r] {
            if adj[start].len() == 1 {
                continue;
            }
            let (mut prev, mut cur, mut len) = (r, start, 1usize);
            while !original(cur) {
                if adj[cur].len() != 2 {
                    return Err(Error::Domain(format!("vertex {cur} breaks an entry path")));
                }
                let nxt = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = nxt;
                len += 1;
                accounted += 1;
            }
            let Some(&j) = col_index.get(&cur) else {
                return Err(Error::Domain(format!("path from row {r} ends at a row")));
            };
            let a = len.div_ceil(2);
            if len % 2 == 0 || a >= q || seen[i][j] {
                return Err(Error::Domain(format!("invalid entry path from {r} to {cur}")));
            }
            seen[i][j] = true;
            entries[i][j] = a;
        }
    }
    if accounted != n {
        return Err(Error::Domain("vertices outside the gadgets".into()));
    }
    if rows.is_empty() {
        return Err(Error::Domain("no row vertices".into()));
    }
    if cols.is_empty() {
        return Ok(build::matrix(q, &vec![Vec::new(); rows.len()]));
    }
    Ok(build::matrix(q, &entries))
}

#[cfg(test)]
mod tests {
    use super::super::{decode, encode};
    use super::*;
    use crate::structures::is_isomorphic;

    #[test]
    fn entries_become_paths() {
        let m = build::matrix(3, &[vec![0, 1, 2]]);
        let g = encode("matrix-to-bipartite-gf3", &m).unwrap();
        // 4 originals with 3 leaves each, 2 interior vertices for the entry 2
        assert_eq!(g.size(), 4 + 12 + 2);
        let back = decode("matrix-to-bipartite-gf3", &g).unwrap();
        assert!(is_isomorphic(&back, &m).unwrap().is_some());
    }

    #[test]
    fn bare_bipartite_graph_is_rejected() {
        let g = build::bipartite(2, &[0], &[(0, 1)]);
        assert!(decode("matrix-to-bipartite-gf2", &g).is_err());
    }
}
