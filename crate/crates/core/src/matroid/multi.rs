use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{circuits, connected_components, merge, AnyMatroid, Matroid};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

/// Matroids sharing one ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMatroid {
    members: Vec<AnyMatroid>,
}

impl MultiMatroid {
    pub fn new(members: Vec<AnyMatroid>) -> Result<MultiMatroid> {
        let Some(first) = members.first() else {
            return Err(Error::Domain("a multi-matroid needs at least one member".into()));
        };
        let n = first.len();
        if members.iter().any(|m| m.len() != n) {
            return Err(Error::Domain("members of a multi-matroid must share the ground set".into()));
        }
        Ok(MultiMatroid { members })
    }

    pub fn degree(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.members[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> &[AnyMatroid] {
        &self.members
    }

    /// Circuits of any member, without repeats.
    pub fn circuits(&self) -> Result<Vec<Mask>> {
        let mut all = BTreeSet::new();
        for m in &self.members {
            all.extend(circuits(m)?);
        }
        Ok(all.into_iter().collect())
    }
}

/// The finest partition coarser than every member's component partition.
pub fn multi_connected_components(mm: &MultiMatroid) -> Result<Vec<Mask>> {
    let mut class: Vec<Mask> = (0..mm.len()).map(subsets::singleton).collect();
    for m in mm.members() {
        for b in connected_components(m)? {
            merge(&mut class, b);
        }
    }
    Ok(super::blocks(class))
}

/// Blocks `X₀ < X₁ < …` covering the ground set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct OrderedPartition {
    n: usize,
    index: Vec<usize>,
    blocks: Vec<Mask>,
}

impl OrderedPartition {
    pub fn new(n: usize, blocks: Vec<Mask>) -> Result<OrderedPartition> {
        let mut index = vec![usize::MAX; n];
        for (i, &b) in blocks.iter().enumerate() {
            if b == 0 {
                return Err(Error::Domain(format!("block {i} is empty")));
            }
            for e in subsets::iter(b) {
                if e >= n || index[e] != usize::MAX {
                    return Err(Error::Domain(format!("element {e} is out of range or in two blocks")));
                }
                index[e] = i;
            }
        }
        if let Some(e) = index.iter().position(|&i| i == usize::MAX) {
            return Err(Error::Domain(format!("element {e} is in no block")));
        }
        Ok(OrderedPartition { n, index, blocks })
    }

    pub fn blocks(&self) -> &[Mask] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Position of the block containing `e`.
    pub fn index(&self, e: usize) -> usize {
        self.index[e]
    }

    fn indices(&self, set: Mask) -> BTreeSet<usize> {
        subsets::iter(set).map(|e| self.index[e]).collect()
    }
}

impl TryFrom<Vec<Vec<usize>>> for OrderedPartition {
    type Error = Error;

    fn try_from(blocks: Vec<Vec<usize>>) -> Result<OrderedPartition> {
        let n = blocks.iter().map(Vec::len).sum();
        if blocks.iter().flatten().any(|&e| e >= subsets::MAX_GROUND) {
            return Err(Error::Domain("element id too large".into()));
        }
        OrderedPartition::new(n, blocks.into_iter().map(subsets::from_elems).collect())
    }
}

impl From<OrderedPartition> for Vec<Vec<usize>> {
    fn from(p: OrderedPartition) -> Vec<Vec<usize>> {
        p.blocks.iter().map(|&b| subsets::elems(b)).collect()
    }
}

/// Every ordered partition of `0..n`.
pub fn ordered_partitions(n: usize) -> Result<Vec<OrderedPartition>> {
    crate::error::budget("ordered partition ground set", n, 8)?;
    fn go(rest: Mask, prefix: &mut Vec<Mask>, n: usize, out: &mut Vec<OrderedPartition>) {
        if rest == 0 {
            out.push(OrderedPartition::new(n, prefix.clone()).expect("blocks partition the ground set"));
            return;
        }
        for b in subsets::submasks(rest) {
            if b == 0 {
                continue;
            }
            prefix.push(b);
            go(rest & !b, prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(subsets::full(n), &mut Vec::new(), n, &mut out);
    }
    Ok(out)
}

/// Result of the homogeneity check, with the first violation found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Homogeneity {
    Homogeneous,
    /// A circuit whose block indices have a gap.
    NotInterval { circuit: Vec<usize> },
    /// Elements with index difference `delta` and no circuit through both using at most `delta + 3` indices.
    Unlinked { x: usize, y: usize, delta: usize },
}

impl Homogeneity {
    pub fn holds(&self) -> bool {
        *self == Homogeneity::Homogeneous
    }
}

/// Circuits (of any member) use intervals of indices, and distinct elements whose
/// indices differ by δ ≤ 1 share a circuit visiting at most δ + 3 indices.
pub fn is_homogeneous(mm: &MultiMatroid, p: &OrderedPartition) -> Result<Homogeneity> {
    if p.len() != mm.len() {
        return Err(Error::Domain("partition and matroid have different ground sets".into()));
    }
    let cs = mm.circuits()?;
    let used: Vec<BTreeSet<usize>> = cs.iter().map(|&c| p.indices(c)).collect();
    for (c, ix) in cs.iter().zip(&used) {
        let (lo, hi) = (ix.first().unwrap(), ix.last().unwrap());
        if hi - lo + 1 != ix.len() {
            return Ok(Homogeneity::NotInterval { circuit: subsets::elems(*c) });
        }
    }
    let n = mm.len();
    for x in 0..n {
        for y in x + 1..n {
            let delta = p.index(x).abs_diff(p.index(y));
            if delta > 1 {
                continue;
            }
            let both = subsets::singleton(x) | subsets::singleton(y);
            let linked = cs.iter().zip(&used).any(|(&c, ix)| c & both == both && ix.len() <= delta + 3);
            if !linked {
                return Ok(Homogeneity::Unlinked { x, y, delta });
            }
        }
    }
    Ok(Homogeneity::Homogeneous)
}

/// Colouring each element by its index mod 5, looks for distinct `x, y` and δ ∈ {0, 1}
/// where "index(y) = index(x) + δ" disagrees with "colour(y) = colour(x) + δ mod 5 and
/// some circuit through both misses a colour". Requires a homogeneous partition.
pub fn colour_claim_counterexample(mm: &MultiMatroid, p: &OrderedPartition) -> Result<Option<(usize, usize, usize)>> {
    if !is_homogeneous(mm, p)?.holds() {
        return Err(Error::Domain("the colour claim needs a homogeneous partition".into()));
    }
    let cs = mm.circuits()?;
    let colours = |c: Mask| subsets::iter(c).map(|e| p.index(e) % 5).collect::<BTreeSet<_>>().len();
    let n = mm.len();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let both = subsets::singleton(x) | subsets::singleton(y);
            let sparse = cs.iter().any(|&c| c & both == both && colours(c) < 5);
            for delta in 0..2 {
                let by_index = p.index(y) == p.index(x) + delta;
                let by_colour = p.index(y) % 5 == (p.index(x) + delta) % 5 && sparse;
                if by_index != by_colour {
                    return Ok(Some((x, y, delta)));
                }
            }
        }
    }
    Ok(None)
}
