//! Represented and general matroids, minors, circuits, components and connectivity.

mod decomposition;
mod json;
mod multi;

use std::collections::BTreeSet;

use crate::gf::{Field, Vector};
use crate::structures::{build, null_structure_of_subspace, Structure};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

pub use decomposition::{branchwidth, for_each_decomposition, optimal_decomposition, BranchDecomposition, MAX_BRANCH_LEAVES};
pub use json::MatroidFile;
pub use multi::{
    colour_claim_counterexample, is_homogeneous, multi_connected_components, ordered_partitions, Homogeneity,
    MultiMatroid, OrderedPartition,
};

/// Largest ground set for operations that enumerate all subsets.
pub const MAX_SUBSET_GROUND: usize = 20;

/// Largest ground set for the separation-based component oracle.
pub const MAX_SEPARATION_GROUND: usize = 12;

/// Common interface: a ground set `0..len` and a rank function.
pub trait Matroid {
    fn len(&self) -> usize;
    fn rank(&self, x: Mask) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn is_independent(&self, x: Mask) -> bool {
        self.rank(x) == subsets::size(x)
    }

    fn ground(&self) -> Mask {
        subsets::full(self.len())
    }
}

/// Vectors over GF(q), one per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentedMatroid {
    field: Field,
    dim: usize,
    vectors: Vec<Vector>,
}

impl RepresentedMatroid {
    pub fn new(q: usize, dim: usize, vectors: Vec<Vector>) -> Result<RepresentedMatroid> {
        let field = Field::new(q)?;
        if vectors.is_empty() {
            return Err(Error::Domain("a represented matroid needs at least one element".into()));
        }
        crate::error::budget("matroid elements", vectors.len(), subsets::MAX_GROUND)?;
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Domain(format!("vector {i} has length {} instead of {dim}", v.len())));
            }
            if v.iter().any(|&c| c as usize >= q) {
                return Err(Error::Domain(format!("vector {i} has a coordinate outside GF({q})")));
            }
        }
        Ok(RepresentedMatroid { field, dim, vectors })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> usize {
        self.field.order()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    fn select(&self, x: Mask) -> Vec<&[u8]> {
        subsets::iter(x).map(|i| self.vectors[i].as_slice()).collect()
    }

    /// Keeps the elements of `keep`, renumbered in increasing order.
    pub fn restrict(&self, keep: Mask) -> Result<RepresentedMatroid> {
        check_subset(self.len(), keep)?;
        let vectors = subsets::iter(keep).map(|i| self.vectors[i].clone()).collect();
        RepresentedMatroid::new(self.order(), self.dim, vectors)
    }

    pub fn delete(&self, x: Mask) -> Result<RepresentedMatroid> {
        check_minor(self.len(), x)?;
        self.restrict(self.ground() & !x)
    }

    /// Dimension of `span(X₁) ∩ span(X₂)`, computed from a kernel rather than from ranks.
    pub fn interface_dimension(&self, x1: Mask) -> Result<usize> {
        check_subset(self.len(), x1)?;
        let x2 = self.ground() & !x1;
        let a = self.select(x1);
        let b = self.select(x2);
        let f = self.field;
        // u = Σ a_i v_i = Σ b_j w_j  ⇔  (a, −b) in the kernel of [V | W]
        let cols: Vec<&[u8]> = a.iter().chain(b.iter()).copied().collect();
        let ker = f.kernel(self.dim, &cols);
        let images: Vec<Vector> = ker.iter().map(|k| f.combine(self.dim, &k[..a.len()], &a)).collect();
        Ok(f.rank(&images))
    }

    pub fn independence_structure(&self) -> Result<Structure> {
        independence_structure(self)
    }

    /// Tuples of q−1 sets whose slot-count coefficients combine the vectors to zero.
    pub fn null_structure(&self) -> Result<Structure> {
        let n = self.len();
        let q = self.order();
        crate::error::budget("null tuple patterns (bits)", n * (q - 1), MAX_SUBSET_GROUND)?;
        let ker = self.field.kernel(self.dim, &self.vectors);
        let space = self.field.span(n, &ker);
        Ok(null_structure_of_subspace(q, n, &space))
    }
}

impl Matroid for RepresentedMatroid {
    fn len(&self) -> usize {
        self.vectors.len()
    }

    fn rank(&self, x: Mask) -> usize {
        self.field.rank(&self.select(x))
    }
}

/// A matroid given by its family of independent sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralMatroid {
    n: usize,
    independent: Vec<bool>,
}

impl GeneralMatroid {
    /// Checks the matroid axioms on `family`.
    pub fn new<I: IntoIterator<Item = Mask>>(n: usize, family: I) -> Result<GeneralMatroid> {
        crate::error::budget("matroid ground set", n, MAX_SUBSET_GROUND)?;
        let fam: Vec<Mask> = family.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if !crate::structures::is_matroid_family(n, &fam) {
            return Err(Error::Domain("independence family violates the matroid axioms".into()));
        }
        Ok(GeneralMatroid::from_family(n, &fam))
    }

    fn from_family(n: usize, fam: &[Mask]) -> GeneralMatroid {
        let mut independent = vec![false; 1 << n];
        for &x in fam {
            independent[x as usize] = true;
        }
        GeneralMatroid { n, independent }
    }

    /// The matroid whose bases are `bases`, closed downwards.
    pub fn from_bases(n: usize, bases: &[Mask]) -> Result<GeneralMatroid> {
        crate::error::budget("matroid ground set", n, MAX_SUBSET_GROUND)?;
        let mut independent = vec![false; 1 << n];
        for &b in bases {
            if b >> n != 0 {
                return Err(Error::Domain(format!("basis {b:#b} is outside the ground set")));
            }
            for s in subsets::submasks(b) {
                independent[s as usize] = true;
            }
        }
        let m = GeneralMatroid { n, independent };
        if !crate::structures::is_matroid_family(n, &m.family()) {
            return Err(Error::Domain("bases do not define a matroid".into()));
        }
        Ok(m)
    }

    pub fn of<M: Matroid + ?Sized>(m: &M) -> Result<GeneralMatroid> {
        Ok(GeneralMatroid::from_family(m.len(), &independent_sets(m)?))
    }

    /// Independent sets in increasing numeric order.
    pub fn family(&self) -> Vec<Mask> {
        (0..self.independent.len() as Mask).filter(|&x| self.independent[x as usize]).collect()
    }

    pub fn bases(&self) -> Vec<Mask> {
        let r = self.rank(self.ground());
        self.family().into_iter().filter(|&x| subsets::size(x) == r).collect()
    }

    pub fn dual(&self) -> GeneralMatroid {
        let full = self.ground();
        let bases: Vec<Mask> = self.bases().into_iter().map(|b| full & !b).collect();
        let mut independent = vec![false; 1 << self.n];
        for b in bases {
            for s in subsets::submasks(b) {
                independent[s as usize] = true;
            }
        }
        GeneralMatroid { n: self.n, independent }
    }

    pub fn restrict(&self, keep: Mask) -> Result<GeneralMatroid> {
        check_subset(self.n, keep)?;
        let m = subsets::size(keep);
        let fam: Vec<Mask> =
            (0..1 << m).filter(|&local| self.independent[subsets::deposit(local, keep) as usize]).collect();
        Ok(GeneralMatroid::from_family(m, &fam))
    }

    pub fn delete(&self, x: Mask) -> Result<GeneralMatroid> {
        check_minor(self.n, x)?;
        self.restrict(self.ground() & !x)
    }

    /// `M / X = (M* ∖ X)*`.
    pub fn contract(&self, x: Mask) -> Result<GeneralMatroid> {
        Ok(self.dual().delete(x)?.dual())
    }

    /// Contraction from the definition: with `Y` a maximal independent subset of `X`,
    /// `I` is independent in `M / X` iff `I ∪ Y` is independent in `M`.
    pub fn contract_by_extension(&self, x: Mask) -> Result<GeneralMatroid> {
        check_minor(self.n, x)?;
        let y = maximal_independent(self, x);
        let rest = self.ground() & !x;
        let m = subsets::size(rest);
        let fam: Vec<Mask> =
            (0..1 << m).filter(|&local| self.independent[(subsets::deposit(local, rest) | y) as usize]).collect();
        Ok(GeneralMatroid::from_family(m, &fam))
    }
}

impl Matroid for GeneralMatroid {
    fn len(&self) -> usize {
        self.n
    }

    fn rank(&self, x: Mask) -> usize {
        subsets::size(maximal_independent(self, x))
    }

    fn is_independent(&self, x: Mask) -> bool {
        self.independent[x as usize]
    }
}

/// Either kind of matroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyMatroid {
    Represented(RepresentedMatroid),
    General(GeneralMatroid),
}

impl AnyMatroid {
    pub fn to_general(&self) -> Result<GeneralMatroid> {
        match self {
            AnyMatroid::Represented(m) => GeneralMatroid::of(m),
            AnyMatroid::General(m) => Ok(m.clone()),
        }
    }
}

impl Matroid for AnyMatroid {
    fn len(&self) -> usize {
        match self {
            AnyMatroid::Represented(m) => m.len(),
            AnyMatroid::General(m) => m.len(),
        }
    }

    fn rank(&self, x: Mask) -> usize {
        match self {
            AnyMatroid::Represented(m) => m.rank(x),
            AnyMatroid::General(m) => m.rank(x),
        }
    }

    fn is_independent(&self, x: Mask) -> bool {
        match self {
            AnyMatroid::Represented(m) => m.is_independent(x),
            AnyMatroid::General(m) => m.is_independent(x),
        }
    }
}

/// Greedy maximal independent subset of `x`, scanning elements in increasing order.
fn maximal_independent<M: Matroid + ?Sized>(m: &M, x: Mask) -> Mask {
    let mut y = 0;
    for i in subsets::iter(x) {
        if m.is_independent(y | 1 << i) {
            y |= 1 << i;
        }
    }
    y
}

fn check_subset(n: usize, x: Mask) -> Result<()> {
    if x >> n != 0 {
        return Err(Error::Domain(format!("set {:?} is not within the ground set 0..{n}", subsets::elems(x))));
    }
    Ok(())
}

fn check_minor(n: usize, x: Mask) -> Result<()> {
    check_subset(n, x)?;
    if x == subsets::full(n) {
        return Err(Error::Domain("cannot remove the whole ground set".into()));
    }
    Ok(())
}

fn check_enumerable(n: usize) -> Result<()> {
    crate::error::budget("matroid ground set for subset enumeration", n, MAX_SUBSET_GROUND)
}

pub fn independent_sets<M: Matroid + ?Sized>(m: &M) -> Result<Vec<Mask>> {
    check_enumerable(m.len())?;
    Ok((0..=m.ground()).filter(|&x| m.is_independent(x)).collect())
}

pub fn independence_structure<M: Matroid + ?Sized>(m: &M) -> Result<Structure> {
    Ok(build::independence(m.len(), &independent_sets(m)?))
}

/// Inclusion-minimal dependent sets, in increasing numeric order.
pub fn circuits<M: Matroid + ?Sized>(m: &M) -> Result<Vec<Mask>> {
    check_enumerable(m.len())?;
    Ok((1..=m.ground())
        .filter(|&x| !m.is_independent(x) && subsets::iter(x).all(|i| m.is_independent(x & !(1 << i))))
        .collect())
}

/// Classes of "some circuit contains both", as masks ordered by least element.
pub fn connected_components<M: Matroid + ?Sized>(m: &M) -> Result<Vec<Mask>> {
    let n = m.len();
    let mut class: Vec<Mask> = (0..n).map(subsets::singleton).collect();
    for c in circuits(m)? {
        merge(&mut class, c);
    }
    Ok(blocks(class))
}

fn merge(class: &mut [Mask], set: Mask) {
    let mut joined = set;
    for i in subsets::iter(set) {
        joined |= class[i];
    }
    for i in subsets::iter(joined) {
        class[i] = joined;
    }
}

fn blocks(class: Vec<Mask>) -> Vec<Mask> {
    let mut out: Vec<Mask> = class.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    out.sort_by_key(|b| b.trailing_zeros());
    out
}

/// Components from separations: `x` and `y` are together iff no `(A, E∖A)` with
/// `r(A) + r(E∖A) = r(E)` separates them.
pub fn separation_components<M: Matroid + ?Sized>(m: &M) -> Result<Vec<Mask>> {
    let n = m.len();
    crate::error::budget("matroid ground set for separations", n, MAX_SEPARATION_GROUND)?;
    let full = m.ground();
    let total = m.rank(full);
    let mut apart = vec![0 as Mask; n];
    for a in 1..full {
        if a & 1 == 0 {
            continue;
        }
        if m.rank(a) + m.rank(full & !a) == total {
            for i in subsets::iter(a) {
                apart[i] |= full & !a;
            }
            for i in subsets::iter(full & !a) {
                apart[i] |= a;
            }
        }
    }
    Ok(blocks((0..n).map(|i| full & !apart[i]).collect()))
}

/// `rank(X₁) + rank(X₂) − rank(X₁ ∪ X₂)` for the bipartition `X₁, X₂ = E ∖ X₁`.
pub fn connectivity<M: Matroid + ?Sized>(m: &M, x1: Mask) -> Result<usize> {
    check_subset(m.len(), x1)?;
    let full = m.ground();
    if x1 == 0 || x1 == full {
        return Err(Error::Domain("connectivity needs a proper nonempty part".into()));
    }
    Ok(m.rank(x1) + m.rank(full & !x1) - m.rank(full))
}

/// Every matroid of rank at most `max_rank` on `n` elements representable over GF(q),
/// one represented matroid per row space (reduced row echelon form).
///
/// Labelled matroids may repeat when column scalings give different row spaces.
pub fn enumerate_represented(q: usize, n: usize, max_rank: usize) -> Result<Vec<RepresentedMatroid>> {
    let f = Field::new(q)?;
    if n == 0 {
        return Err(Error::Domain("a represented matroid needs at least one element".into()));
    }
    crate::error::budget("enumerated matroid elements", n, 8)?;
    let mut out = Vec::new();
    for r in 0..=max_rank.min(n) {
        let dim = r.max(1);
        for pivots in subsets::iter_k_subsets(n, r) {
            let piv: Vec<usize> = subsets::elems(pivots);
            // free cells: row i, column j > piv[i], j not a pivot
            let free: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| ((piv[i] + 1)..n).filter(|j| !subsets::contains(pivots, *j)).map(move |j| (i, j)))
                .collect();
            let count = q.pow(free.len() as u32);
            for code in 0..count {
                let mut rows = vec![vec![0u8; n]; dim];
                for (i, &p) in piv.iter().enumerate() {
                    rows[i][p] = 1;
                }
                let mut c = code;
                for &(i, j) in &free {
                    rows[i][j] = (c % q) as u8;
                    c /= q;
                }
                let vectors = (0..n).map(|j| (0..dim).map(|i| rows[i][j]).collect()).collect();
                out.push(RepresentedMatroid { field: f, dim, vectors });
            }
        }
    }
    Ok(out)
}
