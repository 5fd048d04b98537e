//! Ported matroids, terms over them, and compiling a branch decomposition into a term.

use serde::{Deserialize, Serialize};

use crate::gf::{Echelon, Field, Vector};
use crate::matroid::{BranchDecomposition, Matroid, RepresentedMatroid};
use crate::subsets::{self, Mask};
use crate::{Error, Result};

/// A represented matroid with a sequence of distinguished elements.
///
/// `origins[e]` names the element of some other matroid that `e` stands for;
/// elements introduced only to carry ports have no origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PortedFile", into = "PortedFile")]
pub struct PortedMatroid {
    matroid: RepresentedMatroid,
    ports: Vec<usize>,
    origins: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PortedFile {
    field: usize,
    dim: usize,
    vectors: Vec<Vector>,
    #[serde(default)]
    ports: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origins: Option<Vec<Option<usize>>>,
}

impl TryFrom<PortedFile> for PortedMatroid {
    type Error = Error;

    fn try_from(f: PortedFile) -> Result<PortedMatroid> {
        if f.field > 255 {
            return Err(Error::Domain(format!("field order {} is not supported", f.field)));
        }
        let n = f.vectors.len();
        let p = PortedMatroid::new(RepresentedMatroid::new(f.field, f.dim, f.vectors)?, f.ports)?;
        match f.origins {
            Some(o) => p.with_origins(o),
            None => Ok(PortedMatroid { origins: vec![None; n], ..p }),
        }
    }
}

impl From<PortedMatroid> for PortedFile {
    fn from(p: PortedMatroid) -> PortedFile {
        let origins = p.origins.iter().any(Option::is_some).then_some(p.origins);
        PortedFile {
            field: p.matroid.order(),
            dim: p.matroid.dim(),
            vectors: p.matroid.vectors().to_vec(),
            ports: p.ports,
            origins,
        }
    }
}

impl PortedMatroid {
    pub fn new(matroid: RepresentedMatroid, ports: Vec<usize>) -> Result<PortedMatroid> {
        if let Some(&p) = ports.iter().find(|&&p| p >= matroid.len()) {
            return Err(Error::Domain(format!("port {p} is not an element")));
        }
        let origins = vec![None; matroid.len()];
        Ok(PortedMatroid { matroid, ports, origins })
    }

    pub fn with_origins(self, origins: Vec<Option<usize>>) -> Result<PortedMatroid> {
        if origins.len() != self.matroid.len() {
            return Err(Error::Domain(format!("{} origins for {} elements", origins.len(), self.matroid.len())));
        }
        Ok(PortedMatroid { origins, ..self })
    }

    pub fn matroid(&self) -> &RepresentedMatroid {
        &self.matroid
    }

    pub fn ports(&self) -> &[usize] {
        &self.ports
    }

    pub fn origins(&self) -> &[Option<usize>] {
        &self.origins
    }

    pub fn sort(&self) -> usize {
        self.ports.len()
    }

    pub fn len(&self) -> usize {
        self.matroid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matroid.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    fn port_vector(&self, i: usize) -> &[u8] {
        &self.matroid.vectors()[self.ports[i]]
    }
}

/// A term of the branchwidth algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum BranchTerm {
    Constant { matroid: PortedMatroid },
    /// Output port `i` is input port `map[i]`.
    Rename { map: Vec<usize>, child: Box<BranchTerm> },
    /// Quotients by `Σ coeffs[i]·(port i)`.
    Quotient { coeffs: Vec<u8>, child: Box<BranchTerm> },
    /// Block-diagonal union; left ports come first.
    Union { left: Box<BranchTerm>, right: Box<BranchTerm> },
}

impl BranchTerm {
    pub fn constant(m: PortedMatroid) -> BranchTerm {
        BranchTerm::Constant { matroid: m }
    }

    pub fn rename(map: Vec<usize>, child: BranchTerm) -> BranchTerm {
        BranchTerm::Rename { map, child: Box::new(child) }
    }

    pub fn quotient(coeffs: Vec<u8>, child: BranchTerm) -> BranchTerm {
        BranchTerm::Quotient { coeffs, child: Box::new(child) }
    }

    pub fn union(left: BranchTerm, right: BranchTerm) -> BranchTerm {
        BranchTerm::Union { left: Box::new(left), right: Box::new(right) }
    }

    /// Field order and number of ports, checking sorts throughout.
    pub fn sort(&self) -> Result<(usize, usize)> {
        match self {
            BranchTerm::Constant { matroid } => Ok((matroid.matroid.order(), matroid.sort())),
            BranchTerm::Rename { map, child } => {
                let (q, k) = child.sort()?;
                match map.iter().find(|&&i| i >= k) {
                    Some(i) => Err(Error::Domain(format!("rename refers to port {i} of a {k}-ported matroid"))),
                    None => Ok((q, map.len())),
                }
            }
            BranchTerm::Quotient { coeffs, child } => {
                let (q, k) = child.sort()?;
                if coeffs.len() != k {
                    return Err(Error::Domain(format!("{} coefficients for a {k}-ported matroid", coeffs.len())));
                }
                if let Some(&c) = coeffs.iter().find(|&&c| c as usize >= q) {
                    return Err(Error::Domain(format!("coefficient {c} is outside GF({q})")));
                }
                Ok((q, k))
            }
            BranchTerm::Union { left, right } => {
                let (q1, k1) = left.sort()?;
                let (q2, k2) = right.sort()?;
                if q1 != q2 {
                    return Err(Error::Domain(format!("union of GF({q1}) and GF({q2}) matroids")));
                }
                Ok((q1, k1 + k2))
            }
        }
    }

    /// Number of operation nodes.
    pub fn size(&self) -> usize {
        match self {
            BranchTerm::Constant { .. } => 1,
            BranchTerm::Rename { child, .. } | BranchTerm::Quotient { child, .. } => 1 + child.size(),
            BranchTerm::Union { left, right } => 1 + left.size() + right.size(),
        }
    }

    /// Largest number of ports of any subterm.
    pub fn max_sort(&self) -> Result<usize> {
        let own = self.sort()?.1;
        let below = match self {
            BranchTerm::Constant { .. } => 0,
            BranchTerm::Rename { child, .. } | BranchTerm::Quotient { child, .. } => child.max_sort()?,
            BranchTerm::Union { left, right } => left.max_sort()?.max(right.max_sort()?),
        };
        Ok(own.max(below))
    }

    /// Immediate subterms.
    pub fn children(&self) -> Vec<&BranchTerm> {
        match self {
            BranchTerm::Constant { .. } => Vec::new(),
            BranchTerm::Rename { child, .. } | BranchTerm::Quotient { child, .. } => vec![child],
            BranchTerm::Union { left, right } => vec![left, right],
        }
    }

    pub fn from_json(text: &str) -> Result<BranchTerm> {
        let t: BranchTerm = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        t.sort()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

pub fn eval_term(t: &BranchTerm) -> Result<PortedMatroid> {
    t.sort()?;
    eval(t)
}

fn eval(t: &BranchTerm) -> Result<PortedMatroid> {
    match t {
        BranchTerm::Constant { matroid } => Ok(matroid.clone()),
        BranchTerm::Rename { map, child } => {
            let p = eval(child)?;
            let ports = map.iter().map(|&i| p.ports[i]).collect();
            Ok(PortedMatroid { ports, ..p })
        }
        BranchTerm::Quotient { coeffs, child } => {
            let p = eval(child)?;
            let m = &p.matroid;
            let f = m.field();
            let gens: Vec<&[u8]> = (0..p.sort()).map(|i| p.port_vector(i)).collect();
            let u = f.combine(m.dim(), coeffs, &gens);
            let Some(piv) = u.iter().position(|&c| c != 0) else {
                return Ok(p);
            };
            // v ↦ v − (v[piv]/u[piv])·u, then drop the pivot coordinate
            let scale = f.inv(u[piv]);
            let vectors = m
                .vectors()
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    f.axpy(&mut w, f.neg(f.mul(v[piv], scale)), &u);
                    w.remove(piv);
                    w
                })
                .collect();
            let matroid = RepresentedMatroid::new(m.order(), m.dim() - 1, vectors)?;
            Ok(PortedMatroid { matroid, ..p })
        }
        BranchTerm::Union { left, right } => {
            let a = eval(left)?;
            let b = eval(right)?;
            let (da, db) = (a.matroid.dim(), b.matroid.dim());
            let mut vectors: Vec<Vector> = a.matroid.vectors().iter().map(|v| pad(v, 0, db)).collect();
            vectors.extend(b.matroid.vectors().iter().map(|v| pad(v, da, 0)));
            let matroid = RepresentedMatroid::new(a.matroid.order(), da + db, vectors)?;
            let shift = a.len();
            let mut ports = a.ports;
            ports.extend(b.ports.iter().map(|&p| p + shift));
            let mut origins = a.origins;
            origins.extend(b.origins);
            Ok(PortedMatroid { matroid, ports, origins })
        }
    }
}

fn pad(v: &[u8], before: usize, after: usize) -> Vector {
    let mut w = vec![0; before];
    w.extend_from_slice(v);
    w.resize(before + v.len() + after, 0);
    w
}

/// Elements carrying an origin, as a mask of origins, after checking that no
/// origin repeats.
pub fn origin_set(p: &PortedMatroid) -> Result<Mask> {
    let mut seen: Mask = 0;
    for &o in p.origins.iter().flatten() {
        if o >= subsets::MAX_GROUND || subsets::contains(seen, o) {
            return Err(Error::Domain(format!("origin {o} repeats or is out of range")));
        }
        seen |= subsets::singleton(o);
    }
    Ok(seen)
}

/// Whether the elements of `p` with an origin realise the restriction of `m`
/// to those origins: every set of origins has the same rank on both sides.
pub fn realises_restriction<M: Matroid + ?Sized>(p: &PortedMatroid, m: &M) -> Result<bool> {
    let s = origin_set(p)?;
    if s & !m.ground() != 0 {
        return Ok(false);
    }
    crate::error::budget("origins for rank comparison", subsets::size(s), crate::matroid::MAX_SUBSET_GROUND)?;
    let mut element_of = vec![0usize; m.len()];
    for (e, o) in p.origins.iter().enumerate() {
        if let Some(o) = o {
            element_of[*o] = e;
        }
    }
    Ok(subsets::submasks(s).all(|x| {
        let y = subsets::from_elems(subsets::iter(x).map(|o| element_of[o]));
        p.matroid.rank(y) == m.rank(x)
    }))
}

/// Whether `p` restricted to its origin-carrying elements is `m`.
pub fn realises<M: Matroid + ?Sized>(p: &PortedMatroid, m: &M) -> Result<bool> {
    Ok(origin_set(p)? == m.ground() && realises_restriction(p, m)?)
}

/// A term whose value, restricted to elements with an origin, is `m`.
///
/// The decomposition is rooted at the middle of its first edge. Each subtree
/// with element set X yields a term whose ambient space is `span(X)` and whose
/// ports are auxiliary elements spanning `span(X) ∩ span(E − X)`. Siblings are
/// glued by quotienting away the difference of their common vectors, and fresh
/// port elements are attached by a union with a free matroid followed by one
/// quotient per new port.
pub fn term_from_branch_decomposition(m: &RepresentedMatroid, t: &BranchDecomposition) -> Result<BranchTerm> {
    t.validate()?;
    if t.len() != m.len() {
        return Err(Error::Domain(format!("decomposition has {} leaves, matroid {} elements", t.len(), m.len())));
    }
    let c = Compiler { m, field: m.field(), ground: m.ground() };
    if m.len() == 1 {
        let p = c.leaf(0)?.0;
        return Ok(p);
    }
    let adj = adjacency(t);
    let mut element_at = vec![None; t.nodes];
    for (e, &l) in t.leaves.iter().enumerate() {
        element_at[l] = Some(e);
    }
    let (u, v) = t.edges[0];
    let a = c.subtree(&adj, &element_at, u, v)?;
    let b = c.subtree(&adj, &element_at, v, u)?;
    let (term, ports) = c.join(a, b, c.ground)?;
    debug_assert!(ports.is_empty());
    Ok(term)
}

fn adjacency(t: &BranchDecomposition) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); t.nodes];
    for &(u, v) in &t.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// A compiled subtree: its term, its element set and its port vectors in the
/// ambient space of the original matroid.
type Piece = (BranchTerm, Vec<Vector>, Mask);

struct Compiler<'a> {
    m: &'a RepresentedMatroid,
    field: Field,
    ground: Mask,
}

impl Compiler<'_> {
    fn dim(&self) -> usize {
        self.m.dim()
    }

    fn vectors(&self, x: Mask) -> Vec<&[u8]> {
        subsets::iter(x).map(|e| self.m.vectors()[e].as_slice()).collect()
    }

    /// Basis of `span(X) ∩ span(Y)`.
    fn meet(&self, x: Mask, y: Mask) -> Vec<Vector> {
        let f = self.field;
        let a = self.vectors(x);
        let b = self.vectors(y);
        let cols: Vec<&[u8]> = a.iter().chain(b.iter()).copied().collect();
        let mut ech = Echelon::new(f);
        let mut basis = Vec::new();
        for k in f.kernel(self.dim(), &cols) {
            let w = f.combine(self.dim(), &k[..a.len()], &a);
            if ech.insert(&w) {
                basis.push(w);
            }
        }
        basis
    }

    fn interface(&self, x: Mask) -> Vec<Vector> {
        self.meet(x, self.ground & !x)
    }

    fn leaf(&self, e: usize) -> Result<(BranchTerm, Vec<Vector>)> {
        let v = &self.m.vectors()[e];
        let loopy = v.iter().all(|&c| c == 0);
        let ports = if loopy { Vec::new() } else { self.interface(subsets::singleton(e)) };
        let (dim, vec) = if loopy { (0, vec![]) } else { (1, vec![1]) };
        let matroid = RepresentedMatroid::new(self.m.order(), dim, vec![vec])?;
        // the interface is spanned by v itself, so the element doubles as the port
        let p = PortedMatroid::new(matroid, if ports.is_empty() { vec![] } else { vec![0] })?
            .with_origins(vec![Some(e)])?;
        let port_vectors = if ports.is_empty() { vec![] } else { vec![v.clone()] };
        Ok((BranchTerm::constant(p), port_vectors))
    }

    fn subtree(&self, adj: &[Vec<usize>], element_at: &[Option<usize>], x: usize, parent: usize) -> Result<Piece> {
        if let Some(e) = element_at[x] {
            let (t, ports) = self.leaf(e)?;
            return Ok((t, ports, subsets::singleton(e)));
        }
        let kids: Vec<usize> = adj[x].iter().copied().filter(|&y| y != parent).collect();
        let [y, z] = kids[..] else {
            return Err(Error::Internal(format!("node {x} is not cubic")));
        };
        let a = self.subtree(adj, element_at, y, x)?;
        let b = self.subtree(adj, element_at, z, x)?;
        let set = a.2 | b.2;
        let (t, ports) = self.join(a, b, set)?;
        Ok((t, ports, set))
    }

    fn join(&self, a: Piece, b: Piece, set: Mask) -> Result<(BranchTerm, Vec<Vector>)> {
        let f = self.field;
        let (ta, pa, xa) = a;
        let (tb, pb, xb) = b;
        let (ka, kb) = (pa.len(), pb.len());
        let mut term = BranchTerm::union(ta, tb);
        for w in self.meet(xa, xb) {
            let c = f.solve(self.dim(), &pa, &w).ok_or_else(|| Error::Internal("shared vector outside ports".into()))?;
            let d = f.solve(self.dim(), &pb, &w).ok_or_else(|| Error::Internal("shared vector outside ports".into()))?;
            let mut coeffs = c;
            coeffs.extend(d.iter().map(|&x| f.neg(x)));
            term = BranchTerm::quotient(coeffs, term);
        }
        let fresh = if set == self.ground { Vec::new() } else { self.interface(set) };
        let s = fresh.len();
        if s > 0 {
            let identity: Vec<Vector> = (0..s).map(|i| (0..s).map(|j| u8::from(i == j)).collect()).collect();
            let free = PortedMatroid::new(RepresentedMatroid::new(self.m.order(), s, identity)?, (0..s).collect())?;
            term = BranchTerm::union(term, BranchTerm::constant(free));
            let old: Vec<&Vector> = pa.iter().chain(&pb).collect();
            for (i, u) in fresh.iter().enumerate() {
                let mut coeffs =
                    f.solve(self.dim(), &old, u).ok_or_else(|| Error::Internal("new port outside old ports".into()))?;
                coeffs.extend((0..s).map(|j| if j == i { f.neg(1) } else { 0 }));
                term = BranchTerm::quotient(coeffs, term);
            }
        }
        let term = BranchTerm::rename((ka + kb..ka + kb + s).collect(), term);
        Ok((term, fresh))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{circuits, for_each_decomposition};

    fn single(q: usize, v: Vec<u8>, ports: Vec<usize>) -> BranchTerm {
        let dim = v.len();
        BranchTerm::constant(PortedMatroid::new(RepresentedMatroid::new(q, dim, vec![v]).unwrap(), ports).unwrap())
    }

    #[test]
    fn constant_and_zero_quotient() {
        let t = single(2, vec![1], vec![0]);
        let p = eval_term(&t).unwrap();
        assert_eq!(BranchTerm::constant(p.clone()), t);
        assert_eq!(eval_term(&BranchTerm::quotient(vec![0], t)).unwrap(), p);
    }

    #[test]
    fn quotient_makes_parallel_pair() {
        let t = BranchTerm::union(single(2, vec![1], vec![0]), single(2, vec![1], vec![0]));
        let p = eval_term(&BranchTerm::quotient(vec![1, 1], t)).unwrap();
        assert_eq!(circuits(p.matroid()).unwrap(), vec![0b11]);
    }

    #[test]
    fn sort_errors() {
        let t = single(2, vec![1], vec![0]);
        assert!(eval_term(&BranchTerm::rename(vec![1], t.clone())).is_err());
        assert!(eval_term(&BranchTerm::quotient(vec![1, 1], t.clone())).is_err());
        assert!(eval_term(&BranchTerm::union(t, single(3, vec![1], vec![]))).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = BranchTerm::rename(vec![0], BranchTerm::union(single(2, vec![1], vec![0]), single(2, vec![1], vec![])));
        let s = t.to_json();
        assert!(s.contains("\"op\":\"rename\""));
        assert_eq!(BranchTerm::from_json(&s).unwrap(), t);
        assert!(BranchTerm::from_json(r#"{"op":"rename","map":[3],"child":{"op":"constant","matroid":{"field":2,"dim":1,"vectors":[[1]]}}}"#).is_err());
    }

    #[test]
    fn single_element_is_a_constant() {
        let m = RepresentedMatroid::new(2, 1, vec![vec![1]]).unwrap();
        let t = BranchDecomposition::new(1, vec![], vec![0]).unwrap();
        let term = term_from_branch_decomposition(&m, &t).unwrap();
        assert!(matches!(term, BranchTerm::Constant { .. }));
        assert!(realises(&eval_term(&term).unwrap(), &m).unwrap());
    }

    #[test]
    fn triangle() {
        let m = RepresentedMatroid::new(2, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        for_each_decomposition(3, |t| {
            let term = term_from_branch_decomposition(&m, t).unwrap();
            let p = eval_term(&term).unwrap();
            assert!(realises(&p, &m).unwrap());
            assert!(p.ports().is_empty());
        })
        .unwrap();
    }

    // unions are only glued by the quotients above them, so the check applies
    // to the renames closing each subtree and to the leaves
    fn check_subterms(term: &BranchTerm, m: &RepresentedMatroid) {
        if matches!(term, BranchTerm::Rename { .. } | BranchTerm::Constant { .. }) {
            assert!(realises_restriction(&eval_term(term).unwrap(), m).unwrap());
        }
        for c in term.children() {
            check_subterms(c, m);
        }
    }

    #[test]
    fn every_subterm_realises_a_restriction() {
        // rank 3 over GF(3): four elements in general position plus a loop
        let m = RepresentedMatroid::new(3, 3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 2, 1], vec![0, 0, 0]])
            .unwrap();
        for_each_decomposition(5, |t| {
            let term = term_from_branch_decomposition(&m, t).unwrap();
            assert!(realises(&eval_term(&term).unwrap(), &m).unwrap());
            check_subterms(&term, &m);
        })
        .unwrap();
    }
}
