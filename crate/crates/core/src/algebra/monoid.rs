//! Finite monoids, homomorphisms from free monoids, and factorization trees.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Longest word accepted by [`factorize`], whose table is cubic in the length.
pub const MAX_WORD: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MonoidFile", into = "MonoidFile")]
pub struct FiniteMonoid {
    table: Vec<Vec<usize>>,
    unit: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidFile {
    table: Vec<Vec<usize>>,
    unit: usize,
}

impl TryFrom<MonoidFile> for FiniteMonoid {
    type Error = Error;

    fn try_from(f: MonoidFile) -> Result<FiniteMonoid> {
        FiniteMonoid::new(f.table, f.unit)
    }
}

impl From<FiniteMonoid> for MonoidFile {
    fn from(m: FiniteMonoid) -> MonoidFile {
        MonoidFile { table: m.table, unit: m.unit }
    }
}

impl FiniteMonoid {
    /// Checks shape, closure, the unit laws and associativity.
    pub fn new(table: Vec<Vec<usize>>, unit: usize) -> Result<FiniteMonoid> {
        let m = table.len();
        if m == 0 {
            return Err(Error::Domain("a monoid has at least one element".into()));
        }
        crate::error::budget("monoid elements", m, 256)?;
        if table.iter().any(|row| row.len() != m || row.iter().any(|&x| x >= m)) {
            return Err(Error::Domain("multiplication table is not a closed square".into()));
        }
        if unit >= m {
            return Err(Error::Domain(format!("unit {unit} is not an element")));
        }
        if let Some(a) = (0..m).find(|&a| table[unit][a] != a || table[a][unit] != a) {
            return Err(Error::Domain(format!("{unit} is not a unit for {a}")));
        }
        for a in 0..m {
            for b in 0..m {
                let ab = table[a][b];
                for c in 0..m {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::Domain(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(FiniteMonoid { table, unit })
    }

    /// ℤ_n under addition.
    pub fn cyclic(n: usize) -> Result<FiniteMonoid> {
        FiniteMonoid::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), 0)
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn product<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.unit, |acc, x| self.mul(acc, x))
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    pub fn from_json(text: &str) -> Result<FiniteMonoid> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

pub fn idempotents(m: &FiniteMonoid) -> Vec<usize> {
    (0..m.size()).filter(|&e| m.is_idempotent(e)).collect()
}

/// A transformation monoid on two or three points with at most `max`
/// elements, generated by one or two random maps. Element 0 is the identity.
pub fn random_monoid<R: Rng + ?Sized>(rng: &mut R, max: usize) -> FiniteMonoid {
    assert!(max >= 1, "a monoid has at least one element");
    loop {
        let points = rng.gen_range(2..=3);
        let gens: Vec<Vec<usize>> =
            (0..rng.gen_range(1..=2)).map(|_| (0..points).map(|_| rng.gen_range(0..points)).collect()).collect();
        if let Some(m) = generate(points, &gens, max) {
            return m;
        }
    }
}

/// Closure of `gens` under composition, `a·b` applying `a` first.
fn generate(points: usize, gens: &[Vec<usize>], max: usize) -> Option<FiniteMonoid> {
    let mut elems: Vec<Vec<usize>> = vec![(0..points).collect()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let next: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
            if !index.contains_key(&next) {
                if elems.len() == max {
                    return None;
                }
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
        i += 1;
    }
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&a.iter().map(|&x| b[x]).collect::<Vec<_>>()]).collect())
        .collect();
    Some(FiniteMonoid { table, unit: 0 })
}

/// Letter `i` maps to `letters[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HomFile", into = "HomFile")]
pub struct Homomorphism {
    monoid: FiniteMonoid,
    letters: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomFile {
    monoid: FiniteMonoid,
    letters: Vec<usize>,
}

impl TryFrom<HomFile> for Homomorphism {
    type Error = Error;

    fn try_from(f: HomFile) -> Result<Homomorphism> {
        Homomorphism::new(f.monoid, f.letters)
    }
}

impl From<Homomorphism> for HomFile {
    fn from(h: Homomorphism) -> HomFile {
        HomFile { monoid: h.monoid, letters: h.letters }
    }
}

impl Homomorphism {
    pub fn new(monoid: FiniteMonoid, letters: Vec<usize>) -> Result<Homomorphism> {
        if let Some(&x) = letters.iter().find(|&&x| x >= monoid.size()) {
            return Err(Error::Domain(format!("letter image {x} is not an element")));
        }
        Ok(Homomorphism { monoid, letters })
    }

    /// Every element is its own letter.
    pub fn identity(monoid: FiniteMonoid) -> Homomorphism {
        let letters = (0..monoid.size()).collect();
        Homomorphism { monoid, letters }
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn image(&self, word: &[usize]) -> Result<Vec<usize>> {
        word.iter()
            .map(|&a| self.letters.get(a).copied().ok_or_else(|| Error::Domain(format!("letter {a} has no image"))))
            .collect()
    }
}

/// Ordered tree whose leaves carry monoid elements and whose inner nodes carry
/// the product of their children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationTree {
    pub label: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<FactorizationTree>,
}

impl FactorizationTree {
    pub fn leaf(label: usize) -> FactorizationTree {
        FactorizationTree { label, children: Vec::new() }
    }

    /// Leaves are at height 0.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    /// Leaf labels from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        if self.children.is_empty() {
            out.push(self.label);
        }
        for c in &self.children {
            c.collect(out);
        }
    }

    /// Binary nodes carry the product of their children; nodes with three or
    /// more children have children all labelled by one idempotent, which is
    /// also their own label. Single-child nodes are rejected.
    pub fn validate(&self, m: &FiniteMonoid) -> Result<()> {
        if self.label >= m.size() {
            return Err(Error::Domain(format!("label {} is not an element", self.label)));
        }
        let labels: Vec<usize> = self.children.iter().map(|c| c.label).collect();
        match labels.as_slice() {
            [] => {}
            [_] => return Err(Error::Domain("node with a single child".into())),
            &[a, b] => {
                if m.mul(a, b) != self.label {
                    return Err(Error::Domain(format!("{a}·{b} is not {}", self.label)));
                }
            }
            [e, rest @ ..] => {
                if rest.iter().any(|x| x != e) || !m.is_idempotent(*e) || self.label != *e {
                    return Err(Error::Domain(format!("wide node {} over {labels:?}", self.label)));
                }
            }
        }
        self.children.iter().try_for_each(|c| c.validate(m))
    }
}

pub fn factorization_tree(h: &Homomorphism, word: &[usize]) -> Result<FactorizationTree> {
    factorize(h.monoid(), &h.image(word)?)
}

const INF: u32 = u32::MAX;

#[derive(Clone, Copy)]
enum Pick {
    Leaf,
    Split(usize),
    Wide,
}

/// A factorization tree of least height for `elems`.
///
/// Interval dynamic programming: an interval is a leaf, a binary split, or a
/// wide node whose segments all multiply to the interval's product `e`, which
/// must be idempotent. `two[i][j]` and `three[i][j]` are the best heights of
/// segmentations of `[i, j)` into at least two and at least three segments
/// with product `e`.
pub fn factorize(m: &FiniteMonoid, elems: &[usize]) -> Result<FactorizationTree> {
    let n = elems.len();
    if n == 0 {
        return Err(Error::Domain("cannot factorize the empty word".into()));
    }
    crate::error::budget("word length", n, MAX_WORD)?;
    if let Some(&x) = elems.iter().find(|&&x| x >= m.size()) {
        return Err(Error::Domain(format!("{x} is not an element")));
    }
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let cells = (n + 1) * (n + 1);
    let mut prod = vec![0usize; cells];
    for i in 0..n {
        let mut acc = m.unit();
        for j in i + 1..=n {
            acc = m.mul(acc, elems[j - 1]);
            prod[idx(i, j)] = acc;
        }
    }
    let mut h = vec![INF; cells];
    let mut pick = vec![Pick::Leaf; cells];
    let mut two = vec![INF; cells];
    let mut two_from = vec![(0usize, false); cells];
    let mut three = vec![INF; cells];
    let mut three_from = vec![0usize; cells];
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len;
            let c = idx(i, j);
            if len == 1 {
                h[c] = 0;
                continue;
            }
            let e = prod[c];
            if m.is_idempotent(e) {
                for k in i + 1..j {
                    if prod[idx(i, k)] != e || prod[idx(k, j)] != e {
                        continue;
                    }
                    let right = h[idx(k, j)];
                    let (left, from_one) = if h[idx(i, k)] <= two[idx(i, k)] {
                        (h[idx(i, k)], true)
                    } else {
                        (two[idx(i, k)], false)
                    };
                    let v = left.max(right);
                    if v < two[c] {
                        two[c] = v;
                        two_from[c] = (k, from_one);
                    }
                    let v = two[idx(i, k)].max(right);
                    if v < three[c] {
                        three[c] = v;
                        three_from[c] = k;
                    }
                }
            }
            for k in i + 1..j {
                let v = h[idx(i, k)].max(h[idx(k, j)]) + 1;
                if v < h[c] {
                    h[c] = v;
                    pick[c] = Pick::Split(k);
                }
            }
            if three[c] != INF && three[c] + 1 < h[c] {
                h[c] = three[c] + 1;
                pick[c] = Pick::Wide;
            }
        }
    }
    let t = Tables { n, prod, pick, two_from, three_from };
    Ok(t.build(0, n))
}

struct Tables {
    n: usize,
    prod: Vec<usize>,
    pick: Vec<Pick>,
    two_from: Vec<(usize, bool)>,
    three_from: Vec<usize>,
}

impl Tables {
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.n + 1) + j
    }

    fn build(&self, i: usize, j: usize) -> FactorizationTree {
        let c = self.idx(i, j);
        let label = self.prod[c];
        match self.pick[c] {
            Pick::Leaf => FactorizationTree::leaf(label),
            Pick::Split(k) => FactorizationTree { label, children: vec![self.build(i, k), self.build(k, j)] },
            Pick::Wide => {
                let mut cuts = vec![j];
                let mut k = self.three_from[c];
                cuts.push(k);
                // walk back through the two-or-more table until one segment is left
                loop {
                    let (k2, from_one) = self.two_from[self.idx(i, k)];
                    cuts.push(k2);
                    if from_one {
                        break;
                    }
                    k = k2;
                }
                cuts.push(i);
                cuts.reverse();
                let children = cuts.windows(2).map(|w| self.build(w[0], w[1])).collect();
                FactorizationTree { label, children }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    /// {1, a, b} with a·x = a and b·x = b for x ∈ {a, b}.
    fn left_zero_with_unit() -> FiniteMonoid {
        FiniteMonoid::new(vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]], 0).unwrap()
    }

    #[test]
    fn idempotent_examples() {
        assert_eq!(idempotents(&FiniteMonoid::cyclic(2).unwrap()), vec![0]);
        assert_eq!(idempotents(&left_zero_with_unit()), vec![0, 1, 2]);
    }

    #[test]
    fn laws_are_checked() {
        assert!(FiniteMonoid::new(vec![vec![0, 1], vec![1, 1]], 1).is_err());
        // (1·1)·2 = 2·2 = 1 but 1·(1·2) = 1·1 = 2
        assert!(FiniteMonoid::new(vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 1, 1]], 0).is_err());
        assert!(FiniteMonoid::new(vec![vec![0, 3]], 0).is_err());
    }

    #[test]
    fn single_letter_and_idempotent_run() {
        let m = left_zero_with_unit();
        let t = factorize(&m, &[2]).unwrap();
        assert_eq!(t.height(), 0);
        let t = factorize(&m, &[1; 5]).unwrap();
        assert_eq!(t.height(), 1);
        assert_eq!(t.children.len(), 5);
        t.validate(&m).unwrap();
        assert!(factorize(&m, &[]).is_err());
    }

    #[test]
    fn validator_rejects_bad_nodes() {
        let m = FiniteMonoid::cyclic(3).unwrap();
        let good = FactorizationTree { label: 2, children: vec![FactorizationTree::leaf(1), FactorizationTree::leaf(1)] };
        good.validate(&m).unwrap();
        let wrong = FactorizationTree { label: 0, ..good.clone() };
        assert!(wrong.validate(&m).is_err());
        let wide = FactorizationTree { label: 0, children: vec![FactorizationTree::leaf(1); 3] };
        assert!(wide.validate(&m).is_err());
        let only = FactorizationTree { label: 1, children: vec![FactorizationTree::leaf(1)] };
        assert!(only.validate(&m).is_err());
    }

    #[test]
    fn random_words_meet_the_height_bound() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_monoid(&mut rng, 6);
            let len = rng.gen_range(1..=120);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..m.size())).collect();
            let t = factorize(&m, &w).unwrap();
            t.validate(&m).unwrap();
            assert_eq!(t.leaves(), w);
            assert_eq!(t.label, m.product(w.iter().copied()));
            assert!(t.height() <= 3 * m.size());
        }
    }

    #[test]
    fn homomorphism_json() {
        let h = Homomorphism::new(FiniteMonoid::cyclic(2).unwrap(), vec![1, 0]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(serde_json::from_str::<Homomorphism>(&s).unwrap(), h);
        assert!(serde_json::from_str::<Homomorphism>(r#"{"monoid":{"table":[[0]],"unit":0},"letters":[1]}"#).is_err());
        assert_eq!(factorization_tree(&h, &[0, 0, 1]).unwrap().label, 0);
    }
}
