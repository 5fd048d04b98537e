//! Canonical labelling by individualization and refinement.

use std::hash::{Hash, Hasher};

use super::{Slot, Structure, Tuple};
use crate::{Error, Result};

/// A permutation `A -> B`: element `v` of `A` goes to `map[v]` in `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub map: Vec<usize>,
}

impl IsoWitness {
    pub fn identity(n: usize) -> IsoWitness {
        IsoWitness { map: (0..n).collect() }
    }

    pub fn inverse(&self) -> IsoWitness {
        let mut inv = vec![0; self.map.len()];
        for (v, &w) in self.map.iter().enumerate() {
            inv[w] = v;
        }
        IsoWitness { map: inv }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &IsoWitness) -> IsoWitness {
        IsoWitness { map: self.map.iter().map(|&w| next.map[w]).collect() }
    }

    pub fn apply(&self, a: &Structure) -> Structure {
        a.relabel(&self.map, a.size())
    }
}

/// Canonical representative of an isomorphism class, optionally of coloured structures.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// The relabelled structure.
    pub structure: Structure,
    /// Element colours listed in canonical order; empty when uncoloured.
    pub colours: Vec<usize>,
    /// Original id to canonical id.
    pub labelling: Vec<usize>,
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &CanonicalForm) -> bool {
        self.structure == other.structure && self.colours == other.colours
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.structure.hash(state);
        self.colours.hash(state);
    }
}

pub fn canonical_form(a: &Structure) -> CanonicalForm {
    let mut c = Search::new(a, &vec![0; a.size()]).run();
    c.colours.clear();
    c
}

/// Canonical form for structures whose elements carry colours that isomorphisms must preserve.
pub fn canonical_form_coloured(a: &Structure, colours: &[usize]) -> CanonicalForm {
    assert_eq!(colours.len(), a.size(), "one colour per element");
    Search::new(a, colours).run()
}

pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<Option<IsoWitness>> {
    if a.vocabulary() != b.vocabulary() {
        return Err(Error::VocabularyMismatch("isomorphism needs a common vocabulary".into()));
    }
    if a.size() != b.size() {
        return Ok(None);
    }
    let (ca, cb) = (canonical_form(a), canonical_form(b));
    if ca != cb {
        return Ok(None);
    }
    let mut inv_b = vec![0; b.size()];
    for (v, &l) in cb.labelling.iter().enumerate() {
        inv_b[l] = v;
    }
    Ok(Some(IsoWitness { map: ca.labelling.iter().map(|&l| inv_b[l]).collect() }))
}

type Key = Vec<Vec<Tuple>>;

/// Relation index, argument position and the colours seen in every slot of the tuple.
type Sig = (usize, usize, Vec<Vec<usize>>);

struct Search<'a> {
    a: &'a Structure,
    n: usize,
    tuples: Vec<Vec<&'a Tuple>>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
    initial: Vec<usize>,
}

#[derive(Clone)]
struct Leaf {
    path: Vec<usize>,
    lab: Vec<usize>,
    key: Key,
}

impl<'a> Search<'a> {
    fn new(a: &'a Structure, colours: &[usize]) -> Search<'a> {
        let tuples = a.relations().map(|(_, ts)| ts.iter().collect()).collect();
        Search {
            a,
            n: a.size(),
            tuples,
            first: None,
            best: None,
            generators: Vec::new(),
            initial: colours.to_vec(),
        }
    }

    fn run(mut self) -> CanonicalForm {
        let start = self.refine(dense(&self.initial));
        let mut path = Vec::new();
        self.search(start, &mut path);
        let best = self.best.expect("search visits at least one leaf");
        let mut colours = vec![0; self.n];
        for v in 0..self.n {
            colours[best.lab[v]] = self.initial[v];
        }
        CanonicalForm { structure: self.a.relabel(&best.lab, self.n), colours, labelling: best.lab }
    }

    /// Returns the level to resume at after an automorphism backjump.
    fn search(&mut self, colour: Vec<usize>, path: &mut Vec<usize>) -> Option<usize> {
        let level = path.len();
        let Some(cell) = first_nonsingleton(&colour) else {
            return self.leaf(colour, path);
        };
        let candidates: Vec<usize> = (0..self.n).filter(|&v| colour[v] == cell).collect();
        let mut tried: Vec<usize> = Vec::new();
        for v in candidates {
            if !tried.is_empty() {
                let orbit = self.orbits(path);
                if tried.iter().any(|&w| find(&orbit, w) == find(&orbit, v)) {
                    continue;
                }
            }
            tried.push(v);
            let next = individualize(&colour, v);
            let next = self.refine(next);
            path.push(v);
            let jump = self.search(next, path);
            path.pop();
            if let Some(l) = jump {
                if l < level {
                    return Some(l);
                }
            }
        }
        None
    }

    fn leaf(&mut self, colour: Vec<usize>, path: &[usize]) -> Option<usize> {
        let lab = colour;
        let key = self.key(&lab);
        let leaf = Leaf { path: path.to_vec(), lab, key };
        let Some(first) = &self.first else {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return None;
        };
        if leaf.key == first.key {
            let gen = automorphism(&first.lab, &leaf.lab);
            let c = common_prefix(&first.path, &leaf.path);
            self.generators.push(gen);
            return Some(c);
        }
        let best = self.best.as_ref().expect("set with first");
        match leaf.key.cmp(&best.key) {
            std::cmp::Ordering::Equal => {
                let gen = automorphism(&best.lab, &leaf.lab);
                let c = common_prefix(&best.path, &leaf.path);
                self.generators.push(gen);
                Some(c)
            }
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    fn key(&self, lab: &[usize]) -> Key {
        self.tuples
            .iter()
            .map(|ts| {
                let mut out: Vec<Tuple> =
                    ts.iter().map(|t| t.iter().map(|s| s.map(|x| lab[x])).collect()).collect();
                out.sort_unstable();
                out
            })
            .collect()
    }

    /// Union-find parents for the orbits of the automorphisms fixing `path` pointwise.
    fn orbits(&self, path: &[usize]) -> Vec<usize> {
        let mut uf: Vec<usize> = (0..self.n).collect();
        for g in &self.generators {
            if path.iter().all(|&v| g[v] == v) {
                for (v, &w) in g.iter().enumerate() {
                    let (a, b) = (find(&uf, v), find(&uf, w));
                    if a != b {
                        uf[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        uf
    }

    /// Colour refinement to the coarsest equitable partition below `colour`.
    fn refine(&self, mut colour: Vec<usize>) -> Vec<usize> {
        let mut cells = count_cells(&colour);
        loop {
            let mut sig: Vec<Vec<Sig>> = vec![Vec::new(); self.n];
            for (r, ts) in self.tuples.iter().enumerate() {
                for t in ts {
                    let pattern: Vec<Vec<usize>> = t
                        .iter()
                        .map(|s| {
                            let mut c: Vec<usize> = s.ids().iter().map(|&x| colour[x]).collect();
                            if matches!(s, Slot::Set(_)) {
                                c.sort_unstable();
                            }
                            c
                        })
                        .collect();
                    for (p, s) in t.iter().enumerate() {
                        for &x in s.ids() {
                            sig[x].push((r, p, pattern.clone()));
                        }
                    }
                }
            }
            let mut keyed: Vec<(usize, Vec<Sig>)> = colour
                .iter()
                .zip(sig)
                .map(|(&c, mut s)| {
                    s.sort_unstable();
                    (c, s)
                })
                .collect();
            let mut order: Vec<usize> = (0..self.n).collect();
            order.sort_by(|&x, &y| keyed[x].cmp(&keyed[y]));
            let mut next = vec![0; self.n];
            let mut rank = 0;
            for i in 0..order.len() {
                if i > 0 && keyed[order[i]] != keyed[order[i - 1]] {
                    rank += 1;
                }
                next[order[i]] = rank;
            }
            keyed.clear();
            let new_cells = count_cells(&next);
            colour = next;
            if new_cells == cells {
                return colour;
            }
            cells = new_cells;
        }
    }
}

fn dense(colours: &[usize]) -> Vec<usize> {
    let mut vals: Vec<usize> = colours.to_vec();
    vals.sort_unstable();
    vals.dedup();
    colours.iter().map(|c| vals.binary_search(c).expect("present")).collect()
}

fn count_cells(colour: &[usize]) -> usize {
    colour.iter().max().map_or(0, |m| m + 1)
}

/// Cell index of the first cell with more than one element.
fn first_nonsingleton(colour: &[usize]) -> Option<usize> {
    let mut count = vec![0usize; colour.len()];
    for &c in colour {
        count[c] += 1;
    }
    count.iter().position(|&k| k > 1)
}

fn individualize(colour: &[usize], v: usize) -> Vec<usize> {
    let split: Vec<usize> = colour.iter().enumerate().map(|(x, &c)| 2 * c + usize::from(x != v)).collect();
    dense(&split)
}

fn automorphism(lab1: &[usize], lab2: &[usize]) -> Vec<usize> {
    let mut inv1 = vec![0; lab1.len()];
    for (v, &l) in lab1.iter().enumerate() {
        inv1[l] = v;
    }
    lab2.iter().map(|&l| inv1[l]).collect()
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find(uf: &[usize], mut x: usize) -> usize {
    while uf[x] != x {
        x = uf[x];
    }
    x
}
