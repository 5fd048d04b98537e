use std::collections::{HashMap, HashSet};

use mso_core::logic::parse;
use mso_core::structures::{canonical_form, canonical_form_coloured, enumerate_class, ClassId, Kind, Structure};
use mso_core::transduction::{
    apply, apply_step, compose, Budget, Dedup, Interpretation, RelationDef, Step, Transduction,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graphs(max: usize) -> Vec<Structure> {
    (1..=max).flat_map(|n| enumerate_class(&ClassId::GraphsEdge, n).unwrap()).collect()
}

fn edge_interpretation(universe: &str, edge: &str) -> Step {
    Step::Interpretation(Interpretation {
        universe: parse(universe).unwrap(),
        relations: vec![RelationDef {
            name: "edge".into(),
            kinds: vec![Kind::Element, Kind::Element],
            vars: vec!["y".into(), "z".into()],
            formula: parse(edge).unwrap(),
        }],
    })
}

fn graph_map(steps: Vec<Step>) -> Transduction {
    Transduction::new(ClassId::GraphsEdge, ClassId::GraphsEdge, steps).unwrap()
}

/// Keeps the edges inside the classes of a 2-colouring.
fn split() -> Transduction {
    graph_map(vec![
        Step::Colour(2),
        edge_interpretation("(= x x)", "(and (edge y z) (iff (_col_0 y) (_col_0 z)))"),
    ])
}

fn has_edge() -> Transduction {
    graph_map(vec![Step::Filter(parse("(exists x (exists y (edge x y)))").unwrap())])
}

/// Two copies joined by a perfect matching.
fn prism() -> Transduction {
    graph_map(vec![Step::Copy(2), edge_interpretation("(= x x)", "(or (edge y z) (_copy_2 y z) (_copy_2 z y))")])
}

#[test]
fn origins_are_sound_for_every_step() {
    let steps = [
        Step::Copy(2),
        Step::Copy(3),
        Step::Colour(2),
        Step::Filter(parse("(forall x (exists y (edge x y)))").unwrap()),
        edge_interpretation("(exists z (edge x z))", "(edge y z)"),
    ];
    for a in graphs(3) {
        let n = a.size();
        for s in &steps {
            for (_, origin) in apply_step(s, &a, Budget::default()).unwrap() {
                assert!(origin.iter().all(|&o| o < n));
                let mut count = vec![0usize; n];
                for &o in &origin {
                    count[o] += 1;
                }
                match s {
                    Step::Copy(k) => assert!(count.iter().all(|&c| c == *k)),
                    _ => assert!(count.iter().all(|&c| c <= 1)),
                }
            }
        }
    }
}

#[test]
fn filtering_twice_is_filtering_once() {
    let f = Step::Filter(parse("(exists-set X (forall x (forall y (implies (edge x y) (iff (in x X) (not (in y X)))))))").unwrap());
    let once = graph_map(vec![f.clone()]);
    let twice = graph_map(vec![f.clone(), f]);
    for a in graphs(4) {
        assert_eq!(apply(&once, &a, Dedup::None).unwrap(), apply(&twice, &a, Dedup::None).unwrap());
    }
}

fn triple_set(t: &Transduction, a: &Structure) -> HashSet<mso_core::structures::CanonicalForm> {
    apply(t, a, Dedup::WithOrigins).unwrap().iter().map(|o| canonical_form_coloured(&o.output, &o.origin)).collect()
}

#[test]
fn composition_is_associative() {
    let (t1, t2, t3) = (split(), has_edge(), prism());
    let left = compose(&compose(&t1, &t2).unwrap(), &t3).unwrap();
    let right = compose(&t1, &compose(&t2, &t3).unwrap()).unwrap();
    for a in graphs(3) {
        assert_eq!(triple_set(&left, &a), triple_set(&right, &a));
    }
}

#[test]
fn apply_is_isomorphism_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = compose(&split(), &has_edge()).unwrap();
    let outputs = |a: &Structure| {
        let mut m: HashMap<_, usize> = HashMap::new();
        for o in apply(&t, a, Dedup::None).unwrap() {
            *m.entry(canonical_form(&o.output)).or_default() += 1;
        }
        m
    };
    for a in graphs(4) {
        let mut perm: Vec<usize> = (0..a.size()).collect();
        perm.shuffle(&mut rng);
        assert_eq!(outputs(&a), outputs(&a.relabel(&perm, a.size())));
    }
}
