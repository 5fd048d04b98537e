use mso_core::algebra::{
    eval_term, factorize, random_monoid, realises, recognizability_probe, term_from_branch_decomposition, BranchTerm,
    FactorizationTree, FiniteMonoid, Language, PortedMatroid,
};
use mso_core::logic::parse;
use mso_core::matroid::{connectivity, for_each_decomposition, RepresentedMatroid};
use mso_core::transduction::library;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn random_constant(rng: &mut ChaCha8Rng, q: usize) -> PortedMatroid {
    let n = rng.gen_range(1..=4);
    let d = rng.gen_range(1..=3);
    let vectors = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..q) as u8).collect()).collect();
    let k = rng.gen_range(0..=n);
    let ports = (0..k).map(|_| rng.gen_range(0..n)).collect();
    PortedMatroid::new(RepresentedMatroid::new(q, d, vectors).unwrap(), ports).unwrap()
}

/// A constant or a union of two, possibly already quotiented.
fn random_term(rng: &mut ChaCha8Rng, q: usize) -> BranchTerm {
    let mut t = BranchTerm::constant(random_constant(rng, q));
    if rng.gen_bool(0.5) {
        t = BranchTerm::union(t, BranchTerm::constant(random_constant(rng, q)));
    }
    let k = t.sort().unwrap().1;
    if k > 0 && rng.gen_bool(0.5) {
        t = BranchTerm::quotient((0..k).map(|_| rng.gen_range(0..q) as u8).collect(), t);
    }
    t
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn quotient_commutes_with_bijective_rename(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = [2, 3, 5][rng.gen_range(0..3)];
        let t = random_term(&mut rng, q);
        let k = t.sort().unwrap().1;
        let mut alpha: Vec<usize> = (0..k).collect();
        rand::seq::SliceRandom::shuffle(alpha.as_mut_slice(), &mut rng);
        let a: Vec<u8> = (0..k).map(|_| rng.gen_range(0..q) as u8).collect();
        let a_alpha: Vec<u8> = alpha.iter().map(|&i| a[i]).collect();
        let lhs = BranchTerm::quotient(a_alpha, BranchTerm::rename(alpha.clone(), t.clone()));
        let rhs = BranchTerm::rename(alpha, BranchTerm::quotient(a, t));
        prop_assert_eq!(eval_term(&lhs).unwrap(), eval_term(&rhs).unwrap());
    }

    #[test]
    fn factorizations_validate(seed in any::<u64>(), len in 1usize..=120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monoid(&mut rng, 6);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..m.size())).collect();
        let t = factorize(&m, &word).unwrap();
        prop_assert!(t.validate(&m).is_ok());
        prop_assert!(valid_by_recomputation(&t, &m));
        prop_assert_eq!(t.leaves(), word);
        prop_assert!(t.height() <= 3 * m.size());
    }

    #[test]
    fn validator_matches_the_node_rules(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monoid(&mut rng, 6);
        let t = random_tree(&mut rng, &m, 3);
        prop_assert_eq!(t.validate(&m).is_ok(), valid_by_recomputation(&t, &m));
    }
}

/// Recomputes each node's label from its children and compares.
fn valid_by_recomputation(t: &FactorizationTree, m: &FiniteMonoid) -> bool {
    if t.label >= m.size() || !t.children.iter().all(|c| valid_by_recomputation(c, m)) {
        return false;
    }
    let labels: Vec<usize> = t.children.iter().map(|c| c.label).collect();
    match labels.len() {
        0 => true,
        1 => false,
        2 => m.product(labels) == t.label,
        _ => {
            let e = labels[0];
            m.mul(e, e) == e && labels.iter().all(|&x| x == e) && t.label == e
        }
    }
}

/// Random trees, about half of whose nodes are labelled consistently.
fn random_tree(rng: &mut ChaCha8Rng, m: &FiniteMonoid, depth: usize) -> FactorizationTree {
    let arity = if depth == 0 { 0 } else { [0, 0, 1, 2, 2, 3, 4][rng.gen_range(0..7)] };
    if arity == 0 {
        return FactorizationTree::leaf(rng.gen_range(0..m.size()));
    }
    let mut children: Vec<FactorizationTree> = (0..arity).map(|_| random_tree(rng, m, depth - 1)).collect();
    if arity >= 3 && rng.gen_bool(0.7) {
        // relabel the children's roots with a common idempotent, when there is one
        let es: Vec<usize> = (0..m.size()).filter(|&e| m.is_idempotent(e)).collect();
        let e = es[rng.gen_range(0..es.len())];
        for c in &mut children {
            c.label = e;
            c.children.clear();
        }
    }
    let honest = match arity {
        1 => children[0].label,
        2 => m.mul(children[0].label, children[1].label),
        _ => children[0].label,
    };
    let label = if rng.gen_bool(0.6) { honest } else { rng.gen_range(0..m.size()) };
    FactorizationTree { label, children }
}

#[test]
fn compiled_terms_keep_ports_within_three_times_the_width() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = (0usize, 0usize);
    for _ in 0..40 {
        let q = [2, 3][rng.gen_range(0..2)];
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(1..=4);
        let vectors = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..q) as u8).collect()).collect();
        let m = RepresentedMatroid::new(q, d, vectors).unwrap();
        let mut count = 0;
        for_each_decomposition(n, |t| {
            count += 1;
            if count % 7 != 1 {
                return;
            }
            let term = term_from_branch_decomposition(&m, t).unwrap();
            assert!(realises(&eval_term(&term).unwrap(), &m).unwrap());
            let width = t.width(|x| connectivity(&m, x).unwrap());
            let ports = term.max_sort().unwrap();
            assert!(ports <= 3 * width, "{ports} ports at width {width}");
            worst = worst.max((ports, width));
        })
        .unwrap();
    }
    assert!(worst.0 > 0);
}

#[test]
fn definable_languages_show_no_disagreement() {
    let sentences = [
        "(exists-set X (and (forall x (in x X)) (divisible 2 X)))",
        "(exists x (exists y (and (lt x y) (l0 x) (l1 y))))",
        "(forall x (or (l0 x) (l1 x)))",
    ];
    for s in sentences {
        let r = recognizability_probe(&library::duplicate_strings(2), &Language::Sentence(parse(s).unwrap()), 4).unwrap();
        assert_eq!(r.disagreements, 0, "{s}");
        assert!(r.rows.iter().all(|row| row.direct.is_some()));
    }
    let even_children = "(forall x (exists-set X (and (forall y (iff (in y X) (parent x y))) (divisible 2 X))))";
    let r =
        recognizability_probe(&library::unlabel_trees(2), &Language::Sentence(parse(even_children).unwrap()), 4).unwrap();
    assert_eq!(r.disagreements, 0);
    assert!(r.accepted > 0 && r.accepted < r.rows.len());
}
