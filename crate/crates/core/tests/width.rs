use mso_core::matroid::for_each_decomposition;
use mso_core::structures::{enumerate_class, is_isomorphic, ClassId};
use mso_core::subsets::{self, Mask};
use mso_core::width::{
    bipartition_rank, colour_run, compile_decomposition, decode_decomposition, sensitivity, sensitivity_classes,
    CompiledDecomposition, CompiledNode, Hypergraph,
};
use proptest::prelude::*;

fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::btree_set(0..(1u64 << n), 0..12).prop_map(move |edges| Hypergraph::new(n, edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_bounds_sensitivity(g in hypergraph()) {
        for u in subsets::submasks(subsets::full(g.len())) {
            let r = bipartition_rank(&g, u).unwrap();
            let s = sensitivity(&g, u).unwrap();
            prop_assert!(r <= s && s <= 1 << r, "rank {} sensitivity {}", r, s);
        }
    }
}

fn leaves_below(s: &CompiledDecomposition, v: usize, order: &[usize]) -> Mask {
    match &s.nodes[v] {
        CompiledNode::Leaf { .. } => subsets::singleton(order.iter().position(|&l| l == v).unwrap()),
        CompiledNode::Inner { left, right, .. } => leaves_below(s, *left, order) | leaves_below(s, *right, order),
    }
}

/// Every node's colour of a leaf set is the sensitivity class of its part below that node.
#[test]
fn colours_are_sensitivity_classes() {
    for n in 1..=4 {
        for a in enumerate_class(&ClassId::Hypergraphs, n).unwrap() {
            let g = Hypergraph::from_structure(&a).unwrap();
            for_each_decomposition(n, |t| {
                let (s, origin) = compile_decomposition(&g, t, None, None).unwrap();
                let order = mso_core::width::leaf_order(&s);
                let to_vertices = |leaves: Mask| subsets::from_elems(subsets::iter(leaves).map(|i| origin[i]));
                let below: Vec<Mask> = (0..s.nodes.len()).map(|v| to_vertices(leaves_below(&s, v, &order))).collect();
                let classes: Vec<Vec<usize>> = below.iter().map(|&u| sensitivity_classes(&g, u).unwrap()).collect();
                for leaves in subsets::submasks(subsets::full(n)) {
                    let x = to_vertices(leaves);
                    let run = colour_run(&s, leaves);
                    for v in 0..s.nodes.len() {
                        assert_eq!(run[v], classes[v][subsets::extract(x & below[v], below[v]) as usize] + 1);
                    }
                }
                let back = decode_decomposition(&s).unwrap();
                assert!(is_isomorphic(&back.to_structure(), &a).unwrap().is_some());
            })
            .unwrap();
        }
    }
}
