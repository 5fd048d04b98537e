//! Acceptance suite: one line per criterion.
//!
//! Criteria 5 and 10 are known to fail (upper connectivity bound, census
//! ordering); the process exits nonzero on any other failure.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mso_core::algebra::{eval_term, factorize, random_monoid, realises, term_from_branch_decomposition};
use mso_core::encodings::{self, catalog, growth_check, is_sparse_paving, sparse_paving_non_bases};
use mso_core::logic::{holds, parse};
use mso_core::matroid::{
    connected_components, connectivity, enumerate_represented, for_each_decomposition,
    separation_components, BranchDecomposition, GeneralMatroid, Matroid,
};
use mso_core::structures::{build, census, enumerate_class, is_isomorphic, member, ClassId, Structure};
use mso_core::subsets::{self, Mask};
use mso_core::transduction::{
    apply, language_compose, library, Dedup, Interpretation, RelationDef, Step, Transduction,
};
use mso_core::width::{
    bipartition_rank, compile_decomposition, decode_decomposition, matroid_sensitivity, sensitivity, Hypergraph,
};
use mso_core::structures::Kind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Outcome);

const KNOWN_RED: [usize; 2] = [5, 10];

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "encoding round trips", c1_round_trips),
        (2, "rank <= sensitivity <= 2^rank", c2_rank_sensitivity),
        (3, "compile/decode equivalence", c3_compile_decode),
        (4, "matroid cross-oracles", c4_matroid_oracles),
        (5, "connectivity vs sensitivity", c5_connectivity_sensitivity),
        (6, "branchwidth-algebra round trip", c6_algebra_round_trip),
        (7, "sparse paving validity", c7_sparse_paving),
        (8, "factorization forests", c8_factorization),
        (9, "logic and transduction semantics", c9_semantics),
        (10, "growth-rate sanity", c10_growth),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                let tag = if KNOWN_RED.contains(&id) { "FAIL (known)" } else { "FAIL" };
                println!("criterion {id:>2} {tag}  {name}: {detail} ({secs:.1}s)");
                if !KNOWN_RED.contains(&id) {
                    unexpected.push(id);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_round_trips() -> Outcome {
    let limit = Duration::from_secs(60);
    let mut total = 0;
    let mut slowest = (Duration::ZERO, String::new());
    for e in catalog() {
        let start = Instant::now();
        let corpus = e.default_corpus(None).map_err(|x| format!("{}: {x}", e.id))?;
        let r = encodings::roundtrip_report(&e.id, &corpus).map_err(|x| format!("{}: {x}", e.id))?;
        let took = start.elapsed();
        check(r.passed(), || format!("{}: {} of {} failed, first {:?}", e.id, r.failures.len(), r.checked, r.failures[0]))?;
        check(took <= limit, || format!("{} took {took:?}", e.id))?;
        check(r.checked > 0, || format!("{}: empty corpus", e.id))?;
        total += r.checked;
        if took > slowest.0 {
            slowest = (took, e.id.clone());
        }
    }
    Ok(format!(
        "{} entries, {total} inputs, 0 failures, slowest {} at {:.1}s",
        catalog().len(),
        slowest.1,
        slowest.0.as_secs_f64()
    ))
}

fn random_family(rng: &mut ChaCha8Rng, n: usize) -> Hypergraph {
    Hypergraph::new(n, (0..1u64 << n).filter(|_| rng.gen_bool(0.5))).expect("distinct subsets")
}

fn c2_rank_sensitivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cuts = 0usize;
    let mut check_all = |g: &Hypergraph| -> Result<(), String> {
        for u in subsets::submasks(subsets::full(g.len())) {
            let r = bipartition_rank(g, u).map_err(|e| e.to_string())?;
            let s = sensitivity(g, u).map_err(|e| e.to_string())?;
            check(r <= s && s <= 1 << r, || format!("{:?} U={u:b}: rank {r}, sensitivity {s}", g.edges()))?;
            cuts += 1;
        }
        Ok(())
    };
    for n in 1..=3 {
        for bits in 0u64..1 << (1 << n) {
            check_all(&Hypergraph::new(n, subsets::iter(bits).map(|e| e as Mask)).unwrap())?;
        }
    }
    for n in 4..=5 {
        for _ in 0..500 {
            check_all(&random_family(&mut rng, n))?;
        }
    }
    Ok(format!("{cuts} cuts (exhaustive n <= 3, 500 sampled families at n = 4, 5), 0 violations"))
}

fn round_trip(g: &Hypergraph, t: &BranchDecomposition) -> Result<(), String> {
    let (s, origin) = compile_decomposition(g, t, None, None).map_err(|e| e.to_string())?;
    let back = decode_decomposition(&s).map_err(|e| e.to_string())?;
    let mut mapped: Vec<Mask> =
        back.edges().iter().map(|&x| subsets::from_elems(subsets::iter(x).map(|i| origin[i]))).collect();
    mapped.sort_unstable();
    let mut want = g.edges().to_vec();
    want.sort_unstable();
    check(mapped == want, || format!("{:?} decoded as {:?}", g.edges(), back.edges()))?;
    let iso = is_isomorphic(&back.to_structure(), &g.to_structure()).map_err(|e| e.to_string())?;
    check(iso.is_some(), || format!("{:?} not isomorphic after decoding", g.edges()))
}

fn c3_compile_decode() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases = 0usize;
    let mut err: Result<(), String> = Ok(());
    for n in 1..=4 {
        for a in enumerate_class(&ClassId::Hypergraphs, n).map_err(|e| e.to_string())? {
            let g = Hypergraph::from_structure(&a).unwrap();
            for_each_decomposition(n, |t| {
                if err.is_ok() {
                    err = round_trip(&g, t);
                    cases += 1;
                }
            })
            .unwrap();
            err.clone()?;
        }
    }
    let mut trees5 = Vec::new();
    for_each_decomposition(5, |t| trees5.push(t.clone())).unwrap();
    for _ in 0..400 {
        let g = random_family(&mut rng, 5);
        for t in &trees5 {
            round_trip(&g, t)?;
            cases += 1;
        }
    }
    let mut trees7 = Vec::new();
    for_each_decomposition(7, |t| trees7.push(t.clone())).unwrap();
    for _ in 0..200 {
        let g = random_family(&mut rng, 7);
        round_trip(&g, trees7.choose(&mut rng).unwrap())?;
        cases += 1;
    }
    Ok(format!(
        "{cases} (G, T) pairs: every hypergraph up to isomorphism with n <= 4, 400 seeded families at n = 5, \
         each with all {} cubic trees, and 200 random cases at n = 7; 0 failures",
        trees5.len()
    ))
}

fn c4_matroid_oracles() -> Outcome {
    let mut checks = 0usize;
    let mut count = 0;
    for n in 1..=4 {
        for m in enumerate_represented(2, n, 3).map_err(|e| e.to_string())? {
            count += 1;
            let g = GeneralMatroid::of(&m).unwrap();
            check(connected_components(&g).unwrap() == separation_components(&g).unwrap(), || {
                format!("components differ for {:?}", m.vectors())
            })?;
            check(g.dual().dual() == g, || format!("dual of dual differs for {:?}", m.vectors()))?;
            let e = g.ground();
            for x in subsets::submasks(e).filter(|&x| x != e) {
                let c = g.contract(x).unwrap();
                check(c == g.contract_by_extension(x).unwrap(), || format!("contractions differ at {x:b}"))?;
                for y in subsets::submasks(e & !x).filter(|&y| x | y != e) {
                    let a = c.delete(subsets::extract(y, e & !x)).unwrap();
                    let b = g.delete(y).unwrap().contract(subsets::extract(x, e & !y)).unwrap();
                    check(a == b, || format!("delete {y:b} / contract {x:b} do not commute"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{count} GF(2) matroids, {checks} minor pairs, 0 disagreements"))
}

fn c5_connectivity_sensitivity() -> Outcome {
    let (mut cuts, mut swapped_holds) = (0usize, 0usize);
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    // largest sensitivity seen per (q, connectivity)
    let mut peak = std::collections::BTreeMap::<(usize, usize), usize>::new();
    for q in [2usize, 3] {
        for n in 2..=5 {
            for m in enumerate_represented(q, n, 3).map_err(|e| e.to_string())? {
                for x in subsets::submasks(m.ground()).filter(|&x| x != 0 && x != m.ground()) {
                    let c = connectivity(&m, x).unwrap();
                    let s = matroid_sensitivity(&m, x).unwrap();
                    let case = || format!("GF({q}) {:?} X={x:b}: connectivity {c}, sensitivity {s}", m.vectors());
                    if c > s {
                        lower.push(case());
                    }
                    if s > 1 + q.pow(c as u32) {
                        upper.push(case());
                    }
                    if s <= c {
                        swapped_holds += 1;
                    }
                    let p = peak.entry((q, c)).or_default();
                    *p = (*p).max(s);
                    cuts += 1;
                }
            }
        }
    }
    let peaks: Vec<String> = peak.iter().map(|((q, c), s)| format!("GF({q}) conn {c}: {s}")).collect();
    let summary = format!(
        "{cuts} cuts; connectivity <= sensitivity violated {} times; sensitivity <= 1 + q^connectivity violated {} times{}; \
         swapped form sensitivity <= connectivity held on {swapped_holds} of {cuts}; max sensitivity [{}]",
        lower.len(),
        upper.len(),
        upper.first().map(|e| format!(" (first: {e})")).unwrap_or_default(),
        peaks.join(", ")
    );
    if lower.is_empty() && upper.is_empty() {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn c6_algebra_round_trip() -> Outcome {
    let (mut cases, mut ports, mut width_at) = (0usize, 0usize, 0usize);
    for n in 1..=5 {
        for m in enumerate_represented(2, n, n).map_err(|e| e.to_string())? {
            let mut err: Result<(), String> = Ok(());
            for_each_decomposition(n, |t| {
                if err.is_err() {
                    return;
                }
                err = (|| -> Result<(), String> {
                    let term = term_from_branch_decomposition(&m, t).map_err(|e| e.to_string())?;
                    let p = eval_term(&term).map_err(|e| e.to_string())?;
                    check(realises(&p, &m).unwrap(), || format!("{:?} with {:?}", m.vectors(), t))?;
                    let w = if n > 1 { t.width(|x| connectivity(&m, x).unwrap()) } else { 0 };
                    let s = term.max_sort().unwrap();
                    check(s <= 3 * w, || format!("{s} ports at width {w}"))?;
                    if s > ports {
                        (ports, width_at) = (s, w);
                    }
                    cases += 1;
                    Ok(())
                })();
            })
            .unwrap();
            err?;
        }
    }
    Ok(format!("{cases} (M, T) pairs over GF(2), 0 failures; largest port count {ports}, at width {width_at}"))
}

fn c7_sparse_paving() -> Outcome {
    let mut count = 0;
    for k in [1usize, 2] {
        let id = format!("{k}-uniform-to-matroid");
        for n in 1..=4 {
            for a in enumerate_class(&ClassId::KUniformHypergraphs(k), n).map_err(|e| e.to_string())? {
                let g = Hypergraph::from_structure(&a).unwrap();
                let nb = sparse_paving_non_bases(n, g.edges());
                // independent check of "agree on all but one element"
                for (i, &x) in nb.iter().enumerate() {
                    for &y in &nb[i + 1..] {
                        check(subsets::size(x ^ y) != 2, || format!("non-bases {x:b}, {y:b} differ in one swap"))?;
                    }
                }
                check(is_sparse_paving(&nb), || format!("{:?}", g.edges()))?;
                let m = encodings::encode(&id, &a).map_err(|e| e.to_string())?;
                check(member(&ClassId::MatroidIndependence, &m).unwrap(), || format!("{id} {:?}", g.edges()))?;
                let back = encodings::decode(&id, &m).map_err(|e| e.to_string())?;
                check(is_isomorphic(&back, &a).unwrap().is_some(), || format!("{id} {:?} not recovered", g.edges()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} uniform hypergraphs, 0 failures"))
}

fn c8_factorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tallest = (0usize, 0usize);
    for case in 0..1000 {
        let m = random_monoid(&mut rng, 6);
        let len = rng.gen_range(1..=200);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..m.size())).collect();
        let t = factorize(&m, &word).map_err(|e| format!("case {case}: {e}"))?;
        t.validate(&m).map_err(|e| format!("case {case}: {e}"))?;
        check(t.leaves() == word, || format!("case {case}: leaves differ from the word"))?;
        check(t.height() <= 3 * m.size(), || format!("case {case}: height {} for |M| = {}", t.height(), m.size()))?;
        tallest = tallest.max((t.height(), m.size()));
    }
    Ok(format!("1000 cases, 0 failures; tallest tree {} for |M| = {}", tallest.0, tallest.1))
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    build::graph(n, edges)
}

fn a_tree(parent: &[Option<usize>], labels: &[usize]) -> Structure {
    build::labelled_tree(2, parent, labels)
}

fn golden() -> Vec<(&'static str, Structure, bool)> {
    let even = "(exists-set X (and (forall x (in x X)) (divisible 2 X)))";
    let even_a_children =
        "(forall x (exists-set X (and (forall y (iff (in y X) (and (parent x y) (l0 y)))) (divisible 2 X))))";
    let triangle = "(exists x (exists y (exists z (and (edge x y) (edge y z) (edge x z)))))";
    let two_colour = "(exists-set X (forall x (forall y (implies (edge x y) (iff (in x X) (not (in y X)))))))";
    let connected = "(forall-set X (implies (and (exists x (in x X)) (exists y (not (in y X)))) \
                     (exists x (exists y (and (in x X) (not (in y X)) (edge x y))))))";
    let ab = "(exists x (exists y (and (lt x y) (l0 x) (l1 y))))";
    vec![
        ("true", build::bool(), true),
        ("false", build::bool(), false),
        (even, build::string(1, &[0]), false),
        (even, build::string(1, &[0, 0]), true),
        (even, build::string(1, &[0, 0, 0]), false),
        (even, build::string(1, &[0, 0, 0, 0]), true),
        ("(exists-set X (and (forall x (in x X)) (divisible 3 X)))", build::string(1, &[0, 0, 0]), true),
        ("(exists-set X (and (forall x (in x X)) (divisible 3 X)))", build::string(1, &[0, 0, 0, 0]), false),
        ("(forall-set X (divisible 5 X))", build::string(1, &[0]), false),
        (even_a_children, a_tree(&[None, Some(0), Some(0)], &[1, 0, 0]), true),
        (even_a_children, a_tree(&[None, Some(0), Some(0)], &[1, 0, 1]), false),
        (even_a_children, a_tree(&[None, Some(0), Some(0), Some(1), Some(1)], &[0, 0, 1, 0, 0]), false),
        (triangle, graph(3, &[(0, 1), (1, 2), (0, 2)]), true),
        (triangle, graph(3, &[(0, 1), (1, 2)]), false),
        (two_colour, graph(3, &[(0, 1), (1, 2), (0, 2)]), false),
        (two_colour, graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]), true),
        (connected, graph(4, &[(0, 1), (2, 3)]), false),
        (connected, graph(4, &[(0, 1), (1, 2), (2, 3)]), true),
        (ab, build::string(2, &[0, 1]), true),
        (ab, build::string(2, &[1, 1, 0]), false),
    ]
}

fn binary_tree_maps() -> Vec<Transduction> {
    let keep_parent = Step::Interpretation(Interpretation {
        universe: parse("(= x x)").unwrap(),
        relations: vec![RelationDef {
            name: "parent".into(),
            kinds: vec![Kind::Element, Kind::Element],
            vars: vec!["y".into(), "z".into()],
            formula: parse("(parent y z)").unwrap(),
        }],
    });
    let proper = "(forall x (forall y (implies (parent x y) (not (iff (_col_0 x) (_col_0 y))))))";
    let coloured = Transduction::new(
        ClassId::BinaryTrees,
        ClassId::BinaryTrees,
        vec![Step::Colour(2), Step::Filter(parse(proper).unwrap()), keep_parent],
    )
    .unwrap();
    vec![library::identity_interpretation(&ClassId::BinaryTrees), coloured]
}

fn c9_semantics() -> Outcome {
    let suite = golden();
    for (i, (f, a, want)) in suite.iter().enumerate() {
        let got = holds(&parse(f).map_err(|e| format!("golden {i}: {e}"))?, a).map_err(|e| format!("golden {i}: {e}"))?;
        check(got == *want, || format!("golden {i}: {f} gave {got}"))?;
    }
    let dup = library::duplicate_strings(2);
    let mut strings = 0;
    for n in 1..=3 {
        for a in enumerate_class(&ClassId::Strings(2), n).unwrap() {
            let w = build::read_string(&a, 2).unwrap();
            let out = apply(&dup, &a, Dedup::None).map_err(|e| e.to_string())?;
            check(out.len() == 1, || format!("{} outputs for {w:?}", out.len()))?;
            let o = &out[0];
            let ww: Vec<usize> = w.iter().chain(&w).copied().collect();
            check(build::read_string(&o.output, 2) == Some(ww), || format!("{w:?} not doubled"))?;
            let src = library::positions_in_order(&a);
            let dst = library::positions_in_order(&o.output);
            check(dst.iter().enumerate().all(|(p, &y)| o.origin[y] == src[p % n]), || format!("origins of {w:?}"))?;
            strings += 1;
        }
    }
    let sentences = [
        "(exists-set X (and (forall x (iff (in x X) (not (exists y (parent x y))))) (divisible 2 X)))",
        "(forall x (or (not (exists y (parent x y))) (exists y (exists z (and (parent x y) (parent x z) (not (= y z)))))))",
        "(exists x (exists y (and (parent x y) (exists z (parent y z)))))",
    ];
    let mut trees = 0;
    for t in binary_tree_maps() {
        for s in sentences {
            let f = parse(s).unwrap();
            let composed = language_compose(&t, |b| holds(&f, b));
            for n in 1..=7 {
                for a in enumerate_class(&ClassId::BinaryTrees, n).unwrap() {
                    let direct = apply(&t, &a, Dedup::None)
                        .map_err(|e| e.to_string())?
                        .iter()
                        .any(|o| holds(&f, &o.output).unwrap());
                    check(composed(&a).map_err(|e| e.to_string())? == direct, || format!("{s} on tree of size {n}"))?;
                    trees += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} golden triples, {strings} duplicated strings, {trees} (transduction, sentence, tree) checks; 0 failures",
        suite.len()
    ))
}

fn c10_growth() -> Outcome {
    let mut notes = Vec::new();
    let mut ordering_ok = true;
    for n in [3usize, 4] {
        let h = census(&ClassId::Hypergraphs, n).map_err(|e| e.to_string())?;
        // exact counts of ternary relations stop at n = 3; the n = 3 count bounds n = 4 from below
        let (r, exact) = match census(&ClassId::KAryRelations(3), n) {
            Ok(r) => (r, true),
            Err(_) => (census(&ClassId::KAryRelations(3), 3).map_err(|e| e.to_string())?, false),
        };
        let g = census(&ClassId::GraphsEdge, n).map_err(|e| e.to_string())?;
        let ok = h > r && r > g;
        ordering_ok &= ok;
        notes.push(format!(
            "n={n}: hypergraphs {h}, ternary relations {}{r}, graphs {g} ({})",
            if exact { "" } else { ">= " },
            if ok { "ordered" } else { "hypergraphs > ternary relations fails" }
        ));
    }
    let mut entries = 0;
    for e in catalog() {
        for n in [3, 4] {
            let c = match growth_check(&e.id, n) {
                Ok(c) => c,
                Err(mso_core::Error::Budget { .. }) if n == 4 => continue,
                Err(x) => return Err(format!("{} at n = {n}: {x}", e.id)),
            };
            check(c.holds, || format!("encoding census inequality fails: {c:?}"))?;
            entries += 1;
        }
    }
    notes.push(format!("{entries} encoding census checks hold"));
    if ordering_ok {
        Ok(notes.join("; "))
    } else {
        Err(notes.join("; "))
    }
}
