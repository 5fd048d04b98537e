//! Replays the checked-in fuzz corpus through the same entry points as the
//! fuzz targets, so the seeds stay valid as formats change.

use std::fs;
use std::path::PathBuf;

use mso_core::algebra::{factorize, BranchTerm, FiniteMonoid, Homomorphism};
use mso_core::encodings::{catalog, decode};
use mso_core::logic::parse;
use mso_core::matroid::AnyMatroid;
use mso_core::structures::Structure;
use mso_core::transduction::Transduction;
use mso_core::width::{decode_decomposition, CompiledDecomposition, Hypergraph};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(seed: &(String, Vec<u8>)) -> &str {
    std::str::from_utf8(&seed.1).unwrap()
}

#[test]
fn structure_seeds() {
    for s in seeds("structure_json") {
        match Structure::from_json(text(&s)) {
            Ok(a) => assert_eq!(Structure::from_json(&a.to_json()).unwrap(), a, "{}", s.0),
            Err(_) => assert!(s.0.starts_with("bad"), "{} should parse", s.0),
        }
    }
}

#[test]
fn formula_seeds() {
    for s in seeds("formula") {
        let f = parse(text(&s)).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f, "{}", s.0);
    }
}

#[test]
fn json_seeds_parse() {
    for s in seeds("transduction_json") {
        Transduction::from_json(text(&s)).unwrap();
    }
    for s in seeds("matroid_json") {
        AnyMatroid::from_json(text(&s)).unwrap();
    }
    for s in seeds("hypergraph_json") {
        Hypergraph::from_json(text(&s)).unwrap();
    }
    for s in seeds("branch_term") {
        BranchTerm::from_json(text(&s)).unwrap();
    }
    for s in seeds("compiled_decomposition") {
        decode_decomposition(&CompiledDecomposition::from_json(text(&s)).unwrap()).unwrap();
    }
}

#[test]
fn monoid_seeds() {
    for s in seeds("monoid_json") {
        let t = text(&s);
        if let Ok(m) = FiniteMonoid::from_json(t) {
            let word: Vec<usize> = (0..m.size()).collect();
            factorize(&m, &word).unwrap().validate(&m).unwrap();
        } else {
            serde_json::from_str::<Homomorphism>(t).unwrap();
        }
    }
}

#[test]
fn decoder_seeds_decode() {
    let entries = catalog();
    let seeds = seeds("encoding_decode");
    assert_eq!(seeds.len(), entries.len());
    for (name, body) in seeds {
        let (&pick, rest) = body.split_first().unwrap();
        let e = &entries[pick as usize % entries.len()];
        assert_eq!(e.id, name);
        let b = Structure::from_json(std::str::from_utf8(rest).unwrap()).unwrap();
        // the fuzz target skips larger inputs
        assert!(b.size() <= 24, "{name}: {} elements", b.size());
        decode(&e.id, &b).unwrap();
    }
}
