use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::CommandFactory;
use mso_cli::{run, Cli, Outcome, OPERATIONS};
use mso_core::structures::build;
use mso_core::transduction::library;
use serde_json::Value;

fn mso(args: &[&str]) -> Outcome {
    run(std::iter::once("mso").chain(args.iter().copied()), None)
}

fn ok(args: &[&str]) -> Value {
    let out = mso(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", out.stdout))
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Fixtures {
        let f = Fixtures { dir: tempfile::tempdir().unwrap() };
        f.put("ok.json", &build::string(2, &[0, 1, 1]).to_json());
        f.put("ok2.json", &build::string(2, &[1, 1, 0]).to_json());
        f.put("s4.json", &build::string(4, &[3, 0, 2]).to_json());
        f.put("graph.json", &build::graph(3, &[(0, 1), (1, 2)]).to_json());
        f.put("bad.json", r#"{"vocabulary":[{"name":"edge","kinds":["element","element"]}],"universe":2,"relations":{"edge":[[0,5]]}}"#);
        f.put("g.json", r#"{"n":3,"edges":[]}"#);
        f.put("h.json", r#"{"n":4,"edges":[[0,1],[1,2,3],[0,3]]}"#);
        f.put("m.json", r#"{"field":2,"dim":2,"vectors":[[1,0],[0,1],[1,1],[1,0]]}"#);
        f.put("u23.json", r#"{"ground":3,"independent":[[],[0],[1],[2],[0,1],[0,2],[1,2]]}"#);
        f.put("homog.json", r#"{"members":[{"field":2,"dim":2,"vectors":[[1,0],[0,1],[1,1]]}],"partition":[[0],[1],[2]]}"#);
        f.put("dup.json", &library::duplicate_strings(2).to_json());
        f.put("id.json", &library::identity_interpretation(&"strings:2".parse().unwrap()).to_json());
        f.put("enc.json", &library::strings_4_to_2_encode().to_json());
        f.put("dec.json", &library::strings_4_to_2_decode().to_json());
        f.put("hom.json", r#"{"monoid":{"table":[[0,1],[1,0]],"unit":0},"letters":[0,1]}"#);
        f.put("laminar.json", &build::laminar(3, &[0b111, 0b011]).to_json());
        f
    }

    fn put(&self, name: &str, text: &str) {
        std::fs::write(self.dir.path().join(name), text).unwrap();
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

fn leaves(cmd: &clap::Command, prefix: &str, out: &mut Vec<String>) {
    let subs: Vec<_> = cmd.get_subcommands().filter(|s| s.get_name() != "help").collect();
    if subs.is_empty() {
        out.push(prefix.trim().to_string());
    }
    for s in subs {
        leaves(s, &format!("{prefix} {}", s.get_name()), out);
    }
}

#[test]
fn every_subcommand_has_exactly_one_operation() {
    let mut paths = Vec::new();
    leaves(&Cli::command(), "", &mut paths);
    let listed: Vec<&str> = OPERATIONS.iter().map(|(p, _)| *p).collect();
    assert_eq!(paths.iter().map(String::as_str).collect::<BTreeSet<_>>(), listed.iter().copied().collect());
    assert_eq!(listed.len(), paths.len());
    let ops: BTreeSet<&str> = OPERATIONS.iter().map(|(_, o)| *o).collect();
    assert_eq!(ops.len(), OPERATIONS.len(), "an operation is reachable from two subcommands");
    let expected = [
        "structures::validate",
        "structures::is_isomorphic",
        "structures::census",
        "structures::pair",
        "logic::evaluate_with",
        "transduction::apply_with",
        "transduction::compose",
        "transduction::check_encoding",
        "matroid::Matroid::rank",
        "matroid::circuits",
        "matroid::connected_components",
        "matroid::GeneralMatroid::dual",
        "matroid::GeneralMatroid::contract",
        "matroid::connectivity",
        "matroid::branchwidth",
        "matroid::is_homogeneous",
        "width::bipartition_rank",
        "width::sensitivity",
        "width::hyper_rankwidth",
        "width::compile_decomposition",
        "width::decode_decomposition",
        "encodings::catalog",
        "encodings::encode",
        "encodings::roundtrip_report",
        "algebra::eval_term",
        "algebra::term_from_branch_decomposition",
        "algebra::factorization_tree",
        "algebra::recognizability_probe",
    ];
    assert_eq!(ops, expected.into_iter().collect());
}

#[test]
fn every_subcommand_runs() {
    let f = Fixtures::new();
    let p = |n: &str| f.path(n);
    let mut seen = BTreeSet::new();
    let mut go = |path: &str, args: Vec<String>| -> Value {
        seen.insert(path.to_string());
        let mut all: Vec<String> = path.split(' ').map(String::from).collect();
        all.extend(args);
        let refs: Vec<&str> = all.iter().map(String::as_str).collect();
        ok(&refs)
    };
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();

    assert_eq!(go("struct validate", s(&[&p("ok.json")]))["size"], 3);
    assert_eq!(go("struct iso", s(&[&p("ok.json"), &p("ok2.json")]))["isomorphic"], false);
    assert_eq!(go("struct census", s(&["--class", "strings:2", "--n", "3"]))["count"], 2 + 4 + 8);
    assert_eq!(go("struct pair", s(&[&p("ok.json"), &p("graph.json")]))["universe"], 6);
    let v = go("logic eval", s(&[&p("graph.json"), "--formula", "(exists y (edge x y))", "--let", "x=1"]));
    assert_eq!(v["value"], true);

    let v = go("trans apply", s(&[&p("dup.json"), &p("ok.json")]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["results"][0]["origin"], serde_json::json!([0, 1, 2, 0, 1, 2]));
    std::fs::write(p("comp.json"), go("trans compose", s(&[&p("id.json"), &p("dup.json")])).to_string()).unwrap();
    assert_eq!(ok(&["trans", "apply", &p("comp.json"), &p("ok.json")])["count"], 1);
    let v = go("trans roundtrip", s(&["--enc", &p("enc.json"), "--dec", &p("dec.json"), "--max", "2"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["checked"], 4 + 16);

    assert_eq!(go("matroid rank", s(&[&p("m.json")]))["rank"], 2);
    assert_eq!(go("matroid circuits", s(&[&p("m.json")]))["circuits"], serde_json::json!([[0, 1, 2], [0, 3], [1, 2, 3]]));
    assert_eq!(go("matroid components", s(&[&p("m.json")]))["agree"], true);
    let dual = go("matroid dual", s(&[&p("u23.json")]));
    assert_eq!(dual["independent"], serde_json::json!([[], [0], [1], [2]]));
    let minor = go("matroid minor", s(&[&p("m.json"), "--contract", "0", "--delete", "3"]));
    assert_eq!(minor["elements"], serde_json::json!([1, 2]));
    assert_eq!(minor["matroid"]["independent"], serde_json::json!([[], [0], [1]]));
    let v = go("matroid connectivity", s(&[&p("m.json"), "--x1", "0,1"]));
    assert_eq!(v["connectivity"], 2);
    assert_eq!(v["bounds_hold"], true);
    assert!(go("matroid branchwidth", s(&[&p("m.json")]))["width"].as_u64().is_some());
    assert!(go("matroid homog", s(&[&p("homog.json")]))["result"].is_string());

    assert_eq!(go("width rank", s(&[&p("h.json"), "--u", "0,1"]))["rank"], 3);
    assert!(go("width sensitivity", s(&[&p("h.json"), "--u", "0,1"]))["sensitivity"].as_u64().unwrap() >= 2);
    assert_eq!(go("width hyperrankwidth", s(&[&p("g.json")]))["width"], 0);
    std::fs::write(p("compiled.json"), go("width compile", s(&[&p("h.json")])).to_string()).unwrap();
    let back = go("width decode", s(&[&p("compiled.json")]));
    assert_eq!(back["n"], 4);
    assert_eq!(back["edges"].as_array().unwrap().len(), 3);

    let list = go("enc list", vec![]);
    assert!(list.as_array().unwrap().iter().any(|e| e["id"] == "laminar"));
    let img = go("enc run", s(&["--id", "strings-4-to-2", "--in", &p("s4.json")]));
    std::fs::write(p("img.json"), img.to_string()).unwrap();
    assert_eq!(ok(&["enc", "run", "--id", "strings-4-to-2", "--decode", "--in", &p("img.json")])["universe"], 3);
    assert_eq!(go("enc roundtrip", s(&["--id", "laminar", "--in", &p("laminar.json")]))["passed"], true);

    let t = go("algebra compile-term", s(&[&p("m.json")]));
    std::fs::write(p("term.json"), t["term"].to_string()).unwrap();
    let e = go("algebra eval-term", s(&[&p("term.json")]));
    assert_eq!(e["field"], 2);
    let v = go("algebra factorize", s(&[&p("hom.json"), "--word", "1,1,0,1"]));
    assert_eq!(v["tree"]["label"], 1);
    let v = go("algebra probe", s(&[&p("dup.json"), "--sentence", "(exists-set X (and (forall x (in x X)) (divisible 2 X)))", "--max", "2"]));
    assert_eq!(v["accepted"], 2 + 4);

    let listed: BTreeSet<String> = OPERATIONS.iter().map(|(p, _)| p.to_string()).collect();
    assert_eq!(seen, listed);
}

#[test]
fn empty_edge_hypergraph_has_width_zero() {
    let f = Fixtures::new();
    assert_eq!(ok(&["width", "hyperrankwidth", &f.path("g.json")])["width"], 0);
    // the empty set as a hyperedge puts a 1 in every cut matrix
    f.put("empty-set.json", r#"{"n":4,"edges":[[]]}"#);
    assert_eq!(ok(&["width", "hyperrankwidth", &f.path("empty-set.json")])["width"], 1);
}

#[test]
fn laminar_roundtrip_passes() {
    let v = ok(&["enc", "roundtrip", "--id", "laminar", "--max", "5"]);
    assert_eq!(v["passed"], true);
    assert!(v["checked"].as_u64().unwrap() > 0);
}

#[test]
fn seeded_output_is_reproducible() {
    let f = Fixtures::new();
    let a = mso(&["algebra", "factorize", &f.path("hom.json"), "--random", "50", "--seed", "9"]);
    let b = mso(&["algebra", "factorize", &f.path("hom.json"), "--random", "50", "--seed", "9"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    // random words need a seed
    assert_eq!(mso(&["algebra", "factorize", &f.path("hom.json"), "--random", "50"]).code, 2);
}

#[test]
fn budgets_come_from_flags_and_environment() {
    let f = Fixtures::new();
    let args = ["mso", "logic", "eval", &f.path("graph.json"), "--formula", "(exists-set X (divisible 2 X))"];
    assert_eq!(run(args, None).code, 0);
    assert_eq!(run(args, Some("set_work=2")).code, 1);
    let mut flagged = args.to_vec();
    flagged.extend(["--set-work", "100"]);
    assert_eq!(run(flagged, Some("set_work=2")).code, 0);
    assert_eq!(run(args, Some("nonsense")).code, 2);
}

#[test]
fn pretty_output_parses_to_the_same_value() {
    let f = Fixtures::new();
    let plain = ok(&["matroid", "circuits", &f.path("m.json")]);
    let out = mso(&["matroid", "circuits", &f.path("m.json"), "--pretty"]);
    assert!(out.stdout.contains('\n') && out.stdout.lines().count() > 1);
    assert_eq!(serde_json::from_str::<Value>(&out.stdout).unwrap(), plain);
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_mso")).args(args).output().unwrap()
}

#[test]
fn exit_codes() {
    let f = Fixtures::new();
    assert_eq!(binary(&["struct", "validate", &f.path("ok.json")]).status.code(), Some(0));
    let bad = binary(&["struct", "validate", &f.path("bad.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("invalid structure"));
    assert_eq!(binary(&["struct", "frobnicate"]).status.code(), Some(2));
    assert_eq!(binary(&["matroid", "rank"]).status.code(), Some(2));
    let missing: PathBuf = Path::new(&f.path("nope.json")).to_path_buf();
    assert_eq!(binary(&["matroid", "rank", missing.to_str().unwrap()]).status.code(), Some(1));
    // over the census bound is a domain error, not a hang
    assert_eq!(binary(&["struct", "census", "--class", "trees", "--n", "40"]).status.code(), Some(1));
}
