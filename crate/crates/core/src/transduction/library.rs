//! Ready-made transductions.

use super::{copy_relation, Interpretation, RelationDef, Step, Transduction, UNIVERSE_VAR};
use crate::logic::{parse, Formula};
use crate::structures::{ClassId, Kind, Structure};

fn f(s: &str) -> Formula {
    parse(s).expect("library formulas parse")
}

fn universe_all() -> Formula {
    Formula::eq(UNIVERSE_VAR, UNIVERSE_VAR)
}

/// Interpretation copying every relation of `c` unchanged.
pub fn identity_interpretation(c: &ClassId) -> Transduction {
    let relations = c
        .vocabulary()
        .iter()
        .map(|(name, kinds)| {
            let vars: Vec<String> = kinds
                .iter()
                .enumerate()
                .map(|(i, k)| match k {
                    Kind::Element => format!("y{i}"),
                    Kind::Set => format!("Y{i}"),
                })
                .collect();
            RelationDef {
                name: name.to_string(),
                kinds: kinds.to_vec(),
                formula: Formula::Atom(name.to_string(), vars.clone()),
                vars,
            }
        })
        .collect();
    Transduction {
        input: c.clone(),
        output: c.clone(),
        steps: vec![Step::Interpretation(Interpretation { universe: universe_all(), relations })],
    }
}

fn rel(name: &str, kinds: &[Kind], vars: &[&str], formula: Formula) -> RelationDef {
    RelationDef {
        name: name.into(),
        kinds: kinds.to_vec(),
        vars: vars.iter().map(|v| v.to_string()).collect(),
        formula,
    }
}

const E: Kind = Kind::Element;

fn first(v: &str) -> String {
    format!("(exists w (_copy_2 {v} w))")
}

/// `w ↦ w·w` on strings over `k` letters.
pub fn duplicate_strings(k: usize) -> Transduction {
    debug_assert_eq!(copy_relation(2), "_copy_2");
    let mut relations: Vec<RelationDef> =
        (0..k).map(|i| rel(&format!("l{i}"), &[E], &["y"], Formula::atom(&format!("l{i}"), &["y"]))).collect();
    relations.push(rel(
        "lt",
        &[E, E],
        &["y", "z"],
        f(&format!("(or (and {} (not {})) (lt y z))", first("y"), first("z"))),
    ));
    Transduction {
        input: ClassId::Strings(k),
        output: ClassId::Strings(k),
        steps: vec![
            Step::Copy(2),
            Step::Interpretation(Interpretation { universe: universe_all(), relations }),
        ],
    }
}

/// Each letter of a 4-letter string becomes two binary letters, high bit first.
pub fn strings_4_to_2_encode() -> Transduction {
    let twin = |a: &str, b: &str| format!("(or (_copy_2 {a} {b}) (_copy_2 {b} {a}))");
    let hi = format!("(or (and {} (or (l2 y) (l3 y))) (and (not {}) (or (l1 y) (l3 y))))", first("y"), first("y"));
    let lt = format!(
        "(or (lt y z) (exists u (and {} (lt y u))) (and {} {}))",
        twin("z", "u"),
        twin("y", "z"),
        first("y")
    );
    let relations = vec![
        rel("l0", &[E], &["y"], Formula::not(f(&hi))),
        rel("l1", &[E], &["y"], f(&hi)),
        rel("lt", &[E, E], &["y", "z"], f(&lt)),
    ];
    Transduction {
        input: ClassId::Strings(4),
        output: ClassId::Strings(2),
        steps: vec![
            Step::Copy(2),
            Step::Interpretation(Interpretation { universe: universe_all(), relations }),
        ],
    }
}

/// Reads binary letters in pairs; a trailing unpaired letter counts as a high bit.
pub fn strings_4_to_2_decode() -> Transduction {
    let even = "(exists-set X (and (forall z (iff (in z X) (lt z x))) (divisible 2 X)))";
    let lo = "(exists z (and (lt y z) (not (exists u (and (lt y u) (lt u z)))) (l1 z)))";
    let hi = "(l1 y)";
    let letter = |h: bool, l: bool| {
        let h = if h { hi.to_string() } else { format!("(not {hi})") };
        let l = if l { lo.to_string() } else { format!("(not {lo})") };
        f(&format!("(and {h} {l})"))
    };
    let relations = vec![
        rel("l0", &[E], &["y"], letter(false, false)),
        rel("l1", &[E], &["y"], letter(false, true)),
        rel("l2", &[E], &["y"], letter(true, false)),
        rel("l3", &[E], &["y"], letter(true, true)),
        rel("lt", &[E, E], &["y", "z"], Formula::atom("lt", &["y", "z"])),
    ];
    Transduction {
        input: ClassId::Strings(2),
        output: ClassId::Strings(4),
        steps: vec![Step::Interpretation(Interpretation { universe: f(even), relations })],
    }
}

/// Forgets the labels of a labelled tree.
pub fn unlabel_trees(k: usize) -> Transduction {
    Transduction {
        input: ClassId::LabelledTrees(k),
        output: ClassId::Trees,
        steps: vec![Step::Interpretation(Interpretation {
            universe: universe_all(),
            relations: vec![rel("parent", &[E, E], &["y", "z"], Formula::atom("parent", &["y", "z"]))],
        })],
    }
}

/// Elements of a string structure listed along its order.
pub fn positions_in_order(a: &Structure) -> Vec<usize> {
    let mut before = vec![0usize; a.size()];
    for (_, y) in a.pairs("lt") {
        before[y] += 1;
    }
    let mut pos: Vec<usize> = (0..a.size()).collect();
    pos.sort_by_key(|&x| before[x]);
    pos
}
