//! The `mso` command line: argument parsing, file loading and JSON reports.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mso_core::algebra::{self, BranchTerm, FiniteMonoid, Homomorphism, Language};
use mso_core::encodings;
use mso_core::logic::{self, Value};
use mso_core::matroid::{self, AnyMatroid, BranchDecomposition, Matroid, MatroidFile, MultiMatroid, OrderedPartition};
use mso_core::structures::{self, ClassId, RawStructure, Structure};
use mso_core::subsets::{self, Mask};
use mso_core::transduction::{self, check_encoding, Dedup, Transduction};
use mso_core::width::{self, CompiledDecomposition, Hypergraph};
use mso_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

/// Subcommand path and the library operation it runs.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("struct validate", "structures::validate"),
    ("struct iso", "structures::is_isomorphic"),
    ("struct census", "structures::census"),
    ("struct pair", "structures::pair"),
    ("logic eval", "logic::evaluate_with"),
    ("trans apply", "transduction::apply_with"),
    ("trans compose", "transduction::compose"),
    ("trans roundtrip", "transduction::check_encoding"),
    ("matroid rank", "matroid::Matroid::rank"),
    ("matroid circuits", "matroid::circuits"),
    ("matroid components", "matroid::connected_components"),
    ("matroid dual", "matroid::GeneralMatroid::dual"),
    ("matroid minor", "matroid::GeneralMatroid::contract"),
    ("matroid connectivity", "matroid::connectivity"),
    ("matroid branchwidth", "matroid::branchwidth"),
    ("matroid homog", "matroid::is_homogeneous"),
    ("width rank", "width::bipartition_rank"),
    ("width sensitivity", "width::sensitivity"),
    ("width hyperrankwidth", "width::hyper_rankwidth"),
    ("width compile", "width::compile_decomposition"),
    ("width decode", "width::decode_decomposition"),
    ("enc list", "encodings::catalog"),
    ("enc run", "encodings::encode"),
    ("enc roundtrip", "encodings::roundtrip_report"),
    ("algebra eval-term", "algebra::eval_term"),
    ("algebra compile-term", "algebra::term_from_branch_decomposition"),
    ("algebra factorize", "algebra::factorization_tree"),
    ("algebra probe", "algebra::recognizability_probe"),
];

#[derive(Parser, Debug)]
#[command(name = "mso", version, about = "Counting MSO, transductions, matroids and width measures on small structures")]
pub struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Budget overrides. `MSO_BUDGET` takes `key=value` pairs separated by commas
/// (keys `set_work`, `colourings`, `tuples`); flags win over the variable.
#[derive(Args, Debug, Default)]
pub struct BudgetArgs {
    /// Set-quantifier work limit: nested set quantifiers times universe size [default: 24].
    #[arg(long, global = true)]
    pub set_work: Option<usize>,
    /// Largest number of colourings a colour step may produce [default: 16384].
    #[arg(long, global = true)]
    pub colourings: Option<usize>,
    /// Largest number of candidate tuples per interpreted relation [default: 1048576].
    #[arg(long, global = true)]
    pub tuples: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structures: validation, isomorphism, census, pairing.
    #[command(name = "struct", subcommand)]
    Struct(StructCmd),
    /// Formula evaluation.
    #[command(subcommand)]
    Logic(LogicCmd),
    /// Transductions.
    #[command(subcommand)]
    Trans(TransCmd),
    /// Matroids.
    #[command(subcommand)]
    Matroid(MatroidCmd),
    /// Hypergraph width measures and compiled decompositions.
    #[command(subcommand)]
    Width(WidthCmd),
    /// The encoding catalog.
    #[command(subcommand)]
    Enc(EncCmd),
    /// Branch terms and factorization forests.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
}

#[derive(Subcommand, Debug)]
pub enum StructCmd {
    /// Check a structure file against the structure invariants.
    Validate { file: PathBuf },
    /// Decide isomorphism and print a witness.
    Iso { a: PathBuf, b: PathBuf },
    /// Number of non-isomorphic members of a class with 1..=n elements.
    Census {
        #[arg(long)]
        class: ClassId,
        #[arg(long)]
        n: usize,
    },
    /// Disjoint union of two structures with `left`/`right` markers.
    Pair { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum LogicCmd {
    /// Evaluate a formula on a structure.
    Eval {
        structure: PathBuf,
        /// Formula as an s-expression.
        #[arg(long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
        /// Free variable values: `x=3` for elements, `X={0,2}` for sets.
        #[arg(long = "let", value_name = "NAME=VALUE")]
        bindings: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DedupArg {
    None,
    Origins,
    Iso,
}

#[derive(Subcommand, Debug)]
pub enum TransCmd {
    /// Run a transduction on a structure.
    Apply {
        transduction: PathBuf,
        structure: PathBuf,
        #[arg(long, value_enum, default_value = "origins")]
        dedup: DedupArg,
    },
    /// Sequential composition: first, then second.
    Compose { first: PathBuf, second: PathBuf },
    /// Check decode after encode against the identity.
    Roundtrip {
        #[arg(long)]
        enc: PathBuf,
        #[arg(long)]
        dec: PathBuf,
        /// Exhaustive corpus of the encoder's input class, sizes 1..=max.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        max: Option<usize>,
        /// Corpus file: one structure or an array of structures.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum MatroidCmd {
    /// Rank of a set (default: the ground set).
    Rank {
        matroid: PathBuf,
        #[arg(long)]
        set: Option<String>,
    },
    /// All circuits.
    Circuits { matroid: PathBuf },
    /// Connected components, with the separation-based components as a cross-check.
    Components { matroid: PathBuf },
    /// The dual, as an independence family.
    Dual { matroid: PathBuf },
    /// Contract one set and delete another; survivors keep their relative order.
    Minor {
        matroid: PathBuf,
        #[arg(long, default_value = "")]
        delete: String,
        #[arg(long, default_value = "")]
        contract: String,
        /// Contract from a maximal independent subset instead of through the dual.
        #[arg(long)]
        by_extension: bool,
    },
    /// Connectivity of a set, together with its sensitivity.
    Connectivity {
        matroid: PathBuf,
        #[arg(long)]
        x1: String,
    },
    /// Branchwidth and an optimal decomposition.
    Branchwidth {
        matroid: PathBuf,
        /// Print the decomposition as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Homogeneity of an ordered partition for a multi-matroid.
    Homog {
        /// JSON `{"members": [matroid, ...], "partition": [[...], ...]}`.
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum WidthCmd {
    /// Rank over GF(2) of the cut matrix of a bipartition.
    Rank {
        hypergraph: PathBuf,
        #[arg(long)]
        u: String,
    },
    /// Number of distinct behaviours of subsets of one side.
    Sensitivity {
        hypergraph: PathBuf,
        #[arg(long)]
        u: String,
    },
    /// Hyper-rankwidth and an optimal decomposition.
    Hyperrankwidth {
        hypergraph: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Label a decomposition with colour pairs and tables.
    Compile {
        hypergraph: PathBuf,
        /// Decomposition file (default: an optimal one).
        #[arg(long)]
        decomposition: Option<PathBuf>,
        /// Tree edge to root at.
        #[arg(long)]
        root: Option<usize>,
        /// Colour bits.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Recover the hypergraph from a compiled decomposition.
    Decode { compiled: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum EncCmd {
    /// Catalog entries.
    List,
    /// Encode (or decode) one structure.
    Run {
        #[arg(long)]
        id: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "seed")]
        decode: bool,
        /// Pick a random image of a nondeterministic encoder.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Round-trip report on the default or a given corpus.
    Roundtrip {
        #[arg(long)]
        id: String,
        /// Largest input size of the exhaustive corpus.
        #[arg(long, conflicts_with = "input")]
        max: Option<usize>,
        /// Corpus file: one structure or an array of structures.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Evaluate a branch term to a ported matroid.
    EvalTerm { term: PathBuf },
    /// Turn a branch decomposition of a represented matroid into a term.
    CompileTerm {
        matroid: PathBuf,
        /// Decomposition file (default: an optimal one).
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Factorization forest of a word under a homomorphism into a finite monoid.
    Factorize {
        /// Homomorphism `{"monoid": ..., "letters": [...]}` or a bare monoid `{"table": ..., "unit": ...}`.
        monoid: PathBuf,
        /// Comma-separated letters.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        word: Option<String>,
        /// Length of a random word.
        #[arg(long, requires = "seed")]
        random: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate a sentence on all outputs of a transduction over small inputs.
    Probe {
        transduction: PathBuf,
        #[arg(long, conflicts_with = "sentence_file", required_unless_present = "sentence_file")]
        sentence: Option<String>,
        #[arg(long)]
        sentence_file: Option<PathBuf>,
        #[arg(long)]
        max: usize,
    },
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Errors that end a command.
enum Fail {
    Usage(String),
    Domain(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Domain(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn domain<T>(msg: impl Into<String>) -> Res<T> {
    Err(Fail::Domain(msg.into()))
}

enum Output {
    Json(Json),
    Text(String),
}

/// Parses `argv` (program name first) and runs the command. `env_budget` is the
/// value of `MSO_BUDGET`, if set.
pub fn run<I, T>(argv: I, env_budget: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = budgets(&cli.budget, env_budget).and_then(|b| dispatch(&cli.command, b));
    match result {
        Ok(Output::Json(v)) => {
            let mut s = if cli.pretty {
                serde_json::to_string_pretty(&v).expect("json values serialize")
            } else {
                serde_json::to_string(&v).expect("json values serialize")
            };
            s.push('\n');
            Outcome { code: 0, stdout: s, stderr: String::new() }
        }
        Ok(Output::Text(mut s)) => {
            if !s.ends_with('\n') {
                s.push('\n');
            }
            Outcome { code: 0, stdout: s, stderr: String::new() }
        }
        Err(Fail::Usage(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Fail::Domain(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn budgets(args: &BudgetArgs, env: Option<&str>) -> Res<transduction::Budget> {
    let mut b = transduction::Budget::default();
    if let Some(env) = env {
        for part in env.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let Some((k, v)) = part.split_once('=') else {
                return Err(Fail::Usage(format!("MSO_BUDGET entry `{part}` is not key=value")));
            };
            let v: usize =
                v.trim().parse().map_err(|_| Fail::Usage(format!("MSO_BUDGET value `{v}` is not a number")))?;
            match k.trim() {
                "set_work" => b.logic.set_work = v,
                "colourings" => b.colourings = v,
                "tuples" => b.tuples = v,
                other => return Err(Fail::Usage(format!("unknown MSO_BUDGET key `{other}`"))),
            }
        }
    }
    if let Some(v) = args.set_work {
        b.logic.set_work = v;
    }
    if let Some(v) = args.colourings {
        b.colourings = v;
    }
    if let Some(v) = args.tuples {
        b.tuples = v;
    }
    Ok(b)
}

fn dispatch(cmd: &Command, budget: transduction::Budget) -> Res<Output> {
    match cmd {
        Command::Struct(c) => structs(c),
        Command::Logic(c) => logic_cmd(c, budget),
        Command::Trans(c) => trans(c, budget),
        Command::Matroid(c) => matroids(c),
        Command::Width(c) => widths(c),
        Command::Enc(c) => enc(c),
        Command::Algebra(c) => algebra_cmd(c),
    }
}

fn read(path: &Path) -> Res<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Fail::Domain(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Fail::Domain(format!("reading {}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Res<Structure> {
    Ok(Structure::from_json(&read(path)?)?)
}

/// One structure or a JSON array of structures.
fn load_corpus(path: &Path) -> Res<Vec<Structure>> {
    let text = read(path)?;
    let v: Json = serde_json::from_str(&text).map_err(|e| Fail::Domain(format!("parse error: {e}")))?;
    match v {
        Json::Array(items) => items.iter().map(|x| Ok(Structure::from_json(&x.to_string())?)).collect(),
        _ => Ok(vec![Structure::from_json(&text)?]),
    }
}

fn load_matroid(path: &Path) -> Res<AnyMatroid> {
    Ok(AnyMatroid::from_json(&read(path)?)?)
}

fn load_hypergraph(path: &Path) -> Res<Hypergraph> {
    Ok(Hypergraph::from_json(&read(path)?)?)
}

fn load_transduction(path: &Path) -> Res<Transduction> {
    Ok(Transduction::from_json(&read(path)?)?)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Res<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Fail::Domain(format!("parse error in {}: {e}", path.display())))
}

fn raw(text: &str) -> Json {
    serde_json::from_str(text).expect("library JSON is valid")
}

fn list(s: &str) -> Res<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Fail::Usage(format!("`{p}` is not a natural number"))))
        .collect()
}

/// Subset of `0..n` from a comma-separated list.
fn mask(s: &str, n: usize) -> Res<Mask> {
    let xs = list(s)?;
    if let Some(&x) = xs.iter().find(|&&x| x >= n) {
        return domain(format!("element {x} is outside 0..{n}"));
    }
    Ok(subsets::from_elems(xs))
}

fn structs(c: &StructCmd) -> Res<Output> {
    Ok(Output::Json(match c {
        StructCmd::Validate { file } => {
            let r = RawStructure::parse(&read(file)?)?;
            if let Some(v) = r.violation() {
                return domain(format!("invalid structure: {v}"));
            }
            let a = r.into_structure()?;
            structures::validate(&a).map_err(|v| Fail::Domain(format!("invalid structure: {v}")))?;
            json!({"valid": true, "size": a.size(), "relations": a.relations().map(|(r, _)| r).collect::<Vec<_>>()})
        }
        StructCmd::Iso { a, b } => {
            let w = structures::is_isomorphic(&load_structure(a)?, &load_structure(b)?)?;
            json!({"isomorphic": w.is_some(), "map": w.map(|w| w.map)})
        }
        StructCmd::Census { class, n } => {
            json!({"class": class.to_string(), "n": n, "count": structures::census(class, *n)?})
        }
        StructCmd::Pair { a, b } => structures::pair(&load_structure(a)?, &load_structure(b)?).to_json_value(),
    }))
}

fn binding(s: &str, n: usize) -> Res<(String, Value)> {
    let Some((name, v)) = s.split_once('=') else {
        return Err(Fail::Usage(format!("binding `{s}` is not NAME=VALUE")));
    };
    let v = v.trim();
    let value = match v.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
        Some(inner) => Value::Set(mask(inner, n)?),
        None => {
            let x: usize = v.parse().map_err(|_| Fail::Usage(format!("`{v}` is neither an element nor {{set}}")))?;
            if x >= n {
                return domain(format!("element {x} is outside 0..{n}"));
            }
            Value::Elem(x)
        }
    };
    Ok((name.trim().to_string(), value))
}

fn formula_text(inline: &Option<String>, file: &Option<PathBuf>) -> Res<String> {
    match (inline, file) {
        (Some(f), _) => Ok(f.clone()),
        (None, Some(p)) => read(p),
        (None, None) => Err(Fail::Usage("a formula is required".into())),
    }
}

fn logic_cmd(c: &LogicCmd, budget: transduction::Budget) -> Res<Output> {
    let LogicCmd::Eval { structure, formula, formula_file, bindings } = c;
    let f = logic::parse(&formula_text(formula, formula_file)?)?;
    let a = load_structure(structure)?;
    let v = bindings.iter().map(|b| binding(b, a.size())).collect::<Res<BTreeMap<_, _>>>()?;
    let value = logic::evaluate_with(&f, &a, &v, budget.logic)?;
    Ok(Output::Json(json!({"value": value})))
}

fn trans(c: &TransCmd, budget: transduction::Budget) -> Res<Output> {
    Ok(Output::Json(match c {
        TransCmd::Apply { transduction: t, structure, dedup } => {
            let t = load_transduction(t)?;
            let a = load_structure(structure)?;
            let dedup = match dedup {
                DedupArg::None => Dedup::None,
                DedupArg::Origins => Dedup::WithOrigins,
                DedupArg::Iso => Dedup::IsoOnly,
            };
            let out = transduction::apply_with(&t, &a, dedup, budget)?;
            let results: Vec<Json> =
                out.iter().map(|o| json!({"output": o.output.to_json_value(), "origin": o.origin})).collect();
            json!({"count": results.len(), "results": results})
        }
        TransCmd::Compose { first, second } => {
            raw(&transduction::compose(&load_transduction(first)?, &load_transduction(second)?)?.to_json())
        }
        TransCmd::Roundtrip { enc, dec, max, input } => {
            let e = load_transduction(enc)?;
            let d = load_transduction(dec)?;
            let corpus = match (max, input) {
                (_, Some(p)) => load_corpus(p)?,
                (Some(n), None) => {
                    let mut all = Vec::new();
                    for m in 1..=*n {
                        all.extend(structures::enumerate_class(&e.input, m)?);
                    }
                    all
                }
                (None, None) => return Err(Fail::Usage("give --max or --in".into())),
            };
            let r = check_encoding(&e, &d, &corpus);
            json!({"checked": r.checked, "failures": r.failures, "passed": r.passed()})
        }
    }))
}

fn matroids(c: &MatroidCmd) -> Res<Output> {
    Ok(Output::Json(match c {
        MatroidCmd::Rank { matroid, set } => {
            let m = load_matroid(matroid)?;
            let x = match set {
                Some(s) => mask(s, m.len())?,
                None => m.ground(),
            };
            json!({"set": subsets::elems(x), "rank": m.rank(x)})
        }
        MatroidCmd::Circuits { matroid } => {
            let m = load_matroid(matroid)?;
            let cs: Vec<Vec<usize>> = matroid::circuits(&m)?.into_iter().map(subsets::elems).collect();
            json!({"circuits": cs})
        }
        MatroidCmd::Components { matroid } => {
            let m = load_matroid(matroid)?;
            let a: Vec<Vec<usize>> = matroid::connected_components(&m)?.into_iter().map(subsets::elems).collect();
            let b: Vec<Vec<usize>> = matroid::separation_components(&m)?.into_iter().map(subsets::elems).collect();
            json!({"agree": a == b, "components": a, "separation_components": b})
        }
        MatroidCmd::Dual { matroid } => {
            let g = load_matroid(matroid)?.to_general()?;
            serde_json::to_value(MatroidFile::from_general(&g.dual())).expect("matroid files serialize")
        }
        MatroidCmd::Minor { matroid, delete, contract, by_extension } => {
            let g = load_matroid(matroid)?.to_general()?;
            let n = g.len();
            let d = mask(delete, n)?;
            let k = mask(contract, n)?;
            if d & k != 0 {
                return domain("deleted and contracted sets overlap");
            }
            let g = if *by_extension { g.contract_by_extension(k)? } else { g.contract(k)? };
            let survivors: Vec<usize> = (0..n).filter(|&e| k >> e & 1 == 0).collect();
            let local = subsets::from_elems(survivors.iter().enumerate().filter(|(_, &e)| d >> e & 1 == 1).map(|(i, _)| i));
            let g = g.delete(local)?;
            let elements: Vec<usize> = survivors.into_iter().filter(|&e| d >> e & 1 == 0).collect();
            json!({"elements": elements, "matroid": MatroidFile::from_general(&g)})
        }
        MatroidCmd::Connectivity { matroid, x1 } => {
            let m = load_matroid(matroid)?;
            let x = mask(x1, m.len())?;
            let conn = matroid::connectivity(&m, x)?;
            let sens = width::matroid_sensitivity(&m, x)?;
            let mut out = json!({"set": subsets::elems(x), "connectivity": conn, "sensitivity": sens});
            if let AnyMatroid::Represented(r) = &m {
                let bound = (r.order() as u128).checked_pow(conn as u32).map(|p| p + 1);
                out["upper_bound"] = json!(bound);
                out["bounds_hold"] = json!(conn <= sens && bound.is_none_or(|b| sens as u128 <= b));
            }
            out
        }
        MatroidCmd::Branchwidth { matroid, dot } => {
            let (w, t) = matroid::branchwidth(&load_matroid(matroid)?)?;
            if *dot {
                return Ok(Output::Text(t.to_dot()));
            }
            json!({"width": w, "decomposition": t})
        }
        MatroidCmd::Homog { file } => {
            #[derive(serde::Deserialize)]
            #[serde(deny_unknown_fields)]
            struct HomogFile {
                members: Vec<MatroidFile>,
                partition: OrderedPartition,
            }
            let f: HomogFile = load_json(file)?;
            let members = f.members.into_iter().map(MatroidFile::into_matroid).collect::<Result<Vec<_>, _>>()?;
            let mm = MultiMatroid::new(members)?;
            if f.partition.len() != mm.len() {
                return domain("partition and matroids have different ground sets");
            }
            serde_json::to_value(matroid::is_homogeneous(&mm, &f.partition)?).expect("reports serialize")
        }
    }))
}

fn widths(c: &WidthCmd) -> Res<Output> {
    Ok(Output::Json(match c {
        WidthCmd::Rank { hypergraph, u } => {
            let g = load_hypergraph(hypergraph)?;
            let u = mask(u, g.len())?;
            json!({"u": subsets::elems(u), "rank": width::bipartition_rank(&g, u)?})
        }
        WidthCmd::Sensitivity { hypergraph, u } => {
            let g = load_hypergraph(hypergraph)?;
            let u = mask(u, g.len())?;
            json!({"u": subsets::elems(u), "sensitivity": width::sensitivity(&g, u)?})
        }
        WidthCmd::Hyperrankwidth { hypergraph, dot } => {
            let (w, t) = width::hyper_rankwidth(&load_hypergraph(hypergraph)?)?;
            if *dot {
                return Ok(Output::Text(t.to_dot()));
            }
            json!({"width": w, "decomposition": t})
        }
        WidthCmd::Compile { hypergraph, decomposition, root, k } => {
            let g = load_hypergraph(hypergraph)?;
            let t = match decomposition {
                Some(p) => load_json::<BranchDecomposition>(p)?,
                None => width::hyper_rankwidth(&g)?.1,
            };
            let (s, origin) = width::compile_decomposition(&g, &t, *root, *k)?;
            json!({"compiled": raw(&s.to_json()), "origin": origin})
        }
        WidthCmd::Decode { compiled } => {
            let text = read(compiled)?;
            // accept the bare decomposition or the output of `width compile`
            let s = match serde_json::from_str::<Json>(&text) {
                Ok(Json::Object(o)) if o.contains_key("compiled") => {
                    CompiledDecomposition::from_json(&o["compiled"].to_string())?
                }
                _ => CompiledDecomposition::from_json(&text)?,
            };
            raw(&width::decode_decomposition(&s)?.to_json())
        }
    }))
}

fn corpus_or_default(entry: &encodings::CatalogEntry, max: Option<usize>, input: &Option<PathBuf>) -> Res<Vec<Structure>> {
    match input {
        Some(p) => load_corpus(p),
        None => Ok(entry.default_corpus(max)?),
    }
}

fn enc(c: &EncCmd) -> Res<Output> {
    Ok(Output::Json(match c {
        EncCmd::List => Json::Array(
            encodings::catalog()
                .iter()
                .map(|e| {
                    json!({
                        "id": e.id,
                        "input": e.input.to_string(),
                        "output": e.output.to_string(),
                        "summary": e.summary,
                        "corpus_max": e.corpus_max(),
                    })
                })
                .collect(),
        ),
        EncCmd::Run { id, input, decode, seed } => {
            let a = load_structure(input)?;
            let out = match (decode, seed) {
                (true, _) => encodings::decode(id, &a)?,
                (false, Some(s)) => encodings::encode_random(id, &a, &mut ChaCha8Rng::seed_from_u64(*s))?,
                (false, None) => encodings::encode(id, &a)?,
            };
            out.to_json_value()
        }
        EncCmd::Roundtrip { id, max, input } => {
            let e = encodings::entry(id)?;
            let corpus = corpus_or_default(e, *max, input)?;
            let r = encodings::roundtrip_report(id, &corpus)?;
            json!({"id": id, "checked": r.checked, "failures": r.failures, "passed": r.passed()})
        }
    }))
}

fn algebra_cmd(c: &AlgebraCmd) -> Res<Output> {
    Ok(Output::Json(match c {
        AlgebraCmd::EvalTerm { term } => {
            let t = BranchTerm::from_json(&read(term)?)?;
            raw(&algebra::eval_term(&t)?.to_json())
        }
        AlgebraCmd::CompileTerm { matroid, decomposition } => {
            let AnyMatroid::Represented(m) = load_matroid(matroid)? else {
                return domain("terms need a represented matroid");
            };
            let t = match decomposition {
                Some(p) => load_json::<BranchDecomposition>(p)?,
                None => matroid::branchwidth(&m)?.1,
            };
            let term = algebra::term_from_branch_decomposition(&m, &t)?;
            let width = t.width(|x| matroid::connectivity(&m, x).expect("proper cut"));
            json!({"term": raw(&term.to_json()), "size": term.size(), "max_sort": term.max_sort()?, "width": width})
        }
        AlgebraCmd::Factorize { monoid, word, random, seed } => {
            let text = read(monoid)?;
            let h = match serde_json::from_str::<Homomorphism>(&text) {
                Ok(h) => h,
                Err(_) => Homomorphism::identity(FiniteMonoid::from_json(&text)?),
            };
            let letters = h.letters().len();
            let w = match (word, random, seed) {
                (Some(w), _, _) => list(w)?,
                (None, Some(len), Some(s)) => {
                    if letters == 0 {
                        return domain("no letters to draw from");
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(*s);
                    (0..*len).map(|_| rng.gen_range(0..letters)).collect()
                }
                _ => return Err(Fail::Usage("give --word, or --random with --seed".into())),
            };
            let tree = algebra::factorization_tree(&h, &w)?;
            json!({"word": w, "height": tree.height(), "tree": tree})
        }
        AlgebraCmd::Probe { transduction: t, sentence, sentence_file, max } => {
            let t = load_transduction(t)?;
            let f = logic::parse(&formula_text(sentence, sentence_file)?)?;
            if !f.is_closed() {
                return domain("the probe needs a sentence");
            }
            serde_json::to_value(algebra::recognizability_probe(&t, &Language::Sentence(f), *max)?)
                .expect("reports serialize")
        }
    }))
}
