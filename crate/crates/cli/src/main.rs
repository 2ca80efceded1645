//! Command-line front end: loads programs, algorithms, labellings, theories,
//! and manifests from JSON/s-expression files (or the built-in corpus by
//! name), delegates to the library, and prints plain-text reports with stable
//! layouts.  `--json` switches every report to machine-readable output.
//!
//! Exit codes: 0 success (for `run`: terminated; for predicate commands: the
//! answer is yes), 1 usage or input errors, 2 a negative verdict (stuck run,
//! failed check, no witness), 3 out of budget.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::json;

use algoglue::algorithm::{SemanticAlgorithm, SyntacticAlgorithm};
use algoglue::corpus::{
    census_library_program, euclidean_binding, euclidean_gcd_logical, euclidean_theory, gcd_env,
    gcd_component_programs, gcd_mod_algorithm, gcd_mod_free, gcd_sub_algorithm, merge_component,
    mergesort_algorithm, mergesort_outer, mergesort_sequential, run_gcd, run_sort,
};
use algoglue::data::{
    booleans, gf2_polys, induced_model, lists_of_naturals, naturals, AbstractDataStructure,
    AnchoredOperation, StructuralMap,
};
use algoglue::glueing::{
    bottom_operation, check_implements, glue, glue_syntactic, unfold_semantic, unfold_syntactic,
};
use algoglue::interp::{
    delta_bool, delta_nat_binary, delta_nat_unary, tm_bool_programs, tm_succ_unary,
    verify_implementation, verify_named, Interpretation,
};
use algoglue::logic::{
    check_model, instantiate, parse_theory, LogicalAlgorithm, SymbolAnchor, SymbolBinding, Theory,
};
use algoglue::model::{tm_model, Config, ModelOfComputation};
use algoglue::program::{program_dot, run, Edge, Outcome, Program, Trace};
use algoglue::recfun::{eval, parse_term, Eval};
use algoglue::succinct::{census, find_succinct, is_f_succinct, parse_size_function};

type Fallible<T> = Result<T, Box<dyn std::error::Error>>;

fn fail<T>(msg: impl Into<String>) -> Fallible<T> {
    Err(msg.into().into())
}

#[derive(Parser)]
#[command(
    name = "algoglue",
    version,
    about = "Run, glue, verify, and measure labelled control-graph programs and algorithms"
)]
struct Cli {
    /// Seed for all sampled checks (reports are reproducible byte-for-byte)
    #[arg(long, global = true, default_value_t = 0xA1)]
    seed: u64,
    /// Step budget per run or search
    #[arg(long, global = true, default_value_t = 100_000)]
    budget: usize,
    /// Sample count for model checks; input bound for verify-impl
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
    /// Emit machine-readable JSON reports instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program on an input literal (tape like "1^01", environment like "{x: 12, y: 8}")
    Run {
        /// Program file or built-in name (e.g. tm_not)
        #[arg(long)]
        program: String,
        /// Assert the program targets this model (informational; the model
        /// is always reconstructed from the program's own `model` field)
        #[arg(long)]
        model: Option<String>,
        /// Input configuration literal, parsed by the model's space
        #[arg(long)]
        input: String,
        /// Also write a DOT rendering of the visited subgraph
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run a canned end-to-end pipeline and print its report
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
    /// Glue components along an algorithm; emits a program or an algorithm
    Glue {
        /// Outer algorithm: file or built-in name
        #[arg(long)]
        algorithm: String,
        /// Labelling file mapping each label to a component file
        #[arg(long)]
        labelling: PathBuf,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a program implements an algorithm along a labelling
    CheckImplements {
        #[arg(long)]
        program: String,
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        labelling: PathBuf,
    },
    /// Verify an implementation manifest: one program per structural map
    VerifyImpl {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Check a theory against a structure on seeded samples
    CheckModel {
        /// Theory file (s-expressions) or built-in name (euclidean)
        #[arg(long)]
        theory: String,
        /// Structure name: booleans, naturals, lists_of_naturals, gf2_polys
        #[arg(long)]
        structure: String,
        /// Symbol-to-map binding JSON; defaults to the built-in binding of
        /// the euclidean theory
        #[arg(long)]
        binding: Option<PathBuf>,
    },
    /// Turn a logically-specified algorithm into a semantic one over a
    /// structure that models its theory
    Instantiate {
        /// Logical algorithm: file or built-in name (euclidean_gcd)
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        structure: String,
        #[arg(long)]
        binding: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unfold a recursive label to finite depth (bottoming out in `bottom`)
    Unfold {
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        label: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a program or algorithm as DOT
    Dot {
        #[arg(long, conflicts_with = "algorithm")]
        program: Option<String>,
        #[arg(long)]
        algorithm: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check one concrete (program, algorithm, labelling, f) succinctness claim
    SuccinctCheck {
        #[arg(long)]
        program: String,
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        labelling: PathBuf,
        /// Size function: n/k, n-c, sqrt, or log2
        #[arg(long)]
        f: String,
    },
    /// Search for an f-succinct algorithm by tiling the program with library copies
    SuccinctFind {
        #[arg(long)]
        program: String,
        /// Labelling-format file naming the component library
        #[arg(long)]
        library: PathBuf,
        #[arg(long)]
        f: String,
        /// Write the witness algorithm here when one is found
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate tape programs up to size n and report the f-succinct fraction
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: String,
        /// Instruction subset to enumerate over
        #[arg(long, value_delimiter = ',', default_value = "right,write_1")]
        instructions: Vec<String>,
        /// Component library (labelling-format file); defaults to the
        /// built-in hop_mark_hop program
        #[arg(long)]
        library: Option<PathBuf>,
        /// CSV output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a recursive-function term, e.g. (comp succ (proj 1 2)) on 3,4
    Eval {
        /// Term file or s-expression literal
        #[arg(long)]
        term: String,
        /// Comma-separated natural-number arguments
        #[arg(long, default_value = "")]
        args: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Booleans,
    Gcd,
    Mergesort,
    Census,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let shows_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if shows_help { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Fallible<u8> {
    match &cli.command {
        Command::Run { program, model, input, dot } => {
            cmd_run(cli, program, model.as_deref(), input, dot.as_deref())
        }
        Command::Demo { name } => cmd_demo(cli, *name),
        Command::Glue { algorithm, labelling, out } => {
            cmd_glue(algorithm, labelling, out.as_deref())
        }
        Command::CheckImplements { program, algorithm, labelling } => {
            cmd_check_implements(cli, program, algorithm, labelling)
        }
        Command::VerifyImpl { manifest } => cmd_verify_impl(cli, manifest),
        Command::CheckModel { theory, structure, binding } => {
            cmd_check_model(cli, theory, structure, binding.as_deref())
        }
        Command::Instantiate { algorithm, structure, binding, out } => {
            cmd_instantiate(cli, algorithm, structure, binding.as_deref(), out.as_deref())
        }
        Command::Unfold { algorithm, label, depth, out } => {
            cmd_unfold(algorithm, label, *depth, out.as_deref())
        }
        Command::Dot { program, algorithm, out } => {
            cmd_dot(program.as_deref(), algorithm.as_deref(), out.as_deref())
        }
        Command::SuccinctCheck { program, algorithm, labelling, f } => {
            cmd_succinct_check(cli, program, algorithm, labelling, f)
        }
        Command::SuccinctFind { program, library, f, out } => {
            cmd_succinct_find(cli, program, library, f, out.as_deref())
        }
        Command::Census { n, f, instructions, library, out } => {
            cmd_census(cli, *n, f, instructions, library.as_deref(), out.as_deref())
        }
        Command::Eval { term, args } => cmd_eval(cli, term, args),
    }
}

// ---------------------------------------------------------------------------
// Built-in registries
// ---------------------------------------------------------------------------

fn builtin_programs() -> Fallible<IndexMap<String, Program>> {
    let mut out = IndexMap::new();
    for (name, program) in tm_bool_programs() {
        out.insert(format!("tm_{name}"), program);
    }
    out.insert("tm_succ_unary".into(), tm_succ_unary());
    out.insert("hop_mark_hop".into(), census_library_program());
    for (label, program) in gcd_component_programs()?.1 {
        out.insert(format!("gcd_{label}"), program);
    }
    Ok(out)
}

enum AnyAlgorithm {
    Syntactic(SyntacticAlgorithm),
    Semantic(SemanticAlgorithm),
    Logical(LogicalAlgorithm),
}

impl AnyAlgorithm {
    fn syntax(&self) -> &SyntacticAlgorithm {
        match self {
            AnyAlgorithm::Syntactic(s) => s,
            AnyAlgorithm::Semantic(s) => &s.syntax,
            AnyAlgorithm::Logical(l) => &l.syntax,
        }
    }
}

const BUILTIN_ALGORITHMS: &[&str] =
    &["gcd_A", "gcd_B", "gcd_free", "mergesort", "merge", "mergesort_outer", "euclidean_gcd"];

fn builtin_algorithm(name: &str) -> Fallible<Option<AnyAlgorithm>> {
    Ok(Some(match name {
        "gcd_A" => AnyAlgorithm::Semantic(gcd_mod_algorithm()?),
        "gcd_B" => AnyAlgorithm::Semantic(gcd_sub_algorithm()?),
        "gcd_free" => AnyAlgorithm::Syntactic(gcd_mod_free()),
        "mergesort" => AnyAlgorithm::Semantic(mergesort_sequential(true)?),
        "merge" => AnyAlgorithm::Semantic(merge_component()?),
        "mergesort_outer" => AnyAlgorithm::Syntactic(mergesort_outer()),
        "euclidean_gcd" => AnyAlgorithm::Logical(euclidean_gcd_logical()?),
        _ => return Ok(None),
    }))
}

fn resolve_structure(name: &str) -> Fallible<AbstractDataStructure> {
    for s in [booleans(), naturals(), lists_of_naturals(), gf2_polys()] {
        if s.name == name {
            return Ok(s);
        }
    }
    fail(format!(
        "unknown structure `{name}`; built-ins: booleans, naturals, lists_of_naturals, gf2_polys"
    ))
}

fn resolve_interpretation(name: &str) -> Fallible<Interpretation> {
    for i in [delta_bool(), delta_nat_unary(), delta_nat_binary()] {
        if i.name == name {
            return Ok(i);
        }
    }
    fail(format!(
        "unknown interpretation `{name}`; built-ins: bool_cells, nat_unary, nat_binary"
    ))
}

fn resolve_theory(arg: &str, base: &Path) -> Fallible<Theory> {
    if arg == "euclidean" {
        return Ok(euclidean_theory());
    }
    let path = base.join(arg);
    if path.exists() {
        return Ok(parse_theory(&fs::read_to_string(path)?)?);
    }
    fail(format!("unknown theory `{arg}`: not the built-in `euclidean` and no such file"))
}

fn resolve_binding(
    binding: Option<&Path>,
    theory: &Theory,
) -> Fallible<SymbolBinding> {
    match binding {
        Some(path) => Ok(serde_json::from_str(&fs::read_to_string(path)?)?),
        None if theory.name == "euclidean" => Ok(euclidean_binding()),
        None => fail(format!(
            "theory `{}` has no built-in binding; pass --binding <file>",
            theory.name
        )),
    }
}

/// Resolves a structural-map name against a structure, falling back to the
/// composite maps the built-in corpus defines over it (and the nowhere-defined
/// `bottom` map that unfolding introduces).
fn known_map(structure: &AbstractDataStructure, name: &str) -> Fallible<StructuralMap> {
    if let Ok(map) = structure.map(name) {
        return Ok(map.clone());
    }
    if name == "bottom" {
        return Ok(bottom_operation().map);
    }
    let corpus: Vec<SemanticAlgorithm> = vec![
        gcd_mod_algorithm()?,
        gcd_sub_algorithm()?,
        mergesort_algorithm()?,
        mergesort_sequential(true)?,
        mergesort_sequential(false)?,
        merge_component()?,
    ];
    for alg in &corpus {
        if alg.structure.name != structure.name {
            continue;
        }
        for (_, op) in alg.meanings() {
            if op.map.name == name {
                return Ok(op.map.clone());
            }
        }
    }
    fail(format!("structure `{}` has no map `{name}`", structure.name))
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SemanticsEntry {
    map: String,
    #[serde(rename = "in")]
    inputs: Vec<String>,
    #[serde(rename = "out")]
    outputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SymbolEntry {
    symbol: String,
    #[serde(rename = "in")]
    inputs: Vec<String>,
    #[serde(rename = "out")]
    outputs: Vec<String>,
}

/// Algorithm file: the program shape plus a label alphabet; optional
/// semantics (structure name in `model`, anchored map per label) or symbols
/// (theory reference, anchored symbol per label).
#[derive(Serialize, Deserialize)]
struct AlgorithmFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    states: Vec<String>,
    initial: String,
    terminal: String,
    edges: Vec<Edge>,
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frame: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    semantics: Option<IndexMap<String, SemanticsEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theory: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symbols: Option<IndexMap<String, SymbolEntry>>,
}

#[derive(Serialize, Deserialize)]
struct LabellingFile {
    /// "programs" or "algorithms"
    targets: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    map: IndexMap<String, String>,
}

#[derive(Deserialize)]
struct ManifestFile {
    interpretation: String,
    structure: String,
    programs: IndexMap<String, String>,
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn load_program_file(path: &Path) -> Fallible<Program> {
    let raw: Program = serde_json::from_str(&fs::read_to_string(path)?)?;
    // Re-run the constructor so hand-written files get the same validation
    // as everything built in memory.
    Ok(Program::new(raw.model, raw.states, raw.initial, raw.terminal, raw.edges)?)
}

/// A name argument is a file when it points at one, a built-in otherwise.
fn resolve_program_at(arg: &str, base: &Path) -> Fallible<Program> {
    let path = base.join(arg);
    if path.exists() {
        return load_program_file(&path);
    }
    let mut builtins = builtin_programs()?;
    if let Some(program) = builtins.shift_remove(arg) {
        return Ok(program);
    }
    let names: Vec<String> = builtins.keys().cloned().collect();
    fail(format!("unknown program `{arg}`: no such file, and built-ins are {}", names.join(", ")))
}

fn resolve_program(arg: &str) -> Fallible<Program> {
    resolve_program_at(arg, Path::new(""))
}

fn load_algorithm_file(path: &Path) -> Fallible<AnyAlgorithm> {
    let file: AlgorithmFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let syntax = SyntacticAlgorithm::new(
        file.states,
        file.initial,
        file.terminal,
        file.labels,
        file.edges,
    )?;
    if let Some(symbols) = file.symbols {
        let theory_ref = match &file.theory {
            Some(t) => t.clone(),
            None => return fail("a logical algorithm file needs a `theory` reference"),
        };
        let theory = resolve_theory(&theory_ref, &base_dir(path))?;
        let frame = match file.frame {
            Some(f) => f,
            None => return fail("a logical algorithm file needs a `frame`"),
        };
        let meanings = symbols
            .into_iter()
            .map(|(label, e)| {
                (label, SymbolAnchor { symbol: e.symbol, inputs: e.inputs, outputs: e.outputs })
            })
            .collect();
        return Ok(AnyAlgorithm::Logical(LogicalAlgorithm::new(syntax, theory, frame, meanings)?));
    }
    if let Some(semantics) = file.semantics {
        let structure_name = match &file.model {
            Some(m) => m.clone(),
            None => return fail("a semantic algorithm file needs `model`: the structure name"),
        };
        let structure = resolve_structure(&structure_name)?;
        let frame = match file.frame {
            Some(f) => f,
            None => return fail("a semantic algorithm file needs a `frame`"),
        };
        let mut meanings = Vec::new();
        for (label, e) in semantics {
            let op = AnchoredOperation::new(known_map(&structure, &e.map)?, e.inputs, e.outputs)?;
            meanings.push((label, op));
        }
        return Ok(AnyAlgorithm::Semantic(SemanticAlgorithm::new(
            syntax, structure, frame, meanings,
        )?));
    }
    Ok(AnyAlgorithm::Syntactic(syntax))
}

fn resolve_algorithm_at(arg: &str, base: &Path) -> Fallible<AnyAlgorithm> {
    let path = base.join(arg);
    if path.exists() {
        return load_algorithm_file(&path);
    }
    if let Some(alg) = builtin_algorithm(arg)? {
        return Ok(alg);
    }
    fail(format!(
        "unknown algorithm `{arg}`: no such file, and built-ins are {}",
        BUILTIN_ALGORITHMS.join(", ")
    ))
}

fn resolve_algorithm(arg: &str) -> Fallible<AnyAlgorithm> {
    resolve_algorithm_at(arg, Path::new(""))
}

fn emit_algorithm_file(alg: &AnyAlgorithm) -> Fallible<String> {
    let file = match alg {
        AnyAlgorithm::Syntactic(s) => AlgorithmFile {
            model: None,
            states: s.states.clone(),
            initial: s.initial.clone(),
            terminal: s.terminal.clone(),
            edges: s.edges.clone(),
            labels: s.labels.clone(),
            frame: None,
            semantics: None,
            theory: None,
            symbols: None,
        },
        AnyAlgorithm::Semantic(s) => AlgorithmFile {
            model: Some(s.structure.name.clone()),
            states: s.syntax.states.clone(),
            initial: s.syntax.initial.clone(),
            terminal: s.syntax.terminal.clone(),
            edges: s.syntax.edges.clone(),
            labels: s.syntax.labels.clone(),
            frame: Some(s.frame.clone()),
            semantics: Some(
                s.meanings()
                    .map(|(label, op)| {
                        (
                            label.to_string(),
                            SemanticsEntry {
                                map: op.map.name.clone(),
                                inputs: op.inputs.clone(),
                                outputs: op.outputs.clone(),
                            },
                        )
                    })
                    .collect(),
            ),
            theory: None,
            symbols: None,
        },
        AnyAlgorithm::Logical(_) => {
            return fail("writing logical algorithm files is not supported; instantiate first")
        }
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&file)?))
}

fn program_json(program: &Program) -> Fallible<String> {
    Ok(format!("{}\n", serde_json::to_string_pretty(program)?))
}

fn load_program_labelling(path: &Path) -> Fallible<IndexMap<String, Program>> {
    let file: LabellingFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if file.targets != "programs" {
        return fail(format!(
            "labelling {} targets `{}`, but this command needs `programs`",
            path.display(),
            file.targets
        ));
    }
    let base = base_dir(path);
    let mut out = IndexMap::new();
    for (label, entry) in file.map {
        let program = resolve_program_at(&entry, &base)?;
        if let Some(model) = &file.model {
            if &program.model != model {
                return fail(format!(
                    "component for `{label}` targets model `{}`, labelling declares `{model}`",
                    program.model
                ));
            }
        }
        out.insert(label, program);
    }
    Ok(out)
}

fn load_algorithm_labelling(path: &Path) -> Fallible<IndexMap<String, SyntacticAlgorithm>> {
    let file: LabellingFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if file.targets != "algorithms" {
        return fail(format!(
            "labelling {} targets `{}`, but this command needs `algorithms`",
            path.display(),
            file.targets
        ));
    }
    let base = base_dir(path);
    let mut out = IndexMap::new();
    for (label, entry) in file.map {
        out.insert(label, resolve_algorithm_at(&entry, &base)?.syntax().clone());
    }
    Ok(out)
}

fn labelling_targets(path: &Path) -> Fallible<String> {
    let file: LabellingFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok(file.targets)
}

fn write_or_print(out: Option<&Path>, content: &str, what: &str) -> Fallible<()> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            println!("wrote {what} to {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Model reconstruction for `run`
// ---------------------------------------------------------------------------

/// "naturals[x,y]" -> ("naturals", ["x", "y"])
fn parse_induced_name(name: &str) -> Option<(String, Vec<String>)> {
    let open = name.find('[')?;
    let inner = name.get(open + 1..name.len().checked_sub(1)?)?;
    if !name.ends_with(']') {
        return None;
    }
    let vars = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::to_string).collect()
    };
    Some((name[..open].to_string(), vars))
}

/// "mod@(x,y)->(x)" -> the anchored operation it names.
fn parse_anchor(structure: &AbstractDataStructure, label: &str) -> Fallible<AnchoredOperation> {
    let split_vars = |s: &str| -> Vec<String> {
        if s.is_empty() {
            Vec::new()
        } else {
            s.split(',').map(str::to_string).collect()
        }
    };
    let parts = label
        .split_once("@(")
        .and_then(|(map, rest)| rest.split_once(")->(").map(|(i, o)| (map, i, o)))
        .and_then(|(map, i, o)| o.strip_suffix(')').map(|o| (map, i, o)));
    match parts {
        Some((map, ins, outs)) => Ok(AnchoredOperation::new(
            known_map(structure, map)?,
            split_vars(ins),
            split_vars(outs),
        )?),
        None => fail(format!("edge label `{label}` is not an anchored instruction name")),
    }
}

/// Rebuilds the model a program runs on from its `model` field: the tape
/// model, or a structure-over-frame model whose instructions are recovered
/// from the program's own edge labels.
fn resolve_model_for(program: &Program) -> Fallible<ModelOfComputation> {
    if program.model == "tm" {
        return Ok(tm_model());
    }
    if let Some((structure_name, frame)) = parse_induced_name(&program.model) {
        let structure = resolve_structure(&structure_name)?;
        let mut seen = BTreeSet::new();
        let mut ops = Vec::new();
        for e in &program.edges {
            if seen.insert(e.label.clone()) {
                ops.push(parse_anchor(&structure, &e.label)?);
            }
        }
        return Ok(induced_model(&structure, &frame, &ops)?);
    }
    fail(format!(
        "unknown model `{}`; expected `tm` or an induced name like `naturals[x,y]`",
        program.model
    ))
}

/// The subgraph a run actually visited: taken edges plus their endpoints.
fn visited_dot(program: &Program, trace: &Trace, title: &str) -> String {
    let taken: BTreeSet<usize> = trace.steps.iter().map(|s| s.edge).collect();
    let edges: Vec<Edge> = taken.iter().map(|&i| program.edges[i].clone()).collect();
    let mut keep: BTreeSet<&str> = edges.iter().flat_map(|e| [e.from.as_str(), e.to.as_str()]).collect();
    keep.insert(program.initial.as_str());
    if matches!(trace.outcome, Outcome::Terminated { .. }) {
        keep.insert(program.terminal.as_str());
    }
    let states: Vec<String> =
        program.states.iter().filter(|s| keep.contains(s.as_str())).cloned().collect();
    program_dot(
        &Program {
            model: program.model.clone(),
            states,
            initial: program.initial.clone(),
            terminal: program.terminal.clone(),
            edges,
        },
        title,
    )
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_run(
    cli: &Cli,
    program_arg: &str,
    model_assert: Option<&str>,
    input: &str,
    dot: Option<&Path>,
) -> Fallible<u8> {
    let program = resolve_program(program_arg)?;
    if let Some(expected) = model_assert {
        if program.model != expected {
            return fail(format!(
                "program `{program_arg}` targets model `{}`, not `{expected}`",
                program.model
            ));
        }
    }
    let model = resolve_model_for(&program)?;
    let config = model.space.parse_config(input)?;
    let trace = run(&model, &program, &config, cli.budget)?;
    if let Some(path) = dot {
        fs::write(path, visited_dot(&program, &trace, program_arg))?;
    }
    match &trace.outcome {
        Outcome::Terminated { config, steps } => {
            let rendered = model.space.render(config);
            if cli.json {
                println!(
                    "{}",
                    json!({"outcome": "terminated", "steps": steps, "final": rendered})
                );
            } else {
                println!("outcome: terminated in {steps} steps");
                println!("final:   {rendered}");
            }
            Ok(0)
        }
        Outcome::Stuck { state } => {
            let rendered = model.space.render(&state.config);
            if cli.json {
                println!(
                    "{}",
                    json!({"outcome": "stuck", "state": state.control, "config": rendered})
                );
            } else {
                println!("outcome: stuck at control state `{}`", state.control);
                println!("config:  {rendered}");
            }
            Ok(2)
        }
        Outcome::OutOfBudget => {
            if cli.json {
                println!("{}", json!({"outcome": "out_of_budget", "budget": cli.budget}));
            } else {
                println!("outcome: no termination within budget {}", cli.budget);
            }
            Ok(3)
        }
    }
}

fn cmd_demo(cli: &Cli, name: DemoName) -> Fallible<u8> {
    match name {
        DemoName::Booleans => {
            let report = verify_named(
                &tm_model(),
                &delta_bool(),
                &booleans(),
                &tm_bool_programs(),
                &["read0", "read1", "not", "and"],
                1,
                cli.budget,
            )?;
            print!("{}", report.render());
            Ok(if report.passed() { 0 } else { 2 })
        }
        DemoName::Gcd => {
            let via_abstract = run_gcd(&gcd_mod_algorithm()?, 12, 8, cli.budget)?;
            println!("gcd_A abstract run:   gcd(12, 8) = {}", render_opt_nat(via_abstract));

            let (model, components) = gcd_component_programs()?;
            let (glued, _) = glue(&gcd_mod_free(), &components)?;
            println!(
                "glued program:        {} states, {} edges over model `{}`",
                glued.states.len(),
                glued.edges.len(),
                glued.model
            );
            let trace = run(&model, &glued, &Config::Env(gcd_env(12, 8)), cli.budget)?;
            let via_glued = trace
                .terminated()
                .and_then(|(c, _)| c.as_env().and_then(|e| e.get("x")).cloned());
            println!(
                "glued program run:    gcd(12, 8) = {}",
                via_glued.map_or("stuck or out of budget".into(), |v| v.render())
            );

            let (_, view) = gcd_sub_algorithm()?.program_view()?;
            let recognized = check_implements(&view, &gcd_mod_free(), &components)?.is_some();
            println!(
                "gcd_B recognition:    glueing of gcd_A's free skeleton along its components: {}",
                if recognized { "yes" } else { "NO" }
            );
            Ok(if recognized { 0 } else { 2 })
        }
        DemoName::Mergesort => {
            let base = mergesort_sequential(true)?;
            let input: Vec<u64> = vec![5, 3, 8, 1, 9, 2, 7, 6];
            let depth = 4; // ceil(log2(8)) + 1
            let unfolded = unfold_semantic(&base, "sort", depth)?;
            println!(
                "mergesort: {} states, {} edges; unfolded to depth {depth}: {} states, {} edges",
                base.syntax.states.len(),
                base.syntax.edges.len(),
                unfolded.syntax.states.len(),
                unfolded.syntax.edges.len()
            );
            let got = run_sort(&unfolded, &input, cli.budget)?;
            let mut want = input.clone();
            want.sort_unstable();
            println!("input:  {input:?}");
            println!("output: {}", got.as_ref().map_or("none".into(), |v| format!("{v:?}")));
            Ok(if got == Some(want) { 0 } else { 2 })
        }
        DemoName::Census => {
            let f = parse_size_function("n/2")?;
            let mut library = IndexMap::new();
            library.insert("hop_mark_hop".to_string(), census_library_program());
            let stats = census(
                6,
                &f,
                &tm_model(),
                &["right".to_string(), "write_1".to_string()],
                &library,
                cli.budget,
            )?;
            print!("{}", stats.to_csv());
            if !stats.complete {
                eprintln!("(partial: search budget exhausted on some classes)");
            }
            Ok(0)
        }
    }
}

fn render_opt_nat(v: Option<u64>) -> String {
    v.map_or("stuck or out of budget".into(), |n| n.to_string())
}

fn cmd_glue(algorithm: &str, labelling: &Path, out: Option<&Path>) -> Fallible<u8> {
    let outer = resolve_algorithm(algorithm)?;
    match labelling_targets(labelling)?.as_str() {
        "programs" => {
            let components = load_program_labelling(labelling)?;
            let (program, _) = glue(outer.syntax(), &components)?;
            let what = format!(
                "glued program ({} states, {} edges)",
                program.states.len(),
                program.edges.len()
            );
            write_or_print(out, &program_json(&program)?, &what)?;
        }
        "algorithms" => {
            let phi = load_algorithm_labelling(labelling)?;
            let (flat, _) = glue_syntactic(outer.syntax(), &phi)?;
            let what = format!(
                "glued algorithm ({} states, {} edges)",
                flat.states.len(),
                flat.edges.len()
            );
            write_or_print(out, &emit_algorithm_file(&AnyAlgorithm::Syntactic(flat))?, &what)?;
        }
        other => return fail(format!("labelling targets `{other}`; expected programs or algorithms")),
    }
    Ok(0)
}

fn cmd_check_implements(
    cli: &Cli,
    program: &str,
    algorithm: &str,
    labelling: &Path,
) -> Fallible<u8> {
    let program = resolve_program(program)?;
    let outer = resolve_algorithm(algorithm)?;
    let components = load_program_labelling(labelling)?;
    let witness = check_implements(&program, outer.syntax(), &components)?;
    if cli.json {
        println!("{}", json!({"implements": witness.is_some(), "witness": witness}));
    } else {
        match &witness {
            Some(map) => {
                println!("implements: yes");
                for (glued_state, program_state) in map {
                    println!("  {glued_state} -> {program_state}");
                }
            }
            None => println!("implements: no"),
        }
    }
    Ok(if witness.is_some() { 0 } else { 2 })
}

fn cmd_verify_impl(cli: &Cli, manifest: &Path) -> Fallible<u8> {
    let file: ManifestFile = serde_json::from_str(&fs::read_to_string(manifest)?)?;
    let interp = resolve_interpretation(&file.interpretation)?;
    let structure = resolve_structure(&file.structure)?;
    if interp.model != "tm" {
        return fail(format!("interpretation `{}` targets unknown model `{}`", interp.name, interp.model));
    }
    let model = tm_model();
    let base = base_dir(manifest);
    let mut pairs = Vec::new();
    for (map_name, entry) in &file.programs {
        pairs.push((structure.map(map_name)?.clone(), resolve_program_at(entry, &base)?));
    }
    let report = verify_implementation(&model, &interp, &pairs, cli.samples as u64, cli.budget)?;
    if cli.json {
        println!(
            "{}",
            json!({
                "interpretation": interp.name,
                "passed": report.passed(),
                "checks": report.checks.len(),
                "failures": report.failures().count(),
            })
        );
    } else {
        print!("{}", report.render());
    }
    Ok(if report.passed() { 0 } else { 2 })
}

fn cmd_check_model(
    cli: &Cli,
    theory: &str,
    structure: &str,
    binding: Option<&Path>,
) -> Fallible<u8> {
    let theory = resolve_theory(theory, Path::new(""))?;
    let structure = resolve_structure(structure)?;
    let binding = resolve_binding(binding, &theory)?;
    let report = check_model(&structure, &theory, &binding, cli.samples, cli.seed)?;
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render());
    }
    Ok(if report.no_counterexamples() { 0 } else { 2 })
}

fn cmd_instantiate(
    cli: &Cli,
    algorithm: &str,
    structure: &str,
    binding: Option<&Path>,
    out: Option<&Path>,
) -> Fallible<u8> {
    let logical = match resolve_algorithm(algorithm)? {
        AnyAlgorithm::Logical(l) => l,
        _ => return fail(format!("algorithm `{algorithm}` is not logically specified")),
    };
    let structure = resolve_structure(structure)?;
    let binding = resolve_binding(binding, &logical.theory)?;
    match instantiate(&logical, &structure, &binding, cli.samples, cli.seed) {
        Ok(semantic) => {
            let what = format!("instantiated algorithm over `{}`", structure.name);
            write_or_print(out, &emit_algorithm_file(&AnyAlgorithm::Semantic(semantic))?, &what)?;
            Ok(0)
        }
        Err(algoglue::error::Error::ModelCheckFailed(report)) => {
            eprintln!("structure `{}` does not model the theory:\n{report}", structure.name);
            Ok(2)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_unfold(algorithm: &str, label: &str, depth: usize, out: Option<&Path>) -> Fallible<u8> {
    let unfolded = match resolve_algorithm(algorithm)? {
        AnyAlgorithm::Semantic(s) => AnyAlgorithm::Semantic(unfold_semantic(&s, label, depth)?),
        AnyAlgorithm::Syntactic(s) => {
            AnyAlgorithm::Syntactic(unfold_syntactic(&s, label, depth, "bottom")?)
        }
        AnyAlgorithm::Logical(_) => {
            return fail("unfolding a logical algorithm: instantiate it first")
        }
    };
    let syntax = unfolded.syntax();
    let what = format!(
        "unfolded algorithm ({} states, {} edges)",
        syntax.states.len(),
        syntax.edges.len()
    );
    write_or_print(out, &emit_algorithm_file(&unfolded)?, &what)?;
    Ok(0)
}

fn cmd_dot(program: Option<&str>, algorithm: Option<&str>, out: Option<&Path>) -> Fallible<u8> {
    let (content, what) = match (program, algorithm) {
        (Some(arg), None) => {
            let p = resolve_program(arg)?;
            (program_dot(&p, title_of(arg)), format!("DOT for program `{arg}`"))
        }
        (None, Some(arg)) => {
            let a = resolve_algorithm(arg)?;
            (a.syntax().to_dot(title_of(arg)), format!("DOT for algorithm `{arg}`"))
        }
        _ => return fail("pass exactly one of --program or --algorithm"),
    };
    write_or_print(out, &content, &what)?;
    Ok(0)
}

fn title_of(arg: &str) -> &str {
    Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or(arg)
}

fn cmd_succinct_check(
    cli: &Cli,
    program: &str,
    algorithm: &str,
    labelling: &Path,
    f: &str,
) -> Fallible<u8> {
    let program = resolve_program(program)?;
    let outer = resolve_algorithm(algorithm)?;
    let components = load_program_labelling(labelling)?;
    let f = parse_size_function(f)?;
    let verdict = is_f_succinct(&program, outer.syntax(), &components, &f)?;
    if cli.json {
        println!(
            "{}",
            json!({
                "size_program": verdict.size_program,
                "size_algorithm": verdict.size_algorithm,
                "bound": verdict.bound,
                "implements": verdict.implements,
                "succinct": verdict.succinct,
            })
        );
    } else {
        println!("size(program)   = {}", verdict.size_program);
        println!("size(algorithm) = {}", verdict.size_algorithm);
        println!("bound f(size)   = {}", verdict.bound);
        println!("implements      : {}", if verdict.implements { "yes" } else { "no" });
        println!("f-succinct      : {}", if verdict.succinct { "yes" } else { "no" });
    }
    Ok(if verdict.succinct { 0 } else { 2 })
}

fn cmd_succinct_find(
    cli: &Cli,
    program: &str,
    library: &Path,
    f: &str,
    out: Option<&Path>,
) -> Fallible<u8> {
    let program = resolve_program(program)?;
    let library = load_program_labelling(library)?;
    let f = parse_size_function(f)?;
    let search = find_succinct(&program, &library, &f, cli.budget)?;
    if cli.json {
        let witness = search.witness.as_ref().map(|w| {
            json!({
                "size_algorithm": w.size_algorithm,
                "bound": w.bound,
                "components": w.components,
            })
        });
        println!(
            "{}",
            json!({"complete": search.complete, "found": witness.is_some(), "witness": witness})
        );
    } else {
        println!(
            "search : {}",
            if search.complete { "complete" } else { "budget exhausted — inconclusive" }
        );
        match &search.witness {
            Some(w) => {
                println!(
                    "witness: {} states, {} edges (size {} within bound {})",
                    w.algorithm.states.len(),
                    w.algorithm.edges.len(),
                    w.size_algorithm,
                    w.bound
                );
                for (label, lib) in &w.components {
                    println!("  {label} -> {lib}");
                }
            }
            None => println!("witness: none"),
        }
    }
    let found = search.witness.is_some();
    if let Some(w) = search.witness {
        if let Some(path) = out {
            fs::write(path, emit_algorithm_file(&AnyAlgorithm::Syntactic(w.algorithm))?)?;
            println!("wrote witness algorithm to {}", path.display());
        }
    }
    Ok(if found { 0 } else { 2 })
}

fn cmd_census(
    cli: &Cli,
    n: usize,
    f: &str,
    instructions: &[String],
    library: Option<&Path>,
    out: Option<&Path>,
) -> Fallible<u8> {
    let f = parse_size_function(f)?;
    let library = match library {
        Some(path) => load_program_labelling(path)?,
        None => {
            let mut lib = IndexMap::new();
            lib.insert("hop_mark_hop".to_string(), census_library_program());
            lib
        }
    };
    let stats = census(n, &f, &tm_model(), instructions, &library, cli.budget)?;
    if cli.json {
        let rows: Vec<serde_json::Value> = stats
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.size,
                    "programs_enumerated": r.programs,
                    "succinct_count": r.succinct,
                    "fraction": r.fraction,
                })
            })
            .collect();
        println!("{}", json!({"complete": stats.complete, "rows": rows}));
    } else {
        write_or_print(out, &stats.to_csv(), "census CSV")?;
    }
    if !stats.complete {
        eprintln!("(partial: search budget exhausted on some classes)");
    }
    Ok(0)
}

fn cmd_eval(cli: &Cli, term: &str, args: &str) -> Fallible<u8> {
    let source = {
        let path = Path::new(term);
        if path.exists() {
            fs::read_to_string(path)?
        } else {
            term.to_string()
        }
    };
    let term = parse_term(&source)?;
    let args: Vec<u64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|a| a.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad --args: {e}"))?
    };
    match eval(&term, &args, cli.budget as u64)? {
        Eval::Value(v) => {
            if cli.json {
                println!("{}", json!({"outcome": "value", "value": v}));
            } else {
                println!("= {v}");
            }
            Ok(0)
        }
        Eval::Undefined => {
            if cli.json {
                println!("{}", json!({"outcome": "undefined"}));
            } else {
                println!("undefined");
            }
            Ok(2)
        }
        Eval::OutOfBudget => {
            if cli.json {
                println!("{}", json!({"outcome": "out_of_budget", "budget": cli.budget}));
            } else {
                println!("no value within budget {}", cli.budget);
            }
            Ok(3)
        }
    }
}
