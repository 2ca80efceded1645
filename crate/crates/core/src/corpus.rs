//! Worked algorithm families over the built-in structures: two greatest-
//! common-divisor algorithms related by glueing, a mergesort family with
//! sequentialized recursion and finite unfoldings, a theory-level version of
//! the Euclidean algorithm that runs unchanged over naturals and over GF(2)
//! polynomials, and the small machine programs used by the census examples.
//!
//! Everything here is an ordinary value built through the public APIs of the
//! other modules; nothing is privileged.  The constructors are deterministic,
//! so two calls always yield interchangeable objects.

use indexmap::IndexMap;

use crate::algorithm::{abstract_run, SemanticAlgorithm, SyntacticAlgorithm};
use crate::data::{
    compose_maps, induced_model, lists_of_naturals, naturals, AbstractDataStructure,
    AnchoredOperation, Environment,
};
use crate::error::Result;
use crate::glueing::{atomic_program, atomic_semantic, glue, glue_semantic, GlueTrace};
use crate::logic::{instantiate, parse_theory, LogicalAlgorithm, SymbolAnchor, SymbolBinding, Theory};
use crate::model::ModelOfComputation;
use crate::program::{Edge, Program};
use crate::value::Value;

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn syntax(
    states: &[&str],
    initial: &str,
    terminal: &str,
    edges: &[(&str, &str, &str)],
) -> SyntacticAlgorithm {
    let mut labels: Vec<String> = Vec::new();
    for (_, _, l) in edges {
        if !labels.contains(&l.to_string()) {
            labels.push(l.to_string());
        }
    }
    SyntacticAlgorithm::new(
        strings(states),
        initial,
        terminal,
        labels,
        edges.iter().map(|(f, t, l)| Edge::new(*f, *t, *l)).collect(),
    )
    .expect("corpus control graphs are well-formed")
}

fn anchored(
    structure: &AbstractDataStructure,
    map: &str,
    inputs: &[&str],
    outputs: &[&str],
) -> Result<AnchoredOperation> {
    AnchoredOperation::new(structure.map(map)?.clone(), strings(inputs), strings(outputs))
}

// ---------------------------------------------------------------------------
// Greatest common divisor, two ways

/// One Euclidean iteration on the frame `x, y`: afterwards `x` holds the old
/// `y` and `y` holds `x mod y`.  Undefined when `y = 0`.
pub fn euclid_step_map() -> Result<crate::data::StructuralMap> {
    let n = naturals();
    let frame = strings(&["x", "y"]);
    compose_maps(
        "euclid_step",
        &frame,
        vec![
            anchored(&n, "mod", &["x", "y"], &["x"])?,
            anchored(&n, "swap", &["x", "y"], &["x", "y"])?,
        ],
    )
}

/// The do-nothing total operation; useful as the meaning of return edges.
pub fn nop_operation() -> AnchoredOperation {
    let nop = compose_maps("nop", &[], vec![]).expect("the empty pipeline is a valid composite");
    AnchoredOperation::new(nop, vec![], vec![]).expect("a nullary map anchors to no variables")
}

/// Remainder-based gcd: `while y != 0 { (x, y) := (y, x mod y) }; return x`.
pub fn gcd_mod_algorithm() -> Result<SemanticAlgorithm> {
    let n = naturals();
    let graph = syntax(
        &["begin", "ifl", "ifr", "end"],
        "begin",
        "end",
        &[
            ("begin", "ifl", "y_is_0"),
            ("ifl", "end", "ret"),
            ("begin", "ifr", "y_nonzero"),
            ("ifr", "begin", "euclid"),
        ],
    );
    let euclid = AnchoredOperation::new(
        euclid_step_map()?,
        strings(&["x", "y"]),
        strings(&["x", "y"]),
    )?;
    SemanticAlgorithm::new(
        graph,
        n.clone(),
        strings(&["x", "y"]),
        vec![
            ("y_is_0".into(), anchored(&n, "read0", &["y"], &["y"])?),
            ("ret".into(), nop_operation()),
            ("y_nonzero".into(), anchored(&n, "readS", &["y"], &["y"])?),
            ("euclid".into(), euclid),
        ],
    )
}

/// The control graph of [`gcd_mod_algorithm`] with the loop edge freed up as
/// an uninterpreted label `rem`, ready to receive a component.
pub fn gcd_mod_free() -> SyntacticAlgorithm {
    syntax(
        &["begin", "ifl", "ifr", "end"],
        "begin",
        "end",
        &[
            ("begin", "ifl", "y_is_0"),
            ("ifl", "end", "ret"),
            ("begin", "ifr", "y_nonzero"),
            ("ifr", "begin", "rem"),
        ],
    )
}

/// Remainder by repeated subtraction, as a component: enter with `y != 0`,
/// leave with `(x, y) := (y, x mod y)`.
pub fn remainder_component() -> SyntacticAlgorithm {
    syntax(
        &["i", "u", "v", "t"],
        "i",
        "t",
        &[
            ("i", "u", "x_geq_y"),
            ("u", "i", "sub_step"),
            ("i", "v", "x_lt_y"),
            ("v", "t", "swap"),
        ],
    )
}

/// Subtraction-based gcd: the remainder is computed by repeated subtraction
/// before each swap.  Same outer shape as [`gcd_mod_algorithm`], with the
/// loop edge expanded in place.
pub fn gcd_sub_algorithm() -> Result<SemanticAlgorithm> {
    let n = naturals();
    let graph = syntax(
        &["begin", "ifl", "ifr", "end", "d_sub", "d_swp"],
        "begin",
        "end",
        &[
            ("begin", "ifl", "y_is_0"),
            ("ifl", "end", "ret"),
            ("begin", "ifr", "y_nonzero"),
            ("ifr", "d_sub", "x_geq_y"),
            ("d_sub", "ifr", "sub_step"),
            ("ifr", "d_swp", "x_lt_y"),
            ("d_swp", "begin", "swap"),
        ],
    );
    SemanticAlgorithm::new(
        graph,
        n.clone(),
        strings(&["x", "y"]),
        vec![
            ("y_is_0".into(), anchored(&n, "read0", &["y"], &["y"])?),
            ("ret".into(), nop_operation()),
            ("y_nonzero".into(), anchored(&n, "readS", &["y"], &["y"])?),
            ("x_geq_y".into(), anchored(&n, "geq", &["x", "y"], &["x", "y"])?),
            ("sub_step".into(), anchored(&n, "sub", &["x", "y"], &["x"])?),
            ("x_lt_y".into(), anchored(&n, "lt", &["x", "y"], &["x", "y"])?),
            ("swap".into(), anchored(&n, "swap", &["x", "y"], &["x", "y"])?),
        ],
    )
}

/// The machine side of the gcd story: the model induced by anchoring the
/// arithmetic operations to the frame `x, y`, plus one program per label of
/// [`gcd_mod_free`].  Glueing them yields a program isomorphic to the program
/// view of [`gcd_sub_algorithm`].
pub fn gcd_component_programs() -> Result<(ModelOfComputation, IndexMap<String, Program>)> {
    let n = naturals();
    let ops = vec![
        anchored(&n, "read0", &["y"], &["y"])?,
        anchored(&n, "readS", &["y"], &["y"])?,
        nop_operation(),
        anchored(&n, "geq", &["x", "y"], &["x", "y"])?,
        anchored(&n, "sub", &["x", "y"], &["x"])?,
        anchored(&n, "lt", &["x", "y"], &["x", "y"])?,
        anchored(&n, "swap", &["x", "y"], &["x", "y"])?,
    ];
    let frame = strings(&["x", "y"]);
    let model = induced_model(&n, &frame, &ops)?;
    let name = model.name.clone();
    let ins = |op: &AnchoredOperation| op.instruction_name();
    let mut programs = IndexMap::new();
    programs.insert("y_is_0".to_string(), atomic_program(&name, &ins(&ops[0])));
    programs.insert("ret".to_string(), atomic_program(&name, &ins(&ops[2])));
    programs.insert("y_nonzero".to_string(), atomic_program(&name, &ins(&ops[1])));
    programs.insert(
        "rem".to_string(),
        Program::new(
            name,
            strings(&["i", "u", "v", "t"]),
            "i",
            "t",
            vec![
                Edge::new("i", "u", ins(&ops[3])),
                Edge::new("u", "i", ins(&ops[4])),
                Edge::new("i", "v", ins(&ops[5])),
                Edge::new("v", "t", ins(&ops[6])),
            ],
        )?,
    );
    Ok((model, programs))
}

pub fn gcd_env(a: u64, b: u64) -> Environment {
    Environment::new(vec![
        ("x".to_string(), Value::Nat(a)),
        ("y".to_string(), Value::Nat(b)),
    ])
    .expect("two distinct variables")
}

/// Runs a gcd-shaped algorithm on `(a, b)` and extracts `x` on termination.
pub fn run_gcd(alg: &SemanticAlgorithm, a: u64, b: u64, budget: usize) -> Result<Option<u64>> {
    let trace = abstract_run(alg, &gcd_env(a, b), budget)?;
    Ok(trace
        .terminated()
        .and_then(|(config, _)| config.as_env())
        .and_then(|env| env.get("x"))
        .and_then(Value::as_nat))
}

// ---------------------------------------------------------------------------
// Padded gcd components (deliberately verbose implementations)

/// The gcd model over the frame `x, y, z`; the extra variable lets the
/// padded components swap through a scratch cell instead of using `swap`.
pub fn padded_gcd_model() -> Result<ModelOfComputation> {
    let n = naturals();
    let ops = padded_ops(&n)?;
    induced_model(&n, &strings(&["x", "y", "z"]), &ops)
}

fn padded_ops(n: &AbstractDataStructure) -> Result<Vec<AnchoredOperation>> {
    Ok(vec![
        anchored(n, "read0", &["y"], &["y"])?,
        anchored(n, "readS", &["y"], &["y"])?,
        nop_operation(),
        anchored(n, "geq", &["x", "y"], &["x", "y"])?,
        anchored(n, "sub", &["x", "y"], &["x"])?,
        anchored(n, "lt", &["x", "y"], &["x", "y"])?,
        anchored(n, "id", &["x"], &["z"])?,
        anchored(n, "id", &["y"], &["x"])?,
        anchored(n, "id", &["z"], &["y"])?,
    ])
}

/// Long-winded implementations of the four gcd steps: every component is
/// padded with no-ops, and the swap goes through the scratch variable.  Their
/// total size is 41 against 8 for the outer algorithm, which is what makes
/// the glued program a good subject for succinctness queries.
pub fn padded_gcd_components() -> Result<IndexMap<String, Program>> {
    let n = naturals();
    let ops = padded_ops(&n)?;
    let model = induced_model(&n, &strings(&["x", "y", "z"]), &ops)?;
    let name = model.name;
    let ins = |i: usize| ops[i].instruction_name();
    let padded_guard = |label: &str| -> Result<Program> {
        Program::new(
            name.clone(),
            strings(&["i", "p", "q", "t"]),
            "i",
            "t",
            vec![
                Edge::new("i", "p", label),
                Edge::new("p", "q", ins(2)),
                Edge::new("q", "t", ins(2)),
            ],
        )
    };
    let mut out = IndexMap::new();
    out.insert("y_is_0".to_string(), padded_guard(&ins(0))?);
    out.insert("ret".to_string(), padded_guard(&ins(2))?);
    out.insert("y_nonzero".to_string(), padded_guard(&ins(1))?);
    out.insert(
        "rem".to_string(),
        Program::new(
            name.clone(),
            strings(&["i", "u", "u1", "u2", "v", "v1", "v2", "v3", "v4", "t"]),
            "i",
            "t",
            vec![
                Edge::new("i", "u", ins(3)),
                Edge::new("u", "u1", ins(4)),
                Edge::new("u1", "u2", ins(2)),
                Edge::new("u2", "i", ins(2)),
                Edge::new("i", "v", ins(5)),
                Edge::new("v", "v1", ins(6)),
                Edge::new("v1", "v2", ins(7)),
                Edge::new("v2", "v3", ins(8)),
                Edge::new("v3", "v4", ins(2)),
                Edge::new("v4", "t", ins(2)),
            ],
        )?,
    );
    Ok(out)
}

/// Glues the padded components along [`gcd_mod_free`]: a 37-cell program
/// that still computes the gcd, only verbosely.
pub fn padded_gcd_program() -> Result<(Program, GlueTrace)> {
    glue(&gcd_mod_free(), &padded_gcd_components()?)
}

pub fn padded_gcd_env(a: u64, b: u64) -> Environment {
    Environment::new(vec![
        ("x".to_string(), Value::Nat(a)),
        ("y".to_string(), Value::Nat(b)),
        ("z".to_string(), Value::Nat(0)),
    ])
    .expect("three distinct variables")
}

// ---------------------------------------------------------------------------
// Mergesort family

fn mergesort_meanings(l: &AbstractDataStructure) -> Result<IndexMap<String, AnchoredOperation>> {
    let mut out = IndexMap::new();
    out.insert("base".to_string(), anchored(l, "is_short", &["x"], &["x"])?);
    out.insert("ret".to_string(), nop_operation());
    out.insert("rec_guard".to_string(), anchored(l, "is_long", &["x"], &["x"])?);
    out.insert("do_split".to_string(), anchored(l, "split", &["x"], &["a", "b"])?);

    let sort_both = compose_maps(
        "sort_both",
        &strings(&["a", "b", "y"]),
        vec![
            anchored(l, "sort", &["a"], &["a"])?,
            anchored(l, "sort", &["b"], &["b"])?,
            anchored(l, "nil", &[], &["y"])?,
        ],
    )?;
    out.insert(
        "sort_ab".to_string(),
        AnchoredOperation::new(sort_both, strings(&["a", "b", "y"]), strings(&["a", "b", "y"]))?,
    );

    out.insert("loop_guard".to_string(), anchored(l, "both_nonnil", &["a", "b"], &["a", "b"])?);
    out.insert("take_a".to_string(), anchored(l, "head_le", &["a", "b"], &["a", "b"])?);
    out.insert("take_b".to_string(), anchored(l, "head_gt", &["a", "b"], &["a", "b"])?);

    let shift_a = compose_maps(
        "shift_a",
        &strings(&["y", "a"]),
        vec![
            anchored(l, "append_head", &["y", "a"], &["y"])?,
            anchored(l, "queue", &["a"], &["a"])?,
        ],
    )?;
    out.insert(
        "move_a".to_string(),
        AnchoredOperation::new(shift_a, strings(&["y", "a"]), strings(&["y", "a"]))?,
    );
    let shift_b = compose_maps(
        "shift_b",
        &strings(&["y", "b"]),
        vec![
            anchored(l, "append_head", &["y", "b"], &["y"])?,
            anchored(l, "queue", &["b"], &["b"])?,
        ],
    )?;
    out.insert(
        "move_b".to_string(),
        AnchoredOperation::new(shift_b, strings(&["y", "b"]), strings(&["y", "b"]))?,
    );

    let flush = compose_maps(
        "flush",
        &strings(&["a", "b", "y", "x"]),
        vec![
            anchored(l, "anynil", &["a", "b"], &["a", "b"])?,
            anchored(l, "concat", &["y", "a"], &["y"])?,
            anchored(l, "concat", &["y", "b"], &["y"])?,
            anchored(l, "id", &["y"], &["x"])?,
        ],
    )?;
    out.insert(
        "ret_merge".to_string(),
        AnchoredOperation::new(
            flush,
            strings(&["a", "b", "y", "x"]),
            strings(&["a", "b", "y", "x"]),
        )?,
    );
    Ok(out)
}

fn pick(
    table: &IndexMap<String, AnchoredOperation>,
    labels: &[&str],
) -> Vec<(String, AnchoredOperation)> {
    labels
        .iter()
        .map(|l| (l.to_string(), table[*l].clone()))
        .collect()
}

/// Mergesort with an oracle `sort` for the two halves: split, sort both
/// halves at once, then merge by repeatedly moving the smaller head.  The
/// sorted result ends in `x`.
pub fn mergesort_algorithm() -> Result<SemanticAlgorithm> {
    let l = lists_of_naturals();
    let graph = syntax(
        &["start", "small", "large", "split_done", "merging", "compare", "from_a", "from_b", "end"],
        "start",
        "end",
        &[
            ("start", "small", "base"),
            ("small", "end", "ret"),
            ("start", "large", "rec_guard"),
            ("large", "split_done", "do_split"),
            ("split_done", "merging", "sort_ab"),
            ("merging", "compare", "loop_guard"),
            ("compare", "from_a", "take_a"),
            ("from_a", "merging", "move_a"),
            ("compare", "from_b", "take_b"),
            ("from_b", "merging", "move_b"),
            ("merging", "end", "ret_merge"),
        ],
    );
    let table = mergesort_meanings(&l)?;
    let meanings = pick(
        &table,
        &[
            "base", "ret", "rec_guard", "do_split", "sort_ab", "loop_guard", "take_a", "move_a",
            "take_b", "move_b", "ret_merge",
        ],
    );
    SemanticAlgorithm::new(graph, l, strings(&["x", "a", "b", "y"]), meanings)
}

/// The outer shape of mergesort with the whole merge loop as one `merge`
/// label; glueing [`merge_component`] onto it recovers
/// [`mergesort_algorithm`] exactly.
pub fn mergesort_outer() -> SyntacticAlgorithm {
    syntax(
        &["start", "small", "large", "split_done", "merging", "end"],
        "start",
        "end",
        &[
            ("start", "small", "base"),
            ("small", "end", "ret"),
            ("start", "large", "rec_guard"),
            ("large", "split_done", "do_split"),
            ("split_done", "merging", "sort_ab"),
            ("merging", "end", "merge"),
        ],
    )
}

/// The merge loop as a standalone component.
pub fn merge_component() -> Result<SemanticAlgorithm> {
    let l = lists_of_naturals();
    let graph = syntax(
        &["merging", "compare", "from_a", "from_b", "end"],
        "merging",
        "end",
        &[
            ("merging", "compare", "loop_guard"),
            ("compare", "from_a", "take_a"),
            ("from_a", "merging", "move_a"),
            ("compare", "from_b", "take_b"),
            ("from_b", "merging", "move_b"),
            ("merging", "end", "ret_merge"),
        ],
    );
    let table = mergesort_meanings(&l)?;
    let meanings = pick(
        &table,
        &["loop_guard", "take_a", "move_a", "take_b", "move_b", "ret_merge"],
    );
    SemanticAlgorithm::new(graph, l, strings(&["x", "a", "b", "y"]), meanings)
}

/// Sequentializes the two oracle sorts of [`mergesort_algorithm`] through a
/// stack: sort one half in `x` while the other waits on `stk`, then the
/// other.  `a_first` picks which half goes first; both orders implement the
/// same operation.
pub fn sequential_sort_component(a_first: bool) -> Result<SemanticAlgorithm> {
    let l = lists_of_naturals();
    let (first, second) = if a_first { ("a", "b") } else { ("b", "a") };
    let frame = strings(&["x", "a", "b", "y", "stk"]);
    let save = compose_maps(
        "save_other",
        &strings(&[first, second, "x", "stk"]),
        vec![
            anchored(&l, "push", &[second, "stk"], &["stk"])?,
            anchored(&l, "id", &[first], &["x"])?,
        ],
    )?;
    let turn = compose_maps(
        "turn_around",
        &strings(&[second, "x", "stk"]),
        vec![
            anchored(&l, "pop", &["stk"], &[second, "stk"])?,
            anchored(&l, "push", &["x", "stk"], &["stk"])?,
            anchored(&l, "id", &[second], &["x"])?,
        ],
    )?;
    let restore = compose_maps(
        "unstack",
        &strings(&[first, second, "x", "y", "stk"]),
        vec![
            anchored(&l, "pop", &["stk"], &[first, "stk"])?,
            anchored(&l, "id", &["x"], &[second])?,
            anchored(&l, "nil", &[], &["y"])?,
        ],
    )?;
    let graph = syntax(
        &["i", "c1", "c2", "c3", "c4", "t"],
        "i",
        "t",
        &[
            ("i", "c1", "save"),
            ("c1", "c2", "sort"),
            ("c2", "c3", "turn"),
            ("c3", "c4", "sort"),
            ("c4", "t", "restore"),
        ],
    );
    let save_vars = strings(&[first, second, "x", "stk"]);
    let turn_vars = strings(&[second, "x", "stk"]);
    let restore_vars = strings(&[first, second, "x", "y", "stk"]);
    SemanticAlgorithm::new(
        graph,
        l.clone(),
        frame,
        vec![
            ("save".into(), AnchoredOperation::new(save, save_vars.clone(), save_vars)?),
            ("sort".into(), anchored(&l, "sort", &["x"], &["x"])?),
            ("turn".into(), AnchoredOperation::new(turn, turn_vars.clone(), turn_vars)?),
            ("restore".into(), AnchoredOperation::new(restore, restore_vars.clone(), restore_vars)?),
        ],
    )
}

/// Mergesort with the `sort_ab` edge replaced by the stack component: the
/// recursion marker `sort` now appears on two edges, ready for unfolding.
pub fn mergesort_sequential(a_first: bool) -> Result<SemanticAlgorithm> {
    let base = mergesort_algorithm()?;
    let mut components = IndexMap::new();
    for label in base.syntax.used_labels() {
        if label == "sort_ab" {
            components.insert(label, sequential_sort_component(a_first)?);
        } else {
            let comp = atomic_semantic(&base, &label)?;
            components.insert(label, comp);
        }
    }
    Ok(glue_semantic(&base.syntax, &components)?.0)
}

/// Binds `x` to the input list and every other frame variable to `[]`.
pub fn list_env(frame: &[String], input: &[u64]) -> Result<Environment> {
    Environment::new(
        frame
            .iter()
            .map(|v| {
                let value = if v == "x" {
                    Value::List(input.to_vec())
                } else {
                    Value::List(Vec::new())
                };
                (v.clone(), value)
            })
            .collect(),
    )
}

/// Runs a sorting algorithm of this family and extracts `x` on termination.
pub fn run_sort(alg: &SemanticAlgorithm, input: &[u64], budget: usize) -> Result<Option<Vec<u64>>> {
    let env = list_env(&alg.frame, input)?;
    let trace = abstract_run(alg, &env, budget)?;
    Ok(trace
        .terminated()
        .and_then(|(config, _)| config.as_env())
        .and_then(|env| env.get("x"))
        .and_then(Value::as_list)
        .map(<[u64]>::to_vec))
}

// ---------------------------------------------------------------------------
// The Euclidean algorithm at the level of a theory

/// Commutative-semiring axioms plus the division law
/// `nonzero(b) => a = div(a,b)*b + mod(a,b)`; any structure modelling this
/// theory supports the remainder-based gcd.
pub fn euclidean_theory() -> Theory {
    parse_theory(
        "(theory euclidean
           (functions (zero 0) (one 0) (add 2) (mult 2) (div 2) (mod 2) (id 1))
           (relations (is_zero 1) (nonzero 1))
           (forall (a b) (= (add a b) (add b a)))
           (forall (a b c) (= (add (add a b) c) (add a (add b c))))
           (forall (a) (= (add a zero) a))
           (forall (a b) (= (mult a b) (mult b a)))
           (forall (a b c) (= (mult (mult a b) c) (mult a (mult b c))))
           (forall (a) (= (mult a one) a))
           (forall (a) (= (mult a zero) zero))
           (forall (a b c) (= (mult a (add b c)) (add (mult a b) (mult a c))))
           (forall (a) (= (id a) a))
           (forall (a b) (=> (rel nonzero b) (= a (add (mult (div a b) b) (mod a b))))))",
    )
    .expect("the built-in theory is well-formed")
}

/// One binding serves both built-in models of the theory, because the
/// naturals and the GF(2) polynomials deliberately share map names.
pub fn euclidean_binding() -> SymbolBinding {
    [
        ("zero", "const0"),
        ("one", "const1"),
        ("add", "add"),
        ("mult", "mult"),
        ("div", "div"),
        ("mod", "mod"),
        ("id", "id"),
        ("is_zero", "read0"),
        ("nonzero", "readS"),
    ]
    .iter()
    .map(|(s, m)| (s.to_string(), m.to_string()))
    .collect()
}

/// The remainder-based gcd written against the theory alone: it mentions
/// symbols, not maps, so it can be instantiated over any model.
pub fn euclidean_gcd_logical() -> Result<LogicalAlgorithm> {
    let graph = syntax(
        &["loop", "done", "advance", "moved", "shifted", "end"],
        "loop",
        "end",
        &[
            ("loop", "done", "check_done"),
            ("done", "end", "finish"),
            ("loop", "advance", "check_more"),
            ("advance", "moved", "take_mod"),
            ("moved", "shifted", "shift_x"),
            ("shifted", "loop", "shift_y"),
        ],
    );
    let anchor = |symbol: &str, inputs: &[&str], outputs: &[&str]| SymbolAnchor {
        symbol: symbol.to_string(),
        inputs: strings(inputs),
        outputs: strings(outputs),
    };
    LogicalAlgorithm::new(
        graph,
        euclidean_theory(),
        strings(&["x", "y", "z"]),
        vec![
            ("check_done".into(), anchor("is_zero", &["y"], &["y"])),
            ("finish".into(), anchor("id", &["x"], &["x"])),
            ("check_more".into(), anchor("nonzero", &["y"], &["y"])),
            ("take_mod".into(), anchor("mod", &["x", "y"], &["z"])),
            ("shift_x".into(), anchor("id", &["y"], &["x"])),
            ("shift_y".into(), anchor("id", &["z"], &["y"])),
        ],
    )
}

/// Model-checks the Euclidean theory over `structure` and, on success,
/// returns the gcd algorithm specialized to it.
pub fn euclidean_gcd_over(
    structure: &AbstractDataStructure,
    samples: usize,
    seed: u64,
) -> Result<SemanticAlgorithm> {
    instantiate(
        &euclidean_gcd_logical()?,
        structure,
        &euclidean_binding(),
        samples,
        seed,
    )
}

/// Runs an instantiated Euclidean gcd; `zero` is the carrier's zero, used to
/// seed the scratch variable.
pub fn run_euclidean(
    alg: &SemanticAlgorithm,
    x: Value,
    y: Value,
    zero: Value,
    budget: usize,
) -> Result<Option<Value>> {
    let env = Environment::new(vec![
        ("x".to_string(), x),
        ("y".to_string(), y),
        ("z".to_string(), zero),
    ])?;
    let trace = abstract_run(alg, &env, budget)?;
    Ok(trace
        .terminated()
        .and_then(|(config, _)| config.as_env())
        .and_then(|env| env.get("x"))
        .cloned())
}

// ---------------------------------------------------------------------------
// Census material

/// A three-state tape program (step, mark, step) used as a one-entry library
/// for census runs: at total size 6 with shrink factor `n/2`, its own
/// isomorphism class is the first succinct one.
pub fn census_library_program() -> Program {
    Program::new(
        "tm",
        strings(&["i", "a", "t"]),
        "i",
        "t",
        vec![
            Edge::new("i", "a", "right"),
            Edge::new("a", "a", "write_1"),
            Edge::new("a", "t", "right"),
        ],
    )
    .expect("the census library program is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gf2_polys;
    use crate::error::Error;
    use crate::glueing::{
        atomic_algorithm, check_implements, expected_counts, glue_syntactic, unfold_semantic,
    };
    use crate::iso::{isomorphic, GraphView};
    use crate::model::Config;
    use crate::program::{run, Outcome};

    fn gcd_oracle(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = a % b;
            a = b;
            b = r;
        }
        a
    }

    #[test]
    fn both_gcd_algorithms_compute_gcd() {
        let by_mod = gcd_mod_algorithm().unwrap();
        let by_sub = gcd_sub_algorithm().unwrap();
        for (a, b) in [(12, 8), (8, 12), (7, 0), (0, 7), (0, 0), (270, 192), (17, 5)] {
            let want = Some(gcd_oracle(a, b));
            assert_eq!(run_gcd(&by_mod, a, b, 10_000).unwrap(), want, "mod gcd({a},{b})");
            assert_eq!(run_gcd(&by_sub, a, b, 10_000).unwrap(), want, "sub gcd({a},{b})");
        }
    }

    #[test]
    fn trivial_input_terminates_in_two_steps() {
        let by_sub = gcd_sub_algorithm().unwrap();
        let trace = abstract_run(&by_sub, &gcd_env(7, 0), 100).unwrap();
        match trace.outcome {
            Outcome::Terminated { steps, .. } => assert_eq!(steps, 2),
            other => panic!("expected termination, got {other:?}"),
        }
    }

    #[test]
    fn subtraction_gcd_is_the_glueing_of_the_remainder_component() {
        let outer = gcd_mod_free();
        let mut components = IndexMap::new();
        components.insert("y_is_0".to_string(), atomic_algorithm("y_is_0"));
        components.insert("ret".to_string(), atomic_algorithm("ret"));
        components.insert("y_nonzero".to_string(), atomic_algorithm("y_nonzero"));
        components.insert("rem".to_string(), remainder_component());
        let (glued, _) = glue_syntactic(&outer, &components).unwrap();
        let target = gcd_sub_algorithm().unwrap();
        assert!(isomorphic(
            &GraphView::of_algorithm(&glued),
            &GraphView::of_algorithm(&target.syntax)
        ));
    }

    #[test]
    fn machine_level_glueing_matches_the_program_view() {
        let (model, programs) = gcd_component_programs().unwrap();
        let (glued, _) = glue(&gcd_mod_free(), &programs).unwrap();
        let (_, target) = gcd_sub_algorithm().unwrap().program_view().unwrap();
        let witness = check_implements(&target, &gcd_mod_free(), &programs)
            .unwrap()
            .expect("the subtraction gcd implements the remainder shape");
        assert_eq!(witness["begin"], "begin");

        // The glued program really runs: gcd(270, 192) = 6.
        let trace = run(&model, &glued, &Config::Env(gcd_env(270, 192)), 10_000).unwrap();
        let (config, _) = trace.terminated().expect("terminates");
        assert_eq!(config.as_env().unwrap().get("x").unwrap(), &Value::Nat(6));
    }

    #[test]
    fn padded_components_glue_to_a_verbose_gcd() {
        let components = padded_gcd_components().unwrap();
        let total: usize = components
            .values()
            .map(|p| p.states.len() + p.edges.len())
            .sum();
        assert_eq!(total, 41);
        let (s, e) =
            expected_counts(&gcd_mod_free(), &components, |p| (p.states.len(), p.edges.len()))
                .unwrap();
        assert_eq!((s, e), (18, 19));
        let (program, _) = padded_gcd_program().unwrap();
        assert_eq!(program.states.len() + program.edges.len(), 37);

        let model = padded_gcd_model().unwrap();
        for (a, b) in [(12, 8), (101, 13), (36, 24)] {
            let trace = run(&model, &program, &Config::Env(padded_gcd_env(a, b)), 100_000).unwrap();
            let (config, _) = trace.terminated().expect("terminates");
            assert_eq!(
                config.as_env().unwrap().get("x").unwrap(),
                &Value::Nat(gcd_oracle(a, b)),
                "padded gcd({a},{b})"
            );
        }
    }

    #[test]
    fn mergesort_sorts() {
        let alg = mergesort_algorithm().unwrap();
        for input in [
            vec![],
            vec![5],
            vec![2, 1],
            vec![3, 1, 2],
            vec![9, 3, 7, 3, 0, 1],
            vec![1, 2, 3, 4, 5, 6, 7],
        ] {
            let mut want = input.clone();
            want.sort_unstable();
            assert_eq!(
                run_sort(&alg, &input, 100_000).unwrap(),
                Some(want),
                "sorting {input:?}"
            );
        }
    }

    #[test]
    fn mergesort_is_outer_glued_with_merge() {
        let outer = mergesort_outer();
        let merge = merge_component().unwrap();
        let base = mergesort_algorithm().unwrap();
        let mut components = IndexMap::new();
        for label in outer.used_labels() {
            if label == "merge" {
                components.insert(label, merge.clone());
            } else {
                components.insert(label.clone(), atomic_semantic(&base, &label).unwrap());
            }
        }
        let (glued, _) = glue_semantic(&outer, &components).unwrap();
        assert!(isomorphic(
            &GraphView::of_algorithm(&glued.syntax),
            &GraphView::of_algorithm(&base.syntax)
        ));
    }

    #[test]
    fn sequential_variants_agree_with_the_oracle_version() {
        let base = mergesort_algorithm().unwrap();
        let ab = mergesort_sequential(true).unwrap();
        let ba = mergesort_sequential(false).unwrap();
        assert_eq!(ab.syntax.states.len(), 13);
        assert_eq!(ab.syntax.edges.len(), 15);
        assert_eq!(
            ab.syntax.edges.iter().filter(|e| e.label == "sort").count(),
            2
        );
        for input in [vec![4, 1, 3, 2], vec![10, 9, 8], vec![2, 2, 1, 1, 3]] {
            let want = run_sort(&base, &input, 100_000).unwrap();
            assert!(want.is_some());
            assert_eq!(run_sort(&ab, &input, 100_000).unwrap(), want);
            assert_eq!(run_sort(&ba, &input, 100_000).unwrap(), want);
        }
    }

    #[test]
    fn unfolding_mergesort_grows_on_schedule_and_bounds_the_input() {
        let ab = mergesort_sequential(true).unwrap();
        let u5 = unfold_semantic(&ab, "sort", 5).unwrap();
        assert_eq!((u5.syntax.states.len(), u5.syntax.edges.len()), (695, 883));

        // Depth d sorts lists of length up to 2^d and no further.
        let input = vec![4u64, 3, 2, 1];
        let u2 = unfold_semantic(&ab, "sort", 2).unwrap();
        assert_eq!(run_sort(&u2, &input, 100_000).unwrap(), Some(vec![1, 2, 3, 4]));
        let u1 = unfold_semantic(&ab, "sort", 1).unwrap();
        assert_eq!(run_sort(&u1, &input, 100_000).unwrap(), None);
        assert_eq!(run_sort(&u1, &[7, 5], 100_000).unwrap(), Some(vec![5, 7]));
    }

    #[test]
    fn euclidean_theory_holds_over_both_carriers() {
        let nat_gcd = euclidean_gcd_over(&naturals(), 150, 11).unwrap();
        assert_eq!(
            run_euclidean(&nat_gcd, Value::Nat(270), Value::Nat(192), Value::Nat(0), 10_000)
                .unwrap(),
            Some(Value::Nat(6))
        );

        let poly_gcd = euclidean_gcd_over(&gf2_polys(), 150, 11).unwrap();
        // gcd(x^3 + x, x^2 + 1): x^3 + x = x (x^2 + 1), so the gcd is x^2 + 1.
        let got = run_euclidean(
            &poly_gcd,
            Value::Poly(0b1010),
            Value::Poly(0b101),
            Value::Poly(0),
            10_000,
        )
        .unwrap();
        assert_eq!(got, Some(Value::Poly(0b101)));
    }

    #[test]
    fn a_false_axiom_blocks_instantiation() {
        // Claim sub is commutative-ish by binding add to sub: refuted.
        let mut binding = euclidean_binding();
        binding.insert("add".to_string(), "sub".to_string());
        let err = euclidean_gcd_logical()
            .and_then(|alg| instantiate(&alg, &naturals(), &binding, 200, 5));
        assert!(matches!(err, Err(Error::ModelCheckFailed(_))));
    }
}
