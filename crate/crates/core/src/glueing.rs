//! Glueing component graphs along the edges of an outer control graph.
//!
//! Each edge of an outer graph is replaced by a fresh copy of a component
//! graph whose initial and terminal states are identified with the edge's
//! endpoints; internal component states become new states of the result.
//! The construction works uniformly for programs (labels are instructions),
//! syntactic algorithms (labels are alphabet letters), and semantic
//! algorithms (labels carry anchored operations).
//!
//! Sizes compose exactly: the glued graph has
//! `|V(outer)| + Σ_edges (|S_component| - 2)` states and
//! `Σ_edges |E_component|` edges, which is what makes implementation search
//! and the succinctness bounds cheap to prune.

use indexmap::IndexMap;
use serde::Serialize;

use crate::algorithm::{SemanticAlgorithm, SyntacticAlgorithm};
use crate::data::{AnchoredOperation, StructuralMap};
use crate::error::{Error, Result};
use crate::iso::{self, GraphView};
use crate::program::{Edge, Program};

// ---------------------------------------------------------------------------
// Provenance

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StateProvenance {
    /// A vertex of the outer graph, kept under its own name.
    Boundary { vertex: String },
    /// An internal state of the component copied in for outer edge `edge`.
    Internal { edge: usize, state: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeProvenance {
    pub outer_edge: usize,
    pub outer_label: String,
    pub component_edge: usize,
}

/// Records where every state and edge of a glued graph came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueTrace {
    pub states: Vec<StateProvenance>,
    pub edges: Vec<EdgeProvenance>,
}

impl GlueTrace {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            match s {
                StateProvenance::Boundary { vertex } => {
                    out.push_str(&format!("state {vertex}: outer vertex\n"));
                }
                StateProvenance::Internal { edge, state } => {
                    out.push_str(&format!(
                        "state e{edge}:{state}: internal to outer edge {edge}\n"
                    ));
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            out.push_str(&format!(
                "edge {i}: copy of edge {} of the `{}` component (outer edge {})\n",
                e.component_edge, e.outer_label, e.outer_edge
            ));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Core construction

/// Glues raw graph views; `comps[i]` is the component for outer edge `i`.
/// Assumes per-component validity was checked by the typed wrappers.
fn glue_views(outer: &GraphView, comps: &[GraphView]) -> (GraphView, GlueTrace) {
    let mut states = outer.states.clone();
    let mut state_prov: Vec<StateProvenance> = outer
        .states
        .iter()
        .map(|v| StateProvenance::Boundary { vertex: v.clone() })
        .collect();
    for (e, comp) in comps.iter().enumerate() {
        for s in &comp.states {
            if *s != comp.initial && *s != comp.terminal {
                states.push(format!("e{e}:{s}"));
                state_prov.push(StateProvenance::Internal { edge: e, state: s.clone() });
            }
        }
    }
    let mut edges = Vec::new();
    let mut edge_prov = Vec::new();
    for (e, comp) in comps.iter().enumerate() {
        let (outer_from, outer_to, outer_label) = &outer.edges[e];
        let place = |s: &str| {
            if s == comp.initial {
                outer_from.clone()
            } else if s == comp.terminal {
                outer_to.clone()
            } else {
                format!("e{e}:{s}")
            }
        };
        for (ce, (f, t, l)) in comp.edges.iter().enumerate() {
            edges.push((place(f), place(t), l.clone()));
            edge_prov.push(EdgeProvenance {
                outer_edge: e,
                outer_label: outer_label.clone(),
                component_edge: ce,
            });
        }
    }
    (
        GraphView {
            states,
            initial: outer.initial.clone(),
            terminal: outer.terminal.clone(),
            edges,
        },
        GlueTrace { states: state_prov, edges: edge_prov },
    )
}

/// Resolves one component per outer edge and rejects components whose
/// endpoints coincide (identifying them would merge outer vertices).
fn resolve<'a, T>(
    outer: &SyntacticAlgorithm,
    components: &'a IndexMap<String, T>,
    endpoints: impl Fn(&T) -> (&str, &str),
) -> Result<Vec<&'a T>> {
    outer.check_shape()?;
    if outer.edges.is_empty() {
        return Err(Error::InvalidGraph(
            "cannot glue along a graph with no edges".into(),
        ));
    }
    let mut out = Vec::with_capacity(outer.edges.len());
    for e in &outer.edges {
        let comp = components
            .get(&e.label)
            .ok_or_else(|| Error::MissingLabel(e.label.clone()))?;
        let (initial, terminal) = endpoints(comp);
        if initial == terminal {
            return Err(Error::InvalidComponent(
                e.label.clone(),
                "component initial and terminal states must differ".into(),
            ));
        }
        out.push(comp);
    }
    Ok(out)
}

/// Predicts the glued `(states, edges)` without building anything.
pub fn expected_counts<T>(
    outer: &SyntacticAlgorithm,
    components: &IndexMap<String, T>,
    size: impl Fn(&T) -> (usize, usize),
) -> Result<(usize, usize)> {
    let mut states = outer.states.len();
    let mut edges = 0;
    for e in &outer.edges {
        let comp = components
            .get(&e.label)
            .ok_or_else(|| Error::MissingLabel(e.label.clone()))?;
        let (s, m) = size(comp);
        states += s - 2;
        edges += m;
    }
    Ok((states, edges))
}

/// Glues programs along `outer`: the result is a program of the components'
/// common model whose behaviour between outer vertices is the components'.
pub fn glue(
    outer: &SyntacticAlgorithm,
    components: &IndexMap<String, Program>,
) -> Result<(Program, GlueTrace)> {
    let comps = resolve(outer, components, |p: &Program| {
        (p.initial.as_str(), p.terminal.as_str())
    })?;
    let model = comps[0].model.clone();
    for (e, p) in outer.edges.iter().zip(&comps) {
        if p.model != model {
            return Err(Error::ModelMismatch(format!(
                "component `{}` runs on model `{}`, expected `{model}`",
                e.label, p.model
            )));
        }
    }
    let views: Vec<GraphView> = comps.iter().map(|p| GraphView::of_program(p)).collect();
    let (view, trace) = glue_views(&GraphView::of_algorithm(outer), &views);
    let edges = view
        .edges
        .into_iter()
        .map(|(f, t, l)| Edge::new(f, t, l))
        .collect();
    let program = Program::new(model, view.states, view.initial, view.terminal, edges)?;
    Ok((program, trace))
}

/// Glues syntactic algorithms; the result's alphabet lists component labels
/// in first-use order.
pub fn glue_syntactic(
    outer: &SyntacticAlgorithm,
    components: &IndexMap<String, SyntacticAlgorithm>,
) -> Result<(SyntacticAlgorithm, GlueTrace)> {
    let comps = resolve(outer, components, |a: &SyntacticAlgorithm| {
        (a.initial.as_str(), a.terminal.as_str())
    })?;
    let views: Vec<GraphView> = comps.iter().map(|a| GraphView::of_algorithm(a)).collect();
    let (view, trace) = glue_views(&GraphView::of_algorithm(outer), &views);
    let mut labels: Vec<String> = Vec::new();
    for (_, _, l) in &view.edges {
        if !labels.contains(l) {
            labels.push(l.clone());
        }
    }
    let edges = view
        .edges
        .into_iter()
        .map(|(f, t, l)| Edge::new(f, t, l))
        .collect();
    let alg = SyntacticAlgorithm::new(view.states, view.initial, view.terminal, labels, edges)?;
    Ok((alg, trace))
}

/// Glues semantic algorithms over one shared structure.  Frames are unioned
/// in outer-edge order; a label used by several components must mean the same
/// anchored operation in each.
pub fn glue_semantic(
    outer: &SyntacticAlgorithm,
    components: &IndexMap<String, SemanticAlgorithm>,
) -> Result<(SemanticAlgorithm, GlueTrace)> {
    let comps = resolve(outer, components, |a: &SemanticAlgorithm| {
        (a.syntax.initial.as_str(), a.syntax.terminal.as_str())
    })?;
    let structure = comps[0].structure.clone();
    let mut frame: Vec<String> = Vec::new();
    let mut meanings: IndexMap<String, AnchoredOperation> = IndexMap::new();
    for (e, comp) in outer.edges.iter().zip(&comps) {
        if comp.structure.name != structure.name {
            return Err(Error::ModelMismatch(format!(
                "component `{}` works over structure `{}`, expected `{}`",
                e.label, comp.structure.name, structure.name
            )));
        }
        for v in &comp.frame {
            if !frame.contains(v) {
                frame.push(v.clone());
            }
        }
        for (label, op) in comp.meanings() {
            match meanings.get(label) {
                None => {
                    meanings.insert(label.to_string(), op.clone());
                }
                Some(prior)
                    if prior.map.name == op.map.name
                        && prior.inputs == op.inputs
                        && prior.outputs == op.outputs => {}
                Some(prior) => {
                    return Err(Error::ConventionViolation(format!(
                        "label `{label}` means `{}` in one component and `{}` in another",
                        prior.instruction_name(),
                        op.instruction_name()
                    )));
                }
            }
        }
    }
    let views: Vec<GraphView> = comps
        .iter()
        .map(|a| GraphView::of_algorithm(&a.syntax))
        .collect();
    let (view, trace) = glue_views(&GraphView::of_algorithm(outer), &views);
    let mut labels: Vec<String> = Vec::new();
    for (_, _, l) in &view.edges {
        if !labels.contains(l) {
            labels.push(l.clone());
        }
    }
    let edges: Vec<Edge> = view
        .edges
        .into_iter()
        .map(|(f, t, l)| Edge::new(f, t, l))
        .collect();
    let syntax = SyntacticAlgorithm::new(view.states, view.initial, view.terminal, labels.clone(), edges)?;
    let used: Vec<(String, AnchoredOperation)> = meanings
        .into_iter()
        .filter(|(l, _)| labels.contains(l))
        .collect();
    let alg = SemanticAlgorithm::new(syntax, structure, frame, used)?;
    Ok((alg, trace))
}

// ---------------------------------------------------------------------------
// Implementation checking and search

/// Does `program` implement `outer` via `components`?  Returns the witness
/// state bijection from the glued graph onto `program` if so.
pub fn check_implements(
    program: &Program,
    outer: &SyntacticAlgorithm,
    components: &IndexMap<String, Program>,
) -> Result<Option<IndexMap<String, String>>> {
    let (glued, _) = glue(outer, components)?;
    if glued.model != program.model {
        return Ok(None);
    }
    Ok(iso::isomorphism(
        &GraphView::of_program(&glued),
        &GraphView::of_program(program),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplementationWitness {
    /// Which library program each outer label was assigned.
    pub assignment: IndexMap<String, String>,
    /// State bijection from the glued graph onto the implementing program.
    pub witness: IndexMap<String, String>,
}

/// Searches assignments of library programs to `outer`'s labels under which
/// `program` implements `outer`.  Assignments are enumerated in label ×
/// library order and pruned by the exact size formulas, so the first match
/// found is deterministic.
pub fn search_implementation(
    program: &Program,
    outer: &SyntacticAlgorithm,
    library: &IndexMap<String, Program>,
) -> Result<Option<ImplementationWitness>> {
    outer.check_shape()?;
    let labels = outer.used_labels();
    if labels.is_empty() {
        return Ok(None);
    }
    let options: Vec<(&String, &Program)> = library
        .iter()
        .filter(|(_, p)| p.initial != p.terminal && p.model == program.model)
        .collect();
    if options.is_empty() {
        return Ok(None);
    }
    let uses: Vec<usize> = labels
        .iter()
        .map(|l| outer.edges.iter().filter(|e| e.label == *l).count())
        .collect();
    let mut pick = vec![0usize; labels.len()];
    loop {
        let states: usize = outer.states.len()
            + pick
                .iter()
                .zip(&uses)
                .map(|(&i, u)| u * (options[i].1.states.len() - 2))
                .sum::<usize>();
        let edges: usize = pick
            .iter()
            .zip(&uses)
            .map(|(&i, u)| u * options[i].1.edges.len())
            .sum();
        if states == program.states.len() && edges == program.edges.len() {
            let components: IndexMap<String, Program> = labels
                .iter()
                .zip(&pick)
                .map(|(l, &i)| (l.clone(), options[i].1.clone()))
                .collect();
            if let Some(witness) = check_implements(program, outer, &components)? {
                let assignment = labels
                    .iter()
                    .zip(&pick)
                    .map(|(l, &i)| (l.clone(), options[i].0.clone()))
                    .collect();
                return Ok(Some(ImplementationWitness { assignment, witness }));
            }
        }
        // Advance the odometer; done once it wraps.
        let mut k = 0;
        loop {
            if k == pick.len() {
                return Ok(None);
            }
            pick[k] += 1;
            if pick[k] < options.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Composes labellings: replaces each outer label's algorithm by the program
/// obtained by glueing its own labels via `psi`.  Glueing is associative in
/// the sense that `glue(outer, compose_labellings(phi, psi))` is isomorphic
/// to `glue(glue_syntactic(outer, phi), psi)`.
pub fn compose_labellings(
    phi: &IndexMap<String, SyntacticAlgorithm>,
    psi: &IndexMap<String, Program>,
) -> Result<IndexMap<String, Program>> {
    phi.iter()
        .map(|(label, alg)| Ok((label.clone(), glue(alg, psi)?.0)))
        .collect()
}

// ---------------------------------------------------------------------------
// Atomic components and recursive unfolding

/// The two-state algorithm whose single edge carries `label`.
pub fn atomic_algorithm(label: &str) -> SyntacticAlgorithm {
    SyntacticAlgorithm::new(
        vec!["i".into(), "t".into()],
        "i",
        "t",
        vec![label.to_string()],
        vec![Edge::new("i", "t", label)],
    )
    .expect("two fixed states and one edge always form a valid graph")
}

/// The two-state program whose single edge carries `instruction`.
pub fn atomic_program(model: &str, instruction: &str) -> Program {
    Program::new(
        model,
        vec!["i".into(), "t".into()],
        "i",
        "t",
        vec![Edge::new("i", "t", instruction)],
    )
    .expect("two fixed states and one edge always form a valid graph")
}

/// The atomic semantic component for one label of `alg`, inheriting its
/// anchored meaning.
pub fn atomic_semantic(alg: &SemanticAlgorithm, label: &str) -> Result<SemanticAlgorithm> {
    let op = alg.meaning(label)?.clone();
    SemanticAlgorithm::new(
        atomic_algorithm(label),
        alg.structure.clone(),
        alg.frame.clone(),
        vec![(label.to_string(), op)],
    )
}

/// The meaning of an unfolding's base layer: defined nowhere, so any run
/// reaching a `bottom` edge cannot take it.
pub fn bottom_operation() -> AnchoredOperation {
    AnchoredOperation::new(StructuralMap::new("bottom", 0, 0, |_| None), vec![], vec![])
        .expect("a nullary anchor always matches a 0 -> 0 map")
}

/// Unfolds `alg` at `label` to the given depth: depth 0 renames `label` to
/// `bottom_label`; each further level glues a copy of `alg` whose `label`
/// edges are replaced by the previous level and whose other edges stay
/// atomic.
pub fn unfold_syntactic(
    alg: &SyntacticAlgorithm,
    label: &str,
    depth: usize,
    bottom_label: &str,
) -> Result<SyntacticAlgorithm> {
    let mut u = alg.relabel(label, bottom_label)?;
    for _ in 0..depth {
        let mut components = IndexMap::new();
        for l in alg.used_labels() {
            let comp = if l == label { u.clone() } else { atomic_algorithm(&l) };
            components.insert(l, comp);
        }
        u = glue_syntactic(alg, &components)?.0;
    }
    Ok(u)
}

/// Semantic counterpart of [`unfold_syntactic`]: the base layer's `bottom`
/// edges mean the nowhere-defined operation, so the unfolding computes
/// exactly the inputs whose recursion tree fits within `depth` levels.
pub fn unfold_semantic(
    alg: &SemanticAlgorithm,
    label: &str,
    depth: usize,
) -> Result<SemanticAlgorithm> {
    let bottom_label = "bottom";
    let syntax = alg.syntax.relabel(label, bottom_label)?;
    let mut meanings: Vec<(String, AnchoredOperation)> = alg
        .meanings()
        .filter(|(l, _)| *l != label)
        .map(|(l, op)| (l.to_string(), op.clone()))
        .collect();
    meanings.push((bottom_label.to_string(), bottom_operation()));
    let mut u = SemanticAlgorithm::new(
        syntax,
        alg.structure.clone(),
        alg.frame.clone(),
        meanings,
    )?;
    for _ in 0..depth {
        let mut components = IndexMap::new();
        for l in alg.syntax.used_labels() {
            let comp = if l == label { u.clone() } else { atomic_semantic(alg, &l)? };
            components.insert(l, comp);
        }
        u = glue_semantic(&alg.syntax, &components)?.0;
    }
    Ok(u)
}
