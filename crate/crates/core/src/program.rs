//! Programs: finite edge-labelled control graphs executed over a model of
//! computation.
//!
//! A program runs from a configuration as a tree of branches — an edge may be
//! taken whenever its instruction is defined — and the run explores that tree
//! breadth first with deduplication of repeated machine states.  The returned
//! trace is the shortest accepting branch (ties broken by edge insertion
//! order); if no branch can ever accept, the run reports either a stuck state
//! or budget exhaustion, depending on whether some branch survives forever.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Config, ModelOfComputation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub label: String,
}

impl Edge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, label: impl Into<String>) -> Edge {
        Edge { from: from.into(), to: to.into(), label: label.into() }
    }
}

/// An edge-labelled control graph with one initial and one terminal state.
/// No edge leaves the terminal state, so acceptance is absorbing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Program {
    pub model: String,
    pub states: Vec<String>,
    pub initial: String,
    pub terminal: String,
    pub edges: Vec<Edge>,
}

impl Program {
    pub fn new(
        model: impl Into<String>,
        states: Vec<String>,
        initial: impl Into<String>,
        terminal: impl Into<String>,
        edges: Vec<Edge>,
    ) -> Result<Program> {
        let program = Program {
            model: model.into(),
            states,
            initial: initial.into(),
            terminal: terminal.into(),
            edges,
        };
        program.check_shape()?;
        Ok(program)
    }

    fn check_shape(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::InvalidGraph("program has no states".into()));
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(Error::InvalidGraph(format!("duplicate state `{s}`")));
            }
        }
        for s in [&self.initial, &self.terminal] {
            if !self.states.contains(s) {
                return Err(Error::InvalidGraph(format!("undeclared state `{s}`")));
            }
        }
        for e in &self.edges {
            if !self.states.contains(&e.from) || !self.states.contains(&e.to) {
                return Err(Error::InvalidGraph(format!(
                    "edge {} -> {} uses an undeclared state",
                    e.from, e.to
                )));
            }
            if e.from == self.terminal {
                return Err(Error::ConventionViolation(format!(
                    "edge leaves the terminal state `{}`",
                    self.terminal
                )));
            }
        }
        Ok(())
    }

    /// Checks every edge label against the model's instruction alphabet.
    pub fn validate_against(&self, model: &ModelOfComputation) -> Result<()> {
        if model.name != self.model {
            return Err(Error::ModelMismatch(format!(
                "program targets `{}` but was given model `{}`",
                self.model, model.name
            )));
        }
        for e in &self.edges {
            if !model.has_instruction(&e.label) {
                return Err(Error::UnknownInstruction(e.label.clone()));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.states.len() + self.edges.len()
    }

    fn out_edges<'a>(&'a self, state: &'a str) -> impl Iterator<Item = (usize, &'a Edge)> + 'a {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.from == state)
    }
}

/// A point of the combined space: configuration plus control state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MachineState {
    pub config: Config,
    pub control: String,
}

/// One step of a trace: the machine state the edge was taken from.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub state: MachineState,
    pub edge: usize,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// Some branch reached the terminal state within budget.
    Terminated { config: Config, steps: usize },
    /// Every branch of the computation tree dies within budget; `state` is
    /// where the first maximal branch (by edge order) dies.
    Stuck { state: MachineState },
    /// Some branch is still live past the budget horizon.
    OutOfBudget,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

impl Trace {
    pub fn terminated(&self) -> Option<(&Config, usize)> {
        match &self.outcome {
            Outcome::Terminated { config, steps } => Some((config, *steps)),
            _ => None,
        }
    }
}

/// All branch successors of a machine state, in edge insertion order.
pub fn step(
    model: &ModelOfComputation,
    program: &Program,
    state: &MachineState,
) -> Result<Vec<(usize, MachineState)>> {
    let mut out = Vec::new();
    for (idx, edge) in program.out_edges(&state.control) {
        if let Some(config) = model.apply(&edge.label, &state.config)? {
            out.push((idx, MachineState { config, control: edge.to.clone() }));
        }
    }
    Ok(out)
}

/// Runs `program` from `x0`, exploring the branch tree breadth first.
///
/// The budget bounds the trace length (number of edges), not the amount of
/// exploration; enlarging it never changes a `Terminated` verdict, only
/// resolves `OutOfBudget` ones.
pub fn run(
    model: &ModelOfComputation,
    program: &Program,
    x0: &Config,
    budget: usize,
) -> Result<Trace> {
    program.validate_against(model)?;
    if !model.space.admits(x0) {
        return Err(Error::ModelMismatch(format!(
            "configuration `{}` is outside the space of model `{}`",
            model.space.render(x0),
            model.name
        )));
    }

    let root = MachineState { config: x0.clone(), control: program.initial.clone() };
    let mut states: Vec<MachineState> = vec![root.clone()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new()];
    let mut seen: HashMap<MachineState, usize> = HashMap::from([(root, 0)]);
    let mut frontier: Vec<usize> = vec![0];
    let mut depth = 0usize;

    loop {
        if let Some(&hit) = frontier.iter().find(|&&n| states[n].control == program.terminal) {
            let mut rev = Vec::new();
            let mut cursor = hit;
            while let Some((p, edge)) = parent[cursor] {
                rev.push(TraceStep { state: states[p].clone(), edge });
                cursor = p;
            }
            rev.reverse();
            return Ok(Trace {
                steps: rev,
                outcome: Outcome::Terminated { config: states[hit].config.clone(), steps: depth },
            });
        }

        let mut next = Vec::new();
        for &n in &frontier {
            for (edge, succ) in step(model, program, &states[n])? {
                let id = match seen.get(&succ) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        states.push(succ.clone());
                        parent.push(Some((n, edge)));
                        succs.push(Vec::new());
                        seen.insert(succ, id);
                        next.push(id);
                        id
                    }
                };
                succs[n].push(id);
            }
        }

        if next.is_empty() {
            // The reachable part of the system is fully explored and contains
            // no terminal state: the run loops forever iff it has a cycle.
            return if has_cycle(&succs) {
                Ok(Trace { steps: leftmost_walk(model, program, &states[0], budget)?, outcome: Outcome::OutOfBudget })
            } else {
                let steps = leftmost_walk(model, program, &states[0], usize::MAX)?;
                let state = steps
                    .last()
                    .map(|s| {
                        let e = &program.edges[s.edge];
                        let config = model.apply(&e.label, &s.state.config).unwrap().unwrap();
                        MachineState { config, control: e.to.clone() }
                    })
                    .unwrap_or_else(|| states[0].clone());
                Ok(Trace { steps, outcome: Outcome::Stuck { state } })
            };
        }
        if depth == budget {
            return Ok(Trace {
                steps: leftmost_walk(model, program, &states[0], budget)?,
                outcome: Outcome::OutOfBudget,
            });
        }
        frontier = next;
        depth += 1;
    }
}

fn has_cycle(succs: &[Vec<usize>]) -> bool {
    // Iterative three-colour depth-first search.
    let mut colour = vec![0u8; succs.len()];
    for start in 0..succs.len() {
        if colour[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        colour[start] = 1;
        while let Some(frame) = stack.last_mut() {
            let (node, cursor) = *frame;
            if cursor < succs[node].len() {
                frame.1 += 1;
                let target = succs[node][cursor];
                match colour[target] {
                    0 => {
                        colour[target] = 1;
                        stack.push((target, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                colour[node] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Follows the first enabled edge from each state, up to `cap` steps; this is
/// the lexicographically first maximal branch of the computation tree.
fn leftmost_walk(
    model: &ModelOfComputation,
    program: &Program,
    root: &MachineState,
    cap: usize,
) -> Result<Vec<TraceStep>> {
    let mut steps = Vec::new();
    let mut current = root.clone();
    while steps.len() < cap && current.control != program.terminal {
        match step(model, program, &current)?.into_iter().next() {
            Some((edge, succ)) => {
                steps.push(TraceStep { state: current, edge });
                current = succ;
            }
            None => break,
        }
    }
    Ok(steps)
}

/// Deterministic single-path execution: always take the first enabled edge.
/// On programs whose determinism report is clean this agrees with [`run`].
pub fn run_deterministic(
    model: &ModelOfComputation,
    program: &Program,
    x0: &Config,
    budget: usize,
) -> Result<Trace> {
    program.validate_against(model)?;
    if !model.space.admits(x0) {
        return Err(Error::ModelMismatch(format!(
            "configuration `{}` is outside the space of model `{}`",
            model.space.render(x0),
            model.name
        )));
    }
    let mut current = MachineState { config: x0.clone(), control: program.initial.clone() };
    let mut steps = Vec::new();
    loop {
        if current.control == program.terminal {
            let count = steps.len();
            return Ok(Trace {
                steps,
                outcome: Outcome::Terminated { config: current.config, steps: count },
            });
        }
        if steps.len() == budget {
            return Ok(Trace { steps, outcome: Outcome::OutOfBudget });
        }
        match step(model, program, &current)?.into_iter().next() {
            Some((edge, succ)) => {
                steps.push(TraceStep { state: current, edge });
                current = succ;
            }
            None => return Ok(Trace { steps, outcome: Outcome::Stuck { state: current } }),
        }
    }
}

/// Re-executes a trace step by step and checks it is a valid branch of the
/// program from `x0` (and, for terminated traces, that it ends where claimed).
pub fn replay(
    model: &ModelOfComputation,
    program: &Program,
    x0: &Config,
    trace: &Trace,
) -> Result<bool> {
    let mut current = MachineState { config: x0.clone(), control: program.initial.clone() };
    for step in &trace.steps {
        if step.state != current {
            return Ok(false);
        }
        let Some(edge) = program.edges.get(step.edge) else {
            return Ok(false);
        };
        if edge.from != current.control {
            return Ok(false);
        }
        match model.apply(&edge.label, &current.config)? {
            Some(config) => current = MachineState { config, control: edge.to.clone() },
            None => return Ok(false),
        }
    }
    match &trace.outcome {
        Outcome::Terminated { config, steps } => Ok(current.control == program.terminal
            && current.config == *config
            && *steps == trace.steps.len()),
        Outcome::Stuck { state } => Ok(*state == current),
        Outcome::OutOfBudget => Ok(true),
    }
}

/// Pairs of out-edge labels at a state that the model cannot certify as
/// domain-disjoint; an empty report means single-path execution is safe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminismReport {
    pub flagged: Vec<(String, String, String)>,
}

impl DeterminismReport {
    pub fn is_clean(&self) -> bool {
        self.flagged.is_empty()
    }
}

pub fn check_local_determinism(
    model: &ModelOfComputation,
    program: &Program,
) -> Result<DeterminismReport> {
    program.validate_against(model)?;
    let mut flagged = Vec::new();
    for state in &program.states {
        let labels: Vec<&str> = program.out_edges(state).map(|(_, e)| e.label.as_str()).collect();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                if !model.known_disjoint(labels[i], labels[j]) {
                    let (a, b) = if labels[i] <= labels[j] {
                        (labels[i], labels[j])
                    } else {
                        (labels[j], labels[i])
                    };
                    let entry = (state.clone(), a.to_string(), b.to_string());
                    if !flagged.contains(&entry) {
                        flagged.push(entry);
                    }
                }
            }
        }
    }
    Ok(DeterminismReport { flagged })
}

/// Renders an edge-labelled control graph in DOT, with an arrow into the
/// initial state and a double circle on the terminal one.
pub fn dot_graph(
    title: &str,
    states: &[String],
    initial: &str,
    terminal: &str,
    edges: &[Edge],
) -> String {
    fn esc(s: &str) -> String {
        s.replace('\\', "\\\\").replace('"', "\\\"")
    }
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", esc(title)));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    out.push_str("  \"__start\" [shape=none, label=\"\"];\n");
    for s in states {
        if s == terminal {
            out.push_str(&format!("  \"{}\" [shape=doublecircle];\n", esc(s)));
        } else {
            out.push_str(&format!("  \"{}\";\n", esc(s)));
        }
    }
    out.push_str(&format!("  \"__start\" -> \"{}\";\n", esc(initial)));
    for e in edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            esc(&e.from),
            esc(&e.to),
            esc(&e.label)
        ));
    }
    out.push_str("}\n");
    out
}

pub fn program_dot(program: &Program, title: &str) -> String {
    dot_graph(title, &program.states, &program.initial, &program.terminal, &program.edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tm_model;
    use crate::tape::Tape;

    fn tape(lit: &str) -> Config {
        Config::Tape(Tape::parse(lit).unwrap())
    }

    fn blank() -> Config {
        Config::Tape(Tape::blank())
    }

    fn prog(states: &[&str], initial: &str, terminal: &str, edges: &[(&str, &str, &str)]) -> Program {
        Program::new(
            "tm",
            states.iter().map(|s| s.to_string()).collect(),
            initial,
            terminal,
            edges.iter().map(|(f, t, l)| Edge::new(*f, *t, *l)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn convention_rejects_edges_from_terminal() {
        let bad = Program::new(
            "tm",
            vec!["i".into(), "t".into()],
            "i",
            "t",
            vec![Edge::new("t", "i", "right")],
        );
        assert!(matches!(bad, Err(Error::ConventionViolation(_))));
    }

    #[test]
    fn immediate_termination_when_initial_is_terminal() {
        let p = prog(&["s"], "s", "s", &[]);
        let trace = run(&tm_model(), &p, &blank(), 10).unwrap();
        assert!(trace.steps.is_empty());
        let (config, steps) = trace.terminated().unwrap();
        assert_eq!(steps, 0);
        assert_eq!(config, &blank());
    }

    #[test]
    fn shortest_branch_wins() {
        // Two accepting branches: a detour of length 2 declared first and a
        // direct edge declared second.  The shorter one must win.
        let p = prog(
            &["i", "mid", "t"],
            "i",
            "t",
            &[("i", "mid", "write_1"), ("mid", "t", "write_1"), ("i", "t", "write_0")],
        );
        let trace = run(&tm_model(), &p, &blank(), 10).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].edge, 2);
        let (config, steps) = trace.terminated().unwrap();
        assert_eq!(steps, 1);
        assert_eq!(config, &tape("0"));
        assert!(replay(&tm_model(), &p, &blank(), &trace).unwrap());
    }

    #[test]
    fn equal_length_ties_break_by_edge_order() {
        let p = prog(
            &["i", "a", "b", "t"],
            "i",
            "t",
            &[("i", "a", "write_1"), ("i", "b", "write_0"), ("a", "t", "right"), ("b", "t", "right")],
        );
        let trace = run(&tm_model(), &p, &blank(), 10).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].edge, 0, "first declared branch wins the tie");
        let (config, _) = trace.terminated().unwrap();
        // write_1 then right: content `1` now sits at position 1.
        assert_eq!(config, &tape("*1"));
    }

    #[test]
    fn stuck_reports_the_first_maximal_branch() {
        // Both branches die; the first one (edge order) dies at state `a`.
        let p = prog(
            &["i", "a", "b", "t"],
            "i",
            "t",
            &[("i", "a", "write_1"), ("i", "b", "write_0"), ("a", "t", "read_0"), ("b", "t", "read_1")],
        );
        let trace = run(&tm_model(), &p, &blank(), 10).unwrap();
        match &trace.outcome {
            Outcome::Stuck { state } => {
                assert_eq!(state.control, "a");
                assert_eq!(state.config, tape("1"));
            }
            other => panic!("expected Stuck, got {other:?}"),
        }
        assert_eq!(trace.steps.len(), 1);
        assert!(replay(&tm_model(), &p, &blank(), &trace).unwrap());
    }

    #[test]
    fn cycles_exhaust_the_budget() {
        // Every right shift yields a fresh configuration, so this run really
        // explores out to the horizon before giving up.
        let p = prog(&["i", "t"], "i", "t", &[("i", "i", "right")]);
        let trace = run(&tm_model(), &p, &tape("101"), 50).unwrap();
        assert!(matches!(trace.outcome, Outcome::OutOfBudget));
        let tight = run(&tm_model(), &p, &tape("101"), 3).unwrap();
        assert!(matches!(tight.outcome, Outcome::OutOfBudget));
    }

    #[test]
    fn looping_on_the_spot_is_caught_early() {
        // read_1 loops without changing the configuration: one machine state,
        // one self-loop.  Detected as a cycle immediately, any budget.
        let p = prog(&["i", "t"], "i", "t", &[("i", "i", "read_1")]);
        let trace = run(&tm_model(), &p, &tape("1"), 1_000_000).unwrap();
        assert!(matches!(trace.outcome, Outcome::OutOfBudget));
    }

    #[test]
    fn budget_monotonicity() {
        let p = prog(
            &["i", "a", "t"],
            "i",
            "t",
            &[("i", "a", "write_1"), ("a", "t", "right")],
        );
        let at = run(&tm_model(), &p, &blank(), 2).unwrap();
        let above = run(&tm_model(), &p, &blank(), 2000).unwrap();
        assert_eq!(at.terminated().map(|(c, n)| (c.clone(), n)), above.terminated().map(|(c, n)| (c.clone(), n)));
        let below = run(&tm_model(), &p, &blank(), 1).unwrap();
        assert!(matches!(below.outcome, Outcome::OutOfBudget));
    }

    #[test]
    fn determinism_report_trusts_only_read_guards() {
        let clean = prog(
            &["i", "a", "b", "t"],
            "i",
            "t",
            &[("i", "a", "read_0"), ("i", "b", "read_1"), ("a", "t", "write_1"), ("b", "t", "write_0")],
        );
        assert!(check_local_determinism(&tm_model(), &clean).unwrap().is_clean());

        let dirty = prog(
            &["i", "t"],
            "i",
            "t",
            &[("i", "t", "write_1"), ("i", "t", "write_1"), ("i", "t", "read_0")],
        );
        let report = check_local_determinism(&tm_model(), &dirty).unwrap();
        assert_eq!(
            report.flagged,
            vec![
                ("i".to_string(), "write_1".to_string(), "write_1".to_string()),
                ("i".to_string(), "read_0".to_string(), "write_1".to_string()),
            ]
        );
    }

    #[test]
    fn deterministic_runner_agrees_on_clean_programs() {
        let p = prog(
            &["i", "a", "b", "t"],
            "i",
            "t",
            &[("i", "a", "read_0"), ("i", "b", "read_1"), ("a", "t", "write_1"), ("b", "t", "write_0")],
        );
        for input in ["^0", "^1"] {
            let bfs = run(&tm_model(), &p, &tape(input), 10).unwrap();
            let single = run_deterministic(&tm_model(), &p, &tape(input), 10).unwrap();
            assert_eq!(
                bfs.terminated().map(|(c, n)| (c.clone(), n)),
                single.terminated().map(|(c, n)| (c.clone(), n))
            );
            assert_eq!(
                bfs.steps.iter().map(|s| s.edge).collect::<Vec<_>>(),
                single.steps.iter().map(|s| s.edge).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn dot_output_shape() {
        let p = prog(&["i", "t"], "i", "t", &[("i", "t", "write_1")]);
        let dot = program_dot(&p, "tiny");
        assert_eq!(dot.matches(" -> ").count(), 2, "start arrow plus one edge");
        assert!(dot.contains("\"i\" -> \"t\" [label=\"write_1\"];"));
        assert!(dot.contains("\"t\" [shape=doublecircle];"));
        assert!(dot.starts_with("digraph \"tiny\" {"));
    }

    #[test]
    fn wrong_space_is_a_model_mismatch() {
        let p = prog(&["i", "t"], "i", "t", &[("i", "t", "write_1")]);
        let env = Config::Env(
            crate::data::Environment::new(vec![("x".into(), crate::value::Value::Nat(1))]).unwrap(),
        );
        assert!(matches!(run(&tm_model(), &p, &env, 5), Err(Error::ModelMismatch(_))));
    }
}
