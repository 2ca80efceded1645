//! Algorithms: control graphs whose edges carry abstract labels rather than
//! instructions.
//!
//! A syntactic algorithm fixes only the graph and the label alphabet.  Giving
//! each label a meaning — a structural map anchored to variables of a frame —
//! yields a semantic algorithm, which can be run directly: its labels become
//! the instructions of a model induced on environments over the frame.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::data::{induced_model, AbstractDataStructure, AnchoredOperation, Environment};
use crate::error::{Error, Result};
use crate::model::{Config, ModelOfComputation};
use crate::program::{dot_graph, run, Edge, Program, Trace};

/// An edge-labelled control graph over a declared label alphabet.  The
/// alphabet may include labels no edge uses; every used label must be
/// declared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntacticAlgorithm {
    pub states: Vec<String>,
    pub initial: String,
    pub terminal: String,
    pub labels: Vec<String>,
    pub edges: Vec<Edge>,
}

impl SyntacticAlgorithm {
    pub fn new(
        states: Vec<String>,
        initial: impl Into<String>,
        terminal: impl Into<String>,
        labels: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<SyntacticAlgorithm> {
        let alg = SyntacticAlgorithm {
            states,
            initial: initial.into(),
            terminal: terminal.into(),
            labels,
            edges,
        };
        alg.check_shape()?;
        Ok(alg)
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::InvalidGraph("algorithm has no states".into()));
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(Error::InvalidGraph(format!("duplicate state `{s}`")));
            }
        }
        for (i, l) in self.labels.iter().enumerate() {
            if self.labels[..i].contains(l) {
                return Err(Error::InvalidGraph(format!("duplicate label `{l}`")));
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
            if !self.labels.contains(&e.label) {
                return Err(Error::InvalidGraph(format!("undeclared label `{}`", e.label)));
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

    pub fn size(&self) -> usize {
        self.states.len() + self.edges.len()
    }

    /// Labels that actually occur on edges, in first-use order.
    pub fn used_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.edges {
            if !out.contains(&e.label) {
                out.push(e.label.clone());
            }
        }
        out
    }

    /// Renames every `from` edge label to `to`, adjusting the alphabet.
    pub fn relabel(&self, from: &str, to: &str) -> Result<SyntacticAlgorithm> {
        if !self.labels.iter().any(|l| l == from) {
            return Err(Error::MissingLabel(from.to_string()));
        }
        let mut labels: Vec<String> = self
            .labels
            .iter()
            .filter(|l| *l != from)
            .cloned()
            .collect();
        if !labels.contains(&to.to_string()) {
            labels.push(to.to_string());
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let label = if e.label == from { to.to_string() } else { e.label.clone() };
                Edge { from: e.from.clone(), to: e.to.clone(), label }
            })
            .collect();
        SyntacticAlgorithm::new(
            self.states.clone(),
            self.initial.clone(),
            self.terminal.clone(),
            labels,
            edges,
        )
    }

    pub fn to_dot(&self, title: &str) -> String {
        dot_graph(title, &self.states, &self.initial, &self.terminal, &self.edges)
    }
}

/// A syntactic algorithm refined with a meaning for every label: a structural
/// map of one structure, anchored to variables of a shared frame.
#[derive(Clone, Debug)]
pub struct SemanticAlgorithm {
    pub syntax: SyntacticAlgorithm,
    pub structure: AbstractDataStructure,
    pub frame: Vec<String>,
    meanings: IndexMap<String, AnchoredOperation>,
}

impl SemanticAlgorithm {
    pub fn new(
        syntax: SyntacticAlgorithm,
        structure: AbstractDataStructure,
        frame: Vec<String>,
        meanings: Vec<(String, AnchoredOperation)>,
    ) -> Result<SemanticAlgorithm> {
        syntax.check_shape()?;
        for (i, v) in frame.iter().enumerate() {
            if frame[..i].contains(v) {
                return Err(Error::FrameMismatch(format!("duplicate frame variable `{v}`")));
            }
        }
        let mut table = IndexMap::new();
        for (label, op) in meanings {
            if !syntax.labels.contains(&label) {
                return Err(Error::InvalidGraph(format!(
                    "meaning given for undeclared label `{label}`"
                )));
            }
            for v in op.inputs.iter().chain(op.outputs.iter()) {
                if !frame.contains(v) {
                    return Err(Error::UnknownVariable(format!(
                        "{v} (meaning of `{label}` reaches outside the frame)"
                    )));
                }
            }
            table.insert(label, op);
        }
        for label in &syntax.labels {
            if !table.contains_key(label) {
                return Err(Error::MissingLabel(label.clone()));
            }
        }
        Ok(SemanticAlgorithm { syntax, structure, frame, meanings: table })
    }

    pub fn meaning(&self, label: &str) -> Result<&AnchoredOperation> {
        self.meanings
            .get(label)
            .ok_or_else(|| Error::MissingLabel(label.to_string()))
    }

    pub fn meanings(&self) -> impl Iterator<Item = (&str, &AnchoredOperation)> {
        self.meanings.iter().map(|(l, op)| (l.as_str(), op))
    }

    /// The model whose instructions are this algorithm's label meanings.
    pub fn induced_model(&self) -> Result<ModelOfComputation> {
        let ops: Vec<AnchoredOperation> = self.meanings.values().cloned().collect();
        induced_model(&self.structure, &self.frame, &ops)
    }

    /// The algorithm as a runnable program over its induced model: same
    /// graph, each label replaced by its anchored instruction.
    pub fn program_view(&self) -> Result<(ModelOfComputation, Program)> {
        let model = self.induced_model()?;
        let edges = self
            .syntax
            .edges
            .iter()
            .map(|e| {
                let op = self.meaning(&e.label)?;
                Ok(Edge::new(e.from.clone(), e.to.clone(), op.instruction_name()))
            })
            .collect::<Result<Vec<Edge>>>()?;
        let program = Program::new(
            model.name.clone(),
            self.syntax.states.clone(),
            self.syntax.initial.clone(),
            self.syntax.terminal.clone(),
            edges,
        )?;
        Ok((model, program))
    }
}

/// Runs a semantic algorithm from an environment over its frame.
pub fn abstract_run(alg: &SemanticAlgorithm, env: &Environment, budget: usize) -> Result<Trace> {
    let (model, program) = alg.program_view()?;
    run(&model, &program, &Config::Env(env.clone()), budget)
}
