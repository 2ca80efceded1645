//! Isomorphism of labelled control graphs.
//!
//! Two programs (or syntactic algorithms) are considered the same object when
//! a bijection on states preserves the initial state, the terminal state, and
//! the labelled edge multiset.  [`isomorphism`] produces such a bijection or
//! `None`; it is exact, not a heuristic, so a `Some` answer always carries a
//! checkable witness.

use std::collections::BTreeMap;

use indexmap::IndexMap;

use crate::algorithm::SyntacticAlgorithm;
use crate::program::Program;

/// The label-graph skeleton shared by programs and syntactic algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphView {
    pub states: Vec<String>,
    pub initial: String,
    pub terminal: String,
    /// `(from, to, label)` with multiplicity.
    pub edges: Vec<(String, String, String)>,
}

impl GraphView {
    pub fn of_program(program: &Program) -> GraphView {
        GraphView {
            states: program.states.clone(),
            initial: program.initial.clone(),
            terminal: program.terminal.clone(),
            edges: program
                .edges
                .iter()
                .map(|e| (e.from.clone(), e.to.clone(), e.label.clone()))
                .collect(),
        }
    }

    pub fn of_algorithm(alg: &SyntacticAlgorithm) -> GraphView {
        GraphView {
            states: alg.states.clone(),
            initial: alg.initial.clone(),
            terminal: alg.terminal.clone(),
            edges: alg
                .edges
                .iter()
                .map(|e| (e.from.clone(), e.to.clone(), e.label.clone()))
                .collect(),
        }
    }
}

/// Per-state fingerprint that any isomorphism must preserve.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    is_initial: bool,
    is_terminal: bool,
    out_labels: BTreeMap<String, usize>,
    in_labels: BTreeMap<String, usize>,
}

struct Side {
    index: IndexMap<String, usize>,
    signatures: Vec<Signature>,
    /// Labelled edge multiplicities per ordered state pair.
    pairs: BTreeMap<(usize, usize), BTreeMap<String, usize>>,
    /// For each state, the states it touches by an edge in either direction.
    neighbours: Vec<Vec<usize>>,
}

impl Side {
    fn build(view: &GraphView) -> Side {
        let index: IndexMap<String, usize> = view
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let n = view.states.len();
        let mut signatures: Vec<Signature> = view
            .states
            .iter()
            .map(|s| Signature {
                is_initial: *s == view.initial,
                is_terminal: *s == view.terminal,
                out_labels: BTreeMap::new(),
                in_labels: BTreeMap::new(),
            })
            .collect();
        let mut pairs: BTreeMap<(usize, usize), BTreeMap<String, usize>> = BTreeMap::new();
        let mut neighbours = vec![Vec::new(); n];
        for (from, to, label) in &view.edges {
            let (f, t) = (index[from], index[to]);
            *signatures[f].out_labels.entry(label.clone()).or_default() += 1;
            *signatures[t].in_labels.entry(label.clone()).or_default() += 1;
            *pairs.entry((f, t)).or_default().entry(label.clone()).or_default() += 1;
            if !neighbours[f].contains(&t) {
                neighbours[f].push(t);
            }
            if !neighbours[t].contains(&f) {
                neighbours[t].push(f);
            }
        }
        Side { index, signatures, pairs, neighbours }
    }

    fn labels_between(&self, from: usize, to: usize) -> Option<&BTreeMap<String, usize>> {
        self.pairs.get(&(from, to))
    }
}

fn same_labels(a: Option<&BTreeMap<String, usize>>, b: Option<&BTreeMap<String, usize>>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(m), None) | (None, Some(m)) => m.is_empty(),
        (Some(m), Some(n)) => m == n,
    }
}

/// Finds a state bijection witnessing that `a` and `b` are the same labelled
/// control graph, or returns `None` when no such bijection exists.
pub fn isomorphism(a: &GraphView, b: &GraphView) -> Option<IndexMap<String, String>> {
    if a.states.len() != b.states.len() || a.edges.len() != b.edges.len() {
        return None;
    }
    if (a.initial == a.terminal) != (b.initial == b.terminal) {
        return None;
    }
    let mut labels_a: Vec<&str> = a.edges.iter().map(|(_, _, l)| l.as_str()).collect();
    let mut labels_b: Vec<&str> = b.edges.iter().map(|(_, _, l)| l.as_str()).collect();
    labels_a.sort_unstable();
    labels_b.sort_unstable();
    if labels_a != labels_b {
        return None;
    }

    let sa = Side::build(a);
    let sb = Side::build(b);
    let mut sig_multiset_a = sa.signatures.clone();
    let mut sig_multiset_b = sb.signatures.clone();
    sig_multiset_a.sort();
    sig_multiset_b.sort();
    if sig_multiset_a != sig_multiset_b {
        return None;
    }

    let n = a.states.len();
    // Assign the pinned endpoints first, then states by descending degree so
    // contradictions surface early.
    let mut order: Vec<usize> = (0..n).collect();
    let degree = |side: &Side, i: usize| {
        side.signatures[i].out_labels.values().sum::<usize>()
            + side.signatures[i].in_labels.values().sum::<usize>()
    };
    order.sort_by_key(|&i| {
        let pinned = sa.signatures[i].is_initial || sa.signatures[i].is_terminal;
        (!pinned, std::cmp::Reverse(degree(&sa, i)), i)
    });

    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used: Vec<bool> = vec![false; n];

    fn consistent(sa: &Side, sb: &Side, map: &[Option<usize>], i: usize, j: usize) -> bool {
        if sa.signatures[i] != sb.signatures[j] {
            return false;
        }
        // Self-loops, then every already-assigned neighbour, both directions.
        if !same_labels(sa.labels_between(i, i), sb.labels_between(j, j)) {
            return false;
        }
        for &k in &sa.neighbours[i] {
            if k == i {
                continue;
            }
            if let Some(jk) = map[k] {
                if !same_labels(sa.labels_between(i, k), sb.labels_between(j, jk))
                    || !same_labels(sa.labels_between(k, i), sb.labels_between(jk, j))
                {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        sa: &Side,
        sb: &Side,
        order: &[usize],
        depth: usize,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&i) = order.get(depth) else {
            return true;
        };
        for j in 0..used.len() {
            if used[j] || !consistent(sa, sb, map, i, j) {
                continue;
            }
            map[i] = Some(j);
            used[j] = true;
            if search(sa, sb, order, depth + 1, map, used) {
                return true;
            }
            map[i] = None;
            used[j] = false;
        }
        false
    }

    if !search(&sa, &sb, &order, 0, &mut map, &mut used) {
        return None;
    }
    let names_b: Vec<&String> = sb.index.keys().collect();
    Some(
        a.states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), names_b[map[i].unwrap()].clone()))
            .collect(),
    )
}

pub fn isomorphic(a: &GraphView, b: &GraphView) -> bool {
    isomorphism(a, b).is_some()
}

/// Checks that `mapping` really witnesses an isomorphism; used to audit
/// answers from [`isomorphism`] independently of its search.
pub fn verify_witness(a: &GraphView, b: &GraphView, mapping: &IndexMap<String, String>) -> bool {
    if mapping.len() != a.states.len() || a.states.len() != b.states.len() {
        return false;
    }
    let mut seen: Vec<&String> = mapping.values().collect();
    seen.sort();
    seen.dedup();
    if seen.len() != b.states.len() || !b.states.iter().all(|s| seen.binary_search(&s).is_ok()) {
        return false;
    }
    if mapping.get(&a.initial) != Some(&b.initial) || mapping.get(&a.terminal) != Some(&b.terminal)
    {
        return false;
    }
    let mut mapped: Vec<(String, String, String)> = a
        .edges
        .iter()
        .map(|(f, t, l)| (mapping[f].clone(), mapping[t].clone(), l.clone()))
        .collect();
    let mut target = b.edges.clone();
    mapped.sort();
    target.sort();
    mapped == target
}
