//! Universal quantifier-free theories and sampled model checking.
//!
//! A theory is a first-order signature plus sentences of the form
//! `forall vars. body` with a quantifier-free body.  Interpretation is
//! strict about partiality: a term with an undefined subterm denotes nothing,
//! an equality holds only when both sides denote and agree, and a relation
//! atom holds exactly when its guard map is defined on the (fully denoting)
//! argument tuple.
//!
//! [`check_model`] samples variable assignments with one independent stream
//! per `(sentence, sample index)` pair, so a counterexample found at some
//! sample count is found again at every larger count under the same seed,
//! and the parallel and sequential sweeps agree bit for bit.

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algorithm::{SemanticAlgorithm, SyntacticAlgorithm};
use crate::data::{AbstractDataStructure, AnchoredOperation, DomainKind};
use crate::error::{Error, Result};
use crate::par::map_items;
use crate::value::Value;

// ---------------------------------------------------------------------------
// Syntax

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogicalSignature {
    pub functions: IndexMap<String, usize>,
    pub relations: IndexMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

/// `forall vars. body`, with `body` quantifier-free and closed by `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub vars: Vec<String>,
    pub body: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: LogicalSignature,
    pub sentences: Vec<Sentence>,
}

impl Theory {
    pub fn new(
        name: impl Into<String>,
        signature: LogicalSignature,
        sentences: Vec<Sentence>,
    ) -> Result<Theory> {
        let theory = Theory { name: name.into(), signature, sentences };
        for s in &theory.sentences {
            check_sentence(&theory.signature, s)?;
        }
        Ok(theory)
    }
}

fn check_sentence(sig: &LogicalSignature, sentence: &Sentence) -> Result<()> {
    fn check_term(sig: &LogicalSignature, vars: &[String], term: &Term) -> Result<()> {
        match term {
            Term::Var(v) => {
                if vars.contains(v) {
                    Ok(())
                } else {
                    Err(Error::UnknownVariable(format!("{v} is not quantified")))
                }
            }
            Term::App(f, args) => {
                let arity = sig
                    .functions
                    .get(f)
                    .ok_or_else(|| Error::UnboundSymbol(f.clone()))?;
                if args.len() != *arity {
                    return Err(Error::ArityMismatch(format!(
                        "function `{f}` has arity {arity}, applied to {}",
                        args.len()
                    )));
                }
                args.iter().try_for_each(|t| check_term(sig, vars, t))
            }
        }
    }
    fn check_formula(sig: &LogicalSignature, vars: &[String], f: &Formula) -> Result<()> {
        match f {
            Formula::Eq(a, b) => {
                check_term(sig, vars, a)?;
                check_term(sig, vars, b)
            }
            Formula::Rel(r, args) => {
                let arity = sig
                    .relations
                    .get(r)
                    .ok_or_else(|| Error::UnboundSymbol(r.clone()))?;
                if args.len() != *arity {
                    return Err(Error::ArityMismatch(format!(
                        "relation `{r}` has arity {arity}, applied to {}",
                        args.len()
                    )));
                }
                args.iter().try_for_each(|t| check_term(sig, vars, t))
            }
            Formula::Not(g) => check_formula(sig, vars, g),
            Formula::And(gs) | Formula::Or(gs) => {
                gs.iter().try_for_each(|g| check_formula(sig, vars, g))
            }
            Formula::Implies(a, b) => {
                check_formula(sig, vars, a)?;
                check_formula(sig, vars, b)
            }
        }
    }
    for (i, v) in sentence.vars.iter().enumerate() {
        if sentence.vars[..i].contains(v) {
            return Err(Error::Parse(format!("variable `{v}` quantified twice")));
        }
    }
    check_formula(sig, &sentence.vars, &sentence.body)
}

// ---------------------------------------------------------------------------
// Bindings and evaluation

/// Maps every signature symbol to the name of a structural map: functions to
/// maps `D^k -> D`, relations to guards `D^k -> D^k`.  Extra entries are
/// ignored, which lets one binding serve several theories and structures.
pub type SymbolBinding = IndexMap<String, String>;

pub fn check_binding(
    structure: &AbstractDataStructure,
    theory: &Theory,
    binding: &SymbolBinding,
) -> Result<()> {
    for (symbol, arity) in &theory.signature.functions {
        let target = binding
            .get(symbol)
            .ok_or_else(|| Error::UnboundSymbol(symbol.clone()))?;
        let map = structure.map(target)?;
        if map.dom != *arity || map.im != 1 {
            return Err(Error::ArityMismatch(format!(
                "function `{symbol}`/{arity} bound to `{target}`: {} -> {}",
                map.dom, map.im
            )));
        }
    }
    for (symbol, arity) in &theory.signature.relations {
        let target = binding
            .get(symbol)
            .ok_or_else(|| Error::UnboundSymbol(symbol.clone()))?;
        let map = structure.map(target)?;
        if map.dom != *arity || map.im != *arity {
            return Err(Error::ArityMismatch(format!(
                "relation `{symbol}`/{arity} bound to `{target}`: {} -> {}",
                map.dom, map.im
            )));
        }
    }
    Ok(())
}

fn eval_term(
    structure: &AbstractDataStructure,
    binding: &SymbolBinding,
    assignment: &[(String, Value)],
    term: &Term,
) -> Result<Option<Value>> {
    match term {
        Term::Var(v) => Ok(assignment.iter().find(|(n, _)| n == v).map(|(_, x)| x.clone())),
        Term::App(f, args) => {
            let mut points = Vec::with_capacity(args.len());
            for a in args {
                match eval_term(structure, binding, assignment, a)? {
                    Some(v) => points.push(v),
                    None => return Ok(None),
                }
            }
            let map = structure.map(&binding[f])?;
            Ok(map.apply(&points)?.map(|mut out| out.remove(0)))
        }
    }
}

fn eval_formula(
    structure: &AbstractDataStructure,
    binding: &SymbolBinding,
    assignment: &[(String, Value)],
    formula: &Formula,
) -> Result<bool> {
    match formula {
        Formula::Eq(a, b) => {
            let left = eval_term(structure, binding, assignment, a)?;
            let right = eval_term(structure, binding, assignment, b)?;
            Ok(matches!((left, right), (Some(x), Some(y)) if x == y))
        }
        Formula::Rel(r, args) => {
            let mut points = Vec::with_capacity(args.len());
            for a in args {
                match eval_term(structure, binding, assignment, a)? {
                    Some(v) => points.push(v),
                    None => return Ok(false),
                }
            }
            let map = structure.map(&binding[r])?;
            Ok(map.apply(&points)?.is_some())
        }
        Formula::Not(g) => Ok(!eval_formula(structure, binding, assignment, g)?),
        Formula::And(gs) => {
            for g in gs {
                if !eval_formula(structure, binding, assignment, g)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_formula(structure, binding, assignment, g)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Implies(a, b) => Ok(!eval_formula(structure, binding, assignment, a)?
            || eval_formula(structure, binding, assignment, b)?),
    }
}

// ---------------------------------------------------------------------------
// Model checking

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    /// Sample index at which the assignment was drawn; stable across sample
    /// counts and across the parallel/sequential sweeps.
    pub index: usize,
    pub assignment: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SentenceReport {
    pub sentence: String,
    pub samples: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelCheckReport {
    pub structure: String,
    pub theory: String,
    pub sentences: Vec<SentenceReport>,
}

impl ModelCheckReport {
    pub fn no_counterexamples(&self) -> bool {
        self.sentences.iter().all(|s| s.counterexample.is_none())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "theory `{}` over structure `{}`\n",
            self.theory, self.structure
        ));
        for s in &self.sentences {
            match &s.counterexample {
                None => out.push_str(&format!("  ok   ({} samples)  {}\n", s.samples, s.sentence)),
                Some(c) => {
                    let binds: Vec<String> =
                        c.assignment.iter().map(|(v, x)| format!("{v} = {x}")).collect();
                    out.push_str(&format!(
                        "  FAIL (sample {})   {}   with {}\n",
                        c.index,
                        s.sentence,
                        binds.join(", ")
                    ));
                }
            }
        }
        out
    }
}

fn magnitude_bound(kind: &DomainKind) -> u64 {
    match kind {
        DomainKind::Bool => 1,
        DomainKind::Nat => 100,
        DomainKind::NatList => 12,
        DomainKind::Gf2Poly => 63,
        DomainKind::Pair(a, b) => magnitude_bound(a).max(magnitude_bound(b)),
    }
}

/// Checks every sentence of `theory` against `structure` under `binding` on
/// `samples` pseudo-random assignments per sentence.  Sampling is seeded per
/// `(sentence, index)` so reports are reproducible and monotone in `samples`.
pub fn check_model(
    structure: &AbstractDataStructure,
    theory: &Theory,
    binding: &SymbolBinding,
    samples: usize,
    seed: u64,
) -> Result<ModelCheckReport> {
    check_binding(structure, theory, binding)?;
    let bound = magnitude_bound(&structure.domain.kind);
    let mut sentences = Vec::with_capacity(theory.sentences.len());
    for (si, sentence) in theory.sentences.iter().enumerate() {
        let verdicts: Vec<Result<Option<Counterexample>>> = map_items(
            (0..samples).collect(),
            |index| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((si as u64) << 32) | index as u64);
                let assignment: Vec<(String, Value)> = sentence
                    .vars
                    .iter()
                    .map(|v| (v.clone(), structure.domain.sample(&mut rng, bound)))
                    .collect();
                match eval_formula(structure, binding, &assignment, &sentence.body) {
                    Ok(true) => Ok(None),
                    Ok(false) => Ok(Some(Counterexample {
                        index,
                        assignment: assignment
                            .iter()
                            .map(|(v, x)| (v.clone(), x.render()))
                            .collect(),
                    })),
                    Err(e) => Err(e),
                }
            },
        );
        let mut counterexample = None;
        for v in verdicts {
            if let Some(c) = v? {
                counterexample = Some(c);
                break;
            }
        }
        sentences.push(SentenceReport {
            sentence: render_sentence(sentence),
            samples,
            counterexample,
        });
    }
    Ok(ModelCheckReport {
        structure: structure.name.clone(),
        theory: theory.name.clone(),
        sentences,
    })
}

// ---------------------------------------------------------------------------
// Logical algorithms

/// Anchors a signature symbol to frame variables, the logical counterpart of
/// an [`AnchoredOperation`]: functions read `inputs` and write one output,
/// relations guard `inputs` (and write them back unchanged).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolAnchor {
    pub symbol: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

/// A control graph whose labels mean anchored *symbols* of a theory; any
/// structure modelling the theory turns it into a semantic algorithm.
#[derive(Clone, Debug)]
pub struct LogicalAlgorithm {
    pub syntax: SyntacticAlgorithm,
    pub theory: Theory,
    pub frame: Vec<String>,
    meanings: IndexMap<String, SymbolAnchor>,
}

impl LogicalAlgorithm {
    pub fn new(
        syntax: SyntacticAlgorithm,
        theory: Theory,
        frame: Vec<String>,
        meanings: Vec<(String, SymbolAnchor)>,
    ) -> Result<LogicalAlgorithm> {
        syntax.check_shape()?;
        let mut table = IndexMap::new();
        for (label, anchor) in meanings {
            if !syntax.labels.contains(&label) {
                return Err(Error::InvalidGraph(format!(
                    "meaning given for undeclared label `{label}`"
                )));
            }
            for v in anchor.inputs.iter().chain(anchor.outputs.iter()) {
                if !frame.contains(v) {
                    return Err(Error::UnknownVariable(v.clone()));
                }
            }
            if let Some(arity) = theory.signature.functions.get(&anchor.symbol) {
                if anchor.inputs.len() != *arity || anchor.outputs.len() != 1 {
                    return Err(Error::ArityMismatch(format!(
                        "label `{label}` anchors function `{}`/{arity} to ({}) -> ({})",
                        anchor.symbol,
                        anchor.inputs.join(","),
                        anchor.outputs.join(",")
                    )));
                }
            } else if let Some(arity) = theory.signature.relations.get(&anchor.symbol) {
                if anchor.inputs.len() != *arity || anchor.outputs != anchor.inputs {
                    return Err(Error::ArityMismatch(format!(
                        "label `{label}` must guard `{}`/{arity} in place",
                        anchor.symbol
                    )));
                }
            } else {
                return Err(Error::UnboundSymbol(anchor.symbol.clone()));
            }
            table.insert(label, anchor);
        }
        for label in &syntax.labels {
            if !table.contains_key(label) {
                return Err(Error::MissingLabel(label.clone()));
            }
        }
        Ok(LogicalAlgorithm { syntax, theory, frame, meanings: table })
    }

    pub fn meanings(&self) -> impl Iterator<Item = (&str, &SymbolAnchor)> {
        self.meanings.iter().map(|(l, a)| (l.as_str(), a))
    }
}

/// Specializes a logical algorithm to a structure: first model-checks the
/// theory under the binding, then rewires every symbol anchor to the bound
/// structural map.
pub fn instantiate(
    logical: &LogicalAlgorithm,
    structure: &AbstractDataStructure,
    binding: &SymbolBinding,
    samples: usize,
    seed: u64,
) -> Result<SemanticAlgorithm> {
    let report = check_model(structure, &logical.theory, binding, samples, seed)?;
    if !report.no_counterexamples() {
        return Err(Error::ModelCheckFailed(report.render()));
    }
    let mut meanings = Vec::new();
    for (label, anchor) in logical.meanings() {
        let map = structure.map(&binding[&anchor.symbol])?.clone();
        meanings.push((
            label.to_string(),
            AnchoredOperation::new(map, anchor.inputs.clone(), anchor.outputs.clone())?,
        ));
    }
    SemanticAlgorithm::new(
        logical.syntax.clone(),
        structure.clone(),
        logical.frame.clone(),
        meanings,
    )
}

// ---------------------------------------------------------------------------
// S-expression syntax

/// Splits an s-expression source into tokens, treating `;` as a line comment.
pub fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut comment = false;
    for c in text.chars() {
        if comment {
            if c == '\n' {
                comment = false;
            }
            continue;
        }
        match c {
            ';' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                comment = true;
            }
            '(' | ')' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    Ok(tokens)
}

pub fn render_term_sexpr(term: &Term) -> String {
    match term {
        Term::Var(v) => v.clone(),
        Term::App(f, args) if args.is_empty() => f.clone(),
        Term::App(f, args) => {
            let parts: Vec<String> = args.iter().map(render_term_sexpr).collect();
            format!("({f} {})", parts.join(" "))
        }
    }
}

pub fn render_formula(f: &Formula) -> String {
    match f {
        Formula::Eq(a, b) => format!("(= {} {})", render_term_sexpr(a), render_term_sexpr(b)),
        Formula::Rel(r, args) => {
            let parts: Vec<String> = args.iter().map(render_term_sexpr).collect();
            if parts.is_empty() {
                format!("(rel {r})")
            } else {
                format!("(rel {r} {})", parts.join(" "))
            }
        }
        Formula::Not(g) => format!("(not {})", render_formula(g)),
        Formula::And(gs) => {
            let parts: Vec<String> = gs.iter().map(render_formula).collect();
            format!("(and {})", parts.join(" "))
        }
        Formula::Or(gs) => {
            let parts: Vec<String> = gs.iter().map(render_formula).collect();
            format!("(or {})", parts.join(" "))
        }
        Formula::Implies(a, b) => {
            format!("(=> {} {})", render_formula(a), render_formula(b))
        }
    }
}

pub fn render_sentence(s: &Sentence) -> String {
    format!("(forall ({}) {})", s.vars.join(" "), render_formula(&s.body))
}

pub fn render_theory(t: &Theory) -> String {
    let mut out = format!("(theory {}\n", t.name);
    let funs: Vec<String> = t
        .signature
        .functions
        .iter()
        .map(|(f, k)| format!("({f} {k})"))
        .collect();
    let rels: Vec<String> = t
        .signature
        .relations
        .iter()
        .map(|(r, k)| format!("({r} {k})"))
        .collect();
    out.push_str(&format!("  (functions {})\n", funs.join(" ")));
    out.push_str(&format!("  (relations {})\n", rels.join(" ")));
    for s in &t.sentences {
        out.push_str(&format!("  {}\n", render_sentence(s)));
    }
    out.push_str(")\n");
    out
}

struct Parser<'a> {
    tokens: &'a [String],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Result<&'a str> {
        let t = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        let t = self.next()?;
        if t == token {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{token}`, got `{t}`")))
        }
    }

    fn atom(&mut self) -> Result<String> {
        let t = self.next()?;
        if t == "(" || t == ")" {
            return Err(Error::Parse(format!("expected an atom, got `{t}`")));
        }
        Ok(t.to_string())
    }

    fn term(&mut self, sig: &LogicalSignature, vars: &[String]) -> Result<Term> {
        if self.peek() == Some("(") {
            self.expect("(")?;
            let head = self.atom()?;
            let mut args = Vec::new();
            while self.peek() != Some(")") {
                args.push(self.term(sig, vars)?);
            }
            self.expect(")")?;
            Ok(Term::App(head, args))
        } else {
            let name = self.atom()?;
            if vars.contains(&name) {
                Ok(Term::Var(name))
            } else {
                // Bare symbols that are not quantified read as constants.
                Ok(Term::App(name, Vec::new()))
            }
        }
    }

    fn formula(&mut self, sig: &LogicalSignature, vars: &[String]) -> Result<Formula> {
        self.expect("(")?;
        let head = self.atom()?;
        let f = match head.as_str() {
            "=" => {
                let a = self.term(sig, vars)?;
                let b = self.term(sig, vars)?;
                Formula::Eq(a, b)
            }
            "rel" => {
                let r = self.atom()?;
                let mut args = Vec::new();
                while self.peek() != Some(")") {
                    args.push(self.term(sig, vars)?);
                }
                Formula::Rel(r, args)
            }
            "not" => Formula::Not(Box::new(self.formula(sig, vars)?)),
            "and" | "or" => {
                let mut gs = Vec::new();
                while self.peek() != Some(")") {
                    gs.push(self.formula(sig, vars)?);
                }
                if head == "and" {
                    Formula::And(gs)
                } else {
                    Formula::Or(gs)
                }
            }
            "=>" => {
                let a = self.formula(sig, vars)?;
                let b = self.formula(sig, vars)?;
                Formula::Implies(Box::new(a), Box::new(b))
            }
            other => return Err(Error::Parse(format!("unknown connective `{other}`"))),
        };
        self.expect(")")?;
        Ok(f)
    }

    fn sentence(&mut self, sig: &LogicalSignature) -> Result<Sentence> {
        self.expect("(")?;
        let head = self.atom()?;
        if head != "forall" {
            return Err(Error::Parse(format!("expected `forall`, got `{head}`")));
        }
        self.expect("(")?;
        let mut vars = Vec::new();
        while self.peek() != Some(")") {
            vars.push(self.atom()?);
        }
        self.expect(")")?;
        let body = self.formula(sig, &vars)?;
        self.expect(")")?;
        Ok(Sentence { vars, body })
    }

    fn arity_block(&mut self, kind: &str) -> Result<IndexMap<String, usize>> {
        self.expect("(")?;
        let head = self.atom()?;
        if head != kind {
            return Err(Error::Parse(format!("expected `({kind} ...)`, got `({head}`")));
        }
        let mut out = IndexMap::new();
        while self.peek() != Some(")") {
            self.expect("(")?;
            let name = self.atom()?;
            let arity: usize = self
                .atom()?
                .parse()
                .map_err(|_| Error::Parse(format!("bad arity for `{name}`")))?;
            self.expect(")")?;
            out.insert(name, arity);
        }
        self.expect(")")?;
        Ok(out)
    }
}

/// Parses one `(forall (vars...) body)` sentence against a signature.
pub fn parse_sentence(text: &str, signature: &LogicalSignature) -> Result<Sentence> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens: &tokens, pos: 0 };
    let s = p.sentence(signature)?;
    if p.pos != tokens.len() {
        return Err(Error::Parse("trailing input after sentence".into()));
    }
    check_sentence(signature, &s)?;
    Ok(s)
}

/// Parses `(theory NAME (functions (f k)...) (relations (r k)...) sentences...)`.
pub fn parse_theory(text: &str) -> Result<Theory> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens: &tokens, pos: 0 };
    p.expect("(")?;
    let head = p.atom()?;
    if head != "theory" {
        return Err(Error::Parse(format!("expected `theory`, got `{head}`")));
    }
    let name = p.atom()?;
    let signature = LogicalSignature {
        functions: p.arity_block("functions")?,
        relations: p.arity_block("relations")?,
    };
    let mut sentences = Vec::new();
    while p.peek() == Some("(") {
        sentences.push(p.sentence(&signature)?);
    }
    p.expect(")")?;
    if p.pos != tokens.len() {
        return Err(Error::Parse("trailing input after theory".into()));
    }
    Theory::new(name, signature, sentences)
}
