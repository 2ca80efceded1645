//! Abstract data structures: a carrier domain together with finitely many
//! named partial maps `D^k -> D^k'` between its powers.
//!
//! Guards are partial identities (`dom == im`, identity where defined), and a
//! structure may declare that two of its maps have disjoint domains; induced
//! models forward that knowledge to the determinism report.  Structures give
//! rise to models of computation by anchoring maps to variables of an
//! environment frame ([`induced_model`]), and to further structures by binary
//! products ([`product`]).

use std::collections::BTreeSet;
use std::sync::Arc;

use indexmap::IndexMap;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2;
use crate::model::{Config, Instruction, ModelOfComputation, SpaceDescriptor};
use crate::value::{parse_value, Value};

// ---------------------------------------------------------------------------
// Domains

/// Shape of a carrier; drives sampling, enumeration, parsing and membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Bool,
    Nat,
    NatList,
    Gf2Poly,
    Pair(Box<DomainKind>, Box<DomainKind>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDomain {
    pub name: String,
    pub kind: DomainKind,
}

impl DataDomain {
    pub fn new(name: impl Into<String>, kind: DomainKind) -> DataDomain {
        DataDomain { name: name.into(), kind }
    }

    pub fn contains(&self, v: &Value) -> bool {
        contains(&self.kind, v)
    }

    /// Draws one point; `bound` caps numeric magnitude (and list length at
    /// `min(bound, 8)`), while GF(2) masks are capped at degree 5.
    pub fn sample<R: Rng>(&self, rng: &mut R, bound: u64) -> Value {
        sample(&self.kind, rng, bound)
    }

    /// All points up to the size bound, in a fixed order.  List carriers are
    /// cut off at length 2 to keep the result finite and small.
    pub fn enumerate(&self, bound: u64) -> Vec<Value> {
        enumerate(&self.kind, bound)
    }

    pub fn parse(&self, text: &str) -> Result<Value> {
        let v = parse_domain(&self.kind, text)?;
        debug_assert!(self.contains(&v));
        Ok(v)
    }
}

fn contains(kind: &DomainKind, v: &Value) -> bool {
    match (kind, v) {
        (DomainKind::Bool, Value::Nat(n)) => *n <= 1,
        (DomainKind::Nat, Value::Nat(_)) => true,
        (DomainKind::NatList, Value::List(_)) => true,
        (DomainKind::Gf2Poly, Value::Poly(_)) => true,
        (DomainKind::Pair(a, b), Value::Pair(x, y)) => contains(a, x) && contains(b, y),
        _ => false,
    }
}

fn sample<R: Rng>(kind: &DomainKind, rng: &mut R, bound: u64) -> Value {
    match kind {
        DomainKind::Bool => Value::Nat(rng.gen_range(0..=1)),
        DomainKind::Nat => Value::Nat(rng.gen_range(0..=bound)),
        DomainKind::NatList => {
            let len = rng.gen_range(0..=bound.min(8)) as usize;
            Value::List((0..len).map(|_| rng.gen_range(0..=bound)).collect())
        }
        DomainKind::Gf2Poly => Value::Poly(rng.gen_range(0..64)),
        DomainKind::Pair(a, b) => Value::Pair(
            Box::new(sample(a, rng, bound)),
            Box::new(sample(b, rng, bound)),
        ),
    }
}

fn enumerate(kind: &DomainKind, bound: u64) -> Vec<Value> {
    match kind {
        DomainKind::Bool => vec![Value::Nat(0), Value::Nat(1)],
        DomainKind::Nat => (0..=bound).map(Value::Nat).collect(),
        DomainKind::NatList => {
            let elems = 0..=bound.min(5);
            let mut out = vec![Value::List(vec![])];
            for a in elems.clone() {
                out.push(Value::List(vec![a]));
            }
            for a in elems.clone() {
                for b in elems.clone() {
                    out.push(Value::List(vec![a, b]));
                }
            }
            out
        }
        DomainKind::Gf2Poly => (0..=bound.min(63)).map(Value::Poly).collect(),
        DomainKind::Pair(a, b) => {
            let left = enumerate(a, bound);
            let right = enumerate(b, bound);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for x in &left {
                for y in &right {
                    out.push(Value::Pair(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
            out
        }
    }
}

fn parse_domain(kind: &DomainKind, text: &str) -> Result<Value> {
    let s = text.trim();
    match kind {
        DomainKind::Bool => match s {
            "0" => Ok(Value::Nat(0)),
            "1" => Ok(Value::Nat(1)),
            _ => Err(Error::Parse(format!("bad boolean `{s}`"))),
        },
        DomainKind::Nat => s
            .parse::<u64>()
            .map(Value::Nat)
            .map_err(|_| Error::Parse(format!("bad natural `{s}`"))),
        DomainKind::NatList => match parse_value(s)? {
            v @ Value::List(_) => Ok(v),
            _ => Err(Error::Parse(format!("expected a list, got `{s}`"))),
        },
        DomainKind::Gf2Poly => gf2::parse(s).map(Value::Poly),
        DomainKind::Pair(a, b) => {
            let inner = s
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("expected a pair, got `{s}`")))?;
            let mut depth = 0usize;
            for (i, c) in inner.char_indices() {
                match c {
                    '(' | '[' => depth += 1,
                    ')' | ']' => depth = depth.saturating_sub(1),
                    ',' if depth == 0 => {
                        let x = parse_domain(a, &inner[..i])?;
                        let y = parse_domain(b, &inner[i + 1..])?;
                        return Ok(Value::Pair(Box::new(x), Box::new(y)));
                    }
                    _ => {}
                }
            }
            Err(Error::Parse(format!("pair without comma `{s}`")))
        }
    }
}

// ---------------------------------------------------------------------------
// Structural maps

type MapFn = Arc<dyn Fn(&[Value]) -> Option<Vec<Value>> + Send + Sync>;

/// A named partial map `D^dom -> D^im`.  Applying it outside its domain of
/// definition yields `None`; applying it to the wrong number of arguments is
/// a caller error.
#[derive(Clone)]
pub struct StructuralMap {
    pub name: String,
    pub dom: usize,
    pub im: usize,
    func: MapFn,
}

impl StructuralMap {
    pub fn new(
        name: impl Into<String>,
        dom: usize,
        im: usize,
        f: impl Fn(&[Value]) -> Option<Vec<Value>> + Send + Sync + 'static,
    ) -> StructuralMap {
        StructuralMap { name: name.into(), dom, im, func: Arc::new(f) }
    }

    /// A partial identity of arity `k`, defined where `pred` holds.
    pub fn guard(
        name: impl Into<String>,
        k: usize,
        pred: impl Fn(&[Value]) -> bool + Send + Sync + 'static,
    ) -> StructuralMap {
        StructuralMap::new(name, k, k, move |args| pred(args).then(|| args.to_vec()))
    }

    pub fn apply(&self, args: &[Value]) -> Result<Option<Vec<Value>>> {
        if args.len() != self.dom {
            return Err(Error::ArityMismatch(format!(
                "map `{}` takes {} arguments, got {}",
                self.name,
                self.dom,
                args.len()
            )));
        }
        match (self.func)(args) {
            Some(out) => {
                assert_eq!(out.len(), self.im, "map `{}` broke its image arity", self.name);
                Ok(Some(out))
            }
            None => Ok(None),
        }
    }
}

impl std::fmt::Debug for StructuralMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StructuralMap({}: {} -> {})", self.name, self.dom, self.im)
    }
}

// ---------------------------------------------------------------------------
// Structures

#[derive(Clone, Debug)]
pub struct AbstractDataStructure {
    pub name: String,
    pub domain: DataDomain,
    maps: IndexMap<String, StructuralMap>,
    disjoint: BTreeSet<(String, String)>,
}

impl AbstractDataStructure {
    pub fn new(name: impl Into<String>, domain: DataDomain) -> AbstractDataStructure {
        AbstractDataStructure {
            name: name.into(),
            domain,
            maps: IndexMap::new(),
            disjoint: BTreeSet::new(),
        }
    }

    pub fn add_map(&mut self, map: StructuralMap) {
        self.maps.insert(map.name.clone(), map);
    }

    /// Declares two maps never both defined on the same tuple.
    pub fn declare_disjoint(&mut self, a: &str, b: &str) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.disjoint.insert((a.to_string(), b.to_string()));
    }

    pub fn known_disjoint(&self, a: &str, b: &str) -> bool {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.disjoint.contains(&(a.to_string(), b.to_string()))
    }

    pub fn map(&self, name: &str) -> Result<&StructuralMap> {
        self.maps.get(name).ok_or_else(|| Error::UnknownMap(name.to_string()))
    }

    pub fn maps(&self) -> impl Iterator<Item = &StructuralMap> {
        self.maps.values()
    }

    /// Largest arity occurring in any map signature (0 for a bare domain).
    pub fn maximal_arity(&self) -> usize {
        self.maps.values().map(|m| m.dom.max(m.im)).max().unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// Environments

/// An ordered, duplicate-free assignment of domain points to variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Environment {
    slots: Vec<(String, Value)>,
}

impl Environment {
    pub fn new(slots: Vec<(String, Value)>) -> Result<Environment> {
        for (i, (name, _)) in slots.iter().enumerate() {
            if slots[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::Parse(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Environment { slots })
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.slots.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn set(&mut self, name: &str, value: Value) -> Result<()> {
        match self.slots.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => {
                slot.1 = value;
                Ok(())
            }
            None => Err(Error::UnknownVariable(name.to_string())),
        }
    }

    /// Reads `names` in order.
    pub fn project(&self, names: &[String]) -> Result<Vec<Value>> {
        names
            .iter()
            .map(|n| {
                self.get(n)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVariable(n.clone()))
            })
            .collect()
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.slots.iter().map(|(n, _)| n.as_str())
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.slots.iter().map(|(_, v)| v)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .slots
            .iter()
            .map(|(n, v)| format!("{n}: {}", v.render()))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses `{x: 12, y: [3,1]}` with every value read in `domain`.
    pub fn parse(text: &str, domain: &DataDomain) -> Result<Environment> {
        let s = text.trim();
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("environment literal must be braced: `{s}`")))?;
        let mut slots = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        let bytes: Vec<char> = inner.chars().collect();
        let mut pieces = Vec::new();
        for (i, c) in bytes.iter().enumerate() {
            match c {
                '[' | '(' => depth += 1,
                ']' | ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    pieces.push(inner[start..i].to_string());
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push(inner[start..].to_string());
        for piece in pieces {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (name, value) = piece
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad environment entry `{piece}`")))?;
            slots.push((name.trim().to_string(), domain.parse(value)?));
        }
        Environment::new(slots)
    }
}

impl std::fmt::Display for Environment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------------------
// Anchored operations and pipelines

/// A structural map wired to named slots of an environment frame: the map
/// reads `inputs` in order and writes its results to `outputs` in order,
/// leaving every other variable fixed.
#[derive(Clone, Debug)]
pub struct AnchoredOperation {
    pub map: StructuralMap,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl AnchoredOperation {
    pub fn new(map: StructuralMap, inputs: Vec<String>, outputs: Vec<String>) -> Result<AnchoredOperation> {
        if inputs.len() != map.dom || outputs.len() != map.im {
            return Err(Error::ArityMismatch(format!(
                "map `{}` is {} -> {}, anchored to ({}) -> ({})",
                map.name,
                map.dom,
                map.im,
                inputs.join(","),
                outputs.join(",")
            )));
        }
        for (i, name) in outputs.iter().enumerate() {
            if outputs[..i].contains(name) {
                return Err(Error::ArityMismatch(format!(
                    "map `{}` writes `{name}` twice",
                    map.name
                )));
            }
        }
        Ok(AnchoredOperation { map, inputs, outputs })
    }

    /// Canonical instruction name, e.g. `mod@(x,y)->(y)`.
    pub fn instruction_name(&self) -> String {
        format!(
            "{}@({})->({})",
            self.map.name,
            self.inputs.join(","),
            self.outputs.join(",")
        )
    }

    pub fn apply_env(&self, env: &Environment) -> Result<Option<Environment>> {
        let args = env.project(&self.inputs)?;
        match self.map.apply(&args)? {
            None => Ok(None),
            Some(out) => {
                let mut next = env.clone();
                for (name, value) in self.outputs.iter().zip(out) {
                    next.set(name, value)?;
                }
                Ok(Some(next))
            }
        }
    }
}

/// Sequentially composes anchored operations over a variable frame into one
/// structural map of arity `|frame| -> |frame|`.  The empty pipeline is the
/// identity of that arity.  Every variable a stage touches must be declared
/// in the frame.
pub fn compose_maps(
    name: impl Into<String>,
    frame: &[String],
    pipeline: Vec<AnchoredOperation>,
) -> Result<StructuralMap> {
    for (i, v) in frame.iter().enumerate() {
        if frame[..i].contains(v) {
            return Err(Error::FrameMismatch(format!("duplicate frame variable `{v}`")));
        }
    }
    for op in &pipeline {
        for v in op.inputs.iter().chain(op.outputs.iter()) {
            if !frame.contains(v) {
                return Err(Error::FrameMismatch(format!(
                    "`{v}` used by `{}` is not in the frame ({})",
                    op.map.name,
                    frame.join(",")
                )));
            }
        }
    }
    let arity = frame.len();
    let frame: Vec<String> = frame.to_vec();
    Ok(StructuralMap::new(name, arity, arity, move |args| {
        let slots = frame.iter().cloned().zip(args.iter().cloned()).collect();
        let mut env = Environment::new(slots).expect("frame is duplicate-free");
        for op in &pipeline {
            match op.apply_env(&env).expect("pipeline was validated against the frame") {
                Some(next) => env = next,
                None => return None,
            }
        }
        Some(env.values().cloned().collect())
    }))
}

// ---------------------------------------------------------------------------
// Products

/// Binary product structure: the carrier is the pair domain and each map of
/// either factor lifts to act on one component while the other passes
/// through.  When a lift must produce more output pairs than it consumes
/// (`im > dom`), the extra pass-through components repeat the last input's;
/// lifts of nullary maps are nowhere defined since there is nothing to pass
/// through.
pub fn product(s1: &AbstractDataStructure, s2: &AbstractDataStructure) -> AbstractDataStructure {
    let domain = DataDomain::new(
        format!("{}*{}", s1.domain.name, s2.domain.name),
        DomainKind::Pair(Box::new(s1.domain.kind.clone()), Box::new(s2.domain.kind.clone())),
    );
    let mut out = AbstractDataStructure::new(format!("{}*{}", s1.name, s2.name), domain);
    for map in s1.maps() {
        out.add_map(lift(map, true));
    }
    for map in s2.maps() {
        out.add_map(lift(map, false));
    }
    for (a, b) in &s1.disjoint {
        out.declare_disjoint(&format!("{a}*id"), &format!("{b}*id"));
    }
    for (a, b) in &s2.disjoint {
        out.declare_disjoint(&format!("id*{a}"), &format!("id*{b}"));
    }
    out
}

fn lift(map: &StructuralMap, first: bool) -> StructuralMap {
    let name = if first { format!("{}*id", map.name) } else { format!("id*{}", map.name) };
    let inner = map.clone();
    StructuralMap::new(name, map.dom, map.im, move |args| {
        if inner.dom == 0 {
            return None;
        }
        let mut acting = Vec::with_capacity(args.len());
        let mut passive = Vec::with_capacity(args.len());
        for v in args {
            match v {
                Value::Pair(a, b) => {
                    let (act, pass) = if first { (a, b) } else { (b, a) };
                    acting.push((**act).clone());
                    passive.push((**pass).clone());
                }
                _ => return None,
            }
        }
        let moved = inner.apply(&acting).ok()??;
        let mut out = Vec::with_capacity(inner.im);
        for (j, m) in moved.into_iter().enumerate() {
            let p = passive.get(j).unwrap_or_else(|| passive.last().unwrap()).clone();
            out.push(if first {
                Value::Pair(Box::new(m), Box::new(p))
            } else {
                Value::Pair(Box::new(p), Box::new(m))
            });
        }
        Some(out)
    })
}

// ---------------------------------------------------------------------------
// Induced models

/// Turns a structure plus a frame of variables into a model of computation
/// whose configurations are environments over the frame and whose
/// instructions are the given anchored operations.
pub fn induced_model(
    structure: &AbstractDataStructure,
    vars: &[String],
    ops: &[AnchoredOperation],
) -> Result<ModelOfComputation> {
    for op in ops {
        for v in op.inputs.iter().chain(op.outputs.iter()) {
            if !vars.contains(v) {
                return Err(Error::UnknownVariable(format!(
                    "{v} (anchored by `{}` outside the frame {})",
                    op.map.name,
                    vars.join(",")
                )));
            }
        }
    }
    let mut model = ModelOfComputation::new(
        format!("{}[{}]", structure.name, vars.join(",")),
        SpaceDescriptor::Environments {
            vars: vars.to_vec(),
            domain: structure.domain.clone(),
        },
    );
    for op in ops {
        let captured = op.clone();
        model.add_instruction(Instruction::new(op.instruction_name(), move |x: &Config| {
            let env = x.as_env()?;
            captured.apply_env(env).ok().flatten().map(Config::Env)
        }));
    }
    for (i, a) in ops.iter().enumerate() {
        for b in ops.iter().skip(i + 1) {
            if a.inputs == b.inputs && structure.known_disjoint(&a.map.name, &b.map.name) {
                model.declare_disjoint(&a.instruction_name(), &b.instruction_name());
            }
        }
    }
    Ok(model)
}

// ---------------------------------------------------------------------------
// Built-in structures

fn nat1(name: &str, f: fn(u64) -> Option<u64>) -> StructuralMap {
    StructuralMap::new(name, 1, 1, move |args| {
        let n = args[0].as_nat()?;
        f(n).map(|r| vec![Value::Nat(r)])
    })
}

fn nat2(name: &str, f: fn(u64, u64) -> Option<u64>) -> StructuralMap {
    StructuralMap::new(name, 2, 1, move |args| {
        let (a, b) = (args[0].as_nat()?, args[1].as_nat()?);
        f(a, b).map(|r| vec![Value::Nat(r)])
    })
}

fn nat_guard1(name: &str, pred: fn(u64) -> bool) -> StructuralMap {
    StructuralMap::guard(name, 1, move |args| args[0].as_nat().is_some_and(pred))
}

fn nat_guard2(name: &str, pred: fn(u64, u64) -> bool) -> StructuralMap {
    StructuralMap::guard(name, 2, move |args| {
        match (args[0].as_nat(), args[1].as_nat()) {
            (Some(a), Some(b)) => pred(a, b),
            _ => false,
        }
    })
}

/// The two-point boolean structure `{0, 1}` with its guards and connectives.
pub fn booleans() -> AbstractDataStructure {
    let mut s = AbstractDataStructure::new("booleans", DataDomain::new("bool", DomainKind::Bool));
    s.add_map(nat_guard1("read0", |n| n == 0));
    s.add_map(nat_guard1("read1", |n| n == 1));
    s.add_map(nat1("not", |n| Some(1 - n)));
    s.add_map(nat2("and", |m, n| Some(m * n)));
    s.add_map(nat2("or", |m, n| Some(m + n - m * n)));
    s.declare_disjoint("read0", "read1");
    s
}

/// Naturals with zero/successor guards, arithmetic, order guards, and the
/// frame plumbing (`id`, `swap`, projections, constants) that the built-in
/// algorithm corpus anchors to variables.
pub fn naturals() -> AbstractDataStructure {
    let mut s = AbstractDataStructure::new("naturals", DataDomain::new("nat", DomainKind::Nat));
    s.add_map(nat_guard1("read0", |n| n == 0));
    s.add_map(nat_guard1("readS", |n| n != 0));
    s.add_map(nat1("succ", |n| n.checked_add(1)));
    s.add_map(nat1("pred", |n| n.checked_sub(1)));
    s.add_map(nat1("id", Some));
    s.add_map(nat2("add", |a, b| a.checked_add(b)));
    s.add_map(nat2("mult", |a, b| a.checked_mul(b)));
    s.add_map(nat2("sub", |a, b| a.checked_sub(b)));
    s.add_map(nat2("div", |a, b| a.checked_div(b)));
    s.add_map(nat2("mod", |a, b| a.checked_rem(b)));
    s.add_map(nat_guard2("geq", |a, b| a >= b));
    s.add_map(nat_guard2("lt", |a, b| a < b));
    s.add_map(StructuralMap::new("swap", 2, 2, |args| {
        Some(vec![args[1].clone(), args[0].clone()])
    }));
    s.add_map(nat2("proj1", |a, _| Some(a)));
    s.add_map(nat2("proj2", |_, b| Some(b)));
    s.add_map(StructuralMap::new("const0", 0, 1, |_| Some(vec![Value::Nat(0)])));
    s.add_map(StructuralMap::new("const1", 0, 1, |_| Some(vec![Value::Nat(1)])));
    s.declare_disjoint("read0", "readS");
    s.declare_disjoint("geq", "lt");
    s
}

fn list1(name: &str, f: fn(&[u64]) -> Option<Vec<u64>>) -> StructuralMap {
    StructuralMap::new(name, 1, 1, move |args| {
        f(args[0].as_list()?).map(|r| vec![Value::List(r)])
    })
}

fn list_guard1(name: &str, pred: fn(&[u64]) -> bool) -> StructuralMap {
    StructuralMap::guard(name, 1, move |args| args[0].as_list().is_some_and(pred))
}

fn list_guard2(name: &str, pred: fn(&[u64], &[u64]) -> bool) -> StructuralMap {
    StructuralMap::guard(name, 2, move |args| {
        match (args[0].as_list(), args[1].as_list()) {
            (Some(a), Some(b)) => pred(a, b),
            _ => false,
        }
    })
}

/// Finite lists of naturals.  Besides the usual head/tail/append/split/sort
/// vocabulary this carries an encoded stack discipline: `push(l, s)` shifts
/// every element of `l` up by one and prepends it to `s` behind a `0`
/// sentinel, and `pop` undoes that; recursive control graphs use the pair to
/// save live variables across an inner run sharing the same frame.
pub fn lists_of_naturals() -> AbstractDataStructure {
    let mut s = AbstractDataStructure::new(
        "lists_of_naturals",
        DataDomain::new("natlist", DomainKind::NatList),
    );
    s.add_map(list_guard1("isnil", |l| l.is_empty()));
    s.add_map(list_guard1("nonnil", |l| !l.is_empty()));
    s.add_map(list_guard1("is_short", |l| l.len() <= 1));
    s.add_map(list_guard1("is_long", |l| l.len() >= 2));
    s.add_map(list1("fst", |l| l.first().map(|h| vec![*h])));
    s.add_map(list1("queue", |l| {
        (!l.is_empty()).then(|| l[1..].to_vec())
    }));
    s.add_map(list1("sort", |l| {
        let mut v = l.to_vec();
        v.sort_unstable();
        Some(v)
    }));
    s.add_map(StructuralMap::new("nil", 0, 1, |_| Some(vec![Value::List(vec![])])));
    s.add_map(StructuralMap::new("id", 1, 1, |args| {
        args[0].as_list().map(|_| vec![args[0].clone()])
    }));
    s.add_map(StructuralMap::new("concat", 2, 1, |args| {
        let (a, b) = (args[0].as_list()?, args[1].as_list()?);
        let mut v = a.to_vec();
        v.extend_from_slice(b);
        Some(vec![Value::List(v)])
    }));
    s.add_map(StructuralMap::new("append_head", 2, 1, |args| {
        let (y, a) = (args[0].as_list()?, args[1].as_list()?);
        let head = *a.first()?;
        let mut v = y.to_vec();
        v.push(head);
        Some(vec![Value::List(v)])
    }));
    s.add_map(StructuralMap::new("split", 1, 2, |args| {
        let l = args[0].as_list()?;
        let evens: Vec<u64> = l.iter().step_by(2).copied().collect();
        let odds: Vec<u64> = l.iter().skip(1).step_by(2).copied().collect();
        Some(vec![Value::List(evens), Value::List(odds)])
    }));
    s.add_map(StructuralMap::new("push", 2, 1, |args| {
        let (l, stack) = (args[0].as_list()?, args[1].as_list()?);
        let mut v: Vec<u64> = l.iter().map(|e| e.checked_add(1)).collect::<Option<_>>()?;
        v.push(0);
        v.extend_from_slice(stack);
        Some(vec![Value::List(v)])
    }));
    s.add_map(StructuralMap::new("pop", 1, 2, |args| {
        let stack = args[0].as_list()?;
        let sep = stack.iter().position(|e| *e == 0)?;
        let l: Vec<u64> = stack[..sep].iter().map(|e| e - 1).collect();
        Some(vec![Value::List(l), Value::List(stack[sep + 1..].to_vec())])
    }));
    s.add_map(list_guard2("both_nonnil", |a, b| !a.is_empty() && !b.is_empty()));
    s.add_map(list_guard2("anynil", |a, b| a.is_empty() || b.is_empty()));
    s.add_map(list_guard2("head_le", |a, b| {
        match (a.first(), b.first()) {
            (Some(x), Some(y)) => x <= y,
            _ => false,
        }
    }));
    s.add_map(list_guard2("head_gt", |a, b| {
        match (a.first(), b.first()) {
            (Some(x), Some(y)) => x > y,
            _ => false,
        }
    }));
    s.declare_disjoint("isnil", "nonnil");
    s.declare_disjoint("is_short", "is_long");
    s.declare_disjoint("both_nonnil", "anynil");
    s.declare_disjoint("head_le", "head_gt");
    s
}

fn poly2(name: &str, f: fn(u64, u64) -> Option<u64>) -> StructuralMap {
    StructuralMap::new(name, 2, 1, move |args| {
        let (a, b) = (args[0].as_poly()?, args[1].as_poly()?);
        f(a, b).map(|r| vec![Value::Poly(r)])
    })
}

/// Polynomials over GF(2) with the Euclidean-division vocabulary, mirroring
/// the map names of [`naturals`] so one symbol binding serves both.
pub fn gf2_polys() -> AbstractDataStructure {
    let mut s =
        AbstractDataStructure::new("gf2_polys", DataDomain::new("gf2poly", DomainKind::Gf2Poly));
    s.add_map(StructuralMap::guard("read0", 1, |args| args[0].as_poly() == Some(0)));
    s.add_map(StructuralMap::guard("readS", 1, |args| {
        matches!(args[0].as_poly(), Some(p) if p != 0)
    }));
    s.add_map(StructuralMap::new("id", 1, 1, |args| {
        args[0].as_poly().map(|_| vec![args[0].clone()])
    }));
    s.add_map(poly2("add", |a, b| Some(gf2::add(a, b))));
    s.add_map(poly2("mult", |a, b| Some(gf2::mul(a, b))));
    s.add_map(poly2("div", |a, b| gf2::divmod(a, b).map(|(q, _)| q)));
    s.add_map(poly2("mod", |a, b| gf2::divmod(a, b).map(|(_, r)| r)));
    s.add_map(StructuralMap::new("const0", 0, 1, |_| Some(vec![Value::Poly(0)])));
    s.add_map(StructuralMap::new("const1", 0, 1, |_| Some(vec![Value::Poly(1)])));
    s.declare_disjoint("read0", "readS");
    s
}
