//! Interpreting abstract data inside a machine model, and verifying that
//! machine programs implement structural maps under such an interpretation.
//!
//! An [`Interpretation`] encodes tuples over a data domain as configurations
//! of a target model and decodes them back.  A program `P` implements a map
//! `f` under an interpretation when, for every input tuple `x`:
//!
//! * `f(x)` defined: `P` run on `encode(x)` terminates in `encode(f(x))`;
//! * `f(x)` undefined: `P` never terminates (it sticks or runs forever).
//!
//! [`verify_implementation`] checks this exhaustively over all tuples up to a
//! size bound, within a step budget, in parallel over inputs.  Decoding is
//! strict — the final configuration must equal a fresh encoding of the output
//! bit for bit — so implementations must clean up scratch cells and park the
//! head where the encoding convention puts it.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::data::{AbstractDataStructure, DataDomain, DomainKind, StructuralMap};
use crate::error::{Error, Result};
use crate::model::{Config, ModelOfComputation};
use crate::par::map_items;
use crate::program::{run, Edge, Outcome, Program, Trace};
use crate::tape::{Symbol, Tape};
use crate::value::Value;

// ---------------------------------------------------------------------------
// Interpretations

#[derive(Clone)]
pub struct Interpretation {
    pub name: String,
    pub domain: DataDomain,
    /// Name of the model whose configurations the encoding produces.
    pub model: String,
    encode: Arc<dyn Fn(&[Value]) -> Result<Config> + Send + Sync>,
    decode: Arc<dyn Fn(&Config, usize) -> Result<Vec<Value>> + Send + Sync>,
}

impl std::fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Interpretation")
            .field("name", &self.name)
            .field("domain", &self.domain.name)
            .field("model", &self.model)
            .finish_non_exhaustive()
    }
}

impl Interpretation {
    pub fn new(
        name: impl Into<String>,
        domain: DataDomain,
        model: impl Into<String>,
        encode: impl Fn(&[Value]) -> Result<Config> + Send + Sync + 'static,
        decode: impl Fn(&Config, usize) -> Result<Vec<Value>> + Send + Sync + 'static,
    ) -> Interpretation {
        Interpretation {
            name: name.into(),
            domain,
            model: model.into(),
            encode: Arc::new(encode),
            decode: Arc::new(decode),
        }
    }

    pub fn encode(&self, tuple: &[Value]) -> Result<Config> {
        (self.encode)(tuple)
    }

    /// Decodes a `k`-tuple; strict, so any deviation from the canonical
    /// encoding (junk cells, misplaced head) is an error.
    pub fn decode(&self, config: &Config, k: usize) -> Result<Vec<Value>> {
        (self.decode)(config, k)
    }
}

fn tape_of(config: &Config) -> Result<&Tape> {
    config
        .as_tape()
        .ok_or_else(|| Error::Encoding("expected a tape configuration".into()))
}

// --- booleans: value i of the tuple sits at tape position 2i ---------------

pub fn encode_bool_tuple(tuple: &[Value]) -> Result<Tape> {
    let mut cells = Vec::with_capacity(tuple.len());
    for (i, v) in tuple.iter().enumerate() {
        let sym = match v {
            Value::Nat(0) => Symbol::Zero,
            Value::Nat(1) => Symbol::One,
            other => {
                return Err(Error::Encoding(format!(
                    "`{}` is not a boolean",
                    other.render()
                )))
            }
        };
        cells.push((2 * i as i64, sym));
    }
    Ok(Tape::from_cells(cells))
}

pub fn decode_bool_tuple(tape: &Tape, k: usize) -> Result<Vec<Value>> {
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        match tape.symbol_at(2 * i as i64) {
            Symbol::Zero => out.push(Value::Nat(0)),
            Symbol::One => out.push(Value::Nat(1)),
            Symbol::Blank => {
                return Err(Error::Encoding(format!(
                    "no boolean at position {}",
                    2 * i
                )))
            }
        }
    }
    if *tape != encode_bool_tuple(&out)? {
        return Err(Error::Encoding("tape carries more than the encoded tuple".into()));
    }
    Ok(out)
}

/// Booleans on a tape: component `i` of a tuple at position `2i`.
pub fn delta_bool() -> Interpretation {
    Interpretation::new(
        "bool_cells",
        DataDomain::new("booleans", DomainKind::Bool),
        "tm",
        |tuple| Ok(Config::Tape(encode_bool_tuple(tuple)?)),
        |config, k| decode_bool_tuple(tape_of(config)?, k),
    )
}

// --- naturals, unary: n as a block of n + 1 ones ---------------------------

pub fn encode_nat_unary_tuple(tuple: &[Value]) -> Result<Tape> {
    let mut cells = Vec::new();
    let mut start: i64 = 0;
    for v in tuple {
        let n = v.as_nat().ok_or_else(|| {
            Error::Encoding(format!("`{}` is not a natural number", v.render()))
        })?;
        for p in 0..=n as i64 {
            cells.push((start + p, Symbol::One));
        }
        start += n as i64 + 2; // one blank separates consecutive blocks
    }
    Ok(Tape::from_cells(cells))
}

pub fn decode_nat_unary_tuple(tape: &Tape, k: usize) -> Result<Vec<Value>> {
    let mut out = Vec::with_capacity(k);
    let mut pos: i64 = 0;
    for i in 0..k {
        let mut ones: u64 = 0;
        while tape.symbol_at(pos) == Symbol::One {
            ones += 1;
            pos += 1;
        }
        if ones == 0 {
            return Err(Error::Encoding(format!("no unary block for component {i}")));
        }
        out.push(Value::Nat(ones - 1));
        pos += 1; // the single separating blank
    }
    if *tape != encode_nat_unary_tuple(&out)? {
        return Err(Error::Encoding("tape carries more than the encoded tuple".into()));
    }
    Ok(out)
}

/// Naturals on a tape in unary: `n` as `n + 1` ones, blocks one blank apart,
/// the first starting at position 0.
pub fn delta_nat_unary() -> Interpretation {
    Interpretation::new(
        "nat_unary",
        DataDomain::new("naturals", DomainKind::Nat),
        "tm",
        |tuple| Ok(Config::Tape(encode_nat_unary_tuple(tuple)?)),
        |config, k| decode_nat_unary_tuple(tape_of(config)?, k),
    )
}

// --- naturals, binary: most significant bit first ---------------------------

pub fn encode_nat_binary_tuple(tuple: &[Value]) -> Result<Tape> {
    let mut cells = Vec::new();
    let mut start: i64 = 0;
    for v in tuple {
        let n = v.as_nat().ok_or_else(|| {
            Error::Encoding(format!("`{}` is not a natural number", v.render()))
        })?;
        let bits = if n == 0 { 1 } else { 64 - n.leading_zeros() as i64 };
        for i in 0..bits {
            let bit = (n >> (bits - 1 - i)) & 1;
            cells.push((start + i, if bit == 1 { Symbol::One } else { Symbol::Zero }));
        }
        start += bits + 1;
    }
    Ok(Tape::from_cells(cells))
}

pub fn decode_nat_binary_tuple(tape: &Tape, k: usize) -> Result<Vec<Value>> {
    let mut out = Vec::with_capacity(k);
    let mut pos: i64 = 0;
    for i in 0..k {
        let mut n: u64 = 0;
        let mut bits = 0;
        loop {
            match tape.symbol_at(pos) {
                Symbol::Zero => n = n << 1,
                Symbol::One => n = (n << 1) | 1,
                Symbol::Blank => break,
            }
            bits += 1;
            pos += 1;
            if bits > 64 {
                return Err(Error::Encoding(format!("component {i} overflows 64 bits")));
            }
        }
        if bits == 0 {
            return Err(Error::Encoding(format!("no binary block for component {i}")));
        }
        out.push(Value::Nat(n));
        pos += 1;
    }
    if *tape != encode_nat_binary_tuple(&out)? {
        return Err(Error::Encoding("tape carries more than the encoded tuple".into()));
    }
    Ok(out)
}

/// Naturals on a tape in binary, most significant bit leftmost, one blank
/// between blocks.  `0` is the single digit `0`.
pub fn delta_nat_binary() -> Interpretation {
    Interpretation::new(
        "nat_binary",
        DataDomain::new("naturals", DomainKind::Nat),
        "tm",
        |tuple| Ok(Config::Tape(encode_nat_binary_tuple(tuple)?)),
        |config, k| decode_nat_binary_tuple(tape_of(config)?, k),
    )
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug)]
pub enum CheckStatus {
    /// Map defined, program terminated on the encoded output.
    Agree { output: Vec<Value> },
    /// Map undefined, program stuck or out of budget — partiality preserved.
    UndefinedAgree,
    /// Any disagreement; `outcome` describes what the run actually did.
    Disagree {
        expected: Option<Vec<Value>>,
        got: Option<Vec<Value>>,
        outcome: String,
    },
}

#[derive(Clone, Debug)]
pub struct MapCheck {
    pub map: String,
    pub input: Vec<Value>,
    pub status: CheckStatus,
    pub trace: Trace,
}

impl MapCheck {
    pub fn ok(&self) -> bool {
        !matches!(self.status, CheckStatus::Disagree { .. })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub interpretation: String,
    pub budget: usize,
    pub checks: Vec<MapCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(MapCheck::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &MapCheck> {
        self.checks.iter().filter(|c| !c.ok())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut maps: Vec<&str> = Vec::new();
        for c in &self.checks {
            if !maps.contains(&c.map.as_str()) {
                maps.push(&c.map);
            }
        }
        for m in maps {
            let total = self.checks.iter().filter(|c| c.map == m).count();
            let agreed = self
                .checks
                .iter()
                .filter(|c| c.map == m && matches!(c.status, CheckStatus::Agree { .. }))
                .count();
            let partial = self
                .checks
                .iter()
                .filter(|c| c.map == m && matches!(c.status, CheckStatus::UndefinedAgree))
                .count();
            let failed = total - agreed - partial;
            out.push_str(&format!(
                "map `{m}`: {total} inputs, {agreed} agree, {partial} agree-undefined, {failed} disagree\n"
            ));
        }
        for c in self.failures() {
            let inputs: Vec<String> = c.input.iter().map(Value::render).collect();
            if let CheckStatus::Disagree { expected, got, outcome } = &c.status {
                let exp = match expected {
                    Some(vs) => {
                        let vs: Vec<String> = vs.iter().map(Value::render).collect();
                        vs.join(",")
                    }
                    None => "undefined".into(),
                };
                let got = match got {
                    Some(vs) => {
                        let vs: Vec<String> = vs.iter().map(Value::render).collect();
                        vs.join(",")
                    }
                    None => "no decodable output".into(),
                };
                out.push_str(&format!(
                    "  `{}`({}) expected {exp}, got {got} ({outcome})\n",
                    c.map,
                    inputs.join(",")
                ));
            }
        }
        out
    }
}

fn cartesian(base: &[Value], k: usize) -> Vec<Vec<Value>> {
    let mut out: Vec<Vec<Value>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * base.len());
        for prefix in &out {
            for v in base {
                let mut t = prefix.clone();
                t.push(v.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn check_one(
    model: &ModelOfComputation,
    interp: &Interpretation,
    map: &StructuralMap,
    program: &Program,
    input: Vec<Value>,
    budget: usize,
) -> Result<MapCheck> {
    let expected = map.apply(&input)?;
    let start = interp.encode(&input)?;
    let trace = run(model, program, &start, budget)?;
    let status = match (&expected, &trace.outcome) {
        (Some(want), Outcome::Terminated { config, .. }) => {
            match interp.decode(config, map.im) {
                Ok(got) if got == *want => CheckStatus::Agree { output: got },
                Ok(got) => CheckStatus::Disagree {
                    expected: expected.clone(),
                    got: Some(got),
                    outcome: "terminated on the wrong output".into(),
                },
                Err(e) => CheckStatus::Disagree {
                    expected: expected.clone(),
                    got: None,
                    outcome: format!("terminated but output does not decode: {e}"),
                },
            }
        }
        (Some(_), Outcome::Stuck { .. }) => CheckStatus::Disagree {
            expected: expected.clone(),
            got: None,
            outcome: "stuck".into(),
        },
        (Some(_), Outcome::OutOfBudget) => CheckStatus::Disagree {
            expected: expected.clone(),
            got: None,
            outcome: format!("no termination within budget {budget}"),
        },
        (None, Outcome::Terminated { config, .. }) => CheckStatus::Disagree {
            expected: None,
            got: interp.decode(config, map.im).ok(),
            outcome: "terminated where the map is undefined".into(),
        },
        (None, _) => CheckStatus::UndefinedAgree,
    };
    Ok(MapCheck { map: map.name.clone(), input, status, trace })
}

/// Verifies each `(map, program)` pair on every input tuple over the
/// interpretation's domain up to `bound`, within `budget` steps per run.
pub fn verify_implementation(
    model: &ModelOfComputation,
    interp: &Interpretation,
    pairs: &[(StructuralMap, Program)],
    bound: u64,
    budget: usize,
) -> Result<VerificationReport> {
    if model.name != interp.model {
        return Err(Error::ModelMismatch(format!(
            "interpretation `{}` targets model `{}`, got `{}`",
            interp.name, interp.model, model.name
        )));
    }
    let base = interp.domain.enumerate(bound);
    let mut checks = Vec::new();
    for (map, program) in pairs {
        program.validate_against(model)?;
        let inputs = cartesian(&base, map.dom);
        let results = map_items(inputs, |input| {
            check_one(model, interp, map, program, input, budget)
        });
        for r in results {
            checks.push(r?);
        }
    }
    Ok(VerificationReport {
        interpretation: interp.name.clone(),
        budget,
        checks,
    })
}

/// Looks up maps by name in `structure` and programs in `programs`, then
/// verifies the named subset.
pub fn verify_named(
    model: &ModelOfComputation,
    interp: &Interpretation,
    structure: &AbstractDataStructure,
    programs: &IndexMap<String, Program>,
    names: &[&str],
    bound: u64,
    budget: usize,
) -> Result<VerificationReport> {
    let mut pairs = Vec::with_capacity(names.len());
    for name in names {
        let map = structure.map(name)?.clone();
        let program = programs
            .get(*name)
            .cloned()
            .ok_or_else(|| Error::MissingProgram(name.to_string()))?;
        pairs.push((map, program));
    }
    verify_implementation(model, interp, &pairs, bound, budget)
}

// ---------------------------------------------------------------------------
// Machine programs for the built-in structures

fn tm_program(states: &[&str], initial: &str, terminal: &str, edges: &[(&str, &str, &str)]) -> Program {
    Program::new(
        "tm",
        states.iter().map(|s| s.to_string()).collect(),
        initial,
        terminal,
        edges.iter().map(|(f, t, l)| Edge::new(*f, *t, *l)).collect(),
    )
    .expect("built-in machine programs are well-formed")
}

/// Accepts exactly the tapes holding boolean 0; leaves the tape unchanged.
pub fn tm_read0() -> Program {
    tm_program(&["i", "t"], "i", "t", &[("i", "t", "read_0")])
}

/// Accepts exactly the tapes holding boolean 1; leaves the tape unchanged.
pub fn tm_read1() -> Program {
    tm_program(&["i", "t"], "i", "t", &[("i", "t", "read_1")])
}

/// Boolean negation in place at position 0.
pub fn tm_not() -> Program {
    tm_program(
        &["i", "a", "b", "t"],
        "i",
        "t",
        &[
            ("i", "a", "read_0"),
            ("a", "t", "write_1"),
            ("i", "b", "read_1"),
            ("b", "t", "write_0"),
        ],
    )
}

/// Boolean conjunction of the cells at positions 0 and 2: erases the second
/// argument and leaves the result at position 0.
pub fn tm_and() -> Program {
    tm_program(
        &[
            "i", "a0", "p1", "p2", "p3", "p4", "p5", "a1", "q1", "q2", "r1", "r2", "r3", "r4",
            "t",
        ],
        "i",
        "t",
        &[
            // First argument 0: the result is 0 whatever the second says.
            ("i", "a0", "read_0"),
            ("a0", "p1", "left"),
            ("p1", "p2", "left"),
            ("p2", "p3", "write_blank"),
            ("p3", "p4", "right"),
            ("p4", "p5", "right"),
            ("p5", "t", "write_0"),
            // First argument 1: the result is the second argument.
            ("i", "a1", "read_1"),
            ("a1", "q1", "left"),
            ("q1", "q2", "left"),
            ("q2", "p2", "read_0"),
            ("q2", "r1", "read_1"),
            ("r1", "r2", "write_blank"),
            ("r2", "r3", "right"),
            ("r3", "r4", "right"),
            ("r4", "t", "write_1"),
        ],
    )
}

/// Successor on unary naturals: appends one `1` to the block and returns the
/// head to position 0.  Runs in `4n + 10` steps on input `n`.
pub fn tm_succ_unary() -> Program {
    tm_program(
        &["scan", "m", "w", "back", "b", "f", "t"],
        "scan",
        "t",
        &[
            ("scan", "m", "read_1"),
            ("m", "scan", "left"),
            ("scan", "w", "read_blank"),
            ("w", "back", "write_1"),
            ("back", "b", "read_1"),
            ("b", "back", "right"),
            ("back", "f", "read_blank"),
            ("f", "t", "left"),
        ],
    )
}

/// The standard bundle of machine implementations for boolean maps, keyed by
/// the map names of the boolean structure.
pub fn tm_bool_programs() -> IndexMap<String, Program> {
    let mut out = IndexMap::new();
    out.insert("read0".to_string(), tm_read0());
    out.insert("read1".to_string(), tm_read1());
    out.insert("not".to_string(), tm_not());
    out.insert("and".to_string(), tm_and());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{booleans, naturals};
    use crate::model::tm_model;
    use proptest::prelude::*;

    #[test]
    fn unary_and_binary_encodings_round_trip() {
        for k in 0..3usize {
            for seeds in cartesian(
                &[Value::Nat(0), Value::Nat(1), Value::Nat(5), Value::Nat(12)],
                k,
            ) {
                let unary = encode_nat_unary_tuple(&seeds).unwrap();
                assert_eq!(decode_nat_unary_tuple(&unary, k).unwrap(), seeds);
                let binary = encode_nat_binary_tuple(&seeds).unwrap();
                assert_eq!(decode_nat_binary_tuple(&binary, k).unwrap(), seeds);
            }
        }
        // Spot checks of the concrete layouts.
        assert_eq!(
            encode_nat_unary_tuple(&[Value::Nat(2), Value::Nat(0)])
                .unwrap()
                .render(),
            "111*1"
        );
        assert_eq!(
            encode_nat_binary_tuple(&[Value::Nat(6), Value::Nat(0)])
                .unwrap()
                .render(),
            "110*0"
        );
    }

    #[test]
    fn strict_decoding_rejects_junk_and_misplaced_heads() {
        let good = encode_nat_unary_tuple(&[Value::Nat(1)]).unwrap();
        assert!(decode_nat_unary_tuple(&good, 1).is_ok());
        // Junk beyond the block.
        let junk = good.shift_right().write(Symbol::One).shift_left();
        assert!(decode_nat_unary_tuple(&junk, 1).is_err());
        // Same content, head one cell off.
        assert!(decode_nat_unary_tuple(&good.shift_left(), 1).is_err());
    }

    #[test]
    fn boolean_programs_agree_with_their_maps() {
        let report = verify_named(
            &tm_model(),
            &delta_bool(),
            &booleans(),
            &tm_bool_programs(),
            &["read0", "read1", "not", "and"],
            1,
            1_000,
        )
        .unwrap();
        assert!(report.passed(), "{}", report.render());
        // read0 is undefined at 1; that check must be an UndefinedAgree.
        assert!(report.checks.iter().any(|c| {
            c.map == "read0"
                && c.input == vec![Value::Nat(1)]
                && matches!(c.status, CheckStatus::UndefinedAgree)
        }));
    }

    #[test]
    fn unary_successor_is_certified_exhaustively() {
        let pairs = vec![(naturals().map("succ").unwrap().clone(), tm_succ_unary())];
        let report =
            verify_implementation(&tm_model(), &delta_nat_unary(), &pairs, 30, 100_000).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert_eq!(report.checks.len(), 31);
    }

    #[test]
    fn verifier_catches_wrong_and_partial_programs() {
        // A "successor" that just terminates leaves the input unchanged.
        let lazy = tm_program(&["i", "t"], "i", "t", &[("i", "t", "read_1")]);
        let pairs = vec![(naturals().map("succ").unwrap().clone(), lazy)];
        let report =
            verify_implementation(&tm_model(), &delta_nat_unary(), &pairs, 5, 1_000).unwrap();
        assert!(!report.passed());
        assert!(report
            .failures()
            .all(|c| matches!(&c.status, CheckStatus::Disagree { got: Some(g), .. } if *g == c.input)));

        // A program that terminates where the map is undefined is flagged too.
        let eager = tm_program(&["i", "t"], "i", "t", &[("i", "t", "write_1")]);
        let pairs = vec![(booleans().map("read0").unwrap().clone(), eager)];
        let report = verify_implementation(&tm_model(), &delta_bool(), &pairs, 1, 1_000).unwrap();
        assert!(report.checks.iter().any(|c| {
            c.input == vec![Value::Nat(1)]
                && matches!(
                    &c.status,
                    CheckStatus::Disagree { expected: None, outcome, .. }
                        if outcome.contains("undefined")
                )
        }));
    }

    proptest! {
        #[test]
        fn binary_encoding_is_positional(n in 0u64..100_000) {
            let tape = encode_nat_binary_tuple(&[Value::Nat(n)]).unwrap();
            prop_assert_eq!(decode_nat_binary_tuple(&tape, 1).unwrap(), vec![Value::Nat(n)]);
        }
    }
}
