//! Models of computation: a configuration space acted on by a finite set of
//! named partial instructions.
//!
//! Two spaces are built in: bi-infinite tapes (the tape-machine model) and
//! variable environments over an abstract data domain (the models induced by
//! data structures, see [`crate::data::induced_model`]).  Compound actions are
//! words over the instruction alphabet, applied left to right; a word is
//! undefined at a point as soon as one of its letters is.

use std::collections::BTreeSet;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::data::{DataDomain, Environment};
use crate::error::{Error, Result};
use crate::tape::{Symbol, Tape};

/// A point of a configuration space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Config {
    Tape(Tape),
    Env(Environment),
}

impl Config {
    pub fn as_tape(&self) -> Option<&Tape> {
        match self {
            Config::Tape(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_env(&self) -> Option<&Environment> {
        match self {
            Config::Env(e) => Some(e),
            _ => None,
        }
    }
}

/// Describes which configurations a model acts on and how they are written.
#[derive(Clone, Debug)]
pub enum SpaceDescriptor {
    /// Bi-infinite tapes over `{0, 1, *}`.
    Tapes,
    /// Environments binding exactly `vars` (in order) to points of `domain`.
    Environments { vars: Vec<String>, domain: DataDomain },
}

impl SpaceDescriptor {
    pub fn admits(&self, config: &Config) -> bool {
        match (self, config) {
            (SpaceDescriptor::Tapes, Config::Tape(_)) => true,
            (SpaceDescriptor::Environments { vars, domain }, Config::Env(env)) => {
                env.vars().eq(vars.iter().map(|v| v.as_str()))
                    && env.values().all(|v| domain.contains(v))
            }
            _ => false,
        }
    }

    pub fn render(&self, config: &Config) -> String {
        match config {
            Config::Tape(t) => t.render(),
            Config::Env(e) => e.render(),
        }
    }

    pub fn parse_config(&self, text: &str) -> Result<Config> {
        match self {
            SpaceDescriptor::Tapes => Ok(Config::Tape(Tape::parse(text)?)),
            SpaceDescriptor::Environments { vars, domain } => {
                let env = Environment::parse(text, domain)?;
                let got: Vec<&str> = env.vars().collect();
                let want: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
                if got != want {
                    return Err(Error::Parse(format!(
                        "environment binds ({}) but the model needs ({})",
                        got.join(","),
                        want.join(",")
                    )));
                }
                Ok(Config::Env(env))
            }
        }
    }
}

type InstructionFn = Arc<dyn Fn(&Config) -> Option<Config> + Send + Sync>;

/// A named partial map on the configuration space.
#[derive(Clone)]
pub struct Instruction {
    pub name: String,
    apply: InstructionFn,
}

impl Instruction {
    pub fn new(name: impl Into<String>, f: impl Fn(&Config) -> Option<Config> + Send + Sync + 'static) -> Instruction {
        Instruction { name: name.into(), apply: Arc::new(f) }
    }

    pub fn apply(&self, x: &Config) -> Option<Config> {
        (self.apply)(x)
    }
}

impl std::fmt::Debug for Instruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Instruction({})", self.name)
    }
}

/// A finite alphabet of partial instructions acting on one configuration
/// space.  `disjoint` records pairs whose domains are known not to overlap;
/// the determinism report in [`crate::program`] relies on it.
#[derive(Clone, Debug)]
pub struct ModelOfComputation {
    pub name: String,
    pub space: SpaceDescriptor,
    instructions: IndexMap<String, Instruction>,
    disjoint: BTreeSet<(String, String)>,
}

impl ModelOfComputation {
    pub fn new(name: impl Into<String>, space: SpaceDescriptor) -> ModelOfComputation {
        ModelOfComputation {
            name: name.into(),
            space,
            instructions: IndexMap::new(),
            disjoint: BTreeSet::new(),
        }
    }

    pub fn add_instruction(&mut self, instruction: Instruction) {
        self.instructions.insert(instruction.name.clone(), instruction);
    }

    /// Declares that two instructions are never both defined at a point.
    pub fn declare_disjoint(&mut self, a: &str, b: &str) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.disjoint.insert((a.to_string(), b.to_string()));
    }

    pub fn known_disjoint(&self, a: &str, b: &str) -> bool {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.disjoint.contains(&(a.to_string(), b.to_string()))
    }

    pub fn has_instruction(&self, name: &str) -> bool {
        self.instructions.contains_key(name)
    }

    pub fn instruction_names(&self) -> impl Iterator<Item = &str> {
        self.instructions.keys().map(|k| k.as_str())
    }

    pub fn apply(&self, instruction: &str, x: &Config) -> Result<Option<Config>> {
        let ins = self
            .instructions
            .get(instruction)
            .ok_or_else(|| Error::UnknownInstruction(instruction.to_string()))?;
        Ok(ins.apply(x))
    }

    /// Applies a word left to right; undefined as soon as one letter is.
    pub fn apply_word(&self, word: &[String], x: &Config) -> Result<Option<Config>> {
        let mut current = x.clone();
        for letter in word {
            match self.apply(letter, &current)? {
                Some(next) => current = next,
                None => return Ok(None),
            }
        }
        Ok(Some(current))
    }
}

/// The tape-machine model: head shifts, writes, and read guards at position 0.
///
/// `right` moves the head one cell rightward, which relocates the origin one
/// cell leftward relative to the content; `read_c` is the partial identity
/// defined when position 0 holds `c`.
pub fn tm_model() -> ModelOfComputation {
    let mut model = ModelOfComputation::new("tm", SpaceDescriptor::Tapes);
    let on_tape = |f: fn(&Tape) -> Option<Tape>| {
        move |x: &Config| x.as_tape().and_then(f).map(Config::Tape)
    };
    model.add_instruction(Instruction::new("right", on_tape(|t| Some(t.shift_right()))));
    model.add_instruction(Instruction::new("left", on_tape(|t| Some(t.shift_left()))));
    for (suffix, sym) in [("0", Symbol::Zero), ("1", Symbol::One), ("blank", Symbol::Blank)] {
        model.add_instruction(Instruction::new(
            format!("write_{suffix}"),
            move |x: &Config| x.as_tape().map(|t| Config::Tape(t.write(sym))),
        ));
        model.add_instruction(Instruction::new(
            format!("read_{suffix}"),
            move |x: &Config| x.as_tape().and_then(|t| t.read(sym)).map(Config::Tape),
        ));
    }
    model.declare_disjoint("read_0", "read_1");
    model.declare_disjoint("read_0", "read_blank");
    model.declare_disjoint("read_1", "read_blank");
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tape(lit: &str) -> Config {
        Config::Tape(Tape::parse(lit).unwrap())
    }

    #[test]
    fn write_then_read_guard_passes() {
        let m = tm_model();
        let word = vec!["write_1".to_string(), "read_1".to_string()];
        let out = m.apply_word(&word, &Config::Tape(Tape::blank())).unwrap();
        assert_eq!(out, Some(tape("1")));
        let blocked = vec!["write_1".to_string(), "read_0".to_string()];
        assert_eq!(m.apply_word(&blocked, &Config::Tape(Tape::blank())).unwrap(), None);
    }

    #[test]
    fn guards_are_partial_identities() {
        let m = tm_model();
        let x = tape("1^01");
        assert_eq!(m.apply("read_0", &x).unwrap(), Some(x.clone()));
        assert_eq!(m.apply("read_1", &x).unwrap(), None);
        assert_eq!(m.apply("read_blank", &x).unwrap(), None);
    }

    #[test]
    fn unknown_instruction_is_an_error() {
        let m = tm_model();
        assert!(matches!(
            m.apply("jump", &tape("1")),
            Err(Error::UnknownInstruction(_))
        ));
    }

    #[test]
    fn disjointness_covers_exactly_the_read_family() {
        let m = tm_model();
        assert!(m.known_disjoint("read_0", "read_1"));
        assert!(m.known_disjoint("read_blank", "read_0"));
        assert!(!m.known_disjoint("read_0", "read_0"));
        assert!(!m.known_disjoint("write_0", "write_1"));
        assert!(!m.known_disjoint("right", "left"));
    }

    fn arb_word() -> impl Strategy<Value = Vec<String>> {
        let names = [
            "right", "left", "write_0", "write_1", "write_blank", "read_0", "read_1",
            "read_blank",
        ];
        proptest::collection::vec(
            (0..names.len()).prop_map(move |i| names[i].to_string()),
            0..6,
        )
    }

    fn arb_tape() -> impl Strategy<Value = Tape> {
        (proptest::collection::vec(0u8..3, 0..12), -4i64..12).prop_map(|(cells, shift)| {
            Tape::from_cells(cells.iter().enumerate().map(|(i, c)| {
                (
                    i as i64 - shift,
                    match c {
                        0 => Symbol::Zero,
                        1 => Symbol::One,
                        _ => Symbol::Blank,
                    },
                )
            }))
        })
    }

    proptest! {
        #[test]
        fn word_concatenation_is_composition(w1 in arb_word(), w2 in arb_word(), t in arb_tape()) {
            let m = tm_model();
            let x = Config::Tape(t);
            let mut joined = w1.clone();
            joined.extend(w2.iter().cloned());
            let split = match m.apply_word(&w1, &x).unwrap() {
                Some(mid) => m.apply_word(&w2, &mid).unwrap(),
                None => None,
            };
            prop_assert_eq!(m.apply_word(&joined, &x).unwrap(), split);
        }
    }
}
