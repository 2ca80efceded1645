//! Models of computation, edge-labelled control graphs, and the machinery to
//! relate them: implementation checking against abstract data structures,
//! glueing of component programs along an algorithm's control graph, and
//! succinctness analysis of the result.
//!
//! The crate is organized bottom-up:
//!
//! * [`tape`], [`model`] — configuration spaces and instruction alphabets,
//!   including the built-in tape machine;
//! * [`program`] — control graphs and their breadth-first branch execution;
//! * [`data`], [`recfun`], [`gf2`] — abstract data structures, their maps,
//!   and the models they induce on variable environments;
//! * [`interp`] — encodings of data into tape configurations and sampled
//!   verification that programs implement structural maps;
//! * [`algorithm`], [`logic`] — syntactic/semantic algorithms and
//!   theory-level specifications with sampled model checking;
//! * [`glueing`], [`iso`] — assembling programs from per-label components and
//!   recognizing such assemblies up to isomorphism;
//! * [`succinct`] — size bounds, recovery of small algorithms from flat
//!   programs, and census statistics;
//! * [`corpus`] — the built-in programs, algorithms, theories and bindings
//!   used by the demos and the test-suite.

pub mod algorithm;
pub mod corpus;
pub mod data;
pub mod error;
pub mod gf2;
pub mod glueing;
pub mod interp;
pub mod iso;
pub mod logic;
pub mod model;
pub mod par;
pub mod program;
pub mod recfun;
pub mod succinct;
pub mod tape;
pub mod value;

pub use error::{Error, Result};
