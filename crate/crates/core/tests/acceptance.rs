//! End-to-end acceptance checks, one per numbered criterion, each printing a
//! single pass/fail line.  Every check compares library behaviour against an
//! oracle computed independently in this file (native arithmetic, standard
//! sorts, textbook Euclid) and enforces the stated wall-clock budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use algoglue::algorithm::{SemanticAlgorithm, SyntacticAlgorithm};
use algoglue::corpus::{
    census_library_program, euclidean_binding, euclidean_gcd_over, euclidean_theory, gcd_env,
    gcd_component_programs, gcd_mod_algorithm, gcd_mod_free, gcd_sub_algorithm,
    padded_gcd_components, padded_gcd_program, run_euclidean, run_gcd, run_sort,
    mergesort_algorithm, mergesort_sequential,
};
use algoglue::data::{booleans, gf2_polys, naturals};
use algoglue::glueing::{
    check_implements, compose_labellings, expected_counts, glue, glue_syntactic, unfold_semantic,
};
use algoglue::interp::{
    delta_bool, delta_nat_unary, tm_bool_programs, tm_succ_unary, verify_implementation,
    verify_named,
};
use algoglue::iso::{isomorphic, GraphView};
use algoglue::logic::check_model;
use algoglue::model::{tm_model, Config};
use algoglue::program::{run, Edge, Program};
use algoglue::recfun::{addition_term, constant_one_unary, eval, multiplication_term, Eval, RecFunTerm};
use algoglue::succinct::{algorithm_size, census, find_succinct, is_f_succinct, parse_size_function};
use algoglue::tape::{Symbol, Tape};
use algoglue::value::Value;
use algoglue::par;

fn main() {
    let criteria: &[(usize, &str, f64, fn())] = &[
        (1, "tape kernel invariants", 1.0, criterion_1),
        (2, "boolean structure truth tables", 1.0, criterion_2),
        (3, "machine implementation verifier", 5.0, criterion_3),
        (4, "glueing round trips", 10.0, criterion_4),
        (5, "two-stage composition preorder", 30.0, criterion_5),
        (6, "gcd corpus and recognition", 5.0, criterion_6),
        (7, "theory instantiation over two carriers", 10.0, criterion_7),
        (8, "mergesort unfolding", 20.0, criterion_8),
        (9, "recursive function terms", 5.0, criterion_9),
        (10, "succinctness search and census", 60.0, criterion_10),
    ];
    let mut failures = 0;
    for &(n, name, limit, body) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(body));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) if secs <= limit => {
                println!("[acceptance] criterion {n}: PASS ({name}, {secs:.2}s)");
            }
            Ok(()) => {
                failures += 1;
                println!(
                    "[acceptance] criterion {n}: FAIL ({name} exceeded {limit}s, took {secs:.2}s)"
                );
            }
            Err(_) => {
                failures += 1;
                println!("[acceptance] criterion {n}: FAIL ({name})");
            }
        }
    }
    if failures > 0 {
        println!("[acceptance] {failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("[acceptance] all 10 criteria passed");
}

fn random_tape(rng: &mut ChaCha8Rng) -> Tape {
    let len = rng.gen_range(0..=20);
    let start = rng.gen_range(-10..=10i64);
    Tape::from_cells((0..len).map(|i| {
        let sym = match rng.gen_range(0..3u8) {
            0 => Symbol::Zero,
            1 => Symbol::One,
            _ => Symbol::Blank,
        };
        (start + i, sym)
    }))
}

fn criterion_1() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for _ in 0..1000 {
        let tape = random_tape(&mut rng);
        assert_eq!(tape.shift_right().shift_left(), tape, "left undoes right");
        assert_eq!(tape.shift_left().shift_right(), tape, "right undoes left");
        for sym in [Symbol::Zero, Symbol::One, Symbol::Blank] {
            match tape.read(sym) {
                Some(t) => {
                    assert_eq!(t, tape, "a guard acts as the identity");
                    assert_eq!(t.read(sym), Some(tape.clone()), "guards are idempotent");
                    assert_eq!(tape.symbol_at(0), sym);
                }
                None => assert_ne!(tape.symbol_at(0), sym),
            }
            let written = tape.write(sym);
            assert_eq!(written.write(sym), written, "writes are projections");
            assert_eq!(written.symbol_at(0), sym);
            assert_eq!(written.read(sym), Some(written.clone()));
        }
    }
}

fn criterion_2() {
    let b = booleans();
    let apply = |name: &str, args: &[u64]| {
        let vals: Vec<Value> = args.iter().map(|&n| Value::Nat(n)).collect();
        b.map(name).unwrap().apply(&vals).unwrap()
    };
    for x in 0..=1u64 {
        assert_eq!(apply("not", &[x]), Some(vec![Value::Nat(1 - x)]));
        assert_eq!(apply("read0", &[x]).is_some(), x == 0);
        assert_eq!(apply("read1", &[x]).is_some(), x == 1);
        if let Some(out) = apply("read0", &[x]) {
            assert_eq!(out, vec![Value::Nat(x)]);
        }
        for y in 0..=1u64 {
            assert_eq!(apply("and", &[x, y]), Some(vec![Value::Nat(x & y)]));
            assert_eq!(apply("or", &[x, y]), Some(vec![Value::Nat(x | y)]));
        }
    }
}

fn criterion_3() {
    let model = tm_model();
    let budget = 100_000;

    let report = verify_named(
        &model,
        &delta_bool(),
        &booleans(),
        &tm_bool_programs(),
        &["not", "and"],
        1,
        budget,
    )
    .unwrap();
    assert!(report.passed(), "{}", report.render());

    let pairs = vec![(naturals().map("succ").unwrap().clone(), tm_succ_unary())];
    let report =
        verify_implementation(&model, &delta_nat_unary(), &pairs, 20, budget).unwrap();
    assert!(report.passed(), "{}", report.render());
    assert_eq!(report.checks.len(), 21, "successor checked on 0..=20");
}

/// A random outer shape: up to 5 states, up to 6 edges, up to 4 labels.
fn random_outer(rng: &mut ChaCha8Rng) -> SyntacticAlgorithm {
    let k = rng.gen_range(2..=5usize);
    let states: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let n_edges = rng.gen_range(1..=6usize);
    let n_labels = rng.gen_range(1..=4usize);
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..n_edges {
        let from = loop {
            let i = rng.gen_range(0..k);
            if i != 1 {
                break i; // never out of the terminal v1
            }
        };
        let to = rng.gen_range(0..k);
        let label = format!("l{}", rng.gen_range(0..n_labels));
        if !labels.contains(&label) {
            labels.push(label.clone());
        }
        edges.push(Edge::new(format!("v{from}"), format!("v{to}"), label));
    }
    SyntacticAlgorithm::new(states, "v0", "v1", labels, edges).unwrap()
}

/// A random tape-model component with up to 5 states.
fn random_component(rng: &mut ChaCha8Rng) -> Program {
    let k = rng.gen_range(2..=5usize);
    let states: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let instructions = ["right", "left", "write_1"];
    let n_edges = rng.gen_range(0..=4usize);
    let mut edges = Vec::new();
    for _ in 0..n_edges {
        let from = loop {
            let i = rng.gen_range(0..k);
            if i != 1 {
                break i;
            }
        };
        let to = rng.gen_range(0..k);
        let label = instructions[rng.gen_range(0..instructions.len())];
        edges.push(Edge::new(format!("c{from}"), format!("c{to}"), label));
    }
    Program::new("tm", states, "c0", "c1", edges).unwrap()
}

fn criterion_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x617E);
    for round in 0..200 {
        let outer = random_outer(&mut rng);
        let mut components = IndexMap::new();
        for label in outer.used_labels() {
            components.insert(label, random_component(&mut rng));
        }
        let (glued, _) = glue(&outer, &components).unwrap();
        let witness = check_implements(&glued, &outer, &components).unwrap();
        assert!(witness.is_some(), "round {round}: glued program implements its own recipe");
        let (s, e) =
            expected_counts(&outer, &components, |p| (p.states.len(), p.edges.len())).unwrap();
        assert_eq!(
            (glued.states.len(), glued.edges.len()),
            (s, e),
            "round {round}: size formulas"
        );
    }
}

fn criterion_5() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB1F01D);
    for round in 0..100 {
        let outer = random_outer(&mut rng);

        // phi: each outer label becomes a small algorithm over labels m0..m3.
        let mut phi = IndexMap::new();
        let mut inner_labels = Vec::new();
        for label in outer.used_labels() {
            let k = rng.gen_range(2..=4usize);
            let states: Vec<String> = (0..k).map(|i| format!("w{i}")).collect();
            let n_edges = rng.gen_range(1..=4usize);
            let mut edges = Vec::new();
            let mut labels = Vec::new();
            for _ in 0..n_edges {
                let from = loop {
                    let i = rng.gen_range(0..k);
                    if i != 1 {
                        break i;
                    }
                };
                let to = rng.gen_range(0..k);
                let m = format!("m{}", rng.gen_range(0..4));
                if !labels.contains(&m) {
                    labels.push(m.clone());
                }
                if !inner_labels.contains(&m) {
                    inner_labels.push(m.clone());
                }
                edges.push(Edge::new(format!("w{from}"), format!("w{to}"), m));
            }
            phi.insert(
                label,
                SyntacticAlgorithm::new(states, "w0", "w1", labels, edges).unwrap(),
            );
        }

        let mut psi = IndexMap::new();
        for m in inner_labels {
            psi.insert(m, random_component(&mut rng));
        }

        let one_stage = glue(&outer, &compose_labellings(&phi, &psi).unwrap()).unwrap().0;
        let (flattened, _) = glue_syntactic(&outer, &phi).unwrap();
        let two_stage = glue(&flattened, &psi).unwrap().0;
        assert!(
            isomorphic(&GraphView::of_program(&one_stage), &GraphView::of_program(&two_stage)),
            "round {round}: composing labellings commutes with glueing"
        );
    }
}

fn gcd_oracle(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn criterion_6() {
    let by_mod = gcd_mod_algorithm().unwrap();
    let by_sub = gcd_sub_algorithm().unwrap();
    let (model, programs) = gcd_component_programs().unwrap();
    let (glued, _) = glue(&gcd_mod_free(), &programs).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(0x6CD);
    for _ in 0..50 {
        let a = rng.gen_range(0..=1000u64);
        let b = rng.gen_range(0..=1000u64);
        let want = gcd_oracle(a, b);
        assert_eq!(run_gcd(&by_mod, a, b, 10_000).unwrap(), Some(want), "mod gcd({a},{b})");
        assert_eq!(run_gcd(&by_sub, a, b, 200_000).unwrap(), Some(want), "sub gcd({a},{b})");
        let trace = run(&model, &glued, &Config::Env(gcd_env(a, b)), 200_000).unwrap();
        let (config, _) = trace.terminated().expect("glued gcd terminates");
        assert_eq!(
            config.as_env().unwrap().get("x"),
            Some(&Value::Nat(want)),
            "glued gcd({a},{b})"
        );
    }

    let (_, target) = by_sub.program_view().unwrap();
    let witness = check_implements(&target, &gcd_mod_free(), &programs).unwrap();
    assert!(
        witness.is_some(),
        "the subtraction gcd is the remainder shape glued with its component"
    );
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros() as i64;
    loop {
        if a == 0 {
            return 0;
        }
        let da = 63 - a.leading_zeros() as i64;
        if da < db {
            return a;
        }
        a ^= b << (da - db);
    }
}

fn poly_gcd_oracle(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn criterion_7() {
    let report =
        check_model(&naturals(), &euclidean_theory(), &euclidean_binding(), 200, 0xE0).unwrap();
    assert!(report.no_counterexamples(), "{}", report.render());
    let report =
        check_model(&gf2_polys(), &euclidean_theory(), &euclidean_binding(), 200, 0xE1).unwrap();
    assert!(report.no_counterexamples(), "{}", report.render());

    let poly_gcd = euclidean_gcd_over(&gf2_polys(), 200, 0xE1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9F2);
    for _ in 0..50 {
        let a = rng.gen_range(0..64u64); // degree <= 5
        let b = rng.gen_range(0..64u64);
        let got =
            run_euclidean(&poly_gcd, Value::Poly(a), Value::Poly(b), Value::Poly(0), 10_000)
                .unwrap();
        assert_eq!(got, Some(Value::Poly(poly_gcd_oracle(a, b))), "poly gcd({a:#b},{b:#b})");
    }
}

fn criterion_8() {
    let base = mergesort_algorithm().unwrap();
    let ab = mergesort_sequential(true).unwrap();
    let ba = mergesort_sequential(false).unwrap();
    let depth = |n: usize| (n.max(1) as f64).log2().ceil() as usize + 1;

    // Unfold once per needed depth, then reuse across the samples.
    let mut ab_at: Vec<SemanticAlgorithm> = Vec::new();
    let mut ba_at: Vec<SemanticAlgorithm> = Vec::new();
    for d in 0..=depth(16) {
        ab_at.push(unfold_semantic(&ab, "sort", d).unwrap());
        ba_at.push(unfold_semantic(&ba, "sort", d).unwrap());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x50FA);
    for _ in 0..100 {
        let n = rng.gen_range(0..=16usize);
        let input: Vec<u64> = (0..n).map(|_| rng.gen_range(0..100u64)).collect();
        let mut want = input.clone();
        want.sort_unstable();
        let d = depth(n);
        let got_ab = run_sort(&ab_at[d], &input, 1_000_000).unwrap();
        let got_ba = run_sort(&ba_at[d], &input, 1_000_000).unwrap();
        let got_free = run_sort(&base, &input, 1_000_000).unwrap();
        assert_eq!(got_ab, Some(want.clone()), "unfolded (a first) sorts {input:?}");
        assert_eq!(got_ba, got_ab, "the two sequential orders agree");
        assert_eq!(got_free, got_ab, "the order-free oracle form agrees");
    }
}

fn criterion_9() {
    let add = addition_term();
    let mul = multiplication_term();
    for a in 0..=30u64 {
        for b in 0..=30u64 {
            assert_eq!(eval(&add, &[a, b], 10_000_000).unwrap(), Eval::Value(a + b));
            assert_eq!(eval(&mul, &[a, b], 10_000_000).unwrap(), Eval::Value(a * b));
        }
    }
    let searching_forever = RecFunTerm::Mu(Box::new(constant_one_unary()));
    assert_eq!(eval(&searching_forever, &[], 10_000).unwrap(), Eval::OutOfBudget);
}

fn criterion_10() {
    let (program, _) = padded_gcd_program().unwrap();
    let library = padded_gcd_components().unwrap();
    let f = parse_size_function("n/2").unwrap();

    let search = find_succinct(&program, &library, &f, 2_000_000).unwrap();
    assert!(search.complete, "search must exhaust its space");
    let witness = search.witness.expect("the padded gcd program is n/2-succinct");
    let reference = algorithm_size(&gcd_mod_algorithm().unwrap().syntax);
    assert!(
        witness.size_algorithm <= reference,
        "recovered skeleton (size {}) is no larger than the shipped gcd shape (size {reference})",
        witness.size_algorithm
    );

    // Re-verify the witness through the checker rather than trusting search.
    let components: IndexMap<String, Program> = witness
        .components
        .iter()
        .map(|(label, lib)| (label.clone(), library[lib].clone()))
        .collect();
    let verdict = is_f_succinct(&program, &witness.algorithm, &components, &f).unwrap();
    assert!(verdict.implements && verdict.succinct);

    let model = tm_model();
    let subset = vec!["right".to_string(), "write_1".to_string()];
    let mut census_library = IndexMap::new();
    census_library.insert("hop_mark_hop".to_string(), census_library_program());
    let first = census(6, &f, &model, &subset, &census_library, 100_000).unwrap();
    let second = census(6, &f, &model, &subset, &census_library, 100_000).unwrap();
    let sequential =
        par::force_sequential(|| census(6, &f, &model, &subset, &census_library, 100_000))
            .unwrap();
    assert!(first.complete);
    assert_eq!(first.to_csv(), second.to_csv(), "census output is byte-stable");
    assert_eq!(first.to_csv(), sequential.to_csv(), "parallel and sequential censuses agree");
}
