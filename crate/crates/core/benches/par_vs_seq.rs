//! Parallel-versus-sequential comparison for the three bulk sweeps: sampled
//! model checking, machine verification of a structural map, and the census
//! of succinct programs.  Each pair runs the identical workload with the
//! rayon fan-out on and off; the outputs are asserted equal once up front.

use criterion::{criterion_group, criterion_main, Criterion};
use indexmap::IndexMap;

use algoglue::corpus::{census_library_program, euclidean_binding, euclidean_theory};
use algoglue::data::naturals;
use algoglue::interp::{delta_nat_unary, tm_succ_unary, verify_implementation};
use algoglue::logic::check_model;
use algoglue::model::tm_model;
use algoglue::par::force_sequential;
use algoglue::program::Program;
use algoglue::succinct::{census, parse_size_function};

fn bench_model_check(c: &mut Criterion) {
    let structure = naturals();
    let theory = euclidean_theory();
    let binding = euclidean_binding();
    let samples = 400;

    let par = check_model(&structure, &theory, &binding, samples, 7).unwrap();
    let seq =
        force_sequential(|| check_model(&structure, &theory, &binding, samples, 7)).unwrap();
    assert_eq!(par.render(), seq.render());

    let mut group = c.benchmark_group("model_check");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| check_model(&structure, &theory, &binding, samples, 7).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            force_sequential(|| check_model(&structure, &theory, &binding, samples, 7).unwrap())
        })
    });
    group.finish();
}

fn bench_verification(c: &mut Criterion) {
    let model = tm_model();
    let interp = delta_nat_unary();
    let pairs = vec![(naturals().map("succ").unwrap().clone(), tm_succ_unary())];
    let bound = 60;
    let budget = 100_000;

    let par = verify_implementation(&model, &interp, &pairs, bound, budget).unwrap();
    let seq =
        force_sequential(|| verify_implementation(&model, &interp, &pairs, bound, budget))
            .unwrap();
    assert_eq!(par.passed(), seq.passed());

    let mut group = c.benchmark_group("verify_successor");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| verify_implementation(&model, &interp, &pairs, bound, budget).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            force_sequential(|| {
                verify_implementation(&model, &interp, &pairs, bound, budget).unwrap()
            })
        })
    });
    group.finish();
}

fn bench_census(c: &mut Criterion) {
    let model = tm_model();
    let f = parse_size_function("n/2").unwrap();
    let subset = vec!["right".to_string(), "write_1".to_string()];
    let mut library: IndexMap<String, Program> = IndexMap::new();
    library.insert("hop_mark_hop".to_string(), census_library_program());
    let budget = 100_000;

    let par = census(6, &f, &model, &subset, &library, budget).unwrap();
    let seq = force_sequential(|| census(6, &f, &model, &subset, &library, budget)).unwrap();
    assert_eq!(par.to_csv(), seq.to_csv());

    let mut group = c.benchmark_group("census_to_size_6");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| census(6, &f, &model, &subset, &library, budget).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| force_sequential(|| census(6, &f, &model, &subset, &library, budget).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_model_check, bench_verification, bench_census);
criterion_main!(benches);
