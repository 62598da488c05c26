use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kepler_billiards::birkhoff::birkhoff_step;
use kepler_billiards::diagnostics::{brute_force_k_convex, check_k_convex, conjugacy_check};
use kepler_billiards::levi_civita::{lift_launch, lift_table};
use kepler_billiards::{BranchSign, Tolerances};
use kepler_billiards_bench::{billiard, focused_table, perturbed_table};

fn steps(c: &mut Criterion) {
    let tol = Tolerances::default();
    for (name, table) in [("focused", focused_table()), ("perturbed", perturbed_table())] {
        let b = billiard(table);
        let first = b.launch(0.17, 1.1).unwrap();
        c.bench_function(&format!("kepler_step/{name}"), |bn| bn.iter(|| b.step(black_box(&first)).unwrap()));
        let lifted = b.lifted().unwrap();
        let chord = lift_launch(lifted, first.t, first.outgoing, BranchSign::Plus);
        c.bench_function(&format!("birkhoff_step/{name}"), |bn| {
            bn.iter(|| birkhoff_step(lifted, black_box(&chord), &tol).unwrap())
        });
    }
}

fn orbits(c: &mut Criterion) {
    let b = billiard(perturbed_table());
    c.bench_function("simulate/perturbed/200", |bn| bn.iter(|| b.simulate(black_box(0.17), 1.1, 200).unwrap()));
    c.bench_function("conjugacy_check/perturbed/200", |bn| {
        bn.iter(|| conjugacy_check(&b, black_box(0.17), 1.1, 200).unwrap())
    });
}

fn classification(c: &mut Criterion) {
    let table = perturbed_table();
    c.bench_function("lift_table/perturbed", |bn| bn.iter(|| lift_table(black_box(&table)).unwrap()));
    c.bench_function("check_k_convex/perturbed", |bn| bn.iter(|| check_k_convex(black_box(&table)).unwrap()));
    let mut group = c.benchmark_group("brute_force_k_convex");
    group.sample_size(10);
    group
        .bench_function("perturbed/64x64x512", |bn| bn.iter(|| brute_force_k_convex(black_box(&table), (64, 64, 512))));
    group.finish();
}

criterion_group!(benches, steps, orbits, classification);
criterion_main!(benches);
