use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nilschober_bench::{two_part_pairs, EXPRESSIONS};
use nilschober_core::oracle::oracle_fiber_for_pair;
use nilschober_core::{enumerate_shuffles, evaluate, total_fiber, Composition};

fn comp(s: &str) -> Composition {
    s.parse().expect("valid composition")
}

fn fiber(c: &mut Criterion) {
    let (a, b) = (comp("2,3"), comp("2,3"));
    c.bench_function("total fiber (2,3),(2,3)", |bench| bench.iter(|| total_fiber(black_box(&a), black_box(&b)).unwrap()));
    let pairs = two_part_pairs(6);
    c.bench_function("total fiber sweep on 6 strands", |bench| {
        bench.iter(|| pairs.iter().map(|(x, y)| total_fiber(x, y).unwrap().level_tables.len()).sum::<usize>())
    });
}

fn shuffles(c: &mut Criterion) {
    let (sigma, tau) = (comp("6,3"), comp("3,1,2,2,1"));
    c.bench_function("shuffles (6,3) over (3,1,2,2,1)", |bench| {
        bench.iter(|| enumerate_shuffles(black_box(&sigma), black_box(&tau)).unwrap().len())
    });
    let (sigma, tau) = (comp("7"), comp("1,1,1,1,1,1,1"));
    c.bench_function("shuffles (7) over (1^7)", |bench| {
        bench.iter(|| enumerate_shuffles(black_box(&sigma), black_box(&tau)).unwrap().len())
    });
}

fn rewriting(c: &mut Criterion) {
    let nh4 = comp("4");
    for (k, expr) in EXPRESSIONS.iter().enumerate() {
        c.bench_function(&format!("normal form {k}"), |bench| bench.iter(|| evaluate(black_box(&nh4), black_box(expr)).unwrap()));
    }
}

fn oracle(c: &mut Criterion) {
    let (a, b) = (comp("2,2"), comp("2,2"));
    c.bench_function("oracle fiber (2,2),(2,2)", |bench| {
        bench.iter(|| oracle_fiber_for_pair(black_box(&a), black_box(&b)).unwrap().tables.len())
    });
}

criterion_group!(benches, fiber, shuffles, rewriting, oracle);
criterion_main!(benches);
