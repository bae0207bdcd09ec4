use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use perfect_forest::forest::{find_perfect_forest_with, FinderOptions};
use perfect_forest::io::generate_random_graph;
use perfect_forest::oracle::{enumerate_perfect_forests, exhaustive_theorem_check, DEFAULT_VERTEX_CAP};
use perfect_forest::{Execution, Graph};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_check_n6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| exhaustive_theorem_check(black_box(6), DEFAULT_VERTEX_CAP, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_enumerate(c: &mut Criterion) {
    let g = generate_random_graph(12, 0.15, 5).unwrap();
    let mut group = c.benchmark_group(format!("enumerate_m{}", g.size()));
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| enumerate_perfect_forests(black_box(&g), 24, exec).unwrap()));
    }
    group.finish();
}

/// Many disjoint random components, so per-component work can spread out.
fn union_of_components(parts: usize, n: usize, seed: u64) -> Graph {
    let mut pairs = Vec::new();
    for k in 0..parts {
        let g = generate_random_graph(n, 0.05, seed + k as u64).unwrap();
        pairs.extend(g.edges().iter().map(|e| (e.lo() + k * n, e.hi() + k * n)));
    }
    Graph::new(parts * n, pairs).unwrap()
}

fn bench_find(c: &mut Criterion) {
    let mut group = c.benchmark_group("find");
    for (parts, n) in [(1, 10_000), (64, 200)] {
        let g = if parts == 1 {
            generate_random_graph(n, 20_000.0 / 49_985_001.0, 2024).unwrap()
        } else {
            union_of_components(parts, n, 1)
        };
        for (name, exec) in MODES {
            let opts = FinderOptions {
                execution: exec,
                ..FinderOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(name, format!("{parts}x{n}")), &g, |b, g| {
                b.iter(|| find_perfect_forest_with(g, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_exhaustive, bench_enumerate, bench_find);
criterion_main!(benches);
