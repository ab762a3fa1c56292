use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hfam_core::enumerate::enumerate_family;
use hfam_core::stars::{is_member_pj, minimal_core, StarSystem};
use hfam_core::{canonical_form, is_member, parse_family, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graphs(n: usize, count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = Graph::new(n).unwrap();
            for b in 1..n {
                for a in 0..b {
                    if rng.random() {
                        g.add_edge(a, b);
                    }
                }
            }
            g
        })
        .collect()
}

fn canon(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_form");
    for n in [8, 12, 16] {
        let graphs = random_graphs(n, 64, n as u64);
        group.bench_with_input(BenchmarkId::new("random", n), &graphs, |b, gs| {
            b.iter(|| gs.iter().map(|g| canonical_form(black_box(g)).unwrap().aut_order).sum::<u64>())
        });
    }
    let symmetric = [Graph::cycle(16).unwrap(), Graph::complete_bipartite(8, 8).unwrap(), Graph::disjoint_cliques(4, 4).unwrap()];
    group.bench_function("symmetric16", |b| {
        b.iter(|| symmetric.iter().map(|g| canonical_form(black_box(g)).unwrap().aut_order).sum::<u64>())
    });
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for text in ["H(2,0)", "forb(K3)", "P(M, C)"] {
        let f = parse_family(text).unwrap();
        group.bench_with_input(BenchmarkId::new(text, 8), &f, |b, f| b.iter(|| enumerate_family(f, 8).unwrap()));
    }
    group.finish();
}

fn membership(c: &mut Criterion) {
    let mut group = c.benchmark_group("membership");
    let graphs = random_graphs(12, 64, 7);
    for text in ["H(2,1)", "H(1,1)", "P(M, C)", "forb(C5)"] {
        let f = parse_family(text).unwrap();
        group.bench_with_input(BenchmarkId::new(text, 12), &f, |b, f| {
            b.iter(|| graphs.iter().filter(|g| is_member(g, f).unwrap().member).count())
        });
    }
    let apex = StarSystem::new(Graph::complete(1).unwrap(), vec![true], false).unwrap().to_constellation();
    group.bench_function("P(J) apex 12", |b| b.iter(|| graphs.iter().filter(|g| is_member_pj(g, &apex).unwrap().member).count()));
    group.bench_function("minimal_core 12", |b| b.iter(|| graphs.iter().map(|g| minimal_core(g).size).sum::<usize>()));
    group.finish();
}

criterion_group!(benches, canon, enumeration, membership);
criterion_main!(benches);
