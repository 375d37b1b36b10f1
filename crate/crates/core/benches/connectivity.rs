//! Sequential against rayon-parallel execution for the per-pair flow tables.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hsplit_core::flow::{conn_table_elements_with, conn_table_hyper_with};
use hsplit_core::oracle::{random_element_instance, random_hypergraph, GenParams};
use hsplit_core::splitoff::{complete_split_off_with, Certify, SplitOptions};
use hsplit_core::{Exec, Hypergraph, VertexId};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn busiest_vertex(h: &Hypergraph) -> VertexId {
    h.vertices().max_by_key(|&v| (h.degree(v), std::cmp::Reverse(v))).unwrap()
}

fn hyper_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("conn_table_hyper");
    for (n, m) in [(24, 60), (48, 160)] {
        let h = random_hypergraph(GenParams { n, m, r: 4, seed: 7 }).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, format!("n{n}_m{m}")), &h, |b, h| {
                b.iter(|| conn_table_hyper_with(black_box(h), exec))
            });
        }
    }
    group.finish();
}

fn element_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("conn_table_elements");
    let inst = random_element_instance(GenParams { n: 60, m: 240, r: 2, seed: 3 }).unwrap();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| conn_table_elements_with(black_box(&inst), exec)));
    }
    group.finish();
}

fn split_off(c: &mut Criterion) {
    let mut group = c.benchmark_group("complete_split_off");
    group.sample_size(10);
    let h = random_hypergraph(GenParams { n: 14, m: 30, r: 4, seed: 11 }).unwrap();
    let s = busiest_vertex(&h);
    for certify in [Certify::Off, Certify::On] {
        for (name, exec) in POLICIES {
            let opts = SplitOptions { certify, exec };
            group.bench_function(BenchmarkId::new(name, format!("{certify:?}")), |b| {
                b.iter(|| complete_split_off_with(black_box(&h), s, opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, hyper_tables, element_tables, split_off);
criterion_main!(benches);
