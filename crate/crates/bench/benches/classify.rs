use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cyclotoric::kp::{classify_kp, KpOptions};
use cyclotoric::kq::{classify_kq, KqOptions};
use cyclotoric::{bvec, facets, CycloParams};
use num_bigint::BigInt;
use std::hint::black_box;

fn params(d: usize, tau: &[i64]) -> CycloParams {
    CycloParams::new(d, tau.iter().map(|&t| BigInt::from(t)).collect()).unwrap()
}

fn instances() -> Vec<(&'static str, CycloParams)> {
    vec![
        ("d2_n3", params(2, &[0, 1, 3])),
        ("d2_n6", params(2, &[0, 1, 3, 4, 6, 7])),
        ("d3_n5", params(3, &[0, 1, 2, 4, 5])),
        ("d4_n6", params(4, &[0, 1, 2, 3, 4, 6])),
    ]
}

fn bench_faces(c: &mut Criterion) {
    let mut g = c.benchmark_group("faces");
    for (name, p) in instances() {
        g.bench_with_input(BenchmarkId::new("facets", name), &p, |b, p| b.iter(|| facets(black_box(p))));
        let s: Vec<usize> = (1..=p.n()).collect();
        g.bench_with_input(BenchmarkId::new("bvec", name), &p, |b, p| b.iter(|| bvec(black_box(&s), p).unwrap()));
    }
    g.finish();
}

fn bench_classify(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    g.sample_size(10);
    for (name, p) in instances() {
        g.bench_with_input(BenchmarkId::new("kp", name), &p, |b, p| {
            b.iter(|| classify_kp(black_box(p), &KpOptions::default()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("kq", name), &p, |b, p| {
            b.iter(|| classify_kq(black_box(p), &KqOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_faces, bench_classify);
criterion_main!(benches);
