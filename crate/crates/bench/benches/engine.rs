use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use f2coh::algebra::RewriteSystem;
use f2coh::catalog::{bundle, space};
use f2coh::index::fh_index;
use f2coh::spectral::Page;
use f2coh_bench::{bundle_run, random_matrix};

fn linalg(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for n in [64, 256, 1024] {
        let m = random_matrix(n, n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| black_box(m.rank()))
        });
    }
    g.finish();
}

fn normalize(c: &mut Criterion) {
    for name in ["G2_SO4", "G2_T2"] {
        let p = space(name).unwrap().presentation;
        c.bench_function(&format!("normalize {name}"), |b| {
            b.iter(|| RewriteSystem::normalize(black_box(&p), 24).unwrap())
        });
    }
}

fn spectral(c: &mut Criterion) {
    for (name, n) in [("rho1", None), ("zeta_n", Some(2)), ("zeta_n", Some(3))] {
        let run = bundle_run(name, n, 24);
        let label = format!(
            "run_to_einfty {name} {}",
            n.map_or(String::new(), |n| n.to_string())
        );
        c.bench_function(label.trim(), |b| {
            b.iter(|| Page::run_to_einfty(&run.ring, &run.fiber, &run.seed, 24).unwrap())
        });
    }
}

fn index(c: &mut Criterion) {
    let mut g = c.benchmark_group("phi index");
    g.sample_size(10);
    for n in 1..=3 {
        let spec = bundle("phi_n", Some(n), None).unwrap().spec;
        g.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, s| {
            b.iter(|| fh_index(s, 10).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, linalg, normalize, spectral, index);
criterion_main!(benches);
