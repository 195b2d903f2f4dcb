use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ordtree_core::space::load_space;
use ordtree_core::verifier::{oracle_suite, Sampler};
use ordtree_core::{Ordinal, SuiteConfig};

fn ordinals(c: &mut Criterion) {
    let a = Ordinal::parse("w2*2 + w1*w + w^2*3 + 7").unwrap();
    let b = Ordinal::parse("w1*w + w*4 + 1").unwrap();
    c.bench_function("ordinal_add", |bench| bench.iter(|| black_box(&a) + black_box(&b)));
    c.bench_function("ordinal_cmp", |bench| bench.iter(|| black_box(&a).cmp(black_box(&b))));
    c.bench_function("ordinal_parse", |bench| {
        bench.iter(|| Ordinal::parse(black_box("w2*2 + w1*w + w^2*3 + 7")).unwrap())
    });
}

fn space_kernels(c: &mut Criterion) {
    let t = load_space("builtin:r1").unwrap();
    let mut s = Sampler::new(&t, 1);
    let inputs: Vec<_> = (0..64).map(|_| (s.set(4), s.point(), s.function(4))).collect();
    c.bench_function("retract", |bench| {
        bench.iter(|| {
            for (a, p, _) in &inputs {
                black_box(t.retract(a, p).unwrap());
            }
        })
    });
    c.bench_function("project", |bench| {
        bench.iter(|| {
            for (a, _, f) in &inputs {
                black_box(t.project(a, f).unwrap());
            }
        })
    });
    c.bench_function("strong_reconstruct", |bench| {
        bench.iter(|| {
            for (_, _, f) in &inputs {
                black_box(t.strong_reconstruct(f).unwrap());
            }
        })
    });
}

fn suites(c: &mut Criterion) {
    let t = load_space("seg:w2").unwrap();
    let cfg = SuiteConfig {
        budget: 50,
        ..SuiteConfig::default()
    };
    c.bench_function("oracle_suite_50", |bench| bench.iter(|| oracle_suite(&t, "seg:w2", &cfg)));
}

criterion_group!(benches, ordinals, space_kernels, suites);
criterion_main!(benches);
