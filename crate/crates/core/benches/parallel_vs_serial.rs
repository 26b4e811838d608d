use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dehnfill_core::charcore::characteristic_core;
use dehnfill_core::fingerprint::fingerprint;
use dehnfill_core::finite::catalog_group;
use dehnfill_core::homs::{count_homs_in, enumerate_homs_with};
use dehnfill_core::{Budgets, ExecMode, Presentation};

const MODES: [(&str, ExecMode); 2] = [("serial", ExecMode::Serial), ("parallel", ExecMode::Parallel)];

fn samples() -> Vec<(&'static str, Presentation)> {
    vec![
        (
            "trefoil",
            Presentation::from_text(&["a", "b"], &["a b a b^-1 a^-1 b^-1"]).unwrap(),
        ),
        ("free3", Presentation::from_text(&["a", "b", "c"], &[]).unwrap()),
        ("z2", Presentation::from_text(&["a", "b"], &["a b a^-1 b^-1"]).unwrap()),
    ]
}

fn homs(c: &mut Criterion) {
    let sym4 = catalog_group("Sym4").unwrap();
    let mut g = c.benchmark_group("count_homs_sym4");
    for (name, p) in samples() {
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(mode, name), &p, |b, p| {
                b.iter(|| count_homs_in(p, sym4.as_ref(), u64::MAX, exec).unwrap())
            });
        }
    }
    g.finish();

    let mut g = c.benchmark_group("enumerate_homs_sym4");
    for (name, p) in samples() {
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(mode, name), &p, |b, p| {
                b.iter(|| enumerate_homs_with(p, 4, u64::MAX, u64::MAX, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn cores_and_fingerprints(c: &mut Criterion) {
    let mut g = c.benchmark_group("characteristic_core_level4");
    g.sample_size(10);
    for (name, p) in samples() {
        for (mode, exec) in MODES {
            let budgets = Budgets {
                exec,
                ..Budgets::default()
            };
            g.bench_with_input(BenchmarkId::new(mode, name), &p, |b, p| {
                b.iter(|| characteristic_core(p, 4, &budgets).unwrap())
            });
        }
    }
    g.finish();

    let mut g = c.benchmark_group("fingerprint");
    g.sample_size(10);
    for (name, p) in samples() {
        for (mode, exec) in MODES {
            let budgets = Budgets {
                exec,
                ..Budgets::default()
            };
            g.bench_with_input(BenchmarkId::new(mode, name), &p, |b, p| {
                b.iter(|| fingerprint(p, &budgets))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, homs, cores_and_fingerprints);
criterion_main!(benches);
