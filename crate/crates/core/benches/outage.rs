use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use swipt_core::simulate::{estimate_outage, McConfig};
use swipt_core::sweep::{run_sweep, SweepMethod, SweepSpec, SweepVariable};
use swipt_core::{analytic, Execution, Relaying, SystemParams};

fn policies() -> [(&'static str, Execution); 2] {
    [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel { threads: None }),
    ]
}

fn monte_carlo(c: &mut Criterion) {
    let p = SystemParams::reference_point();
    let mut g = c.benchmark_group("mc_outage_200k");
    g.sample_size(10);
    for mode in [Relaying::Df, Relaying::Af] {
        for (name, exec) in policies() {
            let mut cfg = McConfig::new(200_000, 1);
            cfg.exec = exec;
            g.bench_with_input(BenchmarkId::new(mode.as_str(), name), &cfg, |b, cfg| {
                b.iter(|| estimate_outage(black_box(&p), mode, cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let p = SystemParams::reference_point();
    let spec = SweepSpec {
        methods: vec![SweepMethod::Analytic, SweepMethod::Mc],
        mc_samples: 20_000,
        ..SweepSpec::new(
            SweepVariable::Alpha,
            (0..16).map(|i| 0.3 + 0.04 * f64::from(i)).collect(),
        )
    };
    let mut g = c.benchmark_group("sweep_alpha_16x2");
    g.sample_size(10);
    for (name, exec) in policies() {
        g.bench_function(name, |b| {
            b.iter(|| run_sweep(black_box(&spec), &p, exec).unwrap())
        });
    }
    g.finish();
}

fn closed_forms(c: &mut Criterion) {
    let p = SystemParams::reference_point();
    c.bench_function("analytic_both_modes", |b| {
        b.iter(|| {
            (
                analytic::outage(black_box(&p), Relaying::Df).unwrap(),
                analytic::outage(black_box(&p), Relaying::Af).unwrap(),
            )
        })
    });
}

criterion_group!(benches, monte_carlo, sweep, closed_forms);
criterion_main!(benches);
