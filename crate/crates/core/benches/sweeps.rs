use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rift_core::sweep::{run_sweep, Exec, Family, SweepParams};

fn params(family: Family) -> SweepParams {
    let mut p = family.default_params();
    if p.count > 0 {
        p.count = p.count.min(100);
    }
    p
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for family in [Family::Thm1, Family::Thm3, Family::Thm4, Family::CbOracle, Family::GeoOracle] {
        let p = params(family);
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel(None))] {
            group.bench_with_input(BenchmarkId::new(family.tag(), label), &p, |b, p| {
                b.iter(|| run_sweep(family, p, exec).expect("valid parameters"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
