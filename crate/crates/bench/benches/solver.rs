use criterion::{criterion_group, criterion_main, Criterion};
use ns_galerkin::presets::random_with_norm_v;
use ns_galerkin::solvers::{solve_nse, ForcingSpec, Scheme, SolverConfig};
use ns_galerkin::ModeSet;

fn hundred_steps(c: &mut Criterion) {
    let modes = ModeSet::new(2).unwrap();
    let y0 = random_with_norm_v(&modes, 5, 2.0, 1.0);
    let mut group = c.benchmark_group("solve_nse_100_steps");
    group.sample_size(20);
    for (name, scheme) in [("rk4", Scheme::Rk4), ("rk2", Scheme::Rk2)] {
        let config = SolverConfig::new(0.1, 0.1, 1e-3, 2).with_scheme(scheme);
        group.bench_function(name, |b| b.iter(|| solve_nse(&y0, &ForcingSpec::Zero, &config).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, hundred_steps);
criterion_main!(benches);
