//! Hot kernels behind the audits: spectral sums, Theta series, exact PMFs and
//! the correlation grid.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use walkarith_core::arith::sieve_build;
use walkarith_core::correlations::{delta_spectral, joint_div_exact, product_div_exact};
use walkarith_core::divprob::{div_spectral_bernoulli, div_spectral_rademacher, theta_eval};
use walkarith_core::primestats::{cramer_pnt_sim, pminus_sweep};
use walkarith_core::walkdist::pmf_exact;
use walkarith_core::{ModelSpec, ThetaVariant};

fn spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("div_spectral_bernoulli");
    for &(n, d) in &[(1_000u64, 97u64), (100_000, 997), (10_000_000, 9_973)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_d{d}")), &(n, d), |b, &(n, d)| {
            b.iter(|| div_spectral_bernoulli(black_box(n), black_box(d), 0))
        });
    }
    g.finish();
    c.bench_function("div_spectral_rademacher/M1e6_delta999", |b| {
        b.iter(|| div_spectral_rademacher(black_box(1_000_000), black_box(999)))
    });
}

fn theta(c: &mut Criterion) {
    let mut g = c.benchmark_group("theta_eval");
    for &(d, n) in &[(2u64, 4u64), (30, 4096), (4096, 4096)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("d{d}_n{n}")), &(d, n), |b, &(d, n)| {
            b.iter(|| theta_eval(black_box(d), ThetaVariant::Plain { n }, 1e-17).unwrap())
        });
    }
    g.finish();
}

fn pmf(c: &mut Criterion) {
    let mut g = c.benchmark_group("pmf_exact");
    g.sample_size(20);
    for &n in &[256u64, 4096] {
        g.bench_with_input(BenchmarkId::new("fair", n), &n, |b, &n| {
            b.iter(|| pmf_exact(&ModelSpec::fair(black_box(n))).unwrap())
        });
    }
    g.bench_function("bernoulli_rho0.3/4096", |b| {
        b.iter(|| pmf_exact(&ModelSpec::bernoulli(0.3, black_box(4096))).unwrap())
    });
    g.bench_function("cramer/2000", |b| b.iter(|| pmf_exact(&ModelSpec::cramer(black_box(2000))).unwrap()));
    g.finish();
}

fn correlations(c: &mut Criterion) {
    let mut g = c.benchmark_group("correlations");
    g.sample_size(10);
    // One n < m pair across all moduli pairs up to 12.
    g.bench_function("joint_div_exact/n30_m40_grid12", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for d in 2..=12 {
                for delta in 2..=12 {
                    s += joint_div_exact(30, 40, d, delta).unwrap();
                }
            }
            s
        })
    });
    g.bench_function("delta_spectral/n9e3_m1e4_grid12", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for d in 2..=12 {
                for delta in 2..=12 {
                    s += delta_spectral(9_000, 10_000, d, delta).unwrap();
                }
            }
            s
        })
    });
    g.bench_function("product_div_exact/n1e3_gap8_D36", |b| {
        b.iter(|| product_div_exact(black_box(1_000), 1_008, 36).unwrap())
    });
    g.finish();
}

fn arithmetic(c: &mut Criterion) {
    let mut g = c.benchmark_group("arith");
    g.sample_size(10);
    g.bench_function("sieve_build/1e7", |b| b.iter(|| sieve_build(black_box(10_000_000)).unwrap()));
    let cache = sieve_build(10_000).unwrap();
    let ys: Vec<u64> = (10..=100).step_by(10).collect();
    g.bench_function("pminus_sweep/n1e4_y10..100", |b| {
        b.iter(|| pminus_sweep(black_box(10_000), &ys, &cache).unwrap())
    });
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    g.bench_function("cramer_pnt/x1e6_4seeds", |b| {
        b.iter(|| cramer_pnt_sim(black_box(1_000_000), &[0, 1, 2, 3], 0).unwrap())
    });
    g.finish();
}

criterion_group!(benches, spectral, theta, pmf, correlations, arithmetic, simulation);
criterion_main!(benches);
