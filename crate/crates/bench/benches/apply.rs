use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ortho_diffeq_bench::{int, jacobi_symmetric, laguerre_mn, members, rat};
use ortho_diffeq_core::diffop::pencils::{jacobi_symmetric_mass, laguerre_annihilator, sobolev_laguerre_alpha0};

fn apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("apply");
    let sobolev = sobolev_laguerre_alpha0();
    let ys = members(&laguerre_mn(int(0)), 20);
    for n in [5usize, 10, 20] {
        g.bench_with_input(BenchmarkId::new("sobolev-order10", n), &n, |b, &n| {
            b.iter(|| sobolev.apply(black_box(&ys[n]), n))
        });
    }

    // Infinite-order pencils, truncated at the degree of the argument.
    let annihilator = laguerre_annihilator(&rat(1, 2));
    let ys = members(&laguerre_mn(rat(1, 2)), 20);
    for n in [5usize, 10, 20] {
        g.bench_with_input(BenchmarkId::new("laguerre-annihilator", n), &n, |b, &n| {
            b.iter(|| annihilator.apply(black_box(&ys[n]), n))
        });
    }

    let mass = jacobi_symmetric_mass(&rat(1, 2));
    let ys = members(&jacobi_symmetric(rat(1, 2)), 20);
    for n in [5usize, 10, 20] {
        g.bench_with_input(BenchmarkId::new("jacobi-symmetric-mass", n), &n, |b, &n| {
            b.iter(|| mass.apply(black_box(&ys[n]), n))
        });
    }
    g.finish();
}

criterion_group!(benches, apply);
criterion_main!(benches);
