use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ortho_diffeq_bench::{int, sobolev_problem, sobolev_system};
use ortho_diffeq_core::search::linear::solve;
use ortho_diffeq_core::search::{search_jacobi_symmetric, search_laguerre_m_block, solve_nullspace, Structure};

fn solve_benches(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);

    g.bench_function("laguerre-m-order4", |b| {
        b.iter(|| search_laguerre_m_block(int(0), 4, vec![], (0..=12).collect(), vec![]).unwrap())
    });
    g.bench_function("jacobi-symmetric-alpha1-order6", |b| {
        b.iter(|| {
            search_jacobi_symmetric(int(1), 6, Structure::Monomial, true, (0..=15).collect(), vec![]).unwrap()
        })
    });

    for n_max in [8usize, 16, 25] {
        g.bench_with_input(BenchmarkId::new("sobolev-assemble", n_max), &n_max, |b, &n| {
            let p = sobolev_problem(n);
            b.iter(|| p.assemble().unwrap())
        });
        let sys = sobolev_system(n_max);
        g.bench_with_input(BenchmarkId::new("sobolev-eliminate", n_max), &sys, |b, sys| {
            b.iter(|| solve(&sys.system).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sobolev-nullspace-verified", n_max), &sys, |b, sys| {
            b.iter(|| solve_nullspace(sys).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, solve_benches);
criterion_main!(benches);
