use ortho_diffeq_core::diffop::pencils::{laguerre_annihilator, sobolev_laguerre_alpha0};
use ortho_diffeq_core::diffop::OperatorPencil;
use ortho_diffeq_core::scalar::int;
use ortho_diffeq_core::search::{search_sobolev_laguerre, sobolev_laguerre_problem};
use ortho_diffeq_core::BlockKey;

#[test]
fn printed_operator_lies_in_solution_set() {
    let sol = search_sobolev_laguerre(int(0), (4, 8, 10), false, (1..=25).collect(), (26..=28).collect())
        .unwrap();
    assert_eq!(sol.nullspace_dim(), 0);
    assert!(sol.holdout.passed());
    let lambda = sol.contains_pencil(&sobolev_laguerre_alpha0()).unwrap();
    assert_eq!(lambda, Some(vec![]));
}

#[test]
fn sum_conditions_admit_printed_operator() {
    let sol = search_sobolev_laguerre(int(0), (4, 8, 10), true, (1..=12).collect(), vec![]).unwrap();
    assert!(sol.contains_pencil(&sobolev_laguerre_alpha0()).unwrap().is_some());
}

/// `N (B* + M C*)` moved into the N and MN blocks.
fn shifted_annihilator() -> OperatorPencil {
    let base = laguerre_annihilator(&int(0));
    let one = base.block(BlockKey::ONE).unwrap().clone();
    let m = base.block(BlockKey::M).unwrap().clone();
    OperatorPencil::new("shifted-annihilator")
        .with_block(BlockKey::N, one)
        .with_block(BlockKey::MN, m)
}

#[test]
fn truncated_regime_contains_annihilator() {
    let train: Vec<usize> = (1..=8).collect();
    let problem = sobolev_laguerre_problem(int(0), (4, 8, 10), false, train, (9..=11).collect()).unwrap();
    let sol = problem.solve().unwrap();
    assert!(sol.nullspace_dim() > 0);
    let v = problem.encode(&shifted_annihilator()).unwrap();
    assert!(sol.nullspace_membership(&v).is_some());
    assert!(!sol.holdout.passed());
}

#[test]
fn higher_alpha_systems_are_consistent() {
    for (alpha, orders, top) in [(1, (6, 10, 14), 30), (2, (8, 12, 18), 40)] {
        let sol = search_sobolev_laguerre(int(alpha), orders, false, (1..=top).collect(), vec![top + 1, top + 2])
            .unwrap();
        eprintln!("alpha {alpha}: {:?}", sol.determination);
        assert!(sol.holdout.passed());
    }
}
