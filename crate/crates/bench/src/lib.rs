//! Shared fixtures for the criterion benches.

use ortho_diffeq_core::search::{sobolev_laguerre_problem, ExactLinearSystem, SearchProblem};
use ortho_diffeq_core::{FamilyKind, FamilyParams, MNPoly, Rational};

pub use ortho_diffeq_core::scalar::{int, rat};

/// Members `0..=n_max` of a family, with `M` and `N` formal.
pub fn members(family: &FamilyParams, n_max: usize) -> Vec<MNPoly> {
    (0..=n_max)
        .map(|n| family.build(n).expect("valid family").value)
        .collect()
}

pub fn laguerre_mn(alpha: Rational) -> FamilyParams {
    FamilyParams::laguerre(FamilyKind::LaguerreMN, alpha).expect("alpha > -1")
}

pub fn jacobi_symmetric(alpha: Rational) -> FamilyParams {
    FamilyParams::new(FamilyKind::JacobiSymmetricMM, alpha.clone(), alpha).expect("alpha > -1")
}

/// The Sobolev-Laguerre ansatz at block orders `(4, 8, 10)` over `n = 1..=n_max`.
pub fn sobolev_problem(n_max: usize) -> SearchProblem {
    sobolev_laguerre_problem(int(0), (4, 8, 10), false, (1..=n_max).collect(), Vec::new())
        .expect("alpha = 0 is valid")
}

pub fn sobolev_system(n_max: usize) -> ExactLinearSystem {
    sobolev_problem(n_max).assemble().expect("assembles")
}
