//! Constructors for the known operators.

use std::sync::Arc;

use crate::poly::{BlockKey, Poly};
use crate::scalar::{as_nonneg_integer, int, rat, Rational};

use super::coefficients::{
    coeff_jacobi_b, coeff_jacobi_c, coeff_laguerre_a, coeff_laguerre_bstar, coeff_laguerre_cstar,
};
use super::{BlockOperator, OperatorPencil};

fn finite_order(alpha: &Rational) -> Option<usize> {
    as_nonneg_integer(alpha).map(|a| 2 * a + 4)
}

/// `x D^2 + (alpha+1-x) D + n`.
pub fn classical_laguerre(alpha: &Rational) -> OperatorPencil {
    let d1 = Poly::from_coeffs(vec![alpha + int(1), int(-1)]);
    OperatorPencil::new("laguerre-classical")
        .with_block(BlockKey::ONE, BlockOperator::table(vec![d1, Poly::x()]))
        .with_eigen(Arc::new(|n| int(n as i64)))
}

/// `(1-x^2) D^2 + (beta - alpha - (alpha+beta+2) x) D + n(n+alpha+beta+1)`.
pub fn classical_jacobi(alpha: &Rational, beta: &Rational) -> OperatorPencil {
    let d1 = Poly::from_coeffs(vec![beta - alpha, -(alpha + beta + int(2))]);
    let d2 = Poly::from_ints(&[1, 0, -1]);
    let s = alpha + beta + int(1);
    OperatorPencil::new("jacobi-classical")
        .with_block(BlockKey::ONE, BlockOperator::table(vec![d1, d2]))
        .with_eigen(Arc::new(move |n| {
            let n = int(n as i64);
            &n * (&n + &s)
        }))
}

/// Classical Laguerre operator plus `M sum_i a_i D^i`; annihilates the
/// Laguerre polynomials with a point mass at the origin.
pub fn laguerre_point_mass(alpha: &Rational) -> OperatorPencil {
    let a = alpha.clone();
    let a0 = alpha.clone();
    let mass = BlockOperator::generated(
        Arc::new(move |i| coeff_laguerre_a(&a, i, 0)),
        finite_order(alpha),
    )
    .with_order_zero(Arc::new(move |n| coeff_laguerre_a(&a0, 0, n)));
    let mut p = classical_laguerre(alpha).with_block(BlockKey::M, mass);
    p.name = "laguerre-point-mass".into();
    p
}

/// `sum b*_i D^i + M sum c*_i D^i`, which annihilates every Sobolev-type
/// Laguerre polynomial of degree `n >= 1`.
pub fn laguerre_annihilator(alpha: &Rational) -> OperatorPencil {
    let a = alpha.clone();
    let ones = |_n: usize| Poly::one();
    OperatorPencil::new("laguerre-annihilator")
        .with_block(
            BlockKey::ONE,
            BlockOperator::generated(Arc::new(move |i| coeff_laguerre_bstar(&a, i)), None)
                .with_order_zero(Arc::new(ones)),
        )
        .with_block(
            BlockKey::M,
            BlockOperator::generated(Arc::new(coeff_laguerre_cstar), None)
                .with_order_zero(Arc::new(ones)),
        )
}

fn p(coeffs: &[i64], denom: i64) -> Poly {
    Poly::from_coeffs(coeffs.iter().map(|&c| rat(c, denom)).collect())
}

/// Table entry `k` holds the coefficient of `D^(k+1)`.
fn sobolev_alpha0_table(block: BlockKey) -> Vec<Poly> {
    match (block.m, block.n) {
        (0, 0) => vec![p(&[1, -1], 1), Poly::x()],
        (1, 0) => vec![
            p(&[0, -1], 1),
            p(&[0, 6, -1], 2),
            p(&[0, -2, 1], 1),
            p(&[0, 0, -1], 2),
        ],
        (0, 1) => vec![
            Poly::zero(),
            p(&[2, 0, -1], 2),
            p(&[-6, -2, 9, -1], 2),
            p(&[24, 36, -150, 34, -1], 12),
            p(&[0, -12, 81, -33, 2], 6),
            p(&[0, 0, -10, 9, -1], 2),
            p(&[0, 0, 0, -4, 1], 3),
            p(&[0, 0, 0, 0, -1], 12),
        ],
        (1, 1) => vec![
            Poly::zero(),
            p(&[0, 0, -1], 2),
            p(&[0, 0, 15, -2], 3),
            p(&[0, 0, -420, 120, -5], 24),
            p(&[0, 0, 1680, -840, 75, -1], 60),
            p(&[0, 0, -252, 224, -35, 1], 12),
            p(&[0, 0, 36, -72, 20, -1], 6),
            p(&[0, 0, 0, 72, -45, 4], 24),
            p(&[0, 0, 0, 0, 5, -1], 12),
            p(&[0, 0, 0, 0, 0, 1], 60),
        ],
        _ => Vec::new(),
    }
}

fn sobolev_alpha0_order_zero(block: BlockKey, n: usize) -> Rational {
    let n = n as i64;
    match (block.m, block.n) {
        (0, 0) => int(n),
        (1, 0) => rat(n * (n + 1), 2),
        (0, 1) => rat(n * n * (n * n - 1), 12),
        (1, 1) => rat(n * (n * n - 1) * (n + 2) * (2 * n + 1), 120),
        _ => int(0),
    }
}

/// Coefficient of `M^p N^q D^i` in the order-ten operator for the Sobolev-type
/// Laguerre polynomials at `alpha = 0`.
pub fn sobolev_alpha0_coefficient(block: BlockKey, i: usize, n: usize) -> Poly {
    if i == 0 {
        return Poly::constant(sobolev_alpha0_order_zero(block, n));
    }
    sobolev_alpha0_table(block)
        .into_iter()
        .nth(i - 1)
        .unwrap_or_default()
}

/// Order-ten operator annihilating the Sobolev-type Laguerre polynomials with `alpha = 0`.
pub fn sobolev_laguerre_alpha0() -> OperatorPencil {
    let mut pencil = OperatorPencil::new("sobolev-laguerre-alpha0");
    for key in [BlockKey::ONE, BlockKey::M, BlockKey::N, BlockKey::MN] {
        let op = BlockOperator::table(sobolev_alpha0_table(key)).with_order_zero(Arc::new(
            move |n| Poly::constant(sobolev_alpha0_order_zero(key, n)),
        ));
        pencil = pencil.with_block(key, op);
    }
    pencil
}

/// `b_0(n) + sum_i b_i D^i`: sends `f` to `b_0 f + (f(-x) - f(x))/2`, so it
/// annihilates any polynomial with the parity of its degree.
pub fn jacobi_parity_annihilator() -> OperatorPencil {
    OperatorPencil::new("jacobi-parity").with_block(
        BlockKey::ONE,
        BlockOperator::generated(Arc::new(|i| coeff_jacobi_b(0, i)), None)
            .with_order_zero(Arc::new(|n| coeff_jacobi_b(n, 0))),
    )
}

/// Classical symmetric Jacobi operator plus `M sum_i c_i D^i`; annihilates
/// the symmetric Jacobi polynomials with equal masses at both endpoints.
pub fn jacobi_symmetric_mass(alpha: &Rational) -> OperatorPencil {
    let a = alpha.clone();
    let a0 = alpha.clone();
    let mass = BlockOperator::generated(
        Arc::new(move |i| coeff_jacobi_c(&a, i, 0)),
        finite_order(alpha),
    )
    .with_order_zero(Arc::new(move |n| coeff_jacobi_c(&a0, 0, n)));
    let mut p = classical_jacobi(alpha, alpha).with_block(BlockKey::M, mass);
    p.name = "jacobi-symmetric-mass".into();
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::verify_family;
    use crate::families::{FamilyKind, FamilyParams};
    use crate::poly::MNPoly;

    #[test]
    fn point_mass_laguerre_annihilates() {
        for alpha in [int(0), int(1), rat(1, 2), rat(-1, 3)] {
            let fam = FamilyParams::laguerre(FamilyKind::LaguerreM, alpha.clone()).unwrap();
            let r = verify_family(&laguerre_point_mass(&alpha), &fam, 0..=10).unwrap();
            assert!(r.passed(), "alpha {alpha}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn sobolev_order_ten_annihilates() {
        let fam = FamilyParams::laguerre(FamilyKind::LaguerreMN, int(0)).unwrap();
        let r = verify_family(&sobolev_laguerre_alpha0(), &fam, 0..=13).unwrap();
        assert!(r.passed(), "{:?}", r.failures().next());
    }

    #[test]
    fn annihilator_needs_positive_degree() {
        let alpha = rat(2, 5);
        let fam = FamilyParams::laguerre(FamilyKind::LaguerreMN, alpha.clone()).unwrap();
        let r = verify_family(&laguerre_annihilator(&alpha), &fam, 0..=9).unwrap();
        let bad: Vec<_> = r.failures().map(|e| e.n).collect();
        assert_eq!(bad, vec![0]);
        let mut expected = MNPoly::from_poly(Poly::one());
        expected.add_block(BlockKey::M, &Poly::one());
        assert_eq!(r.entries[0].residual, expected);
    }

    #[test]
    fn parity_and_symmetric_mass() {
        for alpha in [int(0), int(2), rat(1, 2)] {
            let fam = FamilyParams::new(FamilyKind::JacobiSymmetricMM, alpha.clone(), alpha.clone())
                .unwrap();
            let r = verify_family(&jacobi_parity_annihilator(), &fam, 0..=9).unwrap();
            assert!(r.passed());
            let r = verify_family(&jacobi_symmetric_mass(&alpha), &fam, 0..=9).unwrap();
            assert!(r.passed(), "alpha {alpha}: {:?}", r.failures().next());
        }
    }
}
