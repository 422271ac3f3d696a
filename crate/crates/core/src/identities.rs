//! Exact polynomial identities satisfied by the operator coefficients.

use num_traits::Zero;

use crate::diffop::coefficients::{coeff_jacobi_c, coeff_laguerre_a, coeff_laguerre_bstar, coeff_laguerre_cstar};
use crate::error::{Error, Result};
use crate::families::{jacobi_classical, laguerre_classical};
use crate::hyper::{hyp_terminating, HypSeries};
use crate::poly::Poly;
use crate::scalar::{gen_binomial, gen_binomial_signed, int, pochhammer, rat, reciprocal_gamma_ratio, sign_pow, Rational};

/// One exact comparison between two polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCheck {
    pub name: String,
    pub n: Option<usize>,
    /// Derivative order, shift `k` or series index, depending on the identity.
    pub index: Option<usize>,
    pub expected: Poly,
    pub actual: Poly,
}

impl ExactCheck {
    fn new(name: &str, n: Option<usize>, index: Option<usize>, expected: Poly, actual: Poly) -> Self {
        ExactCheck {
            name: name.to_string(),
            n,
            index,
            expected,
            actual,
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

/// For non-negative integer `alpha`, with `a_i` the point-mass Laguerre
/// coefficients (nonzero only up to `2 alpha + 4`):
/// `sum a_i = 0`, `sum i a_i = (-1)^(alpha+1) x`, and
/// `sum_{i>=k} C(i,k) a_i(x) = (-1)^(alpha+k) a_k(-x)` for every `k >= 1`.
pub fn laguerre_a_integer_sums(alpha: usize) -> Vec<ExactCheck> {
    let al = int(alpha as i64);
    let top = 2 * alpha + 4;
    let a: Vec<Poly> = (0..=top).map(|i| coeff_laguerre_a(&al, i, 0)).collect();
    let mut out = Vec::with_capacity(top + 2);

    let mut sum = Poly::zero();
    let mut weighted = Poly::zero();
    for (i, ai) in a.iter().enumerate().skip(1) {
        sum += ai;
        weighted += &ai.scale(&int(i as i64));
    }
    out.push(ExactCheck::new("sum", None, None, Poly::zero(), sum));
    out.push(ExactCheck::new(
        "weighted-sum",
        None,
        None,
        Poly::monomial(1, sign_pow(alpha + 1)),
        weighted,
    ));
    for k in 1..=top {
        let mut acc = Poly::zero();
        for (i, ai) in a.iter().enumerate().skip(k) {
            acc += &ai.scale(&gen_binomial(&int(i as i64), k));
        }
        let expected = a[k].reflect().scale(&sign_pow(alpha + k));
        out.push(ExactCheck::new("binomial-transform", None, Some(k), expected, acc));
    }
    out
}

/// The two shifted-derivative sums behind the Laguerre annihilator, for
/// `n >= 1` and shift `k`:
/// `sum b*_i D^(i+k) L_n = (-n)_k / (n Gamma(k))` and
/// `sum c*_i D^(i+k) L_n = C(n+alpha, n) (-n)_k / (alpha+1)_k`.
pub fn laguerre_shift_sums(alpha: &Rational, n: usize, k: usize) -> Result<[ExactCheck; 2]> {
    if n == 0 {
        return Err(Error::InvalidArgument("shift sums need n >= 1".into()));
    }
    let l = laguerre_classical(alpha, n)?;
    let mut b_side = Poly::zero();
    let mut c_side = Poly::zero();
    for i in 0..=n.saturating_sub(k) {
        let d = l.derivative(i + k);
        b_side += &(&coeff_laguerre_bstar(alpha, i) * &d);
        c_side += &(&coeff_laguerre_cstar(i) * &d);
    }
    let mn = -int(n as i64);
    let b_expected = pochhammer(&mn, k) * reciprocal_gamma_ratio(k as i64)? / int(n as i64);
    let c_expected = gen_binomial(&(alpha + int(n as i64)), n) * pochhammer(&mn, k)
        / pochhammer(&(alpha + int(1)), k);
    Ok([
        ExactCheck::new("bstar-shift-sum", Some(n), Some(k), Poly::constant(b_expected), b_side),
        ExactCheck::new("cstar-shift-sum", Some(n), Some(k), Poly::constant(c_expected), c_side),
    ])
}

/// The pair of equations equivalent to the symmetric Jacobi mass operator,
/// with `P = P_n^(alpha,alpha)` and `c_i` its mass coefficients:
/// `sum c_i D^i P = 4/(2alpha+1) C(n+2alpha, n) P''` and
/// `sum i c_i D^i P + x sum c_i D^(i+1) P = 4 C(n+2alpha+1, n-1) P''`.
pub fn jacobi_mass_equations(alpha: &Rational, n: usize) -> Result<[ExactCheck; 2]> {
    let denom = int(2) * alpha + int(1);
    if denom.is_zero() {
        return Err(Error::Degenerate("2 alpha + 1 = 0".into()));
    }
    let p = jacobi_classical(alpha, alpha, n)?;
    let d2 = p.derivative(2);
    let mut first = Poly::zero();
    let mut second = Poly::zero();
    for i in 0..=n {
        let c = coeff_jacobi_c(alpha, i, n);
        if c.is_zero() {
            continue;
        }
        let di = p.derivative(i);
        first += &(&c * &di);
        second += &(&c * &di).scale(&int(i as i64));
        second += &(&(&c * &Poly::x()) * &p.derivative(i + 1));
    }
    let n_i = n as i64;
    let e1 = int(4) / &denom * gen_binomial(&(int(2) * alpha + int(n_i)), n);
    let e2 = int(4) * gen_binomial_signed(&(int(2) * alpha + int(n_i + 1)), n_i - 1);
    Ok([
        ExactCheck::new("mass-equation-1", Some(n), None, d2.scale(&e1), first),
        ExactCheck::new("mass-equation-2", Some(n), None, d2.scale(&e2), second),
    ])
}

/// Terminating Gauss sums at unit argument, for `i >= 1`:
/// `2F1(1-i, alpha+5/2-i; 1/2; 1) = (i-alpha-2)_{i-1} / (1/2)_{i-1}` and
/// `2F1(1-i, alpha+5/2-i; 3/2; 1) = (i-alpha-1)_{i-1} / (3/2)_{i-1}`.
pub fn gauss_unit_sums(alpha: &Rational, i: usize) -> Result<[ExactCheck; 2]> {
    if i == 0 {
        return Err(Error::InvalidArgument("index must be at least 1".into()));
    }
    let upper = vec![int(1 - i as i64), alpha + rat(5, 2) - int(i as i64)];
    let half = rat(1, 2);
    let three_half = rat(3, 2);
    let lhs1 = hyp_terminating(&HypSeries::new(upper.clone(), vec![half.clone()], int(1)))?;
    let lhs2 = hyp_terminating(&HypSeries::new(upper, vec![three_half.clone()], int(1)))?;
    let rhs1 = pochhammer(&(int(i as i64 - 2) - alpha), i - 1) / pochhammer(&half, i - 1);
    let rhs2 = pochhammer(&(int(i as i64 - 1) - alpha), i - 1) / pochhammer(&three_half, i - 1);
    Ok([
        ExactCheck::new("gauss-half", None, Some(i), Poly::constant(rhs1), Poly::constant(lhs1)),
        ExactCheck::new(
            "gauss-three-half",
            None,
            Some(i),
            Poly::constant(rhs2),
            Poly::constant(lhs2),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_sums_hold() {
        for a in 0..=3 {
            for c in laguerre_a_integer_sums(a) {
                assert!(c.passed(), "alpha {a}: {c:?}");
            }
        }
    }

    #[test]
    fn shift_sums_hold() {
        for alpha in [int(0), rat(1, 2), rat(-2, 7)] {
            for n in 1..8 {
                for k in 0..3 {
                    for c in laguerre_shift_sums(&alpha, n, k).unwrap() {
                        assert!(c.passed(), "{c:?}");
                    }
                }
            }
        }
        assert!(laguerre_shift_sums(&int(0), 0, 0).is_err());
    }

    #[test]
    fn shift_sum_constants() {
        // (-n)_k / (n Gamma(k)) at k = 0, 1, 2 is 0, -1, n - 1.
        let [b0, _] = laguerre_shift_sums(&int(1), 5, 0).unwrap();
        let [b1, _] = laguerre_shift_sums(&int(1), 5, 1).unwrap();
        let [b2, _] = laguerre_shift_sums(&int(1), 5, 2).unwrap();
        assert_eq!(b0.expected, Poly::zero());
        assert_eq!(b1.expected, Poly::constant(int(-1)));
        assert_eq!(b2.expected, Poly::constant(int(4)));
    }

    #[test]
    fn mass_equations_hold() {
        for alpha in [int(0), int(1), rat(1, 2)] {
            for n in 0..10 {
                for c in jacobi_mass_equations(&alpha, n).unwrap() {
                    assert!(c.passed(), "alpha {alpha}: {c:?}");
                }
            }
        }
        assert!(jacobi_mass_equations(&rat(-1, 2), 3).is_err());
    }

    #[test]
    fn gauss_sums_hold() {
        // 2F1(-1, 3/2; 1/2; 1) = 1 - 3 is the i = 2 case at alpha = 1.
        let [a, b] = gauss_unit_sums(&int(1), 2).unwrap();
        assert_eq!(a.actual, Poly::constant(int(-2)));
        assert!(a.passed() && b.passed());
        for i in 1..=12 {
            for c in gauss_unit_sums(&rat(-1, 3), i).unwrap() {
                assert!(c.passed(), "{c:?}");
            }
        }
    }
}
