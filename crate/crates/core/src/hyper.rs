//! Hypergeometric sums: exact evaluation of terminating series and checked
//! numeric comparisons for the non-terminating coefficient sums.
//!
//! Partial sums are always accumulated exactly and only converted to `f64`
//! for the final comparison. The one transcendental factor, `sin(pi alpha)/pi`,
//! is computed with `astro-float` at 256 bits.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{as_integer, as_nonneg_integer, int, to_f64, Rational};

/// `pFq(upper; lower; argument)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypSeries {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub argument: Rational,
}

impl HypSeries {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, argument: Rational) -> Self {
        HypSeries {
            upper,
            lower,
            argument,
        }
    }

    /// Index of the last nonzero term when some upper parameter is a
    /// non-positive integer.
    pub fn termination_index(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter_map(|a| as_integer(a).filter(|&k| k <= 0).map(|k| (-k) as usize))
            .min()
    }

    fn check_poles(&self, upto: usize) -> Result<()> {
        for b in &self.lower {
            if let Some(k) = as_integer(b).filter(|&k| k <= 0) {
                let k = (-k) as usize;
                if k < upto {
                    return Err(Error::LowerParameterPole(k));
                }
            }
        }
        Ok(())
    }

    /// Exact terms `t_0, ..., t_{count-1}`, stopping early at termination.
    fn terms(&self, count: usize) -> Result<Vec<Rational>> {
        let stop = self.termination_index().map_or(count, |k| count.min(k + 1));
        self.check_poles(stop.saturating_sub(1))?;
        let mut out = Vec::with_capacity(stop);
        let mut t = Rational::one();
        for k in 0..stop {
            if k > 0 {
                let km1 = int(k as i64 - 1);
                for a in &self.upper {
                    t *= a + &km1;
                }
                for b in &self.lower {
                    t /= b + &km1;
                }
                t *= &self.argument;
                t /= int(k as i64);
            }
            out.push(t.clone());
        }
        Ok(out)
    }
}

/// Exact value of a terminating series.
pub fn hyp_terminating(s: &HypSeries) -> Result<Rational> {
    let k = s.termination_index().ok_or_else(|| {
        Error::NonTerminating("no upper parameter is a non-positive integer".into())
    })?;
    Ok(s.terms(k + 1)?.into_iter().sum())
}

/// Exact sum of the first `terms` terms.
pub fn hyp_partial_sum(s: &HypSeries, terms: usize) -> Result<Rational> {
    if terms == 0 {
        return Err(Error::InvalidArgument("term count must be positive".into()));
    }
    Ok(s.terms(terms)?.into_iter().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Mismatch,
    /// The difference exceeds the tolerance while the last term added is
    /// still larger than the tolerance.
    NonConvergent,
}

/// Outcome of a numeric identity comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub terms: usize,
    /// Magnitude of the last left-hand term added.
    pub last_term: f64,
    /// Both sides exact and equal as rationals.
    pub exact: bool,
    pub status: CheckStatus,
}

impl CheckResult {
    fn compare(
        name: String,
        lhs: f64,
        rhs: f64,
        tol: f64,
        terms: usize,
        last_term: f64,
        exact: bool,
    ) -> Self {
        let difference = (lhs - rhs).abs();
        let status = if exact || difference < tol {
            CheckStatus::Pass
        } else if last_term >= tol {
            CheckStatus::NonConvergent
        } else {
            CheckStatus::Mismatch
        };
        CheckResult {
            name,
            lhs,
            rhs,
            difference,
            tolerance: tol,
            terms,
            last_term,
            exact,
            status,
        }
    }

    fn exact(name: String, lhs: &Rational, rhs: &Rational, tol: f64, terms: usize, last: f64) -> Self {
        let mut r = Self::compare(name, to_f64(lhs), to_f64(rhs), tol, terms, last, lhs == rhs);
        if lhs == rhs {
            r.difference = 0.0;
        }
        r
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

const PRECISION: usize = 256;

fn rational_to_bigfloat(r: &Rational, cc: &mut Consts) -> BigFloat {
    let rm = RoundingMode::ToEven;
    let num = BigFloat::parse(&r.numer().to_string(), Radix::Dec, PRECISION, rm, cc);
    let den = BigFloat::parse(&r.denom().to_string(), Radix::Dec, PRECISION, rm, cc);
    num.div(&den, PRECISION, rm)
}

/// `sin(pi alpha) / pi`, rounded to `f64` only at the end.
pub fn sin_pi_over_pi(alpha: &Rational) -> f64 {
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().expect("astro-float constants cache");
    let pi = cc.pi(PRECISION, rm);
    let a = rational_to_bigfloat(alpha, &mut cc);
    let v = pi.mul(&a, PRECISION, rm).sin(PRECISION, rm, &mut cc).div(&pi, PRECISION, rm);
    v.to_string().parse().unwrap_or(f64::NAN)
}

/// `C(a, 0), ..., C(a, count - 1)` by the ratio recurrence.
fn binomial_row(a: &Rational, count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut c = Rational::one();
    for m in 0..count {
        if m > 0 {
            c = c * (a - int(m as i64 - 1)) / int(m as i64);
        }
        out.push(c.clone());
    }
    out
}

/// Values `a_1(x), ..., a_terms(x)` of the point-mass Laguerre coefficients at
/// a rational point, in `O(terms^2)` integer operations.
///
/// With `alpha = r/s` and `x = p/q`, `i! a_i(x)` is a convolution of
/// `b_j = C(alpha+1, j-1) x^j` and `g_k = C(alpha+2, k) (alpha+3)_k`. Over the
/// common denominator `s^(2i) q^i (i-1)! i!` the numerator is
/// `sum_j (-1)^(i+j+1) C(i-1, j-1) U_j V_(i-j)` with
/// `U_j = (j-1)! s^(j-1) C(alpha+1, j-1) p^j s^(j+1)` and `V_k = k! s^(2k) g_k q^k`,
/// both integers.
pub fn laguerre_a_values(alpha: &Rational, x: &Rational, terms: usize) -> Vec<Rational> {
    let (r, s) = (alpha.numer().clone(), alpha.denom().clone());
    let (p, q) = (x.numer().clone(), x.denom().clone());
    let s2 = &s * &s;

    // U_j for j = 1..=terms: falling product (r + s - l s) over l < j-1.
    let mut u = vec![BigInt::zero(); terms + 1];
    let mut fall = BigInt::one();
    let mut ps = &p * &s * &s;
    for (j, slot) in u.iter_mut().enumerate().skip(1) {
        if j > 1 {
            fall *= &r + &s - BigInt::from(j as i64 - 2) * &s;
            ps *= &p * &s;
        }
        *slot = &fall * &ps;
    }
    // V_k for k = 0..terms: prod over l < k of (r + 2s - l s)(r + 3s + l s) q.
    let mut v = Vec::with_capacity(terms);
    let mut cur = BigInt::one();
    for k in 0..terms {
        if k > 0 {
            let l = BigInt::from(k as i64 - 1);
            cur *= (&r + BigInt::from(2) * &s - &l * &s) * (&r + BigInt::from(3) * &s + &l * &s) * &q;
        }
        v.push(cur.clone());
    }

    let mut out = Vec::with_capacity(terms);
    let mut sq = BigInt::one();
    let mut fact = BigInt::one();
    let mut binom: Vec<BigInt> = Vec::with_capacity(terms);
    for i in 1..=terms {
        let ib = BigInt::from(i as i64);
        sq *= &s2 * &q;
        let den = &sq * &fact * (&fact * &ib);
        fact *= &ib;
        // binom = row i-1 of Pascal's triangle
        binom.push(BigInt::one());
        for m in (1..binom.len() - 1).rev() {
            let prev = binom[m - 1].clone();
            binom[m] += prev;
        }
        let mut num = BigInt::zero();
        for j in 1..=i {
            let t = &binom[j - 1] * &u[j] * &v[i - j];
            if (i + j) % 2 == 0 {
                num -= t;
            } else {
                num += t;
            }
        }
        out.push(Rational::new(num, den));
    }
    out
}

fn require_alpha(alpha: &Rational) -> Result<()> {
    if *alpha <= -Rational::one() {
        return Err(Error::ParameterOutOfRange(format!("alpha = {alpha} must exceed -1")));
    }
    Ok(())
}

/// Compares `sum_{i=1}^{terms} a_i(x)` with
/// `-(sin(pi alpha)/pi) x / ((alpha+2)(alpha+3)) 1F1(1; alpha+4; -x)` for non-integer `alpha`.
pub fn laguerre_a_sum_check(alpha: &Rational, x: &Rational, terms: usize, tol: f64) -> Result<CheckResult> {
    require_alpha(alpha)?;
    if alpha.is_integer() {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} is an integer; use the exact integer-alpha identities"
        )));
    }
    if terms == 0 {
        return Err(Error::InvalidArgument("term count must be positive".into()));
    }
    let values = laguerre_a_values(alpha, x, terms);
    let lhs: Rational = values.iter().sum();
    let last = values.last().map_or(0.0, |v| to_f64(v).abs());
    let name = format!("laguerre-a-sum alpha={alpha} x={x}");
    if x.is_zero() {
        return Ok(CheckResult::exact(name, &lhs, &Rational::zero(), tol, terms, last));
    }
    let series = HypSeries::new(vec![int(1)], vec![alpha + int(4)], -x.clone());
    let f11 = hyp_partial_sum(&series, terms)?;
    let factor = x / ((alpha + int(2)) * (alpha + int(3))) * f11;
    let rhs = -sin_pi_over_pi(alpha) * to_f64(&factor);
    Ok(CheckResult::compare(name, to_f64(&lhs), rhs, tol, terms, last, false))
}

/// `c*_i(alpha, x)` evaluated at a rational point without building the polynomial.
pub fn jacobi_cstar_at(alpha: &Rational, i: usize, x: &Rational) -> Rational {
    jacobi_cstar_values(alpha, x, i).pop().unwrap_or_else(Rational::zero)
}

/// `c*_1(alpha, x), ..., c*_terms(alpha, x)`, sharing the binomial and power
/// tables across indices.
pub fn jacobi_cstar_values(alpha: &Rational, x: &Rational, terms: usize) -> Vec<Rational> {
    let c1 = binomial_row(&(alpha + int(1)), terms.saturating_sub(1));
    let t = (int(1) - x) / int(2);
    let tp = {
        let mut out = Vec::with_capacity(terms);
        let mut p = Rational::one();
        for k in 0..terms.saturating_sub(1) {
            if k > 0 {
                p *= &t;
            }
            out.push(p.clone());
        }
        out
    };
    let mut scale = Rational::one();
    (1..=terms)
        .map(|i| {
            scale *= int(2);
            scale /= int(i as i64);
            if i < 2 {
                return Rational::zero();
            }
            let top = int(i as i64) - int(2) * alpha - int(5);
            let mut bin = Rational::one();
            let mut acc = Rational::zero();
            for k in 0..=(i - 2) {
                if k > 0 {
                    if t.is_zero() {
                        break;
                    }
                    bin = bin * (&top - int(k as i64 - 1)) / int(k as i64);
                }
                acc += &c1[i - k - 2] * &bin * &tp[k];
            }
            acc * &scale
        })
        .collect()
}

fn unit_sign(sign: i32) -> Result<Rational> {
    match sign {
        1 => Ok(int(1)),
        -1 => Ok(int(-1)),
        s => Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {s}"))),
    }
}

/// `2 1F1(-alpha-1; 3; z)`, exact when it terminates, else a `terms`-term partial sum.
fn two_f11_alpha(alpha: &Rational, z: Rational, terms: usize) -> Result<(Rational, bool)> {
    let s = HypSeries::new(vec![-alpha - int(1)], vec![int(3)], z);
    match s.termination_index() {
        Some(_) => Ok((int(2) * hyp_terminating(&s)?, true)),
        None => Ok((int(2) * hyp_partial_sum(&s, terms)?, false)),
    }
}

/// Compares `sum_{i=1}^{terms} c*_i(alpha, x)` at `x = sign` with `2 1F1(-alpha-1; 3; -2x)`.
pub fn jacobi_cstar_sum_check(alpha: &Rational, sign: i32, terms: usize, tol: f64) -> Result<CheckResult> {
    require_alpha(alpha)?;
    let x = unit_sign(sign)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("term count must be positive".into()));
    }
    let values = jacobi_cstar_values(alpha, &x, terms);
    let lhs: Rational = values.iter().sum();
    let last = values.last().map_or(0.0, |v| to_f64(v).abs());
    let (rhs, rhs_exact) = two_f11_alpha(alpha, int(-2) * &x, terms)?;
    let name = format!("jacobi-cstar-sum alpha={alpha} x={x}");
    let lhs_finite = as_nonneg_integer(alpha).is_some_and(|a| terms >= a + 4);
    if rhs_exact && lhs_finite {
        Ok(CheckResult::exact(name, &lhs, &rhs, tol, terms, last))
    } else {
        Ok(CheckResult::compare(name, to_f64(&lhs), to_f64(&rhs), tol, terms, last, false))
    }
}

/// Even and odd parts of the `c*` sum at `x = sign` against their printed
/// series, `terms` terms on each side.
pub fn jacobi_cstar_parity_split(
    alpha: &Rational,
    sign: i32,
    terms: usize,
    tol: f64,
) -> Result<[CheckResult; 2]> {
    require_alpha(alpha)?;
    let x = unit_sign(sign)?;
    let ma1 = -alpha - int(1);
    let three = int(3);
    let two = int(2);
    // s(m) = (-alpha-1)_m 2^m / (m! (3)_m)
    let mut sv = Vec::with_capacity(2 * terms);
    let mut cur = Rational::one();
    for m in 0..2 * terms {
        if m > 0 {
            let k = int(m as i64 - 1);
            cur = cur * (&ma1 + &k) * &two / (int(m as i64) * (&three + &k));
        }
        sv.push(cur.clone());
    }
    let all = jacobi_cstar_values(alpha, &x, 2 * terms);
    let even_vals: Vec<Rational> = all.iter().skip(1).step_by(2).cloned().collect();
    let odd_vals: Vec<Rational> = all.iter().step_by(2).cloned().collect();
    let even_rhs: Rational = &two * sv.iter().step_by(2).sum::<Rational>();
    let odd_rhs: Rational = -(&two * &x) * sv.iter().skip(1).step_by(2).sum::<Rational>();
    let mk = |label: &str, vals: &[Rational], rhs: &Rational| {
        let lhs: Rational = vals.iter().sum();
        let last = vals.last().map_or(0.0, |v| to_f64(v).abs());
        let name = format!("jacobi-cstar-{label} alpha={alpha} x={x}");
        if lhs == *rhs {
            CheckResult::exact(name, &lhs, rhs, tol, terms, last)
        } else {
            CheckResult::compare(name, to_f64(&lhs), to_f64(rhs), tol, terms, last, false)
        }
    };
    Ok([mk("even", &even_vals, &even_rhs), mk("odd", &odd_vals, &odd_rhs)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::coefficients::{coeff_jacobi_cstar, coeff_laguerre_a};
    use crate::scalar::{factorial, gen_binomial, pow, rat};

    #[test]
    fn terminating_examples() {
        let s = HypSeries::new(vec![int(0)], vec![int(3)], int(2));
        assert_eq!(hyp_terminating(&s).unwrap(), int(1));
        let s = HypSeries::new(vec![int(-1)], vec![int(3)], int(2));
        assert_eq!(hyp_terminating(&s).unwrap(), rat(1, 3));
        let s = HypSeries::new(vec![int(-1), rat(3, 2)], vec![rat(1, 2)], int(1));
        assert_eq!(hyp_terminating(&s).unwrap(), int(-2));
    }

    #[test]
    fn rejections() {
        let s = HypSeries::new(vec![int(1)], vec![int(4)], int(-1));
        assert!(matches!(hyp_terminating(&s), Err(Error::NonTerminating(_))));
        let s = HypSeries::new(vec![int(-3)], vec![int(-1)], int(1));
        assert!(matches!(hyp_terminating(&s), Err(Error::LowerParameterPole(1))));
        // A lower pole past termination is harmless.
        let s = HypSeries::new(vec![int(-1)], vec![int(-1)], int(1));
        assert_eq!(hyp_terminating(&s).unwrap(), int(2));
    }

    #[test]
    fn partial_sum_examples() {
        let s = HypSeries::new(vec![int(1)], vec![int(4)], int(0));
        assert_eq!(hyp_partial_sum(&s, 7).unwrap(), int(1));
        let s = HypSeries::new(vec![int(1)], vec![int(4)], int(-1));
        assert_eq!(hyp_partial_sum(&s, 2).unwrap(), rat(3, 4));
    }

    #[test]
    fn point_values_match_polynomials() {
        for alpha in [rat(1, 2), rat(-1, 3), int(2)] {
            for x in [rat(1, 4), int(-1), int(2)] {
                let vals = laguerre_a_values(&alpha, &x, 9);
                for (k, v) in vals.iter().enumerate() {
                    assert_eq!(*v, coeff_laguerre_a(&alpha, k + 1, 0).eval(&x));
                }
                for i in 0..10 {
                    assert_eq!(jacobi_cstar_at(&alpha, i, &x), coeff_jacobi_cstar(&alpha, i).eval(&x));
                }
            }
        }
    }

    #[test]
    fn sin_high_precision() {
        assert!((sin_pi_over_pi(&rat(1, 2)) - 1.0 / std::f64::consts::PI).abs() < 1e-16);
        assert!((sin_pi_over_pi(&rat(-1, 3)) + 3f64.sqrt() / 2.0 / std::f64::consts::PI).abs() < 1e-16);
    }

    #[test]
    fn laguerre_sum_preconditions() {
        assert!(laguerre_a_sum_check(&int(0), &int(1), 10, 1e-8).is_err());
        assert!(laguerre_a_sum_check(&rat(-3, 2), &int(1), 10, 1e-8).is_err());
        let r = laguerre_a_sum_check(&rat(1, 2), &int(0), 10, 1e-8).unwrap();
        assert!(r.exact && r.passed());
    }

    #[test]
    fn cstar_sums_at_alpha_zero() {
        let r = jacobi_cstar_sum_check(&int(0), 1, 20, 1e-8).unwrap();
        assert!(r.exact && r.passed());
        assert_eq!(r.rhs, 10.0 / 3.0);
        let r = jacobi_cstar_sum_check(&int(0), -1, 20, 1e-8).unwrap();
        assert!(r.exact && r.passed());
        assert!((r.rhs - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cstar_closed_forms() {
        // Independent oracle: at x = 1 only k = 0 survives; at x = -1 the
        // inner sum collapses by Vandermonde.
        let alpha = rat(1, 2);
        for i in 2..30usize {
            let scale = pow(&int(2), i) / Rational::from_integer(factorial(i));
            assert_eq!(
                jacobi_cstar_at(&alpha, i, &int(1)),
                &scale * gen_binomial(&(&alpha + int(1)), i - 2)
            );
            assert_eq!(
                jacobi_cstar_at(&alpha, i, &int(-1)),
                &scale * gen_binomial(&(int(i as i64 - 4) - &alpha), i - 2)
            );
        }
    }

    #[test]
    fn parity_split_recombines() {
        for alpha in [int(0), int(1), rat(1, 2)] {
            for sign in [1, -1] {
                let [even, odd] = jacobi_cstar_parity_split(&alpha, sign, 60, 1e-10).unwrap();
                assert!(even.passed() && odd.passed(), "{even:?} {odd:?}");
                let total = jacobi_cstar_sum_check(&alpha, sign, 120, 1e-10).unwrap();
                assert!((even.lhs + odd.lhs - total.lhs).abs() < 1e-10);
            }
        }
    }
}
