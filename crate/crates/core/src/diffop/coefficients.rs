//! Closed-form coefficient families of the known infinite-order operators.
//!
//! Index `i` is the derivative order. Order-zero coefficients may depend on
//! the degree `n`; every higher-order coefficient is independent of `n`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::{BlockKey, Poly};
use crate::scalar::{factorial, gen_binomial, gen_binomial_signed, int, pochhammer, pow, rat, sign_pow, Rational};

fn inv_factorial(i: usize) -> Rational {
    Rational::new(One::one(), factorial(i))
}

/// Coefficient `a_i` of the point-mass Laguerre operator
/// `M sum a_i D^i + x D^2 + (alpha+1-x) D + n`.
///
/// `a_0 = C(n+alpha+1, n-1)`; for `i >= 1`
/// `a_i = (1/i!) sum_{j=1}^{i} (-1)^{i+j+1} C(alpha+1, j-1) C(alpha+2, i-j) (alpha+3)_{i-j} x^j`.
pub fn coeff_laguerre_a(alpha: &Rational, i: usize, n: usize) -> Poly {
    if i == 0 {
        return Poly::constant(gen_binomial_signed(
            &(alpha + int(n as i64 + 1)),
            n as i64 - 1,
        ));
    }
    let a1 = alpha + int(1);
    let a2 = alpha + int(2);
    let a3 = alpha + int(3);
    let mut coeffs = vec![Rational::zero(); i + 1];
    for (j, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let c = gen_binomial(&a1, j - 1) * gen_binomial(&a2, i - j) * pochhammer(&a3, i - j);
        *slot = sign_pow(i + j + 1) * c;
    }
    Poly::from_coeffs(coeffs).scale(&inv_factorial(i))
}

/// `b*_i(alpha, x) = (1/i!) sum_j (-1)^j C(i, j) (alpha+1)_{i-j} x^j`.
pub fn coeff_laguerre_bstar(alpha: &Rational, i: usize) -> Poly {
    let a1 = alpha + int(1);
    let coeffs = (0..=i)
        .map(|j| sign_pow(j) * gen_binomial(&int(i as i64), j) * pochhammer(&a1, i - j))
        .collect();
    Poly::from_coeffs(coeffs).scale(&inv_factorial(i))
}

/// `c*_i(x) = (-1)^i x^i / i!`, the Taylor shift to the origin.
pub fn coeff_laguerre_cstar(i: usize) -> Poly {
    Poly::monomial(i, sign_pow(i) * inv_factorial(i))
}

/// Parity annihilator of the symmetric Jacobi family:
/// `b_0 = (1 - (-1)^n)/2`, `b_i = 2^(i-1) (-x)^i / i!`.
pub fn coeff_jacobi_b(n: usize, i: usize) -> Poly {
    if i == 0 {
        return Poly::constant(if n % 2 == 1 { int(1) } else { int(0) });
    }
    let c = pow(&int(2), i - 1) * sign_pow(i) * inv_factorial(i);
    Poly::monomial(i, c)
}

/// Inner factor of the symmetric Jacobi mass operator:
/// `c*_i = (2^i/i!) sum_{k=0}^{i-2} C(alpha+1, i-k-2) C(i-2alpha-5, k) ((1-x)/2)^k`,
/// with `c*_0 = c*_1 = 0`.
pub fn coeff_jacobi_cstar(alpha: &Rational, i: usize) -> Poly {
    if i < 2 {
        return Poly::zero();
    }
    let a1 = alpha + int(1);
    let top = int(i as i64) - int(2) * alpha - int(5);
    let half_one_minus_x = Poly::from_coeffs(vec![rat(1, 2), rat(-1, 2)]);
    let mut power = Poly::one();
    let mut acc = Poly::zero();
    for k in 0..=(i - 2) {
        let c = gen_binomial(&a1, i - k - 2) * gen_binomial(&top, k);
        if !c.is_zero() {
            acc += &power.scale(&c);
        }
        power = &power * &half_one_minus_x;
    }
    acc.scale(&(pow(&int(2), i) * inv_factorial(i)))
}

/// Coefficient `c_i` of the symmetric Jacobi mass operator
/// `M sum c_i D^i + (1-x^2) D^2 - 2(alpha+1) x D + n(n+2alpha+1)`:
/// `c_0 = 4(2alpha+3) C(n+2alpha+2, n-2)`, `c_i = (2alpha+3)(1-x^2) c*_i`.
pub fn coeff_jacobi_c(alpha: &Rational, i: usize, n: usize) -> Poly {
    let k = int(2) * alpha + int(3);
    if i == 0 {
        let top = int(2) * alpha + int(n as i64 + 2);
        return Poly::constant(int(4) * &k * gen_binomial_signed(&top, n as i64 - 2));
    }
    let one_minus_x2 = Poly::from_ints(&[1, 0, -1]);
    (&one_minus_x2 * &coeff_jacobi_cstar(alpha, i)).scale(&k)
}

/// Which closed-form coefficient table to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    LaguerreA,
    LaguerreBStar,
    LaguerreCStar,
    /// One block of the transcribed order-ten Sobolev-Laguerre operator at `alpha = 0`.
    SobolevAlpha0(BlockKey),
    JacobiB,
    JacobiC,
    JacobiCStar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientFamily {
    pub kind: CoefficientKind,
    pub alpha: Rational,
}

impl CoefficientFamily {
    pub fn new(kind: CoefficientKind, alpha: Rational) -> Self {
        CoefficientFamily { kind, alpha }
    }

    /// Coefficient of `D^i`; `n` only matters for order zero.
    pub fn coefficient(&self, i: usize, n: usize) -> Poly {
        let a = &self.alpha;
        match self.kind {
            CoefficientKind::LaguerreA => coeff_laguerre_a(a, i, n),
            CoefficientKind::LaguerreBStar => coeff_laguerre_bstar(a, i),
            CoefficientKind::LaguerreCStar => coeff_laguerre_cstar(i),
            CoefficientKind::SobolevAlpha0(block) => {
                super::pencils::sobolev_alpha0_coefficient(block, i, n)
            }
            CoefficientKind::JacobiB => coeff_jacobi_b(n, i),
            CoefficientKind::JacobiC => coeff_jacobi_c(a, i, n),
            CoefficientKind::JacobiCStar => coeff_jacobi_cstar(a, i),
        }
    }

    /// Highest order with a nonzero coefficient, when the family is finite.
    pub fn formal_order(&self) -> Option<usize> {
        let k = crate::scalar::as_nonneg_integer(&self.alpha);
        match self.kind {
            CoefficientKind::LaguerreA | CoefficientKind::JacobiC | CoefficientKind::JacobiCStar => {
                k.map(|a| 2 * a + 4)
            }
            CoefficientKind::SobolevAlpha0(block) => Some(match (block.m, block.n) {
                (0, 0) => 2,
                (1, 0) => 4,
                (0, 1) => 8,
                _ => 10,
            }),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_a_examples() {
        let z = int(0);
        assert_eq!(coeff_laguerre_a(&z, 1, 0), Poly::from_ints(&[0, -1]));
        assert_eq!(coeff_laguerre_a(&z, 3, 0), Poly::from_ints(&[0, -2, 1]));
        assert_eq!(
            coeff_laguerre_a(&z, 4, 0),
            Poly::monomial(2, rat(-1, 2))
        );
        assert_eq!(
            coeff_laguerre_a(&z, 2, 0),
            Poly::from_coeffs(vec![int(0), int(3), rat(-1, 2)])
        );
        for n in 0..10i64 {
            assert_eq!(
                coeff_laguerre_a(&z, 0, n as usize),
                Poly::constant(rat(n * (n + 1), 2))
            );
        }
    }

    #[test]
    fn laguerre_a_terminates_for_integer_alpha() {
        for a in 0..6i64 {
            let alpha = int(a);
            let top = (2 * a + 4) as usize;
            assert!(!coeff_laguerre_a(&alpha, top, 0).is_zero());
            for i in top + 1..top + 6 {
                assert!(coeff_laguerre_a(&alpha, i, 0).is_zero(), "alpha {a} i {i}");
            }
        }
        assert!(!coeff_laguerre_a(&rat(1, 2), 40, 0).is_zero());
    }

    #[test]
    fn star_examples() {
        let a = rat(2, 3);
        assert_eq!(coeff_laguerre_bstar(&a, 0), Poly::one());
        assert_eq!(
            coeff_laguerre_bstar(&a, 1),
            Poly::from_coeffs(vec![&a + int(1), int(-1)])
        );
        assert_eq!(coeff_laguerre_cstar(2), Poly::monomial(2, rat(1, 2)));
    }

    #[test]
    fn jacobi_examples() {
        assert!(coeff_jacobi_b(4, 0).is_zero());
        assert_eq!(coeff_jacobi_b(3, 0), Poly::one());
        assert_eq!(coeff_jacobi_b(0, 2), Poly::monomial(2, int(1)));
        for a in [int(0), rat(1, 2), int(3)] {
            assert!(coeff_jacobi_c(&a, 1, 5).is_zero());
            assert_eq!(coeff_jacobi_cstar(&a, 2), Poly::constant(int(2)));
        }
        assert_eq!(coeff_jacobi_c(&int(0), 0, 2), Poly::constant(int(12)));
    }

    #[test]
    fn jacobi_c_formal_order() {
        for a in 0..5i64 {
            let alpha = int(a);
            let top = (2 * a + 4) as usize;
            assert!(!coeff_jacobi_c(&alpha, top, 0).is_zero());
            for i in top + 1..top + 8 {
                assert!(coeff_jacobi_c(&alpha, i, 0).is_zero(), "alpha {a} i {i}");
            }
        }
    }
}
