//! Classical and point-mass generalized Laguerre and Jacobi polynomials.
//!
//! The generalized families are built from the classical ones through
//! connection coefficients (`A_0, A_1, A_2` for Laguerre and general Jacobi,
//! `C_0, C_1` for the symmetric Jacobi case), each stored as an [`MNPoly`]
//! that is constant in `x`. Building them with `M` and `N` kept formal lets
//! every downstream identity be checked for all masses at once.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{BlockKey, MNPoly, Poly};
use crate::scalar::{factorial, gen_binomial, gen_binomial_signed, int, pochhammer, pow, rat, sign_pow, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    LaguerreClassical,
    /// Point mass `M` at the origin only (`N = 0`).
    LaguerreM,
    /// Sobolev-type Laguerre with masses `M f(0) g(0) + N f'(0) g'(0)`.
    LaguerreMN,
    JacobiClassical,
    JacobiMN,
    /// `beta = alpha`, `N = M`.
    JacobiSymmetricMM,
}

impl FamilyKind {
    pub fn is_jacobi(self) -> bool {
        matches!(
            self,
            FamilyKind::JacobiClassical | FamilyKind::JacobiMN | FamilyKind::JacobiSymmetricMM
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub kind: FamilyKind,
    #[serde(with = "crate::scalar::rational_str")]
    pub alpha: Rational,
    /// Ignored for Laguerre kinds; equal to `alpha` for the symmetric kind.
    #[serde(with = "crate::scalar::rational_str")]
    pub beta: Rational,
}

impl FamilyParams {
    pub fn new(kind: FamilyKind, alpha: Rational, beta: Rational) -> Result<Self> {
        let beta = if kind == FamilyKind::JacobiSymmetricMM {
            alpha.clone()
        } else {
            beta
        };
        let p = FamilyParams { kind, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn laguerre(kind: FamilyKind, alpha: Rational) -> Result<Self> {
        Self::new(kind, alpha, Rational::zero())
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha("alpha", &self.alpha)?;
        if self.kind.is_jacobi() {
            check_alpha("beta", &self.beta)?;
        }
        Ok(())
    }

    /// The `n`-th member of the family.
    pub fn build(&self, n: usize) -> Result<GeneralizedPoly> {
        let (a, b) = (&self.alpha, &self.beta);
        match self.kind {
            FamilyKind::LaguerreClassical => Ok(GeneralizedPoly::classical(
                self.clone(),
                n,
                laguerre_classical(a, n)?,
            )),
            FamilyKind::LaguerreM => {
                let full = laguerre_mn(a, n)?;
                Ok(GeneralizedPoly {
                    params: self.clone(),
                    n,
                    value: full.value.drop_n(),
                    connection: full.connection.iter().map(MNPoly::drop_n).collect(),
                })
            }
            FamilyKind::LaguerreMN => laguerre_mn(a, n),
            FamilyKind::JacobiClassical => Ok(GeneralizedPoly::classical(
                self.clone(),
                n,
                jacobi_classical(a, b, n)?,
            )),
            FamilyKind::JacobiMN => jacobi_mn(a, b, n),
            FamilyKind::JacobiSymmetricMM => jacobi_symmetric_mm(a, n),
        }
    }
}

fn check_alpha(name: &str, a: &Rational) -> Result<()> {
    if *a <= -Rational::one() {
        Err(Error::ParameterOutOfRange(format!("{name} = {a} must exceed -1")))
    } else {
        Ok(())
    }
}

/// A member of a (possibly generalized) family together with the connection
/// coefficients used to build it from the classical polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedPoly {
    pub params: FamilyParams,
    pub n: usize,
    pub value: MNPoly,
    /// `[A_0, A_1, A_2]` or `[C_0, C_1]`; empty for classical kinds.
    pub connection: Vec<MNPoly>,
}

impl GeneralizedPoly {
    fn classical(params: FamilyParams, n: usize, p: Poly) -> Self {
        GeneralizedPoly {
            params,
            n,
            value: MNPoly::from_poly(p),
            connection: Vec::new(),
        }
    }

    /// Specializes the masses to numbers.
    pub fn at(&self, m: &Rational, nn: &Rational) -> Poly {
        self.value.eval_params(m, nn)
    }
}

/// `L_n^{(alpha)}(x) = sum_k (-1)^k C(n+alpha, n-k) x^k / k!`.
pub fn laguerre_classical(alpha: &Rational, n: usize) -> Result<Poly> {
    check_alpha("alpha", alpha)?;
    let top = alpha + int(n as i64);
    let coeffs = (0..=n)
        .map(|k| {
            sign_pow(k) * gen_binomial(&top, n - k) / Rational::from_integer(factorial(k))
        })
        .collect();
    Ok(Poly::from_coeffs(coeffs))
}

/// `P_n^{(alpha,beta)}(x) = sum_k C(n+alpha, n-k) C(n+beta, k) ((x-1)/2)^k ((x+1)/2)^(n-k)`.
pub fn jacobi_classical(alpha: &Rational, beta: &Rational, n: usize) -> Result<Poly> {
    check_alpha("alpha", alpha)?;
    check_alpha("beta", beta)?;
    let half = rat(1, 2);
    let xm = Poly::from_coeffs(vec![-half.clone(), half.clone()]);
    let xp = Poly::from_coeffs(vec![half.clone(), half]);
    let na = alpha + int(n as i64);
    let nb = beta + int(n as i64);
    let mut xm_pow = vec![Poly::one()];
    let mut xp_pow = vec![Poly::one()];
    for k in 1..=n {
        xm_pow.push(&xm_pow[k - 1] * &xm);
        xp_pow.push(&xp_pow[k - 1] * &xp);
    }
    let mut acc = Poly::zero();
    for k in 0..=n {
        let c = gen_binomial(&na, n - k) * gen_binomial(&nb, k);
        acc += &(&xm_pow[k] * &xp_pow[n - k]).scale(&c);
    }
    Ok(acc)
}

fn scalar_block(entries: &[(BlockKey, Rational)]) -> MNPoly {
    let mut out = MNPoly::zero();
    for (k, c) in entries {
        out.add_block(*k, &Poly::constant(c.clone()));
    }
    out
}

/// Combines `sum_j connection[j] * D^j base`.
fn connect(base: &Poly, connection: &[MNPoly]) -> MNPoly {
    let mut out = MNPoly::zero();
    for (j, c) in connection.iter().enumerate() {
        out += &c.mul_poly(&base.derivative(j));
    }
    out
}

/// Sobolev-type Laguerre polynomial `A_0 L + A_1 L' + A_2 L''`.
pub fn laguerre_mn(alpha: &Rational, n: usize) -> Result<GeneralizedPoly> {
    let base = laguerre_classical(alpha, n)?;
    let a = alpha;
    let ni = n as i64;
    let a1 = a + int(1);
    let c = |shift: i64, k: i64| gen_binomial_signed(&(a + int(ni + shift)), k);
    let a0 = scalar_block(&[
        (BlockKey::ONE, int(1)),
        (BlockKey::M, c(0, ni - 1)),
        (
            BlockKey::N,
            (int(ni) * (a + int(2)) - &a1) / (&a1 * (a + int(3))) * c(0, ni - 2),
        ),
        (
            BlockKey::MN,
            c(0, ni - 1) * c(1, ni - 2) / (&a1 * (a + int(2))),
        ),
    ]);
    let a1_coeff = scalar_block(&[
        (BlockKey::M, c(0, ni)),
        (BlockKey::N, int(ni - 1) / &a1 * c(0, ni - 1)),
        (BlockKey::MN, int(2) / (&a1 * &a1) * c(0, ni) * c(1, ni - 2)),
    ]);
    let a2 = scalar_block(&[
        (BlockKey::N, c(0, ni - 1) / &a1),
        (BlockKey::MN, c(0, ni) * c(1, ni - 1) / (&a1 * &a1)),
    ]);
    let connection = vec![a0, a1_coeff, a2];
    Ok(GeneralizedPoly {
        params: FamilyParams::laguerre(FamilyKind::LaguerreMN, alpha.clone())?,
        n,
        value: connect(&base, &connection),
        connection,
    })
}

/// Jacobi polynomial with point masses `M` at `x = -1` and `N` at `x = 1`:
/// `A_0 P + [A_1 (1-x) - A_2 (1+x)] P'`.
///
/// Returns [`Error::Degenerate`] when `alpha + beta + 1 = 0`, where the closed
/// form for `A_1, A_2` has a removable singularity.
pub fn jacobi_mn(alpha: &Rational, beta: &Rational, n: usize) -> Result<GeneralizedPoly> {
    let base = jacobi_classical(alpha, beta, n)?;
    let (a, b) = (alpha, beta);
    let ab1 = a + b + int(1);
    if ab1.is_zero() {
        return Err(Error::Degenerate("alpha + beta + 1 = 0".into()));
    }
    let ni = n as i64;
    let binom = |top: Rational, k: i64| gen_binomial_signed(&(top + int(ni)), k);
    let na_n = binom(a.clone(), ni);
    let nb_n = binom(b.clone(), ni);
    let nab1_n = binom(ab1.clone(), ni);
    let nab1_n1 = binom(ab1.clone(), ni - 1);
    let nab_n = binom(a + b, ni);
    let nab_n1 = binom(a + b, ni - 1);
    let a_plus = a + int(1);
    let b_plus = b + int(1);
    let ab2 = a + b + int(2);

    let a0 = scalar_block(&[
        (BlockKey::ONE, int(1)),
        (BlockKey::M, binom(b.clone(), ni - 1) * &nab1_n / &na_n),
        (BlockKey::N, binom(a.clone(), ni - 1) * &nab1_n / &nb_n),
        (
            BlockKey::MN,
            &ab2 * &ab2 / (&a_plus * &b_plus) * &nab1_n1 * &nab1_n1,
        ),
    ]);
    let a1 = scalar_block(&[
        (BlockKey::M, &nb_n * &nab_n / (&na_n * &ab1)),
        (BlockKey::MN, &nab_n1 * &nab1_n / &a_plus),
    ]);
    let a2 = scalar_block(&[
        (BlockKey::N, &na_n * &nab_n / (&nb_n * &ab1)),
        (BlockKey::MN, &nab_n1 * &nab1_n / &b_plus),
    ]);
    let one_minus_x = Poly::from_ints(&[1, -1]);
    let one_plus_x = Poly::from_ints(&[1, 1]);
    let multiplier = &a1.mul_poly(&one_minus_x) - &a2.mul_poly(&one_plus_x);
    let value = &a0.mul_poly(&base) + &multiplier.mul_poly(&base.derivative(1));
    Ok(GeneralizedPoly {
        params: FamilyParams::new(FamilyKind::JacobiMN, a.clone(), b.clone())?,
        n,
        value,
        connection: vec![a0, a1, a2],
    })
}

/// Symmetric generalized Jacobi polynomial `C_0 P - C_1 x P'` with
/// `beta = alpha`, `N = M`; the result only has pure `M^k` blocks.
///
/// Returns [`Error::Degenerate`] at `alpha = -1/2`.
pub fn jacobi_symmetric_mm(alpha: &Rational, n: usize) -> Result<GeneralizedPoly> {
    let base = jacobi_classical(alpha, alpha, n)?;
    let a = alpha;
    let two_a1 = int(2) * a + int(1);
    if two_a1.is_zero() {
        return Err(Error::Degenerate("2 alpha + 1 = 0".into()));
    }
    let ni = n as i64;
    let c = |shift: Rational, k: i64| gen_binomial_signed(&(shift + int(ni)), k);
    let m2 = BlockKey::new(2, 0);
    let c_2a1_n1 = c(int(2) * a + int(1), ni - 1);
    let c0 = scalar_block(&[
        (BlockKey::ONE, int(1)),
        (
            BlockKey::M,
            int(2 * ni) / (a + int(1)) * c(int(2) * a + int(1), ni),
        ),
        (m2, int(4) * &c_2a1_n1 * &c_2a1_n1),
    ]);
    let c1 = scalar_block(&[
        (BlockKey::M, int(2) / &two_a1 * c(int(2) * a, ni)),
        (
            m2,
            int(2) / (a + int(1)) * c(int(2) * a, ni - 1) * c(int(2) * a + int(1), ni),
        ),
    ]);
    let value = &c0.mul_poly(&base) - &c1.mul_poly(&(&Poly::x() * &base.derivative(1)));
    Ok(GeneralizedPoly {
        params: FamilyParams::new(FamilyKind::JacobiSymmetricMM, a.clone(), a.clone())?,
        n,
        value,
        connection: vec![c0, c1],
    })
}

/// `<f, g> = (1/Gamma(alpha+1)) int_0^inf x^alpha e^-x f g dx + m f(0) g(0) + nn f'(0) g'(0)`.
///
/// The normalized moments are `(alpha+1)_k`, so the integral is exact.
pub fn sobolev_inner_product_laguerre(
    f: &Poly,
    g: &Poly,
    alpha: &Rational,
    m: &Rational,
    nn: &Rational,
) -> Rational {
    let h = f * g;
    let a1 = alpha + int(1);
    let integral = h
        .coeffs()
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (k, c)| acc + c * pochhammer(&a1, k));
    let zero = Rational::zero();
    integral
        + m * f.eval(&zero) * g.eval(&zero)
        + nn * f.derivative(1).eval(&zero) * g.derivative(1).eval(&zero)
}

/// Normalized Jacobi weight on `[-1, 1]` plus point masses `m` at `-1` and `nn` at `1`.
///
/// With the weight normalized to total mass one, the moment of `(1-x)^p`
/// is `2^p (alpha+1)_p / (alpha+beta+2)_p`.
pub fn jacobi_inner_product(
    f: &Poly,
    g: &Poly,
    alpha: &Rational,
    beta: &Rational,
    m: &Rational,
    nn: &Rational,
) -> Rational {
    let h = f * g;
    // h(x) = sum_p h_p (1-x)^p, i.e. the coefficients of h(1 - t) in t.
    let shifted = h.compose_linear(&int(1), &int(-1));
    let a1 = alpha + int(1);
    let ab2 = alpha + beta + int(2);
    let two = int(2);
    let integral = shifted
        .coeffs()
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (p, c)| {
            acc + c * pow(&two, p) * pochhammer(&a1, p) / pochhammer(&ab2, p)
        });
    integral + m * f.eval(&int(-1)) * g.eval(&int(-1)) + nn * f.eval(&int(1)) * g.eval(&int(1))
}
