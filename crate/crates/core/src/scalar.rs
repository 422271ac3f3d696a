//! Exact rational scalars and the combinatorial primitives built on them.
//!
//! Every closed-form coefficient in this crate is written in terms of
//! [`pochhammer`], [`gen_binomial`] and [`reciprocal_gamma_ratio`]; the gamma
//! function itself is never evaluated.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Builds `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Builds the integer `p` as a rational.
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Rising factorial `a (a+1) ... (a+k-1)`; `1` when `k == 0`.
pub fn pochhammer(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..k {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// `k!` as an exact integer.
pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Generalized binomial coefficient `a (a-1) ... (a-k+1) / k!` for rational `a`.
pub fn gen_binomial(a: &Rational, k: usize) -> Rational {
    let mut num = Rational::one();
    let mut term = a.clone();
    for _ in 0..k {
        if term.is_zero() {
            return Rational::zero();
        }
        num *= &term;
        term -= Rational::one();
    }
    num / Rational::from_integer(factorial(k))
}

/// Generalized binomial with a signed lower index. Negative `k` yields zero,
/// which lets closed forms like `C(n+a, n-2)` be used at `n = 0, 1` directly.
pub fn gen_binomial_signed(a: &Rational, k: i64) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        gen_binomial(a, k as usize)
    }
}

/// `1 / Gamma(k)` for integer `k >= 0`, with the pole at `k = 0` mapped to zero.
pub fn reciprocal_gamma_ratio(k: i64) -> Result<Rational> {
    match k {
        k if k < 0 => Err(Error::InvalidArgument(format!(
            "reciprocal gamma requested at negative integer {k}"
        ))),
        0 => Ok(Rational::zero()),
        k => Ok(Rational::new(BigInt::one(), factorial(k as usize - 1))),
    }
}

/// `(-1)^k` as a rational.
pub fn sign_pow(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `r^k` for a non-negative integer exponent.
pub fn pow(r: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

/// Returns `Some(i)` when `r` is an integer that fits in `i64`.
pub fn as_integer(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// Returns `Some(k)` when `r` is a non-negative integer.
pub fn as_nonneg_integer(r: &Rational) -> Option<usize> {
    as_integer(r).and_then(|i| usize::try_from(i).ok())
}

/// Parses an exact rational written as `p`, `p/q` or `-p/q`. Decimal and
/// exponent notation are rejected so that parameters never pass through floats.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let valid = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
    if !valid {
        return Err(Error::Parse(format!("not an exact rational: {s:?}")));
    }
    let r = Rational::from_str(t).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(r)
}

/// Canonical `p/q` (or `p`) text form.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Nearest `f64` to an exact rational, correct even when numerator and
/// denominator individually overflow `f64`.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer().abs();
    let d = r.denom();
    // Keep a 62-bit quotient and rescale by the remaining power of two.
    let exp = n.bits() as i64 - d.bits() as i64 - 62;
    let q = if exp >= 0 {
        n / (d << exp as usize)
    } else {
        (n << (-exp) as usize) / d
    };
    let exp = exp.clamp(-2200, 2200) as i32;
    // Two factors so that neither power of two underflows on its own.
    let magnitude = q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(exp / 2) * 2f64.powi(exp - exp / 2);
    if r.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Bit length of numerator plus denominator; a size measure for pivoting
/// diagnostics.
pub fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Serde adapter writing rationals as exact `"p/q"` strings.
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&int(3), 2), int(12));
        assert_eq!(pochhammer(&rat(-5, 2), 0), int(1));
        assert_eq!(pochhammer(&int(-2), 4), int(0));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(gen_binomial(&int(2), 1), int(2));
        assert_eq!(gen_binomial(&int(1), 2), int(0));
        assert_eq!(gen_binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(gen_binomial_signed(&int(5), -1), int(0));
    }

    #[test]
    fn reciprocal_gamma_examples() {
        assert_eq!(reciprocal_gamma_ratio(0).unwrap(), int(0));
        assert_eq!(reciprocal_gamma_ratio(1).unwrap(), int(1));
        assert_eq!(reciprocal_gamma_ratio(3).unwrap(), rat(1, 2));
        assert!(reciprocal_gamma_ratio(-1).is_err());
    }

    #[test]
    fn parse_rejects_floats() {
        assert_eq!(parse_rational("-1/3").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        assert_eq!(to_f64(&rat(-3, 2)), -1.5);
        let huge = Rational::new(factorial(200), factorial(199));
        assert!((to_f64(&huge) - 200.0).abs() < 1e-9);
        let tiny = Rational::new(BigInt::one(), factorial(170));
        assert!(to_f64(&tiny) > 0.0);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-40i64..40, 1i64..12).prop_map(|(p, q)| rat(p, q))
        }

        proptest! {
            #[test]
            fn pochhammer_splits(a in small_rat(), j in 0usize..8, k in 0usize..8) {
                let lhs = pochhammer(&a, j + k);
                let rhs = pochhammer(&a, j) * pochhammer(&(a.clone() + int(j as i64)), k);
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn binomial_times_factorial(a in small_rat(), k in 0usize..10) {
                let lhs = gen_binomial(&a, k) * Rational::from_integer(factorial(k));
                let rhs = pochhammer(&(a - int(k as i64) + int(1)), k);
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn integer_binomial_matches_pascal(a in 0usize..25, k in 0usize..30) {
                let mut row = vec![BigInt::one()];
                for _ in 0..a {
                    let mut next = vec![BigInt::one(); row.len() + 1];
                    for i in 1..row.len() {
                        next[i] = &row[i - 1] + &row[i];
                    }
                    row = next;
                }
                let expected = row.get(k).cloned().unwrap_or_default();
                prop_assert_eq!(gen_binomial(&int(a as i64), k), Rational::from_integer(expected));
            }

            #[test]
            fn exact_add_sub(a in small_rat(), b in small_rat()) {
                prop_assert_eq!((a.clone() + &b) - &b, a);
            }
        }
    }
}
