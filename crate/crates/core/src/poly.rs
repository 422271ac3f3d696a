//! Dense univariate polynomials over the rationals, and polynomials whose
//! coefficients carry formal powers of the two mass parameters `M` and `N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, pow, Rational};

/// Polynomial in `x` with exact rational coefficients, lowest power first.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial is
/// the empty vector and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds from integer coefficients, lowest power first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `order`-th derivative.
    pub fn derivative(&self, order: usize) -> Poly {
        if order == 0 {
            return self.clone();
        }
        if order >= self.coeffs.len() {
            return Poly::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|k| {
                // k (k-1) ... (k-order+1)
                let falling: BigInt = ((k - order + 1)..=k).map(BigInt::from).product();
                &self.coeffs[k] * Rational::from_integer(falling)
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `p(a + b x)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> Poly {
        let inner = Poly::from_coeffs(vec![a.clone(), b.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Euclidean division; `None` if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let d = divisor.degree()?;
        let lead = &divisor.coeffs[d];
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + d] / lead;
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * dc;
                }
            }
            quot[k] = q;
        }
        rem.truncate(d);
        Some((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// LaTeX rendering, ascending powers, e.g. `3x - \frac{1}{2}x^{2}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let unit = a.is_one() && k > 0;
            if !unit {
                if a.is_integer() {
                    out.push_str(&a.to_string());
                } else {
                    out.push_str(&format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom()));
                }
            }
            match k {
                0 => {}
                1 => out.push('x'),
                _ => out.push_str(&format!("x^{{{k}}}")),
            }
        }
        out
    }

    /// Parses the canonical text form produced by `Display`.
    pub fn parse(s: &str) -> Result<Poly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        // Split into signed terms.
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut acc = Poly::zero();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest),
                None => (Rational::one(), term.strip_prefix('+').unwrap_or(term)),
            };
            let (coeff, power) = match body.find('x') {
                None => (parse_rational(body)?, 0usize),
                Some(pos) => {
                    let c = if pos == 0 {
                        Rational::one()
                    } else {
                        let head = body[..pos]
                            .strip_suffix('*')
                            .ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?;
                        parse_rational(head)?
                    };
                    let tail = &body[pos + 1..];
                    let k = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|t| t.parse::<usize>().ok())
                            .ok_or_else(|| Error::Parse(format!("bad exponent in {term:?}")))?
                    };
                    (c, k)
                }
            };
            acc += &Poly::monomial(power, sign * coeff);
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    /// Canonical text: ascending powers, `p/q` coefficients, e.g. `1 - 2*x + 1/2*x^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rational::zero());
        }
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        *self += &(-rhs);
    }
}

/// Exponents `(p, q)` of the monomial `M^p N^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockKey {
    pub m: u32,
    pub n: u32,
}

impl BlockKey {
    pub const ONE: BlockKey = BlockKey { m: 0, n: 0 };
    pub const M: BlockKey = BlockKey { m: 1, n: 0 };
    pub const N: BlockKey = BlockKey { m: 0, n: 1 };
    pub const MN: BlockKey = BlockKey { m: 1, n: 1 };

    pub const fn new(m: u32, n: u32) -> Self {
        BlockKey { m, n }
    }

    pub fn shift(self, by: BlockKey) -> BlockKey {
        BlockKey::new(self.m + by.m, self.n + by.n)
    }
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |f: &mut fmt::Formatter<'_>, sym: &str, e: u32| match e {
            0 => Ok(()),
            1 => write!(f, "{sym}"),
            e => write!(f, "{sym}^{e}"),
        };
        match (self.m, self.n) {
            (0, 0) => write!(f, "1"),
            (m, 0) => part(f, "M", m),
            (0, n) => part(f, "N", n),
            (m, n) => {
                part(f, "M", m)?;
                write!(f, "*")?;
                part(f, "N", n)
            }
        }
    }
}

/// `sum_{(p,q)} M^p N^q poly_{p,q}(x)`; zero blocks are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MNPoly {
    blocks: BTreeMap<BlockKey, Poly>,
}

impl MNPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `M^key.m N^key.n * p`.
    pub fn from_block(key: BlockKey, p: Poly) -> Self {
        let mut out = Self::zero();
        out.add_block(key, &p);
        out
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_block(BlockKey::ONE, p)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, key: BlockKey) -> Poly {
        self.blocks.get(&key).cloned().unwrap_or_default()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&BlockKey, &Poly)> {
        self.blocks.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = BlockKey> + '_ {
        self.blocks.keys().copied()
    }

    /// Adds `p` into block `key`, dropping the block if it cancels.
    pub fn add_block(&mut self, key: BlockKey, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.blocks.entry(key).or_default();
        *entry += p;
        if entry.is_zero() {
            self.blocks.remove(&key);
        }
    }

    /// Largest x-degree across blocks.
    pub fn max_degree(&self) -> Option<usize> {
        self.blocks.values().filter_map(Poly::degree).max()
    }

    /// Multiplies by `M^by.m N^by.n`.
    pub fn mul_block(&self, by: BlockKey) -> MNPoly {
        MNPoly {
            blocks: self
                .blocks
                .iter()
                .map(|(k, p)| (k.shift(by), p.clone()))
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> MNPoly {
        let mut out = MNPoly::zero();
        for (k, b) in &self.blocks {
            out.add_block(*k, &(b * p));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MNPoly {
        let mut out = MNPoly::zero();
        for (k, b) in &self.blocks {
            out.add_block(*k, &b.scale(c));
        }
        out
    }

    pub fn derivative(&self, order: usize) -> MNPoly {
        let mut out = MNPoly::zero();
        for (k, b) in &self.blocks {
            out.add_block(*k, &b.derivative(order));
        }
        out
    }

    pub fn reflect(&self) -> MNPoly {
        MNPoly {
            blocks: self.blocks.iter().map(|(k, p)| (*k, p.reflect())).collect(),
        }
    }

    /// Exchanges the roles of `M` and `N`.
    pub fn swap_params(&self) -> MNPoly {
        MNPoly {
            blocks: self
                .blocks
                .iter()
                .map(|(k, p)| (BlockKey::new(k.n, k.m), p.clone()))
                .collect(),
        }
    }

    /// Substitutes `N = M`.
    pub fn identify_n_with_m(&self) -> MNPoly {
        let mut out = MNPoly::zero();
        for (k, p) in &self.blocks {
            out.add_block(BlockKey::new(k.m + k.n, 0), p);
        }
        out
    }

    /// Substitutes `N = 0`.
    pub fn drop_n(&self) -> MNPoly {
        MNPoly {
            blocks: self
                .blocks
                .iter()
                .filter(|(k, _)| k.n == 0)
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
        }
    }

    /// Substitutes numeric values for `M` and `N` and sums the blocks.
    pub fn eval_params(&self, m: &Rational, n: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (k, p) in &self.blocks {
            let factor = pow(m, k.m as usize) * pow(n, k.n as usize);
            out += &p.scale(&factor);
        }
        out
    }

    /// Value of a block-constant (degree-0 in `x`) element as a map of scalars.
    pub fn constant_terms(&self) -> BTreeMap<BlockKey, Rational> {
        self.blocks.iter().map(|(k, p)| (*k, p.coeff(0))).collect()
    }
}

impl fmt::Display for MNPoly {
    /// Sorted block keys, e.g. `(1 - x) + M*(-x) + M*N*(1/2*x^2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, p)) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *k == BlockKey::ONE {
                write!(f, "({p})")?;
            } else {
                write!(f, "{k}*({p})")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a MNPoly> for &'a MNPoly {
    type Output = MNPoly;
    fn add(self, rhs: &MNPoly) -> MNPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a MNPoly> for &'a MNPoly {
    type Output = MNPoly;
    fn sub(self, rhs: &MNPoly) -> MNPoly {
        let mut out = self.clone();
        for (k, p) in &rhs.blocks {
            out.add_block(*k, &(-p));
        }
        out
    }
}

impl AddAssign<&MNPoly> for MNPoly {
    fn add_assign(&mut self, rhs: &MNPoly) {
        for (k, p) in &rhs.blocks {
            self.add_block(*k, p);
        }
    }
}

impl Neg for &MNPoly {
    type Output = MNPoly;
    fn neg(self) -> MNPoly {
        MNPoly {
            blocks: self.blocks.iter().map(|(k, p)| (*k, -p)).collect(),
        }
    }
}

impl<'a> Mul<&'a MNPoly> for &'a MNPoly {
    type Output = MNPoly;
    fn mul(self, rhs: &MNPoly) -> MNPoly {
        let mut out = MNPoly::zero();
        for (ka, a) in &self.blocks {
            for (kb, b) in &rhs.blocks {
                out.add_block(ka.shift(*kb), &(a * b));
            }
        }
        out
    }
}
