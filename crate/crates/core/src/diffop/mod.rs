//! Linear differential operators with polynomial coefficients, organized into
//! blocks by powers of the mass parameters.
//!
//! An operator is formally of infinite order, but applied to a polynomial of
//! degree `d` only derivative orders `i <= d` contribute, so [`OperatorPencil::apply`]
//! is always a finite, exact computation.

pub mod coefficients;
pub mod pencils;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Result;
use crate::families::FamilyParams;
use crate::poly::{BlockKey, MNPoly, Poly};
use crate::scalar::Rational;

pub use coefficients::{CoefficientFamily, CoefficientKind};

/// Derivative-order coefficient generator: `i -> c_i(x)` for `i >= 1`.
pub type CoefficientFn = Arc<dyn Fn(usize) -> Poly + Send + Sync>;
/// Degree-dependent order-zero coefficient: `n -> c_0(n, x)`.
pub type OrderZeroFn = Arc<dyn Fn(usize) -> Poly + Send + Sync>;
/// Spectral multiplier of the classical part: `n -> lambda_n`.
pub type EigenFn = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

#[derive(Clone)]
pub enum Coefficients {
    /// Entry `k` is the coefficient of `D^(k+1)`.
    Table(Vec<Poly>),
    /// Generated on demand; `max_order` bounds the nonzero orders when known.
    Generated {
        generator: CoefficientFn,
        max_order: Option<usize>,
    },
}

/// Operator attached to one `M^p N^q` block.
#[derive(Clone)]
pub struct BlockOperator {
    pub coefficients: Coefficients,
    pub order_zero: Option<OrderZeroFn>,
}

impl BlockOperator {
    pub fn table(coeffs: Vec<Poly>) -> Self {
        BlockOperator {
            coefficients: Coefficients::Table(coeffs),
            order_zero: None,
        }
    }

    pub fn generated(generator: CoefficientFn, max_order: Option<usize>) -> Self {
        BlockOperator {
            coefficients: Coefficients::Generated {
                generator,
                max_order,
            },
            order_zero: None,
        }
    }

    pub fn with_order_zero(mut self, f: OrderZeroFn) -> Self {
        self.order_zero = Some(f);
        self
    }

    /// Coefficient of `D^i` for `i >= 1`.
    pub fn coefficient(&self, i: usize) -> Poly {
        debug_assert!(i >= 1);
        match &self.coefficients {
            Coefficients::Table(t) => t.get(i - 1).cloned().unwrap_or_default(),
            Coefficients::Generated {
                generator,
                max_order,
            } => match max_order {
                Some(m) if i > *m => Poly::zero(),
                _ => generator(i),
            },
        }
    }

    /// Highest stored derivative order, `None` if unbounded.
    pub fn max_order(&self) -> Option<usize> {
        match &self.coefficients {
            Coefficients::Table(t) => Some(t.len()),
            Coefficients::Generated { max_order, .. } => *max_order,
        }
    }
}

/// `sum_{(p,q)} M^p N^q sum_i c^{(p,q)}_i(x) D^i`, plus an optional eigen term
/// folded into the order-zero coefficient of the unit block.
#[derive(Clone, Default)]
pub struct OperatorPencil {
    name: String,
    blocks: BTreeMap<BlockKey, BlockOperator>,
    eigen: Option<EigenFn>,
}

impl fmt::Debug for OperatorPencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorPencil")
            .field("name", &self.name)
            .field("blocks", &self.blocks.keys().collect::<Vec<_>>())
            .field("eigen", &self.eigen.is_some())
            .finish()
    }
}

impl OperatorPencil {
    pub fn new(name: impl Into<String>) -> Self {
        OperatorPencil {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_block(mut self, key: BlockKey, op: BlockOperator) -> Self {
        self.blocks.insert(key, op);
        self
    }

    pub fn with_eigen(mut self, f: EigenFn) -> Self {
        self.eigen = Some(f);
        self
    }

    pub fn block(&self, key: BlockKey) -> Option<&BlockOperator> {
        self.blocks.get(&key)
    }

    pub fn block_keys(&self) -> impl Iterator<Item = BlockKey> + '_ {
        self.blocks.keys().copied()
    }

    /// Coefficient of `M^p N^q D^i` (for `i >= 1`).
    pub fn coefficient(&self, key: BlockKey, i: usize) -> Poly {
        self.blocks
            .get(&key)
            .map(|b| b.coefficient(i))
            .unwrap_or_default()
    }

    /// Full order-zero coefficient of block `key` at degree `n`, including the eigen term.
    pub fn order_zero(&self, key: BlockKey, n: usize) -> Poly {
        let mut out = self
            .blocks
            .get(&key)
            .and_then(|b| b.order_zero.as_ref())
            .map(|f| f(n))
            .unwrap_or_default();
        if key == BlockKey::ONE {
            if let Some(e) = &self.eigen {
                out += &Poly::constant(e(n));
            }
        }
        out
    }

    fn has_order_zero(&self, key: BlockKey) -> bool {
        (key == BlockKey::ONE && self.eigen.is_some())
            || self.blocks.get(&key).is_some_and(|b| b.order_zero.is_some())
    }

    /// Keys carrying any term, including a unit block holding only the eigen term.
    pub fn active_keys(&self) -> Vec<BlockKey> {
        let mut keys: Vec<_> = self.blocks.keys().copied().collect();
        if self.eigen.is_some() && !keys.contains(&BlockKey::ONE) {
            keys.insert(0, BlockKey::ONE);
        }
        keys
    }

    /// Applies the operator (at degree parameter `n`) to `y`.
    pub fn apply(&self, y: &MNPoly, n: usize) -> MNPoly {
        let top = y.max_degree().unwrap_or(0);
        let derivs: Vec<MNPoly> = std::iter::successors(Some(y.clone()), |p| Some(p.derivative(1)))
            .take(top + 1)
            .collect();
        self.apply_with_derivatives(&derivs, n)
    }

    /// As [`apply`](Self::apply), with `derivs[i] = D^i y` precomputed up to the degree of `y`.
    pub fn apply_with_derivatives(&self, derivs: &[MNPoly], n: usize) -> MNPoly {
        let mut out = MNPoly::zero();
        let top = derivs.len().saturating_sub(1);
        for key in self.active_keys() {
            let mut acc = MNPoly::zero();
            if self.has_order_zero(key) {
                acc += &derivs[0].mul_poly(&self.order_zero(key, n));
            }
            if let Some(op) = self.blocks.get(&key) {
                let cap = op.max_order().map_or(top, |m| m.min(top));
                for (i, d) in derivs.iter().enumerate().take(cap + 1).skip(1) {
                    let c = op.coefficient(i);
                    if !c.is_zero() && !d.is_zero() {
                        acc += &d.mul_poly(&c);
                    }
                }
            }
            out += &acc.mul_block(key);
        }
        out
    }
}

/// Residual of one degree in a verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualEntry {
    pub n: usize,
    pub residual: MNPoly,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub pencil: String,
    pub family: FamilyParams,
    pub entries: Vec<ResidualEntry>,
}

impl VerificationReport {
    /// True iff every residual is the zero `MNPoly`.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.residual.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.entries.iter().filter(|e| !e.residual.is_zero())
    }
}

/// Applies `pencil` to every member `n` of `family` in `ns`, keeping the full residuals.
pub fn verify_family(
    pencil: &OperatorPencil,
    family: &FamilyParams,
    ns: RangeInclusive<usize>,
) -> Result<VerificationReport> {
    family.validate()?;
    let entries = ns
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            let y = family.build(n)?;
            Ok(ResidualEntry {
                n,
                residual: pencil.apply(&y.value, n),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        pencil: pencil.name().to_string(),
        family: family.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{jacobi_classical, laguerre_classical, FamilyKind};
    use crate::scalar::{int, rat};

    #[test]
    fn order_zero_identity() {
        let pencil = OperatorPencil::new("id").with_block(
            BlockKey::ONE,
            BlockOperator::table(vec![]).with_order_zero(Arc::new(|_| Poly::one())),
        );
        let y = MNPoly::from_block(BlockKey::MN, Poly::from_ints(&[1, 2, 3]));
        assert_eq!(pencil.apply(&y, 7), y);
    }

    #[test]
    fn classical_operators_annihilate() {
        let z = int(0);
        let l2 = MNPoly::from_poly(laguerre_classical(&z, 2).unwrap());
        assert!(pencils::classical_laguerre(&z).apply(&l2, 2).is_zero());
        let p2 = MNPoly::from_poly(jacobi_classical(&z, &z, 2).unwrap());
        assert!(pencils::classical_jacobi(&z, &z).apply(&p2, 2).is_zero());
    }

    #[test]
    fn truncation_beyond_degree_is_exact() {
        let alpha = rat(1, 2);
        let pencil = pencils::laguerre_point_mass(&alpha);
        for n in 0..8 {
            let y = FamilyParams::laguerre(FamilyKind::LaguerreM, alpha.clone())
                .unwrap()
                .build(n)
                .unwrap()
                .value;
            // Explicit sum far past the degree.
            let mut naive = MNPoly::zero();
            for key in pencil.active_keys() {
                let mut acc = y.mul_poly(&pencil.order_zero(key, n));
                for i in 1..n + 12 {
                    acc += &y.derivative(i).mul_poly(&pencil.coefficient(key, i));
                }
                naive += &acc.mul_block(key);
            }
            assert_eq!(pencil.apply(&y, n), naive);
        }
    }

    #[test]
    fn verify_reports_nonzero_residual() {
        // Wrong eigen term must leave the residual visible.
        let z = int(0);
        let bad = OperatorPencil::new("bad")
            .with_block(
                BlockKey::ONE,
                BlockOperator::table(vec![Poly::from_ints(&[1, -1]), Poly::x()]),
            )
            .with_eigen(Arc::new(|n| int(n as i64 + 1)));
        let fam = FamilyParams::laguerre(FamilyKind::LaguerreClassical, z).unwrap();
        let report = verify_family(&bad, &fam, 0..=3).unwrap();
        assert!(!report.passed());
        let first = report.failures().next().unwrap();
        assert_eq!(first.n, 0);
        assert_eq!(first.residual, MNPoly::from_poly(Poly::one()));
    }
}
