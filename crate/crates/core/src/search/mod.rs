//! Ansatz search for differential operators annihilating a polynomial family.
//!
//! Unknown coefficient polynomials are expanded in a monomial (or structured)
//! basis; requiring the residual to vanish coefficient-by-coefficient for each
//! training degree gives an exact linear system whose affine solution set is
//! the space of admissible operators within the ansatz.

pub mod linear;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffop::pencils::{classical_jacobi, classical_laguerre};
use crate::diffop::OperatorPencil;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FamilyParams};
use crate::poly::{BlockKey, MNPoly, Poly};
use crate::scalar::{int, pow, Rational};

pub use linear::{AffineSolution, LinearSystem, SparseRow};

/// Known part of the target equation, moved to the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedForm {
    /// Homogeneous search.
    None,
    ClassicalLaguerre,
    ClassicalJacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    Monomial,
    /// Every coefficient of order `>= 1` is `(1 - x^2)` times a polynomial.
    DivisibleByOneMinusXSquared,
}

impl Structure {
    fn factor(self) -> Poly {
        match self {
            Structure::Monomial => Poly::one(),
            Structure::DivisibleByOneMinusXSquared => Poly::from_ints(&[1, 0, -1]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderZeroMode {
    Absent,
    /// An independent scalar for every degree `n`.
    PerN,
    /// A polynomial in `n` of the given degree, constant in `x`.
    PolyInN(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct UnknownBlock {
    pub key: BlockKey,
    pub max_order: usize,
    /// Degree bound of the coefficient of `D^i` at index `i - 1`; missing
    /// entries default to `i + 1`.
    #[serde(default)]
    pub degree_bounds: Vec<usize>,
    pub structure: Structure,
    pub order_zero: OrderZeroMode,
    /// Adds the side condition `sum_{i>=1} c_i(x) = 0`.
    #[serde(default)]
    pub sum_vanishing: bool,
}

impl UnknownBlock {
    pub fn new(key: BlockKey, max_order: usize) -> Self {
        UnknownBlock {
            key,
            max_order,
            degree_bounds: Vec::new(),
            structure: Structure::Monomial,
            order_zero: OrderZeroMode::PerN,
            sum_vanishing: false,
        }
    }

    pub fn degree_bound(&self, i: usize) -> usize {
        self.degree_bounds.get(i - 1).copied().unwrap_or(i + 1)
    }

    /// Highest power of the free basis polynomial multiplying the structure factor.
    fn basis_top(&self, i: usize) -> Option<usize> {
        let bound = self.degree_bound(i);
        match self.structure {
            Structure::Monomial => Some(bound),
            Structure::DivisibleByOneMinusXSquared => bound.checked_sub(2),
        }
    }
}

/// One unknown of the linear system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Column {
    /// Coefficient of `factor * x^power` in the `D^order` coefficient of `block`.
    Slot {
        block: BlockKey,
        order: usize,
        power: usize,
    },
    /// Order-zero scalar of `block` at degree `n`.
    OrderZeroAt { block: BlockKey, n: usize },
    /// Coefficient of `n^power` in the order-zero polynomial of `block`.
    OrderZeroPoly { block: BlockKey, power: usize },
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Slot {
                block,
                order,
                power,
            } => write!(f, "[{block}] D^{order} x^{power}"),
            Column::OrderZeroAt { block, n } => write!(f, "[{block}] D^0 @ n={n}"),
            Column::OrderZeroPoly { block, power } => write!(f, "[{block}] D^0 n^{power}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub column: Column,
    #[serde(with = "crate::scalar::rational_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SearchProblem {
    pub family: FamilyParams,
    pub fixed: FixedForm,
    pub unknowns: Vec<UnknownBlock>,
    #[serde(default)]
    pub normalizations: Vec<Normalization>,
    pub n_train: Vec<usize>,
    #[serde(default)]
    pub n_holdout: Vec<usize>,
}

/// Origin of a row of the assembled system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowLabel {
    Residual {
        n: usize,
        block: BlockKey,
        power: usize,
    },
    SumVanishing {
        block: BlockKey,
        power: usize,
    },
    Normalization {
        column: usize,
    },
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Residual { n, block, power } => {
                write!(f, "residual n={n} block={block} x^{power}")
            }
            RowLabel::SumVanishing { block, power } => write!(f, "sum condition block={block} x^{power}"),
            RowLabel::Normalization { column } => write!(f, "normalization of column {column}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLinearSystem {
    pub columns: Vec<Column>,
    pub labels: Vec<RowLabel>,
    pub system: LinearSystem,
}

impl ExactLinearSystem {
    pub fn rows(&self) -> usize {
        self.system.rows.len()
    }
}

fn key_power(key: BlockKey, power: usize) -> (BlockKey, usize) {
    (key, power)
}

impl SearchProblem {
    pub fn fixed_pencil(&self) -> Option<OperatorPencil> {
        let (a, b) = (&self.family.alpha, &self.family.beta);
        match self.fixed {
            FixedForm::None => None,
            FixedForm::ClassicalLaguerre => Some(classical_laguerre(a)),
            FixedForm::ClassicalJacobi => Some(classical_jacobi(a, b)),
        }
    }

    /// All unknowns, in a fixed order: blocks as listed, then derivative
    /// order, then power; order-zero unknowns after the slots of their block.
    pub fn columns(&self) -> Vec<Column> {
        let mut cols = Vec::new();
        for u in &self.unknowns {
            for i in 1..=u.max_order {
                if let Some(top) = u.basis_top(i) {
                    for power in 0..=top {
                        cols.push(Column::Slot {
                            block: u.key,
                            order: i,
                            power,
                        });
                    }
                }
            }
            match u.order_zero {
                OrderZeroMode::Absent => {}
                OrderZeroMode::PerN => {
                    for &n in &self.n_train {
                        cols.push(Column::OrderZeroAt { block: u.key, n });
                    }
                }
                OrderZeroMode::PolyInN(d) => {
                    for power in 0..=d {
                        cols.push(Column::OrderZeroPoly { block: u.key, power });
                    }
                }
            }
        }
        cols
    }

    fn unknown(&self, key: BlockKey) -> Option<&UnknownBlock> {
        self.unknowns.iter().find(|u| u.key == key)
    }

    fn max_order(&self) -> usize {
        self.unknowns.iter().map(|u| u.max_order).max().unwrap_or(0)
    }

    fn check(&self) -> Result<()> {
        self.family.validate()?;
        if self.n_train.is_empty() {
            return Err(Error::IllFormed("n_train is empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for u in &self.unknowns {
            if !seen.insert(u.key) {
                return Err(Error::IllFormed(format!("block {} listed twice", u.key)));
            }
        }
        Ok(())
    }

    /// Contribution of column `col` to the residual at degree `n`, given `D^i y`.
    fn column_effect(&self, col: &Column, n: usize, derivs: &[MNPoly]) -> MNPoly {
        match *col {
            Column::Slot {
                block,
                order,
                power,
            } => match derivs.get(order) {
                Some(d) if !d.is_zero() => {
                    let u = self.unknown(block).expect("column of a listed block");
                    let basis = &u.structure.factor() * &Poly::monomial(power, int(1));
                    d.mul_poly(&basis).mul_block(block)
                }
                _ => MNPoly::zero(),
            },
            Column::OrderZeroAt { block, n: m } if m == n => derivs[0].mul_block(block),
            Column::OrderZeroAt { .. } => MNPoly::zero(),
            Column::OrderZeroPoly { block, power } => derivs[0]
                .scale(&pow(&int(n as i64), power))
                .mul_block(block),
        }
    }

    fn derivatives(&self, n: usize) -> Result<Vec<MNPoly>> {
        let y = self.family.build(n)?.value;
        let top = self.max_order().min(y.max_degree().unwrap_or(0));
        Ok(std::iter::successors(Some(y), |p| Some(p.derivative(1)))
            .take(top + 1)
            .collect())
    }

    /// Builds one row per `(n, block, x-power)` residual coefficient, plus side
    /// conditions and normalizations.
    pub fn assemble(&self) -> Result<ExactLinearSystem> {
        self.check()?;
        let columns = self.columns();
        let fixed = self.fixed_pencil();
        let per_n: Vec<Vec<(RowLabel, SparseRow, Rational)>> = self
            .n_train
            .par_iter()
            .map(|&n| {
                let derivs = self.derivatives(n)?;
                let mut rows: BTreeMap<(BlockKey, usize), (SparseRow, Rational)> = BTreeMap::new();
                if let Some(f) = &fixed {
                    let y = &derivs[0];
                    let full = std::iter::successors(Some(y.clone()), |p| Some(p.derivative(1)))
                        .take(y.max_degree().unwrap_or(0) + 1)
                        .collect::<Vec<_>>();
                    for (key, p) in f.apply_with_derivatives(&full, n).blocks() {
                        for (power, c) in p.coeffs().iter().enumerate() {
                            if !c.is_zero() {
                                rows.entry(key_power(*key, power)).or_default().1 = -c.clone();
                            }
                        }
                    }
                }
                for (j, col) in columns.iter().enumerate() {
                    for (key, p) in self.column_effect(col, n, &derivs).blocks() {
                        for (power, c) in p.coeffs().iter().enumerate() {
                            if !c.is_zero() {
                                rows.entry(key_power(*key, power)).or_default().0.push((j, c.clone()));
                            }
                        }
                    }
                }
                Ok(rows
                    .into_iter()
                    .map(|((block, power), (row, rhs))| {
                        (RowLabel::Residual { n, block, power }, row, rhs)
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;

        let mut system = LinearSystem::new(columns.len());
        let mut labels = Vec::new();
        for (label, row, rhs) in per_n.into_iter().flatten() {
            labels.push(label);
            system.push(row, rhs);
        }

        for u in self.unknowns.iter().filter(|u| u.sum_vanishing) {
            let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
            let factor = u.structure.factor();
            for (j, col) in columns.iter().enumerate() {
                if let Column::Slot { block, power, .. } = *col {
                    if block == u.key {
                        let basis = &factor * &Poly::monomial(power, int(1));
                        for (p, c) in basis.coeffs().iter().enumerate() {
                            if !c.is_zero() {
                                rows.entry(p).or_default().push((j, c.clone()));
                            }
                        }
                    }
                }
            }
            for (power, row) in rows {
                labels.push(RowLabel::SumVanishing { block: u.key, power });
                system.push(row, Rational::zero());
            }
        }

        for norm in &self.normalizations {
            let j = columns
                .iter()
                .position(|c| *c == norm.column)
                .ok_or_else(|| Error::IllFormed(format!("normalization column {} not in ansatz", norm.column)))?;
            labels.push(RowLabel::Normalization { column: j });
            system.push(vec![(j, int(1))], norm.value.clone());
        }

        Ok(ExactLinearSystem {
            columns,
            labels,
            system,
        })
    }

    /// Encodes a pencil's unknown blocks as a column vector. Fails when the
    /// pencil does not fit the ansatz bounds or structure.
    pub fn encode(&self, pencil: &OperatorPencil) -> Result<Vec<Rational>> {
        let columns = self.columns();
        let mut v = vec![Rational::zero(); columns.len()];
        let misfit = |what: String| Error::IllFormed(format!("pencil does not fit the ansatz: {what}"));
        for u in &self.unknowns {
            let factor = u.structure.factor();
            for i in 1..=u.max_order {
                let c = pencil.coefficient(u.key, i);
                let (q, r) = c.div_rem(&factor).expect("nonzero structure factor");
                if !r.is_zero() {
                    return Err(misfit(format!("[{}] D^{i} not divisible by {factor}", u.key)));
                }
                let top = u.basis_top(i);
                if q.degree().is_some_and(|d| top.is_none_or(|t| d > t)) {
                    return Err(misfit(format!("[{}] D^{i} degree too high", u.key)));
                }
                for (power, c) in q.coeffs().iter().enumerate() {
                    let col = Column::Slot {
                        block: u.key,
                        order: i,
                        power,
                    };
                    let j = columns.iter().position(|x| *x == col).expect("slot in range");
                    v[j] = c.clone();
                }
            }
            let constant_at = |n: usize| -> Result<Rational> {
                let p = pencil.order_zero(u.key, n);
                if p.degree().unwrap_or(0) > 0 {
                    return Err(misfit(format!("[{}] order zero depends on x", u.key)));
                }
                Ok(p.coeff(0))
            };
            match u.order_zero {
                OrderZeroMode::Absent => {}
                OrderZeroMode::PerN => {
                    for &n in &self.n_train {
                        let j = columns
                            .iter()
                            .position(|x| *x == Column::OrderZeroAt { block: u.key, n })
                            .expect("per-n column");
                        v[j] = constant_at(n)?;
                    }
                }
                OrderZeroMode::PolyInN(d) => {
                    // Interpolate the order-zero values over the training degrees.
                    let mut sys = LinearSystem::new(d + 1);
                    for &n in &self.n_train {
                        let row = (0..=d).map(|k| (k, pow(&int(n as i64), k))).collect();
                        sys.push(row, constant_at(n)?);
                    }
                    let fit = linear::solve(&sys)
                        .map_err(|_| misfit(format!("[{}] order zero not a degree-{d} polynomial in n", u.key)))?;
                    for (k, c) in fit.particular.into_iter().enumerate() {
                        let col = Column::OrderZeroPoly { block: u.key, power: k };
                        let j = columns.iter().position(|x| *x == col).expect("poly column");
                        v[j] = c;
                    }
                }
            }
        }
        Ok(v)
    }

    /// Runs assembly, the exact solve, training re-verification and holdout.
    pub fn solve(&self) -> Result<SearchSolution> {
        let sys = self.assemble()?;
        let affine = solve_nullspace(&sys)?;
        let sol = SearchSolution::new(self.clone(), &sys, affine);
        sol.verify_training()?;
        Ok(sol.with_holdout())
    }
}

/// Exact affine solve of an assembled system, with every row re-checked.
pub fn solve_nullspace(sys: &ExactLinearSystem) -> Result<AffineSolution> {
    let sol = linear::solve(&sys.system)?;
    let bad = sys
        .system
        .residuals(&sol.particular)
        .iter()
        .position(|r| !r.is_zero())
        .or_else(|| {
            sol.nullspace.iter().find_map(|v| {
                sys.system
                    .apply_homogeneous(v)
                    .iter()
                    .position(|r| !r.is_zero())
            })
        });
    match bad {
        Some(row) => Err(Error::IllFormed(format!(
            "solver output fails row {row} ({})",
            sys.labels[row]
        ))),
        None => Ok(sol),
    }
}

/// Sizes of the system and whether the training set is large enough: it must
/// meet the sampling rule (enough degrees to cover the unknowns at the
/// observed rows per degree, plus three) and no nullspace vector may fail at
/// a held-out degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Determination {
    pub columns: usize,
    pub rows: usize,
    pub rank: usize,
    pub nullspace_dim: usize,
    pub n_train: usize,
    pub required_n_train: usize,
    pub under_determined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoldoutFailure {
    /// `None` for the particular solution, else the basis index.
    pub vector: Option<usize>,
    pub n: usize,
    pub residual: MNPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HoldoutReport {
    NotValidated,
    Validated {
        particular_pass: Option<bool>,
        basis_pass: Vec<bool>,
        failures: Vec<HoldoutFailure>,
    },
}

impl HoldoutReport {
    pub fn passed(&self) -> bool {
        match self {
            HoldoutReport::NotValidated => false,
            HoldoutReport::Validated { failures, .. } => failures.is_empty(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchSolution {
    pub problem: SearchProblem,
    pub columns: Vec<Column>,
    pub affine: AffineSolution,
    /// Whether the system has a nonzero right-hand side.
    pub inhomogeneous: bool,
    pub determination: Determination,
    pub holdout: HoldoutReport,
}

impl SearchSolution {
    fn new(problem: SearchProblem, sys: &ExactLinearSystem, affine: AffineSolution) -> Self {
        let columns = sys.columns.clone();
        let per_n_cols = problem
            .unknowns
            .iter()
            .filter(|u| u.order_zero == OrderZeroMode::PerN)
            .count();
        let shared = columns.len() - per_n_cols * problem.n_train.len();
        let residual_rows = sys
            .labels
            .iter()
            .filter(|l| matches!(l, RowLabel::Residual { .. }))
            .count();
        let yield_per_n = (residual_rows / problem.n_train.len()).saturating_sub(per_n_cols).max(1);
        let required = shared.div_ceil(yield_per_n) + 3;
        let determination = Determination {
            columns: columns.len(),
            rows: sys.rows(),
            rank: affine.rank(),
            nullspace_dim: affine.nullspace.len(),
            n_train: problem.n_train.len(),
            required_n_train: required,
            under_determined: problem.n_train.len() < required,
        };
        SearchSolution {
            inhomogeneous: sys.system.rhs.iter().any(|r| !r.is_zero()),
            problem,
            columns,
            affine,
            determination,
            holdout: HoldoutReport::NotValidated,
        }
    }

    pub fn nullspace_dim(&self) -> usize {
        self.affine.nullspace.len()
    }

    pub fn particular(&self) -> &[Rational] {
        &self.affine.particular
    }

    pub fn nullspace(&self) -> &[Vec<Rational>] {
        &self.affine.nullspace
    }

    /// Coefficient of `D^i` (`i >= 1`) in `block` for the vector `v`.
    pub fn coefficient(&self, v: &[Rational], block: BlockKey, i: usize) -> Poly {
        let Some(u) = self.problem.unknown(block) else {
            return Poly::zero();
        };
        let mut q = Poly::zero();
        for (j, col) in self.columns.iter().enumerate() {
            if let Column::Slot { block: b, order, power } = *col {
                if b == block && order == i && !v[j].is_zero() {
                    q += &Poly::monomial(power, v[j].clone());
                }
            }
        }
        &u.structure.factor() * &q
    }

    /// Order-zero coefficient of `block` at degree `n`; `None` for a per-n
    /// unknown at an untrained degree.
    pub fn order_zero(&self, v: &[Rational], block: BlockKey, n: usize) -> Option<Rational> {
        let u = self.problem.unknown(block)?;
        match u.order_zero {
            OrderZeroMode::Absent => Some(Rational::zero()),
            OrderZeroMode::PerN => self
                .columns
                .iter()
                .position(|c| *c == Column::OrderZeroAt { block, n })
                .map(|j| v[j].clone()),
            OrderZeroMode::PolyInN(_) => {
                let mut acc = Rational::zero();
                for (j, col) in self.columns.iter().enumerate() {
                    if let Column::OrderZeroPoly { block: b, power } = *col {
                        if b == block {
                            acc += &v[j] * pow(&int(n as i64), power);
                        }
                    }
                }
                Some(acc)
            }
        }
    }

    /// Residual of `v` at degree `n` without the per-n order-zero unknowns,
    /// computed directly from the operator rather than from the matrix.
    fn partial_residual(&self, v: &[Rational], n: usize, with_fixed: bool) -> Result<(MNPoly, Vec<MNPoly>)> {
        let y = self.problem.family.build(n)?.value;
        let top = y.max_degree().unwrap_or(0);
        let derivs: Vec<MNPoly> = std::iter::successors(Some(y.clone()), |p| Some(p.derivative(1)))
            .take(top + 1)
            .collect();
        let mut r = MNPoly::zero();
        if with_fixed {
            if let Some(f) = self.problem.fixed_pencil() {
                r += &f.apply_with_derivatives(&derivs, n);
            }
        }
        let mut free_terms = Vec::new();
        for u in &self.problem.unknowns {
            let mut acc = MNPoly::zero();
            for (i, d) in derivs.iter().enumerate().take(u.max_order + 1).skip(1) {
                let c = self.coefficient(v, u.key, i);
                if !c.is_zero() {
                    acc += &d.mul_poly(&c);
                }
            }
            match u.order_zero {
                OrderZeroMode::PerN => free_terms.push(y.mul_block(u.key)),
                OrderZeroMode::PolyInN(_) => {
                    let c0 = self.order_zero(v, u.key, n).unwrap_or_default();
                    acc += &y.scale(&c0);
                }
                OrderZeroMode::Absent => {}
            }
            r += &acc.mul_block(u.key);
        }
        Ok((r, free_terms))
    }

    fn vectors(&self) -> Vec<(Option<usize>, &[Rational], bool)> {
        let mut out = Vec::new();
        if self.inhomogeneous || self.nullspace().is_empty() {
            out.push((None, self.particular(), true));
        }
        for (k, v) in self.nullspace().iter().enumerate() {
            out.push((Some(k), v.as_slice(), false));
        }
        out
    }

    /// Re-applies every returned operator to each training member.
    pub fn verify_training(&self) -> Result<()> {
        for (idx, v, with_fixed) in self.vectors() {
            for &n in &self.problem.n_train {
                let (mut r, _) = self.partial_residual(v, n, with_fixed)?;
                for u in &self.problem.unknowns {
                    if u.order_zero == OrderZeroMode::PerN {
                        let c0 = self.order_zero(v, u.key, n).unwrap_or_default();
                        let y = self.problem.family.build(n)?.value;
                        r += &y.scale(&c0).mul_block(u.key);
                    }
                }
                if !r.is_zero() {
                    return Err(Error::IllFormed(format!(
                        "vector {idx:?} leaves residual {r} at training degree {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn with_holdout(mut self) -> Self {
        self.holdout = cross_validate(&self, &self.problem.n_holdout.clone());
        if let HoldoutReport::Validated { basis_pass, .. } = &self.holdout {
            if basis_pass.iter().any(|ok| !ok) {
                self.determination.under_determined = true;
            }
        }
        self
    }

    /// `Some(l)` with `v = particular + sum l_k basis_k` when `v` lies in the affine set.
    pub fn membership(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        self.affine.decompose(v)
    }

    /// `Some(l)` with `v = sum l_k basis_k` when `v` lies in the nullspace.
    pub fn nullspace_membership(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        self.affine.decompose_homogeneous(v)
    }

    /// Whether `pencil` (its unknown blocks) lies in the affine solution set.
    pub fn contains_pencil(&self, pencil: &OperatorPencil) -> Result<Option<Vec<Rational>>> {
        Ok(self.membership(&self.problem.encode(pencil)?))
    }

    /// Coefficient tables `block -> [c_1, ..., c_max]` of vector `v`.
    pub fn tables(&self, v: &[Rational]) -> BTreeMap<BlockKey, Vec<Poly>> {
        self.problem
            .unknowns
            .iter()
            .map(|u| {
                (
                    u.key,
                    (1..=u.max_order).map(|i| self.coefficient(v, u.key, i)).collect(),
                )
            })
            .collect()
    }
}

/// Checks each solution vector at held-out degrees, refitting per-n
/// order-zero scalars there. A vector that cannot be completed to a zero
/// residual is a train-only artifact.
pub fn cross_validate(sol: &SearchSolution, n_holdout: &[usize]) -> HoldoutReport {
    if n_holdout.is_empty() {
        return HoldoutReport::NotValidated;
    }
    let mut failures = Vec::new();
    let mut particular_pass = None;
    let mut basis_pass = vec![true; sol.nullspace_dim()];
    for (idx, v, with_fixed) in sol.vectors() {
        let mut ok = true;
        for &n in n_holdout {
            let outcome = sol.partial_residual(v, n, with_fixed).map(|(r, free)| {
                if r.is_zero() {
                    return None;
                }
                let mut keys: Vec<(BlockKey, usize)> = r
                    .blocks()
                    .flat_map(|(k, p)| (0..p.coeffs().len()).map(move |i| (*k, i)))
                    .collect();
                for t in &free {
                    keys.extend(t.blocks().flat_map(|(k, p)| (0..p.coeffs().len()).map(move |i| (*k, i))));
                }
                keys.sort();
                keys.dedup();
                let mut sys = LinearSystem::new(free.len());
                for (key, power) in keys {
                    let row = free
                        .iter()
                        .enumerate()
                        .map(|(j, t)| (j, t.block(key).coeff(power)))
                        .filter(|(_, c)| !c.is_zero())
                        .collect();
                    sys.push(row, -r.block(key).coeff(power));
                }
                linear::solve(&sys).err().map(|_| r)
            });
            let residual = match outcome {
                Ok(None) => continue,
                Ok(Some(r)) => r,
                Err(_) => MNPoly::zero(),
            };
            ok = false;
            failures.push(HoldoutFailure {
                vector: idx,
                n,
                residual,
            });
        }
        match idx {
            None => particular_pass = Some(ok),
            Some(k) => basis_pass[k] = ok,
        }
    }
    HoldoutReport::Validated {
        particular_pass,
        basis_pass,
        failures,
    }
}

/// Recovers the mass-block coefficients of the point-mass Laguerre equation,
/// with the classical operator and eigen term fixed.
pub fn search_laguerre_m_block(
    alpha: Rational,
    max_order: usize,
    degree_bounds: Vec<usize>,
    n_train: Vec<usize>,
    n_holdout: Vec<usize>,
) -> Result<SearchSolution> {
    let mut block = UnknownBlock::new(BlockKey::M, max_order);
    block.degree_bounds = degree_bounds;
    SearchProblem {
        family: FamilyParams::laguerre(FamilyKind::LaguerreM, alpha)?,
        fixed: FixedForm::ClassicalLaguerre,
        unknowns: vec![block],
        normalizations: Vec::new(),
        n_train,
        n_holdout,
    }
    .solve()
}

/// Searches the `M`, `N` and `MN` blocks of an operator for the Sobolev-type
/// Laguerre polynomials, with block orders `(m, n, mn)`.
pub fn sobolev_laguerre_problem(
    alpha: Rational,
    orders: (usize, usize, usize),
    sum_vanishing: bool,
    n_train: Vec<usize>,
    n_holdout: Vec<usize>,
) -> Result<SearchProblem> {
    let unknowns = [
        (BlockKey::M, orders.0),
        (BlockKey::N, orders.1),
        (BlockKey::MN, orders.2),
    ]
    .into_iter()
    .map(|(key, order)| UnknownBlock {
        sum_vanishing,
        ..UnknownBlock::new(key, order)
    })
    .collect();
    Ok(SearchProblem {
        family: FamilyParams::laguerre(FamilyKind::LaguerreMN, alpha)?,
        fixed: FixedForm::ClassicalLaguerre,
        unknowns,
        normalizations: Vec::new(),
        n_train,
        n_holdout,
    })
}

pub fn search_sobolev_laguerre(
    alpha: Rational,
    orders: (usize, usize, usize),
    sum_vanishing: bool,
    n_train: Vec<usize>,
    n_holdout: Vec<usize>,
) -> Result<SearchSolution> {
    sobolev_laguerre_problem(alpha, orders, sum_vanishing, n_train, n_holdout)?.solve()
}

/// Searches the mass block of an operator for the symmetric Jacobi family.
/// `normalize` pins the order-zero coefficient at `n = 1` to zero, removing
/// the parity family.
pub fn jacobi_symmetric_problem(
    alpha: Rational,
    max_order: usize,
    structure: Structure,
    normalize: bool,
    n_train: Vec<usize>,
    n_holdout: Vec<usize>,
) -> Result<SearchProblem> {
    let normalizations = if normalize {
        vec![Normalization {
            column: Column::OrderZeroAt {
                block: BlockKey::M,
                n: 1,
            },
            value: Rational::zero(),
        }]
    } else {
        Vec::new()
    };
    Ok(SearchProblem {
        family: FamilyParams::new(FamilyKind::JacobiSymmetricMM, alpha.clone(), alpha)?,
        fixed: FixedForm::ClassicalJacobi,
        unknowns: vec![UnknownBlock {
            structure,
            ..UnknownBlock::new(BlockKey::M, max_order)
        }],
        normalizations,
        n_train,
        n_holdout,
    })
}

pub fn search_jacobi_symmetric(
    alpha: Rational,
    max_order: usize,
    structure: Structure,
    normalize: bool,
    n_train: Vec<usize>,
    n_holdout: Vec<usize>,
) -> Result<SearchSolution> {
    jacobi_symmetric_problem(alpha, max_order, structure, normalize, n_train, n_holdout)?.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::coefficients::{coeff_jacobi_c, coeff_laguerre_a};
    use crate::scalar::rat;

    fn range(a: usize, b: usize) -> Vec<usize> {
        (a..=b).collect()
    }

    #[test]
    fn empty_training_rejected() {
        let r = search_laguerre_m_block(int(0), 2, vec![], vec![], vec![]);
        assert!(matches!(r, Err(Error::IllFormed(_))));
    }

    #[test]
    fn classical_only_problem_has_no_columns() {
        let p = SearchProblem {
            family: FamilyParams::laguerre(FamilyKind::LaguerreClassical, int(0)).unwrap(),
            fixed: FixedForm::ClassicalLaguerre,
            unknowns: vec![],
            normalizations: vec![],
            n_train: range(0, 5),
            n_holdout: vec![],
        };
        let sys = p.assemble().unwrap();
        assert!(sys.columns.is_empty());
        assert!(sys.system.rhs.iter().all(Zero::is_zero));
    }

    #[test]
    fn column_count() {
        let mut block = UnknownBlock::new(BlockKey::M, 4);
        block.degree_bounds = vec![1, 2, 3, 4];
        let p = SearchProblem {
            family: FamilyParams::laguerre(FamilyKind::LaguerreM, int(0)).unwrap(),
            fixed: FixedForm::ClassicalLaguerre,
            unknowns: vec![block],
            normalizations: vec![],
            n_train: range(0, 12),
            n_holdout: vec![],
        };
        assert_eq!(p.columns().len(), 2 + 3 + 4 + 5 + 13);
    }

    #[test]
    fn laguerre_rediscovery_small() {
        let sol = search_laguerre_m_block(int(0), 4, vec![], range(0, 12), range(13, 16)).unwrap();
        assert_eq!(sol.nullspace_dim(), 0);
        assert!(sol.holdout.passed());
        let v = sol.particular();
        for i in 1..=4 {
            assert_eq!(sol.coefficient(v, BlockKey::M, i), coeff_laguerre_a(&int(0), i, 0));
        }
        for n in 0..=12 {
            assert_eq!(sol.order_zero(v, BlockKey::M, n), Some(rat((n * (n + 1)) as i64, 2)));
        }
        let order3 = search_laguerre_m_block(int(0), 3, vec![], range(0, 12), vec![]);
        assert!(matches!(order3, Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn order_zero_polynomial_mode() {
        let mut block = UnknownBlock::new(BlockKey::M, 4);
        block.order_zero = OrderZeroMode::PolyInN(2);
        let p = SearchProblem {
            family: FamilyParams::laguerre(FamilyKind::LaguerreM, int(0)).unwrap(),
            fixed: FixedForm::ClassicalLaguerre,
            unknowns: vec![block],
            normalizations: vec![],
            n_train: range(0, 12),
            n_holdout: range(13, 15),
        };
        let sol = p.solve().unwrap();
        assert_eq!(sol.nullspace_dim(), 0);
        assert_eq!(sol.order_zero(sol.particular(), BlockKey::M, 40), Some(int(820)));
        assert!(sol.holdout.passed());
    }

    #[test]
    fn undertrained_is_flagged() {
        let sol = search_laguerre_m_block(int(0), 4, vec![], vec![1], range(5, 8)).unwrap();
        assert!(sol.determination.under_determined);
        assert!(sol.nullspace_dim() > 0);
        assert!(!sol.holdout.passed());
        let sol = search_laguerre_m_block(int(0), 4, vec![], vec![1], vec![]).unwrap();
        assert_eq!(sol.holdout, HoldoutReport::NotValidated);
    }

    #[test]
    fn jacobi_symmetric_normalized() {
        let sol = search_jacobi_symmetric(int(0), 4, Structure::Monomial, true, range(0, 15), range(16, 18))
            .unwrap();
        assert_eq!(sol.nullspace_dim(), 0);
        let v = sol.particular();
        for i in 1..=4 {
            assert_eq!(sol.coefficient(v, BlockKey::M, i), coeff_jacobi_c(&int(0), i, 0));
        }
        for n in 0..=15 {
            assert_eq!(
                sol.order_zero(v, BlockKey::M, n).unwrap(),
                coeff_jacobi_c(&int(0), 0, n).coeff(0)
            );
        }
    }
}
