//! Exact affine solve over the rationals.
//!
//! Rows are scaled to primitive integer vectors and eliminated fraction-free,
//! one at a time, against pivot rows whose leading entry is always the
//! lowest-index nonzero column. The final back substitution yields the reduced
//! row echelon form, which is unique, so the returned basis does not depend on
//! row order or on any scaling of the rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// `(column, value)` pairs; columns need not be sorted and may repeat.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub ncols: usize,
    pub rows: Vec<SparseRow>,
    pub rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(ncols: usize) -> Self {
        LinearSystem {
            ncols,
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: SparseRow, rhs: Rational) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    /// `row . v - rhs` for every row.
    pub fn residuals(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let mut acc = -b.clone();
                for (c, a) in row {
                    acc += a * &v[*c];
                }
                acc
            })
            .collect()
    }

    /// `row . v` for every row (the homogeneous part).
    pub fn apply_homogeneous(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(c, a)| a * &v[*c]).sum())
            .collect()
    }
}

/// `particular + span(nullspace)`, with the reduced echelon data needed to
/// decompose other vectors against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
}

impl AffineSolution {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coefficients `l` with `v = particular + sum l_k nullspace[k]`, if any.
    pub fn decompose(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let diff: Vec<Rational> = v.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        self.decompose_homogeneous(&diff)
    }

    /// Coefficients `l` with `v = sum l_k nullspace[k]`, if any.
    pub fn decompose_homogeneous(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        // Each basis vector is 1 at its own free column and 0 at the others.
        let lambda: Vec<Rational> = self.free.iter().map(|&f| v[f].clone()).collect();
        let mut rebuilt = vec![Rational::zero(); v.len()];
        for (l, basis) in lambda.iter().zip(&self.nullspace) {
            if l.is_zero() {
                continue;
            }
            for (slot, b) in rebuilt.iter_mut().zip(basis) {
                *slot += l * b;
            }
        }
        (rebuilt == v).then_some(lambda)
    }
}

/// Integer row with the right-hand side stored in the last slot.
type IntRow = Vec<BigInt>;

fn to_int_row(row: &SparseRow, rhs: &Rational, ncols: usize) -> IntRow {
    let mut dense = vec![Rational::zero(); ncols + 1];
    for (c, a) in row {
        dense[*c] += a;
    }
    dense[ncols] = rhs.clone();
    let lcm = dense
        .iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: IntRow = dense
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    make_primitive(&mut out, 0);
    out
}

/// Divides `row[from..]` by the gcd of its entries.
fn make_primitive(row: &mut [BigInt], from: usize) {
    let mut g = BigInt::zero();
    for v in &row[from..] {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in &mut row[from..] {
        if !v.is_zero() {
            *v = &*v / &g;
        }
    }
}

/// `row <- lead * row - row[col] * pivot`, touching only columns `>= col`.
fn eliminate(row: &mut [BigInt], pivot: &[BigInt], col: usize) {
    let factor = row[col].clone();
    let lead = &pivot[col];
    for (r, p) in row[col..].iter_mut().zip(&pivot[col..]) {
        let scaled = &*r * lead;
        *r = if p.is_zero() { scaled } else { scaled - &factor * p };
    }
}

/// Solves `A v = b` exactly. Returns `Error::Inconsistent` naming the first
/// row (in input order) that cannot be satisfied.
pub fn solve(sys: &LinearSystem) -> Result<AffineSolution> {
    let n = sys.ncols;
    let mut pivot_rows: Vec<Option<IntRow>> = vec![None; n];
    for (idx, (row, rhs)) in sys.rows.iter().zip(&sys.rhs).enumerate() {
        let mut r = to_int_row(row, rhs, n);
        let mut lead = None;
        for c in 0..n {
            if r[c].is_zero() {
                continue;
            }
            match &pivot_rows[c] {
                Some(p) => {
                    eliminate(&mut r, p, c);
                    make_primitive(&mut r, c);
                }
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        match lead {
            Some(c) => {
                if r[c].is_negative() {
                    r.iter_mut().for_each(|v| *v = -&*v);
                }
                pivot_rows[c] = Some(r);
            }
            None if !r[n].is_zero() => return Err(Error::Inconsistent { row: idx }),
            None => {}
        }
    }

    // Back substitution, highest pivot first.
    let pivots: Vec<usize> = (0..n).filter(|&c| pivot_rows[c].is_some()).collect();
    for &p in pivots.iter().rev() {
        let prow = pivot_rows[p].clone().expect("pivot present");
        for &q in pivots.iter().filter(|&&q| q < p) {
            let qrow = pivot_rows[q].as_mut().expect("pivot present");
            if qrow[p].is_zero() {
                continue;
            }
            let factor = qrow[p].clone();
            let lead = &prow[p];
            for c in q..=n {
                let scaled = &qrow[c] * lead;
                qrow[c] = if prow[c].is_zero() {
                    scaled
                } else {
                    scaled - &factor * &prow[c]
                };
            }
            make_primitive(qrow, q);
        }
    }

    let reduced: Vec<(usize, Vec<Rational>)> = pivots
        .iter()
        .map(|&p| {
            let row = pivot_rows[p].as_ref().expect("pivot present");
            let lead = &row[p];
            (
                p,
                row.iter()
                    .map(|v| Rational::new(v.clone(), lead.clone()))
                    .collect(),
            )
        })
        .collect();

    let free: Vec<usize> = (0..n).filter(|c| pivot_rows[*c].is_none()).collect();
    let mut particular = vec![Rational::zero(); n];
    for (p, row) in &reduced {
        particular[*p] = row[n].clone();
    }
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (p, row) in &reduced {
                v[*p] = -row[f].clone();
            }
            v
        })
        .collect();
    Ok(AffineSolution {
        particular,
        nullspace,
        pivots,
        free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn zero_matrix_has_full_nullspace() {
        let mut sys = LinearSystem::new(3);
        sys.push(vec![], int(0));
        let sol = solve(&sys).unwrap();
        assert_eq!(sol.nullspace.len(), 3);
        assert_eq!(sol.particular, vec![int(0); 3]);
    }

    #[test]
    fn one_by_one() {
        let mut sys = LinearSystem::new(1);
        sys.push(vec![(0, int(2))], int(4));
        let sol = solve(&sys).unwrap();
        assert_eq!(sol.particular, vec![int(2)]);
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn inconsistent_row_is_named() {
        let mut sys = LinearSystem::new(2);
        sys.push(vec![(0, int(1)), (1, int(1))], int(1));
        sys.push(vec![(0, rat(1, 2)), (1, rat(1, 2))], int(1));
        assert!(matches!(solve(&sys), Err(Error::Inconsistent { row: 1 })));
    }

    #[test]
    fn nullspace_and_decompose() {
        // x + 2y - z = 3
        let mut sys = LinearSystem::new(3);
        sys.push(vec![(0, int(1)), (1, int(2)), (2, int(-1))], int(3));
        let sol = solve(&sys).unwrap();
        assert_eq!(sol.pivots, vec![0]);
        assert_eq!(sol.particular, vec![int(3), int(0), int(0)]);
        assert_eq!(sol.nullspace[0], vec![int(-2), int(1), int(0)]);
        assert_eq!(sol.nullspace[1], vec![int(1), int(0), int(1)]);
        assert_eq!(
            sol.decompose(&[int(4), int(1), int(3)]),
            Some(vec![int(1), int(3)])
        );
        assert_eq!(sol.decompose(&[int(0), int(0), int(0)]), None);
    }

    mod props {
        use super::super::*;
        use crate::scalar::rat;
        use proptest::prelude::*;

        fn system() -> impl Strategy<Value = LinearSystem> {
            (1usize..6, 1usize..7).prop_flat_map(|(ncols, nrows)| {
                let entry = (-4i64..5, 1i64..4).prop_map(|(p, q)| rat(p, q));
                let row = proptest::collection::vec(entry.clone(), ncols);
                (
                    proptest::collection::vec(row, nrows),
                    proptest::collection::vec(entry, nrows),
                )
                    .prop_map(move |(rows, rhs)| LinearSystem {
                        ncols,
                        rows: rows
                            .into_iter()
                            .map(|r| r.into_iter().enumerate().collect())
                            .collect(),
                        rhs,
                    })
            })
        }

        proptest! {
            #[test]
            fn solutions_are_sound(sys in system()) {
                if let Ok(sol) = solve(&sys) {
                    prop_assert!(sys.residuals(&sol.particular).iter().all(Zero::is_zero));
                    for v in &sol.nullspace {
                        prop_assert!(sys.apply_homogeneous(v).iter().all(Zero::is_zero));
                    }
                    prop_assert_eq!(sol.rank() + sol.nullspace.len(), sys.ncols);
                }
            }

            #[test]
            fn row_scaling_leaves_solution_unchanged(sys in system(), s in 1i64..9, t in 1i64..9) {
                let c = rat(-s, t);
                let mut scaled = sys.clone();
                for (row, b) in scaled.rows.iter_mut().zip(scaled.rhs.iter_mut()) {
                    for (_, a) in row.iter_mut() {
                        *a *= &c;
                    }
                    *b *= &c;
                }
                match (solve(&sys), solve(&scaled)) {
                    (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                    (Err(_), Err(_)) => {}
                    _ => prop_assert!(false, "scaling changed solvability"),
                }
            }

            #[test]
            fn row_order_is_irrelevant(sys in system()) {
                let mut rev = sys.clone();
                rev.rows.reverse();
                rev.rhs.reverse();
                match (solve(&sys), solve(&rev)) {
                    (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                    (Err(_), Err(_)) => {}
                    _ => prop_assert!(false, "row order changed solvability"),
                }
            }
        }
    }
}
