//! Scalar fields used by the structure-constant and nullspace code.
//!
//! Two fields are supported: `f64`, where pivots below a fixed threshold are
//! treated as zero, and `BigRational`, where elimination is exact.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Pivot threshold for floating-point elimination.
pub const FLOAT_PIVOT_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Signed + ToPrimitive + Send + Sync + 'static
{
    /// Magnitudes at or below this are treated as zero during elimination.
    fn pivot_tol() -> Self;

    fn from_f64_lossy(x: f64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self;

    fn is_negligible(&self) -> bool {
        self.abs() <= Self::pivot_tol()
    }
}

impl Scalar for f64 {
    fn pivot_tol() -> Self {
        FLOAT_PIVOT_TOL
    }

    fn from_f64_lossy(x: f64) -> Self {
        x
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }
}

impl Scalar for BigRational {
    fn pivot_tol() -> Self {
        BigRational::zero()
    }

    /// Exact binary value of `x`; NaN and infinities map to zero.
    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_f64(x).unwrap_or_else(BigRational::zero)
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// Reduced row echelon form in place. Returns the pivot columns.
///
/// Uses partial pivoting (largest magnitude) so the float path is stable
/// and the rank decision is deterministic.
pub fn rref<T: Scalar>(rows: &mut [Vec<T>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let (best, best_abs) =
            (r..nrows)
                .map(|i| (i, rows[i][col].abs()))
                .fold(
                    (r, T::zero()),
                    |acc, cur| if cur.1 > acc.1 { cur } else { acc },
                );
        if best_abs <= T::pivot_tol() || best_abs.is_zero() {
            for row in rows.iter_mut().skip(r) {
                row[col] = T::zero();
            }
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        for i in 0..nrows {
            if i == r {
                continue;
            }
            let factor = rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..ncols {
                let delta = factor.clone() * rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - delta;
            }
            rows[i][col] = T::zero();
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of the nullspace of the `rows × ncols` system, one vector per free column.
pub fn nullspace<T: Scalar>(mut rows: Vec<Vec<T>>, ncols: usize) -> Vec<Vec<T>> {
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Rank of the row space.
pub fn rank<T: Scalar>(mut rows: Vec<Vec<T>>) -> usize {
    rref(&mut rows).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_nullspace_of_rank_one_system() {
        let rows = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
        ];
        let ns = nullspace(rows.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &rows {
                let dot = row.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| {
                    acc + a.clone() * b.clone()
                });
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn float_rank_ignores_tiny_pivots() {
        let rows = vec![vec![1.0, 0.0], vec![1.0, 1e-13]];
        assert_eq!(rank(rows), 1);
    }

    #[test]
    fn empty_system_has_full_nullspace() {
        let ns = nullspace::<f64>(Vec::new(), 4);
        assert_eq!(ns.len(), 4);
    }
}
