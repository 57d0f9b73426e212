//! Small dense 3×3 helpers shared by the geometry modules.

use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};

pub type Mat3 = Matrix3<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;

/// Determinant magnitude below which a 3×3 matrix is rejected as singular.
pub const SINGULAR_TOL: f64 = 1e-9;

/// Projection residual under which modified Gram–Schmidt re-orthogonalizes.
const REORTH_TOL: f64 = 1e-12;

pub fn unit(i: usize, j: usize) -> Mat3 {
    let mut m = Mat3::zeros();
    m[(i, j)] = 1.0;
    m
}

/// `tr(Aᵀ B)`; on symmetric matrices this is the trace form `tr(AB)`.
pub fn frob(a: &Mat3, b: &Mat3) -> f64 {
    a.component_mul(b).sum()
}

/// Symmetric part `(X + Xᵀ)/2`, the differential of `GL(3) → GL(3)/O(3)` at the identity.
pub fn sym_part(x: &Mat3) -> Mat3 {
    (x + x.transpose()) * 0.5
}

pub fn skew_part(x: &Mat3) -> Mat3 {
    (x - x.transpose()) * 0.5
}

pub fn commutator(a: &Mat3, b: &Mat3) -> Mat3 {
    a * b - b * a
}

pub fn checked_inverse(g: &Mat3) -> Result<Mat3> {
    let det = g.determinant();
    if !det.is_finite() || det.abs() < SINGULAR_TOL {
        return Err(Error::Singular { det });
    }
    g.try_inverse().ok_or(Error::Singular { det })
}

/// `‖QᵀQ − I‖_F`.
pub fn orthogonality_defect(q: &Mat3) -> f64 {
    (q.transpose() * q - Mat3::identity()).norm()
}

/// Orthonormal basis of the Frobenius span of `mats`, by modified Gram–Schmidt
/// with one re-orthogonalization pass when a residual collapses.
///
/// Returns the orthonormal matrices together with, for each of them, the
/// coefficients expressing it in terms of the inputs.
pub fn gram_schmidt(mats: &[Mat3], drop_tol: f64) -> (Vec<Mat3>, Vec<Vec<f64>>) {
    let mut basis: Vec<Mat3> = Vec::new();
    let mut coeffs: Vec<Vec<f64>> = Vec::new();
    for (idx, m) in mats.iter().enumerate() {
        let mut v = *m;
        let mut c = vec![0.0; mats.len()];
        c[idx] = 1.0;
        let orig = v.norm();
        for pass in 0..2 {
            for (b, bc) in basis.iter().zip(&coeffs) {
                let p = frob(b, &v);
                v -= b * p;
                for (ci, bci) in c.iter_mut().zip(bc) {
                    *ci -= p * bci;
                }
            }
            if pass == 0 && v.norm() > REORTH_TOL.max(1e-8 * orig) {
                break;
            }
        }
        let n = v.norm();
        if n <= drop_tol {
            continue;
        }
        basis.push(v / n);
        coeffs.push(c.into_iter().map(|x| x / n).collect());
    }
    (basis, coeffs)
}

/// Dimension of the Frobenius span of `mats`.
pub fn rank_of(mats: &[Mat3], drop_tol: f64) -> usize {
    gram_schmidt(mats, drop_tol).0.len()
}

/// Orthogonal projection of `m` onto the span of an orthonormal family.
pub fn project(orthonormal: &[Mat3], m: &Mat3) -> (Mat3, Vec<f64>) {
    let coeffs: Vec<f64> = orthonormal.iter().map(|b| frob(b, m)).collect();
    let p = orthonormal
        .iter()
        .zip(&coeffs)
        .fold(Mat3::zeros(), |acc, (b, c)| acc + b * *c);
    (p, coeffs)
}

/// Factor `g · k = L` with `k` orthogonal and `L` lower triangular with a
/// positive diagonal, by orthonormalizing the rows of `g` from the first down.
pub fn lq_positive(g: &Mat3) -> Result<(Mat3, Mat3)> {
    checked_inverse(g)?;
    let mut q_rows: Vec<Vec3> = Vec::with_capacity(3);
    let mut l = Mat3::zeros();
    for i in 0..3 {
        let row: Vec3 = g.row(i).transpose();
        let mut v = row;
        for _ in 0..2 {
            for q in &q_rows {
                v -= q * q.dot(&v);
            }
        }
        let n = v.norm();
        if n <= SINGULAR_TOL {
            return Err(Error::Singular {
                det: g.determinant(),
            });
        }
        let qi = v / n;
        for (j, q) in q_rows.iter().enumerate() {
            l[(i, j)] = q.dot(&row);
        }
        l[(i, i)] = qi.dot(&row);
        q_rows.push(qi);
    }
    // rows of kᵀ are the q's
    let k = Mat3::from_columns(&[q_rows[0], q_rows[1], q_rows[2]]);
    Ok((l, k))
}

/// Rotation angle of the Jacobi rotation diagonalizing a symmetric 2×2 matrix.
fn jacobi_angle(s: &Matrix2<f64>) -> f64 {
    0.5 * (2.0 * s[(0, 1)]).atan2(s[(0, 0)] - s[(1, 1)])
}

pub fn rotation2(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// `b = u · diag(x, y) · vᵀ` with `u ∈ SO(2)`, `v ∈ O(2)` and `x ≥ y ≥ 0`.
///
/// When `det b > 0` the second value is strictly positive.
pub fn signed_svd2(b: &Matrix2<f64>) -> (Matrix2<f64>, f64, f64, Matrix2<f64>) {
    let btb = b.transpose() * b;
    let mut v = rotation2(jacobi_angle(&btb));
    let d = v.transpose() * btb * v;
    if d[(1, 1)] > d[(0, 0)] {
        v.swap_columns(0, 1);
    }
    let bv = b * v;
    let x = bv.column(0).norm();
    let u0 = if x > 0.0 {
        bv.column(0) / x
    } else {
        nalgebra::Vector2::new(1.0, 0.0)
    };
    // second left vector completes u to a rotation; bv's second column is parallel to it
    let u1 = nalgebra::Vector2::new(-u0[1], u0[0]);
    let s = u1.dot(&bv.column(1));
    if s < 0.0 {
        let c: nalgebra::Vector2<f64> = -v.column(1);
        v.set_column(1, &c);
    }
    let y = s.abs();
    let u = Matrix2::from_columns(&[u0, u1]);
    (u, x, y, v)
}

/// Embed a 2×2 block into the lower-right corner of the 3×3 identity.
pub fn embed_lower(b: &Matrix2<f64>) -> Mat3 {
    let mut m = Mat3::identity();
    m.fixed_view_mut::<2, 2>(1, 1).copy_from(b);
    m
}

/// Symmetric eigenvalues sorted ascending.
pub fn sym_spectrum(m: &Mat3) -> [f64; 3] {
    let e = sym_part(m).symmetric_eigenvalues();
    let mut v = [e[0], e[1], e[2]];
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lq_is_lower_triangular_with_positive_diagonal() {
        let g = Mat3::new(1.0, 2.0, -1.0, 0.5, -3.0, 2.0, 4.0, 1.0, 1.0);
        let (l, k) = lq_positive(&g).unwrap();
        assert!(orthogonality_defect(&k) < 1e-12);
        assert_relative_eq!(g * k, l, epsilon = 1e-12);
        for i in 0..3 {
            assert!(l[(i, i)] > 0.0);
            for j in (i + 1)..3 {
                assert!(l[(i, j)].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lq_rejects_singular() {
        let g = Mat3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0);
        assert!(matches!(lq_positive(&g), Err(Error::Singular { .. })));
    }

    #[test]
    fn signed_svd_reconstructs() {
        for b in [
            Matrix2::new(1.0, 0.0, 0.3, 2.0),
            Matrix2::new(1.0, 0.0, -4.0, 0.5),
            Matrix2::new(2.0, 0.0, 0.0, 2.0),
            Matrix2::new(0.0, 1.0, 1.0, 0.0),
        ] {
            let (u, x, y, v) = signed_svd2(&b);
            assert!(u.determinant() > 0.0);
            assert!(x >= y && y >= 0.0);
            assert_relative_eq!(
                u * Matrix2::new(x, 0.0, 0.0, y) * v.transpose(),
                b,
                epsilon = 1e-12
            );
            assert_relative_eq!(v.transpose() * v, Matrix2::identity(), epsilon = 1e-12);
        }
    }

    #[test]
    fn gram_schmidt_drops_dependent_inputs() {
        let a = unit(0, 0);
        let b = unit(0, 0) + unit(1, 1);
        let c = a * 2.0 - b;
        let (basis, coeffs) = gram_schmidt(&[a, b, c], 1e-10);
        assert_eq!(basis.len(), 2);
        let inputs = [a, b, c];
        for (e, cs) in basis.iter().zip(&coeffs) {
            let rebuilt = inputs
                .iter()
                .zip(cs)
                .fold(Mat3::zeros(), |acc, (m, w)| acc + m * *w);
            assert_relative_eq!(rebuilt, *e, epsilon = 1e-12);
        }
    }
}
