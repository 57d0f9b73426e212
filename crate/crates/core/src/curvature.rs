//! Levi-Civita connection, curvature and Ricci operator of a metric Lie algebra.
//!
//! Conventions: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` and
//! `Ric(X) = Σ_i R(X, e_i) e_i` over an orthonormal basis.

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::lie::StructureConstants;
use crate::linalg::{checked_inverse, Mat3};

/// `Γ[i][j][k]` with `∇_{x_i} x_j = Σ_k Γ[i][j][k] x_k`.
pub type Connection = [[[f64; 3]; 3]; 3];

/// An inner product `⟨x, y⟩ = xᵀ G y` on a Lie algebra, with a G-orthonormal frame.
#[derive(Clone, Debug)]
pub struct MetricData {
    pub sc: StructureConstants<f64>,
    pub gram: Mat3,
    /// Columns are G-orthonormal; upper triangular.
    pub frame: Mat3,
}

#[derive(Clone, Debug)]
pub struct RicciResult {
    /// Ricci operator in the orthonormal frame.
    pub ric_frame: Mat3,
    /// Ricci operator in the canonical basis.
    pub ric_canonical: Mat3,
    /// Scalar curvature.
    pub scalar: f64,
}

/// Cholesky factor `L` of an SPD matrix, `G = L Lᵀ`.
pub fn spd_cholesky(gram: &Mat3) -> Result<Mat3> {
    if !gram.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidMetric("non-finite Gram matrix".into()));
    }
    let scale = gram.amax().max(1.0);
    if (gram - gram.transpose()).amax() > 1e-10 * scale {
        return Err(Error::InvalidMetric("Gram matrix is not symmetric".into()));
    }
    let sym = crate::linalg::sym_part(gram);
    let chol = Cholesky::new(sym)
        .ok_or_else(|| Error::InvalidMetric("Gram matrix is not positive definite".into()))?;
    let l = chol.l();
    if (0..3).any(|i| l[(i, i)] <= 1e-12 * scale.sqrt()) {
        return Err(Error::InvalidMetric(
            "Gram matrix is not positive definite".into(),
        ));
    }
    Ok(l)
}

impl MetricData {
    pub fn new(sc: StructureConstants<f64>, gram: Mat3) -> Result<Self> {
        if sc.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: sc.dim(),
            });
        }
        let l = spd_cholesky(&gram)?;
        let frame = checked_inverse(&l)?.transpose();
        Ok(Self {
            sc,
            gram: crate::linalg::sym_part(&gram),
            frame,
        })
    }

    /// The inner product making the canonical basis orthonormal.
    pub fn standard(sc: StructureConstants<f64>) -> Self {
        Self {
            sc,
            gram: Mat3::identity(),
            frame: Mat3::identity(),
        }
    }

    /// Structure constants in the orthonormal frame.
    pub fn frame_constants(&self) -> Result<StructureConstants<f64>> {
        self.sc.change_basis_mat(&self.frame)
    }
}

/// Koszul formula in an orthonormal basis:
/// `Γ_ij^k = ½ (c_ki^j + c_kj^i + c_ij^k)`.
pub fn connection_coeffs(sc_on: &StructureConstants<f64>) -> Connection {
    let mut g = [[[0.0; 3]; 3]; 3];
    for (i, gi) in g.iter_mut().enumerate() {
        for (j, gij) in gi.iter_mut().enumerate() {
            for (k, v) in gij.iter_mut().enumerate() {
                *v = 0.5 * (sc_on.get(k, i, j) + sc_on.get(k, j, i) + sc_on.get(i, j, k));
            }
        }
    }
    g
}

fn nabla(gamma: &Connection, x: &[f64; 3], y: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            let w = x[i] * y[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * gamma[i][j][k];
            }
        }
    }
    out
}

fn basis(i: usize) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[i] = 1.0;
    v
}

/// `R(x_i, x_j) x_l` in an orthonormal basis.
pub fn curvature(
    sc_on: &StructureConstants<f64>,
    gamma: &Connection,
    i: usize,
    j: usize,
    l: usize,
) -> [f64; 3] {
    let (xi, xj, xl) = (basis(i), basis(j), basis(l));
    let a = nabla(gamma, &xi, &nabla(gamma, &xj, &xl));
    let b = nabla(gamma, &xj, &nabla(gamma, &xi, &xl));
    let br = sc_on.bracket(&xi, &xj).expect("dimension 3");
    let c = nabla(gamma, &[br[0], br[1], br[2]], &xl);
    [a[0] - b[0] - c[0], a[1] - b[1] - c[1], a[2] - b[2] - c[2]]
}

/// Ricci operator in the orthonormal basis of `sc_on`; column `i` is `Ric(x_i)`.
pub fn ricci_in_orthonormal(sc_on: &StructureConstants<f64>) -> Mat3 {
    let gamma = connection_coeffs(sc_on);
    let mut ric = Mat3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let r = curvature(sc_on, &gamma, i, j, j);
            for k in 0..3 {
                ric[(k, i)] += r[k];
            }
        }
    }
    ric
}

pub fn ricci_operator(m: &MetricData) -> Result<RicciResult> {
    let sc_on = m.frame_constants()?;
    let ric_frame = ricci_in_orthonormal(&sc_on);
    let ric_canonical = m.frame * ric_frame * checked_inverse(&m.frame)?;
    Ok(RicciResult {
        scalar: ric_frame.trace(),
        ric_frame,
        ric_canonical,
    })
}

/// Closed-form Ricci operator for an orthonormal basis with
/// `[x1,x2] = a x2 + b x3`, `[x1,x3] = c x2 + d x3`, `[x2,x3] = 0`.
pub fn ricci_closed_form(a: f64, b: f64, c: f64, d: f64) -> Mat3 {
    let h = 0.5 * (b * b - c * c);
    let off = -(a * c + b * d);
    Mat3::new(
        -(a * a + d * d + 0.5 * (b + c) * (b + c)),
        0.0,
        0.0,
        0.0,
        -(a * (a + d) + h),
        off,
        0.0,
        off,
        -(d * (a + d) - h),
    )
}
