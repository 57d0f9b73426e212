//! The solvsoliton condition `Ric = c·I + D` with `D ∈ Der(g)`.
//!
//! Residuals are Hilbert–Schmidt norms with respect to the metric, i.e.
//! Frobenius norms in an orthonormal frame. They do not change under
//! isometries, and reduce to plain Frobenius norms when `G = I`.

use crate::curvature::{ricci_closed_form, ricci_operator, MetricData};
use crate::derivations::{
    conjugate_subspace, derivation_algebra, family_derivations, scalar_plus, MatrixSubspace,
};
use crate::error::Result;
use crate::lie::{Family, StructureConstants};
use crate::linalg::{checked_inverse, project, Mat3};
use crate::moduli::{frame_params, representative_matrix};
use crate::Arithmetic;

pub const SOLITON_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SolitonCertificate {
    pub c: f64,
    /// Derivation part, in canonical coordinates.
    pub d: Mat3,
    /// Distance of `Ric` from `ℝ·I + Der`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct SolitonVerdict {
    pub is_soliton: bool,
    pub is_einstein: bool,
    /// Best decomposition, reported whether or not the test passed.
    pub certificate: Option<SolitonCertificate>,
}

/// Best `c·I + D` approximation of `ric` with `D` in `der`; all in one coordinate system.
fn decompose(ric: &Mat3, der: &MatrixSubspace) -> (f64, Mat3, f64) {
    let (ortho, _) = der.orthonormal();
    let (p_i, _) = project(&ortho, &Mat3::identity());
    let j = Mat3::identity() - p_i;
    let (p_ric, _) = project(&ortho, ric);
    let c = if j.norm() > 1e-12 {
        crate::linalg::frob(&(ric - p_ric), &j) / j.norm_squared()
    } else {
        0.0
    };
    let (d, _) = project(&ortho, &(ric - Mat3::identity() * c));
    let residual = (ric - Mat3::identity() * c - d).norm();
    (c, d, residual)
}

fn einstein_residual(ric_frame: &Mat3) -> (f64, f64) {
    let c = ric_frame.trace() / 3.0;
    ((ric_frame - Mat3::identity() * c).norm(), c)
}

/// Decide whether the inner product with Gram matrix `G` is a solvsoliton.
pub fn solvsoliton_check(
    sc: &StructureConstants<f64>,
    gram: &Mat3,
    tol: f64,
) -> Result<SolitonVerdict> {
    let m = MetricData::new(sc.clone(), *gram)?;
    let ric = ricci_operator(&m)?;
    let der_frame = conjugate_subspace(&derivation_algebra(sc), &m.frame)?;
    let (c, d_frame, residual) = decompose(&ric.ric_frame, &der_frame);
    let d = m.frame * d_frame * checked_inverse(&m.frame)?;
    let (e_res, _) = einstein_residual(&ric.ric_frame);
    Ok(SolitonVerdict {
        is_soliton: residual < tol,
        is_einstein: e_res < tol,
        certificate: Some(SolitonCertificate { c, d, residual }),
    })
}

/// `(‖Ric − c·I‖ < tol, c)` with `c = scal/3`.
pub fn einstein_check(sc: &StructureConstants<f64>, gram: &Mat3, tol: f64) -> Result<(bool, f64)> {
    let m = MetricData::new(sc.clone(), *gram)?;
    let ric = ricci_operator(&m)?;
    let (res, c) = einstein_residual(&ric.ric_frame);
    Ok((res < tol, c))
}

/// Soliton test at the representative `g_λ`, using the closed-form Ricci
/// operator of the normal-form frame and `g_λ⁻¹ (ℝ ⊕ Der) g_λ`.
///
/// The certificate's `D` is expressed in the frame.
pub fn soliton_from_frame(f: &Family, lambda: f64, tol: f64) -> Result<SolitonVerdict> {
    soliton_from_frame_in(f, lambda, tol, Arithmetic::Float)
}

pub fn soliton_from_frame_in(
    f: &Family,
    lambda: f64,
    tol: f64,
    mode: Arithmetic,
) -> Result<SolitonVerdict> {
    let (a, b, c, d) = frame_params(f, lambda)?;
    let ric = ricci_closed_form(a, b, c, d);
    let g = representative_matrix(f, lambda)?;
    let der = family_derivations(f, mode)?;
    let der_frame = conjugate_subspace(&der, &g)?;
    let (c, d, residual) = decompose(&ric, &der_frame);
    // sanity: the decomposition lies in the conjugated ℝ ⊕ Der
    debug_assert!(conjugate_subspace(&scalar_plus(&der), &g)
        .map(|s| s.membership(&(Mat3::identity() * c + d), 1e-8).is_member)
        .unwrap_or(true));
    let (e_res, _) = einstein_residual(&ric);
    Ok(SolitonVerdict {
        is_soliton: residual < tol,
        is_einstein: e_res < tol,
        certificate: Some(SolitonCertificate { c, d, residual }),
    })
}
