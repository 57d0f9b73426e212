//! Orbits of `ℝ^× · Aut(g)` in `GL(3)/O(3)` and their mean curvature.
//!
//! The tangent space at the origin is `sym(3)` with `⟨X, Y⟩ = tr(XY)`, and
//! `dπ(X) = (X + Xᵀ)/2`. An orbit through `g.⟨,⟩₀` is moved to the origin by
//! conjugating the acting algebra with `g`; all curvature is evaluated there.

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::derivations::{conjugate_subspace, family_derivations, scalar_plus, MatrixSubspace};
use crate::error::{Error, Result};
use crate::lie::Family;
use crate::linalg::{commutator, frob, gram_schmidt, sym_part, unit, Mat3};
use crate::moduli::{class_invariant, reduce, LAMBDA_TOL};
use crate::{sampling, Arithmetic};

/// Singular values of `dπ|u'` below this count as stabilizer directions.
pub const STABILIZER_TOL: f64 = 1e-10;
/// `‖H‖` below this counts as minimal.
pub const MINIMAL_TOL: f64 = 1e-8;

/// `GL(3)/O(3)` at the origin.
#[derive(Clone, Copy, Debug, Default)]
pub struct AmbientModel;

impl AmbientModel {
    pub const DIM: usize = 6;

    pub fn inner(&self, x: &Mat3, y: &Mat3) -> f64 {
        (x * y).trace()
    }

    pub fn projection(&self, x: &Mat3) -> Mat3 {
        sym_part(x)
    }

    /// Trace-orthonormal basis of `sym(3)`: `E_ii` and `(E_ij + E_ji)/√2`.
    pub fn sym_basis(&self) -> [Mat3; 6] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [
            unit(0, 0),
            unit(1, 1),
            unit(2, 2),
            (unit(0, 1) + unit(1, 0)) * s,
            (unit(0, 2) + unit(2, 0)) * s,
            (unit(1, 2) + unit(2, 1)) * s,
        ]
    }

    /// Gram matrix of the trace form on [`Self::sym_basis`].
    pub fn metric_matrix(&self) -> DMatrix<f64> {
        let b = self.sym_basis();
        DMatrix::from_fn(6, 6, |i, j| self.inner(&b[i], &b[j]))
    }

    fn coords(&self, s: &Mat3) -> Vec<f64> {
        self.sym_basis().iter().map(|b| self.inner(b, s)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct OrbitData {
    pub u_prime: MatrixSubspace,
    /// Orthonormal basis of `dπ(u')`.
    pub m_prime: Vec<Mat3>,
    /// Orthonormal basis of `sym(3) ⊖ m'`.
    pub normals: Vec<Mat3>,
    /// `dim(u' ∩ o(3))`.
    pub stab_dim: usize,
    /// `lifts[i] ∈ u'` with `dπ(lifts[i]) = m_prime[i]`, orthogonal to the stabilizer.
    pub lifts: Vec<Mat3>,
}

impl OrbitData {
    pub fn orbit_dim(&self) -> usize {
        self.m_prime.len()
    }
}

#[derive(Clone, Debug)]
pub struct MeanCurvatureResult {
    pub h: Mat3,
    pub norm: f64,
    pub orbit_dim: usize,
    pub stab_dim: usize,
    /// `(normal, ⟨H, normal⟩)` for each normal basis vector.
    pub per_normal: Vec<(Mat3, f64)>,
}

/// Tangent space, normal space and stabilizer of `U'.o` at the origin.
pub fn orbit_data(u_prime: &MatrixSubspace) -> Result<OrbitData> {
    if u_prime.dim() == 0 {
        return Err(Error::EmptySubspace);
    }
    let amb = AmbientModel;
    let (q, _) = u_prime.orthonormal();
    let d = q.len();
    let coords: Vec<Vec<f64>> = q.iter().map(|x| amb.coords(&amb.projection(x))).collect();
    let map = DMatrix::from_fn(6, d, |i, j| coords[j][i]);
    // only the right singular vectors and the rank are taken from the SVD;
    // m' and the lifts are rebuilt so that dπ(lift) = m' holds by construction
    let svd = map.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let raw: Vec<Mat3> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sigma)| sigma >= STABILIZER_TOL)
        .map(|(idx, _)| {
            q.iter()
                .zip(v_t.row(idx).iter())
                .fold(Mat3::zeros(), |acc, (x, c)| acc + x * *c)
        })
        .collect();
    let images: Vec<Mat3> = raw.iter().map(|x| amb.projection(x)).collect();
    let (m_prime, coeffs) = gram_schmidt(&images, STABILIZER_TOL);
    let lifts: Vec<Mat3> = coeffs
        .iter()
        .map(|c| {
            raw.iter()
                .zip(c)
                .fold(Mat3::zeros(), |acc, (x, ci)| acc + x * *ci)
        })
        .collect();

    let mut spanning = m_prime.clone();
    spanning.extend(amb.sym_basis());
    let (ortho, _) = gram_schmidt(&spanning, 1e-9);
    let normals = ortho[m_prime.len()..].to_vec();
    // the thin SVD reports at most six singular values
    let stab_dim = d - m_prime.len();

    Ok(OrbitData {
        u_prime: u_prime.clone(),
        m_prime,
        normals,
        stab_dim,
        lifts,
    })
}

/// `⟨dπ[Z, X], dπ(Y)⟩`, one half of `2⟨h(X*, Y*), Z*⟩` at the origin.
pub fn shape_term(z: &Mat3, x: &Mat3, y: &Mat3) -> f64 {
    frob(&sym_part(&commutator(z, x)), &sym_part(y))
}

/// Matrix of `⟨h(m'_i, m'_j), A⟩` for a normal `A`, built from the stored lifts.
pub fn second_fundamental_form(od: &OrbitData, normal: &Mat3) -> DMatrix<f64> {
    let k = od.orbit_dim();
    DMatrix::from_fn(k, k, |i, j| {
        0.5 * (shape_term(normal, &od.lifts[i], &od.lifts[j])
            + shape_term(normal, &od.lifts[j], &od.lifts[i]))
    })
}

/// `H = −(1/k) Σ_i h(m'_i, m'_i)` at the origin.
pub fn mean_curvature(u_prime: &MatrixSubspace) -> Result<MeanCurvatureResult> {
    let od = orbit_data(u_prime)?;
    mean_curvature_of(&od)
}

pub fn mean_curvature_of(od: &OrbitData) -> Result<MeanCurvatureResult> {
    let k = od.orbit_dim();
    if k == 0 {
        return Err(Error::ZeroDimensionalOrbit);
    }
    let per_normal: Vec<(Mat3, f64)> = od
        .normals
        .iter()
        .map(|a| {
            let tr: f64 = od.lifts.iter().map(|x| shape_term(a, x, x)).sum();
            (*a, -tr / k as f64)
        })
        .collect();
    let h = per_normal
        .iter()
        .fold(Mat3::zeros(), |acc, (a, v)| acc + a * *v);
    Ok(MeanCurvatureResult {
        norm: h.norm(),
        h,
        orbit_dim: k,
        stab_dim: od.stab_dim,
        per_normal,
    })
}

/// `g⁻¹ (ℝ ⊕ Der) g`, the algebra whose orbit through the origin is congruent to
/// the orbit through `g.⟨,⟩₀`.
pub fn conjugated_algebra(f: &Family, g: &Mat3, mode: Arithmetic) -> Result<MatrixSubspace> {
    conjugate_subspace(&scalar_plus(&family_derivations(f, mode)?), g)
}

/// Mean curvature of the orbit through `g.⟨,⟩₀`.
pub fn orbit_at(f: &Family, g: &Mat3) -> Result<MeanCurvatureResult> {
    orbit_at_in(f, g, Arithmetic::Float)
}

pub fn orbit_at_in(f: &Family, g: &Mat3, mode: Arithmetic) -> Result<MeanCurvatureResult> {
    mean_curvature(&conjugated_algebra(f, g, mode)?)
}

/// Sampling test that `iso` maps the orbit through `g1` into the orbit through `g2`.
pub fn congruence_check(f: &Family, g1: &Mat3, g2: &Mat3, iso: &Mat3) -> Result<bool> {
    congruence_check_with(f, g1, g2, iso, 16, LAMBDA_TOL, 0x5eed)
}

pub fn congruence_check_with(
    f: &Family,
    g1: &Mat3,
    g2: &Mat3,
    iso: &Mat3,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<bool> {
    crate::linalg::checked_inverse(iso)?;
    let target = class_parameter(f, g2)?;
    let mut rng = StdRng::seed_from_u64(seed);
    for n in 0..=samples {
        let alpha = if n == 0 {
            Mat3::identity()
        } else {
            sampling::identity_component(&mut rng, f, 0.5)?
        };
        let p = iso * alpha * g1;
        if (class_parameter(f, &p)? - target).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

fn class_parameter(f: &Family, g: &Mat3) -> Result<f64> {
    Ok(class_invariant(f, reduce(f, g)?.0.lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::representative_matrix;
    use approx::assert_relative_eq;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn e(i: usize, j: usize) -> Mat3 {
        unit(i - 1, j - 1)
    }

    #[test]
    fn ambient_metric_is_positive_definite() {
        let ev = AmbientModel.metric_matrix().symmetric_eigenvalues();
        assert!(ev.iter().all(|v| (*v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn projection_is_orthogonal_onto_sym() {
        let amb = AmbientModel;
        for n in 0..9 {
            let x = unit(n / 3, n % 3);
            let p = amb.projection(&x);
            assert_eq!(p, p.transpose());
            // x − dπ(x) is Frobenius-orthogonal to every symmetric matrix
            for b in amb.sym_basis() {
                assert!(frob(&(x - p), &b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn r3_orbit_through_origin() {
        let r = orbit_at(&Family::R3, &Mat3::identity()).unwrap();
        assert_eq!((r.orbit_dim, r.stab_dim), (5, 0));
        let a = (e(2, 2) - e(3, 3)) / SQRT2;
        assert_relative_eq!(r.h, a * (SQRT2 / 5.0), epsilon = 1e-12);
        assert_relative_eq!(r.norm, SQRT2 / 5.0, epsilon = 1e-12);
    }

    #[test]
    fn full_algebra_is_transitive() {
        let od = orbit_data(&MatrixSubspace::full()).unwrap();
        assert_eq!((od.orbit_dim(), od.stab_dim), (6, 3));
        assert!(od.normals.is_empty());
        let r = mean_curvature_of(&od).unwrap();
        assert_eq!(r.norm, 0.0);
    }

    #[test]
    fn r3pa_singular_orbit() {
        let r = orbit_at(&Family::R3pa(0.5), &Mat3::identity()).unwrap();
        assert_eq!((r.orbit_dim, r.stab_dim), (4, 1));
        assert!(r.norm < 1e-12);
    }

    #[test]
    fn r3pa_regular_orbit_at_two() {
        let g = Mat3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, 0.5));
        let r = orbit_at(&Family::R3pa(1.0), &g).unwrap();
        assert_eq!(r.orbit_dim, 5);
        assert_relative_eq!(r.norm, SQRT2 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn r3a_direction() {
        for lam in [-2.0, 0.5, 3.0] {
            let g = representative_matrix(&Family::R3a(0.2), lam).unwrap();
            let r = orbit_at(&Family::R3a(0.2), &g).unwrap();
            let s = 1.0 / (2.0 * (1.0 + lam * lam)).sqrt();
            let a_prime = sym_part(&((e(3, 3) - e(2, 2)) * lam - e(3, 2) * 2.0)) * s;
            let coeff = -2.0 * lam / (5.0 * (2.0 * (1.0 + lam * lam)).sqrt());
            assert_relative_eq!(r.h, a_prime * coeff, epsilon = 1e-12);
        }
        assert!(orbit_at(&Family::R3a(0.2), &Mat3::identity()).unwrap().norm < 1e-12);
    }

    #[test]
    fn zero_dimensional_orbit_is_an_error() {
        let k = MatrixSubspace::new(vec![e(1, 2) - e(2, 1)]).unwrap();
        assert!(matches!(
            mean_curvature(&k),
            Err(Error::ZeroDimensionalOrbit)
        ));
    }

    #[test]
    fn lifts_are_consistent() {
        let g = Mat3::new(1.0, 0.2, 0.0, -0.3, 1.0, 0.4, 0.1, 0.0, 2.0);
        for f in [Family::R3, Family::R3pa(1.0), Family::H3] {
            for base in [Mat3::identity(), g] {
                let od =
                    orbit_data(&conjugated_algebra(&f, &base, Arithmetic::Float).unwrap()).unwrap();
                assert_eq!(od.orbit_dim() + od.stab_dim, od.u_prime.dim());
                for (i, x) in od.lifts.iter().enumerate() {
                    assert_relative_eq!(sym_part(x), od.m_prime[i], epsilon = 1e-10);
                    assert!(od.u_prime.membership(x, 1e-9).is_member);
                    for (j, y) in od.m_prime.iter().enumerate() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((frob(&od.m_prime[i], y) - want).abs() < 1e-10);
                    }
                    for n in &od.normals {
                        assert!(frob(&od.m_prime[i], n).abs() < 1e-10);
                    }
                }
            }
        }
    }

    // ⟨[A, X_i]*_o, (X_i)*_o⟩ with the explicit bases used for the three families.
    #[test]
    fn explicit_basis_terms_r3() {
        let a = (e(2, 2) - e(3, 3)) / SQRT2;
        let xs = [
            e(1, 1),
            (e(2, 2) + e(3, 3)) / SQRT2,
            e(2, 1) * SQRT2,
            e(3, 1) * SQRT2,
            e(3, 2) * SQRT2,
        ];
        let want = [0.0, 0.0, SQRT2 / 2.0, -SQRT2 / 2.0, -SQRT2];
        for (x, w) in xs.iter().zip(want) {
            assert!((shape_term(&a, x, x) - w).abs() < 1e-12);
        }
        assert_relative_eq!(commutator(&a, &xs[4]), e(3, 2) * -2.0, epsilon = 1e-14);
    }

    #[test]
    fn explicit_basis_terms_r3a() {
        let lam: f64 = 1.3;
        let s = 1.0 / (2.0 * (1.0 + lam * lam)).sqrt();
        let a = (e(3, 3) * lam - e(2, 2) * lam - e(3, 2) * 2.0) * s;
        let xs = [
            e(1, 1),
            (e(2, 2) + e(3, 3)) / SQRT2,
            (e(2, 2) - e(3, 3) - e(3, 2) * (2.0 * lam)) * s,
            e(2, 1) * SQRT2,
            e(3, 1) * SQRT2,
        ];
        let r = lam * s;
        let want = [0.0, 0.0, 2.0 * r, -r, r];
        for (x, w) in xs.iter().zip(want) {
            assert!((shape_term(&a, x, x) - w).abs() < 1e-12);
        }
        assert_relative_eq!(commutator(&a, &xs[2]), e(3, 2) * -2.0, epsilon = 1e-14);
        // the non-symmetric normal gives the same values as its symmetric part
        for x in &xs {
            assert!((shape_term(&a, x, x) - shape_term(&sym_part(&a), x, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn explicit_basis_terms_r3pa() {
        let lam: f64 = 2.5;
        let l2 = lam * lam;
        let a = (e(2, 2) - e(3, 3)) / SQRT2;
        let xs = [
            e(1, 1),
            (e(2, 2) + e(3, 3)) / SQRT2,
            e(2, 1) * SQRT2,
            e(3, 1) * SQRT2,
            (e(2, 3) - e(3, 2) * l2) * (SQRT2 / (1.0 - l2)),
        ];
        let want = [
            0.0,
            0.0,
            1.0 / SQRT2,
            -1.0 / SQRT2,
            SQRT2 * (1.0 + l2) / (1.0 - l2),
        ];
        for (x, w) in xs.iter().zip(want) {
            assert!((shape_term(&a, x, x) - w).abs() < 1e-12);
        }
    }

    #[test]
    fn second_fundamental_form_is_symmetric_per_term() {
        let g = Mat3::new(1.0, 0.2, 0.0, -0.3, 1.0, 0.4, 0.1, 0.0, 2.0);
        for f in [Family::R3, Family::R3a(-0.5), Family::R3pa(0.7)] {
            let od = orbit_data(&conjugated_algebra(&f, &g, Arithmetic::Float).unwrap()).unwrap();
            for n in &od.normals {
                for (i, x) in od.lifts.iter().enumerate() {
                    for y in &od.lifts[i + 1..] {
                        assert!((shape_term(n, x, y) - shape_term(n, y, x)).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn singular_orbit_stays_minimal_along_the_group() {
        // repeated singular values of dπ once broke the pairing of lifts with m'
        let f = Family::R3pa(0.0);
        let mut rng = StdRng::seed_from_u64(11);
        let g1 = crate::moduli::representative_matrix(&f, 1.0).unwrap();
        for _ in 0..20 {
            let alpha = sampling::identity_component(&mut rng, &f, 0.4).unwrap();
            let q = sampling::orthogonal(&mut rng);
            let od =
                orbit_data(&conjugated_algebra(&f, &(alpha * g1 * q), Arithmetic::Float).unwrap())
                    .unwrap();
            for (x, m) in od.lifts.iter().zip(&od.m_prime) {
                assert!((sym_part(x) - m).norm() < 1e-12);
            }
            assert!(mean_curvature_of(&od).unwrap().norm < 1e-12);
        }
    }

    #[test]
    fn mean_curvature_does_not_depend_on_the_lift_at_the_singular_orbit() {
        let od = orbit_data(
            &conjugated_algebra(&Family::R3pa(1.0), &Mat3::identity(), Arithmetic::Float).unwrap(),
        )
        .unwrap();
        assert_eq!(od.stab_dim, 1);
        let k = e(2, 3) - e(3, 2);
        assert!(od.u_prime.membership(&k, 1e-9).is_member);
        let mut shifted = od.clone();
        for (i, x) in shifted.lifts.iter_mut().enumerate() {
            *x += k * (0.3 + i as f64);
        }
        let h0 = mean_curvature_of(&od).unwrap().h;
        let h1 = mean_curvature_of(&shifted).unwrap().h;
        assert_relative_eq!(h0, h1, epsilon = 1e-12);
    }

    #[test]
    fn r3_orbits_are_congruent() {
        let (l1, l2) = (0.7, 2.9);
        let g1 = representative_matrix(&Family::R3, l1).unwrap();
        let g2 = representative_matrix(&Family::R3, l2).unwrap();
        let iso = Mat3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, l1 / l2));
        assert!(congruence_check(&Family::R3, &g1, &g2, &iso).unwrap());
        assert!(congruence_check(&Family::R3pa(1.0), &g1, &g1, &Mat3::identity()).unwrap());
        let f = Family::R3a(0.5);
        let h1 = representative_matrix(&f, 1.0).unwrap();
        assert!(!congruence_check(&f, &Mat3::identity(), &h1, &Mat3::identity()).unwrap());
    }
}
