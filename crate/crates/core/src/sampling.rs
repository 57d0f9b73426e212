//! Random test inputs: orthogonal matrices, SPD Gram matrices, well-conditioned
//! group elements and elements of the identity component of `ℝ^× · Aut`.

use rand::Rng;

use crate::derivations::{family_derivations, scalar_plus};
use crate::error::Result;
use crate::lie::Family;
use crate::linalg::{lq_positive, Mat3};
use crate::Arithmetic;

pub fn uniform_matrix<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> Mat3 {
    Mat3::from_fn(|_, _| rng.gen_range(-half_width..=half_width))
}

/// Condition number in the spectral norm.
pub fn condition_number(g: &Mat3) -> f64 {
    let s = g.singular_values();
    let max = s.max();
    let min = s.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Uniform entries in `[-half_width, half_width]`, resampled until the
/// condition number is at most `max_cond`.
pub fn well_conditioned<R: Rng + ?Sized>(rng: &mut R, half_width: f64, max_cond: f64) -> Mat3 {
    loop {
        let g = uniform_matrix(rng, half_width);
        if condition_number(&g) <= max_cond && g.determinant().abs() > 1e-3 {
            return g;
        }
    }
}

/// Orthogonal matrix, either orientation.
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    let g = well_conditioned(rng, 1.0, 1e3);
    let (_, k) = lq_positive(&g).expect("well conditioned");
    k
}

/// `A Aᵀ + εI` with `A` uniform in `[-2, 2]`.
pub fn spd<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    let a = uniform_matrix(rng, 2.0);
    a * a.transpose() + Mat3::identity() * 0.1
}

/// `exp(X)` for a random `X ∈ ℝ ⊕ Der`, coefficients uniform in `[-scale, scale]`.
pub fn identity_component<R: Rng + ?Sized>(rng: &mut R, f: &Family, scale: f64) -> Result<Mat3> {
    let algebra = scalar_plus(&family_derivations(f, Arithmetic::Float)?);
    let x = algebra.basis().iter().fold(Mat3::zeros(), |acc, b| {
        acc + b * rng.gen_range(-scale..=scale)
    });
    Ok(x.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::make_family;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn samples_have_requested_properties() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let q = orthogonal(&mut rng);
            assert!(crate::linalg::orthogonality_defect(&q) < 1e-12);
            let g = spd(&mut rng);
            assert!(g.cholesky().is_some());
            assert!(condition_number(&well_conditioned(&mut rng, 3.0, 50.0)) <= 50.0);
        }
    }

    #[test]
    fn identity_component_elements_scale_automorphisms() {
        let mut rng = StdRng::seed_from_u64(11);
        for f in [
            Family::R3,
            Family::R3a(0.5),
            Family::R3pa(1.5),
            Family::H3,
            Family::R31,
        ] {
            let sc = make_family::<f64>(&f).unwrap();
            for _ in 0..5 {
                let a = identity_component(&mut rng, &f, 0.7).unwrap();
                assert!(a.determinant() > 0.0);
                let ok = scale_search(&sc, &a);
                assert!(ok, "{f}");
            }
        }
    }

    fn scale_search(sc: &crate::StructureConstants<f64>, a: &Mat3) -> bool {
        // a = s·φ gives [a e_i, a e_j] = s · a[e_i, e_j]
        let mut best = f64::INFINITY;
        for i in 0..3 {
            for j in 0..3 {
                let b = sc.bracket(&unitv(i), &unitv(j)).unwrap();
                let lhs = a * crate::linalg::Vec3::from_column_slice(&b);
                let ci: Vec<f64> = (0..3).map(|r| a[(r, i)]).collect();
                let cj: Vec<f64> = (0..3).map(|r| a[(r, j)]).collect();
                let rhs = sc.bracket(&ci, &cj).unwrap();
                let rhs = crate::linalg::Vec3::from_column_slice(&rhs);
                if lhs.norm() > 1e-9 {
                    let s = rhs.dot(&lhs) / lhs.norm_squared();
                    best = best.min(sc.automorphism_defect(&(a / s)));
                }
            }
        }
        best < 1e-9
    }

    fn unitv(i: usize) -> Vec<f64> {
        (0..3).map(|r| if r == i { 1.0 } else { 0.0 }).collect()
    }
}
