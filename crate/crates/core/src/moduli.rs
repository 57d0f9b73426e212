//! Canonical representatives of inner products up to automorphism and scaling.
//!
//! Every invertible `g` is moved inside its double coset `ℝ^×·Aut(g)·g·O(3)`
//! to a one-parameter normal form `g_λ`, and the factors used along the way
//! are kept so the result can be checked: `g_λ = c · φ · g · k`.

use nalgebra::{Matrix2, Vector3};

use crate::curvature::spd_cholesky;
use crate::error::{Error, Result};
use crate::lie::{make_family, two_generator, Family, StructureConstants};
use crate::linalg::{
    checked_inverse, embed_lower, lq_positive, orthogonality_defect, signed_svd2, Mat3,
};

/// Default tolerance when comparing representative parameters.
pub const LAMBDA_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct Representative {
    pub family: Family,
    pub lambda: f64,
    /// `g_λ`: `diag(1,1,1/λ)` for r3 and r'3,a, unit lower triangular with `(3,2) = λ` for r3,a,
    /// the identity for the transitive families.
    pub rep_matrix: Mat3,
}

/// A named factor applied during the reduction.
#[derive(Clone, Debug)]
pub struct Step {
    pub name: &'static str,
    pub matrix: Mat3,
}

/// Witness of `rep = c · φ · g · k`.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub scalar: f64,
    /// Bracket-preserving part, normalized so that its `(1,1)` entry is one.
    pub auto_part: Mat3,
    pub orth: Mat3,
    pub steps: Vec<Step>,
}

impl ReductionTrace {
    /// `‖rep − c φ g k‖_F`.
    pub fn witness_residual(&self, g: &Mat3, rep: &Mat3) -> f64 {
        (rep - self.auto_part * g * self.orth * self.scalar).norm()
    }

    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.orth)
    }

    /// Largest bracket-preservation defect of `φ` for the given constants.
    pub fn automorphism_defect(&self, sc: &StructureConstants<f64>) -> f64 {
        sc.automorphism_defect(&self.auto_part)
    }
}

fn diag(a: f64, b: f64, c: f64) -> Mat3 {
    Mat3::from_diagonal(&Vector3::new(a, b, c))
}

fn canonical(f: &Family) -> Family {
    match *f {
        Family::R3a(1.0) => Family::R31,
        other => other,
    }
}

/// Allowed range of the representative parameter.
pub fn check_lambda(f: &Family, lambda: f64) -> Result<()> {
    let ok = lambda.is_finite()
        && match canonical(f) {
            Family::R3 => lambda > 0.0,
            Family::R3pa(_) => lambda >= 1.0,
            _ => true,
        };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("lambda = {lambda} for {f}")))
    }
}

/// The normal form `g_λ` of the family.
pub fn representative_matrix(f: &Family, lambda: f64) -> Result<Mat3> {
    f.validate()?;
    check_lambda(f, lambda)?;
    Ok(match canonical(f) {
        Family::R3 | Family::R3pa(_) => diag(1.0, 1.0, 1.0 / lambda),
        Family::R3a(_) => {
            let mut m = Mat3::identity();
            m[(2, 1)] = lambda;
            m
        }
        Family::H3 | Family::R31 => Mat3::identity(),
    })
}

/// A `g` with `g⁻ᵀ g⁻¹ = G`, so that `g.⟨,⟩₀` has Gram matrix `G`.
pub fn metric_to_group(gram: &Mat3) -> Result<Mat3> {
    let l = spd_cholesky(gram)?;
    Ok(checked_inverse(&l)?.transpose())
}

/// Gram matrix of `g.⟨,⟩₀`, i.e. `g⁻ᵀ g⁻¹`.
pub fn group_to_metric(g: &Mat3) -> Result<Mat3> {
    let gi = checked_inverse(g)?;
    Ok(gi.transpose() * gi)
}

/// Reduce `g` to the family's representative.
pub fn reduce(f: &Family, g: &Mat3) -> Result<(Representative, ReductionTrace)> {
    f.validate()?;
    let fam = canonical(f);
    let (l, k1) = lq_positive(g)?;
    let mut steps = vec![Step {
        name: "lq_orthogonal",
        matrix: k1,
    }];

    if let Family::H3 | Family::R31 = fam {
        return Ok(reduce_transitive(f, &fam, &l, k1, steps));
    }

    // F-subgroup normalizer: lands in {[[1,0,0],[0,1,0],[0,a32,a33]]}
    let (g11, g21, g22, g31) = (l[(0, 0)], l[(1, 0)], l[(1, 1)], l[(2, 0)]);
    let phi1 = Mat3::new(g22, 0.0, 0.0, -g21, g11, 0.0, -g31, 0.0, g11) / (g11 * g22);
    steps.push(Step {
        name: "f_normalizer",
        matrix: phi1,
    });
    let reduced = phi1 * l;
    let (a32, a33) = (reduced[(2, 1)], reduced[(2, 2)]);

    let mut left = phi1;
    let mut k = k1;
    let lambda = match fam {
        Family::R3 => {
            let mut shear = Mat3::identity();
            shear[(2, 1)] = -a32;
            steps.push(Step {
                name: "shear",
                matrix: shear,
            });
            left = shear * left;
            1.0 / a33
        }
        Family::R3a(_) => {
            let scale = diag(1.0, 1.0, 1.0 / a33);
            steps.push(Step {
                name: "third_row_scale",
                matrix: scale,
            });
            left = scale * left;
            a32 / a33
        }
        Family::R3pa(_) => {
            let block = Matrix2::new(1.0, 0.0, a32, a33);
            let (u, x, y, v) = signed_svd2(&block);
            let rot = embed_lower(&u.transpose());
            let k2 = embed_lower(&v);
            steps.push(Step {
                name: "rotation",
                matrix: rot,
            });
            steps.push(Step {
                name: "cartan_right",
                matrix: k2,
            });
            let scale = diag(1.0, 1.0 / x, 1.0 / x);
            steps.push(Step {
                name: "diagonal_scale",
                matrix: scale,
            });
            left = scale * rot * left;
            k *= k2;
            x / y
        }
        Family::H3 | Family::R31 => unreachable!(),
    };

    let c = left[(0, 0)];
    let trace = ReductionTrace {
        scalar: c,
        auto_part: left / c,
        orth: k,
        steps,
    };
    let rep = Representative {
        family: *f,
        lambda,
        rep_matrix: representative_matrix(f, lambda)?,
    };
    Ok((rep, trace))
}

/// Transitive case: `L⁻¹` itself lies in `ℝ^× · Aut`, and only the scalar has to be split off.
fn reduce_transitive(
    f: &Family,
    fam: &Family,
    l: &Mat3,
    k: Mat3,
    mut steps: Vec<Step>,
) -> (Representative, ReductionTrace) {
    let m = l.try_inverse().expect("positive diagonal");
    steps.push(Step {
        name: "triangular_inverse",
        matrix: m,
    });
    let c = match fam {
        // Aut(h3): [[A, 0], [v, det A]]
        Family::H3 => {
            let det_a = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            det_a / m[(2, 2)]
        }
        // Aut(r3,1): [[1, 0], [v, A]]
        _ => m[(0, 0)],
    };
    let rep = Representative {
        family: *f,
        lambda: 1.0,
        rep_matrix: Mat3::identity(),
    };
    (
        rep,
        ReductionTrace {
            scalar: c,
            auto_part: m / c,
            orth: k,
            steps,
        },
    )
}

/// Bracket parameters `(a, b, c, d)` of the normal-form frame:
/// `[x1,x2] = a x2 + b x3`, `[x1,x3] = c x2 + d x3`.
pub fn frame_params(f: &Family, lambda: f64) -> Result<(f64, f64, f64, f64)> {
    f.validate()?;
    check_lambda(f, lambda)?;
    Ok(match canonical(f) {
        Family::H3 => (0.0, 1.0, 0.0, 0.0),
        Family::R31 => (1.0, 0.0, 0.0, 1.0),
        Family::R3 => (1.0, lambda, 0.0, 1.0),
        Family::R3a(a) => (1.0, lambda * (a - 1.0), 0.0, a),
        Family::R3pa(a) => (a, -lambda, 1.0 / lambda, a),
    })
}

/// Output of [`milnor_data`].
#[derive(Clone, Debug)]
pub struct MilnorData {
    pub lambda: f64,
    /// The frame is orthonormal for `k_scale · ⟨,⟩`.
    pub k_scale: f64,
    pub frame_brackets: StructureConstants<f64>,
    /// Columns are the frame vectors `φ⁻¹ g_λ e_i` in canonical coordinates.
    pub frame: Mat3,
}

/// Milnor-type frame of the inner product with Gram matrix `G`.
pub fn milnor_data(f: &Family, gram: &Mat3) -> Result<MilnorData> {
    let g = metric_to_group(gram)?;
    let (rep, trace) = reduce(f, &g)?;
    let (a, b, c, d) = frame_params(f, rep.lambda)?;
    let frame = checked_inverse(&trace.auto_part)? * rep.rep_matrix;
    Ok(MilnorData {
        lambda: rep.lambda,
        k_scale: 1.0 / (trace.scalar * trace.scalar),
        frame_brackets: two_generator(a, b, c, d),
        frame,
    })
}

/// Sufficient test for `[G1] = [G2]`: equal representative parameters.
pub fn same_class(f: &Family, g1: &Mat3, g2: &Mat3, tol: f64) -> Result<bool> {
    let l1 = reduce(f, &metric_to_group(g1)?)?.0.lambda;
    let l2 = reduce(f, &metric_to_group(g2)?)?.0.lambda;
    Ok((class_invariant(f, l1) - class_invariant(f, l2)).abs() <= tol)
}

/// `λ` up to the residual symmetry of the normal form. For r3,a the
/// automorphism `diag(1, 1, −1)` carries `g_λ` to `g_{−λ}` modulo `O(3)`.
pub fn class_invariant(f: &Family, lambda: f64) -> f64 {
    match f {
        Family::R3a(_) => lambda.abs(),
        _ => lambda,
    }
}

/// Structure constants of `f` in the basis `{g_λ e_i}`.
pub fn representative_constants(f: &Family, lambda: f64) -> Result<StructureConstants<f64>> {
    make_family::<f64>(f)?.change_basis_mat(&representative_matrix(f, lambda)?)
}
