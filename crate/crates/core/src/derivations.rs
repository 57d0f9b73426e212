//! Derivation algebras as nullspaces, and linear subspaces of 3×3 matrices.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lie::{make_family, Family, StructureConstants};
use crate::linalg::{checked_inverse, frob, gram_schmidt, project, Mat3};
use crate::scalar::{self, Scalar};
use crate::Arithmetic;

/// A linear subspace of `gl(3)` given by a basis.
///
/// Basis elements have unit Frobenius norm and a positive first nonzero
/// entry (row-major).
#[derive(Clone, Debug)]
pub struct MatrixSubspace {
    basis: Vec<Mat3>,
}

/// Result of projecting a matrix onto a subspace.
#[derive(Clone, Debug)]
pub struct Membership {
    pub is_member: bool,
    /// Coefficients of the projection in the subspace basis.
    pub coefficients: Vec<f64>,
    /// Frobenius distance to the subspace.
    pub residual: f64,
}

fn normalize(m: &Mat3) -> Mat3 {
    let n = m.norm();
    let mut out = m / n;
    // row-major scan for the first entry that is clearly nonzero
    let lead = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| out[(i, j)])
        .find(|v| v.abs() > 1e-12)
        .unwrap_or(1.0);
    if lead < 0.0 {
        out = -out;
    }
    out
}

fn vectorize(m: &Mat3) -> Vec<f64> {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| m[(i, j)]))
        .collect()
}

fn unvectorize<T: Scalar>(v: &[T]) -> Mat3 {
    Mat3::from_fn(|i, j| v[3 * i + j].to_f64_lossy())
}

impl MatrixSubspace {
    /// Subspace spanned by `mats`; dependent inputs are discarded.
    pub fn from_spanning(mats: &[Mat3]) -> Self {
        let scale = mats.iter().map(|m| m.amax()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Self { basis: Vec::new() };
        }
        let mut rows: Vec<Vec<f64>> = mats.iter().map(|m| vectorize(&(m / scale))).collect();
        let pivots = scalar::rref(&mut rows);
        let basis = rows[..pivots.len()]
            .iter()
            .map(|r| normalize(&unvectorize(r)))
            .collect();
        Self { basis }
    }

    /// Trusts that `basis` is linearly independent; only normalizes.
    fn from_independent(basis: impl IntoIterator<Item = Mat3>) -> Self {
        Self {
            basis: basis.into_iter().map(|m| normalize(&m)).collect(),
        }
    }

    /// All of `gl(3)`.
    pub fn full() -> Self {
        Self::from_independent((0..9).map(|n| crate::linalg::unit(n / 3, n % 3)))
    }

    pub fn basis(&self) -> &[Mat3] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Frobenius-orthonormal basis of the same span, with coefficients back to `basis`.
    pub fn orthonormal(&self) -> (Vec<Mat3>, Vec<Vec<f64>>) {
        gram_schmidt(&self.basis, 1e-10)
    }

    /// Gram determinant of the vectorized basis.
    pub fn gram_determinant(&self) -> f64 {
        let n = self.dim();
        let g = nalgebra::DMatrix::from_fn(n, n, |i, j| frob(&self.basis[i], &self.basis[j]));
        g.determinant()
    }

    pub fn membership(&self, m: &Mat3, tol: f64) -> Membership {
        let (ortho, coeffs) = self.orthonormal();
        let (p, along) = project(&ortho, m);
        let mut coefficients = vec![0.0; self.dim()];
        for (a, cs) in along.iter().zip(&coeffs) {
            for (out, c) in coefficients.iter_mut().zip(cs) {
                *out += a * c;
            }
        }
        let residual = (m - p).norm();
        Membership {
            is_member: residual < tol,
            coefficients,
            residual,
        }
    }

    /// Largest distance from a basis element of `other` to `self`.
    pub fn containment_defect(&self, other: &MatrixSubspace) -> f64 {
        other
            .basis
            .iter()
            .map(|b| self.membership(b, f64::INFINITY).residual)
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &MatrixSubspace, tol: f64) -> bool {
        self.containment_defect(other) < tol
    }

    /// Equality of spans by mutual containment.
    pub fn same_span(&self, other: &MatrixSubspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains(other, tol) && other.contains(self, tol)
    }

    /// Largest distance of a basis commutator `[A, B]` from the subspace.
    pub fn commutator_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                let c = a * b - b * a;
                worst = worst.max(self.membership(&c, f64::INFINITY).residual);
            }
        }
        worst
    }

    /// Intersection with the antisymmetric matrices `o(3)`.
    pub fn antisymmetric_part_dim(&self) -> usize {
        let k = self
            .basis
            .iter()
            .map(crate::linalg::sym_part)
            .collect::<Vec<_>>();
        self.dim() - crate::linalg::rank_of(&k, 1e-10)
    }
}

/// The linear system whose nullspace is `Der(g)`.
///
/// Unknowns are the entries `D[a][b]` at index `3a + b`; one equation per
/// pair `i < j` and output component `k` of
/// `D[e_i,e_j] − [D e_i, e_j] − [e_i, D e_j]`.
pub fn derivation_system<T: Scalar>(sc: &StructureConstants<T>) -> Vec<Vec<T>> {
    let n = sc.dim();
    let var = |a: usize, b: usize| a * n + b;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                let mut row = vec![T::zero(); n * n];
                for m in 0..n {
                    // D[e_i,e_j]: Σ_m c_ij^m D_km
                    let c = sc.get(i, j, m);
                    row[var(k, m)] = row[var(k, m)].clone() + c.clone();
                    // [D e_i, e_j]: Σ_m D_mi c_mj^k
                    row[var(m, i)] = row[var(m, i)].clone() - sc.get(m, j, k).clone();
                    // [e_i, D e_j]: Σ_m D_mj c_im^k
                    row[var(m, j)] = row[var(m, j)].clone() - sc.get(i, m, k).clone();
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// Nullspace basis of the derivation system, as row-major `n²` vectors.
pub fn derivation_basis<T: Scalar>(sc: &StructureConstants<T>) -> Vec<Vec<T>> {
    let n = sc.dim();
    scalar::nullspace(derivation_system(sc), n * n)
}

/// `Der(g)` for 3-dimensional structure constants.
pub fn derivation_algebra(sc: &StructureConstants<f64>) -> MatrixSubspace {
    let mats: Vec<Mat3> = derivation_basis(sc)
        .iter()
        .map(|v| unvectorize(v))
        .collect();
    MatrixSubspace::from_independent(mats)
}

/// `Der(g)` computed over exact rationals, then converted to floats.
pub fn derivation_algebra_exact(sc: &StructureConstants<BigRational>) -> MatrixSubspace {
    let mats: Vec<Mat3> = derivation_basis(sc)
        .iter()
        .map(|v| unvectorize(v))
        .collect();
    MatrixSubspace::from_independent(mats)
}

/// `Der` of a family in the requested arithmetic.
pub fn family_derivations(f: &Family, mode: Arithmetic) -> Result<MatrixSubspace> {
    Ok(match mode {
        Arithmetic::Float => derivation_algebra(&make_family::<f64>(f)?),
        Arithmetic::Exact => derivation_algebra_exact(&make_family::<BigRational>(f)?),
    })
}

/// Largest component of `D[e_i,e_j] − [De_i,e_j] − [e_i,De_j]` over basis pairs,
/// evaluated directly with the bracket.
pub fn derivation_defect(sc: &StructureConstants<f64>, d: &Mat3) -> f64 {
    let e = |i: usize| -> Vec<f64> { (0..3).map(|r| if r == i { 1.0 } else { 0.0 }).collect() };
    let col = |i: usize| -> Vec<f64> { (0..3).map(|r| d[(r, i)]).collect() };
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let b = sc.bracket(&e(i), &e(j)).unwrap();
            let lhs = d * crate::linalg::Vec3::from_column_slice(&b);
            let r1 = sc.bracket(&col(i), &e(j)).unwrap();
            let r2 = sc.bracket(&e(i), &col(j)).unwrap();
            for k in 0..3 {
                worst = worst.max((lhs[k] - r1[k] - r2[k]).abs());
            }
        }
    }
    worst
}

/// `{g⁻¹ X g | X ∈ S}`.
pub fn conjugate_subspace(s: &MatrixSubspace, g: &Mat3) -> Result<MatrixSubspace> {
    let ginv = checked_inverse(g)?;
    Ok(MatrixSubspace::from_independent(
        s.basis.iter().map(|b| ginv * b * g),
    ))
}

/// `ℝ·I + S`.
pub fn scalar_plus(s: &MatrixSubspace) -> MatrixSubspace {
    let mut mats = s.basis.clone();
    mats.push(Mat3::identity());
    MatrixSubspace::from_spanning(&mats)
}

pub fn subspace_membership(s: &MatrixSubspace, m: &Mat3, tol: f64) -> Membership {
    s.membership(m, tol)
}

impl MatrixSubspace {
    /// Wrap a basis that is known to be independent. Fails on an empty or
    /// dependent list.
    pub fn new(basis: Vec<Mat3>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::EmptySubspace);
        }
        let s = Self::from_spanning(&basis);
        if s.dim() != basis.len() {
            return Err(Error::InvalidConfig("basis is linearly dependent".into()));
        }
        Ok(Self::from_independent(basis))
    }
}
