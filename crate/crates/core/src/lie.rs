//! Lie algebras given by structure constants, and the three-dimensional
//! solvable families `h3`, `r3`, `r3,a`, `r'3,a`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::scalar::{self, Scalar};

/// A three-dimensional solvable Lie algebra from the classification table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// Heisenberg: `[e1,e2] = e3`.
    H3,
    /// `[e1,e2] = e2 + e3`, `[e1,e3] = e3`.
    R3,
    /// `[e1,e2] = e2`, `[e1,e3] = a e3` with `-1 ≤ a ≤ 1`.
    R3a(f64),
    /// `[e1,e2] = a e2 - e3`, `[e1,e3] = e2 + a e3` with `a ≥ 0`.
    R3pa(f64),
    /// `r3,a` at `a = 1`; kept separate because its automorphism action is transitive.
    R31,
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::R3a(a) if !(-1.0..=1.0).contains(&a) => Err(Error::InvalidFamily(format!(
                "r3a requires -1 <= a <= 1, got {a}"
            ))),
            Family::R3pa(a) if !(a >= 0.0 && a.is_finite()) => Err(Error::InvalidFamily(format!(
                "r3pa requires a >= 0, got {a}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Family::H3 => "h3",
            Family::R3 => "r3",
            Family::R3a(_) => "r3a",
            Family::R3pa(_) => "r3pa",
            Family::R31 => "r3_1",
        }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            Family::R3a(a) | Family::R3pa(a) => Some(a),
            _ => None,
        }
    }

    /// Families whose automorphism orbits are all of the space of inner products.
    pub fn is_transitive(&self) -> bool {
        matches!(self, Family::H3 | Family::R31)
    }

    /// Build from a tag and an optional parameter, as the CLI receives them.
    pub fn from_tag(tag: &str, a: Option<f64>) -> Result<Self> {
        let tag = match tag {
            "r3_a" => "r3a",
            "r3p_a" => "r3pa",
            "r31" => "r3_1",
            t => t,
        };
        let fam = match (tag, a) {
            ("h3", None) => Family::H3,
            ("r3", None) => Family::R3,
            ("r3_1", None) => Family::R31,
            ("r3a", Some(a)) => Family::R3a(a),
            ("r3pa", Some(a)) => Family::R3pa(a),
            ("r3a" | "r3pa", None) => {
                return Err(Error::InvalidFamily(format!("{tag} needs a parameter a")))
            }
            (_, Some(_)) if matches!(tag, "h3" | "r3" | "r3_1") => {
                return Err(Error::InvalidFamily(format!("{tag} takes no parameter")))
            }
            _ => return Err(Error::InvalidFamily(tag.to_string())),
        };
        fam.validate()?;
        Ok(fam)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::R3a(a) => write!(f, "r3a:a={a}"),
            Family::R3pa(a) => write!(f, "r3pa:a={a}"),
            other => f.write_str(other.tag()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `h3`, `r3`, `r3_1`, `r3a:a=<float>` and `r3pa:a=<float>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once(':') {
            None => Family::from_tag(s, None),
            Some((tag, rest)) => {
                let value = rest
                    .trim()
                    .strip_prefix("a=")
                    .ok_or_else(|| Error::InvalidFamily(s.to_string()))?;
                let a: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidFamily(s.to_string()))?;
                Family::from_tag(tag.trim(), Some(a))
            }
        }
    }
}

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`, stored dense.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<T = f64> {
    dim: usize,
    c: Vec<T>,
}

impl<T: Scalar> StructureConstants<T> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            c: vec![T::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        &self.c[self.idx(i, j, k)]
    }

    /// Set `c_ij^k = v` and `c_ji^k = -v`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: T) {
        let a = self.idx(i, j, k);
        let b = self.idx(j, i, k);
        self.c[b] = -v.clone();
        self.c[a] = v;
    }

    /// Raw assignment of a single entry; may break antisymmetry.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, v: T) {
        let a = self.idx(i, j, k);
        self.c[a] = v;
    }

    pub fn bracket(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        let n = self.dim;
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let w = x[i].clone() * y[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    fn basis_vec(&self, i: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.dim];
        v[i] = T::one();
        v
    }

    /// Largest `|c_ij^k + c_ji^k|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = self.get(i, j, k).clone() + self.get(j, i, k).clone();
                    worst = worst.max(s.abs().to_f64_lossy());
                }
            }
        }
        worst
    }

    /// Components of `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` over all basis triples.
    pub fn jacobi_defects(&self) -> Vec<T> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (self.basis_vec(i), self.basis_vec(j), self.basis_vec(k));
                    let t1 = self.bracket(&self.bracket(&ei, &ej).unwrap(), &ek).unwrap();
                    let t2 = self.bracket(&self.bracket(&ej, &ek).unwrap(), &ei).unwrap();
                    let t3 = self.bracket(&self.bracket(&ek, &ei).unwrap(), &ej).unwrap();
                    for m in 0..n {
                        out.push(t1[m].clone() + t2[m].clone() + t3[m].clone());
                    }
                }
            }
        }
        out
    }

    /// Largest Jacobi defect magnitude.
    pub fn jacobi_residual(&self) -> f64 {
        self.jacobi_defects()
            .iter()
            .map(|v| v.abs().to_f64_lossy())
            .fold(0.0, f64::max)
    }

    pub fn satisfies_jacobi_exactly(&self) -> bool {
        self.jacobi_defects().iter().all(|v| v.is_zero())
    }

    /// Structure constants of the basis `{h e_1, …, h e_n}`, where `h` is
    /// given row-major.
    pub fn change_basis(&self, h: &[Vec<T>]) -> Result<Self> {
        let n = self.dim;
        if h.len() != n || h.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: h.len(),
            });
        }
        let hinv = invert(h)?;
        let col = |j: usize| -> Vec<T> { (0..n).map(|r| h[r][j].clone()).collect() };
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let b = self.bracket(&col(i), &col(j))?;
                for k in 0..n {
                    let mut acc = T::zero();
                    for (m, bm) in b.iter().enumerate() {
                        acc = acc + hinv[k][m].clone() * bm.clone();
                    }
                    out.set_raw(i, j, k, acc);
                }
            }
        }
        Ok(out)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> StructureConstants<U> {
        StructureConstants {
            dim: self.dim,
            c: self.c.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> StructureConstants<f64> {
        self.map(|v| v.to_f64_lossy())
    }
}

impl StructureConstants<f64> {
    /// Basis change by a 3×3 matrix.
    pub fn change_basis_mat(&self, h: &Mat3) -> Result<Self> {
        let det = h.determinant();
        if !det.is_finite() || det.abs() < crate::linalg::SINGULAR_TOL {
            return Err(Error::Singular { det });
        }
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| h[(i, j)]).collect())
            .collect();
        self.change_basis(&rows)
    }

    /// `ad(x)` as a matrix: column `j` holds `[x, e_j]`.
    pub fn ad(&self, x: &[f64]) -> Result<Mat3> {
        let mut m = Mat3::zeros();
        for j in 0..3 {
            let b = self.bracket(x, &self.basis_vec(j))?;
            for i in 0..3 {
                m[(i, j)] = b[i];
            }
        }
        Ok(m)
    }

    /// Largest `|φ[e_i,e_j] − [φe_i, φe_j]|` over basis pairs.
    pub fn automorphism_defect(&self, phi: &Mat3) -> f64 {
        let col = |j: usize| -> Vec<f64> { (0..3).map(|r| phi[(r, j)]).collect() };
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let lhs = self
                    .bracket(&self.basis_vec(i), &self.basis_vec(j))
                    .unwrap();
                let lhs = phi * crate::linalg::Vec3::from_column_slice(&lhs);
                let rhs = self.bracket(&col(i), &col(j)).unwrap();
                for k in 0..3 {
                    worst = worst.max((lhs[k] - rhs[k]).abs());
                }
            }
        }
        worst
    }
}

/// Gauss–Jordan inverse of a square matrix.
pub fn invert<T: Scalar>(h: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = h.len();
    let mut aug: Vec<Vec<T>> = h
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            row
        })
        .collect();
    let pivots = scalar::rref(&mut aug);
    if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return Err(Error::Singular { det: 0.0 });
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Structure constants of the given family in its standard basis.
pub fn make_family<T: Scalar>(f: &Family) -> Result<StructureConstants<T>> {
    f.validate()?;
    let one = T::one;
    let mut sc = StructureConstants::zero(3);
    match *f {
        Family::H3 => sc.set(0, 1, 2, one()),
        Family::R3 => {
            sc.set(0, 1, 1, one());
            sc.set(0, 1, 2, one());
            sc.set(0, 2, 2, one());
        }
        Family::R3a(a) => {
            sc.set(0, 1, 1, one());
            sc.set(0, 2, 2, T::from_f64_lossy(a));
        }
        Family::R31 => {
            sc.set(0, 1, 1, one());
            sc.set(0, 2, 2, one());
        }
        Family::R3pa(a) => {
            let a = T::from_f64_lossy(a);
            sc.set(0, 1, 1, a.clone());
            sc.set(0, 1, 2, -one());
            sc.set(0, 2, 1, one());
            sc.set(0, 2, 2, a);
        }
    }
    Ok(sc)
}

/// The bracket shape `[x1,x2] = a x2 + b x3`, `[x1,x3] = c x2 + d x3`, `[x2,x3] = 0`.
pub fn two_generator<T: Scalar>(a: T, b: T, c: T, d: T) -> StructureConstants<T> {
    let mut sc = StructureConstants::zero(3);
    sc.set(0, 1, 1, a);
    sc.set(0, 1, 2, b);
    sc.set(0, 2, 1, c);
    sc.set(0, 2, 2, d);
    sc
}
