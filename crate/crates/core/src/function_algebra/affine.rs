//! Invertible affine maps `φ(x) = A x + b` of `R^d` with exact inverses.

use std::fmt;

use num_traits::{One, Zero};

use super::poly::PolyFunction;
use super::scalar::GaussianRational;
use crate::error::{AlgebraError, Result};

pub type Matrix = Vec<Vec<GaussianRational>>;

/// An affine diffeomorphism together with its inverse `φ⁻¹(y) = C y + c`,
/// `C = A⁻¹`, `c = -C b`. The inverse is always recomputed, never supplied.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineDiffeo {
    matrix: Matrix,
    offset: Vec<GaussianRational>,
    inverse_matrix: Matrix,
    inverse_offset: Vec<GaussianRational>,
}

pub fn identity_matrix(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = GaussianRational::zero();
                    for (k, bk) in b.iter().enumerate() {
                        s += &(&a[i][k] * &bk[j]);
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[GaussianRational]) -> Vec<GaussianRational> {
    a.iter()
        .map(|row| {
            let mut s = GaussianRational::zero();
            for (x, y) in row.iter().zip(v) {
                s += &(x * y);
            }
            s
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

/// Gauss-Jordan inverse over `Q(i)`.
pub fn mat_inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut work: Vec<Vec<GaussianRational>> = a
        .iter()
        .zip(identity_matrix(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].is_zero())
            .ok_or(AlgebraError::Singular)?;
        work.swap(col, pivot);
        let inv = work[col][col].inverse()?;
        for v in work[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for k in 0..2 * n {
                let delta = &factor * &work[col][k];
                work[r][k] -= &delta;
            }
        }
    }
    Ok(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl AffineDiffeo {
    pub fn new(matrix: Matrix, offset: Vec<GaussianRational>) -> Result<Self> {
        let dim = offset.len();
        if matrix.len() != dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        let inverse_matrix = mat_inverse(&matrix)?;
        let inverse_offset: Vec<_> = mat_vec(&inverse_matrix, &offset).iter().map(|v| -v).collect();
        let phi = Self {
            matrix,
            offset,
            inverse_matrix,
            inverse_offset,
        };
        debug_assert_eq!(mat_mul(&phi.matrix, &phi.inverse_matrix), identity_matrix(dim));
        Ok(phi)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: identity_matrix(dim),
            offset: vec![GaussianRational::zero(); dim],
            inverse_matrix: identity_matrix(dim),
            inverse_offset: vec![GaussianRational::zero(); dim],
        }
    }

    /// `x ↦ s x + t` in dimension 1.
    pub fn scalar(s: GaussianRational, t: GaussianRational) -> Result<Self> {
        Self::new(vec![vec![s]], vec![t])
    }

    pub fn linear(matrix: Matrix) -> Result<Self> {
        let dim = matrix.len();
        Self::new(matrix, vec![GaussianRational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn offset(&self) -> &[GaussianRational] {
        &self.offset
    }

    /// `C = A⁻¹`, the Jacobian of `φ⁻¹`.
    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse_matrix
    }

    pub fn inverse_offset(&self) -> &[GaussianRational] {
        &self.inverse_offset
    }

    pub fn is_identity(&self) -> bool {
        self.offset.iter().all(Zero::is_zero) && self.matrix == identity_matrix(self.dim())
    }

    pub fn is_linear_identity(&self) -> bool {
        self.matrix == identity_matrix(self.dim())
    }

    pub fn apply(&self, x: &[GaussianRational]) -> Vec<GaussianRational> {
        mat_vec(&self.matrix, x)
            .iter()
            .zip(&self.offset)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `(φ∘ψ)(x) = φ(ψ(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let matrix = mat_mul(&self.matrix, &other.matrix);
        let offset = self.apply(&other.offset);
        Self::new(matrix, offset)
    }

    pub fn invert(&self) -> Self {
        Self {
            matrix: self.inverse_matrix.clone(),
            offset: self.inverse_offset.clone(),
            inverse_matrix: self.matrix.clone(),
            inverse_offset: self.offset.clone(),
        }
    }

    /// The polynomials `(A x + b)_j`, used to pull functions back along `φ`.
    pub fn coordinate_forms(&self) -> Vec<PolyFunction> {
        let d = self.dim();
        (0..d)
            .map(|j| {
                let mut f = PolyFunction::constant(d, self.offset[j].clone());
                for k in 0..d {
                    f.add_scaled(&PolyFunction::var(d, k), &self.matrix[j][k]);
                }
                f
            })
            .collect()
    }
}

impl fmt::Debug for AffineDiffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Affine(A={:?}, b={:?})", self.matrix, self.offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_algebra::poly::MultiIndex;

    fn q(n: i64) -> GaussianRational {
        n.into()
    }

    fn aff(s: i64, t: i64) -> AffineDiffeo {
        AffineDiffeo::scalar(q(s), q(t)).unwrap()
    }

    #[test]
    fn compose_examples() {
        let phi = aff(3, -2);
        let id = AffineDiffeo::identity(1);
        assert_eq!(phi.compose(&id).unwrap(), phi);
        assert!(aff(-1, 0).compose(&aff(-1, 0)).unwrap().is_identity());
        assert_eq!(aff(2, 0).compose(&aff(1, 1)).unwrap(), aff(2, 2));
    }

    #[test]
    fn invert_examples() {
        assert!(AffineDiffeo::identity(2).invert().is_identity());
        let inv = aff(2, 1).invert();
        assert_eq!(
            inv,
            AffineDiffeo::scalar(GaussianRational::from_ratio(1, 2), GaussianRational::from_ratio(-1, 2))
                .unwrap()
        );
        assert!(aff(2, 1).compose(&inv).unwrap().is_identity());
        assert_eq!(AffineDiffeo::scalar(q(0), q(0)), Err(AlgebraError::Singular));
    }

    #[test]
    fn pullback_examples() {
        let x = PolyFunction::var(1, 0);
        let x2 = &x * &x;
        assert_eq!(x2.compose_affine(&aff(-1, 0)).unwrap(), x2);
        assert_eq!(x.compose_affine(&aff(1, 1)).unwrap(), &x + &PolyFunction::one(1));
        let swap = AffineDiffeo::linear(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let x1x2 = &PolyFunction::var(2, 0) * &PolyFunction::var(2, 1);
        assert_eq!(x1x2.compose_affine(&swap).unwrap(), x1x2);
    }

    #[test]
    fn complex_entries() {
        let rot = AffineDiffeo::scalar(GaussianRational::i(), q(1)).unwrap();
        let x = PolyFunction::var(1, 0);
        // (i x + 1)^2 = -x^2 + 2i x + 1
        let got = (&x * &x).compose_affine(&rot).unwrap();
        let want = PolyFunction::from_terms(
            1,
            vec![
                (vec![2], q(-1)),
                (vec![1], &GaussianRational::i() * &q(2)),
                (vec![0], q(1)),
            ],
        )
        .unwrap();
        assert_eq!(got, want);
        assert_eq!(got.coeff(&MultiIndex(vec![2])), q(-1));
    }
}
