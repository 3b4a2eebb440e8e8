//! Dense exact matrices over `Q(i)`: fraction-free elimination over `Z[i]`
//! for ranks and particular solutions, field RREF for kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::function_algebra::{GaussianInteger, GaussianRational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

/// Why `Mx = b` has no solution: ranks differ, and `left_null` is a vector
/// `y` with `yᵀM = 0` and `yᵀb ≠ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearObstruction {
    pub rank: usize,
    pub rank_augmented: usize,
    pub left_null: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(rows: usize, columns: Vec<Vec<GaussianRational>>) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.into_iter().enumerate() {
                m.data[i * cols + j] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    fn integer_rows(&self, extra: Option<&[GaussianRational]>) -> Vec<Vec<GaussianInteger>> {
        (0..self.rows)
            .map(|i| {
                let mut row: Vec<&GaussianRational> = self.row(i).iter().collect();
                if let Some(b) = extra {
                    row.push(&b[i]);
                }
                let scale = row
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator_lcm()));
                row.iter().map(|v| v.to_gaussian_integer(&scale)).collect()
            })
            .collect()
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss(self.integer_rows(None)).1.len()
    }

    /// A particular solution of `Mx = b` with every free coordinate zero, or
    /// an obstruction. Solutions are re-checked by multiplication.
    pub fn solve(&self, b: &[GaussianRational]) -> Result<Vec<GaussianRational>, LinearObstruction> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let (ech, pivots) = bareiss(self.integer_rows(Some(b)));
        if pivots.last() == Some(&self.cols) {
            let rank = pivots.len() - 1;
            let left_null = self
                .transpose()
                .kernel()
                .into_iter()
                .find(|y| !dot(y, b).is_zero())
                .expect("inconsistent system has a separating left null vector");
            return Err(LinearObstruction {
                rank,
                rank_augmented: rank + 1,
                left_null,
            });
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate().rev() {
            let row = &ech[r];
            let mut acc = row[self.cols].to_rational();
            for &q in &pivots[r + 1..] {
                if !row[q].is_zero() {
                    acc -= &(&row[q].to_rational() * &x[q]);
                }
            }
            x[p] = &acc / &row[p].to_rational();
        }
        assert_eq!(self.mul_vec(&x), b, "particular solution failed verification");
        Ok(x)
    }

    /// Reduced row echelon form over the field and its pivot columns.
    pub fn rref(&self) -> (Vec<Vec<GaussianRational>>, Vec<usize>) {
        let mut m: Vec<Vec<GaussianRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].inverse().expect("nonzero pivot");
            for v in m[r].iter_mut().skip(c) {
                *v = &*v * &inv;
            }
            for i in 0..self.rows {
                if i == r || m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                for j in c..self.cols {
                    if !m[r][j].is_zero() {
                        let d = &f * &m[r][j];
                        m[i][j] -= &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank_rref(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<GaussianRational>> {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![GaussianRational::zero(); self.cols];
                v[f] = GaussianRational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[r][f].clone();
                }
                v
            })
            .collect()
    }
}

pub fn dot(a: &[GaussianRational], b: &[GaussianRational]) -> GaussianRational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(GaussianRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Fraction-free row echelon form over `Z[i]`; returns the echelon rows and
/// pivot columns. Every division is exact.
pub fn bareiss(mut m: Vec<Vec<GaussianInteger>>) -> (Vec<Vec<GaussianInteger>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = GaussianInteger::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let t = pivot_row[c].mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = t.exact_div(&prev).expect("fraction-free step divides exactly");
            }
            row[c] = GaussianInteger::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}
