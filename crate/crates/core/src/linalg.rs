//! Dense matrices and Gaussian elimination over a [`Scalar`] domain.
//!
//! Everything here is plain row-reduction. On exact domains the pivoting is
//! first-nonzero (deterministic, tolerance-free); on the complex-float domain
//! the largest-magnitude pivot is used.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Mat<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat<K> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = K::zero();
            for k in 0..self.cols {
                acc = acc.add(&self[(i, k)].mul(&rhs[(k, j)]));
            }
            acc
        })
    }

    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len(), "apply shape");
        (0..self.rows)
            .map(|i| crate::scalar::dot(self.row(i), v))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    fn pick_pivot(&self, col: usize, from_row: usize) -> Option<usize> {
        if K::EXACT {
            (from_row..self.rows).find(|&r| !self[(r, col)].is_zero())
        } else {
            (from_row..self.rows)
                .filter(|&r| !self[(r, col)].is_zero())
                .max_by(|&a, &b| {
                    let na = self[(a, col)].to_c64().norm();
                    let nb = self[(b, col)].to_c64().norm();
                    na.partial_cmp(&nb).unwrap_or(std::cmp::Ordering::Equal)
                })
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r >= self.rows {
                break;
            }
            let Some(p) = self.pick_pivot(c, r) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("pivot nonzero");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].mul(&inv);
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let t = self[(r, j)].mul(&f);
                        self[(i, j)] = self[(i, j)].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn nullspace_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![K::zero(); self.cols];
                v[fc] = K::one();
                for (ri, &pc) in pivots.iter().enumerate() {
                    v[pc] = m[(ri, fc)].neg();
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b`, or `None` when inconsistent. When the
    /// solution space is positive-dimensional the free variables are set to
    /// zero.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(self.rows, b.len(), "solve shape");
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a row [0 ... 0 | 1]
        }
        let mut x = vec![K::zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(ri, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat<K>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                K::one()
            } else {
                K::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    pub fn det(&self) -> K {
        assert_eq!(self.rows, self.cols, "det of non-square");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = K::one();
        for c in 0..n {
            let Some(p) = m.pick_pivot(c, c) else {
                return K::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = det.neg();
            }
            det = det.mul(&m[(c, c)]);
            let inv = m[(c, c)].inv().expect("pivot nonzero");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul(&inv);
                for j in c..n {
                    let t = m[(c, j)].mul(&f);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
        }
        det
    }
}

impl<K> std::ops::Index<(usize, usize)> for Mat<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Mat<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        &mut self.data[i * self.cols + j]
    }
}

/// A linear map with its invertibility decided (and the inverse cached) at
/// construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap<K> {
    mat: Mat<K>,
    inverse: Option<Mat<K>>,
}

impl<K: Scalar> LinearMap<K> {
    pub fn new(mat: Mat<K>) -> Self {
        let inverse = mat.inverse();
        LinearMap { mat, inverse }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap::new(Mat::identity(n))
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        LinearMap::new(Mat::from_rows(rows))
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Mat<K> {
        &self.mat
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn inverse_matrix(&self) -> Result<&Mat<K>> {
        self.inverse.as_ref().ok_or(Error::SingularMatrix)
    }

    pub fn inverse_map(&self) -> Result<LinearMap<K>> {
        let inv = self.inverse_matrix()?.clone();
        Ok(LinearMap {
            mat: inv,
            inverse: Some(self.mat.clone()),
        })
    }

    pub fn apply(&self, v: &[K]) -> Vec<K> {
        self.mat.apply(v)
    }

    pub fn compose(&self, inner: &LinearMap<K>) -> LinearMap<K> {
        LinearMap::new(self.mat.matmul(&inner.mat))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn m(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
    }

    #[test]
    fn solve_and_inverse_exact() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let b = vec![rat(3, 1), rat(5, 1), rat(9, 1)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
        let inv = a.inverse().unwrap();
        assert_eq!(a.matmul(&inv), Mat::identity(3));
        assert_eq!(a.det(), rat(18, 1));
    }

    #[test]
    fn inconsistent_system_detected() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(a.solve(&[rat(1, 1), rat(3, 1)]), None);
        assert!(a.solve(&[rat(1, 1), rat(2, 1)]).is_some());
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a.nullspace_dim(), 2);
        for v in a.nullspace() {
            assert!(a.apply(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn singular_map_has_no_inverse() {
        let lm = LinearMap::new(m(&[&[1, 2], &[2, 4]]));
        assert!(!lm.is_invertible());
        assert!(lm.inverse_matrix().is_err());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), rat(0, 1));
    }
}
