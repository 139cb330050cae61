//! Dense rank-3 tensors `t^i_{jk}`, symmetric in the lower index pair.
//!
//! The same tensor encodes a homogeneous quadratic vector field and the
//! structure constants of the matching commutative algebra, so both live on
//! top of this type.

use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Mat};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor<K> {
    n: usize,
    data: Vec<K>,
}

impl<K: Scalar> SymTensor<K> {
    /// Build from a dense `n^3` row-major array, validating `t^i_{jk} = t^i_{kj}`.
    pub fn new(n: usize, data: Vec<K>) -> Result<Self> {
        if data.len() != n * n * n {
            return Err(Error::DimensionMismatch(format!(
                "tensor has {} entries, expected {}",
                data.len(),
                n * n * n
            )));
        }
        let t = SymTensor { n, data };
        for i in 0..n {
            for j in 0..n {
                for k in 0..j {
                    if t.get(i, j, k) != t.get(i, k, j) {
                        return Err(Error::NotSymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn zeros(n: usize) -> Self {
        SymTensor {
            n,
            data: vec![K::zero(); n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> K) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data.push(f(i, j, k));
                }
            }
        }
        SymTensor::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &K {
        &self.data[self.idx(i, j, k)]
    }

    pub fn set_symmetric(&mut self, i: usize, j: usize, k: usize, v: K) {
        let a = self.idx(i, j, k);
        let b = self.idx(i, k, j);
        self.data[a] = v.clone();
        self.data[b] = v;
    }

    /// Add the monomial `c * X_j X_k` to component `i`, splitting the
    /// coefficient over the symmetric pair when `j != k`.
    pub fn add_monomial(&mut self, i: usize, j: usize, k: usize, c: &K) {
        if j == k {
            let a = self.idx(i, j, j);
            self.data[a] = self.data[a].add(c);
        } else {
            let half = c.mul(&K::ratio(1, 2));
            let a = self.idx(i, j, k);
            let b = self.idx(i, k, j);
            self.data[a] = self.data[a].add(&half);
            self.data[b] = self.data[b].add(&half);
        }
    }

    pub fn entries(&self) -> &[K] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Quadratic evaluation: component `i` is `sum_jk t^i_{jk} x_j x_k`.
    pub fn evaluate(&self, x: &[K]) -> Result<Vec<K>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, tensor dimension is {}",
                x.len(),
                self.n
            )));
        }
        Ok(self.contract(x, x))
    }

    /// Bilinear contraction `sum_jk t^i_{jk} u_j v_k` in each component.
    pub fn contract(&self, u: &[K], v: &[K]) -> Vec<K> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..n {
                    if u[j].is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        if v[k].is_zero() {
                            continue;
                        }
                        acc = acc.add(&self.get(i, j, k).mul(&u[j]).mul(&v[k]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Push the tensor through an invertible map:
    /// `t'^j_{pq} = sum M[j][i] t^i_{kl} Minv[k][p] Minv[l][q]`.
    ///
    /// This is simultaneously the variable change `Y = M X` on vector fields
    /// and the matching contragredient basis change on algebras.
    pub fn transform(&self, map: &LinearMap<K>) -> Result<SymTensor<K>> {
        let n = self.n;
        if map.n() != n {
            return Err(Error::DimensionMismatch(
                "map dimension differs from tensor dimension".into(),
            ));
        }
        let m = map.matrix();
        let minv = map.inverse_matrix()?;
        // Stage 1: s^i_{pq} = t^i_{kl} Minv[k][p] Minv[l][q]
        let mut stage = vec![K::zero(); n * n * n];
        for i in 0..n {
            for p in 0..n {
                for q in 0..n {
                    let mut acc = K::zero();
                    for k in 0..n {
                        if minv[(k, p)].is_zero() {
                            continue;
                        }
                        for l in 0..n {
                            if minv[(l, q)].is_zero() {
                                continue;
                            }
                            acc = acc.add(&self.get(i, k, l).mul(&minv[(k, p)]).mul(&minv[(l, q)]));
                        }
                    }
                    stage[(i * n + p) * n + q] = acc;
                }
            }
        }
        // Stage 2: contract the upper index with M.
        SymTensor::from_fn(n, |j, p, q| {
            let mut acc = K::zero();
            for i in 0..n {
                if m[(j, i)].is_zero() {
                    continue;
                }
                acc = acc.add(&m[(j, i)].mul(&stage[(i * n + p) * n + q]));
            }
            acc
        })
    }

    pub fn to_c64_tensor(&self) -> crate::numeric::C64Tensor {
        crate::numeric::C64Tensor::new(
            self.n,
            self.data.iter().map(|c| c.to_c64()).collect(),
        )
    }
}

/// Convert a new-basis-rows matrix (`e_i = sum_k rows[i][k] x_k`) into the
/// [`LinearMap`] that [`SymTensor::transform`] expects, namely `rows^-T`.
pub fn map_from_basis_rows<K: Scalar>(rows: &Mat<K>) -> Result<LinearMap<K>> {
    let inv_t = rows.inverse().ok_or(Error::SingularMatrix)?.transpose();
    let lm = LinearMap::new(inv_t);
    debug_assert!(lm.is_invertible());
    Ok(lm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    #[test]
    fn symmetry_is_validated() {
        let mut data = vec![rat(0, 1); 8];
        data[1] = rat(1, 1); // t^0_{01} without the mirror entry
        assert!(matches!(
            SymTensor::new(2, data),
            Err(Error::NotSymmetric { i: 0, j: 1, k: 0 })
        ));
    }

    #[test]
    fn monomial_builder_splits_symmetrically() {
        let mut t: SymTensor<Rat> = SymTensor::zeros(2);
        t.add_monomial(0, 0, 1, &rat(3, 1));
        assert_eq!(*t.get(0, 0, 1), rat(3, 2));
        assert_eq!(*t.get(0, 1, 0), rat(3, 2));
        // evaluate at (1, 1): 3*X0*X1 -> 3
        assert_eq!(t.evaluate(&[rat(1, 1), rat(1, 1)]).unwrap()[0], rat(3, 1));
    }

    #[test]
    fn identity_transform_is_identity() {
        let mut t: SymTensor<Rat> = SymTensor::zeros(3);
        t.add_monomial(0, 1, 2, &rat(2, 1));
        t.add_monomial(2, 0, 0, &rat(-1, 1));
        let id = LinearMap::identity(3);
        assert_eq!(t.transform(&id).unwrap(), t);
    }
}
