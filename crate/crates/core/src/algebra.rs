//! Commutative non-associative algebras and the correspondence with
//! homogeneous quadratic systems.
//!
//! The structure tensor of the algebra is the coefficient tensor of the
//! system, read in both directions: `x_j . x_k = sum_i c^i_{jk} x_i` against
//! `dX_i/dt = sum_{jk} c^i_{jk} X_j X_k`. Variable changes `Y = M X` and the
//! contragredient basis changes act on the tensor by one and the same
//! transformation, which is what makes the correspondence functorial.

use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Mat};
use crate::scalar::Scalar;
use crate::system::QuadraticSystem;
use crate::tensor::{map_from_basis_rows, SymTensor};

pub type Element<K> = Vec<K>;

#[derive(Debug, Clone, PartialEq)]
pub struct Algebra<K> {
    tensor: SymTensor<K>,
}

impl<K: Scalar> Algebra<K> {
    pub fn new(n: usize, data: Vec<K>) -> Result<Self> {
        Ok(Algebra {
            tensor: SymTensor::new(n, data)?,
        })
    }

    pub fn from_tensor(tensor: SymTensor<K>) -> Self {
        Algebra { tensor }
    }

    pub fn zero(n: usize) -> Self {
        Algebra {
            tensor: SymTensor::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    pub fn tensor(&self) -> &SymTensor<K> {
        &self.tensor
    }

    pub fn multiply(&self, u: &[K], v: &[K]) -> Result<Element<K>> {
        if u.len() != self.n() || v.len() != self.n() {
            return Err(Error::DimensionMismatch("algebra product".into()));
        }
        Ok(self.tensor.contract(u, v))
    }

    /// Basis change with the map `M` of the pairing `x_k = sum_j M[j][k] y_j`
    /// (contragredient to the variable change `Y = M X`).
    pub fn change_basis(&self, map: &LinearMap<K>) -> Result<Algebra<K>> {
        Ok(Algebra {
            tensor: self.tensor.transform(map)?,
        })
    }

    /// Basis change given the new basis vectors directly: row `i` of `rows`
    /// holds the coordinates of `e_i` in the current basis.
    pub fn in_basis(&self, rows: &Mat<K>) -> Result<Algebra<K>> {
        self.change_basis(&map_from_basis_rows(rows)?)
    }

    /// The unit element, when one exists. Units are unique: the defining
    /// `n^2` linear equations either are inconsistent or pin down a point.
    pub fn find_unit(&self) -> Result<Option<Element<K>>> {
        if !K::EXACT {
            return Err(Error::ExactDomainRequired("find_unit"));
        }
        let n = self.n();
        // For each (j, k): sum_i c^k_{ij} u_i = delta_{kj}.
        let a = Mat::from_fn(n * n, n, |row, i| {
            let (j, k) = (row / n, row % n);
            self.tensor.get(k, i, j).clone()
        });
        let b: Vec<K> = (0..n * n)
            .map(|row| {
                if row / n == row % n {
                    K::one()
                } else {
                    K::zero()
                }
            })
            .collect();
        match a.solve(&b) {
            None => Ok(None),
            Some(u) => {
                debug_assert_eq!(a.nullspace_dim(), 0, "units are unique");
                Ok(Some(u))
            }
        }
    }

    /// Dimension of the derivation algebra `{D : D(xy) = D(x)y + xD(y)}`.
    ///
    /// Zero dimension is equivalent to the automorphism group being finite,
    /// which is the classification criterion for rank three.
    pub fn derivation_dimension(&self) -> Result<usize> {
        if !K::EXACT {
            return Err(Error::ExactDomainRequired("derivation_dimension"));
        }
        let n = self.n();
        // Unknowns d_{li} flattened as l*n + i; one equation per (j, k, l):
        // sum_i c^i_{jk} d_{li} - sum_p c^l_{pk} d_{pj} - sum_p c^l_{jp} d_{pk} = 0.
        let a = Mat::from_fn(n * n * n, n * n, |row, col| {
            let l_eq = row / (n * n);
            let j = (row / n) % n;
            let k = row % n;
            let (dl, di) = (col / n, col % n);
            let mut coeff = K::zero();
            if dl == l_eq {
                coeff = coeff.add(self.tensor.get(di, j, k));
            }
            if di == j {
                coeff = coeff.sub(self.tensor.get(l_eq, dl, k));
            }
            if di == k {
                coeff = coeff.sub(self.tensor.get(l_eq, j, dl));
            }
            coeff
        });
        Ok(a.nullspace_dim())
    }

    pub fn classify_rank3(&self) -> Result<Rank3Class> {
        if self.n() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "rank-3 classification needs dimension 3, got {}",
                self.n()
            )));
        }
        if self.find_unit()?.is_none() {
            return Ok(Rank3Class::NoUnit);
        }
        if self.derivation_dimension()? == 0 {
            Ok(Rank3Class::HypergeometricType)
        } else {
            Ok(Rank3Class::ElementaryType)
        }
    }
}

/// Outcome of the rank-3 classification: no unit, or a unit with a finite
/// (hypergeometric solvability) or infinite (elementary solvability)
/// automorphism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank3Class {
    NoUnit,
    HypergeometricType,
    ElementaryType,
}

impl Rank3Class {
    pub fn name(self) -> &'static str {
        match self {
            Rank3Class::NoUnit => "no-unit",
            Rank3Class::HypergeometricType => "hypergeometric",
            Rank3Class::ElementaryType => "elementary",
        }
    }
}

pub fn system_to_algebra<K: Scalar>(sys: &QuadraticSystem<K>) -> Algebra<K> {
    Algebra {
        tensor: sys.tensor().clone(),
    }
}

pub fn algebra_to_system<K: Scalar>(alg: &Algebra<K>) -> QuadraticSystem<K> {
    QuadraticSystem::from_tensor(alg.tensor.clone())
}
