//! Homogeneous quadratic vector fields `dX_i/dt = sum a^i_{jk} X_j X_k`.

use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Mat};
use crate::scalar::Scalar;
use crate::tensor::SymTensor;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSystem<K> {
    tensor: SymTensor<K>,
}

impl<K: Scalar> QuadraticSystem<K> {
    /// Validates the `j <-> k` symmetry of the coefficient array.
    pub fn new(n: usize, data: Vec<K>) -> Result<Self> {
        Ok(QuadraticSystem {
            tensor: SymTensor::new(n, data)?,
        })
    }

    pub fn from_tensor(tensor: SymTensor<K>) -> Self {
        QuadraticSystem { tensor }
    }

    pub fn zero(n: usize) -> Self {
        QuadraticSystem {
            tensor: SymTensor::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    pub fn tensor(&self) -> &SymTensor<K> {
        &self.tensor
    }

    pub fn into_tensor(self) -> SymTensor<K> {
        self.tensor
    }

    /// Right-hand side of the ODE at a point.
    pub fn evaluate_field(&self, x: &[K]) -> Result<Vec<K>> {
        self.tensor.evaluate(x)
    }

    /// Variable change `Y = M X`; the transformed field generates the same
    /// flow in the new coordinates.
    pub fn change_vars(&self, map: &LinearMap<K>) -> Result<QuadraticSystem<K>> {
        Ok(QuadraticSystem {
            tensor: self.tensor.transform(map)?,
        })
    }
}

/// Homogenize an inhomogeneous quadratic system with a dummy variable.
///
/// Input: `dX_i/dt = quad_i(X) + lin_i(X) + const_i` in `n` variables.
/// Output: `n + 1` variables where the linear part is multiplied by the
/// dummy, the constant part by its square, and the dummy itself is inert;
/// restricting to dummy = 1 recovers the original right-hand sides.
pub fn homogenize<K: Scalar>(
    quadratic: &SymTensor<K>,
    linear: &Mat<K>,
    constant: &[K],
) -> Result<QuadraticSystem<K>> {
    let n = quadratic.n();
    if linear.rows() != n || linear.cols() != n || constant.len() != n {
        return Err(Error::DimensionMismatch(
            "homogenize parts disagree on dimension".into(),
        ));
    }
    let mut t = SymTensor::zeros(n + 1);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !quadratic.get(i, j, k).is_zero() {
                    t.set_symmetric(i, j, k, quadratic.get(i, j, k).clone());
                }
            }
            if !linear[(i, j)].is_zero() {
                t.add_monomial(i, j, n, &linear[(i, j)]);
            }
        }
        if !constant[i].is_zero() {
            t.add_monomial(i, n, n, &constant[i]);
        }
    }
    Ok(QuadraticSystem { tensor: t })
}

/// The matrix Riccati flow `dX/dt = X A X` on symmetric 2x2 matrices,
/// written in the coordinates `(X11, X12, X22)`.
pub fn riccati_system<K: Scalar>(a: &Mat<K>) -> Result<QuadraticSystem<K>> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch("A must be 2x2".into()));
    }
    if a[(0, 1)] != a[(1, 0)] {
        return Err(Error::MatrixNotSymmetric(1, 0));
    }
    let (a11, a12, a22) = (&a[(0, 0)], &a[(0, 1)], &a[(1, 1)]);
    // With X = [[x, y], [y, z]]:
    //   (XAX)_11 = a11 x^2 + 2 a12 x y + a22 y^2
    //   (XAX)_12 = a11 x y + a12 y^2 + a12 x z + a22 y z
    //   (XAX)_22 = a11 y^2 + 2 a12 y z + a22 z^2
    let mut t = SymTensor::zeros(3);
    let two = K::from_i64(2);
    t.add_monomial(0, 0, 0, a11);
    t.add_monomial(0, 0, 1, &two.mul(a12));
    t.add_monomial(0, 1, 1, a22);
    t.add_monomial(1, 0, 1, a11);
    t.add_monomial(1, 1, 1, a12);
    t.add_monomial(1, 0, 2, a12);
    t.add_monomial(1, 1, 2, a22);
    t.add_monomial(2, 1, 1, a11);
    t.add_monomial(2, 1, 2, &two.mul(a12));
    t.add_monomial(2, 2, 2, a22);
    Ok(QuadraticSystem { tensor: t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::{rat, Rat};

    #[test]
    fn euler_field_values() {
        let sys = corpus::euler_top::<Rat>();
        let v = sys
            .evaluate_field(&[rat(1, 1), rat(1, 1), rat(1, 1)])
            .unwrap();
        assert_eq!(v, vec![rat(2, 1), rat(2, 1), rat(2, 1)]);
        let zero = sys.evaluate_field(&vec![rat(0, 1); 3]).unwrap();
        assert!(zero.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn field_is_degree_two_homogeneous() {
        let sys = corpus::euler_top::<Rat>();
        let x = [rat(2, 3), rat(-1, 2), rat(5, 1)];
        let lam = rat(7, 4);
        let scaled: Vec<Rat> = x.iter().map(|c| c.mul(&lam)).collect();
        let lhs = sys.evaluate_field(&scaled).unwrap();
        let lam2 = lam.mul(&lam);
        let rhs: Vec<Rat> = sys
            .evaluate_field(&x)
            .unwrap()
            .iter()
            .map(|c| c.mul(&lam2))
            .collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn riccati_identity_matches_expansion() {
        let sys = riccati_system(&Mat::<Rat>::identity(2)).unwrap();
        // dx = x^2 + y^2, dy = y(x+z), dz = y^2 + z^2
        let v = sys
            .evaluate_field(&[rat(1, 1), rat(2, 1), rat(3, 1)])
            .unwrap();
        assert_eq!(v, vec![rat(5, 1), rat(8, 1), rat(13, 1)]);
        // A = 0 gives the zero field.
        let z = riccati_system(&Mat::<Rat>::zeros(2, 2)).unwrap();
        assert!(z.tensor().is_zero());
    }

    #[test]
    fn riccati_rejects_asymmetric_a() {
        let mut a = Mat::<Rat>::zeros(2, 2);
        a[(0, 1)] = rat(1, 1);
        assert!(riccati_system(&a).is_err());
    }

    #[test]
    fn homogenize_recovers_original_at_dummy_one() {
        // dx = x^2 + 2x + 3, one variable.
        let mut quad = SymTensor::<Rat>::zeros(1);
        quad.add_monomial(0, 0, 0, &rat(1, 1));
        let mut lin = Mat::zeros(1, 1);
        lin[(0, 0)] = rat(2, 1);
        let sys = homogenize(&quad, &lin, &[rat(3, 1)]).unwrap();
        assert_eq!(sys.n(), 2);
        let v = sys.evaluate_field(&[rat(5, 1), rat(1, 1)]).unwrap();
        assert_eq!(v[0], rat(38, 1)); // 25 + 10 + 3
        assert_eq!(v[1], rat(0, 1)); // dummy is inert
    }

    #[test]
    fn homogenize_lotka_volterra_matches_printed_form() {
        let sys = corpus::lotka_volterra(rat(2, 1), rat(3, 1), rat(5, 1), rat(7, 1));
        // dN1 = 2 N1 N3 - 3 N1 N2, dN2 = -5 N1 N3 - 7 N1 N2, dN3 = 0
        let v = sys
            .evaluate_field(&[rat(1, 1), rat(1, 1), rat(1, 1)])
            .unwrap();
        assert_eq!(v, vec![rat(-1, 1), rat(-12, 1), rat(0, 1)]);
        let w = sys
            .evaluate_field(&[rat(1, 1), rat(2, 1), rat(1, 1)])
            .unwrap();
        assert_eq!(w, vec![rat(2 - 6, 1), rat(-5 - 14, 1), rat(0, 1)]);
    }
}
