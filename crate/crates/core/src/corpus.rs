//! Built-in example systems.
//!
//! Systems stated as sums of derivatives (halphen1, level3) are stored in
//! derivative-solved form; the constructors invert the printed left-hand
//! sides exactly.

use crate::error::Result;
use crate::fuchsian::{build_gdhb, FuchsianData, GDHBSystem, HalphenABC};
use crate::linalg::Mat;
use crate::quadric::QuadricForm;
use crate::ratfunc::{Poly, RationalFn};
use crate::scalar::{rat, Eis, Rat, Scalar};
use crate::system::{riccati_system, QuadraticSystem};
use crate::tensor::SymTensor;

/// Euler's spinning-top field: `dX1 = 2 X2 X3` and cyclic.
pub fn euler_top<K: Scalar>() -> QuadraticSystem<K> {
    let mut t = SymTensor::zeros(3);
    let one = K::one();
    t.set_symmetric(0, 1, 2, one.clone());
    t.set_symmetric(1, 0, 2, one.clone());
    t.set_symmetric(2, 0, 1, one);
    QuadraticSystem::from_tensor(t)
}

/// Lotka-Volterra homogenized with an inert dummy variable:
/// `dN1 = a N1 N3 - b N1 N2`, `dN2 = -c N1 N3 - d N1 N2`, `dN3 = 0`.
pub fn lotka_volterra<K: Scalar>(a: K, b: K, c: K, d: K) -> QuadraticSystem<K> {
    let quad = {
        let mut t = SymTensor::zeros(2);
        t.add_monomial(0, 0, 1, &b.neg());
        t.add_monomial(1, 0, 1, &d.neg());
        t
    };
    let mut lin = Mat::zeros(2, 2);
    lin[(0, 0)] = a;
    lin[(1, 0)] = c.neg();
    crate::system::homogenize(&quad, &lin, &[K::zero(), K::zero()])
        .expect("dimensions agree")
}

/// Invert a system given as sums of derivatives: `lhs * X' = rhs(X)` where
/// each right-hand side is a list of quadratic monomials.
fn solve_printed_sums<K: Scalar>(
    lhs: Mat<K>,
    rhs: Vec<Vec<(usize, usize, K)>>,
) -> QuadraticSystem<K> {
    let n = lhs.rows();
    let inv = lhs.inverse().expect("printed left-hand sides are invertible");
    let mut t = SymTensor::zeros(n);
    for (eq, monomials) in rhs.iter().enumerate() {
        for (j, k, c) in monomials {
            for i in 0..n {
                if !inv[(i, eq)].is_zero() {
                    t.add_monomial(i, *j, *k, &inv[(i, eq)].mul(c));
                }
            }
        }
    }
    QuadraticSystem::from_tensor(t)
}

/// The first Halphen field, solved for derivatives from the printed sums
/// `X2' + X3' = 2 X2 X3` (and cyclic): `dX1 = X1 X2 + X1 X3 - X2 X3` etc.
pub fn halphen1<K: Scalar>() -> QuadraticSystem<K> {
    let one = K::one;
    let two = K::from_i64(2);
    let lhs = Mat::from_rows(vec![
        vec![K::zero(), one(), one()],
        vec![one(), K::zero(), one()],
        vec![one(), one(), K::zero()],
    ]);
    solve_printed_sums(
        lhs,
        vec![
            vec![(1, 2, two.clone())],
            vec![(0, 2, two.clone())],
            vec![(0, 1, two)],
        ],
    )
}

/// The second Halphen field for given `(a, b, c)`.
pub fn halphen2<K: Scalar>(abc: &HalphenABC<K>) -> QuadraticSystem<K> {
    crate::fuchsian::halphen2_from_abc(abc)
}

/// The `k = 0` Airy-solvable field in variables `(X, W, V)`:
///   dX = X^2 + (V-X)(W-X)
///   dW = W^2 - (X-W)^2 + (V-X)(W-X)
///   dV = V^2 + (W-X)^2 - (X-V)^2 + (V-X)(W-X)
pub fn chazy_k0_system<K: Scalar>() -> QuadraticSystem<K> {
    let mut t = SymTensor::zeros(3);
    let add_product = |t: &mut SymTensor<K>, i: usize, p: &[(usize, K)], q: &[(usize, K)], s: &K| {
        for (u, cu) in p {
            for (v, cv) in q {
                t.add_monomial(i, *u, *v, &cu.mul(cv).mul(s));
            }
        }
    };
    let one = K::one();
    let neg = K::one().neg();
    // (V - X), (W - X), (X - W), (X - V) as sparse linear forms over (X,W,V)=(0,1,2)
    let vx = [(2usize, one.clone()), (0usize, neg.clone())];
    let wx = [(1usize, one.clone()), (0usize, neg.clone())];
    let xw = [(0usize, one.clone()), (1usize, neg.clone())];
    let xv = [(0usize, one.clone()), (2usize, neg.clone())];
    for i in 0..3 {
        t.add_monomial(i, i, i, &one);
        add_product(&mut t, i, &vx, &wx, &one);
    }
    add_product(&mut t, 1, &xw, &xw, &neg);
    add_product(&mut t, 2, &wx, &wx, &one);
    add_product(&mut t, 2, &xv, &xv, &neg);
    QuadraticSystem::from_tensor(t)
}

/// The level-three Halphen system over the Eisenstein rationals, solved for
/// derivatives from the printed sums, together with its quadric relation
/// `w^2 (XZ + YW) + w (XW + YZ) + (XY + ZW) = 0` in variables
/// `(W, X, Y, Z)`.
pub fn level3_system() -> (QuadraticSystem<Eis>, QuadricForm<Eis>) {
    let one = || Eis::one();
    let zero = || Eis::zero();
    let lhs = Mat::from_rows(vec![
        vec![one(), one(), one(), zero()],
        vec![one(), zero(), one(), one()],
        vec![one(), one(), zero(), one()],
        vec![zero(), one(), one(), one()],
    ]);
    // (W, X, Y, Z) = variables (0, 1, 2, 3)
    let pair = |a: usize, b: usize| (a, b, Eis::one());
    let rhs = vec![
        vec![pair(0, 1), pair(1, 2), pair(2, 0)], // WX + XY + YW
        vec![pair(0, 2), pair(2, 3), pair(3, 0)], // WY + YZ + ZW
        vec![pair(0, 1), pair(1, 3), pair(3, 0)], // WX + XZ + ZW
        vec![pair(1, 2), pair(2, 3), pair(3, 1)], // XY + YZ + ZX
    ];
    let system = solve_printed_sums(lhs, rhs);
    let w = Eis::omega();
    let w2 = w.mul(&w);
    let quadric = QuadricForm::from_monomials(
        4,
        &[
            (1, 3, w2.clone()), // XZ
            (2, 0, w2),         // YW
            (1, 0, w.clone()),  // XW
            (2, 3, w),          // YZ
            (1, 2, Eis::one()), // XY
            (3, 0, Eis::one()), // ZW
        ],
    );
    (system, quadric)
}

/// Coefficients `(p, q)` of the level-three Picard-Fuchs equation
/// `(1 - t^3) y'' - 3 t^2 y' - t y = 0` in the form `y'' + p y' + q y = 0`.
pub fn level3_picard_fuchs() -> (RationalFn<Eis>, RationalFn<Eis>) {
    let one_minus_t3 = Poly::new(vec![
        Eis::one(),
        Eis::zero(),
        Eis::zero(),
        Eis::one().neg(),
    ]);
    let p = RationalFn::new(
        Poly::new(vec![Eis::zero(), Eis::zero(), Eis::from_i64(-3)]),
        one_minus_t3.clone(),
    )
    .unwrap();
    let q = RationalFn::new(
        Poly::new(vec![Eis::zero(), Eis::one().neg()]),
        one_minus_t3,
    )
    .unwrap();
    (p, q)
}

/// Fuchsian data of the level-three normal-form potential: poles at the cube
/// roots of unity.
pub fn level3_fuchsian_data() -> Result<FuchsianData<Eis>> {
    let (p, q) = level3_picard_fuchs();
    let potential = crate::fuchsian::normal_form_reduce(&p, &q);
    let w = Eis::omega();
    let poles = vec![Eis::one(), w.clone(), w.mul(&w)];
    crate::fuchsian::fuchsian_from_q(&potential, &poles)
}

/// The matrix Riccati field for `A = I`.
pub fn riccati_identity<K: Scalar>() -> QuadraticSystem<K> {
    riccati_system(&Mat::identity(2)).expect("identity is symmetric")
}

/// Parameters of the shipped round-trip gDHB fixture.
pub fn roundtrip_parameters() -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    (
        vec![rat(1, 4), rat(-1, 3), rat(2, 1)],
        vec![rat(1, 2), rat(-1, 1)],
        vec![rat(0, 1), rat(1, 1), rat(-1, 1)],
    )
}

/// A rank-4 gDHB fixture with known parameters, used by the recognition
/// round-trip tests and shipped through the corpus.
pub fn roundtrip_gdhb() -> GDHBSystem<Rat> {
    let (alpha, beta, poles) = roundtrip_parameters();
    let fd = FuchsianData::new(poles, alpha, beta).expect("valid fixture");
    build_gdhb(&fd).expect("fixture builds")
}

/// The Euler algebra padded to four dimensions with an inert coordinate;
/// no specialization of the padded family has a unit.
pub fn padded_euler() -> (QuadraticSystem<Rat>, QuadricForm<Rat>) {
    let e3 = euler_top::<Rat>();
    let mut t = SymTensor::zeros(4);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if !e3.tensor().get(i, j, k).is_zero() {
                    t.set_symmetric(i, j, k, e3.tensor().get(i, j, k).clone());
                }
            }
        }
    }
    // Any nonzero quadric with zero diagonal works for the counterexample.
    let q = QuadricForm::from_monomials(
        4,
        &[(0, 1, rat(1, 1)), (2, 3, rat(-1, 1))],
    );
    (QuadraticSystem::from_tensor(t), q)
}

/// The generic `(a, b, c) = (1, 2, 3)` Halphen parameters.
pub fn generic_abc<K: Scalar>() -> HalphenABC<K> {
    HalphenABC {
        a: K::from_i64(1),
        b: K::from_i64(2),
        c: K::from_i64(3),
    }
}

/// The theta-function parameters `a = b = c = -1/8`.
pub fn theta_abc<K: Scalar>() -> HalphenABC<K> {
    HalphenABC {
        a: K::ratio(-1, 8),
        b: K::ratio(-1, 8),
        c: K::ratio(-1, 8),
    }
}
