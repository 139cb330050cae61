//! Numeric-lab checks beyond the acceptance pipelines: homogenization
//! against direct integration, closed forms, and conservation.

mod common;

use gdhb_core::corpus;
use gdhb_core::fuchsian::{gdhb_tensor, GDHBSystem};
use gdhb_core::linalg::Mat;
use gdhb_core::numeric::{
    integrate_quadratic, invariance_drift, gdhb_residual, BrioschiSamples, IntegratorOpts,
};
use gdhb_core::quadric::{LinearForm, QuadricForm};
use gdhb_core::scalar::{rat, Rat, Scalar};
use gdhb_core::system::{homogenize, QuadraticSystem};
use gdhb_core::tensor::SymTensor;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn homogenized_riccati_matches_tangent() {
    // dx/dt = 1 + x^2 homogenizes to dx = x^2 + y^2, dy = 0; from x(0) = 1,
    // y(0) = 1 the projection is tan(t + pi/4).
    let quad = {
        let mut t = SymTensor::<Rat>::zeros(1);
        t.add_monomial(0, 0, 0, &rat(1, 1));
        t
    };
    let sys = homogenize(&quad, &Mat::zeros(1, 1), &[rat(1, 1)]).unwrap();
    assert_eq!(sys.n(), 2);
    let traj = integrate_quadratic(
        &sys,
        &[c(1.0), c(1.0)],
        (0.0, 0.5),
        21,
        &IntegratorOpts::default(),
        None,
    )
    .unwrap();
    assert!(!traj.truncated);
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let exact = (t + std::f64::consts::FRAC_PI_4).tan();
        assert!(
            (x[0] - c(exact)).norm() <= 1e-9 * exact.abs().max(1.0),
            "tangent mismatch at t = {t}"
        );
        assert!((x[1] - c(1.0)).norm() < 1e-12, "dummy must stay at 1");
    }
}

/// Fixed-step RK4 on a closure; the independent oracle for homogenization.
fn rk4_oracle(
    f: &dyn Fn(&[f64]) -> Vec<f64>,
    mut x: Vec<f64>,
    t1: f64,
    steps: usize,
) -> Vec<f64> {
    let h = t1 / steps as f64;
    for _ in 0..steps {
        let k1 = f(&x);
        let mid1: Vec<f64> = x.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
        let k2 = f(&mid1);
        let mid2: Vec<f64> = x.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
        let k3 = f(&mid2);
        let end: Vec<f64> = x.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
        let k4 = f(&end);
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    x
}

#[test]
fn homogenization_projects_onto_original_dynamics() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let n = rng.gen_range(2usize..=3);
        let mut quad = SymTensor::<Rat>::zeros(n);
        let mut lin = Mat::<Rat>::zeros(n, n);
        let mut cst = vec![rat(0, 1); n];
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    quad.set_symmetric(i, j, k, rat(rng.gen_range(-2i64..=2), 4));
                }
                lin[(i, j)] = rat(rng.gen_range(-2i64..=2), 4);
            }
            cst[i] = rat(rng.gen_range(-2i64..=2), 4);
        }
        let hom = homogenize(&quad, &lin, &cst).unwrap();
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();

        let t1 = 0.4;
        let mut start: Vec<Complex64> = x0.iter().map(|&v| c(v)).collect();
        start.push(c(1.0));
        let traj = integrate_quadratic(
            &hom,
            &start,
            (0.0, t1),
            5,
            &IntegratorOpts::default(),
            None,
        )
        .unwrap();
        assert!(!traj.truncated);

        let quad_f: Vec<f64> = quad.entries().iter().map(|e| e.to_c64().re).collect();
        let lin_f: Vec<f64> = (0..n * n)
            .map(|t| lin[(t / n, t % n)].to_c64().re)
            .collect();
        let cst_f: Vec<f64> = cst.iter().map(|e| e.to_c64().re).collect();
        let f = move |x: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let mut acc = cst_f[i];
                    for j in 0..n {
                        acc += lin_f[i * n + j] * x[j];
                        for k in 0..n {
                            acc += quad_f[(i * n + j) * n + k] * x[j] * x[k];
                        }
                    }
                    acc
                })
                .collect()
        };
        let oracle = rk4_oracle(&f, x0, t1, 4000);
        let end = traj.states.last().unwrap();
        for i in 0..n {
            assert!(
                (end[i].re - oracle[i]).abs() <= 1e-6,
                "projected trajectory must match direct integration"
            );
        }
    }
}

#[test]
fn euler_first_integrals_are_conserved() {
    let sys = corpus::euler_top::<Rat>();
    let traj = integrate_quadratic(
        &sys,
        &[c(1.0), c(0.5), c(0.25)],
        (0.0, 0.5),
        101,
        &IntegratorOpts::default(),
        None,
    )
    .unwrap();
    assert!(!traj.truncated);
    let q12 = QuadricForm::from_monomials(3, &[(0, 0, rat(1, 1)), (1, 1, rat(-1, 1))]);
    let q23 = QuadricForm::from_monomials(3, &[(1, 1, rat(1, 1)), (2, 2, rat(-1, 1))]);
    for q in [q12, q23] {
        let report = invariance_drift(&traj, &q, None).unwrap();
        assert!(
            report.max_drift <= 1e-9,
            "drift {} exceeds 1e-9",
            report.max_drift
        );
    }
}

#[test]
fn zero_system_has_zero_drift() {
    let sys = QuadraticSystem::<Rat>::zero(2);
    let traj = integrate_quadratic(
        &sys,
        &[c(1.0), c(2.0)],
        (0.0, 1.0),
        11,
        &IntegratorOpts::default(),
        None,
    )
    .unwrap();
    let q = QuadricForm::from_monomials(2, &[(0, 1, rat(1, 1))]);
    let report = invariance_drift(&traj, &q, None).unwrap();
    assert_eq!(report.max_drift, 0.0);
}

#[test]
fn synthetic_brioschi_samples_have_roundoff_residual() {
    // Exact samples of dX_k = X_k^2 with X_0 = 0, X_1 = -1/(z+1) on a grid.
    let system = QuadraticSystem::from_tensor(gdhb_tensor::<Rat>(&[rat(0, 1)], &[]));
    let gdhb = GDHBSystem::from_parts(1, system, vec![]);
    let mut bs = BrioschiSamples {
        zs: vec![],
        taus: vec![],
        xs: vec![],
        dxs: vec![],
    };
    for i in 0..50 {
        let z = c(i as f64 / 50.0);
        let x1 = -1.0 / (z + 1.0);
        bs.zs.push(z);
        bs.taus.push(z);
        bs.xs.push(vec![c(0.0), x1]);
        bs.dxs.push(vec![c(0.0), x1 * x1]);
    }
    let report = gdhb_residual(&gdhb, &bs).unwrap();
    assert!(report.max_overall() <= 1e-13);
}

#[test]
fn cofactor_integral_requires_tracking() {
    let sys = corpus::euler_top::<Rat>();
    let traj = integrate_quadratic(
        &sys,
        &[c(1.0), c(0.5), c(0.25)],
        (0.0, 0.2),
        5,
        &IntegratorOpts::default(),
        None,
    )
    .unwrap();
    let q = QuadricForm::from_monomials(3, &[(0, 0, rat(1, 1))]);
    let l = LinearForm::new(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
    assert!(invariance_drift(&traj, &q, Some(&l)).is_err());
    // With tracking the call succeeds.
    let traj2 = integrate_quadratic(
        &sys,
        &[c(1.0), c(0.5), c(0.25)],
        (0.0, 0.2),
        5,
        &IntegratorOpts::default(),
        Some(&l),
    )
    .unwrap();
    assert!(invariance_drift(&traj2, &q, Some(&l)).is_ok());
}
