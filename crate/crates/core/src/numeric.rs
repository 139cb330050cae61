//! Numerical integration of quadratic systems and Fuchsian equations, the
//! Brioschi-variable construction, and residual verification.
//!
//! All states are complex vectors driven along a real parameter; quadratic
//! trajectories use real time, Fuchsian solutions the arc parameter of a
//! polyline in the z-plane. Derivatives of Brioschi variables are always
//! computed analytically from the differential equation, never by finite
//! differences, so residuals measure integration error alone.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::GDHBSystem;
use crate::quadric::{LinearForm, QuadricForm};
use crate::ratfunc::RationalFn;
use crate::scalar::Scalar;
use crate::system::QuadraticSystem;

/// Dense complex copy of a coefficient tensor.
#[derive(Debug, Clone)]
pub struct C64Tensor {
    n: usize,
    data: Vec<Complex64>,
}

impl C64Tensor {
    pub fn new(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n * n);
        C64Tensor { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn evaluate(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let base = (i * n + j) * n;
                let mut row = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    row += self.data[base + k] * x[k];
                }
                acc += x[j] * row;
            }
            out[i] = acc;
        }
    }
}

/// Dense complex copy of a quadric.
#[derive(Debug, Clone)]
pub struct C64Quadric {
    n: usize,
    mat: Vec<Complex64>,
}

impl C64Quadric {
    pub fn from_quadric<K: Scalar>(q: &QuadricForm<K>) -> Self {
        let n = q.n();
        let mut mat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                mat.push(q.entry(i, j).to_c64());
            }
        }
        C64Quadric { n, mat }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..self.n {
                row += self.mat[i * self.n + j] * x[j];
            }
            acc += x[i] * row;
        }
        acc
    }
}

/// Complex-coefficient rational function evaluated by Horner division.
#[derive(Debug, Clone)]
pub struct C64RatFn {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl C64RatFn {
    pub fn zero() -> Self {
        C64RatFn {
            num: vec![],
            den: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        C64RatFn {
            num: vec![c],
            den: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn from_exact<K: Scalar>(f: &RationalFn<K>) -> Self {
        C64RatFn {
            num: f.num().coeffs().iter().map(|c| c.to_c64()).collect(),
            den: f.den().coeffs().iter().map(|c| c.to_c64()).collect(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let horner = |cs: &[Complex64]| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in cs.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        if self.num.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        horner(&self.num) / horner(&self.den)
    }
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integration options. The step size obeys the embedded error test at `tol`
/// and never exceeds `cap_coeff * sqrt(tol)`, which ties the step directly to
/// the tolerance: halving `tol` shrinks the cap by sqrt(2) and the global
/// error of the fifth-order method by about 2^(5/2).
#[derive(Debug, Clone, Copy)]
pub struct IntegratorOpts {
    pub tol: f64,
    pub cap_coeff: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOpts {
    fn default() -> Self {
        IntegratorOpts {
            tol: 1e-10,
            cap_coeff: 20.0,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorOpts {
    pub fn with_tol(tol: f64) -> Self {
        IntegratorOpts {
            tol,
            ..Default::default()
        }
    }

    fn h_cap(&self) -> f64 {
        self.cap_coeff * self.tol.sqrt()
    }
}

const BLOWUP_NORM: f64 = 1e10;

struct StepOutcome {
    truncated: bool,
}

/// Drive one RK pass from `t0` through every sample time in order, invoking
/// `record` at each. Steps are split so sample times are hit exactly.
fn rk_drive(
    f: &mut dyn FnMut(f64, &[Complex64], &mut [Complex64]),
    t0: f64,
    samples: &[f64],
    y0: &[Complex64],
    opts: &IntegratorOpts,
    record: &mut dyn FnMut(f64, &[Complex64]),
) -> Result<StepOutcome> {
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k = vec![vec![Complex64::new(0.0, 0.0); dim]; 7];
    let mut ytmp = vec![Complex64::new(0.0, 0.0); dim];
    let span: f64 = samples.last().map_or(0.0, |s| (s - t0).abs()).max(1e-300);
    let mut h = opts.h_cap().min(span);
    let mut steps = 0usize;

    for &target in samples {
        if (target - t0).abs() < 1e-300 {
            record(t, &y);
            continue;
        }
        let dir = if target >= t { 1.0 } else { -1.0 };
        while (target - t) * dir > 1e-14 * span {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StepUnderflow(t));
            }
            let mut hs = h.min((target - t) * dir) * dir;
            // One attempted step; retry with smaller h on error-test failure.
            loop {
                f(t, &y, &mut k[0]);
                for stage in 1..7 {
                    for i in 0..dim {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (p, kp) in k.iter().enumerate().take(stage) {
                            let a = DP_A[stage][p];
                            if a != 0.0 {
                                acc += kp[i] * a;
                            }
                        }
                        ytmp[i] = y[i] + acc * hs;
                    }
                    let (head, tail) = k.split_at_mut(stage);
                    let _ = head;
                    f(t + DP_C[stage] * hs, &ytmp, &mut tail[0]);
                }
                let mut err = 0.0f64;
                let mut ynorm = 0.0f64;
                for i in 0..dim {
                    let mut d = Complex64::new(0.0, 0.0);
                    for (p, kp) in k.iter().enumerate() {
                        let w = DP_B5[p] - DP_B4[p];
                        if w != 0.0 {
                            d += kp[i] * w;
                        }
                    }
                    err = err.max((d * hs).norm());
                    ynorm = ynorm.max(y[i].norm());
                }
                let scale = 1.0 + ynorm;
                if err <= opts.tol * scale {
                    for i in 0..dim {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (p, kp) in k.iter().enumerate() {
                            if DP_B5[p] != 0.0 {
                                acc += kp[i] * DP_B5[p];
                            }
                        }
                        y[i] += acc * hs;
                    }
                    t += hs;
                    let grow = 0.9 * (opts.tol * scale / err.max(1e-300)).powf(0.2);
                    h = (hs.abs() * grow.clamp(0.2, 5.0)).min(opts.h_cap());
                    break;
                }
                let shrink = 0.9 * (opts.tol * scale / err).powf(0.2);
                hs *= shrink.clamp(0.1, 0.9);
                if hs.abs() < 1e-14 * span {
                    return Ok(StepOutcome { truncated: true });
                }
            }
            if y.iter().any(|c| !c.norm().is_finite() || c.norm() > BLOWUP_NORM) {
                return Ok(StepOutcome { truncated: true });
            }
        }
        record(t, &y);
    }
    Ok(StepOutcome { truncated: false })
}

// ---------------------------------------------------------------------------
// Quadratic trajectories
// ---------------------------------------------------------------------------

/// Sampled solution of a quadratic system, with an optional accumulated
/// cofactor integral `int L(x) dt` carried alongside the state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub cofactor_integral: Option<Vec<Complex64>>,
    pub truncated: bool,
}

/// Integrate `dX/dt = F(X)` from `x0` over `[t0, t1]`, sampling at
/// `n_samples` equally spaced times. Blow-up (quadratic systems generically
/// escape in finite time) truncates the trajectory and sets the flag rather
/// than failing.
pub fn integrate_quadratic<K: Scalar>(
    sys: &QuadraticSystem<K>,
    x0: &[Complex64],
    t_span: (f64, f64),
    n_samples: usize,
    opts: &IntegratorOpts,
    cofactor: Option<&LinearForm<K>>,
) -> Result<Trajectory> {
    let n = sys.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch("initial point".into()));
    }
    if !x0.iter().all(|c| c.norm().is_finite()) {
        return Err(Error::InvalidInput("non-finite initial point".into()));
    }
    let tensor = sys.tensor().to_c64_tensor();
    let l: Option<Vec<Complex64>> =
        cofactor.map(|lf| lf.coeffs.iter().map(|c| c.to_c64()).collect());
    let dim = n + usize::from(l.is_some());
    let mut y0 = x0.to_vec();
    if l.is_some() {
        y0.push(Complex64::new(0.0, 0.0));
    }
    let (t0, t1) = t_span;
    let n_samples = n_samples.max(2);
    let samples: Vec<f64> = (0..n_samples)
        .map(|i| t0 + (t1 - t0) * i as f64 / (n_samples - 1) as f64)
        .collect();

    let mut f = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        tensor.evaluate(&y[..n], &mut dy[..n]);
        if let Some(lc) = &l {
            dy[n] = y[..n].iter().zip(lc).map(|(x, c)| x * c).sum();
        }
    };
    let mut times = Vec::new();
    let mut states: Vec<Vec<Complex64>> = Vec::new();
    let mut integrals = Vec::new();
    let outcome = rk_drive(&mut f, t0, &samples, &y0[..dim], opts, &mut |t, y| {
        times.push(t);
        states.push(y[..n].to_vec());
        if l.is_some() {
            integrals.push(y[n]);
        }
    })?;
    Ok(Trajectory {
        times,
        states,
        cofactor_integral: l.is_some().then_some(integrals),
        truncated: outcome.truncated,
    })
}

// ---------------------------------------------------------------------------
// Paths and Fuchsian integration
// ---------------------------------------------------------------------------

/// Polyline in the z-plane with a minimum pole clearance.
#[derive(Debug, Clone)]
pub struct Path {
    points: Vec<Complex64>,
}

impl Path {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("path needs at least two points".into()));
        }
        Ok(Path { points })
    }

    pub fn segment(from: Complex64, to: Complex64) -> Self {
        Path {
            points: vec![from, to],
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn start(&self) -> Complex64 {
        self.points[0]
    }

    fn segment_pole_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
        let ab = b - a;
        let len2 = ab.norm_sqr();
        if len2 == 0.0 {
            return (p - a).norm();
        }
        let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
        let t = t.clamp(0.0, 1.0);
        (p - (a + ab * t)).norm()
    }

    /// Every segment must keep distance at least `delta` from every pole.
    pub fn check_clearance(&self, poles: &[Complex64], delta: f64) -> Result<()> {
        for w in self.points.windows(2) {
            for &p in poles {
                let d = Self::segment_pole_distance(w[0], w[1], p);
                if d < delta {
                    return Err(Error::PathClearance {
                        dist: d,
                        clearance: delta,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Default clearance: a tenth of the smallest pairwise pole distance.
pub fn default_clearance(poles: &[Complex64]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..poles.len() {
        for j in 0..i {
            min = min.min((poles[i] - poles[j]).norm());
        }
    }
    if min.is_finite() {
        0.1 * min
    } else {
        0.0
    }
}

/// Second-order linear equation to integrate along a path.
pub enum FuchsianEq {
    /// `y'' + Q(z) y = 0`: the Wronskian of two solutions is constant.
    NormalForm { q: C64RatFn },
    /// `y'' + p y' + q y = 0`: the Wronskian is co-integrated via `W' = -pW`.
    General { p: C64RatFn, q: C64RatFn },
}

/// Two fundamental solutions sampled along a path, with their Wronskian.
#[derive(Debug, Clone)]
pub struct ODESolution {
    pub zs: Vec<Complex64>,
    /// Per sample: `(y1, y1', y2, y2')`.
    pub y: Vec<[Complex64; 4]>,
    pub wronskian: Vec<Complex64>,
    pub normal_form_q: Option<C64RatFn>,
    pub wronskian_drift: f64,
}

/// Integrate a Fuchsian equation along a polyline with the fundamental
/// initial data `(y1, y1') = (1, 0)`, `(y2, y2') = (0, 1)` at the path start.
pub fn integrate_fuchsian(
    eq: &FuchsianEq,
    path: &Path,
    poles: &[Complex64],
    opts: &IntegratorOpts,
) -> Result<ODESolution> {
    if !poles.is_empty() {
        path.check_clearance(poles, default_clearance(poles))?;
    }
    let normal = matches!(eq, FuchsianEq::NormalForm { .. });
    // State: (y1, y1', y2, y2') plus W for the general form.
    let dim = if normal { 4 } else { 5 };
    let mut y0 = vec![Complex64::new(0.0, 0.0); dim];
    y0[0] = Complex64::new(1.0, 0.0);
    y0[3] = Complex64::new(1.0, 0.0);
    if !normal {
        y0[4] = Complex64::new(1.0, 0.0); // W(0) = y1 y2' - y2 y1' = 1
    }

    let mut zs = Vec::new();
    let mut ys: Vec<[Complex64; 4]> = Vec::new();
    let mut ws = Vec::new();

    let mut state = y0;
    for w in path.points().windows(2) {
        let (za, zb) = (w[0], w[1]);
        let dz = zb - za;
        let mut f = |s: f64, y: &[Complex64], dy: &mut [Complex64]| {
            let z = za + dz * s;
            match eq {
                FuchsianEq::NormalForm { q } => {
                    let qv = q.eval(z);
                    dy[0] = dz * y[1];
                    dy[1] = dz * (-qv * y[0]);
                    dy[2] = dz * y[3];
                    dy[3] = dz * (-qv * y[2]);
                }
                FuchsianEq::General { p, q } => {
                    let pv = p.eval(z);
                    let qv = q.eval(z);
                    dy[0] = dz * y[1];
                    dy[1] = dz * (-(pv * y[1] + qv * y[0]));
                    dy[2] = dz * y[3];
                    dy[3] = dz * (-(pv * y[3] + qv * y[2]));
                    dy[4] = dz * (-pv * y[4]);
                }
            }
        };
        // Sample at every accepted step by targeting a dense grid on [0, 1].
        let grid: Vec<f64> = (0..=SEGMENT_SAMPLES)
            .map(|i| i as f64 / SEGMENT_SAMPLES as f64)
            .collect();
        let include_start = zs.is_empty();
        let mut first = true;
        let outcome = rk_drive(&mut f, 0.0, &grid, &state, opts, &mut |s, y| {
            let keep = !first || include_start;
            first = false;
            if keep {
                let z = za + dz * s;
                zs.push(z);
                ys.push([y[0], y[1], y[2], y[3]]);
                ws.push(if normal {
                    y[0] * y[3] - y[2] * y[1]
                } else {
                    y[4]
                });
            }
        })?;
        if outcome.truncated {
            return Err(Error::StepUnderflow(0.0));
        }
        // Carry the final state into the next segment.
        let last = ys.last().unwrap();
        state = last.to_vec();
        if !normal {
            state.push(*ws.last().unwrap());
        }
    }

    let w0 = ws[0];
    let drift = if normal {
        ws.iter()
            .map(|w| (w - w0).norm() / w0.norm().max(1.0))
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    Ok(ODESolution {
        zs,
        y: ys,
        wronskian: ws,
        normal_form_q: match eq {
            FuchsianEq::NormalForm { q } => Some(q.clone()),
            FuchsianEq::General { .. } => None,
        },
        wronskian_drift: drift,
    })
}

const SEGMENT_SAMPLES: usize = 64;

// ---------------------------------------------------------------------------
// Brioschi variables
// ---------------------------------------------------------------------------

/// Brioschi variables along a Fuchsian solution:
/// `tau = y2/y1`, `X0 = y1 y1'/W`, `X_j = X0 - (y1^2/W)/(z - a_j)`, with
/// `dX/dtau` obtained from `d/dtau = (y1^2/W) d/dz` and `y1'' = -Q y1`.
#[derive(Debug, Clone)]
pub struct BrioschiSamples {
    pub zs: Vec<Complex64>,
    pub taus: Vec<Complex64>,
    /// Per sample: `X_0 .. X_m`.
    pub xs: Vec<Vec<Complex64>>,
    pub dxs: Vec<Vec<Complex64>>,
}

const Y1_FLOOR: f64 = 1e-6;

pub fn brioschi(sol: &ODESolution, poles: &[Complex64]) -> Result<BrioschiSamples> {
    let Some(q) = &sol.normal_form_q else {
        return Err(Error::InvalidInput(
            "Brioschi variables need a normal-form solution".into(),
        ));
    };
    let m = poles.len();
    let mut out = BrioschiSamples {
        zs: sol.zs.clone(),
        taus: Vec::with_capacity(sol.zs.len()),
        xs: Vec::with_capacity(sol.zs.len()),
        dxs: Vec::with_capacity(sol.zs.len()),
    };
    for (idx, z) in sol.zs.iter().enumerate() {
        let [y1, dy1, y2, dy2] = sol.y[idx];
        let w = sol.wronskian[idx];
        if y1.norm() < Y1_FLOOR {
            return Err(Error::ResampleNeeded(y1.norm()));
        }
        let _ = dy2;
        let tau = y2 / y1;
        let u = y1 * y1 / w; // dz/dtau
        let x0 = y1 * dy1 / w;
        let qv = q.eval(*z);
        // dX0/dtau = (y1^2/W^2) (y1'^2 - Q y1^2)
        let dx0 = (y1 * y1) * (dy1 * dy1 - qv * y1 * y1) / (w * w);
        let mut xs = Vec::with_capacity(m + 1);
        let mut dxs = Vec::with_capacity(m + 1);
        xs.push(x0);
        dxs.push(dx0);
        for a in poles {
            let za = z - a;
            xs.push(x0 - u / za);
            // d/dtau of (y1^2/W)/(z-a): (y1^2/W^2)(2 y1 y1'/(z-a) - y1^2/(z-a)^2)
            let corr = (y1 * y1) / (w * w) * (2.0 * y1 * dy1 / za - y1 * y1 / (za * za));
            dxs.push(dx0 - corr);
        }
        out.taus.push(tau);
        out.xs.push(xs);
        out.dxs.push(dxs);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Residual reports
// ---------------------------------------------------------------------------

/// Maximum relative residuals per equation and per constraint quadric.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub per_equation: Vec<f64>,
    pub per_constraint: Vec<f64>,
    pub samples: usize,
    pub tol: f64,
}

impl ResidualReport {
    pub fn max_equation(&self) -> f64 {
        self.per_equation.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_constraint(&self) -> f64 {
        self.per_constraint.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_overall(&self) -> f64 {
        self.max_equation().max(self.max_constraint())
    }
}

/// Compare analytic `dX/dtau` samples against the gDHB right-hand sides and
/// evaluate the constraint quadrics. Residuals are normalized by
/// `max(1, |X|^2)` since the right-hand sides are quadratic.
pub fn gdhb_residual<K: Scalar>(gdhb: &GDHBSystem<K>, bs: &BrioschiSamples) -> Result<ResidualReport> {
    let n = gdhb.n();
    let tensor = gdhb.system.tensor().to_c64_tensor();
    let quadrics: Vec<C64Quadric> = gdhb
        .constraints
        .iter()
        .map(C64Quadric::from_quadric)
        .collect();
    let mut per_equation = vec![0.0f64; n];
    let mut per_constraint = vec![0.0f64; quadrics.len()];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for (xs, dxs) in bs.xs.iter().zip(&bs.dxs) {
        if xs.len() != n {
            return Err(Error::DimensionMismatch(
                "sample dimension differs from system dimension".into(),
            ));
        }
        let xnorm = xs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let scale = (xnorm * xnorm).max(1.0);
        tensor.evaluate(xs, &mut rhs);
        for k in 0..n {
            per_equation[k] = per_equation[k].max((dxs[k] - rhs[k]).norm() / scale);
        }
        for (ci, q) in quadrics.iter().enumerate() {
            per_constraint[ci] = per_constraint[ci].max(q.eval(xs).norm() / scale);
        }
    }
    Ok(ResidualReport {
        per_equation,
        per_constraint,
        samples: bs.xs.len(),
        tol: 0.0,
    })
}

/// Drift of a quadric along a trajectory. With no cofactor this is
/// `max_t |Q(x(t)) - Q(x(0))|`; with a nonzero cofactor the trajectory must
/// carry the accumulated integral and the drift is
/// `max_t |Q(x(t)) exp(-int L) - Q(x(0))|`.
#[derive(Debug, Clone)]
pub struct DriftReport {
    pub max_drift: f64,
    pub q_initial: Complex64,
    pub used_cofactor: bool,
}

pub fn invariance_drift<K: Scalar>(
    traj: &Trajectory,
    q: &QuadricForm<K>,
    l: Option<&LinearForm<K>>,
) -> Result<DriftReport> {
    let qc = C64Quadric::from_quadric(q);
    let use_cofactor = l.is_some_and(|lf| !lf.is_zero());
    let integrals = if use_cofactor {
        Some(traj.cofactor_integral.as_ref().ok_or_else(|| {
            Error::InvalidInput(
                "trajectory was integrated without cofactor tracking".into(),
            )
        })?)
    } else {
        None
    };
    let q0 = qc.eval(&traj.states[0]);
    let mut max_drift = 0.0f64;
    for (i, x) in traj.states.iter().enumerate() {
        let qv = qc.eval(x);
        let adjusted = match integrals {
            Some(ints) => qv * (-ints[i]).exp(),
            None => qv,
        };
        max_drift = max_drift.max((adjusted - q0).norm());
    }
    Ok(DriftReport {
        max_drift,
        q_initial: q0,
        used_cofactor: use_cofactor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use crate::tensor::SymTensor;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_square_blowup_matches_closed_form() {
        // dX = X^2 from X(0) = 1: X(t) = 1/(1-t).
        let mut t = SymTensor::<Rat>::zeros(1);
        t.add_monomial(0, 0, 0, &rat(1, 1));
        let sys = QuadraticSystem::from_tensor(t);
        let traj = integrate_quadratic(
            &sys,
            &[c(1.0, 0.0)],
            (0.0, 0.9),
            10,
            &IntegratorOpts::default(),
            None,
        )
        .unwrap();
        assert!(!traj.truncated);
        for (t, x) in traj.times.iter().zip(&traj.states) {
            let exact = 1.0 / (1.0 - t);
            assert!((x[0] - c(exact, 0.0)).norm() <= 1e-9 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn blowup_sets_truncation_flag() {
        let mut t = SymTensor::<Rat>::zeros(1);
        t.add_monomial(0, 0, 0, &rat(1, 1));
        let sys = QuadraticSystem::from_tensor(t);
        let traj = integrate_quadratic(
            &sys,
            &[c(1.0, 0.0)],
            (0.0, 2.0),
            20,
            &IntegratorOpts::default(),
            None,
        )
        .unwrap();
        assert!(traj.truncated);
    }

    #[test]
    fn zero_system_is_constant() {
        let sys = QuadraticSystem::<Rat>::zero(2);
        let traj = integrate_quadratic(
            &sys,
            &[c(1.5, 0.5), c(-2.0, 0.0)],
            (0.0, 3.0),
            7,
            &IntegratorOpts::default(),
            None,
        )
        .unwrap();
        for x in &traj.states {
            assert!((x[0] - c(1.5, 0.5)).norm() < 1e-12);
            assert!((x[1] - c(-2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_potential_gives_polynomial_solutions() {
        let eq = FuchsianEq::NormalForm { q: C64RatFn::zero() };
        let path = Path::segment(c(0.0, 0.0), c(1.0, 0.0));
        let sol = integrate_fuchsian(&eq, &path, &[], &IntegratorOpts::default()).unwrap();
        for (i, z) in sol.zs.iter().enumerate() {
            let [y1, dy1, y2, dy2] = sol.y[i];
            assert!((y1 - c(1.0, 0.0)).norm() < 1e-12);
            assert!(dy1.norm() < 1e-12);
            assert!((y2 - z).norm() < 1e-12);
            assert!((dy2 - c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(sol.wronskian_drift <= 1e-12);
    }

    #[test]
    fn constant_negative_potential_gives_cosh_sinh() {
        // y'' = y: y1 = cosh z, y2 = sinh z under the fundamental data.
        let eq = FuchsianEq::NormalForm {
            q: C64RatFn::constant(c(-1.0, 0.0)),
        };
        let path = Path::segment(c(0.0, 0.0), c(1.0, 0.5));
        let sol = integrate_fuchsian(&eq, &path, &[], &IntegratorOpts::default()).unwrap();
        for (i, z) in sol.zs.iter().enumerate() {
            let [y1, _, y2, _] = sol.y[i];
            assert!((y1 - z.cosh()).norm() < 1e-10);
            assert!((y2 - z.sinh()).norm() < 1e-10);
        }
        assert!(sol.wronskian_drift <= 1e-9);
    }

    #[test]
    fn general_form_co_integrates_wronskian() {
        // y'' + p y' = 0 with constant p = 1: W(z) = exp(-z).
        let eq = FuchsianEq::General {
            p: C64RatFn::constant(c(1.0, 0.0)),
            q: C64RatFn::zero(),
        };
        let path = Path::segment(c(0.0, 0.0), c(0.8, 0.0));
        let sol = integrate_fuchsian(&eq, &path, &[], &IntegratorOpts::default()).unwrap();
        for (i, z) in sol.zs.iter().enumerate() {
            let [y1, dy1, y2, dy2] = sol.y[i];
            let direct = y1 * dy2 - y2 * dy1;
            assert!((sol.wronskian[i] - (-z).exp()).norm() < 1e-9);
            assert!((sol.wronskian[i] - direct).norm() < 1e-9);
        }
    }

    #[test]
    fn brioschi_trivial_potential_single_pole() {
        // Q = 0, pole at -1: tau = z, X0 = 0, X1 = -1/(z+1), dX1 = X1^2.
        let eq = FuchsianEq::NormalForm { q: C64RatFn::zero() };
        let path = Path::segment(c(0.0, 0.0), c(1.0, 0.0));
        let pole = c(-1.0, 0.0);
        let sol = integrate_fuchsian(&eq, &path, &[pole], &IntegratorOpts::default()).unwrap();
        let bs = brioschi(&sol, &[pole]).unwrap();
        for (i, z) in bs.zs.iter().enumerate() {
            assert!((bs.taus[i] - z).norm() < 1e-12);
            assert!(bs.xs[i][0].norm() < 1e-12);
            let expect = -1.0 / (z + 1.0);
            assert!((bs.xs[i][1] - expect).norm() < 1e-11);
            // Self-consistency of the closed-form derivative.
            assert!((bs.dxs[i][1] - bs.xs[i][1] * bs.xs[i][1]).norm() < 1e-11);
        }
    }

    #[test]
    fn path_clearance_is_enforced() {
        let path = Path::segment(c(0.0, 0.0), c(1.0, 0.0));
        let err = path.check_clearance(&[c(0.5, 0.01)], 0.1);
        assert!(matches!(err, Err(Error::PathClearance { .. })));
        assert!(path.check_clearance(&[c(0.5, 0.5)], 0.1).is_ok());
    }
}
