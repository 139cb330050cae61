//! Best-effort numerical search for a basis satisfying the recognition
//! conditions.
//!
//! The search exploits the structure of the conditions instead of descending
//! on raw 4x4 matrices. Both ingredients are basis-independent elements of
//! the algebra:
//!
//! * the for-all-c unit `u` (exact linear solve), which must equal the sum
//!   of the sought basis vectors;
//! * the rays `v` with `base(v^2)` proportional to `u` and `B(v, v) = 0`,
//!   found by damped Gauss-Newton from random starts. For a recognizable
//!   family these are exactly the four one-minus sign patterns plus `u`
//!   itself, up to scale.
//!
//! Scales are fixed by the exact equation `sum t_j w_j = 2u`, the candidate
//! basis is assembled, and every labeling is re-verified exactly after
//! continued-fraction rationalization. A returned basis therefore always
//! passes [`crate::dhb::recognize`]; `None` proves nothing.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dhb::{recognize, ParametricAlgebra, RecognitionReport, DIM};
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Mat};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Newton starts.
    pub attempts: usize,
    pub seed: u64,
    /// Denominator bound for rationalizing candidates.
    pub max_denominator: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            attempts: 200,
            seed: 1,
            max_denominator: 1_000_000,
        }
    }
}

#[derive(Debug)]
pub struct SearchOutcome<K> {
    pub basis: Option<LinearMap<K>>,
    pub report: Option<RecognitionReport<K>>,
    pub rays_found: usize,
    pub attempts_used: usize,
}

const NEWTON_TOL: f64 = 1e-12;
const ASSEMBLY_GATE: f64 = 1e-10;
const RAY_MATCH_TOL: f64 = 1e-6;

/// The element that is the unit of every specialization, if one exists.
/// Solves `base(u . x_j) = x_j` and `B(u, x_j) = 0` jointly and exactly.
pub fn unit_for_all_c<K: Scalar>(pa: &ParametricAlgebra<K>) -> Result<Option<Vec<K>>> {
    if !K::EXACT {
        return Err(Error::ExactDomainRequired("unit_for_all_c"));
    }
    let n = DIM;
    let mut rows: Vec<Vec<K>> = Vec::with_capacity(n * n + n);
    let mut rhs: Vec<K> = Vec::with_capacity(n * n + n);
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| pa.base().get(k, i, j).clone()).collect());
            rhs.push(if k == j { K::one() } else { K::zero() });
        }
    }
    for j in 0..n {
        rows.push((0..n).map(|i| pa.quadric().entry(i, j).clone()).collect());
        rhs.push(K::zero());
    }
    Ok(Mat::from_rows(rows).solve(&rhs))
}

// Small dense complex solver for the Gauss-Newton steps.
fn csolve(a: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| {
            a[i][c]
                .norm()
                .partial_cmp(&a[j][c].norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[p][c].norm() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        let inv = 1.0 / a[c][c];
        for j in c..n {
            a[c][j] *= inv;
        }
        b[c] *= inv;
        for i in 0..n {
            if i != c && a[i][c].norm() > 0.0 {
                let f = a[i][c];
                for j in c..n {
                    let t = a[c][j] * f;
                    a[i][j] -= t;
                }
                let t = b[c] * f;
                b[i] -= t;
            }
        }
    }
    Some(b.to_vec())
}

struct FloatFamily {
    base: Vec<Complex64>,    // n^3
    quadric: Vec<Complex64>, // n^2
    unit: Vec<Complex64>,
}

impl FloatFamily {
    fn product(&self, u: &[Complex64], v: &[Complex64], out: &mut [Complex64]) {
        let n = DIM;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    acc += self.base[(i * n + j) * n + k] * u[j] * v[k];
                }
            }
            out[i] = acc;
        }
    }

    fn bilinear(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let n = DIM;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                acc += self.quadric[j * n + k] * u[j] * v[k];
            }
        }
        acc
    }

    /// Residual F(v, lambda): `base(v,v) - lambda u` (4), `B(v,v)` (1),
    /// `<r, v> - 1` (1).
    fn residual(&self, v: &[Complex64], lam: Complex64, chart: &[Complex64]) -> [Complex64; 6] {
        let mut p = [Complex64::new(0.0, 0.0); DIM];
        self.product(v, v, &mut p);
        let mut f = [Complex64::new(0.0, 0.0); 6];
        for i in 0..DIM {
            f[i] = p[i] - lam * self.unit[i];
        }
        f[4] = self.bilinear(v, v);
        f[5] = chart.iter().zip(v).map(|(r, x)| r * x).sum::<Complex64>() - 1.0;
        f
    }

    fn ray_search(&self, rng: &mut ChaCha8Rng) -> Option<(Vec<Complex64>, Complex64)> {
        let n = DIM;
        let rand_c = |rng: &mut ChaCha8Rng| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        };
        let chart: Vec<Complex64> = (0..n).map(|_| rand_c(rng)).collect();
        let mut v: Vec<Complex64> = (0..n).map(|_| rand_c(rng)).collect();
        let mut lam = rand_c(rng);
        for _ in 0..60 {
            let f = self.residual(&v, lam, &chart);
            let fnorm = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if fnorm < NEWTON_TOL {
                return Some((v, lam));
            }
            // Jacobian: rows 0..3 d/dv = 2 T(v), d/dlam = -u;
            // row 4 d/dv = 2 b v; row 5 d/dv = chart.
            let mut jac = vec![vec![Complex64::new(0.0, 0.0); n + 1]; 6];
            for i in 0..n {
                for p in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += self.base[(i * n + p) * n + k] * v[k];
                    }
                    jac[i][p] = 2.0 * acc;
                }
                jac[i][n] = -self.unit[i];
            }
            for p in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.quadric[p * n + k] * v[k];
                }
                jac[4][p] = 2.0 * acc;
                jac[5][p] = chart[p];
            }
            // Gauss-Newton step via the normal equations, lightly damped.
            let cols = n + 1;
            let mut ata = vec![vec![Complex64::new(0.0, 0.0); cols]; cols];
            let mut atb = vec![Complex64::new(0.0, 0.0); cols];
            for r in 0..6 {
                for c1 in 0..cols {
                    let jrc = jac[r][c1].conj();
                    for c2 in 0..cols {
                        ata[c1][c2] += jrc * jac[r][c2];
                    }
                    atb[c1] -= jrc * f[r];
                }
            }
            for (c, row) in ata.iter_mut().enumerate() {
                row[c] += Complex64::new(1e-14, 0.0);
            }
            let step = csolve(&mut ata, &mut atb)?;
            for i in 0..n {
                v[i] += step[i];
            }
            lam += step[n];
            if v.iter().any(|c| !c.norm().is_finite()) || v.iter().map(|c| c.norm()).sum::<f64>() > 1e8 {
                return None;
            }
        }
        None
    }
}

/// Divide by the largest-modulus coordinate so representatives of one ray
/// coincide.
fn canonical_ray(v: &[Complex64]) -> Option<Vec<Complex64>> {
    let (idx, norm) = v
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.norm()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))?;
    if norm < 1e-9 {
        return None;
    }
    let inv = 1.0 / v[idx];
    Some(v.iter().map(|c| c * inv).collect())
}

fn rays_equal(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        < RAY_MATCH_TOL
}

/// Search for a basis in which the recognition conditions hold; the result,
/// when present, has already passed exact re-verification.
pub fn search_basis<K: Scalar>(
    pa: &ParametricAlgebra<K>,
    opts: &SearchOptions,
) -> Result<SearchOutcome<K>> {
    if !K::EXACT {
        return Err(Error::ExactDomainRequired("search_basis"));
    }
    let none = |rays: usize, attempts: usize| SearchOutcome {
        basis: None,
        report: None,
        rays_found: rays,
        attempts_used: attempts,
    };
    let Some(unit) = unit_for_all_c(pa)? else {
        return Ok(none(0, 0));
    };
    let family = FloatFamily {
        base: pa.base().entries().iter().map(|c| c.to_c64()).collect(),
        quadric: {
            let mut q = Vec::with_capacity(DIM * DIM);
            for i in 0..DIM {
                for j in 0..DIM {
                    q.push(pa.quadric().entry(i, j).to_c64());
                }
            }
            q
        },
        unit: unit.iter().map(|c| c.to_c64()).collect(),
    };
    let unit_ray = canonical_ray(&family.unit);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rays: Vec<Vec<Complex64>> = Vec::new();
    let mut attempts_used = 0;
    for attempt in 0..opts.attempts {
        attempts_used = attempt + 1;
        let Some((v, _lam)) = family.ray_search(&mut rng) else {
            continue;
        };
        let Some(ray) = canonical_ray(&v) else {
            continue;
        };
        if unit_ray.as_ref().is_some_and(|u| rays_equal(u, &ray)) {
            continue;
        }
        if rays.iter().any(|r| rays_equal(r, &ray)) {
            continue;
        }
        rays.push(ray);
        // The recognizable case has exactly four rays; gather a couple of
        // spares in case a spurious near-solution sneaked in.
        if rays.len() >= 6 {
            break;
        }
    }
    if rays.len() < 4 {
        return Ok(none(rays.len(), attempts_used));
    }

    // Try every 4-subset and every slot labeling; exact verification is the
    // arbiter, so false positives cannot escape.
    let idxs: Vec<usize> = (0..rays.len()).collect();
    for subset in subsets4(&idxs) {
        if let Some(outcome) =
            try_assemble(pa, &unit, &family, &rays, &subset, opts.max_denominator)?
        {
            return Ok(SearchOutcome {
                basis: Some(outcome.0),
                report: Some(outcome.1),
                rays_found: rays.len(),
                attempts_used,
            });
        }
    }
    Ok(none(rays.len(), attempts_used))
}

fn subsets4(idxs: &[usize]) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let n = idxs.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push([idxs[a], idxs[b], idxs[c], idxs[d]]);
                }
            }
        }
    }
    out
}

type Assembled<K> = (LinearMap<K>, RecognitionReport<K>);

fn try_assemble<K: Scalar>(
    pa: &ParametricAlgebra<K>,
    unit: &[K],
    family: &FloatFamily,
    rays: &[Vec<Complex64>],
    subset: &[usize; 4],
    max_den: u64,
) -> Result<Option<Assembled<K>>> {
    // Numerical gate: scales solving sum t_j w_j = 2u must exist.
    let mut a: Vec<Vec<Complex64>> = (0..4)
        .map(|i| subset.iter().map(|&s| rays[s][i]).collect())
        .collect();
    let mut b: Vec<Complex64> = family.unit.iter().map(|u| 2.0 * u).collect();
    let Some(t_float) = csolve(&mut a, &mut b) else {
        return Ok(None);
    };
    let mut resid: f64 = 0.0;
    for i in 0..4 {
        let got: Complex64 = subset
            .iter()
            .zip(&t_float)
            .map(|(&s, t)| rays[s][i] * t)
            .sum();
        resid = resid.max((got - 2.0 * family.unit[i]).norm());
    }
    if resid > ASSEMBLY_GATE || t_float.iter().any(|t| t.norm() < 1e-9) {
        return Ok(None);
    }

    // Rationalize the ray directions, then redo the scale solve exactly.
    let mut ws: Vec<Vec<K>> = Vec::with_capacity(4);
    for &s in subset {
        let mut w = Vec::with_capacity(4);
        for coord in &rays[s] {
            match K::snap_from_c64(*coord, max_den) {
                Some(x) => w.push(x),
                None => return Ok(None),
            }
        }
        ws.push(w);
    }
    let scale_mat = Mat::from_fn(4, 4, |i, j| ws[j][i].clone());
    let two_u: Vec<K> = unit.iter().map(|u| K::from_i64(2).mul(u)).collect();
    let Some(ts) = scale_mat.solve(&two_u) else {
        return Ok(None);
    };
    if ts.iter().any(|t| t.is_zero()) {
        return Ok(None);
    }
    // Candidate basis vectors x_j = (u - t_j w_j) / 2, in current coordinates.
    let half = K::ratio(1, 2);
    let xs: Vec<Vec<K>> = (0..4)
        .map(|j| {
            (0..4)
                .map(|i| unit[i].sub(&ts[j].mul(&ws[j][i])).mul(&half))
                .collect()
        })
        .collect();

    // Every labeling of the four candidates against the slots.
    for perm in permutations4() {
        let rows = Mat::from_rows(perm.iter().map(|&p| xs[p].clone()).collect());
        let Some(rows_inv) = rows.inverse() else {
            continue;
        };
        let _ = rows_inv;
        // rows holds the distinguished basis in current coordinates, so the
        // map that scrambled the distinguished presentation is rows^T.
        let candidate = LinearMap::new(rows.transpose());
        if !candidate.is_invertible() {
            continue;
        }
        let report = recognize(pa, Some(&candidate))?;
        if report.passed() {
            return Ok(Some((candidate, report)));
        }
    }
    Ok(None)
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            if b == a {
                continue;
            }
            for c in 0..4 {
                if c == a || c == b {
                    continue;
                }
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::dhb::extract_normal_form;
    use crate::quadric::QuadricForm;
    use crate::scalar::{rat, Rat};

    #[test]
    fn zero_algebra_yields_none() {
        let pa = ParametricAlgebra::new(
            crate::tensor::SymTensor::<Rat>::zeros(4),
            QuadricForm::zero(4),
        )
        .unwrap();
        let out = search_basis(&pa, &SearchOptions::default()).unwrap();
        assert!(out.basis.is_none());
    }

    #[test]
    fn padded_euler_yields_none() {
        let (sys, q) = corpus::padded_euler();
        let pa = ParametricAlgebra::new(sys.into_tensor(), q).unwrap();
        let out = search_basis(&pa, &SearchOptions::default()).unwrap();
        assert!(out.basis.is_none());
        assert_eq!(out.rays_found, 0); // no for-all-c unit, search never starts
    }

    #[test]
    fn recovers_a_scrambled_round_trip_fixture() {
        let pa = ParametricAlgebra::from_gdhb(&corpus::roundtrip_gdhb()).unwrap();
        let nf0 = extract_normal_form(&pa, None).unwrap();
        let m = LinearMap::from_rows(vec![
            vec![rat(1, 1), rat(1, 2), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1), rat(1, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(2, 1)],
        ]);
        let scrambled = pa.change_basis(&m).unwrap();
        let out = search_basis(&scrambled, &SearchOptions::default()).unwrap();
        let basis = out.basis.expect("search should recover the fixture");
        // A returned basis always passes exact re-verification. The labeling
        // may differ from the original (choosing another singular point for
        // the infinity slot gives another valid parametrization), so the
        // extracted data need not equal nf0.
        let report = recognize(&scrambled, Some(&basis)).unwrap();
        assert!(report.passed());
        let _ = nf0;
        // Supplying the exact scramble still reproduces the original data.
        let nf_exact = extract_normal_form(&scrambled, Some(&m)).unwrap();
        assert_eq!(nf_exact, extract_normal_form(&pa, None).unwrap());
    }
}
