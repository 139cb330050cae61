//! The rank-4 parametric algebra attached to a quadratic system with an
//! invariant quadric, and the recognition of generalized
//! Darboux-Halphen-Brioschi systems.
//!
//! For a system tensor `a` and quadric `b` the family of products is
//! `x_j . x_k = sum_i a^i_{jk} x_i + b_{jk} x_c` with `x_c = sum_i c_i x_i`.
//! All specializations share the flow on `Q = 0`, which is why the parameter
//! is free. Recognition tests, in a candidate basis:
//!
//!   1. `e = x_0 + x_1 + x_2 + x_3` is the unit for every `c`;
//!   2. the two-minus sign patterns square to multiples of `e` for a common
//!      witness `c`;
//!   3. the one-minus sign patterns square to multiples of `e` for every `c`;
//!
//! and on success extracts the normal-form data `(alpha~, beta~, gamma)` and
//! the gDHB parameters `(alpha, beta)`.

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::fuchsian::{gdhb_tensor, GDHBSystem};
use crate::linalg::{LinearMap, Mat};
use crate::quadric::QuadricForm;
use crate::scalar::Scalar;
use crate::tensor::{map_from_basis_rows, SymTensor};

pub const DIM: usize = 4;

/// The parametric family `(base tensor, quadric)` in dimension four.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricAlgebra<K> {
    base: SymTensor<K>,
    quadric: QuadricForm<K>,
}

/// A product in the family, affine in the parameter: the value at `c` is
/// `base + quadric_coeff * x_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineProduct<K> {
    pub base: Element<K>,
    pub quadric_coeff: K,
}

impl<K: Scalar> ParametricAlgebra<K> {
    pub fn new(base: SymTensor<K>, quadric: QuadricForm<K>) -> Result<Self> {
        if base.n() != DIM || quadric.n() != DIM {
            return Err(Error::DimensionMismatch(
                "the parametric algebra lives in dimension four".into(),
            ));
        }
        Ok(ParametricAlgebra { base, quadric })
    }

    /// Attach the algebra of a rank-4 gDHB system, with its anharmonic
    /// quadric.
    pub fn from_gdhb(gdhb: &GDHBSystem<K>) -> Result<Self> {
        let quadric = gdhb
            .constraints
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidInput("gDHB system carries no constraint quadric".into()))?;
        ParametricAlgebra::new(gdhb.system.tensor().clone(), quadric)
    }

    pub fn base(&self) -> &SymTensor<K> {
        &self.base
    }

    pub fn quadric(&self) -> &QuadricForm<K> {
        &self.quadric
    }

    /// The concrete commutative algebra at parameter `c`:
    /// structure constants `a^i_{jk} + b_{jk} c_i`.
    pub fn specialize(&self, c: &[K]) -> Result<Algebra<K>> {
        if c.len() != DIM {
            return Err(Error::DimensionMismatch("parameter must have four entries".into()));
        }
        let t = SymTensor::from_fn(DIM, |i, j, k| {
            self.base.get(i, j, k).add(&self.quadric.entry(j, k).mul(&c[i]))
        })?;
        Ok(Algebra::from_tensor(t))
    }

    /// The product `u . v` as an affine function of the parameter.
    pub fn product_affine(&self, u: &[K], v: &[K]) -> Result<AffineProduct<K>> {
        if u.len() != DIM || v.len() != DIM {
            return Err(Error::DimensionMismatch("elements must have four coordinates".into()));
        }
        Ok(AffineProduct {
            base: self.base.contract(u, v),
            quadric_coeff: self.quadric.bilinear(u, v)?,
        })
    }

    /// Transport the whole family through a basis change; parameters move
    /// covariantly (`c' = M c`), so recognition commutes with this.
    pub fn change_basis(&self, map: &LinearMap<K>) -> Result<ParametricAlgebra<K>> {
        Ok(ParametricAlgebra {
            base: self.base.transform(map)?,
            quadric: self.quadric.transform(map)?,
        })
    }
}

fn basis_vector<K: Scalar>(i: usize) -> Element<K> {
    let mut v = vec![K::zero(); DIM];
    v[i] = K::one();
    v
}

fn all_ones<K: Scalar>() -> Element<K> {
    vec![K::one(); DIM]
}

/// Sign pattern with minuses on `minus`: coordinates are +-1.
fn sign_pattern<K: Scalar>(minus: &[usize]) -> Element<K> {
    let mut v = all_ones::<K>();
    for &i in minus {
        v[i] = K::one().neg();
    }
    v
}

/// Condition 1: `e` is the unit of every specialization. As the products are
/// affine in `c`, this is the polynomial identity "base part of `e . x_j`
/// equals `x_j` and `B(e, x_j) = 0` for every basis element".
pub fn check_unit_for_all_c<K: Scalar>(pa: &ParametricAlgebra<K>, e: &[K]) -> Result<bool> {
    for j in 0..DIM {
        let xj = basis_vector::<K>(j);
        let p = pa.product_affine(e, &xj)?;
        if !p.quadric_coeff.is_zero() || p.base != xj {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Condition 3 for one pattern: `v^2 = lambda e` in every specialization.
/// Requires `B(v, v) = 0` so that the parameter term vanishes identically;
/// returns the proportionality scalar, or `None`.
pub fn check_square_all_c<K: Scalar>(
    pa: &ParametricAlgebra<K>,
    v: &[K],
    e: &[K],
) -> Result<Option<K>> {
    let p = pa.product_affine(v, v)?;
    if !p.quadric_coeff.is_zero() {
        return Ok(None);
    }
    Ok(proportionality(&p.base, e))
}

/// The scalar `lambda` with `w = lambda e`, if one exists (`e != 0`).
fn proportionality<K: Scalar>(w: &[K], e: &[K]) -> Option<K> {
    let pivot = e.iter().position(|c| !c.is_zero())?;
    let lambda = w[pivot].div(&e[pivot])?;
    for i in 0..w.len() {
        if w[i] != lambda.mul(&e[i]) {
            return None;
        }
    }
    Some(lambda)
}

/// A witness for condition 2: the parameter and the per-pattern scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct CWitness<K> {
    pub c: Vec<K>,
    pub lambdas: Vec<K>,
}

/// Condition 2: find one parameter `c` making every listed pattern square to
/// a multiple of `e` simultaneously. Linear in `(c, lambda_1, .., lambda_P)`;
/// returns an exact solution or `None`.
pub fn solve_some_c<K: Scalar>(
    pa: &ParametricAlgebra<K>,
    patterns: &[Element<K>],
    e: &[K],
) -> Result<Option<CWitness<K>>> {
    if !K::EXACT {
        return Err(Error::ExactDomainRequired("solve_some_c"));
    }
    let np = patterns.len();
    if np == 0 {
        return Ok(Some(CWitness {
            c: vec![K::zero(); DIM],
            lambdas: vec![],
        }));
    }
    let mut rows: Vec<Vec<K>> = Vec::with_capacity(DIM * np);
    let mut rhs: Vec<K> = Vec::with_capacity(DIM * np);
    for (pi, v) in patterns.iter().enumerate() {
        let p = pa.product_affine(v, v)?;
        for i in 0..DIM {
            // B(v,v) c_i - lambda_pi e_i = -base_i
            let mut row = vec![K::zero(); DIM + np];
            row[i] = p.quadric_coeff.clone();
            row[DIM + pi] = e[i].neg();
            rows.push(row);
            rhs.push(p.base[i].neg());
        }
    }
    let mat = Mat::from_rows(rows);
    Ok(mat.solve(&rhs).map(|sol| CWitness {
        c: sol[..DIM].to_vec(),
        lambdas: sol[DIM..].to_vec(),
    }))
}

/// Rows of the distinguished basis `e_0 = x0+x1+x2+x3`,
/// `e_j = e_0 - 2 x_j`.
pub fn e_basis_rows<K: Scalar>() -> Mat<K> {
    Mat::from_rows(vec![
        sign_pattern::<K>(&[]),
        sign_pattern::<K>(&[1]),
        sign_pattern::<K>(&[2]),
        sign_pattern::<K>(&[3]),
    ])
}

/// The [`LinearMap`] carrying tensors and quadrics into the distinguished
/// `e`-basis.
pub fn e_basis_map<K: Scalar>() -> LinearMap<K> {
    map_from_basis_rows(&e_basis_rows::<K>()).expect("e-basis rows are invertible")
}

/// Structure of a quadric in the `E`-coordinates of a basis: coefficients of
/// every `E_0`-involving monomial, the squares `E_j^2`, and the cross
/// coefficients `gamma = (E1E2, E2E3, E1E3)` with their two checks.
#[derive(Debug, Clone)]
pub struct EFormReport<K> {
    /// Monomial coefficients of `E_0^2, E_0E_1, E_0E_2, E_0E_3`.
    pub e0_monomials: [K; 4],
    /// Monomial coefficients of `E_1^2, E_2^2, E_3^2`.
    pub square_monomials: [K; 3],
    pub gamma: [K; 3],
    pub gamma_sum_zero: bool,
    pub gamma_nonzero: bool,
}

impl<K: Scalar> EFormReport<K> {
    /// The quadric has the shape `g1 E1E2 + g2 E2E3 + g3 E1E3` exactly.
    pub fn is_gamma_form(&self) -> bool {
        self.e0_monomials.iter().all(|c| c.is_zero())
            && self.square_monomials.iter().all(|c| c.is_zero())
            && self.gamma_sum_zero
            && self.gamma_nonzero
    }
}

/// Rewrite a quadric through a basis map and report its shape in the new
/// coordinates.
pub fn quadric_in_basis<K: Scalar>(
    q: &QuadricForm<K>,
    map: &LinearMap<K>,
) -> Result<(QuadricForm<K>, EFormReport<K>)> {
    let qe = q.transform(map)?;
    let two = K::from_i64(2);
    let mono = |j: usize, k: usize| {
        if j == k {
            qe.entry(j, j).clone()
        } else {
            two.mul(qe.entry(j, k))
        }
    };
    let gamma = [mono(1, 2), mono(2, 3), mono(1, 3)];
    let gamma_sum_zero = gamma[0].add(&gamma[1]).add(&gamma[2]).is_zero();
    let gamma_nonzero = gamma.iter().all(|g| !g.is_zero());
    let report = EFormReport {
        e0_monomials: [mono(0, 0), mono(0, 1), mono(0, 2), mono(0, 3)],
        square_monomials: [mono(1, 1), mono(2, 2), mono(3, 3)],
        gamma,
        gamma_sum_zero,
        gamma_nonzero,
    };
    Ok((qe, report))
}

/// Normal-form data read off in the distinguished basis, together with the
/// derived gDHB parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm<K> {
    pub alpha_tilde: [K; 3],
    pub beta_tilde: [K; 3],
    pub gamma: [K; 3],
    pub alpha: [K; 3],
    pub beta: [K; 2],
    /// The uniform parameter `(1 + beta~_3) / (4 gamma_3)` in each slot.
    pub c: [K; 4],
}

/// Recognition outcome: per-condition verdicts, the witness, and the normal
/// form when everything passes.
#[derive(Debug, Clone)]
pub struct RecognitionReport<K> {
    pub condition1: bool,
    /// Proportionality scalars for the one-minus patterns `j = 0..3`
    /// (pattern `j` flips the sign of `x_j`); `None` marks a failure.
    pub condition3: [Option<K>; 4],
    pub condition2: Option<CWitness<K>>,
    pub normal_form: Option<NormalForm<K>>,
    pub basis_used: LinearMap<K>,
    /// Tensor correction `d` with `input = rebuilt gDHB + d (x) b`; zero for
    /// a system that is gDHB on the nose rather than modulo the quadric.
    pub correction: Option<Vec<K>>,
    pub failure: Option<String>,
}

impl<K: Scalar> RecognitionReport<K> {
    pub fn passed(&self) -> bool {
        self.normal_form.is_some()
    }

    fn fail(basis: LinearMap<K>, condition1: bool, msg: impl Into<String>) -> Self {
        RecognitionReport {
            condition1,
            condition3: [None, None, None, None],
            condition2: None,
            normal_form: None,
            basis_used: basis,
            correction: None,
            failure: Some(msg.into()),
        }
    }
}

/// Two-minus sign patterns, ordered so that pattern `k` witnesses the cross
/// relation whose scalar is `beta~_{k+1}`: minus sets {1,2}, {2,3}, {1,3}.
fn two_minus_patterns<K: Scalar>() -> [Element<K>; 3] {
    [
        sign_pattern::<K>(&[1, 2]),
        sign_pattern::<K>(&[2, 3]),
        sign_pattern::<K>(&[1, 3]),
    ]
}

/// Run the three conditions in a candidate basis and extract the normal
/// form. `basis` is the map that carried the distinguished presentation into
/// the current one (as produced by [`ParametricAlgebra::change_basis`]); the
/// conditions are evaluated after undoing it, so scrambling by `M` and
/// passing `M` recovers the same normal form. `None` means the identity.
pub fn recognize<K: Scalar>(
    pa: &ParametricAlgebra<K>,
    basis: Option<&LinearMap<K>>,
) -> Result<RecognitionReport<K>> {
    if !K::EXACT {
        return Err(Error::ExactDomainRequired("recognize"));
    }
    let basis_used = basis.cloned().unwrap_or_else(|| LinearMap::identity(DIM));
    let local = match basis {
        None => pa.clone(),
        Some(m) => pa.change_basis(&m.inverse_map()?)?,
    };
    let e = all_ones::<K>();

    if !check_unit_for_all_c(&local, &e)? {
        return Ok(RecognitionReport::fail(
            basis_used,
            false,
            "condition 1 failed: e = x0+x1+x2+x3 is not the unit for all c",
        ));
    }

    let mut condition3: [Option<K>; 4] = [None, None, None, None];
    for j in 0..DIM {
        condition3[j] = check_square_all_c(&local, &sign_pattern::<K>(&[j]), &e)?;
    }
    if condition3.iter().any(|s| s.is_none()) {
        let mut report = RecognitionReport::fail(
            basis_used,
            true,
            "condition 3 failed: a one-minus square is not proportional to e for all c",
        );
        report.condition3 = condition3;
        return Ok(report);
    }

    let patterns = two_minus_patterns::<K>();
    let Some(witness) = solve_some_c(&local, &patterns, &e)? else {
        let mut report = RecognitionReport::fail(
            basis_used,
            true,
            "condition 2 failed: no parameter c makes the two-minus squares proportional to e",
        );
        report.condition3 = condition3;
        return Ok(report);
    };

    match extract_in_distinguished_basis(&local, &condition3, &witness) {
        Ok((nf, correction)) => Ok(RecognitionReport {
            condition1: true,
            condition3,
            condition2: Some(witness),
            normal_form: Some(nf),
            basis_used,
            correction: Some(correction),
            failure: None,
        }),
        Err(Error::NotGdhb(msg)) => {
            let mut report = RecognitionReport::fail(basis_used, true, msg);
            report.condition3 = condition3;
            report.condition2 = Some(witness);
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

/// Extract the normal form, verifying the cross-product shape, the quadric
/// shape, and that the input tensor is the rebuilt gDHB tensor up to a
/// `d (x) b` correction (which vanishes on the invariant surface).
pub fn extract_normal_form<K: Scalar>(
    pa: &ParametricAlgebra<K>,
    basis: Option<&LinearMap<K>>,
) -> Result<NormalForm<K>> {
    let report = recognize(pa, basis)?;
    report.normal_form.ok_or_else(|| {
        Error::NotGdhb(
            report
                .failure
                .unwrap_or_else(|| "recognition failed".into()),
        )
    })
}

fn extract_in_distinguished_basis<K: Scalar>(
    pa: &ParametricAlgebra<K>,
    condition3: &[Option<K>; 4],
    witness: &CWitness<K>,
) -> Result<(NormalForm<K>, Vec<K>)> {
    let e = all_ones::<K>();
    let alpha_tilde: [K; 3] = [
        condition3[1].clone().unwrap(),
        condition3[2].clone().unwrap(),
        condition3[3].clone().unwrap(),
    ];

    // Quadric shape in the e-basis coordinates.
    let (_, eform) = quadric_in_basis(&pa.quadric, &e_basis_map::<K>())?;
    if !eform.gamma_sum_zero {
        return Err(Error::NotGdhb("gamma coefficients do not sum to zero".into()));
    }
    if !eform.gamma_nonzero {
        return Err(Error::NotGdhb(
            "a gamma coefficient vanishes (the quadric is not irreducible)".into(),
        ));
    }
    if eform.e0_monomials.iter().any(|c| !c.is_zero())
        || eform.square_monomials.iter().any(|c| !c.is_zero())
    {
        return Err(Error::NotGdhb("quadric is not in gamma form in the e-basis".into()));
    }
    let gamma = eform.gamma;

    // Cross products at the witness: e_i . e_j = e_i + e_j + beta~ e_0.
    let e_rows = e_basis_rows::<K>();
    let e_elem = |i: usize| e_rows.row(i).to_vec();
    let mut beta_tilde = Vec::with_capacity(3);
    for (i, j) in [(1, 2), (2, 3), (1, 3)] {
        let (ei, ej) = (e_elem(i), e_elem(j));
        let p = pa.product_affine(&ei, &ej)?;
        // Value at the witness: base + B(e_i, e_j) * x_c.
        let mut val = p.base.clone();
        for (t, vt) in val.iter_mut().enumerate() {
            *vt = vt.add(&p.quadric_coeff.mul(&witness.c[t]));
        }
        let mut diff = val;
        for (t, d) in diff.iter_mut().enumerate() {
            *d = d.sub(&ei[t]).sub(&ej[t]);
        }
        let Some(bt) = proportionality(&diff, &e) else {
            return Err(Error::NotGdhb(format!(
                "cross product e_{i} . e_{j} - e_{i} - e_{j} is not proportional to e_0"
            )));
        };
        beta_tilde.push(bt);
    }
    let beta_tilde: [K; 3] = beta_tilde.try_into().unwrap();

    let quarter = K::ratio(1, 4);
    let alpha: [K; 3] = std::array::from_fn(|j| {
        K::one().sub(&alpha_tilde[j]).mul(&quarter)
    });
    // beta_j = -(1 + beta~_j)/2 + gamma_j (1 + beta~_3) / (2 gamma_3); the
    // correction makes the result independent of which witness c was picked.
    let one_b3 = K::one().add(&beta_tilde[2]);
    let g3_inv = gamma[2].inv().expect("gamma_3 nonzero");
    let half = K::ratio(1, 2);
    let beta: [K; 2] = std::array::from_fn(|j| {
        K::one()
            .add(&beta_tilde[j])
            .mul(&half)
            .neg()
            .add(&gamma[j].mul(&one_b3).mul(&g3_inv).mul(&half))
    });
    let c_derived = one_b3.mul(&quarter).mul(&g3_inv);

    // Rebuild the gDHB tensor and demand input = rebuilt + d (x) b exactly.
    let rebuilt = gdhb_tensor(&alpha, &beta);
    let mut correction = vec![K::zero(); DIM];
    let mut pivot = None;
    'outer: for j in 0..DIM {
        for k in 0..DIM {
            if !pa.quadric.entry(j, k).is_zero() {
                pivot = Some((j, k));
                break 'outer;
            }
        }
    }
    let (pj, pk) = pivot.expect("gamma nonzero implies a nonzero quadric entry");
    let b_pivot_inv = pa.quadric.entry(pj, pk).inv().unwrap();
    for i in 0..DIM {
        correction[i] = pa
            .base()
            .get(i, pj, pk)
            .sub(rebuilt.get(i, pj, pk))
            .mul(&b_pivot_inv);
    }
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let want = rebuilt
                    .get(i, j, k)
                    .add(&correction[i].mul(pa.quadric.entry(j, k)));
                if pa.base().get(i, j, k) != &want {
                    return Err(Error::NotGdhb(
                        "tensor is not a gDHB tensor modulo the quadric".into(),
                    ));
                }
            }
        }
    }

    Ok((
        NormalForm {
            alpha_tilde,
            beta_tilde,
            gamma,
            alpha,
            beta,
            c: std::array::from_fn(|_| c_derived.clone()),
        },
        correction,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fuchsian::{build_gdhb, FuchsianData};
    use crate::scalar::{rat, Rat};

    fn roundtrip_pa() -> ParametricAlgebra<Rat> {
        ParametricAlgebra::from_gdhb(&corpus::roundtrip_gdhb()).unwrap()
    }

    #[test]
    fn specialize_with_zero_quadric_ignores_c() {
        let base = corpus::roundtrip_gdhb().system.tensor().clone();
        let pa = ParametricAlgebra::new(base.clone(), QuadricForm::zero(4)).unwrap();
        let a1 = pa.specialize(&vec![rat(1, 1); 4]).unwrap();
        let a2 = pa.specialize(&vec![rat(0, 1); 4]).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(a1.tensor(), &base);
    }

    #[test]
    fn specialize_at_zero_is_the_bare_tensor() {
        let pa = roundtrip_pa();
        let a = pa.specialize(&vec![rat(0, 1); 4]).unwrap();
        assert_eq!(a.tensor(), pa.base());
    }

    #[test]
    fn product_affine_reads_quadric_diagonal() {
        let mut q = QuadricForm::zero(4);
        q = QuadricForm::from_monomials(4, &[(0, 0, rat(5, 1))]);
        let pa = ParametricAlgebra::new(SymTensor::zeros(4), q).unwrap();
        let x0 = basis_vector::<Rat>(0);
        let p = pa.product_affine(&x0, &x0).unwrap();
        assert_eq!(p.quadric_coeff, rat(5, 1));
        assert!(p.base.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn unit_for_all_c_on_roundtrip_fixture() {
        let pa = roundtrip_pa();
        assert!(check_unit_for_all_c(&pa, &all_ones::<Rat>()).unwrap());
        // Cross-check on a few specializations.
        for c in [
            vec![rat(0, 1); 4],
            vec![rat(1, 1), rat(-2, 1), rat(1, 3), rat(5, 1)],
            vec![rat(7, 2); 4],
        ] {
            let alg = pa.specialize(&c).unwrap();
            assert_eq!(alg.find_unit().unwrap(), Some(all_ones::<Rat>()));
        }
    }

    #[test]
    fn padded_euler_has_no_unit_in_any_specialization() {
        let (sys, q) = corpus::padded_euler();
        let pa = ParametricAlgebra::new(sys.into_tensor(), q).unwrap();
        assert!(!check_unit_for_all_c(&pa, &all_ones::<Rat>()).unwrap());
        for c in [vec![rat(0, 1); 4], vec![rat(2, 1), rat(1, 1), rat(-1, 1), rat(3, 1)]] {
            assert_eq!(pa.specialize(&c).unwrap().find_unit().unwrap(), None);
        }
    }

    #[test]
    fn unit_squares_to_itself() {
        let pa = roundtrip_pa();
        let e = all_ones::<Rat>();
        assert_eq!(check_square_all_c(&pa, &e, &e).unwrap(), Some(rat(1, 1)));
    }

    #[test]
    fn chosen_alpha_tilde_round_trip() {
        // alpha~ = (4, 9, 25) corresponds to alpha = ((1-4)/4, (1-9)/4, (1-25)/4).
        let alpha = vec![rat(-3, 4), rat(-2, 1), rat(-6, 1)];
        let beta = vec![rat(1, 2), rat(-1, 1)];
        let poles = vec![rat(0, 1), rat(1, 1), rat(-1, 1)];
        let fd = FuchsianData::new(poles, alpha, beta).unwrap();
        let pa = ParametricAlgebra::from_gdhb(&build_gdhb(&fd).unwrap()).unwrap();
        let e = all_ones::<Rat>();
        let want = [rat(4, 1), rat(9, 1), rat(25, 1)];
        for (j, w) in want.iter().enumerate() {
            let v = sign_pattern::<Rat>(&[j + 1]);
            assert_eq!(check_square_all_c(&pa, &v, &e).unwrap(), Some(w.clone()));
        }
        // A two-minus pattern has B(v, v) != 0, so no for-all-c scalar.
        let v = sign_pattern::<Rat>(&[1, 2]);
        assert_eq!(check_square_all_c(&pa, &v, &e).unwrap(), None);
    }

    #[test]
    fn empty_pattern_list_is_vacuous() {
        let pa = roundtrip_pa();
        let w = solve_some_c(&pa, &[], &all_ones::<Rat>()).unwrap().unwrap();
        assert_eq!(w.c, vec![rat(0, 1); 4]);
        assert!(w.lambdas.is_empty());
    }

    #[test]
    fn no_c_when_quadric_is_zero_and_squares_are_not_proportional() {
        let (sys, _) = corpus::padded_euler();
        let pa = ParametricAlgebra::new(sys.into_tensor(), QuadricForm::zero(4)).unwrap();
        let got = solve_some_c(&pa, &two_minus_patterns::<Rat>(), &all_ones::<Rat>()).unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn roundtrip_recognition_recovers_parameters() {
        let (alpha, beta, _) = corpus::roundtrip_parameters();
        let pa = roundtrip_pa();
        let report = recognize(&pa, None).unwrap();
        assert!(report.passed(), "failure: {:?}", report.failure);
        let nf = report.normal_form.unwrap();
        assert_eq!(nf.alpha.to_vec(), alpha);
        assert_eq!(nf.beta.to_vec(), beta);
        // The fixture is gDHB on the nose: no quadric correction.
        assert!(report.correction.unwrap().iter().all(|d| d.is_zero()));
    }

    #[test]
    fn recognition_is_covariant_under_scrambling() {
        let pa = roundtrip_pa();
        let nf0 = extract_normal_form(&pa, None).unwrap();
        let m = LinearMap::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(0, 1), rat(-1, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 2), rat(0, 1)],
            vec![rat(3, 1), rat(0, 1), rat(1, 1), rat(1, 1)],
            vec![rat(0, 1), rat(0, 1), rat(-2, 1), rat(1, 1)],
        ]);
        assert!(m.is_invertible());
        let scrambled = pa.change_basis(&m).unwrap();
        let nf1 = extract_normal_form(&scrambled, Some(&m)).unwrap();
        assert_eq!(nf0, nf1);
        // Without the basis the scrambled family fails outright.
        assert!(!recognize(&scrambled, None).unwrap().passed());
    }

    #[test]
    fn condition3_fails_for_diagonal_quadric_term() {
        // Keep the unit condition (zero column sums) but give x_1^2 a quadric
        // coefficient, which breaks B(e_1, e_1) = 0.
        let pa = roundtrip_pa();
        let delta = QuadricForm::from_monomials(
            4,
            &[
                (1, 1, rat(1, 1)),
                (1, 2, rat(-1, 1)),
                (1, 3, rat(-1, 1)),
                (2, 3, rat(1, 1)),
            ],
        );
        let q = QuadricForm::new(Mat::from_fn(4, 4, |i, j| {
            pa.quadric().entry(i, j).add(delta.entry(i, j))
        }))
        .unwrap();
        let pa2 = ParametricAlgebra::new(pa.base().clone(), q).unwrap();
        let report = recognize(&pa2, None).unwrap();
        assert!(report.condition1);
        assert!(report.condition3[1].is_none());
        assert!(!report.passed());
    }

    #[test]
    fn gamma3_zero_is_rejected() {
        // Zero base tensor apart from squares, quadric with b_13 = 0.
        let mut t = SymTensor::<Rat>::zeros(4);
        for i in 0..4 {
            t.add_monomial(i, i, i, &rat(1, 1));
        }
        let q = QuadricForm::from_monomials(
            4,
            &[
                (0, 1, rat(1, 1)),
                (2, 3, rat(1, 1)),
                (0, 3, rat(-1, 1)),
                (1, 2, rat(-1, 1)),
            ],
        );
        let pa = ParametricAlgebra::new(t, q).unwrap();
        let report = recognize(&pa, None).unwrap();
        assert!(report.condition1);
        assert!(!report.passed());
        assert!(report.failure.unwrap().contains("gamma"));
    }

    #[test]
    fn affine_product_matches_specializations() {
        let pa = roundtrip_pa();
        let u = vec![rat(1, 1), rat(-2, 1), rat(3, 1), rat(1, 2)];
        let v = vec![rat(0, 1), rat(1, 1), rat(1, 3), rat(-1, 1)];
        let p = pa.product_affine(&u, &v).unwrap();
        for c in [
            vec![rat(0, 1); 4],
            vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1)],
            vec![rat(-1, 2), rat(1, 5), rat(0, 1), rat(7, 1)],
        ] {
            let alg = pa.specialize(&c).unwrap();
            let direct = alg.multiply(&u, &v).unwrap();
            let expect: Vec<Rat> = (0..4)
                .map(|i| p.base[i].add(&p.quadric_coeff.mul(&c[i])))
                .collect();
            assert_eq!(direct, expect);
        }
        // Symmetry of the quadric coefficient.
        let p2 = pa.product_affine(&v, &u).unwrap();
        assert_eq!(p.quadric_coeff, p2.quadric_coeff);
    }
}
