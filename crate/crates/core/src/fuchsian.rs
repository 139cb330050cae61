//! Fuchsian potentials, generalized Darboux-Halphen-Brioschi systems, and the
//! hypergeometric parameter maps.

use crate::error::{Error, Result};
use crate::quadric::QuadricForm;
use crate::ratfunc::{Poly, RationalFn};
use crate::scalar::Scalar;
use crate::system::QuadraticSystem;
use crate::tensor::SymTensor;

/// Data of the second-order equation `y'' + Q(z) y = 0` with
/// `Q = sum alpha_j/(z-a_j)^2 + sum beta_j/((z-a_j)(z-a_{j+1}))`.
///
/// Pole ordering matters: the `beta` chain couples consecutive poles.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianData<K> {
    poles: Vec<K>,
    alpha: Vec<K>,
    beta: Vec<K>,
}

impl<K: Scalar> FuchsianData<K> {
    pub fn new(poles: Vec<K>, alpha: Vec<K>, beta: Vec<K>) -> Result<Self> {
        let m = poles.len();
        if m < 2 {
            return Err(Error::InvalidInput("at least two poles required".into()));
        }
        if alpha.len() != m || beta.len() != m - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {m} alphas and {} betas",
                m - 1
            )));
        }
        for i in 0..m {
            for j in 0..i {
                if poles[i] == poles[j] {
                    return Err(Error::DuplicatePoles);
                }
            }
        }
        Ok(FuchsianData { poles, alpha, beta })
    }

    pub fn m(&self) -> usize {
        self.poles.len()
    }

    pub fn poles(&self) -> &[K] {
        &self.poles
    }

    pub fn alpha(&self) -> &[K] {
        &self.alpha
    }

    pub fn beta(&self) -> &[K] {
        &self.beta
    }
}

/// A gDHB system: the quadratic field in `X_0 .. X_m` together with the
/// anharmonic constraint quadrics (none when `m = 2`).
#[derive(Debug, Clone, PartialEq)]
pub struct GDHBSystem<K> {
    pub m: usize,
    pub system: QuadraticSystem<K>,
    pub constraints: Vec<QuadricForm<K>>,
}

impl<K: Scalar> GDHBSystem<K> {
    pub fn from_parts(m: usize, system: QuadraticSystem<K>, constraints: Vec<QuadricForm<K>>) -> Self {
        GDHBSystem {
            m,
            system,
            constraints,
        }
    }

    pub fn n(&self) -> usize {
        self.m + 1
    }
}

/// Shared inhomogeneity matrix of the gDHB field:
/// `G(X) = -sum alpha_j (X_j - X_0)^2 - sum beta_j (X_j - X_0)(X_{j+1} - X_0)`.
fn gdhb_shared_quadric<K: Scalar>(alpha: &[K], beta: &[K]) -> QuadricForm<K> {
    let m = alpha.len();
    let n = m + 1;
    let mut monomials: Vec<(usize, usize, K)> = Vec::new();
    let mut add_product = |p: &[(usize, K)], q: &[(usize, K)], scale: &K| {
        for (i, ci) in p {
            for (j, cj) in q {
                monomials.push((*i, *j, ci.mul(cj).mul(scale)));
            }
        }
    };
    for (j, aj) in alpha.iter().enumerate() {
        let d = [(j + 1, K::one()), (0, K::one().neg())];
        add_product(&d, &d, &aj.neg());
    }
    for (j, bj) in beta.iter().enumerate() {
        let d1 = [(j + 1, K::one()), (0, K::one().neg())];
        let d2 = [(j + 2, K::one()), (0, K::one().neg())];
        add_product(&d1, &d2, &bj.neg());
    }
    QuadricForm::from_monomials(n, &monomials)
}

/// Quadratic tensor of the gDHB field for the given parameters; the `m + 1`
/// right-hand sides share the inhomogeneity and differ only in `X_k^2`.
pub fn gdhb_tensor<K: Scalar>(alpha: &[K], beta: &[K]) -> SymTensor<K> {
    let n = alpha.len() + 1;
    let g = gdhb_shared_quadric(alpha, beta);
    let mut t = SymTensor::zeros(n);
    for i in 0..n {
        for p in 0..n {
            for q in 0..n {
                if !g.entry(p, q).is_zero() {
                    t.set_symmetric(i, p, q, g.entry(p, q).clone());
                }
            }
        }
        let own = t.get(i, i, i).add(&K::one());
        t.set_symmetric(i, i, i, own);
    }
    t
}

/// Build the gDHB system attached to Fuchsian data, with its anharmonic
/// constraints.
pub fn build_gdhb<K: Scalar>(fd: &FuchsianData<K>) -> Result<GDHBSystem<K>> {
    let system = QuadraticSystem::from_tensor(gdhb_tensor(fd.alpha(), fd.beta()));
    let constraints = anharmonic_constraints(fd.poles())?;
    Ok(GDHBSystem {
        m: fd.m(),
        system,
        constraints,
    })
}

/// An argument of the anharmonic ratio: a finite scalar or the point at
/// infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum CrArg<K> {
    Finite(K),
    Infinity,
}

impl<K> From<K> for CrArg<K> {
    fn from(v: K) -> Self {
        CrArg::Finite(v)
    }
}

/// The anharmonic (cross) ratio `(a, b, c, d) = (a-b)(c-d) / ((c-b)(a-d))`,
/// invariant under Moebius maps applied to all four arguments. At most one
/// argument may be infinite; the two factors containing it cancel in the
/// limit.
pub fn cross_ratio<K: Scalar>(
    a: &CrArg<K>,
    b: &CrArg<K>,
    c: &CrArg<K>,
    d: &CrArg<K>,
) -> Result<K> {
    let args = [a, b, c, d];
    let inf_count = args.iter().filter(|x| matches!(x, CrArg::Infinity)).count();
    if inf_count > 1 {
        return Err(Error::IndeterminateCrossRatio(
            "more than one infinite argument".into(),
        ));
    }
    // Factor pairs: numerator (a-b), (c-d); denominator (c-b), (a-d). A factor
    // involving the infinite argument is dropped from both sides.
    let diff = |x: &CrArg<K>, y: &CrArg<K>| -> Option<K> {
        match (x, y) {
            (CrArg::Finite(p), CrArg::Finite(q)) => Some(p.sub(q)),
            _ => None,
        }
    };
    let mut num = K::one();
    let mut den = K::one();
    for (x, y, is_num) in [(a, b, true), (c, d, true), (c, b, false), (a, d, false)] {
        if let Some(f) = diff(x, y) {
            if is_num {
                num = num.mul(&f);
            } else {
                den = den.mul(&f);
            }
        }
    }
    match den.inv() {
        Some(di) => {
            if num.is_zero() && den.is_zero() {
                Err(Error::IndeterminateCrossRatio("0/0 configuration".into()))
            } else {
                Ok(num.mul(&di))
            }
        }
        None => Err(Error::IndeterminateCrossRatio(if num.is_zero() {
            "0/0 configuration".into()
        } else {
            "infinite value".into()
        })),
    }
}

/// Constraint quadrics tying the variables to the pole configuration.
///
/// Index 0 is paired with the point at infinity, so `poles[j-1]` pairs with
/// `X_j`. For each tuple `(0, j, j+1, j+2)` the cross-ratio equality
/// `(X_0, X_j, X_{j+1}, X_{j+2}) = (inf, a_j, a_{j+1}, a_{j+2})` cleared of
/// denominators gives one quadric; `m - 2` quadrics in total, empty for
/// `m = 2`. Each quadric is canonicalized to leading coefficient 1.
pub fn anharmonic_constraints<K: Scalar>(poles: &[K]) -> Result<Vec<QuadricForm<K>>> {
    let m = poles.len();
    let n = m + 1;
    let mut out = Vec::new();
    if m < 3 {
        return Ok(out);
    }
    for j in 1..=m - 2 {
        let (aj, ajj, ajjj) = (&poles[j - 1], &poles[j], &poles[j + 1]);
        // rho = (inf, a_j, a_{j+1}, a_{j+2}) = (a_{j+1} - a_{j+2}) / (a_{j+1} - a_j);
        // cleared: (a_{j+1}-a_j)(X_0-X_j)(X_{j+1}-X_{j+2})
        //        - (a_{j+1}-a_{j+2})(X_{j+1}-X_j)(X_0-X_{j+2}) = 0.
        let k1 = ajj.sub(aj);
        let k2 = ajj.sub(ajjj);
        let mut monomials: Vec<(usize, usize, K)> = Vec::new();
        let mut add_product = |p: &[(usize, K)], q: &[(usize, K)], scale: &K| {
            for (u, cu) in p {
                for (v, cv) in q {
                    monomials.push((*u, *v, cu.mul(cv).mul(scale)));
                }
            }
        };
        add_product(
            &[(0, K::one()), (j, K::one().neg())],
            &[(j + 1, K::one()), (j + 2, K::one().neg())],
            &k1,
        );
        add_product(
            &[(j + 1, K::one()), (j, K::one().neg())],
            &[(0, K::one()), (j + 2, K::one().neg())],
            &k2.neg(),
        );
        out.push(QuadricForm::from_monomials(n, &monomials).canonicalized());
    }
    Ok(out)
}

/// Assemble the rational potential `Q(z)` from Fuchsian data.
pub fn q_rational_from_fuchsian<K: Scalar>(fd: &FuchsianData<K>) -> RationalFn<K> {
    let mut q = RationalFn::zero();
    for (j, a) in fd.alpha().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let lin = Poly::linear(&fd.poles()[j]);
        let den = lin.mul(&lin);
        q = q.add(&RationalFn::new(Poly::constant(a.clone()), den).unwrap());
    }
    for (j, b) in fd.beta().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let den = Poly::linear(&fd.poles()[j]).mul(&Poly::linear(&fd.poles()[j + 1]));
        q = q.add(&RationalFn::new(Poly::constant(b.clone()), den).unwrap());
    }
    q
}

/// Recover Fuchsian data from a rational potential and an ordered pole list.
///
/// The potential must have only the listed poles, each of order at most two,
/// and decay like `O(z^-2)` at infinity; the simple-pole residues must then
/// solve the triangular `beta` chain. Anything else is rejected.
pub fn fuchsian_from_q<K: Scalar>(q: &RationalFn<K>, poles: &[K]) -> Result<FuchsianData<K>> {
    if !K::EXACT {
        return Err(Error::ExactDomainRequired("fuchsian_from_q"));
    }
    let m = poles.len();
    if m < 2 {
        return Err(Error::InvalidInput("at least two poles required".into()));
    }
    if !q.is_zero() {
        let dn = q.num().degree().unwrap_or(0);
        let dd = q.den().degree().unwrap_or(0);
        if dn + 2 > dd {
            return Err(Error::NotRepresentable(
                "potential does not vanish to second order at infinity".into(),
            ));
        }
    }
    let mut alpha = Vec::with_capacity(m);
    let mut residues = Vec::with_capacity(m);
    for a in poles {
        let mult = q.pole_multiplicity(a);
        match mult {
            0 => {
                alpha.push(K::zero());
                residues.push(K::zero());
            }
            1 => {
                let d = q.den().divrem(&Poly::linear(a)).0;
                let dv = d.eval(a);
                let r = q
                    .num()
                    .eval(a)
                    .div(&dv)
                    .ok_or_else(|| Error::NotRepresentable("degenerate pole".into()))?;
                alpha.push(K::zero());
                residues.push(r);
            }
            2 => {
                let lin = Poly::linear(a);
                let d = q.den().divrem(&lin).0.divrem(&lin).0;
                // h = (z - a)^2 Q; alpha = h(a), residue = h'(a).
                let h = RationalFn::new(q.num().clone(), d).expect("nonzero denominator");
                alpha.push(h.eval(a).expect("pole removed"));
                residues.push(h.derivative().eval(a).expect("pole removed"));
            }
            _ => {
                return Err(Error::NotRepresentable(format!(
                    "pole of order {mult} at {a}"
                )))
            }
        }
    }
    // Each 1/((z-a_j)(z-a_{j+1})) contributes residues beta_j/(a_j - a_{j+1})
    // at a_j and the negative at a_{j+1}; solve the chain forward.
    let mut beta = Vec::with_capacity(m - 1);
    let mut carried = K::zero(); // beta_{j-1}/(a_j - a_{j-1}) at the current pole
    for j in 0..m - 1 {
        let gap = poles[j].sub(&poles[j + 1]);
        let b = residues[j].sub(&carried).mul(&gap);
        carried = b
            .div(&poles[j + 1].sub(&poles[j]))
            .expect("poles distinct");
        beta.push(b);
    }
    if residues[m - 1] != carried {
        return Err(Error::NotRepresentable(
            "simple-pole residues do not close the chain (sum != 0)".into(),
        ));
    }
    let fd = FuchsianData::new(poles.to_vec(), alpha, beta)?;
    // Exact round-trip check catches unlisted poles or a polynomial part.
    if &q_rational_from_fuchsian(&fd) != q {
        return Err(Error::NotRepresentable(
            "potential has parts outside the listed pole structure".into(),
        ));
    }
    Ok(fd)
}

/// Reduce `y'' + p y' + q y = 0` to normal form `Y'' + Q Y = 0`:
/// `Q = q - p'/2 - p^2/4`.
pub fn normal_form_reduce<K: Scalar>(p: &RationalFn<K>, q: &RationalFn<K>) -> RationalFn<K> {
    let half = K::ratio(-1, 2);
    let quarter = K::ratio(-1, 4);
    q.add(&p.derivative().scale(&half))
        .add(&p.mul(p).scale(&quarter))
}

// ---------------------------------------------------------------------------
// Hypergeometric parameter maps
// ---------------------------------------------------------------------------

/// Hypergeometric parameters `(alpha, beta, gamma)` of `F(alpha, beta, gamma, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HGParams<K> {
    pub alpha: K,
    pub beta: K,
    pub gamma: K,
}

/// Coefficients `(a, b, c)` of the three-variable Halphen field.
#[derive(Debug, Clone, PartialEq)]
pub struct HalphenABC<K> {
    pub a: K,
    pub b: K,
    pub c: K,
}

/// Exponents `(p, q, r)` of the hypergeometric equation at its singular
/// points: `p = 1 - gamma`, `q = -alpha - beta + gamma`, `r = alpha - beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponents<K> {
    pub p: K,
    pub q: K,
    pub r: K,
}

pub fn exponents<K: Scalar>(hg: &HGParams<K>) -> Exponents<K> {
    Exponents {
        p: K::one().sub(&hg.gamma),
        q: hg.gamma.sub(&hg.alpha).sub(&hg.beta),
        r: hg.alpha.sub(&hg.beta),
    }
}

/// The `(a, b, c)` coefficients for which the Halphen field is solved by
/// `F(alpha, beta, gamma, z)`:
///   a = (2ab' - g - a'g - b'g + g^2)/4,
///   b = (a'^2 + b'^2 + g - a'g - b'g - 1)/4,
///   c = (-2a'b' - g + a'g + b'g)/4,
/// writing a', b', g for the hypergeometric parameters.
pub fn abc_from_hypergeometric<K: Scalar>(hg: &HGParams<K>) -> HalphenABC<K> {
    let (al, be, ga) = (&hg.alpha, &hg.beta, &hg.gamma);
    let quarter = K::ratio(1, 4);
    let two_ab = K::from_i64(2).mul(al).mul(be);
    let ag = al.mul(ga);
    let bg = be.mul(ga);
    let a = two_ab
        .sub(ga)
        .sub(&ag)
        .sub(&bg)
        .add(&ga.mul(ga))
        .mul(&quarter);
    let b = al
        .mul(al)
        .add(&be.mul(be))
        .add(ga)
        .sub(&ag)
        .sub(&bg)
        .sub(&K::one())
        .mul(&quarter);
    let c = two_ab.neg().sub(ga).add(&ag).add(&bg).mul(&quarter);
    HalphenABC { a, b, c }
}

/// The three-variable Halphen field
/// `dX_i/dtau = X_i^2 + c (X0-X1)^2 + b (X2-X0)^2 + a (X1-X2)^2`.
pub fn halphen2_from_abc<K: Scalar>(abc: &HalphenABC<K>) -> QuadraticSystem<K> {
    let mut monomials: Vec<(usize, usize, K)> = Vec::new();
    let mut add_square = |i: usize, j: usize, scale: &K| {
        monomials.push((i, i, scale.clone()));
        monomials.push((j, j, scale.clone()));
        monomials.push((i, j, K::from_i64(-2).mul(scale)));
    };
    add_square(0, 1, &abc.c);
    add_square(2, 0, &abc.b);
    add_square(1, 2, &abc.a);
    let shared = QuadricForm::from_monomials(3, &monomials);
    let mut t = SymTensor::zeros(3);
    for i in 0..3 {
        for p in 0..3 {
            for q in 0..3 {
                if !shared.entry(p, q).is_zero() {
                    t.set_symmetric(i, p, q, shared.entry(p, q).clone());
                }
            }
        }
        let own = t.get(i, i, i).add(&K::one());
        t.set_symmetric(i, i, i, own);
    }
    QuadraticSystem::from_tensor(t)
}

/// Fuchsian data (poles 0 and 1) whose gDHB system is the Halphen field:
/// `alpha_1 = -(a+c)`, `alpha_2 = -(a+b)`, `beta_1 = 2a`.
pub fn fuchsian_from_halphen_abc<K: Scalar>(abc: &HalphenABC<K>) -> FuchsianData<K> {
    FuchsianData::new(
        vec![K::zero(), K::one()],
        vec![abc.a.add(&abc.c).neg(), abc.a.add(&abc.b).neg()],
        vec![K::from_i64(2).mul(&abc.a)],
    )
    .expect("poles 0 and 1 are distinct")
}

/// The algebra of the Halphen field in the distinguished basis
/// `e1 = -x+y+z, e2 = x-y+z, e3 = x+y-z`, built directly from its
/// multiplication table (unit `e = e1+e2+e3`).
pub fn halphen2_algebra_table<K: Scalar>(abc: &HalphenABC<K>) -> crate::algebra::Algebra<K> {
    let four = K::from_i64(4);
    let sq = |u: &K, v: &K| K::one().add(&four.mul(&u.add(v)));
    let e11 = sq(&abc.b, &abc.c);
    let e22 = sq(&abc.a, &abc.c);
    let e33 = sq(&abc.a, &abc.b);
    let mut t = SymTensor::zeros(3);
    for i in 0..3 {
        t.set_symmetric(i, 0, 0, e11.clone());
        t.set_symmetric(i, 1, 1, e22.clone());
        t.set_symmetric(i, 2, 2, e33.clone());
    }
    // e1.e2 = -e3 - 4c e, e2.e3 = -e1 - 4a e, e1.e3 = -e2 - 4b e.
    let cross = |t: &mut SymTensor<K>, j: usize, k: usize, minus_idx: usize, coeff: &K| {
        for i in 0..3 {
            let mut v = four.mul(coeff).neg();
            if i == minus_idx {
                v = v.sub(&K::one());
            }
            t.set_symmetric(i, j, k, v);
        }
    };
    cross(&mut t, 0, 1, 2, &abc.c);
    cross(&mut t, 1, 2, 0, &abc.a);
    cross(&mut t, 0, 2, 1, &abc.b);
    crate::algebra::Algebra::from_tensor(t)
}
