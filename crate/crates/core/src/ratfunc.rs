//! Univariate polynomials and rational functions over an exact scalar field.
//!
//! Used for Fuchsian potentials: partial-fraction extraction needs exact
//! division, gcd reduction, and evaluation, nothing more.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Scalar> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: K) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::new(vec![K::zero(), K::one()])
    }

    /// Monic linear factor `z - root`.
    pub fn linear(root: &K) -> Self {
        Poly::new(vec![root.neg(), K::one()])
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(K::zero);
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_else(K::zero);
                    a.add(&b)
                })
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &K) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul(&K::from_i64(i as i64 + 1)))
                .collect(),
        )
    }

    pub fn eval(&self, z: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    /// Euclidean division; panics only if `rhs` is zero.
    pub fn divrem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let dl = rhs.leading().unwrap().inv().expect("field leading coeff");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![K::zero(); self.coeffs.len().saturating_sub(rhs.coeffs.len() - 1)];
        while rem.len() >= rhs.coeffs.len() && !rem.is_empty() {
            let last = rem.last().unwrap();
            if last.is_zero() {
                rem.pop();
                continue;
            }
            let k = rem.len() - rhs.coeffs.len();
            let f = last.mul(&dl);
            for (i, c) in rhs.coeffs.iter().enumerate() {
                let t = c.mul(&f);
                rem[k + i] = rem[k + i].sub(&t);
            }
            quo[k] = f;
            rem.pop();
        }
        (Poly::new(quo), Poly::new(rem))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading")),
        }
    }

    /// Multiplicity of `root` as a zero of the polynomial.
    pub fn root_multiplicity(&self, root: &K) -> usize {
        let mut p = self.clone();
        let lin = Poly::linear(root);
        let mut m = 0;
        while !p.is_zero() {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                break;
            }
            m += 1;
            p = q;
        }
        m
    }
}

/// Rational function kept in lowest terms with a monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn<K> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Scalar> RationalFn<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let mut r = RationalFn { num, den };
        r.reduce();
        Ok(r)
    }

    pub fn zero() -> Self {
        RationalFn {
            num: Poly::zero(),
            den: Poly::constant(K::one()),
        }
    }

    pub fn constant(c: K) -> Self {
        RationalFn {
            num: Poly::constant(c),
            den: Poly::constant(K::one()),
        }
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RationalFn {
            num: p,
            den: Poly::constant(K::one()),
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::constant(K::one());
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() > Some(0) || g.degree() == Some(0) {
            let (n, rn) = self.num.divrem(&g);
            let (d, rd) = self.den.divrem(&g);
            debug_assert!(rn.is_zero() && rd.is_zero());
            self.num = n;
            self.den = d;
        }
        let lead = self.den.leading().unwrap().clone();
        let li = lead.inv().expect("nonzero leading");
        self.num = self.num.scale(&li);
        self.den = self.den.scale(&li);
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RationalFn::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RationalFn::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero den")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::InvalidInput("division by zero rational function".into()));
        }
        RationalFn::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn scale(&self, k: &K) -> Self {
        RationalFn::new(self.num.scale(k), self.den.clone()).expect("nonzero den")
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd') / d^2
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        RationalFn::new(num, den).expect("nonzero den")
    }

    pub fn eval(&self, z: &K) -> Option<K> {
        let d = self.den.eval(z);
        d.inv().map(|di| self.num.eval(z).mul(&di))
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.num.eval_c64(z) / self.den.eval_c64(z)
    }

    /// Roots of the denominator are the only candidate poles.
    pub fn pole_multiplicity(&self, at: &K) -> usize {
        self.den.root_multiplicity(at)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn p(coeffs: &[i64]) -> Poly<Rat> {
        Poly::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let a = p(&[-1, 0, 0, 1]); // z^3 - 1
        let b = p(&[-1, 1]); // z - 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, p(&[1, 1, 1]));
        assert_eq!(a.gcd(&p(&[1, 2, 1]).mul(&b)), b.monic());
    }

    #[test]
    fn rational_reduction_lowest_terms() {
        let f = RationalFn::new(p(&[0, 2, 2]), p(&[0, 0, 4])).unwrap(); // (2z+2z^2)/(4z^2)
        assert_eq!(f.num(), &p(&[1, 1]).scale(&rat(1, 2)));
        assert_eq!(f.den(), &p(&[0, 1]));
        assert_eq!(f.eval(&rat(1, 1)).unwrap(), rat(1, 1));
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dz (1/z) = -1/z^2
        let f = RationalFn::new(p(&[1]), p(&[0, 1])).unwrap();
        let df = f.derivative();
        assert_eq!(df.num(), &p(&[-1]));
        assert_eq!(df.den(), &p(&[0, 0, 1]));
    }

    #[test]
    fn multiplicity_counting() {
        let d = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1])); // (z-1)^2 (z+2)
        assert_eq!(d.root_multiplicity(&rat(1, 1)), 2);
        assert_eq!(d.root_multiplicity(&rat(-2, 1)), 1);
        assert_eq!(d.root_multiplicity(&rat(3, 1)), 0);
    }
}
