//! Scalar domains.
//!
//! Three coefficient domains are supported: exact rationals, Eisenstein
//! rationals `a + b*w` with `w` a primitive cube root of unity, and complex
//! floating point. All symbolic decision procedures (units, derivations,
//! cofactors, recognition) demand an exact domain; the complex-float domain
//! exists for numerical integration and descriptor interchange.

use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Tag identifying a scalar domain in descriptors and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarDomain {
    Rational,
    Eisenstein,
    Complex,
}

impl ScalarDomain {
    pub fn name(self) -> &'static str {
        match self {
            ScalarDomain::Rational => "rational",
            ScalarDomain::Eisenstein => "eisenstein",
            ScalarDomain::Complex => "complex",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(ScalarDomain::Rational),
            "eisenstein" => Ok(ScalarDomain::Eisenstein),
            "complex" => Ok(ScalarDomain::Complex),
            other => Err(Error::Parse(format!("unknown scalar domain '{other}'"))),
        }
    }
}

/// Field operations shared by the three scalar domains.
///
/// `EXACT` distinguishes the decidable-equality domains from complex floats;
/// callers that implement theorem checks gate on it.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
    fn from_i64(v: i64) -> Self;
    /// The exact fraction `num/den` (den != 0).
    fn ratio(num: i64, den: i64) -> Self;
    /// Float embedding used by the numeric lab.
    fn to_c64(&self) -> Complex64;
    /// Snap a float back into the domain with denominators bounded by
    /// `max_den`; `None` when no convincing candidate exists.
    fn snap_from_c64(z: Complex64, max_den: u64) -> Option<Self>;
    fn parse(text: &str) -> Result<Self>;
    /// Canonical textual form; `parse(render(x)) == x` on exact domains.
    fn render(&self) -> String;
    fn domain() -> ScalarDomain;
}

/// Sum of a scalar iterator.
pub fn sum<K: Scalar>(items: impl IntoIterator<Item = K>) -> K {
    items
        .into_iter()
        .fold(K::zero(), |acc, x| acc.add(&x))
}

/// Dot product of two coordinate slices.
pub fn dot<K: Scalar>(a: &[K], b: &[K]) -> K {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).map(|(x, y)| x.mul(y)))
}

// ---------------------------------------------------------------------------
// Exact rationals
// ---------------------------------------------------------------------------

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rzero() -> BigRational {
    <BigRational as Zero>::zero()
}

fn rone() -> BigRational {
    <BigRational as One>::one()
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        rzero()
    }
    fn one() -> Self {
        rone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn ratio(num: i64, den: i64) -> Self {
        rat(num, den)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn snap_from_c64(z: Complex64, max_den: u64) -> Option<Self> {
        if z.im.abs() > SNAP_IMAG_TOL * z.re.abs().max(1.0) {
            return None;
        }
        snap_real(z.re, max_den)
    }
    fn parse(text: &str) -> Result<Self> {
        text.trim()
            .parse::<BigRational>()
            .map_err(|e| Error::Parse(format!("'{text}' is not a rational: {e}")))
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn domain() -> ScalarDomain {
        ScalarDomain::Rational
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // Avoids overflow for big numerators: scale both parts together.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

const SNAP_IMAG_TOL: f64 = 1e-7;
const SNAP_VALUE_TOL: f64 = 1e-7;

/// Continued-fraction rationalization of a float with a denominator bound.
fn snap_real(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, x.floor() as i128, 1i128);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let cand = BigRational::new(BigInt::from(p1), BigInt::from(q1));
        let err = (rational_to_f64(&cand) - x).abs();
        if err <= SNAP_VALUE_TOL * x.abs().max(1.0) * 1e-4 {
            break;
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let a = (1.0 / frac).floor();
        if !a.is_finite() || a.abs() >= 1e18 {
            break;
        }
        frac = 1.0 / frac - a;
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2.unsigned_abs() > max_den as u128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    if q1 == 0 {
        return None;
    }
    let cand = BigRational::new(BigInt::from(p1), BigInt::from(q1));
    let err = (rational_to_f64(&cand) - x).abs();
    if err <= SNAP_VALUE_TOL * x.abs().max(1.0) {
        Some(cand)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Eisenstein rationals a + b*w, w^2 = -1 - w
// ---------------------------------------------------------------------------

/// Element of the field Q(w) with `w = exp(2 pi i / 3)`.
///
/// The reduction `w^2 = -1 - w` is applied on every multiplication, so the
/// pair `(re, om)` is a canonical representation and equality is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eis {
    pub re: BigRational,
    pub om: BigRational,
}

impl Eis {
    pub fn new(re: BigRational, om: BigRational) -> Self {
        Eis { re, om }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Eis {
            re,
            om: rzero(),
        }
    }

    /// The generator w itself.
    pub fn omega() -> Self {
        Eis {
            re: rzero(),
            om: rone(),
        }
    }

    /// Field norm `x * conj(x) = re^2 - re*om + om^2`; zero only at zero.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.om + &self.om * &self.om
    }

    /// Complex conjugate `(re - om) - om*w`.
    pub fn conj(&self) -> Self {
        Eis {
            re: &self.re - &self.om,
            om: -self.om.clone(),
        }
    }
}

impl fmt::Display for Eis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.om) {
            write!(f, "{}", self.re)
        } else if self.om.is_negative() {
            write!(f, "{}-{} w", self.re, -self.om.clone())
        } else {
            write!(f, "{}+{} w", self.re, self.om)
        }
    }
}

impl Scalar for Eis {
    const EXACT: bool = true;

    fn zero() -> Self {
        Eis::from_rational(rzero())
    }
    fn one() -> Self {
        Eis::from_rational(rone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.om)
    }
    fn add(&self, rhs: &Self) -> Self {
        Eis {
            re: &self.re + &rhs.re,
            om: &self.om + &rhs.om,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Eis {
            re: &self.re - &rhs.re,
            om: &self.om - &rhs.om,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        // (a + b w)(c + d w) = ac - bd + (ad + bc - bd) w
        let ac = &self.re * &rhs.re;
        let bd = &self.om * &rhs.om;
        let ad_bc = &self.re * &rhs.om + &self.om * &rhs.re;
        Eis {
            re: ac - &bd,
            om: ad_bc - bd,
        }
    }
    fn neg(&self) -> Self {
        Eis {
            re: -self.re.clone(),
            om: -self.om.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let c = self.conj();
        Some(Eis {
            re: c.re / &n,
            om: c.om / n,
        })
    }
    fn from_i64(v: i64) -> Self {
        Eis::from_rational(<BigRational as Scalar>::from_i64(v))
    }
    fn ratio(num: i64, den: i64) -> Self {
        Eis::from_rational(rat(num, den))
    }
    fn to_c64(&self) -> Complex64 {
        // w = -1/2 + i sqrt(3)/2
        let a = rational_to_f64(&self.re);
        let b = rational_to_f64(&self.om);
        Complex64::new(a - b / 2.0, b * 3f64.sqrt() / 2.0)
    }
    fn snap_from_c64(z: Complex64, max_den: u64) -> Option<Self> {
        let b = z.im / (3f64.sqrt() / 2.0);
        let a = z.re + b / 2.0;
        Some(Eis {
            re: snap_real(a, max_den)?,
            om: snap_real(b, max_den)?,
        })
    }
    fn parse(text: &str) -> Result<Self> {
        parse_eisenstein(text)
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn domain() -> ScalarDomain {
        ScalarDomain::Eisenstein
    }
}

/// Accepts `p/q`, `p/q+r/s w`, `p/q-r/s w`, `r/s w`, `w`, `-w`.
fn parse_eisenstein(text: &str) -> Result<Eis> {
    let s = text.trim();
    let bad = |msg: &str| Error::Parse(format!("'{text}' is not an Eisenstein rational: {msg}"));
    match s.strip_suffix('w') {
        None => Ok(Eis::from_rational(<BigRational as Scalar>::parse(s)?)),
        Some(head) => {
            let head = head.trim_end();
            // Split the w coefficient from an optional rational head. Scan for
            // the last +/- that is not a leading sign or part of "/-".
            let bytes = head.as_bytes();
            let mut split = None;
            for i in (1..head.len()).rev() {
                let c = bytes[i] as char;
                if (c == '+' || c == '-') && bytes[i - 1] as char != '/' {
                    split = Some(i);
                    break;
                }
            }
            let (re_part, om_part) = match split {
                Some(i) => (&head[..i], &head[i..]),
                None => ("0", head),
            };
            let om_txt = om_part.trim();
            let om = match om_txt {
                "" | "+" => rone(),
                "-" => -rone(),
                t => {
                    let t = t.strip_prefix('+').unwrap_or(t);
                    <BigRational as Scalar>::parse(t)?
                }
            };
            let re_txt = re_part.trim();
            let re = if re_txt.is_empty() {
                rzero()
            } else {
                <BigRational as Scalar>::parse(re_txt)?
            };
            if Zero::is_zero(&om) && om_txt != "0" && !om_txt.starts_with("0") && om_txt != "-0" {
                // `0 w` is legal; anything else that parsed to zero is, too.
            }
            let _ = bad;
            Ok(Eis { re, om })
        }
    }
}

// ---------------------------------------------------------------------------
// Complex floating point
// ---------------------------------------------------------------------------

/// Complex double with tolerance-based equality.
///
/// Equality means `|x - y| <= tol * max(1, |x|, |y|)` with the crate-wide
/// default tolerance; use [`Cplx::approx_eq`] to supply a context tolerance.
#[derive(Debug, Clone, Copy)]
pub struct Cplx(pub Complex64);

impl Cplx {
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(re: f64, im: f64) -> Self {
        Cplx(Complex64::new(re, im))
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        (self.0 - rhs.0).norm() <= tol * self.0.norm().max(rhs.0.norm()).max(1.0)
    }
}

impl PartialEq for Cplx {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, Self::DEFAULT_TOL)
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else if self.0.im < 0.0 {
            write!(f, "{}{}i", self.0.re, self.0.im)
        } else {
            write!(f, "{}+{}i", self.0.re, self.0.im)
        }
    }
}

impl Scalar for Cplx {
    const EXACT: bool = false;

    fn zero() -> Self {
        Cplx(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Cplx(Complex64::new(1.0, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.norm() <= Self::DEFAULT_TOL
    }
    fn add(&self, rhs: &Self) -> Self {
        Cplx(self.0 + rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Cplx(self.0 - rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Cplx(self.0 * rhs.0)
    }
    fn neg(&self) -> Self {
        Cplx(-self.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.norm() == 0.0 {
            None
        } else {
            Some(Cplx(self.0.inv()))
        }
    }
    fn from_i64(v: i64) -> Self {
        Cplx(Complex64::new(v as f64, 0.0))
    }
    fn ratio(num: i64, den: i64) -> Self {
        Cplx(Complex64::new(num as f64 / den as f64, 0.0))
    }
    fn to_c64(&self) -> Complex64 {
        self.0
    }
    fn snap_from_c64(z: Complex64, _max_den: u64) -> Option<Self> {
        Some(Cplx(z))
    }
    fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        let err = || Error::Parse(format!("'{text}' is not a complex number"));
        if let Some(head) = s.strip_suffix('i') {
            let bytes = head.as_bytes();
            let mut split = None;
            for i in (1..head.len()).rev() {
                let c = bytes[i] as char;
                if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                    split = Some(i);
                    break;
                }
            }
            let (re_s, im_s) = match split {
                Some(i) => (&head[..i], &head[i..]),
                None => ("0", head),
            };
            let re: f64 = re_s.trim().parse().map_err(|_| err())?;
            let im_s = im_s.trim();
            let im: f64 = match im_s {
                "" | "+" => 1.0,
                "-" => -1.0,
                t => t.strip_prefix('+').unwrap_or(t).parse().map_err(|_| err())?,
            };
            Ok(Cplx::new(re, im))
        } else {
            let re: f64 = s.parse().map_err(|_| err())?;
            Ok(Cplx::new(re, 0.0))
        }
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn domain() -> ScalarDomain {
        ScalarDomain::Complex
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_render_roundtrip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let r = <Rat as Scalar>::parse(s).unwrap();
            assert_eq!(<Rat as Scalar>::parse(&r.render()).unwrap(), r);
        }
        assert!(<Rat as Scalar>::parse("1.5").is_err());
    }

    #[test]
    fn eisenstein_reduction_is_canonical() {
        // w * w = -1 - w
        let w = Eis::omega();
        let w2 = w.mul(&w);
        assert_eq!(w2, Eis::new(rat(-1, 1), rat(-1, 1)));
        // w^3 = 1
        let w3 = w2.mul(&w);
        assert_eq!(w3, Eis::one());
        // 1 + w + w^2 = 0
        assert!(Eis::one().add(&w).add(&w2).is_zero());
    }

    #[test]
    fn eisenstein_inverse() {
        let x = Eis::new(rat(2, 3), rat(-5, 7));
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv), Eis::one());
        assert!(Eis::zero().inv().is_none());
    }

    #[test]
    fn eisenstein_parse_forms() {
        let cases = [
            ("1/2+1/3 w", Eis::new(rat(1, 2), rat(1, 3))),
            ("1/2-1/3 w", Eis::new(rat(1, 2), rat(-1, 3))),
            ("-2 w", Eis::new(rat(0, 1), rat(-2, 1))),
            ("w", Eis::omega()),
            ("-w", Eis::omega().neg()),
            ("3/4", Eis::new(rat(3, 4), rat(0, 1))),
        ];
        for (s, want) in cases {
            assert_eq!(<Eis as Scalar>::parse(s).unwrap(), want, "parsing {s}");
        }
        for x in [
            Eis::new(rat(1, 2), rat(-1, 3)),
            Eis::zero(),
            Eis::omega(),
            Eis::new(rat(0, 1), rat(7, 5)),
        ] {
            assert_eq!(<Eis as Scalar>::parse(&x.render()).unwrap(), x);
        }
    }

    #[test]
    fn eisenstein_float_embedding_snaps_back() {
        let x = Eis::new(rat(3, 7), rat(-2, 5));
        let snapped = Eis::snap_from_c64(x.to_c64(), 1_000_000).unwrap();
        assert_eq!(snapped, x);
    }

    #[test]
    fn rational_snap_continued_fractions() {
        let x = rat(355, 113);
        let snapped = <Rat as Scalar>::snap_from_c64(x.to_c64(), 1_000_000).unwrap();
        assert_eq!(snapped, x);
        // A float that is not close to any small fraction within tolerance.
        assert_eq!(snap_real(0.1234567, 10), None);
    }

    #[test]
    fn complex_tolerance_equality() {
        let a = Cplx::new(1.0, 0.0);
        let b = Cplx::new(1.0 + 1e-12, -1e-13);
        assert_eq!(a, b);
        assert_ne!(a, Cplx::new(1.001, 0.0));
        let p = <Cplx as Scalar>::parse("1.5-2e-3i").unwrap();
        assert!((p.0.re - 1.5).abs() < 1e-15 && (p.0.im + 2e-3).abs() < 1e-18);
    }
}
