//! Self-describing JSON descriptors for systems and the built-in corpus.
//!
//! Exact scalar domains serialize entries as strings so no float round trip
//! ever touches them; the complex domain uses `[re, im]` pairs. Serialization
//! order is fixed by the struct layout, making exports byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus;
use crate::error::{Error, Result};
use crate::fuchsian::FuchsianData;
use crate::linalg::Mat;
use crate::quadric::QuadricForm;
use crate::scalar::{Cplx, Eis, Rat, Scalar, ScalarDomain};
use crate::system::QuadraticSystem;
use crate::tensor::SymTensor;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemDescriptor {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub scalar_domain: String,
    /// Nested `[i][j][k]` coefficient array.
    pub tensor: Vec<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadric: Option<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

/// A parsed descriptor in one of the three scalar domains.
#[derive(Debug, Clone)]
pub enum AnySystem {
    Rational(QuadraticSystem<Rat>, Option<QuadricForm<Rat>>),
    Eisenstein(QuadraticSystem<Eis>, Option<QuadricForm<Eis>>),
    Complex(QuadraticSystem<Cplx>, Option<QuadricForm<Cplx>>),
}

impl AnySystem {
    pub fn dim(&self) -> usize {
        match self {
            AnySystem::Rational(s, _) => s.n(),
            AnySystem::Eisenstein(s, _) => s.n(),
            AnySystem::Complex(s, _) => s.n(),
        }
    }

    pub fn domain(&self) -> ScalarDomain {
        match self {
            AnySystem::Rational(..) => ScalarDomain::Rational,
            AnySystem::Eisenstein(..) => ScalarDomain::Eisenstein,
            AnySystem::Complex(..) => ScalarDomain::Complex,
        }
    }
}

fn value_of<K: Scalar>(x: &K) -> Value {
    match K::domain() {
        ScalarDomain::Complex => {
            let z = x.to_c64();
            Value::Array(vec![
                serde_json::json!(z.re),
                serde_json::json!(z.im),
            ])
        }
        _ => Value::String(x.render()),
    }
}

fn scalar_of<K: Scalar>(v: &Value) -> Result<K> {
    match (K::domain(), v) {
        (ScalarDomain::Complex, Value::Array(pair)) if pair.len() == 2 => {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Parse("complex entry parts must be numbers".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Parse("complex entry parts must be numbers".into()))?;
            K::snap_from_c64(num::complex::Complex64::new(re, im), 1)
                .ok_or_else(|| Error::Parse("bad complex entry".into()))
        }
        (ScalarDomain::Complex, Value::Number(n)) => {
            let re = n
                .as_f64()
                .ok_or_else(|| Error::Parse("bad numeric entry".into()))?;
            K::snap_from_c64(num::complex::Complex64::new(re, 0.0), 1)
                .ok_or_else(|| Error::Parse("bad complex entry".into()))
        }
        (_, Value::String(s)) => K::parse(s),
        (_, Value::Number(n)) if n.is_i64() => Ok(K::from_i64(n.as_i64().unwrap())),
        (_, other) => Err(Error::Parse(format!(
            "entry {other} is not valid for the {} domain (exact entries are strings)",
            K::domain().name()
        ))),
    }
}

pub fn descriptor_from_system<K: Scalar>(
    name: Option<&str>,
    sys: &QuadraticSystem<K>,
    quadric: Option<&QuadricForm<K>>,
    labels: Option<BTreeMap<String, String>>,
) -> SystemDescriptor {
    let n = sys.n();
    let tensor = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| value_of(sys.tensor().get(i, j, k))).collect())
                .collect()
        })
        .collect();
    let quadric = quadric.map(|q| {
        (0..n)
            .map(|j| (0..n).map(|k| value_of(q.entry(j, k))).collect())
            .collect()
    });
    SystemDescriptor {
        schema_version: SCHEMA_VERSION,
        name: name.map(str::to_owned),
        dim: n,
        scalar_domain: K::domain().name().to_owned(),
        tensor,
        quadric,
        labels,
    }
}

fn parse_typed<K: Scalar>(
    d: &SystemDescriptor,
) -> Result<(QuadraticSystem<K>, Option<QuadricForm<K>>)> {
    let n = d.dim;
    if d.tensor.len() != n || d.tensor.iter().any(|p| p.len() != n || p.iter().any(|r| r.len() != n))
    {
        return Err(Error::DimensionMismatch(
            "tensor array shape does not match dim".into(),
        ));
    }
    let mut data = Vec::with_capacity(n * n * n);
    for plane in &d.tensor {
        for row in plane {
            for v in row {
                data.push(scalar_of::<K>(v)?);
            }
        }
    }
    let sys = QuadraticSystem::new(n, data)?;
    let quadric = match &d.quadric {
        None => None,
        Some(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch(
                    "quadric array shape does not match dim".into(),
                ));
            }
            let mut m = Mat::<K>::zeros(n, n);
            for (j, row) in rows.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    m[(j, k)] = scalar_of::<K>(v)?;
                }
            }
            Some(QuadricForm::new(m)?)
        }
    };
    Ok((sys, quadric))
}

impl SystemDescriptor {
    pub fn parse(&self) -> Result<AnySystem> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        match ScalarDomain::from_name(&self.scalar_domain)? {
            ScalarDomain::Rational => {
                let (s, q) = parse_typed::<Rat>(self)?;
                Ok(AnySystem::Rational(s, q))
            }
            ScalarDomain::Eisenstein => {
                let (s, q) = parse_typed::<Eis>(self)?;
                Ok(AnySystem::Eisenstein(s, q))
            }
            ScalarDomain::Complex => {
                let (s, q) = parse_typed::<Cplx>(self)?;
                Ok(AnySystem::Complex(s, q))
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("descriptor serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("descriptor JSON: {e}")))
    }
}

/// Fuchsian data as a JSON document for the build command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuchsianInput {
    pub scalar_domain: String,
    pub poles: Vec<String>,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
}

impl FuchsianInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("fuchsian JSON: {e}")))
    }

    pub fn parse_rational(&self) -> Result<FuchsianData<Rat>> {
        self.parse_typed::<Rat>()
    }

    pub fn parse_eisenstein(&self) -> Result<FuchsianData<Eis>> {
        self.parse_typed::<Eis>()
    }

    pub fn domain(&self) -> Result<ScalarDomain> {
        ScalarDomain::from_name(&self.scalar_domain)
    }

    fn parse_typed<K: Scalar>(&self) -> Result<FuchsianData<K>> {
        let parse_all = |xs: &[String]| -> Result<Vec<K>> {
            xs.iter().map(|s| K::parse(s)).collect()
        };
        FuchsianData::new(
            parse_all(&self.poles)?,
            parse_all(&self.alpha)?,
            parse_all(&self.beta)?,
        )
    }
}

// ---------------------------------------------------------------------------
// Corpus registry
// ---------------------------------------------------------------------------

pub const CORPUS_NAMES: &[(&str, &str)] = &[
    ("euler-top", "Euler spinning-top field (rational, dim 3)"),
    ("lotka-volterra", "Lotka-Volterra with dummy variable (rational, dim 3)"),
    ("halphen1", "first Halphen field, derivative-solved (rational, dim 3)"),
    ("halphen2", "second Halphen field, (a,b,c) = (1,2,3) (rational, dim 3)"),
    ("halphen2-theta", "second Halphen field, a = b = c = -1/8 (rational, dim 3)"),
    ("chazy-k0", "Airy-solvable k = 0 field (rational, dim 3)"),
    ("level3", "level-three Halphen system with quadric (eisenstein, dim 4)"),
    ("riccati-identity", "matrix Riccati field for A = I (rational, dim 3)"),
    ("roundtrip-gdhb", "rank-4 gDHB fixture with known parameters (rational, dim 4)"),
    ("roundtrip-scrambled", "the gDHB fixture in a scrambled basis (rational, dim 4)"),
];

fn labels_from(pairs: &[(&str, String)]) -> Option<BTreeMap<String, String>> {
    Some(
        pairs
            .iter()
            .map(|(k, v)| ((*k).to_owned(), v.clone()))
            .collect(),
    )
}

/// Fixed scramble applied to the round-trip fixture; exported in its labels.
pub fn corpus_scramble() -> crate::linalg::LinearMap<Rat> {
    use crate::scalar::rat;
    crate::linalg::LinearMap::from_rows(vec![
        vec![rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
        vec![rat(0, 1), rat(1, 1), rat(-1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(1, 2)],
        vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)],
    ])
}

pub fn corpus_descriptor(name: &str) -> Result<SystemDescriptor> {
    use crate::scalar::rat;
    let d = match name {
        "euler-top" => descriptor_from_system(
            Some(name),
            &corpus::euler_top::<Rat>(),
            None,
            None,
        ),
        "lotka-volterra" => descriptor_from_system(
            Some(name),
            &corpus::lotka_volterra(rat(2, 3), rat(4, 3), rat(1, 1), rat(1, 1)),
            None,
            labels_from(&[("parameters", "a=2/3 b=4/3 c=1 d=1".into())]),
        ),
        "halphen1" => descriptor_from_system(Some(name), &corpus::halphen1::<Rat>(), None, None),
        "halphen2" => descriptor_from_system(
            Some(name),
            &corpus::halphen2(&corpus::generic_abc::<Rat>()),
            None,
            labels_from(&[("parameters", "a=1 b=2 c=3".into())]),
        ),
        "halphen2-theta" => descriptor_from_system(
            Some(name),
            &corpus::halphen2(&corpus::theta_abc::<Rat>()),
            None,
            labels_from(&[("parameters", "a=b=c=-1/8".into())]),
        ),
        "chazy-k0" => descriptor_from_system(
            Some(name),
            &corpus::chazy_k0_system::<Rat>(),
            None,
            labels_from(&[("variables", "X, W, V".into())]),
        ),
        "level3" => {
            let (sys, quadric) = corpus::level3_system();
            descriptor_from_system(
                Some(name),
                &sys,
                Some(&quadric),
                labels_from(&[("variables", "W, X, Y, Z".into())]),
            )
        }
        "riccati-identity" => {
            descriptor_from_system(Some(name), &corpus::riccati_identity::<Rat>(), None, None)
        }
        "roundtrip-gdhb" => {
            let g = corpus::roundtrip_gdhb();
            descriptor_from_system(
                Some(name),
                &g.system,
                g.constraints.first(),
                labels_from(&[
                    ("alpha", "1/4, -1/3, 2".into()),
                    ("beta", "1/2, -1".into()),
                    ("poles", "0, 1, -1".into()),
                ]),
            )
        }
        "roundtrip-scrambled" => {
            let g = corpus::roundtrip_gdhb();
            let pa = crate::dhb::ParametricAlgebra::from_gdhb(&g)?;
            let m = corpus_scramble();
            let scrambled = pa.change_basis(&m)?;
            let basis_txt = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| m.matrix()[(i, j)].render())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join("; ");
            descriptor_from_system(
                Some(name),
                &QuadraticSystem::from_tensor(scrambled.base().clone()),
                Some(scrambled.quadric()),
                labels_from(&[("basis", basis_txt)]),
            )
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown corpus entry '{other}'"
            )))
        }
    };
    Ok(d)
}

/// Parse a whitespace/semicolon matrix of scalar strings, as stored in
/// corpus labels and `--basis` files.
pub fn parse_matrix_text<K: Scalar>(text: &str, n: usize) -> Result<Mat<K>> {
    let rows: Vec<&str> = text
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .collect();
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} matrix rows")));
    }
    let mut m = Mat::<K>::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != n {
            return Err(Error::Parse(format!("expected {n} entries per row")));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = K::parse(e)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_exports_reingest_identically() {
        for (name, _) in CORPUS_NAMES {
            let d = corpus_descriptor(name).unwrap();
            let json = d.to_json();
            let d2 = SystemDescriptor::from_json(&json).unwrap();
            assert_eq!(d, d2, "descriptor round trip for {name}");
            assert_eq!(json, d2.to_json(), "byte-stable export for {name}");
            d2.parse().unwrap();
        }
    }

    #[test]
    fn exact_entries_survive_parsing() {
        let d = corpus_descriptor("roundtrip-gdhb").unwrap();
        let AnySystem::Rational(sys, quadric) = d.parse().unwrap() else {
            panic!("rational fixture");
        };
        let g = corpus::roundtrip_gdhb();
        assert_eq!(&sys, &g.system);
        assert_eq!(quadric.as_ref(), g.constraints.first());
    }

    #[test]
    fn eisenstein_descriptor_round_trip() {
        let d = corpus_descriptor("level3").unwrap();
        let AnySystem::Eisenstein(sys, quadric) = d.parse().unwrap() else {
            panic!("eisenstein fixture");
        };
        let (s0, q0) = corpus::level3_system();
        assert_eq!(sys, s0);
        assert_eq!(quadric, Some(q0));
    }

    #[test]
    fn complex_descriptor_uses_float_pairs() {
        use crate::scalar::Cplx;
        let mut t = SymTensor::<Cplx>::zeros(2);
        t.add_monomial(0, 0, 1, &Cplx::new(1.5, -0.25));
        let sys = QuadraticSystem::from_tensor(t);
        let d = descriptor_from_system(Some("c"), &sys, None, None);
        let AnySystem::Complex(sys2, _) = d.parse().unwrap() else {
            panic!("complex domain");
        };
        assert_eq!(sys2.tensor().get(0, 0, 1), sys.tensor().get(0, 0, 1));
    }

    #[test]
    fn unknown_corpus_name_is_an_error() {
        assert!(corpus_descriptor("no-such-system").is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = corpus_scramble();
        let txt = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| m.matrix()[(i, j)].render())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ");
        let parsed = parse_matrix_text::<Rat>(&txt, 4).unwrap();
        assert_eq!(&parsed, m.matrix());
    }
}
