//! JSON documents exchanged by the command-line front end.
//!
//! Matrices are nested arrays in row-major order. Every number written by
//! this module uses 17 significant digits (`{:.16e}`), which is enough to
//! round-trip any `f64` exactly.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::model::{ContinuousLtiSystem, DiscreteLtiSystem};
use crate::sim::Trajectory;

type Rows = Vec<Vec<f64>>;

/// Continuous-time system description. `B` absent means no inputs; `M` and
/// `R` absent mean no measurement noise.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<String>,
    #[serde(rename = "A", serialize_with = "rows")]
    pub a: Rows,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none", serialize_with = "opt_rows")]
    pub b: Option<Rows>,
    #[serde(rename = "L", serialize_with = "rows")]
    pub l: Rows,
    #[serde(rename = "C", serialize_with = "rows")]
    pub c: Rows,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none", serialize_with = "opt_rows")]
    pub m: Option<Rows>,
    #[serde(rename = "Q", serialize_with = "rows")]
    pub q: Rows,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none", serialize_with = "opt_rows")]
    pub r: Option<Rows>,
}

impl SystemDocument {
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Builds the system. Empty arrays take their missing dimension from
    /// context (`C = []` is `0 x n`, `B = [[], []]` is `2 x 0`).
    pub fn to_system(&self) -> Result<ContinuousLtiSystem> {
        let a = Matrix::from_rows(&self.a, 0)?;
        let n = a.rows();
        let l = Matrix::from_rows(&self.l, 0)?;
        let q = Matrix::from_rows(&self.q, l.cols())?;
        let c = Matrix::from_rows(&self.c, n)?;
        let p = c.rows();
        let b = match &self.b {
            Some(rows) => Matrix::from_rows(rows, 0)?,
            None => Matrix::zeros(n, 0),
        };
        let m = match &self.m {
            Some(rows) => Matrix::from_rows(rows, 0)?,
            None => Matrix::zeros(p, 0),
        };
        let r = match &self.r {
            Some(rows) => Matrix::from_rows(rows, m.cols())?,
            None => Matrix::zeros(0, 0),
        };
        Ok(ContinuousLtiSystem { a, b, l, c, m, q, r })
    }

    pub fn from_system(sys: &ContinuousLtiSystem) -> Self {
        let optional = |mat: &Matrix| (!mat.is_empty()).then(|| mat.to_rows());
        Self {
            name: None,
            units: None,
            a: sys.a.to_rows(),
            b: optional(&sys.b),
            l: sys.l.to_rows(),
            c: sys.c.to_rows(),
            m: optional(&sys.m),
            q: sys.q.to_rows(),
            r: optional(&sys.r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteDocument {
    #[serde(rename = "Ad", serialize_with = "rows")]
    pub ad: Rows,
    #[serde(rename = "Bd", serialize_with = "rows")]
    pub bd: Rows,
    #[serde(rename = "Cd", serialize_with = "rows")]
    pub cd: Rows,
    #[serde(rename = "Md", serialize_with = "rows")]
    pub md: Rows,
    #[serde(rename = "Qd", serialize_with = "rows")]
    pub qd: Rows,
    #[serde(rename = "Rd", serialize_with = "rows")]
    pub rd: Rows,
    #[serde(serialize_with = "number")]
    pub dt: f64,
}

impl From<&DiscreteLtiSystem> for DiscreteDocument {
    fn from(d: &DiscreteLtiSystem) -> Self {
        Self {
            ad: d.ad.to_rows(),
            bd: d.bd.to_rows(),
            cd: d.cd.to_rows(),
            md: d.md.to_rows(),
            qd: d.qd.to_rows(),
            rd: d.rd.to_rows(),
            dt: d.dt,
        }
    }
}

impl DiscreteDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryDocument {
    #[serde(serialize_with = "rows")]
    pub states: Rows,
    #[serde(serialize_with = "rows")]
    pub outputs: Rows,
    pub seed: Option<u64>,
    #[serde(serialize_with = "number")]
    pub dt: f64,
}

impl From<&Trajectory> for TrajectoryDocument {
    fn from(t: &Trajectory) -> Self {
        Self {
            states: t.states.clone(),
            outputs: t.outputs.clone(),
            seed: t.seed,
            dt: t.dt,
        }
    }
}

impl TrajectoryDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

/// `x` with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(format_number(x)).expect("finite floats format as JSON numbers")
}

fn number<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(*x).serialize(s)
}

fn rows<S: Serializer>(m: &Rows, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|r| r.iter().map(|&x| raw(x)).collect::<Vec<_>>()))
}

fn opt_rows<S: Serializer>(m: &Option<Rows>, s: S) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => rows(m, s),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const DOUBLE_INTEGRATOR: &str = r#"{
        "name": "double integrator",
        "A": [[0, 1], [0, 0]],
        "B": [[0], [1]],
        "L": [[0], [1]],
        "C": [[1, 0]],
        "M": [[1]],
        "Q": [[1]],
        "R": [[0.04]]
    }"#;

    #[test]
    fn parses_full_document() {
        let doc = SystemDocument::parse(DOUBLE_INTEGRATOR).unwrap();
        let sys = doc.to_system().unwrap();
        sys.validate().unwrap();
        assert_eq!(sys.b.shape(), (2, 1));
        assert_eq!(sys.r.get(0, 0), 0.04);
    }

    #[test]
    fn optional_matrices_default_to_empty() {
        let doc = SystemDocument::parse(r#"{"A": [[-1]], "L": [[1]], "C": [], "Q": [[3]]}"#).unwrap();
        let sys = doc.to_system().unwrap();
        assert_eq!(sys.b.shape(), (1, 0));
        assert_eq!(sys.c.shape(), (0, 1));
        assert_eq!(sys.m.shape(), (0, 0));
        assert_eq!(sys.r.shape(), (0, 0));
        sys.validate().unwrap();
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = SystemDocument::parse(r#"{"A": [[-1]], "L": [[1]], "C": [], "Q": [[3]], "D": [[0]]}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        let qd = 1.5 * (1.0 - (-2f64).exp());
        let text = format_number(qd);
        assert_eq!(text.parse::<f64>().unwrap().to_bits(), qd.to_bits());
    }

    #[test]
    fn discrete_document_layout() {
        let d = DiscreteLtiSystem {
            ad: Matrix::identity(1),
            bd: Matrix::zeros(1, 0),
            cd: Matrix::zeros(0, 1),
            md: Matrix::zeros(0, 0),
            qd: Matrix::identity(1),
            rd: Matrix::zeros(0, 0),
            dt: 0.5,
        };
        let json = DiscreteDocument::from(&d).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in ["Ad", "Bd", "Cd", "Md", "Qd", "Rd", "dt"] {
            assert!(v.get(key).is_some(), "{key} missing");
        }
        assert_eq!(v["Bd"], serde_json::json!([[]]));
        assert!(json.contains("5.0000000000000000e-1"));
    }

    fn any_finite() -> impl Strategy<Value = f64> {
        prop_oneof![
            any::<f64>().prop_filter("finite", |v| v.is_finite()),
            -1e3f64..1e3,
            Just(0.0),
            Just(-0.0),
            Just(f64::MIN_POSITIVE),
            Just(f64::MAX),
        ]
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(n in 1usize..4, entries in proptest::collection::vec(any_finite(), 64)) {
            let mut it = entries.into_iter().cycle();
            let mut take = |r: usize, c: usize| (0..r).map(|_| (0..c).map(|_| it.next().unwrap()).collect()).collect::<Rows>();
            let doc = SystemDocument {
                name: Some("rt".into()),
                units: None,
                a: take(n, n),
                b: Some(take(n, 1)),
                l: take(n, 2),
                c: take(1, n),
                m: Some(take(1, 1)),
                q: take(2, 2),
                r: Some(take(1, 1)),
            };
            let back = SystemDocument::parse(&doc.to_json()).unwrap();
            let bits = |d: &SystemDocument| {
                [Some(&d.a), d.b.as_ref(), Some(&d.l), Some(&d.c), d.m.as_ref(), Some(&d.q), d.r.as_ref()]
                    .into_iter()
                    .flatten()
                    .flatten()
                    .flatten()
                    .map(|v| v.to_bits())
                    .collect::<Vec<_>>()
            };
            prop_assert_eq!(bits(&back), bits(&doc));
            prop_assert_eq!(back.name, doc.name);
        }
    }
}
