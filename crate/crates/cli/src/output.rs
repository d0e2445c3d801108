//! Deterministic text formats: every float is written with 17 significant
//! digits and every file starts with the configuration that produced it.

use std::fmt::Write as _;

use billiard_caustics::cusp::{Cusp, CuspOrder, PredictedCusp};
use billiard_caustics::family::Caustic;
use billiard_caustics::{ConfocalKind, EnvelopePoint};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Float with fixed scientific formatting; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F(pub f64);

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for F {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(num(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl From<f64> for F {
    fn from(x: f64) -> Self {
        F(x)
    }
}

/// The configuration recorded in file headers.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<[F; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub n_values: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y0: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub match_tol: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub viewport: Option<[F; 4]>,
    pub degrees: bool,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            a: None,
            b: None,
            source: None,
            n: None,
            n_values: Vec::new(),
            x0: None,
            y0: None,
            mu: None,
            samples: None,
            tol: None,
            match_tol: None,
            seed: None,
            viewport: None,
            degrees: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

pub fn angle(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_degrees()
    } else {
        x
    }
}

pub const CSV_COLUMNS: &str = "s,alpha,p,x,y,H,at_infinity";

/// Caustic samples as CSV rows. Points at infinity leave `x` and `y` empty.
pub fn caustic_rows(out: &mut String, caustic: &Caustic, degrees: bool) {
    for ((sample, point), h) in caustic
        .family
        .samples()
        .iter()
        .zip(&caustic.points)
        .zip(&caustic.cusp_function)
    {
        let ray = sample.jet.ray;
        let (xy, flag) = match point {
            EnvelopePoint::Finite(q) => (format!("{},{}", num(q.x), num(q.y)), 0),
            EnvelopePoint::AtInfinity { .. } => (",".to_string(), 1),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(sample.s),
            num(angle(ray.alpha, degrees)),
            num(ray.p),
            xy,
            num(*h),
            flag
        );
    }
}

pub fn csv_header(config: &RunConfig) -> String {
    format!("# config {}\n{}\n", config.to_json(), CSV_COLUMNS)
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Order {
    Known(u32),
    Unresolved(&'static str),
}

#[derive(Debug, Serialize)]
pub struct CuspJson {
    pub s: F,
    pub x: Option<F>,
    pub y: Option<F>,
    pub order: Order,
    pub lambda: Option<F>,
    pub predicted: bool,
    pub match_distance: Option<F>,
    pub at_infinity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<&'static str>,
}

impl CuspJson {
    pub fn new(c: &Cusp, family: Option<&'static str>, degrees: bool) -> Self {
        let (x, y, direction) = match c.location {
            EnvelopePoint::Finite(q) => (Some(F(q.x)), Some(F(q.y)), None),
            EnvelopePoint::AtInfinity { direction } => {
                (None, None, Some(F(angle(direction, degrees))))
            }
        };
        CuspJson {
            s: F(c.s),
            x,
            y,
            order: match c.order {
                CuspOrder::Ordinary => Order::Known(2),
                CuspOrder::Unresolved { .. } => Order::Unresolved("unresolved"),
            },
            lambda: c.lambda_tag.map(|t| F(t.lambda)),
            predicted: c.predicted,
            match_distance: c.match_distance.map(F),
            at_infinity: c.location.is_at_infinity(),
            direction,
            family,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PredictionJson {
    pub x: Option<F>,
    pub y: Option<F>,
    pub at_infinity: bool,
    pub lambda: F,
    pub conic: &'static str,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<&'static str>,
}

pub fn conic_name(kind: ConfocalKind) -> &'static str {
    match kind {
        ConfocalKind::Ellipse => "ellipse",
        ConfocalKind::Hyperbola => "hyperbola",
        ConfocalKind::FociSegment => "foci-segment",
        ConfocalKind::Axis { .. } => "axis",
    }
}

impl PredictionJson {
    pub fn new(p: &PredictedCusp, matched: bool, family: Option<&'static str>) -> Self {
        let (x, y) = match p.point {
            EnvelopePoint::Finite(q) => (Some(F(q.x)), Some(F(q.y))),
            EnvelopePoint::AtInfinity { .. } => (None, None),
        };
        PredictionJson {
            x,
            y,
            at_infinity: p.point.is_at_infinity(),
            lambda: F(p.conic.lambda),
            conic: conic_name(p.conic.kind),
            matched,
            family,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
