//! JSON input formats and report builders shared by the CLI and the C ABI.
//!
//! Rationals are strings `"num/den"` (plain integers are accepted too);
//! matrices are `{"p": int, "n": int, "rows": [[...], ...]}`. Reports are
//! emitted through `serde_json::Value`, whose maps keep keys sorted, so
//! re-serializing an emitted report reproduces it byte for byte.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{minimal_isometry_power, IsometryPower, LatticeMode, DEFAULT_CAP};
use crate::linalg::{eigenvalue_valuations, PadicMatrix, SlopeData};
use crate::padic::{format_rational, parse_rational, NormExp, PadicVector, Prime};
use crate::semigroup::{orbit_distortion, NonDistalEvidence, SemigroupVerdict};
use crate::sphere::{safe_radius, verify_witness, witness_nondistal, SDForm};
use crate::spectral::{
    contraction_split_auto, is_distal_linear, is_distal_projective, Certificate, DistalityVerdict, SplitDims,
};

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

/// The prime from field `"p"`, reconciled with an optional override.
pub fn prime_of(v: &Value, p_override: Option<u64>) -> Result<Prime> {
    let from_json = match v.get("p") {
        Some(p) => Some(p.as_u64().ok_or_else(|| Error::Parse("field \"p\" must be a positive integer".into()))?),
        None => None,
    };
    match (from_json, p_override) {
        (Some(a), Some(b)) if a != b => Err(Error::PrimeMismatch { expected: b, found: a }),
        (Some(a), _) | (None, Some(a)) => Prime::new(a),
        (None, None) => Err(Error::Parse("missing field \"p\" (or pass --p)".into())),
    }
}

pub fn parse_scalar(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational string, found {other}"))),
    }
}

pub fn parse_vector(p: Prime, v: &Value) -> Result<PadicVector> {
    let items = v.as_array().ok_or_else(|| Error::Parse("vector must be a JSON array".into()))?;
    PadicVector::new(p, items.iter().map(parse_scalar).collect::<Result<_>>()?)
}

fn parse_rows(p: Prime, rows: &Value, n: Option<usize>) -> Result<PadicMatrix> {
    let rows = rows.as_array().ok_or_else(|| Error::Parse("rows must be an array of arrays".into()))?;
    let parsed: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("each row must be an array".into()))?
                .iter()
                .map(parse_scalar)
                .collect()
        })
        .collect::<Result<_>>()?;
    if let Some(n) = n {
        if parsed.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: parsed.len() });
        }
    }
    PadicMatrix::from_rows(p, parsed)
}

fn parse_n(v: &Value) -> Result<Option<usize>> {
    match v.get("n") {
        None => Ok(None),
        Some(n) => n
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| Error::Parse("field \"n\" must be a positive integer".into())),
    }
}

/// `{"p", "n", "rows"}`.
pub fn parse_matrix(v: &Value, p_override: Option<u64>) -> Result<PadicMatrix> {
    let p = prime_of(v, p_override)?;
    parse_rows(p, field(v, "rows")?, parse_n(v)?)
}

/// A matrix given either as an object with `"rows"` or as bare rows.
fn parse_matrix_like(p: Prime, v: &Value, n: Option<usize>) -> Result<PadicMatrix> {
    match v.get("rows") {
        Some(rows) => {
            if let Some(q) = v.get("p") {
                if q.as_u64() != Some(p.get()) {
                    return Err(Error::PrimeMismatch { expected: p.get(), found: q.as_u64().unwrap_or(0) });
                }
            }
            parse_rows(p, rows, n)
        }
        None => parse_rows(p, v, n),
    }
}

/// `{"p", "n", "generators": [matrix, ...]}`.
pub fn parse_generators(v: &Value, p_override: Option<u64>) -> Result<Vec<PadicMatrix>> {
    let p = prime_of(v, p_override)?;
    let n = parse_n(v)?;
    field(v, "generators")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"generators\" must be an array".into()))?
        .iter()
        .map(|g| parse_matrix_like(p, g, n))
        .collect()
}

/// `{"p", "n", "T", "m", "S", "d_exponents"}`, or just `{"p", "T"}` for a
/// diagonal `T`.
pub fn parse_sdform(v: &Value, p_override: Option<u64>) -> Result<SDForm> {
    let p = prime_of(v, p_override)?;
    let n = parse_n(v)?;
    let t = parse_matrix_like(p, field(v, "T")?, n)?;
    if v.get("S").is_none() && v.get("m").is_none() && v.get("d_exponents").is_none() {
        return SDForm::from_diagonal(t);
    }
    let m = field(v, "m")?.as_u64().ok_or_else(|| Error::Parse("\"m\" must be a positive integer".into()))?;
    let s = parse_matrix_like(p, field(v, "S")?, n)?;
    let d = field(v, "d_exponents")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"d_exponents\" must be an array".into()))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::Parse("d_exponents must be integers".into())))
        .collect::<Result<Vec<_>>>()?;
    SDForm::new(t, m, s, d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: u64,
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

impl From<&PadicMatrix> for MatrixJson {
    fn from(t: &PadicMatrix) -> Self {
        MatrixJson {
            p: t.prime().get(),
            n: t.dim(),
            rows: t.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
    }
}

pub fn vector_json(v: &PadicVector) -> Value {
    json!(v.to_strings())
}

pub fn norm_json(e: NormExp) -> Value {
    json!(e.exponent())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeJson {
    pub valuation: String,
    pub multiplicity: usize,
}

pub fn slopes_json(s: &SlopeData) -> Vec<SlopeJson> {
    s.entries.iter().map(|(v, k)| SlopeJson { valuation: v.to_string(), multiplicity: *k }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub distal: bool,
    /// `isometry_power`, `flat_polygon` or `slope_witness`.
    pub certificate: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub isometry_power: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_valuations: Option<[String; 2]>,
}

impl From<&DistalityVerdict> for VerdictJson {
    fn from(v: &DistalityVerdict) -> Self {
        let (certificate, isometry_power, witness_valuations) = match v.certificate {
            Certificate::IsometryPower(k) => ("isometry_power", Some(k), None),
            Certificate::FlatPolygon => ("flat_polygon", None, None),
            Certificate::SlopeWitness(a, b) => ("slope_witness", None, Some([a.to_string(), b.to_string()])),
        };
        VerdictJson {
            distal: v.distal,
            certificate: certificate.into(),
            m: v.rescaling.map(|r| r.0),
            l: v.rescaling.map(|r| r.1),
            isometry_power,
            witness_valuations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitJson {
    pub dims: SplitDimsJson,
    pub precision: i64,
    pub contracting: Vec<Vec<String>>,
    pub neutral: Vec<Vec<String>>,
    pub expanding: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDimsJson {
    pub contracting: usize,
    pub neutral: usize,
    pub expanding: usize,
}

impl From<SplitDims> for SplitDimsJson {
    fn from(d: SplitDims) -> Self {
        SplitDimsJson { contracting: d.contracting, neutral: d.neutral, expanding: d.expanding }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: MatrixJson,
    pub linear: VerdictJson,
    pub projective: VerdictJson,
    /// Least `m` with `T^m` an isometry, when `T` is linearly distal.
    pub isometry_power: Option<u64>,
    pub slopes: Vec<SlopeJson>,
    pub char_poly: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub split: Option<SplitJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
}

/// All single-matrix verdicts; the spectral split is included when a
/// starting precision is given.
pub fn analyze(t: &PadicMatrix, split_precision: Option<u32>) -> Result<AnalysisReport> {
    let slopes = eigenvalue_valuations(t)?;
    let linear = is_distal_linear(t)?;
    let projective = is_distal_projective(t)?;
    let isometry_power = match linear.certificate {
        Certificate::IsometryPower(m) => Some(m),
        _ => None,
    };
    let split = match split_precision {
        Some(n) => Some(split_json(t, n)?),
        None => None,
    };
    Ok(AnalysisReport {
        input: t.into(),
        linear: (&linear).into(),
        projective: (&projective).into(),
        isometry_power,
        slopes: slopes_json(&slopes),
        char_poly: t.char_poly().iter().map(format_rational).collect(),
        split,
        timing_ms: None,
    })
}

pub fn split_json(t: &PadicMatrix, precision: u32) -> Result<SplitJson> {
    let s = contraction_split_auto(t, precision)?;
    let digits = |b: &Vec<Vec<crate::spectral::PadicApprox>>| -> Vec<Vec<String>> {
        b.iter().map(|v| v.iter().map(|x| x.digit_string()).collect()).collect()
    };
    Ok(SplitJson {
        dims: s.dims.into(),
        precision: s.precision,
        contracting: digits(&s.contracting),
        neutral: digits(&s.neutral),
        expanding: digits(&s.expanding),
    })
}

/// Replays the certificates of an analysis: the linear isometry power is
/// minimal and exact, and so is the one of the projective rescaling.
pub fn verify_analysis(t: &PadicMatrix, r: &AnalysisReport) -> Result<bool> {
    let check_power = |a: &PadicMatrix, m: u64| -> Result<bool> {
        let mut acc = a.clone();
        for k in 1..=m {
            if acc.is_isometry()? != (k == m) {
                return Ok(false);
            }
            acc = acc.mul(a);
        }
        Ok(true)
    };
    if let Some(m) = r.linear.isometry_power {
        if !check_power(t, m)? {
            return Ok(false);
        }
    }
    if let (Some(m), Some(l), Some(k)) = (r.projective.m, r.projective.l, r.projective.isometry_power) {
        let rescaled = t.pow(m as i64)?.scale(&crate::padic::p_power(t.prime(), l));
        if !check_power(&rescaled, k)? {
            return Ok(false);
        }
    }
    let fresh = analyze(t, None)?;
    Ok(fresh.linear == r.linear && fresh.projective == r.projective && fresh.slopes == r.slopes)
}

/// Human-readable polynomial from ascending coefficients.
pub fn format_poly(c: &[BigRational]) -> String {
    use num_traits::{One, Signed, Zero};
    let mut out = String::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let neg = a.is_negative();
        let mag = a.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coeff = if mag.is_one() && i > 0 { String::new() } else { format_rational(&mag) };
        let var = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        out.push_str(&coeff);
        out.push_str(&var);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn safe_radius_json(f: &SDForm) -> Result<Value> {
    let r = safe_radius(f)?;
    Ok(json!({
        "p": f.matrix().prime().get(),
        "m": f.m(),
        "d_exponents": f.d_exponents(),
        "c0_exponent": r.c0_exponent,
        "c1_exponent": r.c1_exponent,
        "radius_exponent": r.radius_exponent,
    }))
}

pub fn witness_json(f: &SDForm, l1: Option<i64>, k_max: u64) -> Result<Value> {
    let w = witness_nondistal(f, l1)?;
    let verified = verify_witness(f, &w, k_max)?;
    let z = w.z.norm().exponent().expect("nonzero z");
    let seps: Vec<i64> = (1..=k_max as i64).map(|k| z - k * w.decay).collect();
    Ok(json!({
        "p": f.matrix().prime().get(),
        "a": vector_json(&w.a),
        "x": vector_json(&w.x),
        "z": vector_json(&w.z),
        "y": vector_json(&w.y),
        "m": w.m,
        "l": w.l,
        "l1": w.l1,
        "decay": w.decay,
        "safe_radius_exponent": safe_radius(f)?.radius_exponent,
        "expected_separation_exponents": seps,
        "verified_k": k_max,
        "verified": verified,
    }))
}

fn mode_str(m: LatticeMode) -> &'static str {
    match m {
        LatticeMode::Gl => "GL",
        LatticeMode::Pgl => "PGL",
    }
}

pub fn semigroup_json(v: &SemigroupVerdict) -> Result<Value> {
    Ok(match v {
        SemigroupVerdict::Distal { mode, orbit, growth } => json!({
            "verdict": "distal",
            "mode": mode_str(*mode),
            "orbit_size": orbit.len(),
            "growth": growth,
            "distortion_exponent": orbit_distortion(orbit)?,
        }),
        SemigroupVerdict::NonDistal(NonDistalEvidence::Element(w)) => json!({
            "verdict": "non_distal",
            "evidence": {
                "kind": "element",
                "word": w.word,
                "element": MatrixJson::from(&w.element),
                "char_poly": w.char_poly.iter().map(format_rational).collect::<Vec<_>>(),
                "char_poly_text": format_poly(&w.char_poly),
                "valuations": slopes_json(&w.valuations),
            },
        }),
        SemigroupVerdict::NonDistal(NonDistalEvidence::ProximalPair { word, hit }) => json!({
            "verdict": "non_distal",
            "evidence": {
                "kind": "proximal_pair",
                "word": word,
                "x": vector_json(&hit.x),
                "y": vector_json(&hit.y),
                "step": hit.step,
                "separation_exponent": norm_json(hit.separation),
            },
        }),
        SemigroupVerdict::Inconclusive(d) => json!({
            "verdict": "inconclusive",
            "mode": mode_str(d.mode),
            "explored": d.explored,
            "growth": d.growth,
            "scanned_length": d.scanned_length,
            "random_words": d.random_words,
        }),
    })
}

/// Isometry power of `T` within the default cap, for reports.
pub fn isometry_power(t: &PadicMatrix) -> Result<Option<u64>> {
    Ok(match minimal_isometry_power(t, DEFAULT_CAP)? {
        IsometryPower::Power(m) => Some(m),
        IsometryPower::NotDistal => None,
    })
}
