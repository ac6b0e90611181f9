//! CSV result rows.

use std::io::{Read, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dispersion::{CriticalResult, ScaledDeterminant, SweepRow};
use crate::error::{Error, Result};
use crate::kinematics::WavenumberConvention;

pub const HEADER: [&str; 16] = [
    "case_id",
    "k",
    "K",
    "b_bar",
    "mu_ratio",
    "alpha_s",
    "beta_s",
    "alpha_u",
    "beta_u",
    "gamma_s",
    "gamma_u",
    "lambda_cr_compression",
    "lambda_cr_tension",
    "status",
    "det_evals",
    "notes",
];

/// Nine significant digits; plain notation for moderate magnitudes.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let dec = (8 - exp).max(0) as usize;
        format!("{v:.dec$}")
    } else {
        format!("{v:.8e}")
    }
}

fn ser_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_sig(*v))
}

fn ser_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&format_sig(*x)),
        None => s.serialize_str(""),
    }
}

fn de_opt<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    let s = String::deserialize(d)?;
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub case_id: String,
    #[serde(serialize_with = "ser_f64")]
    pub k: f64,
    /// Lagrangian wavenumber at the reported compression stretch (tension if there is none).
    #[serde(rename = "K", serialize_with = "ser_opt", deserialize_with = "de_opt")]
    pub big_k: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub b_bar: f64,
    #[serde(serialize_with = "ser_f64")]
    pub mu_ratio: f64,
    #[serde(serialize_with = "ser_f64")]
    pub alpha_s: f64,
    #[serde(serialize_with = "ser_f64")]
    pub beta_s: f64,
    #[serde(serialize_with = "ser_f64")]
    pub alpha_u: f64,
    #[serde(serialize_with = "ser_f64")]
    pub beta_u: f64,
    #[serde(serialize_with = "ser_f64")]
    pub gamma_s: f64,
    #[serde(serialize_with = "ser_f64")]
    pub gamma_u: f64,
    #[serde(serialize_with = "ser_opt", deserialize_with = "de_opt")]
    pub lambda_cr_compression: Option<f64>,
    #[serde(serialize_with = "ser_opt", deserialize_with = "de_opt")]
    pub lambda_cr_tension: Option<f64>,
    pub status: String,
    pub det_evals: usize,
    pub notes: String,
}

fn notes(r: &CriticalResult) -> String {
    let d = &r.diagnostics;
    let mut s = format!(
        "crossings={};perturbations={};jumps={};suspected-even={};mode-crossings={}",
        r.crossings.len(),
        d.perturbations.len(),
        d.jumps.len(),
        d.suspected_even.len(),
        d.mode_crossings.len()
    );
    if let Some((lambda, e)) = d.failures.first() {
        s.push_str(&format!(";failure at lambda={}: {e}", format_sig(*lambda)));
    }
    s
}

impl ResultRow {
    pub fn new(case_id: impl Into<String>, row: &SweepRow) -> Self {
        let p = &row.point;
        let (sub, up) = (p.stack.substrate, p.stack.upper);
        let (comp, tens, evals, notes) = match &row.result {
            Ok(r) => (r.lambda_cr_compression, r.lambda_cr_tension, r.diagnostics.det_evals, notes(r)),
            Err(e) => (None, None, 0, e.to_string()),
        };
        let big_k = comp.or(tens).map(|l| match p.convention {
            WavenumberConvention::Eulerian => l * p.k,
            WavenumberConvention::Lagrangian => p.k,
        });
        ResultRow {
            case_id: case_id.into(),
            k: p.k,
            big_k,
            b_bar: p.b_bar,
            mu_ratio: p.stack.mu_ratio(),
            alpha_s: sub.alpha,
            beta_s: sub.beta,
            alpha_u: up.alpha,
            beta_u: up.beta,
            gamma_s: sub.gamma,
            gamma_u: up.gamma,
            lambda_cr_compression: comp,
            lambda_cr_tension: tens,
            status: row.status().as_str().to_string(),
            det_evals: evals,
            notes,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

pub fn write_rows<W: Write>(w: W, rows: &[ResultRow]) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(HEADER).map_err(csv_err)?;
    for r in rows {
        wr.serialize(r).map_err(csv_err)?;
    }
    wr.flush().map_err(|e| Error::Config(format!("write: {e}")))
}

pub fn read_rows<R: Read>(r: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(r);
    let header: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(String::from).collect();
    if header != HEADER {
        return Err(Error::Config(format!("unexpected header {header:?}")));
    }
    rd.deserialize().map(|r| r.map_err(csv_err)).collect()
}

pub const TRACE_HEADER: [&str; 5] = ["lambda", "K", "scaled_det", "sign", "status"];

pub fn write_trace<W: Write>(w: W, k: f64, convention: WavenumberConvention, rows: &[(f64, Result<ScaledDeterminant>)]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(TRACE_HEADER).map_err(csv_err)?;
    for (lambda, r) in rows {
        let big_k = match convention {
            WavenumberConvention::Eulerian => lambda * k,
            WavenumberConvention::Lagrangian => k,
        };
        let (det, sign, status) = match r {
            Ok(d) => (format_sig(d.value), format_sig(d.sign), "ok".to_string()),
            Err(e) => (String::new(), String::new(), crate::dispersion::Status::from_error(e).as_str().to_string()),
        };
        wr.write_record([format_sig(*lambda), format_sig(big_k), det, sign, status]).map_err(csv_err)?;
    }
    wr.flush().map_err(|e| Error::Config(format!("write: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.543689012345), "0.543689012");
        assert_eq!(format_sig(1.0), "1.00000000");
        assert_eq!(format_sig(20.0), "20.0000000");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.5e-7), "1.50000000e-7");
        assert_eq!(format_sig(-2.5), "-2.50000000");
    }

    fn sample() -> ResultRow {
        ResultRow {
            case_id: "x".into(),
            k: 1.0,
            big_k: None,
            b_bar: 0.5,
            mu_ratio: 2.0,
            alpha_s: 0.0,
            beta_s: 1.0,
            alpha_u: 0.5,
            beta_u: 1.0,
            gamma_s: 1.0,
            gamma_u: 1.0,
            lambda_cr_compression: Some(0.5436890123),
            lambda_cr_tension: None,
            status: "ok".into(),
            det_evals: 1421,
            notes: "crossings=1;a,b".into(),
        }
    }

    #[test]
    fn header_and_line_endings() {
        let mut buf = Vec::new();
        write_rows(&mut buf, &[sample()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&HEADER.join(",")));
        assert!(!text.contains('\r'));
        assert!(text.contains(",0.543689012,,ok,1421,"));
        let back = read_rows(text.as_bytes()).unwrap();
        assert_eq!(back[0].lambda_cr_tension, None);
        assert_eq!(back[0].notes, "crossings=1;a,b");
    }

    proptest! {
        #[test]
        fn serialized_precision_round_trip(v in -1e6f64..1e6, e in -12i32..12) {
            let x = v * 10f64.powi(e);
            let s = format_sig(x);
            let y: f64 = s.parse().unwrap();
            prop_assert_eq!(format_sig(y), s);
            prop_assert!((x - y).abs() <= 5e-9 * x.abs() * 1.0000001);
        }
    }
}
