//! CSV and JSON writers. Numbers in CSV carry 17 significant digits; JSON numbers are
//! shortest round-trip doubles. Nothing time-dependent is written.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::laplace::OperatorCoefficients;
use crate::solvers::sphere::SphereEigen;
use crate::spectral::SpectralResult;

/// `{:.16e}`: 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn coefficients_csv(rows: &[OperatorCoefficients]) -> String {
    let mut out = String::from("x1,x2,a11,a12,a22,b1,b2,w\n");
    for r in rows {
        let vals = [r.x1, r.x2, r.a11, r.a12, r.a22, r.b1, r.b2, r.w];
        let line: Vec<String> = vals.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// One output row of a spectrum table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub m: Option<i64>,
    pub l_guess: Option<usize>,
}

pub fn spectrum_rows(res: &SpectralResult, sphere: Option<&[SphereEigen]>) -> Vec<SpectrumRow> {
    let mult = res.multiplicities();
    res.eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &eigenvalue)| SpectrumRow {
            index: i,
            eigenvalue,
            multiplicity: mult[i],
            m: sphere.map(|s| s[i].m),
            l_guess: sphere.map(|s| s[i].l_guess),
        })
        .collect()
}

pub fn spectrum_csv(rows: &[SpectrumRow]) -> String {
    let mut out = String::from("index,eigenvalue,multiplicity,m,l_guess\n");
    for r in rows {
        let m = r.m.map(|v| v.to_string()).unwrap_or_default();
        let l = r.l_guess.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", r.index, fmt_f64(r.eigenvalue), r.multiplicity, m, l);
    }
    out
}

/// A JSON document `{"metadata": ..., "data": ...}`; the metadata carries the parameters
/// and a reproducibility block.
pub fn json_document<T: Serialize>(command: &str, parameters: Value, data: &T) -> String {
    let doc = json!({
        "metadata": {
            "command": command,
            "parameters": parameters,
            "reproducibility": {
                "package": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "float_format": "IEEE-754 binary64",
                "deterministic": true,
            },
        },
        "data": data,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
    s.push('\n');
    s
}
