use std::fs;
use std::io::{self, Write};
use std::path::Path;

use hholo::{Complex, Quaternion};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Parse = 2,
    Eval = 3,
    NonReal = 4,
}

impl Exit {
    pub fn from_error(e: &hholo::Error) -> Exit {
        match e {
            hholo::Error::Parse(_) => Exit::Parse,
            hholo::Error::NonRealCoefficient { .. } => Exit::NonReal,
            _ => Exit::Eval,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub radius: f64,
    pub seed: u64,
}

/// Everything needed to reproduce a run. Unset fields are omitted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Inputs {
    pub expr: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

#[derive(Debug, Serialize)]
pub struct Report<R: Serialize> {
    pub subcommand: &'static str,
    pub inputs: Inputs,
    pub results: R,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<f64>,
}

impl ErrorBody {
    pub fn new(e: &hholo::Error) -> Self {
        let mut body = ErrorBody { error: error_kind(e), message: e.to_string(), position: None, index: None, residue: None };
        match e {
            hholo::Error::Parse(p) => body.position = Some(p.position),
            hholo::Error::NonRealCoefficient { index, residue } => {
                body.index = Some(*index);
                body.residue = Some(*residue);
            }
            _ => {}
        }
        body
    }

    pub fn text(&self, src: &[String]) -> String {
        let mut out = format!("error: {}\n", self.message);
        if let (Some(pos), Some(s)) = (self.position, src.first()) {
            out.push_str(&format!("  {s}\n  {}^\n", " ".repeat(s[..pos.min(s.len())].chars().count())));
        }
        out
    }
}

fn error_kind(e: &hholo::Error) -> &'static str {
    use hholo::Error::*;
    match e {
        NonFinite => "non_finite",
        ZeroDivisor => "zero_divisor",
        Overflow => "overflow",
        InvalidPoint(_) => "invalid_point",
        InvalidArgument(_) => "invalid_argument",
        NotConverged { .. } => "not_converged",
        Inconclusive { .. } => "inconclusive",
        MajorantViolated(_) => "majorant_violated",
        NonRealCoefficient { .. } => "non_real_coefficient",
        Mismatch(_) => "mismatch",
        Parse(_) => "parse",
    }
}

pub fn quat(q: Quaternion) -> [f64; 4] {
    q.to_array()
}

pub fn complex(c: Complex) -> [f64; 2] {
    [c.re, c.im]
}

/// Radius as a JSON number, or the string `"inf"` / `"unknown"`.
pub fn radius(r: hholo::Radius) -> serde_json::Value {
    match r {
        hholo::Radius::Finite(v) => serde_json::json!(v),
        hholo::Radius::Infinite => serde_json::json!("inf"),
        hholo::Radius::Unknown => serde_json::json!("unknown"),
    }
}

pub fn to_json<R: Serialize>(report: &Report<R>) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

pub fn emit(body: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, body),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()
        }
    }
}
