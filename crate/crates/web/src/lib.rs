//! Browser bindings. Every export takes plain numbers and strings and returns a
//! JSON document: `{"ok": true, ...}` or `{"ok": false, "error": "..."}`.

use hholo::series::{self, known_rule, PowerSeries};
use hholo::wirtinger::{check_holomorphy_with, DEFAULT_STEP};
use hholo::{parse, FuncExpr, Quaternion};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn respond<T: Serialize>(r: hholo::Result<T>) -> String {
    let v = match r {
        Ok(body) => {
            let mut v = serde_json::to_value(body).expect("serializable");
            v["ok"] = json!(true);
            v
        }
        Err(e) => {
            let mut v = json!({ "ok": false, "error": e.to_string() });
            if let hholo::Error::Parse(p) = &e {
                v["position"] = json!(p.position);
            }
            v
        }
    };
    v.to_string()
}

#[derive(Serialize)]
struct Table {
    coefficients: Vec<f64>,
    imag_residues: Vec<f64>,
    rule: Option<&'static str>,
    rule_values: Vec<f64>,
}

/// Maclaurin coefficients `r_0..r_n` sampled on the circle of radius `rho`,
/// alongside the closed-form rule when the expression is recognised.
#[wasm_bindgen]
pub fn maclaurin_table(expr: &str, n: usize, rho: f64) -> String {
    respond((|| {
        let f = parse(expr)?;
        let ext = series::maclaurin_extract(&f, n, rho, series::default_samples(n))?;
        let rule = known_rule(&f);
        Ok(Table {
            coefficients: ext.series.coeffs,
            imag_residues: ext.imag_residues,
            rule: rule.map(|r| r.name),
            rule_values: rule.map(|r| (0..=n).map(r.rule).collect()).unwrap_or_default(),
        })
    })())
}

#[derive(Serialize)]
struct Curve {
    value: [f64; 4],
    errors: Vec<f64>,
    source: &'static str,
}

/// `|S_n(p) − f(p)|` for `n = 0..terms` at the point `x + yi + zj + uk`.
#[wasm_bindgen]
pub fn convergence_curve(expr: &str, x: f64, y: f64, z: f64, u: f64, terms: usize) -> String {
    respond((|| {
        let f = parse(expr)?;
        let p = Quaternion::try_new(x, y, z, u)?;
        let value = f.eval(p)?;
        let (source, s): (_, PowerSeries) = match known_rule(&f) {
            Some(r) => ("rule", r.series(terms + 1)),
            None => ("extracted", series::maclaurin_coeffs(&f, terms, series::DEFAULT_RHO, series::default_samples(terms))?),
        };
        let errors = (0..=terms.min(s.len().saturating_sub(1)))
            .map(|n| s.partial_sum(p, n).map(|sn| sn.max_abs_diff(value)))
            .collect::<hholo::Result<_>>()?;
        Ok(Curve { value: value.to_array(), errors, source })
    })())
}

#[derive(Serialize)]
struct Scan {
    xs: Vec<f64>,
    holomorphy: Vec<f64>,
    auxiliary: Vec<f64>,
    non_real_constant: bool,
}

/// Largest holomorphy residuals along `x ∈ [x0, x1]` at fixed `z, u`; the
/// auxiliary system is evaluated at the same point with `y` set to `y4`.
#[wasm_bindgen]
pub fn holomorphy_scan(expr: &str, x0: f64, x1: f64, steps: usize, z: f64, u: f64, y4: f64) -> String {
    respond((|| {
        let f: FuncExpr = parse(expr)?;
        let steps = steps.max(2);
        let mut scan = Scan { xs: Vec::new(), holomorphy: Vec::new(), auxiliary: Vec::new(), non_real_constant: f.has_non_real_constant() };
        for i in 0..steps {
            let x = x0 + (x1 - x0) * i as f64 / (steps - 1) as f64;
            let p3 = Quaternion::try_new(x, 0.0, z, u)?;
            let r = check_holomorphy_with(&f, p3, Quaternion::new(x, y4, z, u), 1e-6, DEFAULT_STEP)?;
            scan.xs.push(x);
            scan.holomorphy.push(r.eq3_residuals.iter().cloned().fold(0.0, f64::max));
            scan.auxiliary.push(r.eq11_residuals.iter().cloned().fold(0.0, f64::max));
        }
        Ok(scan)
    })())
}
