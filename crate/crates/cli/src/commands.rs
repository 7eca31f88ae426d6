use std::fmt::Write as _;

use hholo::function::commutator_residual;
use hholo::series::{self, known_rule, ratio_test, ConvergenceReport, Extraction, PowerSeries};
use hholo::wirtinger::{check_holomorphy_with, kth_derivative_with_step, DEFAULT_COMPANION_Y};
use hholo::{parse, FuncExpr, Quaternion, Radius};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::{self, complex, quat, ErrorBody, Exit, GridSpec, Inputs};

/// Rendered outcome of one subcommand.
pub struct Run {
    pub exit: Exit,
    pub machine: serde_json::Value,
    pub text: String,
}

impl Run {
    fn ok<R: Serialize>(exit: Exit, results: R, text: String) -> Self {
        Run { exit, machine: serde_json::to_value(results).expect("results serialization"), text }
    }

    fn error(e: &hholo::Error, inputs: &Inputs) -> Self {
        let body = ErrorBody::new(e);
        let text = body.text(&inputs.expr);
        Run { exit: Exit::from_error(e), machine: serde_json::to_value(body).expect("error serialization"), text }
    }
}

/// Points drawn uniformly from the ball `|p| ≤ radius` by a seeded generator.
pub fn grid_points(spec: GridSpec) -> Vec<Quaternion> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let r = spec.radius;
    let mut out = Vec::with_capacity(spec.n);
    while out.len() < spec.n {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-r..=r));
        let p = Quaternion::from_array(c);
        if p.norm() <= r {
            out.push(p);
        }
    }
    out
}

fn points(inputs: &Inputs) -> Vec<Quaternion> {
    match (inputs.point, inputs.grid) {
        (Some(p), _) => vec![Quaternion::from_array(p)],
        (None, Some(g)) => grid_points(g),
        (None, None) => vec![Quaternion::ZERO],
    }
}

fn parse_expr(src: &str) -> hholo::Result<FuncExpr> {
    Ok(parse(src)?)
}

macro_rules! attempt {
    ($e:expr, $inputs:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Run::error(&err, $inputs),
        }
    };
}

#[derive(Serialize)]
struct EvalRow {
    point: [f64; 4],
    value: [f64; 4],
    phi1: [f64; 2],
    phi2: [f64; 2],
}

#[derive(Serialize)]
struct EvalResults {
    non_real_constant: bool,
    values: Vec<EvalRow>,
}

pub fn eval(inputs: &Inputs) -> Run {
    let f = attempt!(parse_expr(&inputs.expr[0]), inputs);
    let mut rows = Vec::new();
    let mut text = String::new();
    for p in points(inputs) {
        let v = attempt!(f.eval(p), inputs);
        let c = v.to_cd();
        writeln!(text, "f({p}) = {v}").unwrap();
        writeln!(text, "  Phi1 = {}, Phi2 = {}", c.a, c.b).unwrap();
        rows.push(EvalRow { point: quat(p), value: quat(v), phi1: complex(c.a), phi2: complex(c.b) });
    }
    if f.has_non_real_constant() {
        text.push_str("note: expression contains a non-real constant\n");
    }
    Run::ok(Exit::Pass, EvalResults { non_real_constant: f.has_non_real_constant(), values: rows }, text)
}

#[derive(Serialize)]
struct CheckRow {
    point: [f64; 4],
    companion: [f64; 4],
    eq3: [f64; 4],
    eq11: [f64; 4],
    pass: bool,
}

#[derive(Serialize)]
struct CheckResults {
    non_real_constant: bool,
    rows: Vec<CheckRow>,
    max_residual: f64,
    verdict: &'static str,
}

pub fn check(inputs: &Inputs) -> Run {
    let f = attempt!(parse_expr(&inputs.expr[0]), inputs);
    let tol = inputs.tol.expect("tolerance");
    let step = inputs.step.expect("step");
    let pairs: Vec<(Quaternion, Quaternion)> = match inputs.point {
        Some(p) => {
            let p = Quaternion::from_array(p);
            vec![(p, Quaternion::new(p.x, DEFAULT_COMPANION_Y, p.z, p.u))]
        }
        None => points(inputs).into_iter().map(|q| (Quaternion::new(q.x, 0.0, q.z, q.u), q)).collect(),
    };
    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut text = String::from("point                                      eq3 max     eq11 max    ok\n");
    for (p3, companion) in pairs {
        let r = attempt!(check_holomorphy_with(&f, p3, companion, tol, step), inputs);
        let pass = r.passed();
        max_residual = max_residual.max(r.max_residual());
        let m3 = r.eq3_residuals.iter().cloned().fold(0.0, f64::max);
        let m11 = r.eq11_residuals.iter().cloned().fold(0.0, f64::max);
        writeln!(text, "{:<42} {m3:<11.3e} {m11:<11.3e} {}", p3.to_string(), if pass { "yes" } else { "no" }).unwrap();
        rows.push(CheckRow {
            point: quat(p3),
            companion: quat(companion),
            eq3: r.eq3_residuals,
            eq11: r.eq11_residuals,
            pass,
        });
    }
    let passed = rows.iter().all(|r| r.pass);
    let verdict = if passed { "pass" } else { "fail" };
    writeln!(text, "max residual {max_residual:.3e} (tolerance {tol:e}): {}", verdict.to_uppercase()).unwrap();
    if f.has_non_real_constant() {
        text.push_str("note: expression contains a non-real constant and is expected to fail\n");
    }
    let results = CheckResults { non_real_constant: f.has_non_real_constant(), rows, max_residual, verdict };
    Run::ok(if passed { Exit::Pass } else { Exit::Fail }, results, text)
}

#[derive(Serialize)]
struct RuleCheck {
    name: &'static str,
    matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mismatch_index: Option<usize>,
}

#[derive(Serialize)]
struct RadiusSummary {
    source: String,
    radius: serde_json::Value,
    coefficient_limit: Option<f64>,
    monotonicity: Option<String>,
    n_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct SeriesEval {
    point: [f64; 4],
    value: [f64; 4],
    terms_used: usize,
}

#[derive(Serialize)]
struct SeriesResults {
    coefficients: Vec<f64>,
    imag_residues: Vec<f64>,
    noise_floor: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<RuleCheck>,
    radius: RadiusSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    evaluations: Vec<SeriesEval>,
}

fn extract(f: &FuncExpr, inputs: &Inputs) -> hholo::Result<Extraction> {
    let n = inputs.n.expect("n");
    series::maclaurin_extract(f, n, inputs.rho.expect("rho"), inputs.samples.expect("samples"))
}

/// The closed-form series when the expression is recognised, otherwise the
/// extracted coefficients with noise removed.
fn best_series(f: &FuncExpr, ext: &Extraction, n: usize) -> (String, PowerSeries) {
    match known_rule(f) {
        Some(rule) => (format!("rule:{}", rule.name), rule.series(n.max(series::DEFAULT_TERMS))),
        None => ("extracted".into(), ext.denoised()),
    }
}

/// Smallest tail the ratio test is run with on short extracted series.
const MIN_TAIL: usize = 3;

fn summarize(source: String, s: &PowerSeries, point: Option<Quaternion>) -> (RadiusSummary, Option<ConvergenceReport>) {
    let nonzero = s.coeffs.iter().filter(|&&c| c != 0.0).count();
    let tail = series::DEFAULT_TAIL.min(nonzero.saturating_sub(1)).max(MIN_TAIL);
    match ratio_test(s, tail, point) {
        Ok(r) => (
            RadiusSummary {
                source,
                radius: report::radius(r.radius),
                coefficient_limit: Some(r.coefficient_limit),
                monotonicity: Some(format!("{:?}", r.monotonicity).to_lowercase()),
                n_used: r.n_used,
                note: None,
            },
            Some(r),
        ),
        Err(e) => (
            RadiusSummary {
                source,
                radius: report::radius(Radius::Unknown),
                coefficient_limit: None,
                monotonicity: None,
                n_used: s.len(),
                note: Some(e.to_string()),
            },
            None,
        ),
    }
}

pub fn series(inputs: &Inputs) -> Run {
    let f = attempt!(parse_expr(&inputs.expr[0]), inputs);
    let n = inputs.n.expect("n");
    let ext = attempt!(extract(&f, inputs), inputs);

    let rule = known_rule(&f).map(|r| {
        let check = series::general_term_check_with_floor(r.rule, &ext.series.coeffs, &ext.noise_floor);
        RuleCheck {
            name: r.name,
            matches: check.is_ok(),
            mismatch_index: match check {
                Err(hholo::Error::Mismatch(l)) => Some(l),
                _ => None,
            },
        }
    });
    let (source, s) = best_series(&f, &ext, n);
    let (radius, _) = summarize(source, &s, None);

    let mut evaluations = Vec::new();
    if inputs.point.is_some() || inputs.grid.is_some() {
        for p in points(inputs) {
            let sum = attempt!(s.evaluate(p, 1e-15, 400), inputs);
            evaluations.push(SeriesEval { point: quat(p), value: quat(sum.value), terms_used: sum.terms_used });
        }
    }

    let mut text = String::from(" l   r_l                       |Im r_l|\n");
    for (l, (c, im)) in ext.series.coeffs.iter().zip(&ext.imag_residues).enumerate() {
        writeln!(text, "{l:>2}   {c:<+25.17e} {im:.1e}").unwrap();
    }
    if let Some(r) = &rule {
        match r.mismatch_index {
            None => writeln!(text, "general term ({}): match", r.name).unwrap(),
            Some(l) => writeln!(text, "general term ({}): MISMATCH at l = {l}", r.name).unwrap(),
        }
    }
    writeln!(text, "radius ({}): {}", radius.source, radius.radius.as_str().map_or_else(|| radius.radius.to_string(), str::to_string)).unwrap();
    for e in &evaluations {
        writeln!(text, "S({}) = {} [{} terms]", Quaternion::from_array(e.point), Quaternion::from_array(e.value), e.terms_used).unwrap();
    }
    let exit = if rule.as_ref().is_none_or(|r| r.matches) { Exit::Pass } else { Exit::Fail };
    Run::ok(exit, SeriesResults {
        coefficients: ext.series.coeffs.clone(),
        imag_residues: ext.imag_residues.clone(),
        noise_floor: ext.noise_floor.clone(),
        rule,
        radius,
        evaluations,
    }, text)
}

#[derive(Serialize)]
struct DeriveResults {
    order: u32,
    point: [f64; 4],
    value: [f64; 4],
    method: &'static str,
    error_estimate: f64,
    accuracy_loss: bool,
}

pub fn derive(inputs: &Inputs) -> Run {
    let f = attempt!(parse_expr(&inputs.expr[0]), inputs);
    let k = inputs.k.expect("k");
    let p = Quaternion::from_array(inputs.point.expect("point"));
    let d = attempt!(kth_derivative_with_step(&f, p, k, inputs.step.expect("step")), inputs);
    let mut text = format!("f^({k})({p}) = {}\n  method {}, error estimate {:.1e}\n", d.value, d.method.name(), d.error_estimate);
    if d.accuracy_loss {
        text.push_str("warning: accuracy loss, the error estimate is large relative to the value\n");
    }
    Run::ok(Exit::Pass, DeriveResults {
        order: k,
        point: quat(p),
        value: quat(d.value),
        method: d.method.name(),
        error_estimate: d.error_estimate,
        accuracy_loss: d.accuracy_loss,
    }, text)
}

#[derive(Serialize)]
struct RadiusResults {
    #[serde(flatten)]
    summary: RadiusSummary,
    tail: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_limit_at_point: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    term_test_pass: Option<bool>,
    verdict: &'static str,
}

pub fn radius(inputs: &Inputs) -> Run {
    let f = attempt!(parse_expr(&inputs.expr[0]), inputs);
    let n = inputs.n.expect("n");
    let ext = attempt!(extract(&f, inputs), inputs);
    let (source, s) = best_series(&f, &ext, n);
    let point = inputs.point.map(Quaternion::from_array);
    let (summary, report) = summarize(source, &s, point);
    let verdict = if report.is_some() { "determined" } else { "inconclusive" };

    let mut text = format!("series source: {}\n", summary.source);
    match &report {
        Some(r) => {
            writeln!(text, "L = {:.6e}, R = {}, tail {:?} over {} coefficients", r.coefficient_limit, r.radius, r.monotonicity, r.n_used).unwrap();
            if let Some(p) = point {
                writeln!(text, "at {p}: L(p) = {:.6e}, term test {}", r.ratio_limit, if r.term_test_pass { "pass" } else { "fail" }).unwrap();
            }
        }
        None => writeln!(text, "inconclusive: {}", summary.note.as_deref().unwrap_or("")).unwrap(),
    }
    let results = RadiusResults {
        tail: report.as_ref().map(|r| r.tail.clone()).unwrap_or_default(),
        ratio_limit_at_point: point.and(report.as_ref().map(|r| r.ratio_limit)),
        term_test_pass: point.and(report.as_ref().map(|r| r.term_test_pass)),
        summary,
        verdict,
    };
    Run::ok(if report.is_some() { Exit::Pass } else { Exit::Fail }, results, text)
}

#[derive(Serialize)]
struct CommuteRow {
    point: [f64; 4],
    residual: f64,
    scaled: f64,
}

#[derive(Serialize)]
struct CommuteResults {
    rows: Vec<CommuteRow>,
    max_residual: f64,
    max_scaled_residual: f64,
    verdict: &'static str,
}

/// `|fg − gf|` over the points, scaled by `1 + |f||g|`.
pub fn commute(inputs: &Inputs) -> Run {
    let f = attempt!(parse_expr(&inputs.expr[0]), inputs);
    let g = attempt!(parse_expr(&inputs.expr[1]), inputs);
    let tol = inputs.tol.expect("tolerance");
    let mut rows = Vec::new();
    for p in points(inputs) {
        let residual = attempt!(commutator_residual(&f, &g, p), inputs);
        let fv = attempt!(f.eval(p), inputs);
        let gv = attempt!(g.eval(p), inputs);
        let scaled = residual / (1.0 + fv.norm() * gv.norm());
        rows.push(CommuteRow { point: quat(p), residual, scaled });
    }
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let max_scaled_residual = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    let pass = max_scaled_residual <= tol;
    let verdict = if pass { "pass" } else { "fail" };
    let text = format!(
        "max |fg - gf| = {max_residual:.6e}, scaled {max_scaled_residual:.3e} over {} points (tolerance {tol:e}): {}\n",
        rows.len(),
        verdict.to_uppercase()
    );
    Run::ok(if pass { Exit::Pass } else { Exit::Fail }, CommuteResults { rows, max_residual, max_scaled_residual, verdict }, text)
}
