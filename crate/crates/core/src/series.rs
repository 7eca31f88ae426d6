//! Quaternionic power series `Σ r_l p^l` with real coefficients.
//!
//! Powers of a single quaternion commute with each other and with real
//! scalars, so partial sums are evaluated by Horner's rule in quaternion
//! arithmetic.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::FuncExpr;
use crate::quat::{Complex, Quaternion};

/// Default circle radius for coefficient extraction.
pub const DEFAULT_RHO: f64 = 0.8;
/// Default number of stored coefficients.
pub const DEFAULT_TERMS: usize = 32;
/// Default number of trailing ratios used by the ratio test.
pub const DEFAULT_TAIL: usize = 6;
/// Extracted coefficients must have imaginary residues below this (or below
/// the rounding floor of the sampling, whichever is larger).
pub const REALNESS_TOL: f64 = 1e-8;
/// Limit estimates below this are reported as an infinite radius.
pub const INFINITE_RADIUS_L: f64 = 1e-8;
/// Relative spread beyond which a non-monotone ratio tail is inconclusive.
pub const OSCILLATION_SPREAD: f64 = 0.1;
/// Relative tolerance of [`general_term_check`].
pub const GENERAL_TERM_TOL: f64 = 1e-9;

/// Multiplier on `ε·max|f|/ρ^k` giving the rounding floor of an extracted
/// coefficient.
const NOISE_FACTOR: f64 = 1e3;

/// Coefficients within this factor of their noise floor are too inaccurate
/// for ratio estimates and are dropped by [`Extraction::denoised`].
pub const DENOISE_MARGIN: f64 = 1e4;

pub fn default_samples(n: usize) -> usize {
    64.max(8 * (n + 1))
}

/// Closed-form coefficient rule `l ↦ r_l`.
pub type Generator = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
    Unknown,
}

impl Radius {
    pub fn as_f64(self) -> Option<f64> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Infinite => Some(f64::INFINITY),
            Radius::Unknown => None,
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinite => f.write_str("inf"),
            Radius::Unknown => f.write_str("unknown"),
        }
    }
}

/// A truncated coefficient sequence, optionally backed by a closed-form rule
/// that supplies coefficients past the stored ones.
#[derive(Clone)]
pub struct PowerSeries {
    pub coeffs: Vec<f64>,
    generator: Option<Generator>,
    pub radius_hint: Radius,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("coeffs", &self.coeffs)
            .field("generator", &self.generator.is_some())
            .field("radius_hint", &self.radius_hint)
            .finish()
    }
}

pub fn inv_factorial(l: usize) -> f64 {
    (1..=l).fold(1.0, |acc, k| acc / k as f64)
}

impl PowerSeries {
    /// Series from explicit coefficients; rejects non-finite values.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(PowerSeries { coeffs, generator: None, radius_hint: Radius::Unknown })
    }

    /// Stores the first `n` coefficients of `rule` and keeps the rule for the
    /// rest.
    pub fn from_rule(rule: Generator, n: usize, radius_hint: Radius) -> Self {
        let coeffs = (0..n).map(|l| rule(l)).collect();
        PowerSeries { coeffs, generator: Some(rule), radius_hint }
    }

    pub fn exp(n: usize) -> Self {
        PowerSeries::from_rule(Arc::new(inv_factorial), n, Radius::Infinite)
    }

    pub fn sin(n: usize) -> Self {
        PowerSeries::from_rule(Arc::new(sin_rule), n, Radius::Infinite)
    }

    pub fn cos(n: usize) -> Self {
        PowerSeries::from_rule(Arc::new(cos_rule), n, Radius::Infinite)
    }

    /// `sin p · cos p = Σ (−1)^l 4^l p^{2l+1} / (2l+1)!`.
    pub fn sin_cos(n: usize) -> Self {
        PowerSeries::from_rule(Arc::new(sin_cos_rule), n, Radius::Infinite)
    }

    /// `Σ p^l`.
    pub fn geometric(n: usize) -> Self {
        PowerSeries::from_rule(Arc::new(|_| 1.0), n, Radius::Finite(1.0))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_generator(&self) -> bool {
        self.generator.is_some()
    }

    /// `r_l`, from storage or the rule; `None` past the stored coefficients of
    /// a rule-less series.
    pub fn coefficient(&self, l: usize) -> Option<f64> {
        match self.coeffs.get(l) {
            Some(&c) => Some(c),
            None => self.generator.as_ref().map(|g| g(l)),
        }
    }

    /// `S_n(p) = Σ_{l=0}^{n} r_l p^l` by Horner's rule.
    pub fn partial_sum(&self, p: Quaternion, n: usize) -> Result<Quaternion> {
        let coeff = |l: usize| {
            self.coefficient(l).ok_or_else(|| {
                Error::InvalidArgument(format!("index {n} beyond {} stored coefficients", self.len()))
            })
        };
        let mut acc = Quaternion::real(coeff(n)?);
        for l in (0..n).rev() {
            acc = acc * p + coeff(l)?;
        }
        Ok(acc)
    }

    /// Sums terms until `|r_l p^l| < tol` for three consecutive `l`.
    pub fn evaluate(&self, p: Quaternion, tol: f64, max_terms: usize) -> Result<SeriesSum> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let mut sum = Quaternion::ZERO;
        let mut power = Quaternion::ONE;
        let mut small = 0;
        for l in 0..max_terms {
            let Some(c) = self.coefficient(l) else {
                return Err(Error::NotConverged { partial: sum, terms: l });
            };
            let term = power.scale_real(c);
            let next = sum + term;
            if !next.is_finite() {
                return Err(Error::NotConverged { partial: sum, terms: l });
            }
            sum = next;
            if term.norm() < tol {
                small += 1;
                if small == 3 {
                    return Ok(SeriesSum { value: sum, terms_used: l + 1 });
                }
            } else {
                small = 0;
            }
            power *= p;
        }
        Err(Error::NotConverged { partial: sum, terms: max_terms })
    }

    /// Termwise derivative: `r′_l = (l + 1)·r_{l+1}`.
    pub fn differentiate(&self) -> PowerSeries {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(l, &c)| l as f64 * c).collect();
        let generator = self.generator.clone().map(|g| -> Generator { Arc::new(move |l| (l + 1) as f64 * g(l + 1)) });
        PowerSeries { coeffs, generator, radius_hint: self.radius_hint }
    }

    /// Linear combination `α·self + β·other` over the shorter stored length.
    pub fn combine(&self, alpha: f64, other: &PowerSeries, beta: f64) -> PowerSeries {
        let n = self.len().min(other.len());
        let coeffs = (0..n).map(|l| alpha * self.coeffs[l] + beta * other.coeffs[l]).collect();
        let generator = match (&self.generator, &other.generator) {
            (Some(f), Some(g)) => {
                let (f, g) = (f.clone(), g.clone());
                Some(Arc::new(move |l| alpha * f(l) + beta * g(l)) as Generator)
            }
            _ => None,
        };
        let radius_hint = match (self.radius_hint, other.radius_hint) {
            (Radius::Infinite, Radius::Infinite) => Radius::Infinite,
            (Radius::Infinite, r) | (r, Radius::Infinite) => r,
            (Radius::Finite(a), Radius::Finite(b)) => Radius::Finite(a.min(b)),
            _ => Radius::Unknown,
        };
        PowerSeries { coeffs, generator, radius_hint }
    }
}

fn sin_rule(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        0.0
    } else if (l / 2).is_multiple_of(2) {
        inv_factorial(l)
    } else {
        -inv_factorial(l)
    }
}

fn cos_rule(l: usize) -> f64 {
    if l % 2 == 1 {
        0.0
    } else if (l / 2).is_multiple_of(2) {
        inv_factorial(l)
    } else {
        -inv_factorial(l)
    }
}

fn sin_cos_rule(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        return 0.0;
    }
    let m = (l - 1) / 2;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * 4f64.powi(m as i32) * inv_factorial(l)
}

/// A closed-form coefficient rule recognised from an expression.
#[derive(Clone, Copy)]
pub struct KnownRule {
    pub name: &'static str,
    pub rule: fn(usize) -> f64,
    pub radius: Radius,
}

impl fmt::Debug for KnownRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KnownRule").field("name", &self.name).field("radius", &self.radius).finish()
    }
}

impl KnownRule {
    pub fn series(&self, n: usize) -> PowerSeries {
        PowerSeries::from_rule(Arc::new(self.rule), n, self.radius)
    }
}

/// Recognises `exp(p)`, `sin(p)`, `cos(p)`, `sin(p)*cos(p)` (either order)
/// and `1/(1 - p)`.
pub fn known_rule(f: &FuncExpr) -> Option<KnownRule> {
    use crate::function::Head;
    let rule = |name, rule, radius| Some(KnownRule { name, rule, radius });
    if let Some(head) = f.catalog_head() {
        return match head {
            Head::Exp => rule("exp", inv_factorial as fn(usize) -> f64, Radius::Infinite),
            Head::Sin => rule("sin", sin_rule, Radius::Infinite),
            Head::Cos => rule("cos", cos_rule, Radius::Infinite),
        };
    }
    match f {
        FuncExpr::Mul(a, b) => {
            let pair = (a.catalog_head(), b.catalog_head());
            use crate::function::Head::{Cos, Sin};
            if pair == (Some(Sin), Some(Cos)) || pair == (Some(Cos), Some(Sin)) {
                return rule("sin_cos", sin_cos_rule, Radius::Infinite);
            }
            None
        }
        FuncExpr::Div(num, den) => {
            let one = FuncExpr::Real(1.0);
            if **num == one && **den == FuncExpr::Real(1.0) - FuncExpr::Var {
                return rule("geometric", |_| 1.0, Radius::Finite(1.0));
            }
            None
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Quaternion,
    pub terms_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Constant,
    Decreasing,
    Increasing,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Estimated `lim |r_{l+1} p^{l+1}| / |r_l p^l|` at the supplied point, or
    /// the coefficient-only limit `lim |r_{l+1}| / |r_l|` when no point was
    /// given.
    pub ratio_limit: f64,
    /// Coefficient-only limit; `1/R`.
    pub coefficient_limit: f64,
    pub radius: Radius,
    /// Whether the terms at the point tend to zero over the stored range
    /// (`|p| = 1` when no point was given).
    pub term_test_pass: bool,
    /// Per-index ratios (gap-normalised) in the tail, oldest first.
    pub tail: Vec<f64>,
    pub monotonicity: Monotonicity,
    /// Number of coefficients examined.
    pub n_used: usize,
}

/// Neville extrapolation of `(t_i, v_i)` to `t = 0`.
fn extrapolate_to_zero(t: &[f64], v: &[f64]) -> f64 {
    let mut p = v.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (t[i + m] * p[i] - t[i] * p[i + 1]) / (t[i + m] - t[i]);
        }
    }
    p[0]
}

fn monotonicity(v: &[f64]) -> Monotonicity {
    let rel = 1e-12;
    let non_inc = v.windows(2).all(|w| w[1] <= w[0] * (1.0 + rel));
    let non_dec = v.windows(2).all(|w| w[1] >= w[0] * (1.0 - rel));
    match (non_inc, non_dec) {
        (true, true) => Monotonicity::Constant,
        (true, false) => Monotonicity::Decreasing,
        (false, true) => Monotonicity::Increasing,
        (false, false) => Monotonicity::Mixed,
    }
}

/// d'Alembert ratio test on the stored coefficients.
///
/// Zero coefficients are skipped: between consecutive nonzero coefficients
/// `r_{l₀}, r_{l₁}` the per-index ratio is `(|r_{l₁}|/|r_{l₀}|)^{1/(l₁−l₀)}`.
/// The limit is estimated by polynomial extrapolation of the last `n_tail`
/// ratios in `1/l` to `1/l → 0`, which is exact for ratios that are constant
/// or rational in `l` of the `1/l!` type and converges quickly for the smooth
/// tails of entire functions.
pub fn ratio_test(s: &PowerSeries, n_tail: usize, point: Option<Quaternion>) -> Result<ConvergenceReport> {
    if n_tail < 2 {
        return Err(Error::InvalidArgument("ratio test needs a tail of at least 2 ratios".into()));
    }
    let nonzero: Vec<usize> = (0..s.len()).filter(|&l| s.coeffs[l] != 0.0).collect();
    if nonzero.len() < n_tail + 1 {
        return Err(Error::InvalidArgument(format!(
            "ratio test needs {} nonzero coefficients, found {}",
            n_tail + 1,
            nonzero.len()
        )));
    }
    let mut t = Vec::with_capacity(nonzero.len() - 1);
    let mut ratios = Vec::with_capacity(nonzero.len() - 1);
    for w in nonzero.windows(2) {
        let (l0, l1) = (w[0], w[1]);
        let gap = (l1 - l0) as f64;
        ratios.push((s.coeffs[l1].abs() / s.coeffs[l0].abs()).powf(1.0 / gap));
        t.push(1.0 / l1 as f64);
    }
    let start = ratios.len() - n_tail;
    let tail = ratios[start..].to_vec();
    let mono = monotonicity(&tail);
    let coefficient_limit = if mono == Monotonicity::Mixed {
        let max = tail.iter().cloned().fold(f64::MIN, f64::max);
        let min = tail.iter().cloned().fold(f64::MAX, f64::min);
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let spread = (max - min) / mean;
        if spread > OSCILLATION_SPREAD {
            return Err(Error::Inconclusive { spread });
        }
        mean
    } else {
        extrapolate_to_zero(&t[start..], &tail).max(0.0)
    };
    let radius = if coefficient_limit < INFINITE_RADIUS_L {
        if matches!(mono, Monotonicity::Decreasing) {
            Radius::Infinite
        } else {
            Radius::Unknown
        }
    } else {
        Radius::Finite(1.0 / coefficient_limit)
    };
    let modulus = point.map_or(1.0, |p| p.norm());
    let ratio_limit = coefficient_limit * modulus;
    Ok(ConvergenceReport {
        ratio_limit,
        coefficient_limit,
        radius,
        term_test_pass: term_test(s, modulus),
        tail,
        monotonicity: mono,
        n_used: s.len(),
    })
}

/// Whether `|r_l|·modulus^l` has fallen to a small fraction of its peak by the
/// last stored index. Failing is evidence of divergence.
pub fn term_test(s: &PowerSeries, modulus: f64) -> bool {
    let mut peak: f64 = 0.0;
    let mut last = 0.0;
    let mut power = 1.0;
    for &c in &s.coeffs {
        last = c.abs() * power;
        peak = peak.max(last);
        power *= modulus;
    }
    last <= 1e-3 * peak
}

#[derive(Debug, Clone, PartialEq)]
pub struct MTestCertificate {
    pub ball_radius: f64,
    pub terms_checked: usize,
    /// Largest `|r_l| ρ^l / M_l` over indices with `M_l > 0`.
    pub max_ratio: f64,
    /// Ratio test on `Σ M_l` (its limit must be below 1).
    pub majorant_report: ConvergenceReport,
}

/// Weierstrass M-test on the closed ball `|p| ≤ ball_radius`: checks
/// `|r_l| ρ^l ≤ M_l` for all stored `l` and that `Σ M_l` passes the ratio
/// test.
pub fn m_test(s: &PowerSeries, ball_radius: f64, majorant: impl Fn(usize) -> f64) -> Result<MTestCertificate> {
    if ball_radius.is_nan() || ball_radius <= 0.0 {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {ball_radius}")));
    }
    let mut bounds = Vec::with_capacity(s.len());
    let mut max_ratio: f64 = 0.0;
    let mut power = 1.0;
    for (l, &c) in s.coeffs.iter().enumerate() {
        let m = majorant(l);
        if !m.is_finite() || m < 0.0 {
            return Err(Error::InvalidArgument(format!("majorant M_{l} = {m} is not a finite non-negative value")));
        }
        let term = c.abs() * power;
        if term > m * (1.0 + 1e-12) {
            return Err(Error::MajorantViolated(l));
        }
        if m > 0.0 {
            max_ratio = max_ratio.max(term / m);
        }
        bounds.push(m);
        power *= ball_radius;
    }
    let majorant_series = PowerSeries::new(bounds)?;
    let majorant_report = ratio_test(&majorant_series, DEFAULT_TAIL, None)?;
    if majorant_report.coefficient_limit >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "majorant series does not pass the ratio test (limit {})",
            majorant_report.coefficient_limit
        )));
    }
    Ok(MTestCertificate { ball_radius, terms_checked: s.len(), max_ratio, majorant_report })
}

/// Bounded terms at `p0`: if `|r_l p0^l| ≤ bound` for every stored `l`, the
/// series converges on the open ball of radius `|p0|`, which is returned.
pub fn bounded_terms(s: &PowerSeries, p0: Quaternion, bound: f64) -> Result<f64> {
    let modulus = p0.norm();
    let mut power = 1.0;
    for (l, &c) in s.coeffs.iter().enumerate() {
        if c.abs() * power > bound {
            return Err(Error::MajorantViolated(l));
        }
        power *= modulus;
    }
    Ok(modulus)
}

/// Result of sampling a function on a circle in the complex restriction.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub series: PowerSeries,
    /// `|Im r_k|` including the `j, k` parts of the sampled coefficient.
    pub imag_residues: Vec<f64>,
    /// Rounding floor of each extracted coefficient.
    pub noise_floor: Vec<f64>,
    pub rho: f64,
    pub samples: usize,
}

impl Extraction {
    /// Coefficients below [`DENOISE_MARGIN`] times their noise floor replaced
    /// by zero, trailing zeros dropped.
    pub fn denoised(&self) -> PowerSeries {
        let mut coeffs: Vec<f64> = self
            .series
            .coeffs
            .iter()
            .zip(&self.noise_floor)
            .map(|(&c, &floor)| if c.abs() > DENOISE_MARGIN * floor { c } else { 0.0 })
            .collect();
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        PowerSeries { coeffs, generator: None, radius_hint: Radius::Unknown }
    }
}

/// Maclaurin coefficients `r_0..r_n` from discrete Fourier sums of `f` on the
/// circle `|a| = rho` in the complex restriction (`b = 0`).
pub fn maclaurin_extract(f: &FuncExpr, n: usize, rho: f64, samples: usize) -> Result<Extraction> {
    if !rho.is_finite() || rho <= 0.0 {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    if samples < 4 * (n + 1) {
        return Err(Error::InvalidArgument(format!("need at least {} samples, got {samples}", 4 * (n + 1))));
    }
    let step = std::f64::consts::TAU / samples as f64;
    let mut values = Vec::with_capacity(samples);
    let mut max_abs: f64 = 0.0;
    for m in 0..samples {
        let a = Complex::cis(m as f64 * step).scale(rho);
        let q = f.eval(Quaternion::new(a.re, a.im, 0.0, 0.0))?;
        max_abs = max_abs.max(q.norm());
        values.push(q.to_cd());
    }

    let mut coeffs = Vec::with_capacity(n + 1);
    let mut imag_residues = Vec::with_capacity(n + 1);
    let mut noise_floor = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // q·e^{−ikθ} = A·c + B·c̄·j for q = A + B·j and complex c.
        let mut sa = Complex::ZERO;
        let mut sb = Complex::ZERO;
        for (m, v) in values.iter().enumerate() {
            let c = Complex::cis(-(((k * m) % samples) as f64) * step);
            sa = sa + v.a * c;
            sb = sb + v.b * c.conj();
        }
        let scale = 1.0 / (samples as f64 * rho.powi(k as i32));
        let floor = NOISE_FACTOR * f64::EPSILON * max_abs * rho.powi(-(k as i32));
        let residue = (sa.im * sa.im + sb.norm_sqr()).sqrt() * scale;
        if residue > REALNESS_TOL.max(floor) {
            return Err(Error::NonRealCoefficient { index: k, residue });
        }
        coeffs.push(sa.re * scale);
        imag_residues.push(residue);
        noise_floor.push(floor);
    }
    Ok(Extraction {
        series: PowerSeries::new(coeffs)?,
        imag_residues,
        noise_floor,
        rho,
        samples,
    })
}

pub fn maclaurin_coeffs(f: &FuncExpr, n: usize, rho: f64, samples: usize) -> Result<PowerSeries> {
    Ok(maclaurin_extract(f, n, rho, samples)?.series)
}

/// Compares `rule(l)` with `coeffs[l]` for every index: within
/// [`GENERAL_TERM_TOL`] relative, or absolute where the rule gives zero.
pub fn general_term_check(rule: impl Fn(usize) -> f64, coeffs: &[f64]) -> Result<()> {
    general_term_check_with_floor(rule, coeffs, &[])
}

/// As [`general_term_check`], additionally accepting differences up to
/// `floors[l]` (absent entries count as zero).
pub fn general_term_check_with_floor(rule: impl Fn(usize) -> f64, coeffs: &[f64], floors: &[f64]) -> Result<()> {
    for (l, &c) in coeffs.iter().enumerate() {
        let expected = rule(l);
        let scale = if expected == 0.0 { 1.0 } else { expected.abs().max(c.abs()) };
        let floor = floors.get(l).copied().unwrap_or(0.0);
        if (c - expected).abs() > (GENERAL_TERM_TOL * scale).max(floor) {
            return Err(Error::Mismatch(l));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn partial_sums() {
        let exp = PowerSeries::exp(DEFAULT_TERMS);
        for n in [0, 3, 10] {
            assert_eq!(exp.partial_sum(Quaternion::ZERO, n).unwrap(), Quaternion::ONE);
        }
        let five = PowerSeries::new(vec![5.0]).unwrap();
        assert_eq!(five.partial_sum(Quaternion::new(1.0, 2.0, 3.0, 4.0), 0).unwrap(), Quaternion::real(5.0));
        assert!(five.partial_sum(Quaternion::ONE, 1).is_err());
        let p = Quaternion::ONE + Quaternion::J;
        let s = exp.partial_sum(p, 30).unwrap();
        let e = parse("exp(p)").unwrap().eval(p).unwrap();
        assert!(s.max_abs_diff(e) < 1e-10);
    }

    #[test]
    fn evaluate_examples() {
        let p = Quaternion::J.scale_real(0.5);
        let s = PowerSeries::sin(DEFAULT_TERMS).evaluate(p, 1e-12, 100).unwrap();
        assert!(s.value.max_abs_diff(parse("sin(p)").unwrap().eval(p).unwrap()) < 1e-10);

        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0); // |q| = 2
        match PowerSeries::geometric(8).evaluate(q, 1e-12, 200) {
            Err(Error::NotConverged { terms, .. }) => assert_eq!(terms, 200),
            other => panic!("{other:?}"),
        }

        let c = PowerSeries::cos(DEFAULT_TERMS).evaluate(Quaternion::ZERO, 1e-12, 100).unwrap();
        assert_eq!(c.value, Quaternion::ONE);
        assert!(c.terms_used <= 4);
    }

    #[test]
    fn ruleless_series_runs_out() {
        let s = PowerSeries::new(vec![1.0; 5]).unwrap();
        assert!(matches!(s.evaluate(Quaternion::real(0.9), 1e-12, 100), Err(Error::NotConverged { terms: 5, .. })));
    }

    #[test]
    fn ratio_test_examples() {
        let r = ratio_test(&PowerSeries::exp(DEFAULT_TERMS), DEFAULT_TAIL, Some(Quaternion::new(3.0, 1.0, 0.0, 2.0))).unwrap();
        assert_eq!(r.radius, Radius::Infinite);
        assert!(r.ratio_limit < INFINITE_RADIUS_L);
        let r = ratio_test(&PowerSeries::sin_cos(DEFAULT_TERMS), DEFAULT_TAIL, None).unwrap();
        assert_eq!(r.radius, Radius::Infinite, "{r:?}");
        let r = ratio_test(&PowerSeries::geometric(DEFAULT_TERMS), DEFAULT_TAIL, None).unwrap();
        assert_eq!(r.radius, Radius::Finite(1.0));
        assert!(!r.term_test_pass);
    }

    #[test]
    fn ratio_test_inconclusive_on_oscillation() {
        let coeffs = (0..32).map(|l| if l % 2 == 0 { 1.0 } else { 2.0 }).collect();
        let s = PowerSeries::new(coeffs).unwrap();
        assert!(matches!(ratio_test(&s, 6, None), Err(Error::Inconclusive { .. })));
    }

    #[test]
    fn ratio_test_needs_coefficients() {
        let s = PowerSeries::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(ratio_test(&s, 6, None).is_err());
        assert!(ratio_test(&PowerSeries::exp(32), 1, None).is_err());
    }

    #[test]
    fn m_test_examples() {
        let g = PowerSeries::geometric(DEFAULT_TERMS);
        let cert = m_test(&g, 0.5, |l| 0.5f64.powi(l as i32)).unwrap();
        assert!((cert.max_ratio - 1.0).abs() < 1e-15);
        assert!(matches!(m_test(&g, 2.0, |l| 0.5f64.powi(l as i32)), Err(Error::MajorantViolated(1))));

        let rho: f64 = 2.5;
        let s = PowerSeries::sin_cos(DEFAULT_TERMS);
        let majorant = |k: usize| {
            if k.is_multiple_of(2) {
                0.0
            } else {
                let l = (k - 1) / 2;
                5f64.powi(l as i32) * rho.powi(k as i32) * inv_factorial(k)
            }
        };
        assert!(m_test(&s, rho, majorant).is_ok());
    }

    #[test]
    fn bounded_terms_gives_radius() {
        let g = PowerSeries::geometric(40);
        assert_eq!(bounded_terms(&g, Quaternion::real(1.0), 1.0).unwrap(), 1.0);
        assert!(bounded_terms(&g, Quaternion::real(1.1), 10.0).is_err());
    }

    #[test]
    fn termwise_derivatives() {
        let n = 20;
        let d = PowerSeries::exp(n).differentiate();
        assert_eq!(d.len(), n - 1);
        for l in 0..n + 5 {
            let want = inv_factorial(l);
            assert!((d.coefficient(l).unwrap() - want).abs() <= 1e-15 * want.max(1e-300), "{l}");
        }
        let ds = PowerSeries::sin(n).differentiate();
        let dc = PowerSeries::cos(n).differentiate();
        for l in 0..n + 5 {
            assert!((ds.coefficient(l).unwrap() - cos_rule(l)).abs() < 1e-15);
            assert!((dc.coefficient(l).unwrap() + sin_rule(l)).abs() < 1e-15);
        }
        assert_eq!(ds.radius_hint, Radius::Infinite);
    }

    #[test]
    fn extraction_examples() {
        let ex = maclaurin_coeffs(&parse("exp(p)").unwrap(), 6, 1.0, 64).unwrap();
        for (l, c) in ex.coeffs.iter().enumerate() {
            assert!((c - inv_factorial(l)).abs() < 1e-10);
        }
        match maclaurin_coeffs(&parse("j*exp(p)").unwrap(), 6, 0.8, 64) {
            Err(Error::NonRealCoefficient { index: 0, residue }) => assert!((residue - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(maclaurin_coeffs(&parse("p").unwrap(), 20, 0.8, 64).is_err());
        let lin = maclaurin_coeffs(&parse("p").unwrap(), 3, 0.8, 64).unwrap();
        for (c, want) in lin.coeffs.iter().zip([0.0, 1.0, 0.0, 0.0]) {
            assert!((c - want).abs() < 1e-14);
        }
    }

    #[test]
    fn general_term_examples() {
        let exp = maclaurin_coeffs(&parse("exp(p)").unwrap(), 10, 0.8, 88).unwrap();
        assert!(general_term_check(inv_factorial, &exp.coeffs).is_ok());
        let sin = maclaurin_coeffs(&parse("sin(p)").unwrap(), 10, 0.8, 88).unwrap();
        assert_eq!(general_term_check(inv_factorial, &sin.coeffs), Err(Error::Mismatch(0)));
    }

    #[test]
    fn known_rules() {
        assert_eq!(known_rule(&parse("cos(p)*sin(p)").unwrap()).unwrap().name, "sin_cos");
        assert_eq!(known_rule(&parse("1/(1 - p)").unwrap()).unwrap().name, "geometric");
        assert!(known_rule(&parse("exp(2*p)").unwrap()).is_none());
    }

    #[test]
    fn denoise_drops_tail() {
        let ex = maclaurin_extract(&parse("1 + p^2").unwrap(), 8, 0.8, 64).unwrap();
        assert_eq!(ex.denoised().coeffs.len(), 3);
    }
}
