//! Numerical Wirtinger partials of the doubling components and the checks built
//! on them: the H-holomorphy system at points with `y = 0`, the auxiliary
//! system at general points, and full quaternionic derivatives.
//!
//! Partials with respect to `a, ā, b, b̄` are combinations of central
//! differences along the real coordinates:
//! `∂ₐ = (∂ₓ − i∂_y)/2`, `∂_ā = (∂ₓ + i∂_y)/2`, `∂_b = (∂_z − i∂_u)/2`,
//! `∂_b̄ = (∂_z + i∂_u)/2`. Partials of conjugated components follow from
//! `∂_s̄(Φ̄) = conj(∂_s Φ)`.

use crate::error::{Error, Result};
use crate::function::FuncExpr;
use crate::quat::{CayleyDickson, Complex, Quaternion};
use crate::series;

/// Default absolute step for the central differences (scaled by `max(1, |p|)`).
pub const DEFAULT_STEP: f64 = 1e-5;
/// Default residual tolerance for the holomorphy checks.
pub const DEFAULT_HOLOMORPHY_TOL: f64 = 1e-6;
/// Relative truncation estimate above which a higher derivative is flagged.
pub const ACCURACY_LOSS_THRESHOLD: f64 = 1e-4;
/// Largest order accepted by the nested-stencil path.
pub const MAX_STENCIL_ORDER: u32 = 4;

/// Offset of the companion point used for the auxiliary system when none is
/// given: the `y` coordinate of the 3D point is replaced by this value.
pub const DEFAULT_COMPANION_Y: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialsTable {
    pub d_phi1_da: Complex,
    pub d_phi1_dabar: Complex,
    pub d_phi1_db: Complex,
    pub d_phi1_dbbar: Complex,
    pub d_phi2_da: Complex,
    pub d_phi2_dabar: Complex,
    pub d_phi2_db: Complex,
    pub d_phi2_dbbar: Complex,
    /// Effective step used by the stencils.
    pub step: f64,
    pub point: Quaternion,
}

impl PartialsTable {
    /// `∂ₐ Φ̄₁`.
    pub fn d_phi1bar_da(&self) -> Complex {
        self.d_phi1_dabar.conj()
    }

    /// `∂_b̄ Φ̄₁`.
    pub fn d_phi1bar_dbbar(&self) -> Complex {
        self.d_phi1_db.conj()
    }

    /// `∂_b̄ Φ̄₂`.
    pub fn d_phi2bar_dbbar(&self) -> Complex {
        self.d_phi2_db.conj()
    }

    /// Residuals of the four holomorphy equations, in order:
    /// `∂ₐΦ₁ = ∂_b̄Φ̄₂`, `∂ₐΦ₂ = −∂_b̄Φ̄₁`, `∂ₐΦ₁ = ∂_bΦ₂`, `∂_āΦ₂ = −∂_b̄Φ₁`.
    pub fn holomorphy_residuals(&self) -> [f64; 4] {
        [
            (self.d_phi1_da - self.d_phi2bar_dbbar()).abs(),
            (self.d_phi2_da + self.d_phi1bar_dbbar()).abs(),
            (self.d_phi1_da - self.d_phi2_db).abs(),
            (self.d_phi2_dabar + self.d_phi1_dbbar).abs(),
        ]
    }

    /// Residuals of the auxiliary equations, in order:
    /// `∂_bΦ₂ = ∂_b̄Φ̄₂`, `∂ₐΦ₂ = −∂_b̄Φ₁`, `∂_āΦ₁ = ∂ₐΦ̄₁`, `∂_āΦ₂ = −∂_b̄Φ̄₁`.
    pub fn auxiliary_residuals(&self) -> [f64; 4] {
        [
            (self.d_phi2_db - self.d_phi2bar_dbbar()).abs(),
            (self.d_phi2_da + self.d_phi1_dbbar).abs(),
            (self.d_phi1_dabar - self.d_phi1bar_da()).abs(),
            (self.d_phi2_dabar + self.d_phi1bar_dbbar()).abs(),
        ]
    }

    /// `(∂ₐΦ₁ + ∂_āΦ₁) + (∂ₐΦ₂ + ∂_āΦ₂)·j`.
    pub fn full_derivative(&self) -> Quaternion {
        Quaternion::from_cd(CayleyDickson::new(
            self.d_phi1_da + self.d_phi1_dabar,
            self.d_phi2_da + self.d_phi2_dabar,
        ))
    }
}

fn effective_step(h: f64, p: Quaternion) -> Result<f64> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    Ok(h * p.norm().max(1.0))
}

fn central(f: &FuncExpr, p: Quaternion, dir: Quaternion, h: f64) -> Result<(Complex, Complex)> {
    let plus = f.phi_components(p + dir.scale_real(h))?;
    let minus = f.phi_components(p - dir.scale_real(h))?;
    let inv = 1.0 / (2.0 * h);
    Ok(((plus.phi1 - minus.phi1) * inv, (plus.phi2 - minus.phi2) * inv))
}

/// Wirtinger partials of `Φ₁, Φ₂` at `p` with base step `h`.
pub fn partials(f: &FuncExpr, p: Quaternion, h: f64) -> Result<PartialsTable> {
    let step = effective_step(h, p)?;
    let (p1x, p2x) = central(f, p, Quaternion::ONE, step)?;
    let (p1y, p2y) = central(f, p, Quaternion::I, step)?;
    let (p1z, p2z) = central(f, p, Quaternion::J, step)?;
    let (p1u, p2u) = central(f, p, Quaternion::K, step)?;

    let d = |dr: Complex, di: Complex, sign: f64| (dr + Complex::I * di * sign) * 0.5;
    Ok(PartialsTable {
        d_phi1_da: d(p1x, p1y, -1.0),
        d_phi1_dabar: d(p1x, p1y, 1.0),
        d_phi1_db: d(p1z, p1u, -1.0),
        d_phi1_dbbar: d(p1z, p1u, 1.0),
        d_phi2_da: d(p2x, p2y, -1.0),
        d_phi2_dabar: d(p2x, p2y, 1.0),
        d_phi2_db: d(p2z, p2u, -1.0),
        d_phi2_dbbar: d(p2z, p2u, 1.0),
        step,
        point: p,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphyReport {
    /// Point with `y = 0` at which the holomorphy equations were evaluated.
    pub point: Quaternion,
    /// General point at which the auxiliary equations were evaluated.
    pub companion: Quaternion,
    pub step: f64,
    pub tolerance: f64,
    pub eq3_residuals: [f64; 4],
    pub eq11_residuals: [f64; 4],
    /// The function contains a non-real constant and is expected to fail.
    pub non_real_constant: bool,
}

impl HolomorphyReport {
    pub fn eq3_pass(&self) -> [bool; 4] {
        self.eq3_residuals.map(|r| r <= self.tolerance)
    }

    pub fn eq11_pass(&self) -> [bool; 4] {
        self.eq11_residuals.map(|r| r <= self.tolerance)
    }

    pub fn passed(&self) -> bool {
        self.eq3_pass().iter().chain(self.eq11_pass().iter()).all(|&ok| ok)
    }

    pub fn max_residual(&self) -> f64 {
        self.eq3_residuals.iter().chain(self.eq11_residuals.iter()).fold(0.0, |m, &r| m.max(r))
    }
}

/// Checks the holomorphy system at `p3` (which must have `y = 0`) and the
/// auxiliary system at the default companion point.
pub fn check_holomorphy(f: &FuncExpr, p3: Quaternion, tol: f64) -> Result<HolomorphyReport> {
    let companion = Quaternion::new(p3.x, DEFAULT_COMPANION_Y, p3.z, p3.u);
    check_holomorphy_with(f, p3, companion, tol, DEFAULT_STEP)
}

pub fn check_holomorphy_with(
    f: &FuncExpr,
    p3: Quaternion,
    companion: Quaternion,
    tol: f64,
    h: f64,
) -> Result<HolomorphyReport> {
    if p3.y != 0.0 {
        return Err(Error::InvalidPoint(format!(
            "holomorphy equations are evaluated at y = 0, got y = {}",
            p3.y
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let at3 = partials(f, p3, h)?;
    let at4 = partials(f, companion, h)?;
    Ok(HolomorphyReport {
        point: p3,
        companion,
        step: at3.step,
        tolerance: tol,
        eq3_residuals: at3.holomorphy_residuals(),
        eq11_residuals: at4.auxiliary_residuals(),
        non_real_constant: f.has_non_real_constant(),
    })
}

/// Full quaternionic derivative `Φ₁′ + Φ₂′·j` by central differences.
pub fn full_derivative(f: &FuncExpr, p: Quaternion, h: f64) -> Result<Quaternion> {
    Ok(partials(f, p, h)?.full_derivative())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMethod {
    /// `k = 0`: plain evaluation.
    Direct,
    /// Nested central differences.
    Stencil,
    /// `k!·r_k` from the Maclaurin coefficients (only at `p = 0`).
    Series,
}

impl DerivativeMethod {
    pub fn name(self) -> &'static str {
        match self {
            DerivativeMethod::Direct => "direct",
            DerivativeMethod::Stencil => "stencil",
            DerivativeMethod::Series => "series",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KthDerivative {
    pub order: u32,
    pub value: Quaternion,
    pub method: DerivativeMethod,
    /// Estimated absolute error of `value`.
    pub error_estimate: f64,
    /// The estimate exceeds [`ACCURACY_LOSS_THRESHOLD`] relative to
    /// `max(1, |value|)`.
    pub accuracy_loss: bool,
}

/// One application of `Φ ↦ ∂ₐΦ + ∂_āΦ` to the nested stencil of order `k − 1`.
/// The `y` parts of the two Wirtinger partials cancel, leaving the `x`
/// difference.
fn nested(f: &FuncExpr, p: Quaternion, k: u32, h: f64) -> Result<Quaternion> {
    if k == 0 {
        return f.eval(p);
    }
    let plus = nested(f, p + h, k - 1, h)?;
    let minus = nested(f, p + (-h), k - 1, h)?;
    Ok((plus - minus).scale_real(1.0 / (2.0 * h)))
}

/// k-th full derivative by nested central differences with step
/// `h₀^(1/k)·max(1, |p|)`.
pub fn kth_derivative_stencil(f: &FuncExpr, p: Quaternion, k: u32, h0: f64) -> Result<KthDerivative> {
    if k == 0 {
        return Ok(KthDerivative {
            order: 0,
            value: f.eval(p)?,
            method: DerivativeMethod::Direct,
            error_estimate: 0.0,
            accuracy_loss: false,
        });
    }
    if k > MAX_STENCIL_ORDER {
        return Err(Error::InvalidArgument(format!(
            "stencil path supports orders up to {MAX_STENCIL_ORDER}, got {k}"
        )));
    }
    if !(h0 > 0.0 && h0 < 1.0) {
        return Err(Error::InvalidArgument(format!("base step must lie in (0, 1), got {h0}")));
    }
    let h = h0.powf(1.0 / k as f64) * p.norm().max(1.0);
    let value = nested(f, p, k, h)?;
    // Second-order scheme: D(h) − D(h/2) ≈ (3/4)·error(h).
    let half = nested(f, p, k, h / 2.0)?;
    let error_estimate = (value - half).norm() * 4.0 / 3.0;
    Ok(KthDerivative {
        order: k,
        value,
        method: DerivativeMethod::Stencil,
        error_estimate,
        accuracy_loss: error_estimate > ACCURACY_LOSS_THRESHOLD * value.norm().max(1.0),
    })
}

/// k-th derivative at the origin from the extracted Maclaurin coefficient.
pub fn kth_derivative_series(f: &FuncExpr, k: u32, rho: f64, samples: usize) -> Result<KthDerivative> {
    let ext = series::maclaurin_extract(f, k as usize, rho, samples)?;
    let fact: f64 = (1..=k).map(f64::from).product();
    let rk = ext.series.coeffs[k as usize];
    let value = Quaternion::real(rk * fact);
    let error_estimate = ext.noise_floor[k as usize] * fact;
    Ok(KthDerivative {
        order: k,
        value,
        method: if k == 0 { DerivativeMethod::Direct } else { DerivativeMethod::Series },
        error_estimate,
        accuracy_loss: error_estimate > ACCURACY_LOSS_THRESHOLD * value.norm().max(1.0),
    })
}

/// k-th full derivative. At `p = 0` the series path is used (falling back to
/// the stencil when the coefficients are not real); elsewhere nested stencils.
pub fn kth_derivative(f: &FuncExpr, p: Quaternion, k: u32) -> Result<KthDerivative> {
    kth_derivative_with_step(f, p, k, DEFAULT_STEP)
}

/// As [`kth_derivative`] with base step `h0` for the stencil path.
pub fn kth_derivative_with_step(f: &FuncExpr, p: Quaternion, k: u32, h0: f64) -> Result<KthDerivative> {
    if k == 0 {
        return kth_derivative_stencil(f, p, 0, h0);
    }
    if p == Quaternion::ZERO {
        let samples = series::default_samples(k as usize);
        match kth_derivative_series(f, k, series::DEFAULT_RHO, samples) {
            Err(Error::NonRealCoefficient { .. }) => {}
            other => return other,
        }
    }
    kth_derivative_stencil(f, p, k, h0)
}
