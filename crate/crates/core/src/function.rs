//! Quaternionic functions as expression trees, evaluated pointwise.
//!
//! Transcendental heads use the scalar-extension rule: write the argument as
//! `q = x + V·r` with `V = √(y² + z² + u²)` and `r` a unit pure quaternion,
//! evaluate the complex function at `x + iV` and replace `i` by `r`. At `V = 0`
//! the real-axis value is returned.

use std::fmt;
use std::ops;

use crate::error::{Error, Result};
use crate::quat::{CayleyDickson, Complex, Quaternion};

/// Expression tree for a quaternionic function of the variable `p`.
#[derive(Debug, Clone, PartialEq)]
pub enum FuncExpr {
    /// The variable `p`.
    Var,
    /// A finite real constant.
    Real(f64),
    /// A quaternion constant. Non-real values break H-holomorphy; they exist so
    /// the failure mode can be exercised.
    Quat(Quaternion),
    Neg(Box<FuncExpr>),
    Add(Box<FuncExpr>, Box<FuncExpr>),
    Sub(Box<FuncExpr>, Box<FuncExpr>),
    Mul(Box<FuncExpr>, Box<FuncExpr>),
    /// Right division `f · g⁻¹`.
    Div(Box<FuncExpr>, Box<FuncExpr>),
    Pow(Box<FuncExpr>, u32),
    Exp(Box<FuncExpr>),
    Sin(Box<FuncExpr>),
    Cos(Box<FuncExpr>),
}

/// Transcendental heads with closed-form doubling components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Head {
    Exp,
    Sin,
    Cos,
}

impl Head {
    pub fn name(self) -> &'static str {
        match self {
            Head::Exp => "exp",
            Head::Sin => "sin",
            Head::Cos => "cos",
        }
    }

    fn complex(self, w: Complex) -> Complex {
        match self {
            Head::Exp => w.exp(),
            Head::Sin => w.sin(),
            Head::Cos => w.cos(),
        }
    }

    fn real(self, x: f64) -> f64 {
        match self {
            Head::Exp => x.exp(),
            Head::Sin => x.sin(),
            Head::Cos => x.cos(),
        }
    }

    /// Applies the head to a quaternion via the scalar-extension rule.
    pub fn apply(self, q: Quaternion) -> Quaternion {
        let v = q.imag_norm();
        if v == 0.0 {
            return Quaternion::real(self.real(q.x));
        }
        let w = self.complex(Complex::new(q.x, v));
        Quaternion::real(w.re) + q.imag().scale_real(w.im / v)
    }
}

impl FuncExpr {
    pub fn var() -> Self {
        FuncExpr::Var
    }

    pub fn real(r: f64) -> Self {
        FuncExpr::Real(r)
    }

    pub fn quat(q: Quaternion) -> Self {
        FuncExpr::Quat(q)
    }

    pub fn exp(arg: FuncExpr) -> Self {
        FuncExpr::Exp(Box::new(arg))
    }

    pub fn sin(arg: FuncExpr) -> Self {
        FuncExpr::Sin(Box::new(arg))
    }

    pub fn cos(arg: FuncExpr) -> Self {
        FuncExpr::Cos(Box::new(arg))
    }

    pub fn pow(base: FuncExpr, n: u32) -> Self {
        FuncExpr::Pow(Box::new(base), n)
    }

    /// Real-coefficient polynomial `Σ c_l p^l`.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let mut terms = coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(l, &c)| {
            let power = match l {
                0 => return FuncExpr::Real(c),
                1 => FuncExpr::Var,
                _ => FuncExpr::pow(FuncExpr::Var, l as u32),
            };
            if c == 1.0 {
                power
            } else {
                FuncExpr::Real(c) * power
            }
        });
        let first = terms.next().unwrap_or(FuncExpr::Real(0.0));
        terms.fold(first, |acc, t| acc + t)
    }

    /// `exp`, `sin` or `cos` applied directly to `p`.
    pub fn catalog_head(&self) -> Option<Head> {
        match self {
            FuncExpr::Exp(a) if **a == FuncExpr::Var => Some(Head::Exp),
            FuncExpr::Sin(a) if **a == FuncExpr::Var => Some(Head::Sin),
            FuncExpr::Cos(a) if **a == FuncExpr::Var => Some(Head::Cos),
            _ => None,
        }
    }

    /// True when the tree contains a quaternion constant with a nonzero
    /// imaginary part.
    pub fn has_non_real_constant(&self) -> bool {
        match self {
            FuncExpr::Quat(q) => q.imag_norm() != 0.0,
            FuncExpr::Var | FuncExpr::Real(_) => false,
            FuncExpr::Neg(a) | FuncExpr::Pow(a, _) | FuncExpr::Exp(a) | FuncExpr::Sin(a) | FuncExpr::Cos(a) => {
                a.has_non_real_constant()
            }
            FuncExpr::Add(a, b) | FuncExpr::Sub(a, b) | FuncExpr::Mul(a, b) | FuncExpr::Div(a, b) => {
                a.has_non_real_constant() || b.has_non_real_constant()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FuncExpr::Var | FuncExpr::Real(_) | FuncExpr::Quat(_) => 1,
            FuncExpr::Neg(a) | FuncExpr::Pow(a, _) | FuncExpr::Exp(a) | FuncExpr::Sin(a) | FuncExpr::Cos(a) => {
                1 + a.depth()
            }
            FuncExpr::Add(a, b) | FuncExpr::Sub(a, b) | FuncExpr::Mul(a, b) | FuncExpr::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Evaluates the function at `p`.
    pub fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        let v = match self {
            FuncExpr::Var => p,
            FuncExpr::Real(r) => Quaternion::real(*r),
            FuncExpr::Quat(q) => *q,
            FuncExpr::Neg(a) => -a.eval(p)?,
            FuncExpr::Add(a, b) => a.eval(p)? + b.eval(p)?,
            FuncExpr::Sub(a, b) => a.eval(p)? - b.eval(p)?,
            FuncExpr::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            FuncExpr::Div(a, b) => {
                let num = a.eval(p)?;
                let den = b.eval(p)?;
                num * den.inverse()?
            }
            FuncExpr::Pow(a, n) => a.eval(p)?.powu(*n),
            FuncExpr::Exp(a) => Head::Exp.apply(a.eval(p)?),
            FuncExpr::Sin(a) => Head::Sin.apply(a.eval(p)?),
            FuncExpr::Cos(a) => Head::Cos.apply(a.eval(p)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow)
        }
    }

    /// Doubling-form components `(Φ₁, Φ₂)` at `p`.
    ///
    /// `exp(p)`, `sin(p)` and `cos(p)` use their closed forms (see
    /// [`closed_form`]); every other tree is evaluated and split.
    pub fn phi_components(&self, p: Quaternion) -> Result<ComplexPair> {
        let pair = match self.catalog_head() {
            Some(head) => closed_form(head, p),
            None => ComplexPair::from_quaternion(self.eval(p)?),
        };
        if pair.phi1.is_finite() && pair.phi2.is_finite() {
            Ok(pair)
        } else {
            Err(Error::Overflow)
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for FuncExpr {
            type Output = FuncExpr;
            fn $method(self, rhs: FuncExpr) -> FuncExpr {
                FuncExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl ops::Neg for FuncExpr {
    type Output = FuncExpr;
    fn neg(self) -> FuncExpr {
        FuncExpr::Neg(Box::new(self))
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format(self))
    }
}

/// The pair `(Φ₁, Φ₂)` of a function value `Φ₁ + Φ₂·j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPair {
    pub phi1: Complex,
    pub phi2: Complex,
}

impl ComplexPair {
    pub const fn new(phi1: Complex, phi2: Complex) -> Self {
        ComplexPair { phi1, phi2 }
    }

    pub fn from_quaternion(q: Quaternion) -> Self {
        let c = q.to_cd();
        ComplexPair { phi1: c.a, phi2: c.b }
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::from_cd(CayleyDickson::new(self.phi1, self.phi2))
    }
}

/// `(Re(f·g), Im(f·g))` with `Re = f₁g₁ − f₂ḡ₂`, `Im = f₂ḡ₁ + f₁g₂`.
pub fn product_cd(f: ComplexPair, g: ComplexPair) -> ComplexPair {
    ComplexPair {
        phi1: f.phi1 * g.phi1 - f.phi2 * g.phi2.conj(),
        phi2: f.phi2 * g.phi1.conj() + f.phi1 * g.phi2,
    }
}

/// `|f(p)·g(p) − g(p)·f(p)|`.
pub fn commutator_residual(f: &FuncExpr, g: &FuncExpr, p: Quaternion) -> Result<f64> {
    let fv = f.eval(p)?;
    let gv = g.eval(p)?;
    Ok((fv * gv - gv * fv).norm())
}

/// Decomposition `p = x + V·r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarDecomp {
    pub x: f64,
    pub v: f64,
    /// Unit pure quaternion; `None` when `V = 0`.
    pub r: Option<Quaternion>,
}

impl PolarDecomp {
    pub fn reconstruct(&self) -> Quaternion {
        match self.r {
            Some(r) => Quaternion::real(self.x) + r.scale_real(self.v),
            None => Quaternion::real(self.x),
        }
    }
}

pub fn polar(p: Quaternion) -> PolarDecomp {
    let v = p.imag_norm();
    let r = (v > 0.0).then(|| p.imag().scale_real(1.0 / v));
    PolarDecomp { x: p.x, v, r }
}

const SERIES_CUTOFF: f64 = 1e-4;

/// `sin V / V`, tending to 1 as `V → 0`.
pub fn sin_over(v: f64) -> f64 {
    if v.abs() < SERIES_CUTOFF {
        let v2 = v * v;
        1.0 - v2 / 6.0 + v2 * v2 / 120.0 - v2 * v2 * v2 / 5040.0
    } else {
        v.sin() / v
    }
}

/// `(e^{−V} − e^{V}) / V`, tending to −2 as `V → 0`.
pub fn exp_diff_over(v: f64) -> f64 {
    if v.abs() < SERIES_CUTOFF {
        let v2 = v * v;
        -2.0 * (1.0 + v2 / 6.0 + v2 * v2 / 120.0 + v2 * v2 * v2 / 5040.0)
    } else {
        ((-v).exp() - v.exp()) / v
    }
}

/// Quantities shared by the closed forms, named after the doubling variables.
struct DoublingVars {
    /// `a − ā`.
    a_minus_abar: Complex,
    b: Complex,
    /// `(a + ā)/2 = x`.
    half_sum: f64,
    v: f64,
}

impl DoublingVars {
    fn at(p: Quaternion) -> Self {
        let c = p.to_cd();
        DoublingVars {
            a_minus_abar: c.a - c.a.conj(),
            b: c.b,
            half_sum: ((c.a + c.a.conj()).re) / 2.0,
            v: p.imag_norm(),
        }
    }
}

/// Closed-form `(Φ₁, Φ₂)` of `exp(p)`, `sin(p)` or `cos(p)`.
pub fn closed_form(head: Head, p: Quaternion) -> ComplexPair {
    let d = DoublingVars::at(p);
    match head {
        Head::Exp => {
            let beta = d.half_sum.exp() / 2.0;
            let s = sin_over(d.v);
            ComplexPair {
                phi1: Complex::real(2.0 * beta * d.v.cos()) + d.a_minus_abar * (beta * s),
                phi2: d.b * (2.0 * beta * s),
            }
        }
        Head::Cos => {
            let cosh2 = (-d.v).exp() + d.v.exp();
            let dd = exp_diff_over(d.v);
            let (sx, cx) = d.half_sum.sin_cos();
            ComplexPair {
                phi1: Complex::real(cosh2 * cx / 2.0) + d.a_minus_abar * (dd * sx / 4.0),
                phi2: d.b * (dd * sx / 2.0),
            }
        }
        Head::Sin => {
            let cosh2 = (-d.v).exp() + d.v.exp();
            let dd = exp_diff_over(d.v);
            let (sx, cx) = d.half_sum.sin_cos();
            ComplexPair {
                phi1: Complex::real(cosh2 * sx / 2.0) - d.a_minus_abar * (dd * cx / 4.0),
                phi2: d.b * (-dd * cx / 2.0),
            }
        }
    }
}

/// Closed-form doubling components of the products `sin p · cos p` and
/// `cos p · sin p`, each written out from the sine and cosine components
/// without quaternion multiplication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinCosProducts {
    pub sin_cos: ComplexPair,
    pub cos_sin: ComplexPair,
    /// The reduced form `(e^{−2V} − e^{2V})/(4V) · b · (sin²x − cos²x)` of the
    /// second component, shared by both orders.
    pub reduced_phi2: Complex,
}

pub fn sin_cos_products(p: Quaternion) -> SinCosProducts {
    let d = DoublingVars::at(p);
    let cosh2 = (-d.v).exp() + d.v.exp();
    let dd = exp_diff_over(d.v);
    let (sx, cx) = d.half_sum.sin_cos();
    let b_bar = d.b.conj();

    // f₁ = Φ₁(sin), g₁ = Φ₁(cos)
    let sin1 = Complex::real(cosh2 * sx / 2.0) - d.a_minus_abar * (dd * cx / 4.0);
    let cos1 = Complex::real(cosh2 * cx / 2.0) + d.a_minus_abar * (dd * sx / 4.0);
    let dcos_b = d.b * (dd * cx / 2.0); // −Φ₂(sin)
    let dsin_b = d.b * (dd * sx / 2.0); // Φ₂(cos)

    let sin_cos = ComplexPair {
        phi1: sin1 * cos1 + dcos_b * b_bar * (dd * sx / 2.0),
        phi2: -(dcos_b * cos1.conj()) + sin1 * dsin_b,
    };
    let cos_sin = ComplexPair {
        phi1: cos1 * sin1 + dsin_b * b_bar * (dd * cx / 2.0),
        phi2: dsin_b * sin1.conj() - cos1 * dcos_b,
    };
    let reduced_phi2 = d.b * (exp_diff_over(2.0 * d.v) / 2.0 * (sx * sx - cx * cx));
    SinCosProducts { sin_cos, cos_sin, reduced_phi2 }
}
