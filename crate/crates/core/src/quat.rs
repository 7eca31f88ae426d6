//! Complex and quaternion arithmetic.
//!
//! A [`Quaternion`] is stored in component form `x + y·i + z·j + u·k`. The
//! Cayley-Dickson doubling form `p = a + b·j` with `a = x + y·i`, `b = z + u·i`
//! is a view obtained through [`Quaternion::to_cd`] / [`Quaternion::from_cd`];
//! multiplication is carried out in that form.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Default guard for [`Quaternion::inverse`]: squared norms at or below this
/// value are treated as zero.
pub const DEFAULT_INVERSE_EPS: f64 = 1e-300;

/// A complex number `re + im·i`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    #[inline]
    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    /// Checked constructor: rejects NaN and infinite components.
    pub fn try_new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Complex { re, im })
        } else {
            Err(Error::NonFinite)
        }
    }

    #[inline]
    pub const fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    #[inline]
    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn scale(self, r: f64) -> Self {
        Complex::new(self.re * r, self.im * r)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// `e^{iθ}`.
    pub fn cis(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Complex::new(c, s)
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(m * c, m * s)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.re.sin_cos();
        Complex::new(s * self.im.cosh(), c * self.im.sinh())
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.re.sin_cos();
        Complex::new(c * self.im.cosh(), -s * self.im.sinh())
    }

    pub fn powu(self, n: u32) -> Self {
        let mut acc = Complex::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

impl Add for Complex {
    type Output = Complex;
    #[inline]
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    #[inline]
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    #[inline]
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for Complex {
    type Output = Complex;
    #[inline]
    fn mul(self, rhs: f64) -> Complex {
        self.scale(rhs)
    }
}

impl Div<f64> for Complex {
    type Output = Complex;
    #[inline]
    fn div(self, rhs: f64) -> Complex {
        Complex::new(self.re / rhs, self.im / rhs)
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        let d = rhs.norm_sqr();
        let n = self * rhs.conj();
        Complex::new(n.re / d, n.im / d)
    }
}

impl Neg for Complex {
    type Output = Complex;
    #[inline]
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

/// Shortest round-trip text, switching to exponent form for very small or
/// very large magnitudes.
struct Real(f64);

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0.abs();
        if a != 0.0 && !(1e-5..1e16).contains(&a) {
            write!(f, "{:e}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", Real(self.re), Real(-self.im))
        } else {
            write!(f, "{} + {}i", Real(self.re), Real(self.im))
        }
    }
}

/// Cayley-Dickson view `a + b·j` of a quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CayleyDickson {
    pub a: Complex,
    pub b: Complex,
}

impl CayleyDickson {
    pub const fn new(a: Complex, b: Complex) -> Self {
        CayleyDickson { a, b }
    }
}

/// A quaternion `x + y·i + z·j + u·k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub u: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64, u: f64) -> Self {
        Quaternion { x, y, z, u }
    }

    /// Checked constructor: rejects NaN and infinite components.
    pub fn try_new(x: f64, y: f64, z: f64, u: f64) -> Result<Self> {
        let q = Quaternion { x, y, z, u };
        if q.is_finite() {
            Ok(q)
        } else {
            Err(Error::NonFinite)
        }
    }

    #[inline]
    pub const fn real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.u]
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.u.is_finite()
    }

    /// `a = x + y·i`, `b = z + u·i`.
    #[inline]
    pub fn to_cd(self) -> CayleyDickson {
        CayleyDickson {
            a: Complex::new(self.x, self.y),
            b: Complex::new(self.z, self.u),
        }
    }

    #[inline]
    pub fn from_cd(c: CayleyDickson) -> Self {
        Quaternion::new(c.a.re, c.a.im, c.b.re, c.b.im)
    }

    /// Quaternion conjugate `ā − b·j`.
    #[inline]
    pub fn conj(self) -> Self {
        Quaternion::new(self.x, -self.y, -self.z, -self.u)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z + self.u * self.u
    }

    /// Euclidean norm, computed with scaling so it neither overflows nor
    /// underflows for finite components.
    pub fn norm(self) -> f64 {
        let m = self.x.abs().max(self.y.abs()).max(self.z.abs()).max(self.u.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s = Quaternion::new(self.x / m, self.y / m, self.z / m, self.u / m);
        m * s.norm_sqr().sqrt()
    }

    /// Magnitude of the imaginary part, `√(y² + z² + u²)`.
    pub fn imag_norm(self) -> f64 {
        Quaternion::new(0.0, self.y, self.z, self.u).norm()
    }

    /// The purely imaginary part `y·i + z·j + u·k`.
    pub fn imag(self) -> Self {
        Quaternion::new(0.0, self.y, self.z, self.u)
    }

    #[inline]
    pub fn scale_real(self, r: f64) -> Self {
        Quaternion::new(self.x * r, self.y * r, self.z * r, self.u * r)
    }

    /// Multiplicative inverse with the default zero guard.
    pub fn inverse(self) -> Result<Self> {
        self.inverse_with_eps(DEFAULT_INVERSE_EPS)
    }

    /// `conj(p) / |p|²`, failing with [`Error::ZeroDivisor`] when `|p|²` is at or
    /// below `eps`.
    pub fn inverse_with_eps(self, eps: f64) -> Result<Self> {
        let m = self.x.abs().max(self.y.abs()).max(self.z.abs()).max(self.u.abs());
        if m == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        // Scale first so |p|² does not underflow for tiny but representable p.
        let s = self.scale_real(1.0 / m);
        let n2 = s.norm_sqr();
        if n2 * m * m <= eps {
            return Err(Error::ZeroDivisor);
        }
        let inv = s.conj().scale_real(1.0 / (n2 * m));
        if !inv.is_finite() {
            return Err(Error::ZeroDivisor);
        }
        Ok(inv)
    }

    /// Integer power by repeated squaring. `p^0 = 1`.
    pub fn powu(self, n: u32) -> Self {
        let mut acc = Quaternion::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc *= base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Quaternion) -> f64 {
        let d = self - other;
        d.x.abs().max(d.y.abs()).max(d.z.abs()).max(d.u.abs())
    }
}

/// Doubling-form product
/// `(a₁ + b₁j)(a₂ + b₂j) = (a₁a₂ − b₁·b̄₂) + (a₁b₂ + ā₂·b₁)·j`.
#[inline]
pub fn cd_mul(p: CayleyDickson, q: CayleyDickson) -> CayleyDickson {
    CayleyDickson {
        a: p.a * q.a - p.b * q.b.conj(),
        b: p.a * q.b + q.a.conj() * p.b,
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        Quaternion::from_cd(cd_mul(self.to_cd(), rhs.to_cd()))
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, rhs: Quaternion) {
        *self = *self * rhs;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale_real(rhs)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        rhs.scale_real(self)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z, self.u + rhs.u)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Add<f64> for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: f64) -> Quaternion {
        Quaternion::new(self.x + rhs, self.y, self.z, self.u)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z, self.u - rhs.u)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.x, -self.y, -self.z, -self.u)
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Quaternion::real(x)
    }
}

impl From<CayleyDickson> for Quaternion {
    fn from(c: CayleyDickson) -> Self {
        Quaternion::from_cd(c)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Real(self.x))?;
        for (v, unit) in [(self.y, 'i'), (self.z, 'j'), (self.u, 'k')] {
            if v.is_sign_negative() {
                write!(f, " - {}{}", Real(-v), unit)?;
            } else {
                write!(f, " + {}{}", Real(v), unit)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_products() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::J, -Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        for e in [Quaternion::I, Quaternion::J, Quaternion::K] {
            assert_eq!(e * e, Quaternion::real(-1.0));
        }
    }

    #[test]
    fn i_plus_j_squared() {
        let q = Quaternion::I + Quaternion::J;
        assert_eq!(q * q, Quaternion::real(-2.0));
    }

    #[test]
    fn conj_examples() {
        assert_eq!(Quaternion::ONE.conj(), Quaternion::ONE);
        let q = Quaternion::new(0.0, 1.0, 1.0, 1.0);
        assert_eq!(q.conj(), Quaternion::new(0.0, -1.0, -1.0, -1.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Quaternion::real(2.0).inverse().unwrap(), Quaternion::real(0.5));
        assert_eq!(Quaternion::J.inverse().unwrap(), -Quaternion::J);
        let p = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        let inv = p.inverse().unwrap();
        assert!(inv.max_abs_diff(Quaternion::new(0.25, -0.25, -0.25, -0.25)) < 1e-16);
        assert!((p * inv).max_abs_diff(Quaternion::ONE) < 1e-15);
        assert!((inv * p).max_abs_diff(Quaternion::ONE) < 1e-15);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivisor));
        let tiny = Quaternion::new(1e-160, 0.0, 0.0, 0.0);
        assert_eq!(tiny.inverse(), Err(Error::ZeroDivisor));
        assert_eq!(tiny.inverse_with_eps(0.0).unwrap(), Quaternion::real(1e160));
        let small = Quaternion::new(1e-140, 0.0, 0.0, 0.0);
        assert!(small.inverse().is_ok());
        assert!(Quaternion::real(1e-3).inverse_with_eps(1e-5).is_err());
    }

    #[test]
    fn cd_view() {
        let p = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let c = p.to_cd();
        assert_eq!(c.a, Complex::new(1.0, 2.0));
        assert_eq!(c.b, Complex::new(3.0, 4.0));
        assert_eq!(
            Quaternion::from_cd(CayleyDickson::new(Complex::ZERO, Complex::ZERO)),
            Quaternion::ZERO
        );
    }

    #[test]
    fn scale_and_add() {
        let q = Quaternion::I + Quaternion::J;
        assert_eq!(q.scale_real(2.0), Quaternion::new(0.0, 2.0, 2.0, 0.0));
        let p = Quaternion::new(1.5, -2.0, 0.25, 7.0);
        assert_eq!(p + Quaternion::ZERO, p);
    }

    #[test]
    fn checked_constructors() {
        assert!(Quaternion::try_new(1.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(Quaternion::try_new(1.0, 0.0, f64::INFINITY, 0.0).is_err());
        assert!(Complex::try_new(f64::NEG_INFINITY, 0.0).is_err());
        assert!(Complex::try_new(1.0, 2.0).is_ok());
    }

    #[test]
    fn norm_does_not_overflow() {
        let p = Quaternion::new(1e200, 1e200, 0.0, 0.0);
        assert!((p.norm() / (1e200 * 2f64.sqrt()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn powu_small() {
        let p = Quaternion::new(0.5, -1.0, 2.0, 0.25);
        assert_eq!(p.powu(0), Quaternion::ONE);
        assert_eq!(p.powu(1), p);
        assert!(p.powu(3).max_abs_diff(p * p * p) < 1e-13);
    }
}
