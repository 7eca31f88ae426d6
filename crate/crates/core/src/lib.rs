//! Holomorphic functions of a quaternionic variable.
//!
//! Quaternions are stored by components `x + y i + z j + u k` and viewed as
//! Cayley–Dickson pairs `a + b j` with `a = x + y i`, `b = z + u i`. A
//! function `f(p)` splits as `Φ₁(a, b) + Φ₂(a, b) j`, and holomorphy is
//! tested through the Wirtinger partials of `Φ₁` and `Φ₂`.

pub mod error;
pub mod function;
pub mod parser;
pub mod quat;
pub mod series;
pub mod wirtinger;

pub use error::{Error, Result};
pub use function::{ComplexPair, FuncExpr, Head};
pub use parser::{format, parse, ParseError};
pub use quat::{CayleyDickson, Complex, Quaternion};
pub use series::{PowerSeries, Radius};
pub use wirtinger::{HolomorphyReport, KthDerivative, PartialsTable};
