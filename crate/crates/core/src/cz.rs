//! Complex numbers modulo the integers.
//!
//! ℂ/ℤ is the value group of the regulator evaluations, of reduced eta
//! invariants and of the Deligne pairing on the circle. Only the real axis is
//! affected by the quotient, so a value is stored as its unique representative
//! with real part in `[0, 1)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A class in ℂ/ℤ, stored by its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CZValue {
    rep: Complex64,
}

impl CZValue {
    pub const ZERO: CZValue = CZValue { rep: Complex64 { re: 0.0, im: 0.0 } };

    /// Reduces `z` to its canonical representative.
    pub fn reduce(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFiniteValue(format!("{z}")));
        }
        Ok(Self { rep: Complex64::new(wrap_unit(z.re), z.im) })
    }

    /// Reduction of a real number.
    pub fn from_real(x: f64) -> Result<Self> {
        Self::reduce(Complex64::new(x, 0.0))
    }

    pub fn rep(&self) -> Complex64 {
        self.rep
    }

    /// Representative with real part in `(-1/2, 1/2]`, handy for printing
    /// values close to zero.
    pub fn centered(&self) -> Complex64 {
        let re = if self.rep.re > 0.5 { self.rep.re - 1.0 } else { self.rep.re };
        Complex64::new(re, self.rep.im)
    }

    /// Distance to `other` in ℂ/ℤ.
    pub fn dist(&self, other: &CZValue) -> f64 {
        let diff = self.rep - other.rep;
        [-1.0, 0.0, 1.0]
            .iter()
            .map(|n| (diff - Complex64::new(*n, 0.0)).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `exp(2πi z)`, which is well defined on ℂ/ℤ.
    pub fn exp_2pi_i(&self) -> Complex64 {
        (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * self.rep).exp()
    }

    /// Integer multiple.
    pub fn times(&self, n: i64) -> CZValue {
        CZValue { rep: Complex64::new(wrap_unit(self.rep.re * n as f64), self.rep.im * n as f64) }
    }
}

fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if r >= 1.0 { 0.0 } else { r }
}

impl Default for CZValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for CZValue {
    type Output = CZValue;
    fn add(self, rhs: CZValue) -> CZValue {
        let z = self.rep + rhs.rep;
        CZValue { rep: Complex64::new(wrap_unit(z.re), z.im) }
    }
}

impl Sub for CZValue {
    type Output = CZValue;
    fn sub(self, rhs: CZValue) -> CZValue {
        self + (-rhs)
    }
}

impl Neg for CZValue {
    type Output = CZValue;
    fn neg(self) -> CZValue {
        CZValue { rep: Complex64::new(wrap_unit(-self.rep.re), -self.rep.im) }
    }
}

impl std::iter::Sum for CZValue {
    fn sum<I: Iterator<Item = CZValue>>(iter: I) -> CZValue {
        iter.fold(CZValue::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for CZValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {:+}i]", self.rep.re, self.rep.im)
    }
}

/// `{"re","im"}` wire form of a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexWire {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexWire {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexWire> for Complex64 {
    fn from(w: ComplexWire) -> Self {
        Complex64::new(w.re, w.im)
    }
}

#[derive(Serialize, Deserialize)]
struct CZWire {
    re: f64,
    im: f64,
}

impl Serialize for CZValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CZWire { re: self.rep.re, im: self.rep.im }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CZValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CZWire::deserialize(d)?;
        CZValue::reduce(Complex64::new(w.re, w.im)).map_err(serde::de::Error::custom)
    }
}

/// Absolute and relative tolerances used by comparisons and reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub abs_tol: f64,
    #[serde(default)]
    pub rel_tol: f64,
}

impl TolerancePolicy {
    /// Scenarios whose quantities come from exact quadrature.
    pub const EXACT: TolerancePolicy = TolerancePolicy { abs_tol: 1e-9, rel_tol: 0.0 };
    /// Scenarios limited by finite Fourier truncation.
    pub const TRUNCATED: TolerancePolicy = TolerancePolicy { abs_tol: 1e-5, rel_tol: 0.0 };

    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol.is_finite() && rel_tol.is_finite()) || abs_tol <= 0.0 || rel_tol < 0.0 {
            return Err(Error::BadParams(format!(
                "tolerance needs finite abs_tol > 0 and rel_tol >= 0, got ({abs_tol}, {rel_tol})"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    pub fn abs(abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, 0.0)
    }

    /// Tolerance granted when comparing quantities of magnitude `scale`.
    pub fn allowed(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }

    pub fn close(&self, a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= self.allowed(a.norm().max(b.norm()))
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self::EXACT
    }
}

/// `[z]_{ℂ/ℤ}`.
pub fn reduce(z: Complex64) -> Result<CZValue> {
    CZValue::reduce(z)
}

/// Equality in ℂ/ℤ up to `tol.abs_tol`.
pub fn eq_mod_z(a: &CZValue, b: &CZValue, tol: &TolerancePolicy) -> bool {
    a.dist(b) <= tol.abs_tol
}
