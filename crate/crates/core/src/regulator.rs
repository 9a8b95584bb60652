//! Regulator forms of product classes `ι(exp f) ∪ ι(u₂) ∪ … ∪ ι(u_d)` and
//! their evaluation σ_d into ℂ/ℤ.

use serde::{Deserialize, Serialize};

use crate::cz::CZValue;
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::fourier::{TrigPoly, UnitFunction};
use crate::scalar::{Scalar, C64};

/// `(1/2πi) d log u = w·dt + dg/(2πi)`.
pub fn reg_unit<S: Scalar>(u: &UnitFunction<S>) -> Form<S> {
    let dim = u.dim();
    let mut out = Form::zero(dim, 1);
    for (axis, w) in u.winding().iter().enumerate() {
        let coeff = TrigPoly::constant(dim, S::from_i64(*w))
            .add(&u.logpart().derive(axis).expect("axis below dim").scale(&S::inv_two_pi_i()))
            .expect("same dimension");
        out = out.add(&Form::basis(coeff, &[axis]).expect("axis below dim")).expect("same degree");
    }
    out
}

/// The class `ι(exp f) ∪ ι(u₂) ∪ … ∪ ι(u_d)` with `d = 1 + units.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductClass<S: Scalar = C64> {
    f: TrigPoly<S>,
    units: Vec<UnitFunction<S>>,
}

impl<S: Scalar> ProductClass<S> {
    pub fn new(f: TrigPoly<S>, units: Vec<UnitFunction<S>>) -> Result<Self> {
        for u in &units {
            if u.dim() != f.dim() {
                return Err(Error::DimMismatch(f.dim(), u.dim()));
            }
        }
        if f.dim() > units.len() {
            return Err(Error::Precondition(format!(
                "a class with d = {} needs dim X <= {}, got {}",
                units.len() + 1,
                units.len(),
                f.dim()
            )));
        }
        Ok(Self { f, units })
    }

    pub fn f(&self) -> &TrigPoly<S> {
        &self.f
    }

    pub fn units(&self) -> &[UnitFunction<S>] {
        &self.units
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// `d`, the K-theory degree of the class.
    pub fn d(&self) -> usize {
        1 + self.units.len()
    }

    /// Same class with `f` replaced.
    pub fn with_f(&self, f: TrigPoly<S>) -> Result<Self> {
        Self::new(f, self.units.clone())
    }

    /// Same class with units `i` and `j` swapped.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut units = self.units.clone();
        units.swap(i, j);
        Self { f: self.f.clone(), units }
    }

    pub fn to_complex(&self) -> ProductClass<C64> {
        ProductClass { f: self.f.to_complex(), units: self.units.iter().map(|u| u.to_complex()).collect() }
    }
}

/// `(1/(2πi)^d) f · d log u₂ ∧ … ∧ d log u_d = (1/2πi) f · reg(u₂) ∧ … ∧ reg(u_d)`.
pub fn reg_product_form<S: Scalar>(x: &ProductClass<S>) -> Form<S> {
    wedge_regulators(&x.f, &x.units)
}

fn wedge_regulators<S: Scalar>(f: &TrigPoly<S>, units: &[UnitFunction<S>]) -> Form<S> {
    let mut w = Form::function(f.scale(&S::inv_two_pi_i()));
    for u in units {
        w = w.wedge(&reg_unit(u)).expect("same dimension");
    }
    w
}

/// `∫_X` of the regulator form, before reduction mod ℤ.
pub fn sigma_integral<S: Scalar>(x: &ProductClass<S>) -> Result<S> {
    if x.dim() + 1 != x.d() {
        return Err(Error::DimensionMismatchForEvaluation { dim: x.dim(), d: x.d() });
    }
    Ok(reg_product_form(x).integrate())
}

/// σ_d(x) ∈ ℂ/ℤ for `dim X = d − 1`.
pub fn sigma_eval<S: Scalar>(x: &ProductClass<S>) -> Result<CZValue> {
    CZValue::reduce(sigma_integral(x)?.to_complex())
}

/// The would-be curvature of a class with one unit more than `dim X` allows;
/// it is a form of degree `dim + 1` and must vanish identically.
pub fn sigma_vanishing_extra_factor<S: Scalar>(f: &TrigPoly<S>, units: &[UnitFunction<S>]) -> Result<Form<S>> {
    if units.len() != f.dim() + 1 {
        return Err(Error::Precondition(format!(
            "expected {} unit factors on a torus of dimension {}, got {}",
            f.dim() + 1,
            f.dim(),
            units.len()
        )));
    }
    for u in units {
        if u.dim() != f.dim() {
            return Err(Error::DimMismatch(f.dim(), u.dim()));
        }
    }
    let w = wedge_regulators(f, units);
    if !w.is_zero() {
        return Err(Error::VanishingViolated);
    }
    Ok(w)
}

/// Flat evaluation on the circle with its non-bounding spin structure,
/// `[z] ↦ [−z]`, composed with an explicit orientation sign.
pub fn r_dirac_compose(sigma: CZValue, orientation_sign: i8) -> CZValue {
    let z = sigma.rep() * -(orientation_sign.signum() as f64);
    CZValue::reduce(z).expect("finite input stays finite")
}

#[derive(Serialize, Deserialize)]
struct ProductWire {
    f: TrigPoly<C64>,
    units: Vec<UnitFunction<C64>>,
}

impl Serialize for ProductClass<C64> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        ProductWire { f: self.f.clone(), units: self.units.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductClass<C64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ProductWire::deserialize(d)?;
        ProductClass::new(w.f, w.units).map_err(serde::de::Error::custom)
    }
}
