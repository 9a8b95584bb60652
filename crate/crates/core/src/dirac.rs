//! Dirac operators on the circle twisted by flat line bundles, their eta and
//! xi invariants, and the evaluation ρ_D on (bundle, form) pairs.
//!
//! For holonomy `v = e^{iθ}` the twisted operator has eigenvalues
//! `λ_n = 2πn + θ`, `n ∈ ℤ`, with `θ ∈ (0, 2π)` when `v ≠ 1` and `θ = 0` when
//! `v = 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cz::CZValue;
use crate::error::{Error, Result};
use crate::forms::{hp_representative, integrate_family, shift, Form, PeriodicFamily, Truncation};
use crate::fourier::TrigPoly;
use crate::scalar::{Scalar, C64};

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleDirac {
    holonomy: C64,
    theta: f64,
}

impl CircleDirac {
    pub fn new(holonomy: C64) -> Result<Self> {
        if !((holonomy.norm() - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::Precondition(format!("holonomy {holonomy} is not of modulus 1")));
        }
        let theta = if (holonomy - C64::new(1.0, 0.0)).norm() <= UNIT_TOL {
            0.0
        } else {
            let a = holonomy.arg();
            if a > 0.0 { a } else { a + 2.0 * PI }
        };
        Ok(Self { holonomy, theta })
    }

    /// Operator with holonomy `e^{iθ}`; `θ` is reduced into `[0, 2π)`.
    pub fn from_theta(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteValue(format!("{theta}")));
        }
        let t = theta.rem_euclid(2.0 * PI);
        let t = if t >= 2.0 * PI { 0.0 } else { t };
        Ok(Self { holonomy: C64::from_polar(1.0, t), theta: t })
    }

    pub fn holonomy(&self) -> C64 {
        self.holonomy
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kernel_dim(&self) -> usize {
        usize::from(self.theta == 0.0)
    }
}

/// Eigenvalues `2πn + θ` for `n = −N..=N`.
pub fn spectrum(d: &CircleDirac, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Precondition("spectrum needs N >= 1".into()));
    }
    let n = n as i64;
    Ok((-n..=n).map(|k| 2.0 * PI * k as f64 + d.theta).collect())
}

/// `(η, ξ)` with `η = 1 − θ/π` (`0` for `v = 1`) and `ξ = [(η + dim ker)/2]`.
pub fn eta_xi_closed(d: &CircleDirac) -> (f64, CZValue) {
    let eta = if d.theta == 0.0 { 0.0 } else { 1.0 - d.theta / PI };
    let xi = CZValue::from_real((eta + d.kernel_dim() as f64) / 2.0).expect("finite");
    (eta, xi)
}

/// B_2, B_4, …, B_30.
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Number of Euler–Maclaurin correction terms.
const EM_TERMS: usize = 12;
/// Terms summed directly before switching to the asymptotic tail.
const EM_HEAD: usize = 20;
pub const ORACLE_REMAINDER_TOL: f64 = 1e-9;

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k+a)^{−s}` for real `s ≠ 1`, `a > 0`, by
/// Euler–Maclaurin summation. Returns the value and the size of the first
/// omitted correction as a remainder estimate.
pub fn hurwitz_zeta(s: f64, a: f64) -> (f64, f64) {
    let head: f64 = (0..EM_HEAD).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = EM_HEAD as f64 + a;
    let mut total = head + x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // term j: B_2j/(2j)! · s(s+1)…(s+2j−2) · x^{−s−2j+1}
    let mut poch = s;
    let mut fact = 2.0;
    let mut remainder = 0.0;
    for j in 1..=EM_TERMS + 1 {
        let term = BERNOULLI[j - 1] / fact * poch * x.powf(-s - 2.0 * j as f64 + 1.0);
        if j <= EM_TERMS {
            total += term;
        } else {
            remainder = term.abs();
        }
        poch *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2.0 * j as f64 + 1.0) * (2.0 * j as f64 + 2.0);
    }
    (total, remainder)
}

/// Spectral eta function `η(s) = Σ sign(λ)|λ|^{−s}`, zero mode excluded.
fn eta_function(theta: f64, s: f64) -> (f64, f64) {
    let a = theta / (2.0 * PI);
    // positive eigenvalues 2π(k + a), negative ones −2π(k + 1 − a); for θ = 0
    // the zero mode is dropped and both sides start at 2π
    let (pos, neg) = if theta == 0.0 { (1.0, 1.0) } else { (a, 1.0 - a) };
    let (zp, rp) = hurwitz_zeta(s, pos);
    let (zn, rn) = hurwitz_zeta(s, neg);
    let scale = (2.0 * PI).powf(-s);
    (scale * (zp - zn), scale * (rp + rn))
}

/// Step used for the extrapolation of `η(s)` to `s = 0`.
const ORACLE_STEP: f64 = 1e-3;

/// `η(0)` from the Hurwitz representation of the spectral eta function.
///
/// The Euler–Maclaurin corrections all vanish at `s = 0` itself, so the
/// function is evaluated at `s = ±h, ±2h` and the even part is
/// Richardson-extrapolated to `s = 0`.
pub fn eta_zeta_oracle(d: &CircleDirac) -> Result<f64> {
    let h = ORACLE_STEP;
    let mut worst = 0.0f64;
    let mut even = |s: f64| {
        let (p, rp) = eta_function(d.theta, s);
        let (m, rm) = eta_function(d.theta, -s);
        worst = worst.max(rp).max(rm);
        0.5 * (p + m)
    };
    let m1 = even(h);
    let m2 = even(2.0 * h);
    if worst > ORACLE_REMAINDER_TOL {
        return Err(Error::OracleNotConverged(worst));
    }
    Ok((4.0 * m1 - m2) / 3.0)
}

/// Local index form of the circle: the constant 1 in entry `p = 0`.
pub fn ahat_circle<S: Scalar>() -> PeriodicFamily<S> {
    PeriodicFamily::single(Truncation::None, 0, Form::function(TrigPoly::one(1))).expect("untruncated")
}

/// `∫_X Â ∧ ι_{d+1} γ`.
pub fn rho_tilde<S: Scalar>(gamma: &PeriodicFamily<S>, d: i64) -> Result<S> {
    if d % 2 == 0 {
        return Err(Error::Precondition(format!("d = {d} must be odd")));
    }
    hp_representative(gamma)?;
    let ahat = ahat_circle::<S>();
    let g = shift(&gamma.with_truncation(Truncation::None)?, d + 1)?;
    Ok(integrate_family(&ahat.wedge(&g)?))
}

/// A ℤ/2-graded sum of flat line bundles on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedBundle {
    summands: Vec<(CircleDirac, i8)>,
}

impl GradedBundle {
    pub fn new(summands: Vec<(C64, i8)>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::Precondition("graded bundle needs at least one summand".into()));
        }
        let summands = summands
            .into_iter()
            .map(|(v, eps)| {
                if eps != 1 && eps != -1 {
                    return Err(Error::Precondition(format!("grading must be +1 or -1, got {eps}")));
                }
                Ok((CircleDirac::new(v)?, eps))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { summands })
    }

    pub fn line(v: C64) -> Result<Self> {
        Self::new(vec![(v, 1)])
    }

    pub fn summands(&self) -> &[(CircleDirac, i8)] {
        &self.summands
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self { summands: self.summands.iter().chain(&other.summands).cloned().collect() }
    }
}

/// `ρ(V, γ) = Σ ε_i ξ(v_i) + [ρ̃(γ)]` on the circle (d = 1).
pub fn rho_dirac<S: Scalar>(v: &GradedBundle, gamma: &PeriodicFamily<S>) -> Result<CZValue> {
    let spectral: CZValue = v.summands.iter().map(|(d, eps)| eta_xi_closed(d).1.times(*eps as i64)).sum();
    let local = if gamma.is_zero() { CZValue::ZERO } else { CZValue::reduce(rho_tilde(gamma, 1)?.to_complex())? };
    Ok(spectral + local)
}

#[derive(Serialize, Deserialize)]
struct SummandWire {
    v_re: f64,
    v_im: f64,
    eps: i8,
}

#[derive(Serialize, Deserialize)]
struct BundleWire {
    summands: Vec<SummandWire>,
}

impl Serialize for GradedBundle {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        BundleWire {
            summands: self
                .summands
                .iter()
                .map(|(d, eps)| SummandWire { v_re: d.holonomy.re, v_im: d.holonomy.im, eps: *eps })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedBundle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = BundleWire::deserialize(d)?;
        GradedBundle::new(w.summands.into_iter().map(|s| (C64::new(s.v_re, s.v_im), s.eps)).collect())
            .map_err(serde::de::Error::custom)
    }
}
