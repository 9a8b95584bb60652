//! Coefficient rings for trigonometric polynomials and forms.
//!
//! Numerical work runs over `Complex64`. Structural identities (d² = 0,
//! Leibniz, b∘b = 0, the chain-map property of π) are checked over
//! [`RationalTau`], the ring of Laurent polynomials in τ = 2πi with
//! Gaussian-rational coefficients, where they hold with zero error.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;

pub type C64 = Complex64;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn rational(num: i64, den: i64) -> Self;
    /// The constant 2πi.
    fn two_pi_i() -> Self;
    /// The constant 1/(2πi).
    fn inv_two_pi_i() -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> C64;
    /// A total order, used only to canonicalize representations.
    fn total_cmp(&self, other: &Self) -> Ordering;
}

impl Scalar for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn rational(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }
    fn two_pi_i() -> Self {
        C64::new(0.0, 2.0 * std::f64::consts::PI)
    }
    fn inv_two_pi_i() -> Self {
        C64::new(0.0, -1.0 / (2.0 * std::f64::consts::PI))
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_complex(&self) -> C64 {
        *self
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then(self.im.total_cmp(&other.im))
    }
}

type Q = Ratio<i128>;

/// Gaussian rational `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussRational {
    pub re: Q,
    pub im: Q,
}

impl GaussRational {
    fn is_zero(&self) -> bool {
        self.re == Q::from_integer(0) && self.im == Q::from_integer(0)
    }
    fn add(&self, o: &Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn neg(&self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
    fn to_complex(&self) -> C64 {
        C64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

fn q_to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Laurent polynomial in τ = 2πi with Gaussian-rational coefficients.
///
/// Every structure constant that appears in the exterior calculus of
/// trigonometric polynomials (derivatives, factorials, the 1/(2πi)
/// normalizations) lives in this ring, so identities between such
/// expressions can be decided exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RationalTau {
    terms: BTreeMap<i32, GaussRational>,
}

impl RationalTau {
    /// `(re + i·im) · τ^power` with integer parts.
    pub fn monomial(re: i64, im: i64, power: i32) -> Self {
        let g = GaussRational { re: Q::from_integer(re as i128), im: Q::from_integer(im as i128) };
        Self::from_term(power, g)
    }

    /// Gaussian integer `re + i·im`.
    pub fn gaussian(re: i64, im: i64) -> Self {
        Self::monomial(re, im, 0)
    }

    fn from_term(power: i32, g: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(power, g);
        }
        Self { terms }
    }

    /// Coefficient of τ^power as `(re, im)` fractions `(num, den)`.
    pub fn coefficient(&self, power: i32) -> Option<((i128, i128), (i128, i128))> {
        self.terms.get(&power).map(|g| {
            ((*g.re.numer(), *g.re.denom()), (*g.im.numer(), *g.im.denom()))
        })
    }

    pub fn powers(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }
}

impl Add for RationalTau {
    type Output = RationalTau;
    fn add(mut self, rhs: RationalTau) -> RationalTau {
        for (p, g) in rhs.terms {
            let sum = match self.terms.get(&p) {
                Some(existing) => existing.add(&g),
                None => g,
            };
            if sum.is_zero() {
                self.terms.remove(&p);
            } else {
                self.terms.insert(p, sum);
            }
        }
        self
    }
}

impl Neg for RationalTau {
    type Output = RationalTau;
    fn neg(self) -> RationalTau {
        RationalTau { terms: self.terms.into_iter().map(|(p, g)| (p, g.neg())).collect() }
    }
}

impl Sub for RationalTau {
    type Output = RationalTau;
    fn sub(self, rhs: RationalTau) -> RationalTau {
        self + (-rhs)
    }
}

impl Mul for RationalTau {
    type Output = RationalTau;
    fn mul(self, rhs: RationalTau) -> RationalTau {
        let mut out = RationalTau::default();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out = out + RationalTau::from_term(p + q, a.mul(b));
            }
        }
        out
    }
}

impl Scalar for RationalTau {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::monomial(1, 0, 0)
    }
    fn from_i64(n: i64) -> Self {
        Self::monomial(n, 0, 0)
    }
    fn rational(num: i64, den: i64) -> Self {
        Self::from_term(
            0,
            GaussRational { re: Q::new(num as i128, den as i128), im: Q::from_integer(0) },
        )
    }
    fn two_pi_i() -> Self {
        Self::monomial(1, 0, 1)
    }
    fn inv_two_pi_i() -> Self {
        Self::monomial(1, 0, -1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn to_complex(&self) -> C64 {
        let tau = C64::new(0.0, 2.0 * std::f64::consts::PI);
        self.terms.iter().map(|(p, g)| g.to_complex() * tau.powi(*p)).sum()
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}
