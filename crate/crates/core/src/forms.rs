//! Differential forms on T^k with trigonometric-polynomial coefficients, and
//! the p-indexed families that model the truncated and periodic de Rham
//! complexes.
//!
//! A basis form `dt_{a_1} ∧ … ∧ dt_{a_r}` with `a_1 < … < a_r` is stored as the
//! bitmask of its axes. Axes are 0-based.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{check_dim, Mode, TrigPoly};
use crate::scalar::{Scalar, C64};

/// Sign of moving `dt_B` past `dt_A` into canonical order: `(-1)^{#{(a,b): a∈A, b∈B, a>b}}`.
fn merge_sign(a: u8, b: u8) -> i64 {
    let mut inversions = 0;
    for i in 0..8 {
        if a & (1 << i) != 0 {
            inversions += (b & ((1u8 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 { 1 } else { -1 }
}

pub fn axes_of(mask: u8) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

fn mask_of(axes: &[usize]) -> Result<u8> {
    let mut m = 0u8;
    for w in axes.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Precondition(format!("axes {axes:?} must be strictly increasing")));
        }
    }
    for a in axes {
        m |= 1 << a;
    }
    Ok(m)
}

/// A homogeneous differential form of degree `degree` on T^dim.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<S: Scalar = C64> {
    dim: usize,
    degree: usize,
    components: BTreeMap<u8, TrigPoly<S>>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!((1..=3).contains(&dim), "torus dimension {dim} out of range");
        Self { dim, degree, components: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(f: TrigPoly<S>) -> Self {
        let mut w = Self::zero(f.dim(), 0);
        w.add_component(0, f);
        w
    }

    /// `f · dt_{axes}`.
    pub fn basis(f: TrigPoly<S>, axes: &[usize]) -> Result<Self> {
        if let Some(a) = axes.iter().find(|a| **a >= f.dim()) {
            return Err(Error::AxisRange { axis: *a, dim: f.dim() });
        }
        let mask = mask_of(axes)?;
        let mut w = Self::zero(f.dim(), axes.len());
        w.add_component(mask, f);
        Ok(w)
    }

    /// `dt_axis`.
    pub fn dt(dim: usize, axis: usize) -> Result<Self> {
        Self::basis(TrigPoly::one(dim), &[axis])
    }

    /// The volume form `dt_0 ∧ … ∧ dt_{dim-1}`.
    pub fn volume(dim: usize) -> Self {
        let axes: Vec<usize> = (0..dim).collect();
        Self::basis(TrigPoly::one(dim), &axes).expect("volume axes are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> impl Iterator<Item = (u8, &TrigPoly<S>)> {
        self.components.iter().map(|(m, p)| (*m, p))
    }

    pub fn component(&self, axes: &[usize]) -> TrigPoly<S> {
        mask_of(axes)
            .ok()
            .and_then(|m| self.components.get(&m).cloned())
            .unwrap_or_else(|| TrigPoly::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn add_component(&mut self, mask: u8, f: TrigPoly<S>) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        if f.is_zero() {
            return;
        }
        let sum = match self.components.remove(&mask) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.components.insert(mask, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Precondition(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, p) in &other.components {
            out.add_component(*m, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, p) in &self.components {
            out.add_component(*m, p.scale(c));
        }
        out
    }

    /// `f · ω`.
    pub fn mul_function(&self, f: &TrigPoly<S>) -> Result<Self> {
        if f.dim() != self.dim {
            return Err(Error::DimMismatch(self.dim, f.dim()));
        }
        let mut out = Self::zero(self.dim, self.degree);
        for (m, p) in &self.components {
            out.add_component(*m, p.mul(f)?);
        }
        Ok(out)
    }

    /// Exterior product. Degrees adding up beyond `dim` give the zero form of
    /// that (empty) degree.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut out = Self { dim: self.dim, degree: self.degree + other.degree, components: BTreeMap::new() };
        for (a, f) in &self.components {
            for (b, g) in &other.components {
                if a & b != 0 {
                    continue;
                }
                let prod = f.mul(g)?;
                out.add_component(a | b, prod.scale(&S::from_i64(merge_sign(*a, *b))));
            }
        }
        Ok(out)
    }

    /// de Rham differential.
    pub fn exterior_d(&self) -> Self {
        let mut out = Self { dim: self.dim, degree: self.degree + 1, components: BTreeMap::new() };
        for (a, f) in &self.components {
            for axis in 0..self.dim {
                let bit = 1u8 << axis;
                if a & bit != 0 {
                    continue;
                }
                let df = f.derive(axis).expect("axis below dim");
                out.add_component(a | bit, df.scale(&S::from_i64(merge_sign(bit, *a))));
            }
        }
        out
    }

    /// `∫_{T^k} ω`; zero unless `ω` has top degree.
    pub fn integrate(&self) -> S {
        if self.degree != self.dim {
            return S::zero();
        }
        self.components.values().map(|p| p.integrate()).fold(S::zero(), |a, b| a + b)
    }

    /// Keeps only the zero Fourier mode of every component.
    pub fn constant_part(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, p) in &self.components {
            out.add_component(*m, p.constant_part());
        }
        out
    }

    /// Contraction with the constant vector field `v`.
    fn contract(&self, v: &Mode) -> Self {
        let mut out = Self::zero(self.dim, self.degree.saturating_sub(1));
        for (a, f) in &self.components {
            for (j, axis) in axes_of(*a).into_iter().enumerate() {
                if v[axis] == 0 {
                    continue;
                }
                let sign = if j % 2 == 0 { 1 } else { -1 };
                out.add_component(a & !(1 << axis), f.scale(&S::from_i64(sign * v[axis])));
            }
        }
        out
    }

    /// Splits into single-mode pieces `e_n · ω_n`.
    fn by_mode(&self) -> BTreeMap<Mode, Self> {
        let mut out: BTreeMap<Mode, Self> = BTreeMap::new();
        for (m, p) in &self.components {
            for (n, c) in p.terms() {
                out.entry(*n)
                    .or_insert_with(|| Self::zero(self.dim, self.degree))
                    .add_component(*m, TrigPoly::from_terms(self.dim, [(*n, c.clone())]));
            }
        }
        out
    }

    /// A primitive `η` with `dη = ω` for a closed form without constant part:
    /// `η = Σ_n ι_n ω_n / (2πi|n|²)`, since the Lie derivative along the
    /// constant field `n` acts on `e_n` by `2πi|n|²`.
    pub fn exact_primitive(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::Precondition("0-forms have no primitive".into()));
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (n, piece) in self.by_mode() {
            let norm2: i64 = n.iter().map(|x| x * x).sum();
            if norm2 == 0 {
                return Err(Error::Precondition("form has a constant part".into()));
            }
            let factor = S::inv_two_pi_i() * S::rational(1, norm2);
            out = out.add(&piece.contract(&n).scale(&factor))?;
        }
        Ok(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Form<T> {
        Form {
            dim: self.dim,
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(m, p)| (*m, p.map(f)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Form<C64> {
        self.map(|c| c.to_complex())
    }

    /// Largest coefficient modulus over all components.
    pub fn max_abs_coeff(&self) -> f64 {
        self.components
            .values()
            .map(|p| p.to_complex().max_abs_coeff())
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, p) in &self.components {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "(")?;
            let mut t = true;
            for (n, c) in p.terms() {
                if !t {
                    write!(f, " + ")?;
                }
                t = false;
                let c = c.to_complex();
                write!(f, "({:.6}{:+.6}i)e{:?}", c.re, c.im, &n[..self.dim])?;
            }
            write!(f, ")")?;
            for a in axes_of(*m) {
                write!(f, " dt{a}")?;
            }
        }
        Ok(())
    }
}

/// Which truncation of the de Rham complex a family lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// All form degrees: the two-periodic complex.
    None,
    /// Entry p has form degrees ≥ p.
    AtleastP,
    /// Entry p has form degrees ≤ p.
    AtmostP,
}

impl Truncation {
    fn name(self) -> &'static str {
        match self {
            Truncation::None => "none",
            Truncation::AtleastP => "atleast_p",
            Truncation::AtmostP => "atmost_p",
        }
    }

    fn admits(self, p: i64, degree: usize) -> bool {
        match self {
            Truncation::None => true,
            Truncation::AtleastP => degree as i64 >= p,
            Truncation::AtmostP => degree as i64 <= p,
        }
    }
}

/// A finitely supported family `p ↦ ω(p)` of inhomogeneous forms.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFamily<S: Scalar = C64> {
    dim: usize,
    truncation: Truncation,
    entries: BTreeMap<i64, BTreeMap<usize, Form<S>>>,
}

impl<S: Scalar> PeriodicFamily<S> {
    pub fn new(dim: usize, truncation: Truncation) -> Self {
        assert!((1..=3).contains(&dim), "torus dimension {dim} out of range");
        Self { dim, truncation, entries: BTreeMap::new() }
    }

    /// Family with the single form `w` at entry `p`.
    pub fn single(truncation: Truncation, p: i64, w: Form<S>) -> Result<Self> {
        let mut fam = Self::new(w.dim(), truncation);
        fam.insert(p, w)?;
        Ok(fam)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Adds `w` into entry `p`, enforcing the truncation.
    pub fn insert(&mut self, p: i64, w: Form<S>) -> Result<()> {
        if w.dim() != self.dim {
            return Err(Error::DimMismatch(self.dim, w.dim()));
        }
        if w.is_zero() {
            return Ok(());
        }
        if !self.truncation.admits(p, w.degree()) {
            return Err(Error::TruncationViolated { p, degree: w.degree(), truncation: self.truncation.name() });
        }
        let entry = self.entries.entry(p).or_default();
        let sum = match entry.remove(&w.degree()) {
            Some(old) => old.add(&w)?,
            None => w,
        };
        if !sum.is_zero() {
            entry.insert(sum.degree(), sum);
        }
        if entry.is_empty() {
            self.entries.remove(&p);
        }
        Ok(())
    }

    /// Forms of entry `p`, by degree.
    pub fn entry(&self, p: i64) -> impl Iterator<Item = &Form<S>> {
        self.entries.get(&p).into_iter().flat_map(|e| e.values())
    }

    /// The degree-`degree` part of entry `p`.
    pub fn form(&self, p: i64, degree: usize) -> Form<S> {
        self.entries
            .get(&p)
            .and_then(|e| e.get(&degree))
            .cloned()
            .unwrap_or_else(|| Form::zero(self.dim, degree))
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &Form<S>)> {
        self.entries.iter().flat_map(|(p, e)| e.values().map(move |w| (*p, w)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (p, w) in other.entries() {
            out.insert(p, w.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::new(self.dim, self.truncation);
        for (p, w) in self.entries() {
            out.insert(p, w.scale(c)).expect("scaling keeps the truncation");
        }
        out
    }

    /// Relabels the truncation; fails if some entry does not satisfy it.
    pub fn with_truncation(&self, truncation: Truncation) -> Result<Self> {
        let mut out = Self::new(self.dim, truncation);
        for (p, w) in self.entries() {
            out.insert(p, w.clone())?;
        }
        Ok(out)
    }

    /// Componentwise exterior derivative. In the `atmost_p` complexes the
    /// derivative of a degree-p form leaves the complex and is dropped.
    pub fn differential(&self) -> Self {
        let mut out = Self::new(self.dim, self.truncation);
        for (p, w) in self.entries() {
            let dw = w.exterior_d();
            if self.truncation.admits(p, dw.degree()) {
                out.insert(p, dw).expect("degree checked");
            }
        }
        out
    }

    /// Componentwise wedge with a family; entries multiply as `p + q`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let mut out = Self::new(self.dim, Truncation::None);
        for (p, a) in self.entries() {
            for (q, b) in other.entries() {
                out.insert(p + q, a.wedge(b)?)?;
            }
        }
        Ok(out)
    }

    /// Wedge of every entry with a single form, keeping `p`.
    pub fn wedge_form(&self, w: &Form<S>) -> Result<Self> {
        let mut out = Self::new(self.dim, Truncation::None);
        for (p, a) in self.entries() {
            out.insert(p, a.wedge(w)?)?;
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> PeriodicFamily<C64> {
        let mut out = PeriodicFamily::new(self.dim, self.truncation);
        for (p, w) in self.entries() {
            out.insert(p, w.to_complex()).expect("same truncation");
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries().map(|(_, w)| w.max_abs_coeff()).fold(0.0, f64::max)
    }
}

/// `Σ_p ∫_X [ω(p)]_{top}`.
pub fn integrate_family<S: Scalar>(fam: &PeriodicFamily<S>) -> S {
    fam.entries().map(|(_, w)| w.integrate()).fold(S::zero(), |a, b| a + b)
}

/// Periodicity shift: entry `p` of the result is entry `p − two_k/2` of `fam`.
pub fn shift<S: Scalar>(fam: &PeriodicFamily<S>, two_k: i64) -> Result<PeriodicFamily<S>> {
    if two_k % 2 != 0 {
        return Err(Error::OddShift(two_k));
    }
    let k = two_k / 2;
    let mut out = PeriodicFamily::new(fam.dim, Truncation::None);
    for (p, w) in fam.entries() {
        out.insert(p + k, w.clone())?;
    }
    // the truncation label survives only when it still holds
    Ok(out.with_truncation(fam.truncation).unwrap_or(out))
}

/// Projection onto the `atmost_p` truncation.
pub fn psi_project<S: Scalar>(fam: &PeriodicFamily<S>) -> Result<PeriodicFamily<S>> {
    if fam.truncation != Truncation::None {
        return Err(Error::Precondition(format!(
            "psi_project expects an untruncated family, got {}",
            fam.truncation.name()
        )));
    }
    let mut out = PeriodicFamily::new(fam.dim, Truncation::AtmostP);
    for (p, w) in fam.entries() {
        if w.degree() as i64 <= p {
            out.insert(p, w.clone())?;
        }
    }
    Ok(out)
}

/// A periodic cohomology class, represented by a family of closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct HPClass<S: Scalar = C64> {
    rep: PeriodicFamily<S>,
}

impl<S: Scalar> HPClass<S> {
    pub fn rep(&self) -> &PeriodicFamily<S> {
        &self.rep
    }

    pub fn shift(&self, two_k: i64) -> Result<Self> {
        Ok(Self { rep: shift(&self.rep, two_k)? })
    }
}

const CLOSED_TOL: f64 = 1e-12;

/// Harmonic (constant-coefficient) representative of the class of a closed
/// family. The discarded part is checked to be exact by constructing a
/// primitive and differentiating it back.
pub fn hp_representative<S: Scalar>(fam: &PeriodicFamily<S>) -> Result<HPClass<S>> {
    let mut rep = PeriodicFamily::new(fam.dim, fam.truncation);
    for (p, w) in fam.entries() {
        let residual = w.exterior_d().max_abs_coeff();
        if residual > CLOSED_TOL {
            return Err(Error::NotClosed(residual));
        }
        let harmonic = w.constant_part();
        let rest = w.sub(&harmonic)?;
        if !rest.is_zero() {
            let back = rest.exact_primitive()?.exterior_d();
            let err = back.sub(&rest)?.max_abs_coeff();
            if err > CLOSED_TOL * (1.0 + rest.max_abs_coeff()) {
                return Err(Error::NotClosed(err));
            }
        }
        rep.insert(p, harmonic)?;
    }
    Ok(HPClass { rep })
}

#[derive(Serialize, Deserialize)]
struct ComponentWire {
    axes: Vec<usize>,
    poly: TrigPoly<C64>,
}

#[derive(Serialize, Deserialize)]
struct FormWire {
    dim: usize,
    degree: usize,
    components: Vec<ComponentWire>,
}

impl Serialize for Form<C64> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        FormWire {
            dim: self.dim,
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(m, p)| ComponentWire { axes: axes_of(*m), poly: p.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Form<C64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FormWire::deserialize(d)?;
        check_dim(w.dim).map_err(D::Error::custom)?;
        if w.degree > w.dim {
            return Err(D::Error::custom(format!("degree {} exceeds dimension {}", w.degree, w.dim)));
        }
        let mut out = Form::zero(w.dim, w.degree);
        for c in w.components {
            if c.axes.len() != w.degree || c.poly.dim() != w.dim {
                return Err(D::Error::custom("component does not match the form's degree or dimension"));
            }
            let part = Form::basis(c.poly, &c.axes).map_err(D::Error::custom)?;
            out = out.add(&part).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    p: i64,
    forms: Vec<Form<C64>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    truncation: Truncation,
    entries: Vec<EntryWire>,
}

impl Serialize for PeriodicFamily<C64> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        FamilyWire {
            truncation: self.truncation,
            entries: self
                .entries
                .iter()
                .map(|(p, e)| EntryWire { p: *p, forms: e.values().cloned().collect() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodicFamily<C64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FamilyWire::deserialize(d)?;
        let dim = w
            .entries
            .iter()
            .flat_map(|e| e.forms.iter().map(|f| f.dim()))
            .next()
            .ok_or_else(|| D::Error::custom("empty family carries no dimension; give at least one form"))?;
        let mut out = PeriodicFamily::new(dim, w.truncation);
        for e in w.entries {
            for f in e.forms {
                out.insert(e.p, f).map_err(D::Error::custom)?;
            }
        }
        Ok(out)
    }
}
