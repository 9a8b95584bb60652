//! Trigonometric polynomials on the torus T^k (k ≤ 3) and their units.
//!
//! Coordinates are `t ∈ [0,1)^k` and the characters are
//! `e_n(t) = exp(2πi⟨n,t⟩)`, so differentiation multiplies the coefficient of
//! `e_n` by `2πi·n_axis` and integration over the unit-volume torus picks the
//! zero mode.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C64};

/// Frequency vector; axes beyond the polynomial's dimension are zero.
pub type Mode = [i64; 3];

pub const MAX_DIM: usize = 3;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::BadDimension(dim))
    }
}

pub(crate) fn mode_from(n: &[i64]) -> Mode {
    let mut m = [0; 3];
    m[..n.len()].copy_from_slice(n);
    m
}

pub(crate) fn mode_add(a: &Mode, b: &Mode) -> Mode {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Finitely supported Fourier series `Σ c_n e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly<S: Scalar = C64> {
    dim: usize,
    coeffs: BTreeMap<Mode, S>,
}

impl<S: Scalar> TrigPoly<S> {
    /// The zero polynomial. Panics unless `1 <= dim <= 3`.
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "torus dimension {dim} out of range");
        Self { dim, coeffs: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        Self::monomial(dim, &[0; 3][..dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, S::one())
    }

    /// `c·e_n`.
    pub fn monomial(dim: usize, n: &[i64], c: S) -> Self {
        assert_eq!(n.len(), dim, "mode length must equal the dimension");
        let mut p = Self::zero(dim);
        p.add_term(mode_from(n), c);
        p
    }

    /// The character `e_n` on the circle.
    pub fn e1(n: i64) -> Self {
        Self::monomial(1, &[n], S::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Mode, S)>>(dim: usize, terms: I) -> Self {
        let mut p = Self::zero(dim);
        for (n, c) in terms {
            p.add_term(n, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn add_term(&mut self, n: Mode, c: S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&n) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(n, sum);
        }
    }

    pub fn coeff(&self, n: &[i64]) -> S {
        self.coeffs.get(&mode_from(n)).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mode, &S)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `max ‖n‖_∞` over the support (0 for the zero polynomial).
    pub fn degree(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|n| n.iter().map(|x| x.abs()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.dim, self.coeffs.iter().map(|(n, v)| (*n, v.clone() * c.clone())))
    }

    /// Coefficient-convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut out = Self::zero(self.dim);
        for (n, a) in &self.coeffs {
            for (m, b) in &other.coeffs {
                out.add_term(mode_add(n, m), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.add_term(*n, c.clone());
        }
        Ok(out)
    }

    /// Partial derivative `∂/∂t_axis`.
    pub fn derive(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::AxisRange { axis, dim: self.dim });
        }
        Ok(Self::from_terms(
            self.dim,
            self.coeffs
                .iter()
                .map(|(n, c)| (*n, c.clone() * S::two_pi_i() * S::from_i64(n[axis]))),
        ))
    }

    /// `∫_{T^k} f`, the zero-mode coefficient.
    pub fn integrate(&self) -> S {
        self.coeffs.get(&[0; 3]).cloned().unwrap_or_else(S::zero)
    }

    /// Zero-mode part as a constant polynomial.
    pub fn constant_part(&self) -> Self {
        Self::constant(self.dim, self.integrate())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TrigPoly<T> {
        TrigPoly::from_terms(self.dim, self.coeffs.iter().map(|(n, c)| (*n, f(c))))
    }

    pub fn to_complex(&self) -> TrigPoly<C64> {
        self.map(|c| c.to_complex())
    }
}

impl TrigPoly<C64> {
    pub fn eval(&self, t: &[f64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(n, c)| {
                let phase: f64 = (0..self.dim).map(|a| n[a] as f64 * t[a]).sum();
                c * C64::from_polar(1.0, 2.0 * PI * phase)
            })
            .sum()
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Self::from_terms(self.dim, self.coeffs.iter().filter(|(_, c)| c.norm() > tol).map(|(n, c)| (*n, *c)))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference with `other`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.sub_ref(other).max_abs_coeff()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.add_term(*n, -c);
        }
        out
    }

    /// Random polynomial with `terms` modes of sup-degree ≤ `degree` and
    /// coefficients uniform in the square of half-width `amplitude`.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, degree: i64, terms: usize, amplitude: f64) -> Self {
        let mut p = Self::zero(dim);
        for _ in 0..terms {
            let mut n = [0; 3];
            for x in n.iter_mut().take(dim) {
                *x = rng.gen_range(-degree..=degree);
            }
            let c = C64::new(rng.gen_range(-amplitude..amplitude), rng.gen_range(-amplitude..amplitude));
            p.add_term(n, c);
        }
        p
    }

    /// Phase speed bound `Σ 2π|n||c_n|`, used to size sampling grids.
    fn phase_speed(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(n, c)| 2.0 * PI * n.iter().map(|x| x.abs()).max().unwrap_or(0) as f64 * c.norm())
            .sum()
    }
}

impl TrigPoly<crate::scalar::RationalTau> {
    /// Random polynomial with Gaussian-integer coefficients in `[-amp, amp]`.
    pub fn random_exact<R: Rng>(rng: &mut R, dim: usize, degree: i64, terms: usize, amp: i64) -> Self {
        let mut p = Self::zero(dim);
        for _ in 0..terms {
            let mut n = [0; 3];
            for x in n.iter_mut().take(dim) {
                *x = rng.gen_range(-degree..=degree);
            }
            let c = crate::scalar::RationalTau::gaussian(rng.gen_range(-amp..=amp), rng.gen_range(-amp..=amp));
            p.add_term(n, c);
        }
        p
    }
}

impl<'a, S: Scalar> Add for &'a TrigPoly<S> {
    type Output = TrigPoly<S>;
    /// Panics on dimension mismatch; use [`TrigPoly::add`] for a checked sum.
    fn add(self, rhs: &'a TrigPoly<S>) -> TrigPoly<S> {
        TrigPoly::add(self, rhs).expect("dimension mismatch in TrigPoly addition")
    }
}

impl<'a, S: Scalar> Sub for &'a TrigPoly<S> {
    type Output = TrigPoly<S>;
    fn sub(self, rhs: &'a TrigPoly<S>) -> TrigPoly<S> {
        TrigPoly::add(self, &-rhs).expect("dimension mismatch in TrigPoly subtraction")
    }
}

impl<'a, S: Scalar> Mul for &'a TrigPoly<S> {
    type Output = TrigPoly<S>;
    fn mul(self, rhs: &'a TrigPoly<S>) -> TrigPoly<S> {
        TrigPoly::mul(self, rhs).expect("dimension mismatch in TrigPoly product")
    }
}

impl<'a, S: Scalar> Neg for &'a TrigPoly<S> {
    type Output = TrigPoly<S>;
    fn neg(self) -> TrigPoly<S> {
        self.scale(&-S::one())
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffWire {
    n: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyWire {
    dim: usize,
    coeffs: Vec<CoeffWire>,
}

impl Serialize for TrigPoly<C64> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        TrigPolyWire {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| CoeffWire { n: n[..self.dim].to_vec(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly<C64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = TrigPolyWire::deserialize(d)?;
        check_dim(w.dim).map_err(D::Error::custom)?;
        let mut p = TrigPoly::zero(w.dim);
        for c in w.coeffs {
            if c.n.len() != w.dim {
                return Err(D::Error::custom(format!("mode {:?} has wrong length for dim {}", c.n, w.dim)));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(D::Error::custom("non-finite coefficient"));
            }
            p.add_term(mode_from(&c.n), C64::new(c.re, c.im));
        }
        Ok(p)
    }
}

/// A nowhere-vanishing function `u(t) = exp(2πi⟨w,t⟩)·exp(g(t))`.
///
/// Storing the winding vector and the logarithm separately makes inversion
/// exact and gives `d log u = 2πi⟨w,dt⟩ + dg` without any branch tracking.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitFunction<S: Scalar = C64> {
    winding: Vec<i64>,
    logpart: TrigPoly<S>,
}

impl<S: Scalar> UnitFunction<S> {
    /// Builds the unit and checks that its sampled argument winds as recorded.
    pub fn new(winding: Vec<i64>, logpart: TrigPoly<S>) -> Result<Self> {
        if winding.len() != logpart.dim() {
            return Err(Error::DimMismatch(winding.len(), logpart.dim()));
        }
        let u = Self { winding, logpart };
        let recomputed = recompute_winding(&u.to_complex())?;
        if recomputed != u.winding {
            return Err(Error::WindingMismatch { recorded: u.winding.clone(), recomputed });
        }
        Ok(u)
    }

    /// `exp(g)`.
    pub fn exp_of(g: TrigPoly<S>) -> Self {
        Self { winding: vec![0; g.dim()], logpart: g }
    }

    /// The character `exp(2πi⟨w,t⟩)`.
    pub fn character(winding: &[i64]) -> Self {
        Self { winding: winding.to_vec(), logpart: TrigPoly::zero(winding.len()) }
    }

    pub fn dim(&self) -> usize {
        self.logpart.dim()
    }

    pub fn winding(&self) -> &[i64] {
        &self.winding
    }

    pub fn logpart(&self) -> &TrigPoly<S> {
        &self.logpart
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(Self {
            winding: self.winding.iter().zip(&other.winding).map(|(a, b)| a + b).collect(),
            logpart: self.logpart.add(&other.logpart)?,
        })
    }

    pub fn inverse(&self) -> Self {
        Self { winding: self.winding.iter().map(|w| -w).collect(), logpart: -&self.logpart }
    }

    pub fn to_complex(&self) -> UnitFunction<C64> {
        UnitFunction { winding: self.winding.clone(), logpart: self.logpart.to_complex() }
    }
}

impl UnitFunction<C64> {
    /// Constant unit `c ≠ 0`, stored with the principal logarithm.
    pub fn constant(dim: usize, c: C64) -> Result<Self> {
        if c.norm() < 1e-300 {
            return Err(Error::UnitVanishes(c.norm()));
        }
        Ok(Self::exp_of(TrigPoly::constant(dim, c.ln())))
    }

    pub fn eval(&self, t: &[f64]) -> C64 {
        let phase: f64 = self.winding.iter().zip(t).map(|(w, x)| *w as f64 * x).sum();
        C64::from_polar(1.0, 2.0 * PI * phase) * self.logpart.eval(t).exp()
    }

    /// Fourier coefficients `û(k)` for `|k| ≤ band` of a unit on the circle,
    /// together with the largest coefficient modulus beyond the band.
    pub fn circle_coefficients(&self, band: usize) -> Result<(Vec<C64>, f64)> {
        if self.dim() != 1 {
            return Err(Error::DimMismatch(self.dim(), 1));
        }
        let w = self.winding[0];
        // exp(g) is entire; the grid only needs to resolve its decay well past the band
        let reach = band as f64 + w.unsigned_abs() as f64 + self.logpart.degree() as f64 * 8.0
            + self.logpart.phase_speed() * 4.0;
        let m = ((4.0 * reach).max(64.0) as usize).next_power_of_two();
        let mut buf: Vec<C64> = (0..m).map(|j| self.logpart.eval(&[j as f64 / m as f64]).exp()).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let scale = 1.0 / m as f64;
        let coeff_of_exp = |k: i64| -> C64 {
            if k.unsigned_abs() as usize >= m / 2 {
                return C64::new(0.0, 0.0);
            }
            buf[k.rem_euclid(m as i64) as usize] * scale
        };
        // u = e_w · exp(g): û(k) = (exp g)^(k - w)
        let band = band as i64;
        let coeffs = (-band..=band).map(|k| coeff_of_exp(k - w)).collect();
        let mut tail = 0.0f64;
        for j in 0..m as i64 {
            let k = if j < m as i64 / 2 { j } else { j - m as i64 } + w;
            if k.abs() > band {
                tail = tail.max((buf[j as usize] * scale).norm());
            }
        }
        Ok((coeffs, tail))
    }
}

/// Winding vector of a unit recovered by argument tracking along each
/// coordinate circle through the origin.
pub fn recompute_winding(u: &UnitFunction<C64>) -> Result<Vec<i64>> {
    let dim = u.dim();
    let speed = 2.0 * PI * u.winding.iter().map(|w| w.abs()).max().unwrap_or(0) as f64 + u.logpart.phase_speed();
    let m = ((4.0 * speed) as usize + 64).min(1 << 16);
    let mut out = Vec::with_capacity(dim);
    for axis in 0..dim {
        let mut t = vec![0.0; dim];
        let mut prev = u.eval(&t);
        if prev.norm() < 1e-12 {
            return Err(Error::UnitVanishes(prev.norm()));
        }
        let mut total = 0.0;
        for j in 1..=m {
            t[axis] = j as f64 / m as f64;
            let cur = u.eval(&t);
            if cur.norm() < 1e-12 {
                return Err(Error::UnitVanishes(cur.norm()));
            }
            total += (cur / prev).arg();
            prev = cur;
        }
        let value = total / (2.0 * PI);
        let rounded = value.round();
        if (value - rounded).abs() > 1e-6 {
            return Err(Error::WindingAmbiguous { axis, value });
        }
        out.push(rounded as i64);
    }
    Ok(out)
}

/// Grid layout helper: `m^dim` points in row-major order, axis 0 slowest.
struct Grid {
    dim: usize,
    m: usize,
}

impl Grid {
    fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    fn index_vec(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.m;
            flat /= self.m;
        }
        idx
    }

    fn flat(&self, idx: &[usize; 3]) -> usize {
        (0..self.dim).fold(0, |acc, a| acc * self.m + idx[a])
    }

    fn point(&self, idx: &[usize; 3]) -> Vec<f64> {
        (0..self.dim).map(|a| idx[a] as f64 / self.m as f64).collect()
    }

    fn mode(&self, idx: &[usize; 3]) -> Mode {
        let mut n = [0; 3];
        for a in 0..self.dim {
            let j = idx[a] as i64;
            n[a] = if j < self.m as i64 / 2 { j } else { j - self.m as i64 };
        }
        n
    }

    /// In-place FFT along every axis.
    fn fft(&self, data: &mut [C64], inverse: bool) {
        let mut planner = FftPlanner::new();
        let plan = if inverse { planner.plan_fft_inverse(self.m) } else { planner.plan_fft_forward(self.m) };
        let mut line = vec![C64::new(0.0, 0.0); self.m];
        for axis in 0..self.dim {
            let stride = self.m.pow((self.dim - 1 - axis) as u32);
            for start in 0..self.len() {
                if (start / stride) % self.m != 0 {
                    continue;
                }
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + j * stride];
                }
                plan.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    data[start + j * stride] = *v;
                }
            }
        }
    }
}

/// Normalizes `f` into the unit `exp(f)` after checking that the Fourier
/// expansion of `exp(f)` truncated at `out_degree` reproduces the sampled
/// function to within `tail_tol`.
pub fn exp_unit(f: &TrigPoly<C64>, out_degree: i64, tail_tol: f64) -> Result<UnitFunction<C64>> {
    if out_degree < f.degree() {
        return Err(Error::Precondition(format!(
            "out_degree {out_degree} below the degree {} of the exponent",
            f.degree()
        )));
    }
    if !(tail_tol > 0.0) {
        return Err(Error::Precondition("tail_tol must be positive".into()));
    }
    let grid = Grid { dim: f.dim(), m: ((4 * out_degree.max(2)) as usize).next_power_of_two() };
    let samples: Vec<C64> = (0..grid.len()).map(|i| f.eval(&grid.point(&grid.index_vec(i))).exp()).collect();
    let mut spec = samples.clone();
    grid.fft(&mut spec, false);
    for i in 0..grid.len() {
        let n = grid.mode(&grid.index_vec(i));
        if n.iter().any(|x| x.abs() > out_degree) {
            spec[i] = C64::new(0.0, 0.0);
        }
    }
    grid.fft(&mut spec, true);
    let norm = 1.0 / grid.len() as f64;
    let err = spec.iter().zip(&samples).map(|(a, b)| (a * norm - b).norm()).fold(0.0, f64::max);
    if err > tail_tol {
        return Err(Error::TailTolExceeded { err, tol: tail_tol });
    }
    Ok(UnitFunction::exp_of(f.clone()))
}

/// Recovers `(winding, log part)` of a unit from its samples on a uniform grid.
#[derive(Debug, Clone, Copy)]
pub struct LogUnit {
    pub samples_per_period: usize,
    /// Sup-norm tolerance of the round trip on the sampling grid.
    pub tol: f64,
}

impl LogUnit {
    pub fn new(samples_per_period: usize) -> Self {
        Self { samples_per_period, tol: 1e-10 }
    }

    pub fn recover<F: Fn(&[f64]) -> C64>(&self, dim: usize, u: F) -> Result<(Vec<i64>, TrigPoly<C64>)> {
        check_dim(dim)?;
        let grid = Grid { dim, m: self.samples_per_period.max(4) };
        let samples: Vec<C64> = (0..grid.len()).map(|i| u(&grid.point(&grid.index_vec(i)))).collect();
        if let Some(bad) = samples.iter().map(|z| z.norm()).find(|r| *r < 1e-12) {
            return Err(Error::UnitVanishes(bad));
        }

        let mut winding = vec![0i64; dim];
        for (axis, w) in winding.iter_mut().enumerate() {
            let mut total = 0.0;
            for j in 0..grid.m {
                let mut a = [0usize; 3];
                let mut b = [0usize; 3];
                a[axis] = j;
                b[axis] = (j + 1) % grid.m;
                total += (samples[grid.flat(&b)] / samples[grid.flat(&a)]).arg();
            }
            let value = total / (2.0 * PI);
            if (value - value.round()).abs() > 1e-6 {
                return Err(Error::WindingAmbiguous { axis, value });
            }
            *w = value.round() as i64;
        }

        // continuous logarithm of u·e^{-2πi⟨w,t⟩}; each point is reached from
        // its predecessor along the last nonzero index
        let untwisted: Vec<C64> = (0..grid.len())
            .map(|i| {
                let p = grid.point(&grid.index_vec(i));
                let phase: f64 = winding.iter().zip(&p).map(|(w, x)| *w as f64 * x).sum();
                samples[i] * C64::from_polar(1.0, -2.0 * PI * phase)
            })
            .collect();
        let mut logs = vec![C64::new(0.0, 0.0); grid.len()];
        logs[0] = untwisted[0].ln();
        for i in 1..grid.len() {
            let mut idx = grid.index_vec(i);
            let axis = (0..dim).rev().find(|a| idx[*a] > 0).expect("nonzero flat index");
            idx[axis] -= 1;
            let prev = grid.flat(&idx);
            logs[i] = logs[prev] + (untwisted[i] / untwisted[prev]).ln();
        }

        let mut spec = logs;
        grid.fft(&mut spec, false);
        let norm = 1.0 / grid.len() as f64;
        let mut g = TrigPoly::zero(dim);
        for (i, c) in spec.iter().enumerate() {
            let idx = grid.index_vec(i);
            // the Nyquist mode has no symmetric partner
            if (0..dim).any(|a| idx[a] == grid.m / 2) {
                continue;
            }
            g.add_term(grid.mode(&idx), c * norm);
        }
        let g = g.prune(1e-14);

        let rebuilt = UnitFunction { winding: winding.clone(), logpart: g.clone() };
        let err = (0..grid.len())
            .map(|i| {
                let z = rebuilt.eval(&grid.point(&grid.index_vec(i)));
                (z - samples[i]).norm() / samples[i].norm()
            })
            .fold(0.0, f64::max);
        if err > self.tol {
            return Err(Error::TailTolExceeded { err, tol: self.tol });
        }
        Ok((winding, g))
    }
}

#[derive(Serialize, Deserialize)]
struct UnitWire {
    winding: Vec<i64>,
    log: TrigPoly<C64>,
}

impl Serialize for UnitFunction<C64> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        UnitWire { winding: self.winding.clone(), log: self.logpart.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitFunction<C64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = UnitWire::deserialize(d)?;
        UnitFunction::new(w.winding, w.log).map_err(serde::de::Error::custom)
    }
}
