//! Operators on a finite Fourier window of L²(S¹).
//!
//! The window keeps the modes `−N..=N`; the guard band `B` marks the edge
//! region where truncation artifacts of banded products live. Traces and
//! determinants only look at the inner window `[−N+B, N−B]`.
//!
//! Banded operators (multiplication operators, projections and their
//! products) are stored by diagonals, so products cost `O(N·bandwidth²)`.
//! Inverses and singular values go through dense matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fourier::{TrigPoly, UnitFunction};
use crate::scalar::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Toeplitz symbols may leave at most this much coefficient mass above the guard.
pub const TOEPLITZ_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    n: usize,
    guard: usize,
}

impl WindowSpec {
    pub fn new(n: usize, guard: usize) -> Result<Self> {
        if n == 0 || guard >= n {
            return Err(Error::BadWindow { n, guard });
        }
        Ok(Self { n, guard })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Inclusive range of mode indices kept by traces.
    pub fn inner(&self) -> (i64, i64) {
        let r = (self.n - self.guard) as i64;
        (-r, r)
    }
}

#[derive(Debug, Clone)]
enum Storage {
    /// Diagonal `k` holds the entries `(row, col) = (j + k, j)` indexed by `j`.
    Banded(BTreeMap<i64, Vec<C64>>),
    Dense(DMatrix<C64>),
}

/// A square operator on the modes `lo..lo+size` of a window.
#[derive(Debug, Clone)]
pub struct TruncOp {
    window: WindowSpec,
    lo: i64,
    size: usize,
    storage: Storage,
}

impl TruncOp {
    fn banded(window: WindowSpec, lo: i64, size: usize, bands: BTreeMap<i64, Vec<C64>>) -> Self {
        Self { window, lo, size, storage: Storage::Banded(bands) }
    }

    fn full_range(window: &WindowSpec) -> (i64, usize) {
        (-(window.n as i64), 2 * window.n + 1)
    }

    /// Dense operator on the modes `lo..lo+matrix.nrows()`.
    pub fn from_dense(window: WindowSpec, lo: i64, matrix: DMatrix<C64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operators are square");
        Self { window, lo, size: matrix.nrows(), storage: Storage::Dense(matrix) }
    }

    pub fn identity(window: WindowSpec) -> Self {
        let (lo, size) = Self::full_range(&window);
        Self::diagonal(window, lo, size, |_| ONE)
    }

    fn diagonal(window: WindowSpec, lo: i64, size: usize, f: impl Fn(i64) -> C64) -> Self {
        let diag = (0..size).map(|j| f(lo + j as i64)).collect();
        Self::banded(window, lo, size, BTreeMap::from([(0, diag)]))
    }

    pub fn window(&self) -> WindowSpec {
        self.window
    }

    /// First mode index and number of modes.
    pub fn range(&self) -> (i64, usize) {
        (self.lo, self.size)
    }

    /// Matrix entry at modes `(m, n)`.
    pub fn entry(&self, m: i64, n: i64) -> C64 {
        let (r, c) = (m - self.lo, n - self.lo);
        if r < 0 || c < 0 || r >= self.size as i64 || c >= self.size as i64 {
            return ZERO;
        }
        match &self.storage {
            Storage::Banded(b) => b.get(&(r - c)).map(|d| d[c as usize]).unwrap_or(ZERO),
            Storage::Dense(m) => m[(r as usize, c as usize)],
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Banded(bands) => {
                let mut m = DMatrix::from_element(self.size, self.size, ZERO);
                for (k, d) in bands {
                    for (c, v) in d.iter().enumerate() {
                        let r = c as i64 + k;
                        if r >= 0 && (r as usize) < self.size {
                            m[(r as usize, c)] = *v;
                        }
                    }
                }
                m
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.window != other.window || self.lo != other.lo || self.size != other.size {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        match (&self.storage, &other.storage) {
            (Storage::Banded(a), Storage::Banded(b)) => {
                let n = self.size as i64;
                let mut out: BTreeMap<i64, Vec<C64>> = BTreeMap::new();
                for (ka, da) in a {
                    for (kb, db) in b {
                        let k = ka + kb;
                        if k.abs() >= n {
                            continue;
                        }
                        let dst = out.entry(k).or_insert_with(|| vec![ZERO; self.size]);
                        // C[c+k, c] += A[c+kb+ka, c+kb] · B[c+kb, c]
                        let c_lo = 0.max(-kb).max(-k);
                        let c_hi = n.min(n - kb).min(n - k);
                        for c in c_lo..c_hi {
                            dst[c as usize] += da[(c + kb) as usize] * db[c as usize];
                        }
                    }
                }
                out.retain(|_, d| d.iter().any(|v| *v != ZERO));
                Ok(Self::banded(self.window, self.lo, self.size, out))
            }
            _ => Ok(Self::from_dense(self.window, self.lo, self.to_dense() * other.to_dense())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, ONE)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -ONE)
    }

    fn combine(&self, other: &Self, s: C64) -> Result<Self> {
        self.check_same(other)?;
        match (&self.storage, &other.storage) {
            (Storage::Banded(a), Storage::Banded(b)) => {
                let mut out = a.clone();
                for (k, d) in b {
                    let dst = out.entry(*k).or_insert_with(|| vec![ZERO; self.size]);
                    for (x, y) in dst.iter_mut().zip(d) {
                        *x += s * y;
                    }
                }
                out.retain(|_, d| d.iter().any(|v| *v != ZERO));
                Ok(Self::banded(self.window, self.lo, self.size, out))
            }
            _ => Ok(Self::from_dense(self.window, self.lo, self.to_dense() + other.to_dense() * s)),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let storage = match &self.storage {
            Storage::Banded(b) => Storage::Banded(
                b.iter().map(|(k, d)| (*k, d.iter().map(|v| v * s).collect())).collect(),
            ),
            Storage::Dense(m) => Storage::Dense(m * s),
        };
        Self { storage, ..self.clone() }
    }

    pub fn adjoint(&self) -> Self {
        match &self.storage {
            Storage::Dense(m) => Self::from_dense(self.window, self.lo, m.adjoint()),
            Storage::Banded(b) => {
                let mut out = BTreeMap::new();
                for (k, d) in b {
                    let mut e = vec![ZERO; self.size];
                    for (c, v) in d.iter().enumerate() {
                        let r = c as i64 + k;
                        if r >= 0 && (r as usize) < self.size {
                            e[r as usize] = v.conj();
                        }
                    }
                    out.insert(-k, e);
                }
                Self::banded(self.window, self.lo, self.size, out)
            }
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Banded(b) => b.values().flatten().map(|v| v.norm()).fold(0.0, f64::max),
            Storage::Dense(m) => m.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// Largest `|k|` over stored diagonals with a nonzero entry; `None` for dense storage.
    pub fn bandwidth(&self) -> Option<i64> {
        match &self.storage {
            Storage::Banded(b) => Some(b.keys().map(|k| k.abs()).max().unwrap_or(0)),
            Storage::Dense(_) => None,
        }
    }

    /// Mode range `[a, b]` of this operator intersected with the inner window.
    fn inner_span(&self) -> (i64, i64) {
        let (ilo, ihi) = self.window.inner();
        (self.lo.max(ilo), (self.lo + self.size as i64 - 1).min(ihi))
    }

    /// Dense block on the modes of the inner window.
    pub fn inner_block(&self) -> DMatrix<C64> {
        let (a, b) = self.inner_span();
        let len = (b - a + 1).max(0) as usize;
        DMatrix::from_fn(len, len, |r, c| self.entry(a + r as i64, a + c as i64))
    }
}

/// `P_W M_f P_W`: `M[m, n] = f̂(m − n)`.
pub fn mult_op(f: &TrigPoly, w: &WindowSpec) -> Result<TruncOp> {
    if f.dim() != 1 {
        return Err(Error::DimMismatch(f.dim(), 1));
    }
    if f.degree() > w.guard as i64 {
        return Err(Error::BandwidthExceedsGuard { degree: f.degree(), guard: w.guard });
    }
    let (lo, size) = TruncOp::full_range(w);
    Ok(band_constant(*w, lo, size, f.terms().map(|(n, c)| (n[0], *c))))
}

fn band_constant(w: WindowSpec, lo: i64, size: usize, coeffs: impl Iterator<Item = (i64, C64)>) -> TruncOp {
    let mut bands = BTreeMap::new();
    for (k, c) in coeffs {
        if c != ZERO && k.unsigned_abs() < size as u64 {
            bands.insert(k, vec![c; size]);
        }
    }
    TruncOp::banded(w, lo, size, bands)
}

/// `(P⁺, F)` with `P⁺` the projection onto modes `n ≥ 1` and `F = 2P⁺ − I`.
pub fn hardy_projection(w: &WindowSpec) -> (TruncOp, TruncOp) {
    let (lo, size) = TruncOp::full_range(w);
    let p = TruncOp::diagonal(*w, lo, size, |n| if n >= 1 { ONE } else { ZERO });
    let f = TruncOp::diagonal(*w, lo, size, |n| if n >= 1 { ONE } else { -ONE });
    (p, f)
}

pub fn commutator(a: &TruncOp, b: &TruncOp) -> Result<TruncOp> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Sum of the diagonal over the inner window.
pub fn trace_guarded(a: &TruncOp) -> C64 {
    let (lo, hi) = a.inner_span();
    (lo..=hi).map(|n| a.entry(n, n)).sum()
}

/// Schatten p-norm of the inner-window block.
pub fn schatten_norm(a: &TruncOp, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Precondition(format!("Schatten exponent must be >= 1, got {p}")));
    }
    let block = a.inner_block();
    if block.is_empty() {
        return Ok(0.0);
    }
    let sv = block.singular_values();
    if p.is_infinite() {
        return Ok(sv.iter().cloned().fold(0.0, f64::max));
    }
    Ok(sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Compression of a symbol with coefficients `coeffs` (mode → value) to the modes `1..=N`.
fn toeplitz_block(w: &WindowSpec, coeffs: impl Iterator<Item = (i64, C64)>) -> TruncOp {
    band_constant(*w, 1, w.n, coeffs)
}

/// Fourier coefficients of `u` up to the guard, with the tail checked.
pub fn unit_coefficients(u: &UnitFunction, guard: usize) -> Result<Vec<(i64, C64)>> {
    let (coeffs, tail) = u.circle_coefficients(guard)?;
    if tail > TOEPLITZ_TAIL_TOL {
        return Err(Error::ToeplitzBandwidth { tail, guard });
    }
    let g = guard as i64;
    Ok(coeffs.into_iter().enumerate().map(|(i, c)| (i as i64 - g, c)).filter(|(_, c)| c.norm() > 0.0).collect())
}

/// `T_u = P⁺ M_u P⁺` on the modes `1..=N`.
pub fn toeplitz(u: &UnitFunction, w: &WindowSpec) -> Result<TruncOp> {
    Ok(toeplitz_block(w, unit_coefficients(u, w.guard)?.into_iter()))
}

/// `T_f` for a trigonometric polynomial symbol.
pub fn toeplitz_poly(f: &TrigPoly, w: &WindowSpec) -> Result<TruncOp> {
    if f.dim() != 1 {
        return Err(Error::DimMismatch(f.dim(), 1));
    }
    if f.degree() > w.guard as i64 {
        return Err(Error::BandwidthExceedsGuard { degree: f.degree(), guard: w.guard });
    }
    Ok(toeplitz_block(w, f.terms().map(|(n, c)| (n[0], *c))))
}

const OFF_INNER_TOL: f64 = 1e-10;

/// Determinant of `A = I + K` over the inner window; `K` must be negligible
/// outside it.
pub fn fredholm_det(a: &TruncOp) -> Result<C64> {
    let (lo, hi) = a.inner_span();
    let (alo, size) = a.range();
    for m in alo..alo + size as i64 {
        for n in alo..alo + size as i64 {
            let inside = (lo..=hi).contains(&m) && (lo..=hi).contains(&n);
            if inside {
                continue;
            }
            let k = a.entry(m, n) - if m == n { ONE } else { ZERO };
            if k.norm() > OFF_INNER_TOL {
                return Err(Error::Precondition(format!(
                    "A - I has entry {:.3e} at ({m}, {n}) outside the inner window",
                    k.norm()
                )));
            }
        }
    }
    lu_det(a.inner_block())
}

fn lu_det(m: DMatrix<C64>) -> Result<C64> {
    let d = m.lu().determinant();
    if !(d.re.is_finite() && d.im.is_finite()) || d.norm() < 1e-300 {
        return Err(Error::SingularDeterminant);
    }
    Ok(d)
}

const MIN_SINGULAR_VALUE: f64 = 1e-8;

fn checked_inverse(t: DMatrix<C64>) -> Result<DMatrix<C64>> {
    let smin = t.singular_values().iter().cloned().fold(f64::INFINITY, f64::min);
    if smin < MIN_SINGULAR_VALUE {
        return Err(Error::ToeplitzIllConditioned(smin));
    }
    t.lu().try_inverse().ok_or(Error::ToeplitzIllConditioned(0.0))
}

/// `det(T_{u1} T_{u2} T_{u1}^{-1} T_{u2}^{-1})` over the modes `1..=N−B`.
///
/// The determinant of the full finite section is identically 1; the
/// commutator's defect from the identity splits into a part at mode 1, which
/// carries the invariant, and a mirror part near mode N that cancels it. The
/// guard band cuts off the mirror part.
pub fn det_mult_commutator(u1: &UnitFunction, u2: &UnitFunction, w: &WindowSpec) -> Result<C64> {
    for u in [u1, u2] {
        if u.dim() != 1 {
            return Err(Error::DimMismatch(u.dim(), 1));
        }
        if u.winding()[0] != 0 {
            return Err(Error::WindingNotZero(u.winding()[0]));
        }
    }
    let t1 = toeplitz(u1, w)?.to_dense();
    let t2 = toeplitz(u2, w)?.to_dense();
    let i1 = checked_inverse(t1.clone())?;
    let i2 = checked_inverse(t2.clone())?;
    let prod = TruncOp::from_dense(*w, 1, &t1 * &t2 * i1 * i2);
    lu_det(prod.inner_block())
}

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Right null vectors of a square section, split by where they live: the
/// count of those concentrated on the first half of the modes, refusing to
/// decide when a singular value lies within a decade of the threshold or a
/// null vector straddles both halves.
fn leading_null_dimension(m: &DMatrix<C64>) -> Result<usize> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Err(Error::RankAmbiguous(0.0));
    }
    let mut null_rows = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        let ratio = s / smax;
        if ratio > RANK_THRESHOLD * 0.1 && ratio < RANK_THRESHOLD * 10.0 {
            return Err(Error::RankAmbiguous(ratio));
        }
        if ratio < RANK_THRESHOLD {
            null_rows.push(i);
        }
    }
    if null_rows.is_empty() {
        return Ok(0);
    }
    let half = m.ncols() / 2;
    // Gram matrix of the null space restricted to the leading modes; its
    // eigenvalues are the fractions of mass each null direction keeps there
    let lead = DMatrix::from_fn(null_rows.len(), half, |r, c| v_t[(null_rows[r], c)].conj());
    let gram = &lead * lead.adjoint();
    let mut count = 0;
    for ev in gram.symmetric_eigenvalues().iter() {
        if *ev > 0.1 && *ev < 0.9 {
            return Err(Error::RankAmbiguous(*ev));
        }
        if *ev >= 0.9 {
            count += 1;
        }
    }
    Ok(count)
}

/// `dim ker T_u − dim coker T_u` from numerical ranks of the section on
/// modes `1..=N`.
///
/// A square section has as many null directions on the left as on the
/// right, so the counts cannot be read off its rank alone. Null vectors of
/// the section either approximate null vectors of the infinite operator,
/// concentrated near mode 1, or come from the artificial edge at mode N.
/// Only the former are counted, for `T_u` and for `T_u^*`.
pub fn toeplitz_index(u: &UnitFunction, w: &WindowSpec) -> Result<i64> {
    let t = toeplitz(u, w)?;
    let ker = leading_null_dimension(&t.to_dense())?;
    let coker = leading_null_dimension(&t.adjoint().to_dense())?;
    Ok(ker as i64 - coker as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::TrigPoly;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn e(n: i64) -> TrigPoly {
        TrigPoly::e1(n)
    }

    fn win(n: usize, b: usize) -> WindowSpec {
        WindowSpec::new(n, b).unwrap()
    }

    fn assert_dense_eq(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        let err = (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err <= tol, "matrices differ by {err}");
    }

    #[test]
    fn window_validation() {
        assert!(WindowSpec::new(8, 8).is_err());
        assert!(WindowSpec::new(0, 0).is_err());
        assert_eq!(win(10, 3).inner(), (-7, 7));
    }

    #[test]
    fn mult_op_examples() {
        let w = win(6, 2);
        assert_dense_eq(&mult_op(&TrigPoly::one(1), &w).unwrap().to_dense(), &DMatrix::identity(13, 13), 0.0);
        let s = mult_op(&e(1), &w).unwrap();
        for m in -6..=6 {
            for n in -6..=6 {
                let want = if m == n + 1 { ONE } else { ZERO };
                assert_eq!(s.entry(m, n), want);
            }
        }
        let t = mult_op(&(&e(1) + &e(-1)), &w).unwrap();
        assert_eq!(t.entry(0, 1), ONE);
        assert_eq!(t.entry(1, 0), ONE);
        assert_eq!(t.entry(0, 0), ZERO);
        assert!(matches!(mult_op(&e(3), &w), Err(Error::BandwidthExceedsGuard { .. })));
    }

    #[test]
    fn hardy_projection_examples() {
        let w = win(5, 1);
        let (p, f) = hardy_projection(&w);
        for n in -5..=5 {
            assert_eq!(f.entry(n, n), if n >= 1 { ONE } else { -ONE });
        }
        assert_dense_eq(&p.mul(&p).unwrap().to_dense(), &p.to_dense(), 0.0);
        assert_dense_eq(&f.mul(&f).unwrap().to_dense(), &DMatrix::identity(11, 11), 0.0);
    }

    #[test]
    fn commutator_examples() {
        let w = win(8, 2);
        let (p, f) = hardy_projection(&w);
        let a = mult_op(&(&e(2) + &e(-1)), &w).unwrap();
        assert_eq!(commutator(&a, &a).unwrap().max_abs(), 0.0);
        assert_eq!(commutator(&f, &mult_op(&TrigPoly::one(1), &w).unwrap()).unwrap().max_abs(), 0.0);
        let k = commutator(&p, &mult_op(&e(1), &w).unwrap()).unwrap();
        // only the crossing 0 → 1 survives
        for m in -8..=8 {
            for n in -8..=8 {
                let want = if (m, n) == (1, 0) { ONE } else { ZERO };
                assert_eq!(k.entry(m, n), want);
            }
        }
        let other = win(9, 2);
        assert!(matches!(commutator(&p, &hardy_projection(&other).0), Err(Error::WindowMismatch)));
    }

    #[test]
    fn trace_examples() {
        let w = win(10, 3);
        let (_, f) = hardy_projection(&w);
        assert_eq!(trace_guarded(&TruncOp::identity(w)), c(15.0, 0.0));
        let k = commutator(&f, &mult_op(&e(1), &w).unwrap()).unwrap();
        let other = mult_op(&(&e(1) + &e(2)), &w).unwrap().mul(&f).unwrap();
        assert_eq!(trace_guarded(&k.mul(&other).unwrap()), ZERO);
        // hand enumeration: [F,M_{e_1}] has the single entry 2 at (1,0),
        // [F,M_{e_{-1}}] the entry −2 at (0,1); their product is −4 at (0,0)
        // and F(0,0) = −1
        let km = commutator(&f, &mult_op(&e(-1), &w).unwrap()).unwrap();
        let t = trace_guarded(&f.mul(&km).unwrap().mul(&k).unwrap());
        assert_eq!(t, c(4.0, 0.0));
    }

    #[test]
    fn schatten_examples() {
        let w = win(8, 2);
        let zero = TruncOp::identity(w).scale(ZERO);
        assert_eq!(schatten_norm(&zero, 1.0).unwrap(), 0.0);
        let (p, _) = hardy_projection(&w);
        let k = commutator(&p, &mult_op(&e(1), &w).unwrap()).unwrap();
        for q in [1.0, 2.0, 3.5] {
            assert!((schatten_norm(&k, q).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((schatten_norm(&k.scale(c(0.0, 2.5)), 2.0).unwrap() - 2.5).abs() < 1e-12);
        assert!(schatten_norm(&k, 0.5).is_err());
    }

    #[test]
    fn toeplitz_examples() {
        let w = win(12, 4);
        let one = toeplitz(&UnitFunction::constant(1, ONE).unwrap(), &w).unwrap();
        assert_dense_eq(&one.to_dense(), &DMatrix::identity(12, 12), 1e-14);
        let s = toeplitz(&UnitFunction::character(&[1]), &w).unwrap();
        for m in 1..=12 {
            for n in 1..=12 {
                let want = if m == n + 1 { 1.0 } else { 0.0 };
                assert!((s.entry(m, n) - c(want, 0.0)).norm() < 1e-14);
            }
        }
        let wide = UnitFunction::exp_of((&e(1) + &e(-1)).scale(&c(2.0, 0.0)));
        assert!(matches!(toeplitz(&wide, &w), Err(Error::ToeplitzBandwidth { .. })));
    }

    #[test]
    fn toeplitz_semicommutator_is_bounded() {
        let f = (&e(1) + &e(-2)).scale(&c(0.5, 0.25));
        let g = (&e(3) + &e(-1)).scale(&c(-0.3, 0.7));
        let fg = &f * &g;
        let mut norms = Vec::new();
        for n in [32, 64, 128] {
            let w = win(n, 8);
            let d = toeplitz_poly(&f, &w)
                .unwrap()
                .mul(&toeplitz_poly(&g, &w).unwrap())
                .unwrap()
                .sub(&toeplitz_poly(&fg, &w).unwrap())
                .unwrap();
            // restrict to the modes away from the artificial edge at N
            let block = d.to_dense().view((0, 0), (n - 8, n - 8)).into_owned();
            norms.push(block.singular_values().iter().sum::<f64>());
        }
        assert!(norms.iter().all(|x| (x - norms[0]).abs() < 1e-10), "{norms:?}");
        assert!(norms[0] > 0.1);
    }

    #[test]
    fn fredholm_examples() {
        let w = win(8, 2);
        assert!((fredholm_det(&TruncOp::identity(w)).unwrap() - ONE).norm() < 1e-15);
        let (lo, size) = (-8, 17);
        let mut m = DMatrix::identity(size, size);
        m[(8, 8)] += c(0.5, -1.0);
        let a = TruncOp::from_dense(w, lo, m.clone());
        assert!((fredholm_det(&a).unwrap() - c(1.5, -1.0)).norm() < 1e-14);
        m[(8, 8)] = ZERO;
        assert_eq!(fredholm_det(&TruncOp::from_dense(w, lo, m.clone())), Err(Error::SingularDeterminant));
        m[(0, 0)] = c(2.0, 0.0);
        assert!(matches!(fredholm_det(&TruncOp::from_dense(w, lo, m)), Err(Error::Precondition(_))));
    }

    #[test]
    fn det_mult_commutator_examples() {
        let w = win(64, 24);
        let k = UnitFunction::constant(1, c(2.0, -1.0)).unwrap();
        let u = UnitFunction::exp_of((&e(1) + &e(-1)).scale(&c(0.2, 0.0)));
        assert!((det_mult_commutator(&k, &u, &w).unwrap() - ONE).norm() < 1e-12);

        // (1/2πi)∫ g1 dg2 = Σ_k k ĝ1(−k) ĝ2(k) = −0.09 for g1 = 0.3e_1, g2 = 0.3e_{−1}
        let u1 = UnitFunction::exp_of(e(1).scale(&c(0.3, 0.0)));
        let u2 = UnitFunction::exp_of(e(-1).scale(&c(0.3, 0.0)));
        let want = c(-0.09, 0.0).exp();
        assert!((det_mult_commutator(&u1, &u2, &w).unwrap() - want).norm() < 1e-10);

        let u1 = UnitFunction::exp_of(e(1).scale(&c(0.5, 0.0)));
        let u2 = UnitFunction::exp_of(e(2).scale(&c(0.5, 0.0)));
        assert!((det_mult_commutator(&u1, &u2, &w).unwrap() - ONE).norm() < 1e-10);

        let v = UnitFunction::character(&[1]);
        assert_eq!(det_mult_commutator(&v, &u1, &w), Err(Error::WindingNotZero(1)));
    }

    #[test]
    fn index_examples() {
        let w = win(64, 40);
        assert_eq!(toeplitz_index(&UnitFunction::character(&[1]), &w).unwrap(), -1);
        let g = UnitFunction::exp_of((&e(2) + &e(-1)).scale(&c(0.3, 0.1)));
        assert_eq!(toeplitz_index(&g, &w).unwrap(), 0);
        assert_eq!(toeplitz_index(&UnitFunction::character(&[-2]), &w).unwrap(), 2);
    }

    #[test]
    fn degree_selection_rule() {
        let w = win(16, 6);
        let (_, f) = hardy_projection(&w);
        for (a, b) in [(1, 1), (2, -1), (-3, 1)] {
            let prod = f
                .mul(&mult_op(&e(a), &w).unwrap())
                .unwrap()
                .mul(&f)
                .unwrap()
                .mul(&mult_op(&e(b), &w).unwrap())
                .unwrap();
            assert_eq!(trace_guarded(&prod), ZERO);
        }
    }

    fn random_banded(seed: u64, w: &WindowSpec, band: i64) -> TruncOp {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = TrigPoly::random(&mut rng, 1, band, 4, 1.0);
        let g = TrigPoly::random(&mut rng, 1, band, 4, 1.0);
        let (_, fo) = hardy_projection(w);
        mult_op(&f, w).unwrap().mul(&fo).unwrap().mul(&mult_op(&g, w).unwrap()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn trace_is_cyclic_on_guarded_products(s1 in 0u64..1000, s2 in 0u64..1000) {
            let w = win(40, 12);
            let a = random_banded(s1, &w, 3);
            let b = random_banded(s2, &w, 3);
            let ab = trace_guarded(&a.mul(&b).unwrap());
            let ba = trace_guarded(&b.mul(&a).unwrap());
            let scale = schatten_norm(&a, f64::INFINITY).unwrap() * schatten_norm(&b, f64::INFINITY).unwrap();
            prop_assert!((ab - ba).norm() <= 1e-10 * scale.max(1.0));
        }

        #[test]
        fn schatten_monotone(seed in 0u64..1000, p in 1.1f64..6.0) {
            let w = win(12, 2);
            let a = random_banded(seed, &w, 2);
            prop_assert!(schatten_norm(&a, 1.0).unwrap() >= schatten_norm(&a, p).unwrap() - 1e-9);
        }

        #[test]
        fn banded_product_matches_dense(s1 in 0u64..1000, s2 in 0u64..1000) {
            let w = win(10, 3);
            let a = random_banded(s1, &w, 2);
            let b = random_banded(s2, &w, 3);
            let banded = a.mul(&b).unwrap().to_dense();
            let dense = a.to_dense() * b.to_dense();
            let err = (banded - dense).iter().map(|v| v.norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-12);
        }

        #[test]
        fn index_is_minus_winding(w0 in -3i64..=3, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = TrigPoly::random(&mut rng, 1, 8, 3, 0.05);
            let u = UnitFunction::character(&[w0]).mul(&UnitFunction::exp_of(g)).unwrap();
            for n in [64, 128, 256] {
                prop_assert_eq!(toeplitz_index(&u, &win(n, 56)).unwrap(), -w0);
            }
        }

        #[test]
        fn det_commutator_antisymmetric(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u1 = UnitFunction::exp_of(TrigPoly::random(&mut rng, 1, 3, 3, 0.15));
            let u2 = UnitFunction::exp_of(TrigPoly::random(&mut rng, 1, 3, 3, 0.15));
            let w = win(96, 40);
            let a = det_mult_commutator(&u1, &u2, &w).unwrap();
            let b = det_mult_commutator(&u2, &u1, &w).unwrap();
            prop_assert!((a * b - ONE).norm() < 1e-8);
        }
    }
}
