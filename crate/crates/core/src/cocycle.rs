//! Operator-side cochains on the circle: the block embedding `b_D`, the
//! cocycle `φ_d`, and the comparison of the operator trace cochain with the
//! form-side cochain.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclic::{boundary_b, LambdaChain};
use crate::cz::ComplexWire;
use crate::error::{Error, Result};
use crate::fourier::{Mode, TrigPoly};
use crate::operators::{commutator, hardy_projection, mult_op, schatten_norm, trace_guarded, TruncOp, WindowSpec};
use crate::scalar::C64;

/// Ratios are only formed for cycles with `|cochain_b| >` this.
pub const DENOMINATOR_FLOOR: f64 = 1e-10;

/// `[[P⁺aP⁺, P⁺aP⁻], [P⁻aP⁺, P⁻aP⁻]]`. Each block is kept as a compression
/// on the full window, so block products are ordinary operator products.
#[derive(Debug, Clone)]
pub struct BlockOp {
    pub a11: TruncOp,
    pub a12: TruncOp,
    pub a21: TruncOp,
    pub a22: TruncOp,
}

impl BlockOp {
    pub fn window(&self) -> WindowSpec {
        self.a11.window()
    }

    /// `[[0, a₁₂], [a₂₁, 0]]` as a single operator.
    pub fn offdiag(&self) -> Result<TruncOp> {
        self.a12.add(&self.a21)
    }

    /// Schatten-p norms of `a₁₂` and `a₂₁` over the inner window.
    pub fn offdiag_schatten(&self, p: f64) -> Result<(f64, f64)> {
        Ok((schatten_norm(&self.a12, p)?, schatten_norm(&self.a21, p)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            a11: self.a11.add(&other.a11)?,
            a12: self.a12.add(&other.a12)?,
            a21: self.a21.add(&other.a21)?,
            a22: self.a22.add(&other.a22)?,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { a11: self.a11.scale(s), a12: self.a12.scale(s), a21: self.a21.scale(s), a22: self.a22.scale(s) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocycleConstants {
    pub d: usize,
    pub c_phi: C64,
    pub c_a: C64,
}

impl CocycleConstants {
    pub fn new(d: usize) -> Result<Self> {
        if d % 2 == 0 {
            return Err(Error::Precondition(format!("cocycle degree must be odd, got {d}")));
        }
        let k = (d - 1) / 2;
        let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
        let denom = C64::new(0.0, 2.0 * std::f64::consts::PI).powi(k as i32) * fact(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        Ok(Self {
            d,
            c_phi: C64::new(sign * fact(d), 0.0) / denom,
            c_a: C64::new(-(2f64.powi(d as i32 + 1)) * fact(d), 0.0) / denom,
        })
    }
}

pub fn b_dirac(f: &TrigPoly, w: &WindowSpec) -> Result<BlockOp> {
    let m = mult_op(f, w)?;
    let (p, _) = hardy_projection(w);
    let q = TruncOp::identity(*w).sub(&p)?;
    let compress = |l: &TruncOp, r: &TruncOp| l.mul(&m)?.mul(r);
    Ok(BlockOp { a11: compress(&p, &p)?, a12: compress(&p, &q)?, a21: compress(&q, &p)?, a22: compress(&q, &q)? })
}

/// `c_φ · Tr(z · offdiag(a⁰) ⋯ offdiag(a^d))` with `z = diag(1, −1)`.
pub fn phi_d_eval(ops: &[BlockOp], c: &CocycleConstants) -> Result<C64> {
    if ops.len() != c.d + 1 {
        return Err(Error::Precondition(format!("φ_{} takes {} arguments, got {}", c.d, c.d + 1, ops.len())));
    }
    let w = ops[0].window();
    if ops.iter().any(|o| o.window() != w) {
        return Err(Error::WindowMismatch);
    }
    let (_, z) = hardy_projection(&w);
    let mut prod = z;
    for o in ops {
        prod = prod.mul(&o.offdiag()?)?;
    }
    Ok(c.c_phi * trace_guarded(&prod))
}

/// Caches `[F, M_{e_m}]` per mode for one window.
struct CommutatorCache {
    window: WindowSpec,
    f: TruncOp,
    ops: HashMap<i64, TruncOp>,
}

impl CommutatorCache {
    fn new(window: WindowSpec) -> Self {
        let (_, f) = hardy_projection(&window);
        Self { window, f, ops: HashMap::new() }
    }

    fn get(&mut self, m: i64) -> Result<&TruncOp> {
        if !self.ops.contains_key(&m) {
            let e = mult_op(&TrigPoly::e1(m), &self.window)?;
            let op = commutator(&self.f, &e)?;
            self.ops.insert(m, op);
        }
        Ok(&self.ops[&m])
    }

    fn word_trace(&mut self, w: &[Mode]) -> Result<C64> {
        let mut prod = self.f.clone();
        for m in w {
            prod = prod.mul(self.get(m[0])?)?;
        }
        Ok(trace_guarded(&prod))
    }
}

/// `c_a · Tr(F [F, f₀] ⋯ [F, f_d])`, extended linearly over the chain.
pub fn cochain_a(c: &LambdaChain, w: &WindowSpec, k: &CocycleConstants) -> Result<C64> {
    check_circle_chain(c, k.d)?;
    let mut cache = CommutatorCache::new(*w);
    let mut total = C64::new(0.0, 0.0);
    for (word, coeff) in c.terms() {
        total += coeff * cache.word_trace(word)?;
    }
    Ok(k.c_a * total)
}

/// `∫_{S¹} f₀ df₁` extended linearly; only the circle is supported.
pub fn cochain_b(c: &LambdaChain, d: usize) -> Result<C64> {
    if d != 1 {
        return Err(Error::UnsupportedDimension(d));
    }
    check_circle_chain(c, d)?;
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut total = C64::new(0.0, 0.0);
    for (word, coeff) in c.terms() {
        let (m0, m1) = (word[0][0], word[1][0]);
        if m0 + m1 == 0 {
            total += coeff * two_pi_i * m1 as f64;
        }
    }
    Ok(total)
}

fn check_circle_chain(c: &LambdaChain, d: usize) -> Result<()> {
    if c.dim() != 1 {
        return Err(Error::DimMismatch(c.dim(), 1));
    }
    if c.degree() != d {
        return Err(Error::Precondition(format!("chain of degree {} paired with a degree {d} cochain", c.degree())));
    }
    Ok(())
}

/// `Σ |coeff| · Π max(|m_i|, 1)` over the monomial words of a chain: the
/// natural size of an operator-side cochain value.
pub fn cochain_scale(c: &LambdaChain) -> f64 {
    c.terms()
        .map(|(w, k)| k.norm() * w.iter().map(|m| m[0].unsigned_abs().max(1) as f64).product::<f64>())
        .sum()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleRow {
    pub b: ComplexWire,
    /// `cochain_a` at each window of the sweep.
    pub a: Vec<ComplexWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub guard: usize,
    pub kappa_mean: ComplexWire,
    pub kappa_spread: f64,
    pub cycles_used: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioReport {
    pub cycles: Vec<CycleRow>,
    pub windows: Vec<WindowRow>,
    /// Largest change of the mean ratio between consecutive windows.
    pub kappa_drift: f64,
    /// `|κ − 1|` at the last window.
    pub deviation_from_one: f64,
}

impl RatioReport {
    pub fn kappa(&self) -> C64 {
        self.windows.last().map(|w| w.kappa_mean.into()).unwrap_or_default()
    }
}

/// Ratio statistics of `cochain_a / cochain_b` over cycles and windows (circle only).
pub fn compare_ab(cycles: &[LambdaChain], windows: &[WindowSpec]) -> Result<RatioReport> {
    let k = CocycleConstants::new(1)?;
    for c in cycles {
        if !boundary_b(c).is_zero() {
            return Err(Error::NotACycle);
        }
    }
    let bs = cycles.iter().map(|c| cochain_b(c, 1)).collect::<Result<Vec<_>>>()?;
    let used: Vec<usize> = (0..cycles.len()).filter(|&i| bs[i].norm() > DENOMINATOR_FLOOR).collect();
    if used.is_empty() {
        return Err(Error::DegenerateComparison);
    }
    let a_by_window: Vec<Vec<C64>> = windows
        .par_iter()
        .map(|w| cycles.iter().map(|c| cochain_a(c, w, &k)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(windows.len());
    for (w, a) in windows.iter().zip(&a_by_window) {
        let kappas: Vec<C64> = used.iter().map(|&i| a[i] / bs[i]).collect();
        let mean = kappas.iter().sum::<C64>() / kappas.len() as f64;
        let mut spread = 0.0f64;
        for x in &kappas {
            for y in &kappas {
                spread = spread.max((x - y).norm());
            }
        }
        rows.push(WindowRow {
            n: w.n(),
            guard: w.guard(),
            kappa_mean: mean.into(),
            kappa_spread: spread,
            cycles_used: kappas.len(),
        });
    }
    let kappa_drift = rows
        .windows(2)
        .map(|p| (Complex64::from(p[0].kappa_mean) - Complex64::from(p[1].kappa_mean)).norm())
        .fold(0.0, f64::max);
    let deviation_from_one =
        rows.last().map(|r| (Complex64::from(r.kappa_mean) - 1.0).norm()).unwrap_or(f64::NAN);
    let cycles = (0..cycles.len())
        .map(|i| CycleRow { b: bs[i].into(), a: a_by_window.iter().map(|a| a[i].into()).collect() })
        .collect();
    Ok(RatioReport { cycles, windows: rows, kappa_drift, deviation_from_one })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const I: C64 = C64 { re: 0.0, im: 1.0 };
    const ONE: C64 = C64 { re: 1.0, im: 0.0 };

    fn win(n: usize, guard: usize) -> WindowSpec {
        WindowSpec::new(n, guard).unwrap()
    }

    fn pair(a: i64, b: i64) -> LambdaChain {
        let mut c = LambdaChain::new(1, 1);
        c.add_word(&[TrigPoly::e1(a), TrigPoly::e1(b)], ONE).unwrap();
        c
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Entries `(n + m, n)` of `[F, M_{e_m}]` are `F(n+m) − F(n)`; the trace
    /// of `F[F,e_a][F,e_b]` is a finite sum over the modes that cross 0|1.
    fn crossing_trace(a: i64, b: i64) -> C64 {
        let f = |n: i64| if n >= 1 { 1.0 } else { -1.0 };
        if a + b != 0 {
            return C64::new(0.0, 0.0);
        }
        let mut t = 0.0;
        for n in -40..=40 {
            // row n of F [F,e_a] [F,e_b] at column n: n → n+b → n+b+a = n
            t += f(n) * (f(n) - f(n + b)) * (f(n + b) - f(n));
        }
        C64::new(t, 0.0)
    }

    #[test]
    fn constants() {
        let k1 = CocycleConstants::new(1).unwrap();
        assert_eq!((k1.c_phi, k1.c_a), (ONE, C64::new(-4.0, 0.0)));
        let k3 = CocycleConstants::new(3).unwrap();
        assert!(close(k3.c_phi, C64::new(-6.0, 0.0) / (2.0 * PI * I), 1e-15));
        assert!(close(k3.c_a, C64::new(-96.0, 0.0) / (2.0 * PI * I), 1e-13));
        assert!(CocycleConstants::new(2).is_err());
    }

    #[test]
    fn b_dirac_blocks() {
        let w = win(16, 4);
        let one = b_dirac(&TrigPoly::one(1), &w).unwrap();
        assert_eq!(one.a12.max_abs(), 0.0);
        assert_eq!(one.a21.max_abs(), 0.0);
        let id = one.a11.add(&one.a22).unwrap();
        assert_eq!(id.sub(&TruncOp::identity(w)).unwrap().max_abs(), 0.0);

        let e1 = b_dirac(&TrigPoly::e1(1), &w).unwrap();
        let support = |op: &TruncOp| -> Vec<(i64, i64)> {
            (-16..=16)
                .flat_map(|m| (-16..=16).map(move |n| (m, n)))
                .filter(|&(m, n)| op.entry(m, n) != C64::new(0.0, 0.0))
                .collect()
        };
        // e₁ moves mode 0 across to mode 1 and nothing back
        assert_eq!(support(&e1.a12), vec![(1, 0)]);
        assert!(support(&e1.a21).is_empty());
        let sum = b_dirac(&(&TrigPoly::e1(1) + &TrigPoly::e1(-2)), &w).unwrap();
        let parts = e1.add(&b_dirac(&TrigPoly::e1(-2), &w).unwrap()).unwrap();
        assert_eq!(sum.offdiag().unwrap().sub(&parts.offdiag().unwrap()).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn phi_examples() {
        let w = win(64, 16);
        let k = CocycleConstants::new(1).unwrap();
        let diag = b_dirac(&TrigPoly::one(1), &w).unwrap();
        let e = b_dirac(&TrigPoly::e1(3), &w).unwrap();
        assert_eq!(phi_d_eval(&[diag, e.clone()], &k).unwrap(), C64::new(0.0, 0.0));
        for m in 1..=5 {
            let a = b_dirac(&TrigPoly::e1(-m), &w).unwrap();
            let b = b_dirac(&TrigPoly::e1(m), &w).unwrap();
            // offdiag = F[F,M]/2, so φ₁ = −Tr(F[F,a][F,b])/4
            let want = -crossing_trace(-m, m) / 4.0;
            assert!(close(phi_d_eval(&[a.clone(), b.clone()], &k).unwrap(), want, 1e-12));
            let scaled = phi_d_eval(&[a.scale(C64::new(2.0, -1.0)), b], &k).unwrap();
            assert!(close(scaled, want * C64::new(2.0, -1.0), 1e-12));
        }
        let other = b_dirac(&TrigPoly::e1(1), &win(32, 8)).unwrap();
        assert_eq!(phi_d_eval(&[e.clone(), other], &k).unwrap_err(), Error::WindowMismatch);
        assert!(phi_d_eval(&[e], &k).is_err());
    }

    #[test]
    fn cochain_a_examples() {
        let w = win(64, 16);
        let k = CocycleConstants::new(1).unwrap();
        for m in 1..=6 {
            let got = cochain_a(&pair(-m, m), &w, &k).unwrap();
            assert!(close(got, k.c_a * crossing_trace(-m, m), 1e-12));
            assert!(close(got, C64::new(-16.0 * m as f64, 0.0), 1e-12));
        }
        assert_eq!(cochain_a(&pair(0, 3), &w, &k).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(cochain_a(&pair(2, 3), &w, &k).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn cochain_b_examples() {
        assert!(close(cochain_b(&pair(-1, 1), 1).unwrap(), 2.0 * PI * I, 1e-15));
        assert_eq!(cochain_b(&pair(0, 4), 1).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(cochain_b(&pair(4, 0), 1).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(cochain_b(&pair(-1, 1), 3).unwrap_err(), Error::UnsupportedDimension(3));
    }

    #[test]
    fn ratio_is_constant_over_monomial_cycles() {
        let cycles: Vec<LambdaChain> = (1..=8).map(|m| pair(-m, m)).collect();
        let r = compare_ab(&cycles, &[win(128, 32), win(256, 32)]).unwrap();
        let kappa = r.kappa();
        assert!(close(kappa, C64::new(0.0, 8.0 / PI), 1e-12));
        assert!(r.windows.iter().all(|w| w.kappa_spread <= 1e-12));
        assert!(r.kappa_drift <= 1e-12);
        let s = serde_json::to_value(&r).unwrap();
        assert!(s["windows"][0]["N"].is_number() && s["cycles"].is_array());
    }

    #[test]
    fn degenerate_comparison() {
        let zero = LambdaChain::new(1, 1);
        assert_eq!(compare_ab(&[zero, pair(0, 2)], &[win(32, 8)]).unwrap_err(), Error::DegenerateComparison);
    }

    #[test]
    fn phi_matches_cochain_a_up_to_the_block_factor() {
        let w = win(64, 16);
        let k = CocycleConstants::new(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f0 = TrigPoly::random(&mut rng, 1, 4, 5, 1.0);
        let f1 = TrigPoly::random(&mut rng, 1, 4, 5, 1.0);
        let mut c = LambdaChain::new(1, 1);
        c.add_word(&[f0.clone(), f1.clone()], ONE).unwrap();
        let phi = phi_d_eval(&[b_dirac(&f0, &w).unwrap(), b_dirac(&f1, &w).unwrap()], &k).unwrap();
        let a = cochain_a(&c, &w, &k).unwrap();
        // c_a = −4 and φ₁ = −Tr(F[F,·][F,·])/4
        assert!(close(a, phi * 16.0, 1e-9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn cochain_a_vanishes_on_boundaries(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = LambdaChain::random(&mut rng, 2, 3, 4, 1.0);
            let bc = boundary_b(&c);
            let k = CocycleConstants::new(1).unwrap();
            let v = cochain_a(&bc, &win(128, 32), &k).unwrap();
            prop_assert!(v.norm() <= 1e-9 * (1.0 + cochain_scale(&bc)));
        }

        #[test]
        fn cochain_a_is_cyclic(a in -6i64..=6, b in -6i64..=6) {
            let k = CocycleConstants::new(1).unwrap();
            let w = win(64, 16);
            let mut ab = LambdaChain::new(1, 1);
            ab.add_monomial(vec![[a, 0, 0], [b, 0, 0]], ONE);
            let mut cache = CommutatorCache::new(w);
            let t_ab = cache.word_trace(&[[a, 0, 0], [b, 0, 0]]).unwrap();
            let t_ba = cache.word_trace(&[[b, 0, 0], [a, 0, 0]]).unwrap();
            prop_assert!(close(t_ab, -t_ba, 1e-12));
            let _ = cochain_a(&ab, &w, &k).unwrap();
        }
    }
}
