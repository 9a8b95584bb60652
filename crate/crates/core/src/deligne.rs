//! Čech–Deligne cohomology of the circle over arc covers.
//!
//! A unit `u` gives the degree-1 class `(ℓ_i, n_ij)` with `ℓ_i` a branch of
//! `(1/2πi) log u` on arc `i` and `n_ij = ℓ_i − ℓ_j` on overlaps. The cup of
//! `x = (ℓ, n)` and `y = (λ, m)` is
//!
//! ```text
//!     ω_i = ℓ_i dλ_i,    f_ij = n_ij λ_j,    (n_ij m_jk: no triple overlaps)
//! ```
//!
//! which satisfies `ω_i − ω_j = df_ij`. A class is evaluated by cutting the
//! circle at one point `p_j` per overlap:
//! `Σ_i ∫_{p_i}^{p_{i+1}} ω_i − Σ_j f_{j−1,j}(p_j)` mod ℤ.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::cz::CZValue;
use crate::error::{Error, Result};
use crate::fourier::{TrigPoly, UnitFunction};
use crate::scalar::C64;

const TWO_PI_I: C64 = C64 { re: 0.0, im: 2.0 * PI };
const H1_TOL: f64 = 1e-10;
const H2_TOL: f64 = 1e-9;
const OVERLAP_SAMPLES: usize = 16;
const BRANCH_SAMPLES: usize = 128;
const PANELS: usize = 8;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(24).unwrap()))
}

/// Composite Gauss–Legendre integral of a complex function over `[a, b]`.
fn integrate(a: f64, b: f64, f: impl Fn(f64) -> C64) -> C64 {
    let h = (b - a) / PANELS as f64;
    let mut total = C64::new(0.0, 0.0);
    for k in 0..PANELS {
        let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        for &(x, w) in rule().as_node_weight_pairs() {
            total += f(0.5 * ((hi - lo) * x + hi + lo)) * (0.5 * (hi - lo) * w);
        }
    }
    total
}

/// `m ≥ 3` arcs determined by increasing cut points in `[0, 1)`. Arc `i`
/// runs from just before cut `i` to just after cut `i+1`; neighbouring arcs
/// overlap in a small interval around each cut and no three arcs meet.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcCover {
    cuts: Vec<f64>,
}

impl ArcCover {
    pub fn new(cuts: Vec<f64>) -> Result<Self> {
        if cuts.len() < 3 {
            return Err(Error::BadCover(format!("need at least 3 arcs, got {}", cuts.len())));
        }
        if cuts.iter().any(|c| !(0.0..1.0).contains(c)) {
            return Err(Error::BadCover("cut points must lie in [0, 1)".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadCover("cut points must be strictly increasing".into()));
        }
        Ok(Self { cuts })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        Self::new((0..m).map(|k| k as f64 / m as f64).collect())
    }

    pub fn m(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    /// Adds the midpoint between each pair of consecutive cuts.
    pub fn refine(&self) -> Self {
        let m = self.m();
        let mut cuts = Vec::with_capacity(2 * m);
        for j in 0..m {
            cuts.push(self.cut(j));
            cuts.push(0.5 * (self.cut(j) + self.cut(j + 1)));
        }
        let mut cuts: Vec<f64> = cuts.into_iter().map(|c| c.rem_euclid(1.0)).collect();
        cuts.sort_by(f64::total_cmp);
        Self { cuts }
    }

    /// Cut `j` on the real line, `cut(j + m) = cut(j) + 1`.
    fn cut(&self, j: usize) -> f64 {
        let m = self.m();
        self.cuts[j % m] + (j / m) as f64
    }

    fn half_width(&self, j: usize) -> f64 {
        let m = self.m();
        let j = j % m;
        let before = self.cut(j + m) - self.cut(j + m - 1);
        let after = self.cut(j + 1) - self.cut(j);
        0.25 * before.min(after)
    }

    /// Arc `i` as an interval of the real line.
    pub fn arc(&self, i: usize) -> (f64, f64) {
        (self.cut(i) - self.half_width(i), self.cut(i + 1) + self.half_width(i + 1))
    }

    /// Overlap of arcs `j − 1` and `j` (indices mod m).
    pub fn overlap(&self, j: usize) -> (f64, f64) {
        let h = self.half_width(j);
        (self.cut(j) - h, self.cut(j) + h)
    }
}

#[derive(Serialize, Deserialize)]
struct CoverWire {
    m: usize,
    cuts: Vec<f64>,
}

impl Serialize for ArcCover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoverWire { m: self.m(), cuts: self.cuts.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArcCover {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = CoverWire::deserialize(d)?;
        if w.m != w.cuts.len() {
            return Err(D::Error::custom(format!("m = {} but {} cuts given", w.m, w.cuts.len())));
        }
        ArcCover::new(w.cuts).map_err(D::Error::custom)
    }
}

/// Degree-1 Deligne class of a unit on an arc cover.
#[derive(Debug, Clone)]
pub struct DeligneH1 {
    cover: ArcCover,
    unit: UnitFunction,
    dlog_part: TrigPoly,
    /// `(t_i, u(t_i), ℓ_i(t_i))` at the arc midpoints.
    anchors: Vec<(f64, C64, C64)>,
    transitions: Vec<i64>,
}

impl DeligneH1 {
    pub fn cover(&self) -> &ArcCover {
        &self.cover
    }

    /// `n_{j−1,j}` on overlap `j`.
    pub fn transition_ints(&self) -> &[i64] {
        &self.transitions
    }

    /// Sum of the transition integers around the circle.
    pub fn winding(&self) -> i64 {
        self.transitions.iter().sum()
    }

    /// `ℓ_i(t)`, the branch of `(1/2πi) log u` on arc `i`.
    pub fn log(&self, i: usize, t: f64) -> C64 {
        let (_, u0, l0) = self.anchors[i % self.anchors.len()];
        l0 + (self.unit.eval(&[t]) / u0).ln() / TWO_PI_I
    }

    /// `dℓ/dt = (1/2πi) u'/u`, the same on every arc.
    pub fn dlog(&self, t: f64) -> C64 {
        C64::new(self.unit.winding()[0] as f64, 0.0) + self.dlog_part.eval(&[t]) / TWO_PI_I
    }
}

pub fn unit_to_deligne(u: &UnitFunction, cover: &ArcCover) -> Result<DeligneH1> {
    if u.dim() != 1 {
        return Err(Error::DimMismatch(u.dim(), 1));
    }
    let m = cover.m();
    let mut anchors = Vec::with_capacity(m);
    for i in 0..m {
        let (a, b) = cover.arc(i);
        let mid = 0.5 * (a + b);
        let u0 = u.eval(&[mid]);
        // the branch is the principal log of u/u(mid); it must not wrap on the arc
        let mut prev = None;
        for k in 0..=BRANCH_SAMPLES {
            let t = a + (b - a) * k as f64 / BRANCH_SAMPLES as f64;
            let arg = (u.eval(&[t]) / u0).arg();
            if arg.abs() > 0.9 * PI || prev.is_some_and(|p: f64| (arg - p).abs() > 0.5 * PI) {
                return Err(Error::BadCover(format!("arc {i} is too long for a single branch of log u")));
            }
            prev = Some(arg);
        }
        anchors.push((mid, u0, u0.ln() / TWO_PI_I));
    }
    let mut h = DeligneH1 {
        cover: cover.clone(),
        unit: u.clone(),
        dlog_part: u.logpart().derive(0)?,
        anchors,
        transitions: Vec::with_capacity(m),
    };
    for j in 0..m {
        let (a, b) = cover.overlap(j);
        let mut n = None;
        let mut residual = 0.0f64;
        for k in 0..OVERLAP_SAMPLES {
            let t = a + (b - a) * (k as f64 + 0.5) / OVERLAP_SAMPLES as f64;
            let diff = h.log(j + m - 1, t) - h.log(j, t);
            let r = diff.re.round();
            residual = residual.max((diff - r).norm());
            n.get_or_insert(r as i64);
        }
        if residual > H1_TOL {
            return Err(Error::NotACocycle(residual));
        }
        h.transitions.push(n.unwrap());
    }
    Ok(h)
}

/// Degree-2 class `x ∪ y`, with `ω_i = ℓ_i dλ_i` and `f_{j−1,j} = n_{j−1,j} λ_j`.
#[derive(Debug, Clone)]
pub struct DeligneH2 {
    x: DeligneH1,
    y: DeligneH1,
}

impl DeligneH2 {
    pub fn cover(&self) -> &ArcCover {
        &self.x.cover
    }

    /// Coefficient of `dt` in `ω_i`.
    pub fn omega(&self, i: usize, t: f64) -> C64 {
        self.x.log(i, t) * self.y.dlog(t)
    }

    /// `f_{j−1,j}` on overlap `j`.
    pub fn overlap_function(&self, j: usize, t: f64) -> C64 {
        self.x.transitions[j % self.cover().m()] as f64 * self.y.log(j, t)
    }

    /// Largest `|ω_{j−1} − ω_j − df_{j−1,j}|` over sample points of the overlaps.
    pub fn residual(&self) -> f64 {
        let m = self.cover().m();
        let mut worst = 0.0f64;
        for j in 0..m {
            let (a, b) = self.cover().overlap(j);
            let n = self.x.transitions[j] as f64;
            for k in 0..OVERLAP_SAMPLES {
                let t = a + (b - a) * (k as f64 + 0.5) / OVERLAP_SAMPLES as f64;
                let df = self.y.dlog(t) * n;
                worst = worst.max((self.omega(j + m - 1, t) - self.omega(j, t) - df).norm());
            }
        }
        worst
    }
}

pub fn cup(x: &DeligneH1, y: &DeligneH1) -> Result<DeligneH2> {
    if x.cover != y.cover {
        return Err(Error::CoverMismatch);
    }
    Ok(DeligneH2 { x: x.clone(), y: y.clone() })
}

/// Evaluation on the fundamental class, cutting at the cover's cut points.
pub fn evaluate(c: &DeligneH2) -> Result<CZValue> {
    let points: Vec<f64> = (0..c.cover().m()).map(|j| c.cover().cut(j)).collect();
    evaluate_at(c, &points)
}

/// Evaluation with cut point `points[j]` inside overlap `j`.
pub fn evaluate_at(c: &DeligneH2, points: &[f64]) -> Result<CZValue> {
    let cover = c.cover();
    let m = cover.m();
    if points.len() != m {
        return Err(Error::BadCover(format!("{} cut points for {m} overlaps", points.len())));
    }
    for (j, p) in points.iter().enumerate() {
        let (a, b) = cover.overlap(j);
        if !(a < *p && *p < b) {
            return Err(Error::BadCover(format!("cut point {p} is outside overlap {j}")));
        }
    }
    let residual = c.residual();
    if residual > H2_TOL {
        return Err(Error::NotACocycle(residual));
    }
    let mut total = C64::new(0.0, 0.0);
    for i in 0..m {
        let (a, b) = (points[i], if i + 1 < m { points[i + 1] } else { points[0] + 1.0 });
        total += integrate(a, b, |t| c.omega(i, t));
        total -= c.overlap_function(i, points[i]);
    }
    CZValue::reduce(total)
}

/// `⟨u₁ ∪ u₂⟩` through the Čech path.
pub fn pairing_cech(u1: &UnitFunction, u2: &UnitFunction, cover: &ArcCover) -> Result<CZValue> {
    evaluate(&cup(&unit_to_deligne(u1, cover)?, &unit_to_deligne(u2, cover)?)?)
}

/// `⟨u₁ ∪ u₂⟩` for `u_k = e^{2πi w_k t} exp(g_k)`, with `G_k = g_k/2πi`:
///
/// `w₁w₂/2 − w₁⟨G₂⟩ + w₂⟨G₁⟩ + ∫ G₁ dG₂` mod ℤ.
pub fn pairing_closed_form(u1: &UnitFunction, u2: &UnitFunction) -> Result<CZValue> {
    for u in [u1, u2] {
        if u.dim() != 1 {
            return Err(Error::DimMismatch(u.dim(), 1));
        }
    }
    let (w1, w2) = (u1.winding()[0] as f64, u2.winding()[0] as f64);
    let (g1, g2) = (u1.logpart(), u2.logpart());
    let mean = |g: &TrigPoly| g.coeff(&[0]) / TWO_PI_I;
    let mut cross = C64::new(0.0, 0.0);
    for (n, c) in g2.terms() {
        cross += g1.coeff(&[-n[0]]) * c * n[0] as f64;
    }
    let value = C64::new(0.5 * w1 * w2, 0.0) - mean(g2) * w1 + mean(g1) * w2 + cross / TWO_PI_I;
    CZValue::reduce(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(w: i64, g: TrigPoly) -> UnitFunction {
        UnitFunction::new(vec![w], g).unwrap()
    }

    fn random_unit(seed: u64, w: i64) -> UnitFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        unit(w, TrigPoly::random(&mut rng, 1, 3, 4, 0.15))
    }

    fn close(a: CZValue, b: CZValue, tol: f64) -> bool {
        a.dist(&b) <= tol
    }

    #[test]
    fn cover_validation_and_json() {
        assert!(ArcCover::uniform(2).is_err());
        assert!(ArcCover::new(vec![0.0, 0.5, 0.4]).is_err());
        assert!(ArcCover::new(vec![0.0, 0.5, 1.0]).is_err());
        let c = ArcCover::new(vec![0.1, 0.3, 0.8]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"m":3,"cuts":[0.1,0.3,0.8]}"#);
        assert_eq!(serde_json::from_str::<ArcCover>(&s).unwrap(), c);
        assert!(serde_json::from_str::<ArcCover>(r#"{"m":4,"cuts":[0.1,0.3,0.8]}"#).is_err());
        let fine = ArcCover::uniform(3).unwrap().refine();
        let six = ArcCover::uniform(6).unwrap();
        assert!(fine.cuts().iter().zip(six.cuts()).all(|(a, b)| (a - b).abs() < 1e-15));
        // overlaps sit inside both neighbouring arcs and no further
        for j in 0..3 {
            let (a, b) = c.overlap(j);
            let (p0, p1) = if j == 0 {
                let (x, y) = c.arc(2);
                (x - 1.0, y - 1.0)
            } else {
                c.arc(j - 1)
            };
            assert!(p0 <= a && b <= p1 + 1e-15);
            assert!(c.arc(j).0 <= a + 1e-15 && b <= c.arc(j).1);
        }
    }

    #[test]
    fn transition_integers() {
        let cover = ArcCover::uniform(3).unwrap();
        let x = unit_to_deligne(&UnitFunction::character(&[1]), &cover).unwrap();
        assert_eq!(x.winding(), 1);
        let y = unit_to_deligne(&unit(0, &TrigPoly::e1(1) + &TrigPoly::e1(-1)), &cover).unwrap();
        assert!(y.transition_ints().iter().all(|n| *n == 0));
        let z = unit_to_deligne(&random_unit(3, -2), &ArcCover::uniform(5).unwrap()).unwrap();
        assert_eq!(z.winding(), -2);
        let one = unit_to_deligne(&UnitFunction::constant(1, C64::new(1.0, 0.0)).unwrap(), &cover).unwrap();
        assert_eq!(evaluate(&cup(&one, &y).unwrap()).unwrap(), CZValue::ZERO);
        assert_eq!(evaluate(&cup(&y, &one).unwrap()).unwrap(), CZValue::ZERO);
    }

    #[test]
    fn coarse_cover_is_rejected() {
        let u = UnitFunction::character(&[4]);
        assert!(matches!(unit_to_deligne(&u, &ArcCover::uniform(3).unwrap()), Err(Error::BadCover(_))));
        assert!(unit_to_deligne(&u, &ArcCover::uniform(12).unwrap()).is_ok());
    }

    #[test]
    fn cover_mismatch() {
        let u = UnitFunction::character(&[1]);
        let a = unit_to_deligne(&u, &ArcCover::uniform(3).unwrap()).unwrap();
        let b = unit_to_deligne(&u, &ArcCover::uniform(4).unwrap()).unwrap();
        assert_eq!(cup(&a, &b).unwrap_err(), Error::CoverMismatch);
    }

    #[test]
    fn exp_units_match_the_integral() {
        let g = &TrigPoly::e1(1) + &TrigPoly::e1(-1);
        let u = UnitFunction::exp_of(g.clone());
        let cover = ArcCover::uniform(4).unwrap();
        assert!(close(pairing_cech(&u, &u, &cover).unwrap(), CZValue::ZERO, 1e-12));
        let g2 = TrigPoly::from_terms(1, [([2, 0, 0], C64::new(0.3, 0.1)), ([-1, 0, 0], C64::new(-0.2, 0.0))]);
        let g1 = TrigPoly::from_terms(1, [([-2, 0, 0], C64::new(0.5, 0.0)), ([1, 0, 0], C64::new(0.0, 0.4))]);
        // (1/(2πi)²) ∫ g₁ dg₂ = (1/2πi) Σ k ĝ₁(−k) ĝ₂(k)
        let want = (C64::new(0.5, 0.0) * C64::new(0.3, 0.1) * 2.0 + C64::new(0.0, 0.4) * C64::new(-0.2, 0.0) * -1.0)
            / TWO_PI_I;
        let (u1, u2) = (UnitFunction::exp_of(g1), UnitFunction::exp_of(g2));
        let want = CZValue::reduce(want).unwrap();
        assert!(close(pairing_cech(&u1, &u2, &cover).unwrap(), want, 1e-12));
        assert!(close(pairing_closed_form(&u1, &u2).unwrap(), want, 1e-15));
    }

    #[test]
    fn winding_pairs() {
        let cover = ArcCover::uniform(4).unwrap();
        let e = UnitFunction::character(&[1]);
        let half = CZValue::from_real(0.5).unwrap();
        assert!(close(pairing_cech(&e, &e, &cover).unwrap(), half, 1e-10));
        assert!(close(pairing_closed_form(&e, &e).unwrap(), half, 1e-15));
        let v = unit(0, &TrigPoly::e1(1) + &TrigPoly::e1(-1));
        assert!(close(pairing_cech(&e, &v, &cover).unwrap(), pairing_closed_form(&e, &v).unwrap(), 1e-10));
        assert!(close(pairing_cech(&v, &e, &cover).unwrap(), pairing_closed_form(&v, &e).unwrap(), 1e-10));
        let c = UnitFunction::constant(1, C64::new(0.6, 0.8)).unwrap();
        assert!(close(pairing_closed_form(&c, &v).unwrap(), CZValue::ZERO, 1e-15));
    }

    #[test]
    fn cut_points_do_not_matter() {
        let cover = ArcCover::new(vec![0.05, 0.3, 0.55, 0.8]).unwrap();
        let h = cup(
            &unit_to_deligne(&random_unit(11, 1), &cover).unwrap(),
            &unit_to_deligne(&random_unit(12, -1), &cover).unwrap(),
        )
        .unwrap();
        let base = evaluate(&h).unwrap();
        let moved: Vec<f64> = (0..4).map(|j| {
            let (a, b) = cover.overlap(j);
            a + 0.8 * (b - a)
        })
        .collect();
        assert!(close(evaluate_at(&h, &moved).unwrap(), base, 1e-12));
        assert!(evaluate_at(&h, &[0.0, 0.1, 0.2, 0.3]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn cech_matches_closed_form(s1 in 0u64..1000, s2 in 0u64..1000, w1 in -2i64..=2, w2 in -2i64..=2) {
            let (u1, u2) = (random_unit(s1, w1), random_unit(s2 + 5000, w2));
            let cover = ArcCover::uniform(8).unwrap();
            let cech = pairing_cech(&u1, &u2, &cover).unwrap();
            prop_assert!(close(cech, pairing_closed_form(&u1, &u2).unwrap(), 1e-10));
            let fine = pairing_cech(&u1, &u2, &cover.refine()).unwrap();
            prop_assert!(close(cech, fine, 1e-10));
        }

        #[test]
        fn bilinear(s in 0u64..1000, w in -1i64..=1, w2 in -1i64..=1) {
            let (u, u2, v) = (random_unit(s, w), random_unit(s + 1, w2), random_unit(s + 2, 1));
            let cover = ArcCover::uniform(8).unwrap();
            let lhs = pairing_cech(&u.mul(&u2).unwrap(), &v, &cover).unwrap();
            let rhs = pairing_cech(&u, &v, &cover).unwrap() + pairing_cech(&u2, &v, &cover).unwrap();
            prop_assert!(close(lhs, rhs, 1e-9));
        }

        #[test]
        fn antisymmetric_up_to_windings(s in 0u64..1000, w1 in -2i64..=2, w2 in -2i64..=2) {
            let (u, v) = (random_unit(s, w1), random_unit(s + 7, w2));
            let sum = pairing_closed_form(&u, &v).unwrap() + pairing_closed_form(&v, &u).unwrap();
            prop_assert!(close(sum, CZValue::ZERO, 1e-12));
            let cover = ArcCover::uniform(8).unwrap();
            let sum = pairing_cech(&u, &v, &cover).unwrap() + pairing_cech(&v, &u, &cover).unwrap();
            prop_assert!(close(sum, CZValue::ZERO, 1e-10));
        }
    }
}
