use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Report, Row, Scenario};
use crate::cocycle::{b_dirac, cochain_a, cochain_b, cochain_scale, compare_ab, phi_d_eval, CocycleConstants};
use crate::cyclic::{boundary_b, pi_dd, total_differential, CyclicChain, LambdaChain};
use crate::cz::CZValue;
use crate::deligne::{pairing_cech, pairing_closed_form, ArcCover};
use crate::dirac::{eta_xi_closed, eta_zeta_oracle, rho_dirac, CircleDirac, GradedBundle};
use crate::error::{Error, Result};
use crate::forms::{hp_representative, psi_project, shift, Form, PeriodicFamily, Truncation};
use crate::fourier::{TrigPoly, UnitFunction};
use crate::operators::{det_mult_commutator, toeplitz_index, WindowSpec};
use crate::regulator::{r_dirac_compose, sigma_eval, sigma_vanishing_extra_factor, ProductClass};
use crate::scalar::{RationalTau, Scalar, C64};

type R = RationalTau;

const I: C64 = C64 { re: 0.0, im: 1.0 };

pub(super) fn run(s: &Scenario) -> Result<Report> {
    match s.name.as_str() {
        "eta_closed_vs_zeta" => eta_closed_vs_zeta(s),
        "rho_flat_line_bundle" => rho_flat_line_bundle(s),
        "toeplitz_index_vs_winding" => toeplitz_index_vs_winding(s),
        "cocycle_ab_comparison" => cocycle_ab_comparison(s),
        "boundary_annihilation" => boundary_annihilation(s),
        "determinant_vs_deligne" => determinant_vs_deligne(s),
        "deligne_cech_vs_closed" => deligne_cech_vs_closed(s),
        "sigma2_vs_deligne" => sigma2_vs_deligne(s),
        "sigma2_vs_determinant" => sigma2_vs_determinant(s),
        "vanishing_extra_factor" => vanishing_extra_factor(s),
        "chain_map_pi" => chain_map_pi(s),
        "hp_shift_roundtrip" => hp_shift_roundtrip(s),
        "forms_structure" => forms_structure(s),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

fn echo<P: Serialize>(p: &P) -> Value {
    serde_json::to_value(p).expect("params serialize")
}

fn windows(s: &Scenario, guard: usize) -> Result<Vec<WindowSpec>> {
    if s.windows.is_empty() {
        return Err(Error::BadParams(format!("{} needs at least one window", s.name)));
    }
    s.windows.iter().map(|n| WindowSpec::new(*n, guard)).collect()
}

fn row_or_fail(label: String, n: Option<usize>, r: Result<Row>) -> Row {
    r.unwrap_or_else(|e| Row::failed(label, n, &e))
}

/// `e^{2πi w t} exp(g)` with a random perturbation `g`.
fn random_unit(rng: &mut ChaCha8Rng, w: i64, degree: i64, terms: usize, amplitude: f64) -> Result<UnitFunction> {
    UnitFunction::new(vec![w], TrigPoly::random(rng, 1, degree, terms, amplitude))
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct EtaParams {
    thetas: Vec<f64>,
}

impl Default for EtaParams {
    fn default() -> Self {
        Self { thetas: vec![PI / 6.0, PI / 3.0, PI / 2.0, PI, 1.5 * PI, 5.0 * PI / 3.0] }
    }
}

fn eta_closed_vs_zeta(s: &Scenario) -> Result<Report> {
    let p: EtaParams = s.parse_params()?;
    let mut rows = Vec::new();
    for theta in &p.thetas {
        let label = format!("theta={theta:.12}");
        rows.push(row_or_fail(
            label.clone(),
            None,
            CircleDirac::from_theta(*theta).and_then(|d| {
                let (closed, _) = eta_xi_closed(&d);
                Ok(Row::real(label, None, closed, eta_zeta_oracle(&d)?, &s.tolerance))
            }),
        ));
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RhoCase {
    label: String,
    bundle: GradedBundle,
    expected: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RhoParams {
    cases: Vec<RhoCase>,
}

impl Default for RhoParams {
    fn default() -> Self {
        let line = |v: C64| GradedBundle::line(v).expect("unit holonomy");
        Self {
            cases: vec![
                RhoCase { label: "trivial line".into(), bundle: line(C64::new(1.0, 0.0)), expected: 0.5 },
                RhoCase { label: "holonomy i".into(), bundle: line(I), expected: 0.25 },
                RhoCase {
                    label: "graded pair".into(),
                    bundle: GradedBundle::new(vec![(C64::from_polar(1.0, 0.7), 1), (C64::from_polar(1.0, 0.7), -1)])
                        .expect("unit holonomy"),
                    expected: 0.0,
                },
            ],
        }
    }
}

fn rho_flat_line_bundle(s: &Scenario) -> Result<Report> {
    let p: RhoParams = s.parse_params()?;
    let zero = PeriodicFamily::<C64>::new(1, Truncation::None);
    let rows = p
        .cases
        .iter()
        .map(|c| {
            row_or_fail(
                c.label.clone(),
                None,
                rho_dirac(&c.bundle, &zero)
                    .and_then(|v| Ok(Row::cz(c.label.clone(), None, v, CZValue::from_real(c.expected)?, &s.tolerance))),
            )
        })
        .collect();
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct IndexParams {
    windings: Vec<i64>,
    degree: i64,
    terms: usize,
    amplitude: f64,
    guard: usize,
    seed: u64,
}

impl Default for IndexParams {
    fn default() -> Self {
        Self { windings: vec![-3, -2, -1, 1, 2, 3], degree: 4, terms: 4, amplitude: 0.1, guard: 48, seed: 1 }
    }
}

fn toeplitz_index_vs_winding(s: &Scenario) -> Result<Report> {
    let p: IndexParams = s.parse_params()?;
    let ws = windows(s, p.guard)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let units = p
        .windings
        .iter()
        .map(|w| random_unit(&mut rng, *w, p.degree, p.terms, p.amplitude))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut signs = Vec::new();
    for w in &ws {
        for (u, wind) in units.iter().zip(&p.windings) {
            let label = format!("winding={wind}");
            let r = toeplitz_index(u, w).map(|index| {
                if *wind != 0 {
                    signs.push((index * wind).signum());
                }
                Row::real(label.clone(), Some(w.n()), index as f64, -wind as f64, &s.tolerance)
            });
            rows.push(row_or_fail(label, Some(w.n()), r));
        }
    }
    let consistent = signs.windows(2).all(|x| x[0] == x[1]);
    let mut constants = BTreeMap::new();
    constants.insert(
        "index_over_winding_sign".into(),
        if consistent && !signs.is_empty() { json!(signs[0]) } else { Value::Null },
    );
    Ok(Report::new(s, echo(&p), rows, constants))
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CocycleParams {
    monomials: i64,
    random: usize,
    max_mode: i64,
    guard: usize,
    seed: u64,
}

impl Default for CocycleParams {
    fn default() -> Self {
        Self { monomials: 8, random: 10, max_mode: 6, guard: 64, seed: 2 }
    }
}

/// `Σ_m c_m [e_{−m} ⊗ e_m]` with random complex `c_m`.
fn random_zero_degree_tensor(rng: &mut ChaCha8Rng, max_mode: i64) -> LambdaChain {
    let mut c = LambdaChain::new(1, 1);
    for m in 1..=max_mode {
        let coeff = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        c.add_monomial(vec![[-m, 0, 0], [m, 0, 0]], coeff);
    }
    c
}

fn cocycle_ab_comparison(s: &Scenario) -> Result<Report> {
    let p: CocycleParams = s.parse_params()?;
    let ws = windows(s, p.guard)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut cycles = Vec::new();
    for m in 1..=p.monomials {
        let mut c = LambdaChain::new(1, 1);
        c.add_word(&[TrigPoly::e1(-m), TrigPoly::e1(m)], C64::new(1.0, 0.0))?;
        cycles.push(c);
    }
    for _ in 0..p.random {
        cycles.push(random_zero_degree_tensor(&mut rng, p.max_mode));
    }
    let report = compare_ab(&cycles, &ws)?;
    let mut rows = Vec::new();
    for w in &report.windows {
        rows.push(Row::real("kappa spread across cycles", Some(w.n), w.kappa_spread, 0.0, &s.tolerance));
    }
    if ws.len() > 1 {
        let last = ws.last().map(|w| w.n());
        rows.push(Row::real("kappa drift across windows", last, report.kappa_drift, 0.0, &s.tolerance));
    }

    let k = CocycleConstants::new(1)?;
    let w0 = &ws[0];
    let phi = phi_d_eval(&[b_dirac(&TrigPoly::e1(-1), w0)?, b_dirac(&TrigPoly::e1(1), w0)?], &k)?;
    let phi_ratio = phi / cochain_b(&cycles[0], 1)?;

    let kappa = report.kappa();
    let mut constants = BTreeMap::new();
    constants.insert("kappa".into(), json!({"re": kappa.re, "im": kappa.im}));
    constants.insert("kappa_deviation_from_one".into(), json!(report.deviation_from_one));
    constants.insert("phi_over_cochain_b".into(), json!({"re": phi_ratio.re, "im": phi_ratio.im}));
    constants.insert("ratio_report".into(), serde_json::to_value(&report).expect("report serializes"));
    Ok(Report::new(s, echo(&p), rows, constants))
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BoundaryParams {
    chains: usize,
    degree: i64,
    terms: usize,
    amplitude: f64,
    guard: usize,
    seed: u64,
}

impl Default for BoundaryParams {
    fn default() -> Self {
        Self { chains: 20, degree: 3, terms: 4, amplitude: 1.0, guard: 64, seed: 3 }
    }
}

fn boundary_annihilation(s: &Scenario) -> Result<Report> {
    let p: BoundaryParams = s.parse_params()?;
    let ws = windows(s, p.guard)?;
    let k = CocycleConstants::new(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let chains: Vec<LambdaChain> =
        (0..p.chains).map(|_| boundary_b(&LambdaChain::random(&mut rng, 2, p.degree, p.terms, p.amplitude))).collect();
    let mut rows = Vec::new();
    for w in &ws {
        for (i, bc) in chains.iter().enumerate() {
            let label = format!("b(c_{i})");
            let r = cochain_a(bc, w, &k).map(|v| Row::vanishing(label.clone(), Some(w.n()), v, cochain_scale(bc), &s.tolerance));
            rows.push(row_or_fail(label, Some(w.n()), r));
        }
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DetParams {
    pairs: usize,
    degree: i64,
    terms: usize,
    amplitude: f64,
    guard: usize,
    arcs: usize,
    seed: u64,
}

impl Default for DetParams {
    fn default() -> Self {
        Self { pairs: 10, degree: 4, terms: 4, amplitude: 0.15, guard: 64, arcs: 8, seed: 4 }
    }
}

/// `(1/2πi) ∫ g₁ dg₂ = Σ_k k ĝ₁(−k) ĝ₂(k)`.
fn log_pairing(g1: &TrigPoly, g2: &TrigPoly) -> C64 {
    g2.terms().map(|(n, c)| g1.coeff(&[-n[0]]) * c * n[0] as f64).sum()
}

fn determinant_vs_deligne(s: &Scenario) -> Result<Report> {
    let p: DetParams = s.parse_params()?;
    let ws = windows(s, p.guard)?;
    let cover = ArcCover::uniform(p.arcs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let pairs: Vec<(TrigPoly, TrigPoly)> = (0..p.pairs)
        .map(|_| {
            let g1 = TrigPoly::random(&mut rng, 1, p.degree, p.terms, p.amplitude);
            (g1, TrigPoly::random(&mut rng, 1, p.degree, p.terms, p.amplitude))
        })
        .collect();
    let mut rows = Vec::new();
    for w in &ws {
        for (i, (g1, g2)) in pairs.iter().enumerate() {
            let (u1, u2) = (UnitFunction::exp_of(g1.clone()), UnitFunction::exp_of(g2.clone()));
            let label = format!("pair {i}: det vs exp of log integral");
            let det = det_mult_commutator(&u1, &u2, w);
            let r = det.clone().map(|d| Row::complex(label.clone(), Some(w.n()), d, log_pairing(g1, g2).exp(), &s.tolerance));
            rows.push(row_or_fail(label, Some(w.n()), r));
            let label = format!("pair {i}: det vs exp(2 pi i <u1 cup u2>)");
            let r = det.and_then(|d| {
                let cech = pairing_cech(&u1, &u2, &cover)?;
                Ok(Row::complex(label.clone(), Some(w.n()), d, cech.exp_2pi_i(), &s.tolerance))
            });
            rows.push(row_or_fail(label, Some(w.n()), r));
        }
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DeligneParams {
    pairs: usize,
    max_winding: i64,
    degree: i64,
    terms: usize,
    amplitude: f64,
    arcs: usize,
    seed: u64,
}

impl Default for DeligneParams {
    fn default() -> Self {
        Self { pairs: 20, max_winding: 2, degree: 3, terms: 4, amplitude: 0.15, arcs: 8, seed: 5 }
    }
}

fn deligne_cech_vs_closed(s: &Scenario) -> Result<Report> {
    let p: DeligneParams = s.parse_params()?;
    let cover = ArcCover::uniform(p.arcs)?;
    let fine = cover.refine();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut rows = Vec::new();
    for i in 0..p.pairs {
        let w1 = rng.gen_range(-p.max_winding..=p.max_winding);
        let w2 = rng.gen_range(-p.max_winding..=p.max_winding);
        let u1 = random_unit(&mut rng, w1, p.degree, p.terms, p.amplitude)?;
        let u2 = random_unit(&mut rng, w2, p.degree, p.terms, p.amplitude)?;
        let label = format!("pair {i} (windings {w1},{w2}): cech vs closed form");
        let coarse = pairing_cech(&u1, &u2, &cover);
        let r = coarse
            .clone()
            .and_then(|c| Ok(Row::cz(label.clone(), None, c, pairing_closed_form(&u1, &u2)?, &s.tolerance)));
        rows.push(row_or_fail(label, None, r));
        let label = format!("pair {i}: {} arcs vs {} arcs", cover.m(), fine.m());
        let r = coarse.and_then(|c| Ok(Row::cz(label.clone(), None, pairing_cech(&u1, &u2, &fine)?, c, &s.tolerance)));
        rows.push(row_or_fail(label, None, r));
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

fn sigma2_vs_deligne(s: &Scenario) -> Result<Report> {
    let p: DeligneParams = s.parse_params()?;
    let cover = ArcCover::uniform(p.arcs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed.wrapping_add(1));
    let mut rows = Vec::new();
    for i in 0..p.pairs {
        let f = TrigPoly::random(&mut rng, 1, p.degree, p.terms, p.amplitude);
        let w = rng.gen_range(-p.max_winding..=p.max_winding);
        let u = random_unit(&mut rng, w, p.degree, p.terms, p.amplitude)?;
        let label = format!("input {i} (winding {w})");
        let r = ProductClass::new(f.clone(), vec![u.clone()]).and_then(|x| {
            let sigma = sigma_eval(&x)?;
            let deligne = pairing_cech(&UnitFunction::exp_of(f), &u, &cover)?;
            Ok(Row::cz(label.clone(), None, sigma, deligne, &s.tolerance))
        });
        rows.push(row_or_fail(label, None, r));
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoremInput {
    f: TrigPoly,
    u: UnitFunction,
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct TheoremParams {
    calibration: TheoremInput,
    fixed: Vec<TheoremInput>,
    inputs: usize,
    degree: i64,
    terms: usize,
    amplitude: f64,
    guard: usize,
    seed: u64,
}

impl Default for TheoremParams {
    fn default() -> Self {
        let e = TrigPoly::<C64>::e1;
        let sym = (&e(1) + &e(-1)).scale(&C64::new(0.3, 0.0));
        Self {
            calibration: TheoremInput {
                f: sym.clone(),
                u: UnitFunction::exp_of((&e(1) - &e(-1)).scale(&C64::new(0.4, 0.0))),
            },
            fixed: vec![TheoremInput { f: sym, u: UnitFunction::exp_of(e(-2).scale(&C64::new(0.4, 0.0))) }],
            inputs: 10,
            degree: 4,
            terms: 4,
            amplitude: 0.15,
            guard: 64,
            seed: 7,
        }
    }
}

fn sigma2_vs_determinant(s: &Scenario) -> Result<Report> {
    let p: TheoremParams = s.parse_params()?;
    let ws = windows(s, p.guard)?;
    let w0 = &ws[0];
    let sigma_det = |f: &TrigPoly, u: &UnitFunction, w: &WindowSpec| -> Result<(CZValue, C64)> {
        let sigma = sigma_eval(&ProductClass::new(f.clone(), vec![u.clone()])?)?;
        Ok((sigma, det_mult_commutator(&UnitFunction::exp_of(f.clone()), u, w)?))
    };
    let (cal_sigma, cal_det) = sigma_det(&p.calibration.f, &p.calibration.u, w0)?;
    let err_for = |sign: f64| (CZValue::reduce(cal_sigma.rep() * sign).expect("finite").exp_2pi_i() - cal_det).norm();
    let (err_plus, err_minus) = (err_for(1.0), err_for(-1.0));
    if (err_plus - err_minus).abs() <= s.tolerance.abs_tol {
        return Err(Error::BadParams("calibration input does not distinguish the two signs".into()));
    }
    let sign: i8 = if err_plus < err_minus { 1 } else { -1 };

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut inputs: Vec<(String, TrigPoly, UnitFunction)> =
        vec![("calibration".into(), p.calibration.f.clone(), p.calibration.u.clone())];
    for (i, x) in p.fixed.iter().enumerate() {
        inputs.push((format!("fixed {i}"), x.f.clone(), x.u.clone()));
    }
    for i in 0..p.inputs {
        let f = TrigPoly::random(&mut rng, 1, p.degree, p.terms, p.amplitude);
        let g = TrigPoly::random(&mut rng, 1, p.degree, p.terms, p.amplitude);
        inputs.push((format!("random {i}"), f, UnitFunction::exp_of(g)));
    }
    let mut rows = Vec::new();
    for w in &ws {
        for (label, f, u) in &inputs {
            let r = sigma_det(f, u, w).map(|(sigma, det)| {
                let lhs = CZValue::reduce(sigma.rep() * sign as f64).expect("finite").exp_2pi_i();
                Row::complex(label.clone(), Some(w.n()), lhs, det, &s.tolerance)
            });
            rows.push(row_or_fail(label.clone(), Some(w.n()), r));
        }
    }
    let mut constants = BTreeMap::new();
    constants.insert("sign".into(), json!(sign));
    constants.insert("calibration_err_plus".into(), json!(err_plus));
    constants.insert("calibration_err_minus".into(), json!(err_minus));
    let flat = r_dirac_compose(cal_sigma, -sign);
    constants.insert("r_dirac_orientation".into(), json!(-sign));
    constants.insert("calibration_r_dirac".into(), json!({"re": flat.rep().re, "im": flat.rep().im}));
    Ok(Report::new(s, echo(&p), rows, constants))
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ExactParams {
    cases: usize,
    seed: u64,
}

impl Default for ExactParams {
    fn default() -> Self {
        Self { cases: 20, seed: 8 }
    }
}

fn exact_poly(rng: &mut ChaCha8Rng, dim: usize) -> TrigPoly<R> {
    let terms = rng.gen_range(1..=3);
    TrigPoly::random_exact(rng, dim, 2, terms, 2)
}

fn exact_form(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> Form<R> {
    let mut w = Form::zero(dim, degree);
    for _ in 0..2 {
        let mut axes = sample(rng, dim, degree).into_vec();
        axes.sort_unstable();
        let piece = Form::basis(exact_poly(rng, dim), &axes).expect("axes below dim");
        w = w.add(&piece).expect("same degree");
    }
    w
}

fn exact_cyclic_chain(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> CyclicChain<R> {
    let mut c = CyclicChain::new(dim, n);
    for len in (1..=n + 1).filter(|l| (l + n + 1) % 2 == 0) {
        let letters: Vec<TrigPoly<R>> = (0..len).map(|_| exact_poly(rng, dim)).collect();
        c.add_word(&letters, R::one()).expect("admissible length");
    }
    c
}

fn exact_family_residual(f: &PeriodicFamily<R>) -> f64 {
    f.to_complex().max_abs_coeff()
}

fn vanishing_extra_factor(s: &Scenario) -> Result<Report> {
    let p: ExactParams = s.parse_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut rows = Vec::new();
    for i in 0..p.cases {
        let dim = 1 + i % 3;
        let f = exact_poly(&mut rng, dim);
        let units: Vec<UnitFunction<R>> = (0..=dim)
            .map(|k| {
                let g = exact_poly(&mut rng, dim);
                if k % 2 == 0 {
                    UnitFunction::exp_of(g)
                } else {
                    let w: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
                    UnitFunction::character(&w).mul(&UnitFunction::exp_of(g)).expect("same dimension")
                }
            })
            .collect();
        let label = format!("case {i}: dim {dim}, {} units", units.len());
        rows.push(match sigma_vanishing_extra_factor(&f, &units) {
            Ok(w) => Row::exact(label, w.is_zero(), w.to_complex().max_abs_coeff()),
            Err(e) => Row::failed(label, None, &e),
        });
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

fn chain_map_pi(s: &Scenario) -> Result<Report> {
    let p: ExactParams = s.parse_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut rows = Vec::new();
    for i in 0..p.cases {
        let dim = 1 + i % 3;
        let n = 1 + (i / 3) % 3;
        let c = exact_cyclic_chain(&mut rng, dim, n);
        let label = format!("case {i}: dim {dim}, degree {n}");
        let r = total_differential(&c).and_then(|dc| {
            let lhs = pi_dd(&dc)?;
            let rhs = pi_dd(&c)?.differential();
            let diff = lhs.sub(&rhs)?;
            let dd = total_differential(&dc)?;
            Ok(Row::exact(label.clone(), diff.is_zero() && dd.is_zero(), exact_family_residual(&diff)))
        });
        rows.push(row_or_fail(label, None, r));
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

fn hp_shift_roundtrip(s: &Scenario) -> Result<Report> {
    let p: ExactParams = s.parse_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut rows = Vec::new();
    for i in 0..p.cases {
        let dim = 1 + i % 3;
        // closed family: harmonic parts plus exact parts
        let mut fam = PeriodicFamily::new(dim, Truncation::None);
        for deg in 0..=dim {
            let p_index = rng.gen_range(-1..=2i64);
            let mut w = Form::zero(dim, deg);
            let mut axes = sample(&mut rng, dim, deg).into_vec();
            axes.sort_unstable();
            let c = R::gaussian(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            w = w.add(&Form::basis(TrigPoly::constant(dim, c), &axes).expect("axes below dim")).expect("same degree");
            if deg > 0 {
                w = w.add(&exact_form(&mut rng, dim, deg - 1).exterior_d()).expect("same degree");
            }
            fam.insert(p_index, w)?;
        }
        let two_k = 2 * rng.gen_range(-2..=2i64);
        let label = format!("case {i}: dim {dim}, shift {two_k}");
        let r = (|| -> Result<Row> {
            let back = shift(&shift(&fam, two_k)?, -two_k)?;
            let round = back.sub(&fam)?;
            let hp_then_shift = hp_representative(&fam)?.shift(two_k)?;
            let shift_then_hp = hp_representative(&shift(&fam, two_k)?)?;
            let commute = hp_then_shift.rep().sub(shift_then_hp.rep())?;
            let psi = psi_project(&fam)?;
            let psi_again = psi_project(&psi.with_truncation(Truncation::None)?)?;
            let idempotent = psi.sub(&psi_again)?;
            let odd = matches!(shift(&fam, 1), Err(Error::OddShift(1)));
            let holds = round.is_zero() && commute.is_zero() && idempotent.is_zero() && odd;
            let residual = exact_family_residual(&round).max(exact_family_residual(&commute));
            Ok(Row::exact(label.clone(), holds, residual))
        })();
        rows.push(row_or_fail(label, None, r));
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}

fn forms_structure(s: &Scenario) -> Result<Report> {
    let p: ExactParams = s.parse_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut rows = Vec::new();
    for i in 0..p.cases {
        let dim = 1 + i % 3;
        let da = rng.gen_range(0..=dim);
        let db = rng.gen_range(0..=dim - da);
        let a = exact_form(&mut rng, dim, da);
        let b = exact_form(&mut rng, dim, db);
        let dd = a.exterior_d().exterior_d();
        rows.push(Row::exact(format!("case {i}: d∘d, dim {dim}"), dd.is_zero(), dd.to_complex().max_abs_coeff()));

        let label = format!("case {i}: Leibniz, degrees {da},{db}");
        let r = (|| -> Result<Row> {
            let lhs = a.wedge(&b)?.exterior_d();
            let sign = if da % 2 == 0 { R::one() } else { -R::one() };
            let rhs = a.exterior_d().wedge(&b)?.add(&a.wedge(&b.exterior_d())?.scale(&sign))?;
            let diff = lhs.sub(&rhs)?;
            Ok(Row::exact(label.clone(), diff.is_zero(), diff.to_complex().max_abs_coeff()))
        })();
        rows.push(row_or_fail(label, None, r));

        let n = 1 + i % 4;
        let letters: Vec<TrigPoly<R>> = (0..=n).map(|_| exact_poly(&mut rng, dim)).collect();
        let mut c = LambdaChain::new(dim, n);
        c.add_word(&letters, R::one())?;
        let bb = boundary_b(&boundary_b(&c));
        rows.push(Row::exact(format!("case {i}: b∘b, degree {n}"), bb.is_zero(), bb.to_complex().l1_norm()));
    }
    Ok(Report::new(s, echo(&p), rows, BTreeMap::new()))
}
