//! Acceptance suite. Prints one line per criterion and exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regulab::operators::{det_mult_commutator, toeplitz_index, WindowSpec};
use regulab::verify::{run_scenario, Report, Scenario};
use regulab::{TolerancePolicy, TrigPoly, UnitFunction, C64};
use serde_json::json;

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn run(name: &str, windows: Option<Vec<usize>>, tol: Option<f64>) -> Report {
    let mut s = Scenario::new(name).expect("registered scenario");
    if let Some(w) = windows {
        s = s.with_windows(w);
    }
    if let Some(t) = tol {
        s = s.with_tolerance(TolerancePolicy::abs(t).unwrap());
    }
    run_scenario(&s).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn max_err(r: &Report) -> f64 {
    r.rows.iter().map(|x| x.abs_err).fold(0.0, f64::max)
}

fn summary(r: &Report) -> String {
    format!("{} rows, max err {:.3e}", r.rows.len(), max_err(r))
}

/// Fourier coefficients `û(k)`, `|k| ≤ band`, by a plain DFT on `m` samples.
fn dft(u: &UnitFunction, band: i64, m: usize) -> Vec<C64> {
    let samples: Vec<C64> = (0..m).map(|j| u.eval(&[j as f64 / m as f64])).collect();
    (-band..=band)
        .map(|k| {
            let s: C64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * k as f64 * j as f64 / m as f64))
                .sum();
            s / m as f64
        })
        .collect()
}

/// Null dimension of the tall section `(c(i − j))`, `0 ≤ i < n + extra`, `0 ≤ j < n`.
fn tall_null_dim(c: &[C64], band: i64, n: usize, extra: usize) -> usize {
    let a = DMatrix::from_fn(n + extra, n, |i, j| {
        let k = i as i64 - j as i64;
        if k.abs() <= band { c[(k + band) as usize] } else { C64::new(0.0, 0.0) }
    });
    a.singular_values().iter().filter(|s| **s < 1e-6).count()
}

/// Index of `T_u` from ranks of tall sections of `T_u` and `T_ū`.
fn brute_force_index(u: &UnitFunction, n: usize) -> i64 {
    let band = 40;
    let c = dft(u, band, 512);
    let c_adj: Vec<C64> = c.iter().rev().map(|z| z.conj()).collect();
    tall_null_dim(&c, band, n, 48) as i64 - tall_null_dim(&c_adj, band, n, 48) as i64
}

fn eval_terms(f: &TrigPoly, t: f64, derivative: bool) -> C64 {
    f.terms()
        .map(|(n, c)| {
            let k = n[0] as f64;
            let w = if derivative { C64::new(0.0, 2.0 * PI * k) } else { C64::new(1.0, 0.0) };
            c * w * C64::from_polar(1.0, 2.0 * PI * k * t)
        })
        .sum()
}

/// `(1/2πi) ∫₀¹ g₁ g₂' dt` by the trapezoid rule, exact for these degrees.
fn log_integral(g1: &TrigPoly, g2: &TrigPoly) -> C64 {
    let m = 64;
    let s: C64 = (0..m).map(|j| {
        let t = j as f64 / m as f64;
        eval_terms(g1, t, false) * eval_terms(g2, t, true)
    }).sum();
    s / m as f64 / C64::new(0.0, 2.0 * PI)
}

fn main() {
    let start = Instant::now();
    let mut lines = Vec::new();

    // 1
    let t0 = Instant::now();
    let r = run("eta_closed_vs_zeta", None, Some(1e-8));
    let secs = t0.elapsed().as_secs_f64();
    lines.push(Line {
        id: 1,
        name: "eta closed form vs zeta oracle (tol 1e-8, < 1 s)",
        pass: r.pass && r.rows.len() == 6 && secs < 1.0,
        detail: format!("{}, {secs:.3} s", summary(&r)),
    });

    // 2
    let r = run("rho_flat_line_bundle", None, Some(1e-12));
    let values: Vec<String> = r.rows.iter().map(|x| format!("{:.3}", x.lhs.re)).collect();
    lines.push(Line {
        id: 2,
        name: "rho of flat line bundles mod Z (tol 1e-12)",
        pass: r.pass && r.rows.len() == 3,
        detail: format!("values [{}], {}", values.join(", "), summary(&r)),
    });

    // 3
    let r = run("toeplitz_index_vs_winding", Some(vec![64, 128, 256]), None);
    let sign = r.constant("index_over_winding_sign").cloned().unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let w = WindowSpec::new(128, 48).unwrap();
    let mut oracle_ok = true;
    let mut oracle_cases = 0;
    for wind in [-3i64, -2, -1, 1, 2, 3] {
        let u = UnitFunction::new(vec![wind], TrigPoly::random(&mut rng, 1, 4, 4, 0.1)).unwrap();
        let lib = toeplitz_index(&u, &w).unwrap();
        let brute = brute_force_index(&u, 128);
        oracle_ok &= lib == brute && brute == -wind;
        oracle_cases += 1;
    }
    lines.push(Line {
        id: 3,
        name: "Toeplitz index = -winding, N in {64,128,256}, rank oracle",
        pass: r.pass && r.rows.len() == 18 && sign == json!(-1) && oracle_ok,
        detail: format!("{}, index/winding sign {sign}, rank oracle agrees on {oracle_cases} units: {oracle_ok}", summary(&r)),
    });

    // 4
    let r = run("cocycle_ab_comparison", Some(vec![256, 512]), Some(1e-6));
    let kappa = r.constant("kappa").cloned().unwrap_or_default();
    let dev = r.constant("kappa_deviation_from_one").cloned().unwrap_or_default();
    lines.push(Line {
        id: 4,
        name: "cochain ratio kappa: spread and drift N=256/512, B=64 (tol 1e-6)",
        pass: r.pass && r.rows.len() == 3,
        detail: format!("{}, kappa {kappa}, |kappa - 1| {dev}", summary(&r)),
    });

    // 5
    let r = run("boundary_annihilation", Some(vec![512]), Some(1e-6));
    lines.push(Line {
        id: 5,
        name: "cochain_a(b c) vanishes, 20 chains, N=512 (tol 1e-6 relative)",
        pass: r.pass && r.rows.len() == 20,
        detail: summary(&r),
    });

    // 6
    let r = run("determinant_vs_deligne", Some(vec![256]), Some(1e-6));
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let w = WindowSpec::new(256, 64).unwrap();
    let mut oracle_err = 0.0f64;
    for _ in 0..10 {
        let g1 = TrigPoly::random(&mut rng, 1, 4, 4, 0.15);
        let g2 = TrigPoly::random(&mut rng, 1, 4, 4, 0.15);
        let det = det_mult_commutator(&UnitFunction::exp_of(g1.clone()), &UnitFunction::exp_of(g2.clone()), &w).unwrap();
        oracle_err = oracle_err.max((det - log_integral(&g1, &g2).exp()).norm());
    }
    lines.push(Line {
        id: 6,
        name: "det of multiplicative commutator = exp of log integral, N=256 (tol 1e-6)",
        pass: r.pass && oracle_err <= 1e-6,
        detail: format!("{}, quadrature oracle max err {oracle_err:.3e}", summary(&r)),
    });

    // 7
    let r = run("deligne_cech_vs_closed", None, Some(1e-10));
    lines.push(Line {
        id: 7,
        name: "Deligne Cech pairing vs closed form and refinement, mod Z (tol 1e-10)",
        pass: r.pass && r.rows.len() >= 40,
        detail: summary(&r),
    });

    // 8
    let r = run("sigma2_vs_deligne", None, Some(1e-10));
    lines.push(Line {
        id: 8,
        name: "sigma_2 vs Deligne pairing mod Z, 20 inputs (tol 1e-10)",
        pass: r.pass && r.rows.len() == 20,
        detail: summary(&r),
    });

    // 9
    let r = run("sigma2_vs_determinant", Some(vec![256]), Some(1e-5));
    let s = r.constant("sign").cloned().unwrap_or_default();
    let random_rows = r.rows.iter().filter(|x| x.label.starts_with("random")).count();
    lines.push(Line {
        id: 9,
        name: "exp(2 pi i s sigma_2) = det, one fitted sign, N=256 (tol 1e-5)",
        pass: r.pass && random_rows == 10,
        detail: format!("{}, s = {s}", summary(&r)),
    });

    // 10
    let mut all = true;
    let mut parts = Vec::new();
    for name in ["forms_structure", "chain_map_pi", "hp_shift_roundtrip", "vanishing_extra_factor"] {
        let r = run(name, None, None);
        let exact = r.pass && r.rows.iter().all(|x| x.abs_err == 0.0);
        all &= exact;
        parts.push(format!("{name} {} rows err {}", r.rows.len(), max_err(&r)));
    }
    lines.push(Line { id: 10, name: "exact structural identities (error = 0)", pass: all, detail: parts.join("; ") });

    let total = start.elapsed().as_secs_f64();
    let mut ok = true;
    for l in &lines {
        ok &= l.pass;
        println!("criterion {:>2} {}: {} ({})", l.id, if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail);
    }
    let in_budget = total <= 300.0;
    ok &= in_budget;
    println!("wall time {}: {total:.1} s (budget 300 s)", if in_budget { "PASS" } else { "FAIL" });
    if !ok {
        std::process::exit(1);
    }
}
