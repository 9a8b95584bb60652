//! The cyclic cocycle of the circle Fredholm module on finite windows,
//! against the integral cochain `∫ f₀ df₁`.

use regulab::cocycle::{cochain_a, cochain_b, compare_ab, CocycleConstants};
use regulab::cyclic::{boundary_b, LambdaChain};
use regulab::operators::WindowSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regulab::C64;

fn main() -> regulab::Result<()> {
    let one = C64::new(1.0, 0.0);
    let cycles: Vec<LambdaChain> = (1..=4)
        .map(|m| {
            let mut c = LambdaChain::new(1, 1);
            c.add_monomial(vec![[-m, 0, 0], [m, 0, 0]], one);
            c
        })
        .collect();
    let windows = [WindowSpec::new(128, 32)?, WindowSpec::new(256, 32)?];
    let report = compare_ab(&cycles, &windows)?;
    for (m, row) in (1..).zip(&report.cycles) {
        let a: Vec<String> = row.a.iter().map(|z| format!("{:.6}", regulab::C64::from(*z))).collect();
        println!("m = {m}: cochain_b {:.6}  cochain_a per window [{}]", regulab::C64::from(row.b), a.join(", "));
    }
    println!("kappa {:.12}  drift {:.1e}  |kappa - 1| {:.6}", report.kappa(), report.kappa_drift, report.deviation_from_one);

    // coboundaries are annihilated
    let k = CocycleConstants::new(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = LambdaChain::random(&mut rng, 2, 3, 3, 1.0);
    let bc = boundary_b(&c);
    println!("cochain_a(b c) = {:.2e}", cochain_a(&bc, &windows[1], &k)?.norm());
    println!("cochain_b(b c) = {:.2e}", cochain_b(&bc, 1)?.norm());
    Ok(())
}
