//! On the circle: the regulator of `exp(f) ∪ u`, exponentiated, against the
//! Toeplitz determinant invariant, with the global sign fitted once.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regulab::operators::{det_mult_commutator, WindowSpec};
use regulab::regulator::{sigma_eval, ProductClass};
use regulab::{CZValue, TrigPoly, UnitFunction};

fn main() -> regulab::Result<()> {
    let w = WindowSpec::new(256, 64)?;
    let exp_sigma = |f: &TrigPoly, u: &UnitFunction, s: f64| -> regulab::Result<_> {
        let sigma = sigma_eval(&ProductClass::new(f.clone(), vec![u.clone()])?)?;
        Ok(CZValue::reduce(sigma.rep() * s)?.exp_2pi_i())
    };

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = TrigPoly::random(&mut rng, 1, 2, 2, 0.3);
    let u = UnitFunction::exp_of(TrigPoly::random(&mut rng, 1, 2, 2, 0.3));
    let det = det_mult_commutator(&UnitFunction::exp_of(f.clone()), &u, &w)?;
    let errs = [1.0, -1.0].map(|s| exp_sigma(&f, &u, s).map(|v| (v - det).norm()));
    let (ep, em) = (errs[0].clone()?, errs[1].clone()?);
    let s = if ep < em { 1.0 } else { -1.0 };
    println!("calibration: err(+1) {ep:.2e}  err(-1) {em:.2e}  -> s = {s}");

    for i in 0..5 {
        let f = TrigPoly::random(&mut rng, 1, 4, 4, 0.15);
        let u = UnitFunction::exp_of(TrigPoly::random(&mut rng, 1, 4, 4, 0.15));
        let det = det_mult_commutator(&UnitFunction::exp_of(f.clone()), &u, &w)?;
        let lhs = exp_sigma(&f, &u, s)?;
        println!("input {i}: exp(2 pi i s sigma) {lhs:.10}  det {det:.10}  err {:.1e}", (lhs - det).norm());
    }
    Ok(())
}
