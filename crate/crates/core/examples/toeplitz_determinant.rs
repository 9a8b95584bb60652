//! Determinant of the multiplicative commutator `T_{u1} T_{u2} T_{u1}⁻¹ T_{u2}⁻¹`
//! for zero-winding symbols, compared with `exp((1/2πi) ∫ g₁ dg₂)` and with
//! the Deligne pairing.

use regulab::deligne::{pairing_cech, ArcCover};
use regulab::operators::{det_mult_commutator, WindowSpec};
use regulab::{TrigPoly, UnitFunction, C64};

fn main() -> regulab::Result<()> {
    let g1 = TrigPoly::from_terms(1, [([1, 0, 0], C64::new(0.3, 0.0)), ([-2, 0, 0], C64::new(0.0, 0.1))]);
    let g2 = TrigPoly::from_terms(1, [([-1, 0, 0], C64::new(0.2, 0.1)), ([2, 0, 0], C64::new(0.1, 0.0))]);
    let (u1, u2) = (UnitFunction::exp_of(g1.clone()), UnitFunction::exp_of(g2.clone()));

    // (1/2πi) ∫ g₁ dg₂ = Σ k ĝ₁(−k) ĝ₂(k)
    let log: C64 = g2.terms().map(|(n, c)| g1.coeff(&[-n[0]]) * c * n[0] as f64).sum();
    let cech = pairing_cech(&u1, &u2, &ArcCover::uniform(8)?)?;
    println!("exp of log integral   {:.12}", log.exp());
    println!("exp(2 pi i <u1, u2>)  {:.12}", cech.exp_2pi_i());
    for n in [48, 64, 128, 256] {
        let det = det_mult_commutator(&u1, &u2, &WindowSpec::new(n, 32)?)?;
        println!("N = {n:>3}  det {det:.12}  err {:.2e}", (det - log.exp()).norm());
    }
    Ok(())
}
