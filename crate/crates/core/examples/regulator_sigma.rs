//! The regulator form of `f ∪ u₁ ∪ … ∪ u_d` and its integral mod Z, in exact
//! arithmetic over `Q(i)[2πi]` and in floating point.

use regulab::regulator::{reg_product_form, sigma_eval, sigma_integral, sigma_vanishing_extra_factor, ProductClass};
use regulab::{RationalTau, Scalar, TrigPoly, UnitFunction, C64};

fn main() -> regulab::Result<()> {
    let r = |re, im| RationalTau::gaussian(re, im);
    let f = TrigPoly::from_terms(2, [([1, 0, 0], r(1, 0)), ([0, -1, 0], r(0, 2))]);
    let u1 = UnitFunction::character(&[1, 0]);
    let u2 = UnitFunction::character(&[0, 1]).mul(&UnitFunction::exp_of(TrigPoly::from_terms(2, [([0, 1, 0], r(1, 1))])))?;
    let x = ProductClass::new(f.clone(), vec![u1.clone(), u2.clone()])?;
    println!("form     {}", reg_product_form(&x));
    println!("integral {:.12}", sigma_integral(&x)?.to_complex());
    println!("sigma    {}", sigma_eval(&x)?);

    // one unit too many for the dimension: the form vanishes identically
    let extra = UnitFunction::exp_of(TrigPoly::from_terms(2, [([1, 1, 0], r(3, 0))]));
    let w = sigma_vanishing_extra_factor(&f, &[u1, u2, extra])?;
    println!("three units on T^2 give zero: {}", w.is_zero());

    let y = ProductClass::new(
        TrigPoly::from_terms(1, [([1, 0, 0], C64::new(0.3, 0.0)), ([-2, 0, 0], C64::new(0.2, 0.0))]),
        vec![UnitFunction::new(vec![1], TrigPoly::from_terms(1, [([2, 0, 0], C64::new(0.0, 0.2))]))?],
    )?;
    println!("circle sigma {:.12}", sigma_eval(&y)?.rep());
    Ok(())
}
