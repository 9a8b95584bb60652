//! Cyclic chains of trigonometric polynomials, the total differential and
//! the map to periodic de Rham families.

use regulab::cyclic::{boundary_b, lambda_project, pi_d_iso, pi_dd, total_differential, CyclicChain, LambdaChain};
use regulab::{RationalTau, Scalar, TrigPoly};

fn main() -> regulab::Result<()> {
    let r = |re| RationalTau::gaussian(re, 0);
    let e = |a: i64, b: i64| TrigPoly::monomial(2, &[a, b], r(1));

    let mut c = CyclicChain::new(2, 2);
    c.add_word(&[e(1, 1), e(-1, 0), e(0, -1)], r(1))?;
    c.add_word(&[e(2, 0)], r(3))?;
    let dc = total_differential(&c)?;
    println!("D c has {} words", dc.terms().count());
    println!("D D c   = 0: {}", total_differential(&dc)?.is_zero());
    println!("pi(D c) = d pi(c): {}", pi_dd(&dc)?.sub(&pi_dd(&c)?.differential())?.is_zero());
    for (p, w) in pi_dd(&c)?.entries() {
        println!("pi(c) at p = {p}: {w}");
    }

    let lam = lambda_project(&c);
    println!("lambda part has {} words, b b = 0: {}", lam.len(), boundary_b(&boundary_b(&lam)).is_zero());

    // u⁻¹v⁻¹ ⊗ u ⊗ v − u⁻¹v⁻¹ ⊗ v ⊗ u is a cycle; its class is the volume form
    let mut z = CyclicChain::new(2, 2);
    z.add_word(&[e(-1, -1), e(1, 0), e(0, 1)], r(1))?;
    z.add_word(&[e(-1, -1), e(0, 1), e(1, 0)], r(-1))?;
    println!("z is a cycle: {}", boundary_b(&lambda_project(&z)).is_zero());
    for (p, w) in pi_dd(&z)?.entries() {
        println!("pi(z) at p = {p}: {w}");
    }

    // on the circle, e_{-1} ⊗ e_1 represents 2πi dt in HP^{-1}
    let e1 = |k: i64| TrigPoly::monomial(1, &[k], r(1));
    let mut y = CyclicChain::new(1, 1);
    y.add_word(&[e1(-1), e1(1)], r(1))?;
    for (p, w) in pi_d_iso(&y, 1)?.rep().entries() {
        println!("pi_d(y) at p = {p}: {w}");
    }

    let mut l = LambdaChain::new(1, 2);
    l.add_word(&[TrigPoly::monomial(1, &[1], r(1)), TrigPoly::monomial(1, &[2], r(1)), TrigPoly::monomial(1, &[-3], r(1))], r(1))?;
    for (word, c) in boundary_b(&l).terms() {
        println!("b(l) term {:?} coeff {}", word.iter().map(|m| m[0]).collect::<Vec<_>>(), c.to_complex());
    }
    Ok(())
}
