//! Cup product of two units in degree-one Deligne cohomology, evaluated on
//! the circle through an arc cover and compared with the closed form.

use regulab::deligne::{cup, evaluate, pairing_closed_form, unit_to_deligne, ArcCover};
use regulab::{TrigPoly, UnitFunction, C64};

fn main() -> regulab::Result<()> {
    let u1 = UnitFunction::new(vec![2], TrigPoly::from_terms(1, [([1, 0, 0], C64::new(0.2, -0.1)), ([3, 0, 0], C64::new(0.1, 0.0))]))?;
    let u2 = UnitFunction::new(vec![-1], TrigPoly::from_terms(1, [([-3, 0, 0], C64::new(0.1, 0.05)), ([0, 0, 0], C64::new(0.0, 0.3))]))?;

    let closed = pairing_closed_form(&u1, &u2)?;
    println!("closed form      {:.12}", closed.rep());
    let mut cover = ArcCover::uniform(4)?;
    for _ in 0..4 {
        let x = unit_to_deligne(&u1, &cover)?;
        let y = unit_to_deligne(&u2, &cover)?;
        let c = cup(&x, &y)?;
        let v = evaluate(&c)?;
        println!(
            "{:>3} arcs  transitions {:?}  value {:.12}  dist {:.1e}",
            cover.m(),
            x.transition_ints(),
            v.rep(),
            v.dist(&closed)
        );
        cover = cover.refine();
    }
    Ok(())
}
