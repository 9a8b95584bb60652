//! Differential forms on tori, truncated and periodic families, the
//! periodicity shift and harmonic representatives.

use regulab::forms::{hp_representative, psi_project, shift, Form, PeriodicFamily, Truncation};
use regulab::{RationalTau, TrigPoly};

fn main() -> regulab::Result<()> {
    let r = |re, im| RationalTau::gaussian(re, im);
    let f = TrigPoly::from_terms(2, [([1, 0, 0], r(1, 0)), ([0, 2, 0], r(0, 1))]);
    let g = TrigPoly::from_terms(2, [([-1, 1, 0], r(2, 0))]);

    let a = Form::function(f.clone());
    let b = Form::function(g.clone()).exterior_d();
    println!("d f        = {}", a.exterior_d());
    println!("d d f = 0  : {}", a.exterior_d().exterior_d().is_zero());
    let lhs = a.wedge(&b)?.exterior_d();
    let rhs = a.exterior_d().wedge(&b)?;
    println!("Leibniz    : {}", lhs.sub(&rhs)?.is_zero());

    let mut fam = PeriodicFamily::new(2, Truncation::None);
    fam.insert(0, Form::function(TrigPoly::constant(2, r(3, 0))))?;
    fam.insert(1, Form::volume(2).add(&b.wedge(&Form::dt(2, 0)?)?)?)?;
    let hp = hp_representative(&fam)?;
    for (p, w) in hp.rep().entries() {
        println!("harmonic at p = {p}: {w}");
    }
    println!("shifted    = {:?}", shift(&fam, 2)?.entries().map(|(p, w)| (p, w.degree())).collect::<Vec<_>>());
    println!("psi        = {:?}", psi_project(&fam)?.entries().map(|(p, w)| (p, w.degree())).collect::<Vec<_>>());
    println!("odd shift  : {:?}", shift(&fam, 1).err());
    Ok(())
}
