//! The Dirac-side invariant of flat bundles on the circle, as a value in C/Z.

use regulab::dirac::{ahat_circle, rho_dirac, GradedBundle};
use regulab::forms::{PeriodicFamily, Truncation};
use regulab::C64;

fn main() -> regulab::Result<()> {
    let zero = PeriodicFamily::<C64>::new(1, Truncation::None);
    let trivial = GradedBundle::line(C64::new(1.0, 0.0))?;
    let twisted = GradedBundle::line(C64::new(0.0, 1.0))?;
    let v = C64::from_polar(1.0, 0.7);
    let pair = GradedBundle::new(vec![(v, 1), (v, -1)])?;

    for (name, b) in [("trivial", &trivial), ("holonomy i", &twisted), ("graded pair", &pair)] {
        println!("{name:>12}: {:.6}", rho_dirac(b, &zero)?.rep().re);
    }
    let sum = trivial.direct_sum(&twisted);
    println!("  direct sum: {:.6} (additive)", rho_dirac(&sum, &zero)?.rep().re);
    // the A-hat family of the circle is trivial, so pairing against it changes nothing
    println!("  with A-hat: {:.6}", rho_dirac(&trivial, &ahat_circle::<C64>())?.rep().re);
    Ok(())
}
