//! Closed-form eta and reduced eta of the circle Dirac operator with
//! holonomy `e^{iθ}`, checked against Hurwitz zeta regularization.

use std::f64::consts::PI;

use regulab::dirac::{eta_xi_closed, eta_zeta_oracle, spectrum, CircleDirac};

fn main() -> regulab::Result<()> {
    println!("{:>8} {:>14} {:>14} {:>10} {:>10}", "theta", "eta", "zeta oracle", "xi", "dim ker");
    for k in [0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5, 1.0, 1.5, 5.0 / 3.0] {
        let d = CircleDirac::from_theta(k * PI)?;
        let (eta, xi) = eta_xi_closed(&d);
        let oracle = eta_zeta_oracle(&d)?;
        println!("{:>8.4} {:>14.10} {:>14.10} {:>10.6} {:>10}", d.theta(), eta, oracle, xi.rep().re, d.kernel_dim());
    }
    let d = CircleDirac::from_theta(PI / 3.0)?;
    println!("lowest eigenvalues at theta = pi/3: {:?}", &spectrum(&d, 3)?);
    Ok(())
}
