//! Running verification scenarios from code: defaults, parameter overrides,
//! window sweeps and the two report formats.

use regulab::verify::{emit, parse_json, run_scenario, sweep, Format, Scenario, SCENARIOS};
use regulab::TolerancePolicy;
use serde_json::json;

fn main() -> regulab::Result<()> {
    println!("registered: {}", SCENARIOS.join(", "));

    let eta = Scenario::new("eta_closed_vs_zeta")?
        .with_params(json!({"thetas": [0.5, 1.5, 2.5]}))
        .with_tolerance(TolerancePolicy::abs(1e-9)?);
    let r1 = run_scenario(&eta)?;

    let idx = Scenario::new("toeplitz_index_vs_winding")?
        .with_params(json!({"windings": [-1, 2]}))
        .with_windows(vec![64, 96, 128]);
    let r2 = sweep(&idx)?;

    print!("{}", emit(&[r1.clone(), r2], Format::Markdown));
    let text = emit(&[r1], Format::Json);
    let back = parse_json(&text)?;
    println!("round trip ok: {}", emit(&back, Format::Json) == text);
    Ok(())
}
