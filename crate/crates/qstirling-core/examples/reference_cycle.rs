//! Runs one Stirling cycle at the reference working point and prints its
//! efficiency next to the Carnot bound.

use qstirling_core::cycle::run_cycle;
use qstirling_core::{MediumParams, StirlingCycle};
use std::f64::consts::PI;

fn main() -> Result<(), qstirling_core::Error> {
    let omega0 = 0.4 * PI;
    // zeta = 500, xi = 9  =>  g ~ 0.569
    let medium = MediumParams::new(omega0, omega0, 500.0 * omega0, 9.0 * omega0)?;
    let cycle = StirlingCycle::from_ratio(0.1, medium.g(), 0.008 * PI, 1.5)?;
    let result = run_cycle(&cycle, &medium)?;
    println!("eta = {:.8} (Carnot {:.8})", result.eta, result.eta_carnot);
    Ok(())
}
