//! Runs the default battery of fundamental-theorem checks and prints one
//! line per configuration.

use gfc::convops::ConvConfig;
use gfc::theorems::{default_battery, run_battery};

fn main() {
    let tol = 1e-5;
    let results = run_battery(&default_battery(), tol, &ConvConfig::default());
    let mut failures = 0;
    for r in &results {
        let c = &r.case;
        let status = match &r.report {
            Ok(rep) if rep.passes(tol) => format!("ok    {:.2e}", rep.residual_max),
            Ok(rep) => {
                failures += 1;
                format!("FAIL  {:.2e}", rep.residual_max)
            }
            Err(e) => {
                failures += 1;
                format!("ERROR {e}")
            }
        };
        println!("{:<9} {:<26} {:<34} n={}  {status}", c.theorem.name(), c.kappa, c.f, c.n);
    }
    println!("{} of {} configurations within {tol:e}", results.len() - failures, results.len());
}
