//! Runs a figure scenario from code, the same way the binary does, and prints a preview.
//!
//! ```text
//! cargo run --example run_scenario -- fig4
//! ```

use clap::ValueEnum;
use cqed_feedback::scenario::{self, Scenario, ScenarioConfig};

fn main() -> cqed_feedback::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig4".into());
    let which = Scenario::from_str(&name, true)
        .map_err(cqed_feedback::Error::Config)?;
    let config = ScenarioConfig::from_json(r#"{"rounds": 30}"#)?.resolve(which)?;
    for series in scenario::run(&config)? {
        println!("{} ({} rows)", series.name, series.rows());
        let names: Vec<&str> = series.columns.iter().map(|c| c.name.as_str()).collect();
        println!("  {}", names.join(", "));
        for i in (0..series.rows()).step_by((series.rows() / 5).max(1)) {
            let row: Vec<String> = series.columns.iter().map(|c| format!("{:.6}", c.values[i])).collect();
            println!("  {}", row.join(", "));
        }
    }
    Ok(())
}
