//! Drive a subcommand programmatically and render its records as CSV and JSON.
//!
//! cargo run --example cli_records

use std::collections::BTreeMap;

use entropy_scaling::cli::{render, run, Command, OutputFormat, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BTreeMap::from([("n".to_string(), "1,10,100".to_string())]);
    let config = RunConfig::new(Command::FermiGas, params, OutputFormat::Csv, None)?;
    let table = run(&config)?;
    print!("{}", String::from_utf8(render(&table, OutputFormat::Csv)?)?);
    print!(
        "{}",
        String::from_utf8(render(&table, OutputFormat::Json)?)?
    );
    Ok(())
}
