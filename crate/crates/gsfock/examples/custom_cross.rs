//! Running the full verification pipeline on a hand-written cross operator.
//!
//! The same JSON schema the CLI consumes works as a library entry point:
//! parse, build, run a mode, serialize. The custom operator here is the
//! quon flip at q = 0.4 written out entrywise.

use gsfock::config::{build_statistics, parse_config};
use gsfock::report::{human_summary, to_json};
use gsfock::runner::{run_report, RunOptions};

const CONFIG: &str = r#"{
    "dimension": 2,
    "nmax": 3,
    "tolerance": 1e-10,
    "statistics": {
        "family": "custom",
        "cross": [
            [0.4, 0, 0, 0],
            [0, 0, 0.4, 0],
            [0, 0.4, 0, 0],
            [0, 0, 0, 0.4]
        ]
    }
}"#;

fn main() -> gsfock::Result<()> {
    let config = parse_config(CONFIG)?;
    let built = build_statistics(&config)?;
    println!(
        "built \"{}\" statistics, cross fingerprint {}",
        built.spec.name,
        built.echo.cross_fingerprint.as_deref().unwrap_or("-")
    );

    let report = run_report(&config, &RunOptions::default())?;
    print!("{}", human_summary(&report));

    let json = to_json(&report)?;
    println!("canonical report: {} bytes, first line {:?}", json.len(), json.lines().next().unwrap());
    Ok(())
}
