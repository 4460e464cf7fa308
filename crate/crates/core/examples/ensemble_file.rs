//! Read an ensemble from the JSON format used by the command-line tool and
//! compare its states.
//!
//! Run with `cargo run --example ensemble_file -- path/to/ensemble.json`, or
//! without an argument to use a built-in mixed/pure example.

use qcompare::compare::{no_measurement, optimal_comparison};
use qcompare::states::EnsembleFile;

const DEFAULT: &str = r#"{
  "states": [
    [[1, 0], [0, 0]],
    [[0.70710678118654752, 0], [0, 0.70710678118654752]],
    [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]
  ],
  "priors": [0.5, 0.3, 0.2]
}"#;

fn main() -> qcompare::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).map_err(|e| qcompare::Error::Parse(format!("{path}: {e}")))?,
        None => DEFAULT.to_string(),
    };
    let file = EnsembleFile::parse(&text)?;
    let e = file.to_ensemble()?;
    println!("{} states in dimension {}, priors {:?}", e.len(), e.dim(), e.priors());
    println!("optimal comparison      {:.6}", optimal_comparison(&e)?.p_success);
    println!("never measure           {:.6}", no_measurement(&e).p_success);
    Ok(())
}
