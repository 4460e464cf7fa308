//! When does answering "different" without measuring beat every measurement?
//!
//! Run with `cargo run --example no_measurement_sufficiency`.

use qcompare::compare::build_comparison_operator;
use qcompare::states::{phase_states, Ensemble, PureState};
use qcompare::sufficiency::no_measurement_sufficient;

fn report(name: &str, states: &[PureState]) -> qcompare::Result<()> {
    let check = no_measurement_sufficient(states)?;
    let lambda_max = build_comparison_operator(&Ensemble::uniform(states)?).lambda.max_eigenvalue()?;
    println!(
        "{name:<18} λ_min = {:.4}  threshold = {:.4}  sufficient = {:<5}  λ_max(Λ) = {:+.2e}",
        check.spectrum.lambda_min_nonzero, check.threshold, check.sufficient, lambda_max
    );
    Ok(())
}

fn main() -> qcompare::Result<()> {
    for n in 2..=10 {
        report(&format!("phase states N={n}"), &phase_states(n)?)?;
    }
    // the computational basis of a qutrit plus a uniform superposition
    let mut states: Vec<PureState> = (0..3).map(|i| PureState::basis(3, i)).collect::<Result<_, _>>()?;
    states.push(PureState::from_real(&[1.0 / 3f64.sqrt(); 3])?);
    report("qutrit, 4 states", &states)?;
    Ok(())
}
