//! Compare two qubit states: optimal measurement, discriminate-then-compare,
//! and never measuring.
//!
//! Run with `cargo run --example two_state_comparison`.

use qcompare::compare::{build_comparison_operator, discrimination_strategy, no_measurement, optimal_comparison};
use qcompare::discriminate::helstrom;
use qcompare::states::{bloch_from_state, Ensemble, PureState};

fn main() -> qcompare::Result<()> {
    let a = PureState::from_real(&[1.0, 0.0])?;
    let b = PureState::from_real(&[0.6, 0.8])?;
    let s = a.overlap(&b)?.norm();

    for priors in [[0.5, 0.5], [0.8, 0.2]] {
        let e = Ensemble::from_pure(&[a.clone(), b.clone()], priors.to_vec())?;
        let op = build_comparison_operator(&e);
        let opt = optimal_comparison(&e)?;
        let d = helstrom(&e.states()[0], &e.states()[1], priors[0], priors[1])?;
        let disc = discrimination_strategy(&e, &d.povm)?;
        let none = no_measurement(&e);

        println!("priors {priors:?}, overlap {s:.3}");
        println!("  Λ eigenvalues     {:?}", op.lambda.eigenvalues()?);
        println!("  optimal           {:.6}", opt.p_success);
        println!("  discriminate      {:.6}", disc.p_success);
        println!("  never measure     {:.6}", none.p_success);
    }

    // with equal priors the optimum depends only on the Bloch vectors' distance
    let na = bloch_from_state(&a.density())?;
    let nb = bloch_from_state(&b.density())?;
    let d = na.sub(&nb);
    let dist2 = d.iter().map(|x| x * x).sum::<f64>();
    println!("1/2 + |n₁ − n₂|²/8 = {:.6}", 0.5 + dist2 / 8.0);
    println!("1 − s²/2           = {:.6}", 1.0 - s * s / 2.0);
    Ok(())
}
