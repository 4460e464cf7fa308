//! Build the optimal comparison measurement for a given error margin and
//! check it: positivity, completeness, symmetry, and its probabilities.
//!
//! Run with `cargo run --example margin_povm`.

use qcompare::margin::{assemble_optimal_povm, evaluate_margin_povm, optimal_margin_comparison, symmetry_basis};
use qcompare::oracle::OptimizerConfig;
use qcompare::states::states_with_overlap;

fn main() -> qcompare::Result<()> {
    let s = 0.8;
    let (a, b) = states_with_overlap(s)?;
    let basis = symmetry_basis(&a, &b)?;
    let (pi, gamma) = (basis.swap(), basis.exchange());
    println!("(Π, Γ) labels of X̃₁, X̃₂, Y₊, Y₋: {:?}", basis.symmetry_labels());

    for m in [0.0, 0.05, 0.1, 0.2, 0.32, 0.4] {
        let povm = assemble_optimal_povm(&a, &b, m, &OptimizerConfig::default())?;
        let got = evaluate_margin_povm(&a, &b, &povm)?;
        let want = optimal_margin_comparison(s, m)?;
        let asym = povm
            .elements()
            .iter()
            .map(|(_, e)| {
                let m = e.matrix();
                (&(&pi * m) - &(m * &pi)).frobenius_norm() + (&(&gamma * m) - &(m * &gamma)).frobenius_norm()
            })
            .fold(0.0, f64::max);
        println!(
            "m = {m:.2}: P = {:.8} (closed form {:.8}), P× = {:.8}, P? = {:.6}, min eig = {:+.1e}, asymmetry = {asym:.1e}",
            got.p_success,
            want.p_success,
            got.p_error,
            got.p_inconclusive,
            povm.min_eigenvalue()?,
        );
    }
    Ok(())
}
