//! Discriminating two pure states with a bound on the error probability:
//! closed form against the numerical optimizer.
//!
//! Run with `cargo run --example margin_discrimination`.

use qcompare::discriminate::{critical_discrimination_margin, margin_discrimination};
use qcompare::oracle::{maximize_margin_block, OptimizerConfig};
use qcompare::states::states_with_overlap;

fn main() -> qcompare::Result<()> {
    let cfg = OptimizerConfig::default();
    for s in [0.3, 0.8] {
        let (a, b) = states_with_overlap(s)?;
        let mu_c = critical_discrimination_margin(s);
        println!("overlap {s}: critical margin {mu_c:.6}");
        for f in [0.0, 0.25, 0.5, 1.0, 1.5] {
            let mu = f * mu_c;
            let closed = margin_discrimination(s, mu)?;
            let numeric = maximize_margin_block(&a, &b, mu, &cfg)?;
            println!(
                "  μ = {mu:.5}: Q = {:.10}  optimizer {:.10}  Q× = {:.6}  ({:?})",
                closed.q_success, numeric.q_success, closed.q_error, closed.regime
            );
        }
    }
    Ok(())
}
