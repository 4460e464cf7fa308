//! Sample the Born rule to check analytic success probabilities.
//!
//! Run with `cargo run --release --example monte_carlo`.

use qcompare::compare::optimal_comparison;
use qcompare::margin::{assemble_optimal_povm, optimal_margin_comparison};
use qcompare::oracle::{simulate_comparison, OptimizerConfig};
use qcompare::states::{phase_states, states_with_overlap, Ensemble};

fn main() -> qcompare::Result<()> {
    let trials = 1_000_000;
    let seed = 2024;

    for n in [3, 5] {
        let e = Ensemble::uniform(&phase_states(n)?)?;
        let opt = optimal_comparison(&e)?;
        let r = simulate_comparison(&e, &opt.povm()?, trials, seed)?;
        println!("phase states N={n}: analytic {:.5}, sampled {:.5} ± {:.5}", opt.p_success, r.p_success_hat, r.stderr);
    }

    let (a, b) = states_with_overlap(0.8)?;
    let e = Ensemble::uniform(&[a.clone(), b.clone()])?;
    for m in [0.0, 0.1, 0.32] {
        let povm = assemble_optimal_povm(&a, &b, m, &OptimizerConfig::default())?;
        let r = simulate_comparison(&e, &povm, trials, seed)?;
        println!(
            "overlap 0.8, margin {m}: analytic {:.5}, sampled {:.5} ± {:.5}, error rate {:.5}",
            optimal_margin_comparison(0.8, m)?.p_success,
            r.p_success_hat,
            r.stderr,
            r.p_error_hat
        );
    }
    Ok(())
}
