//! Success probabilities of the three comparison strategies for the `N`
//! phase states, and the resulting orderings.
//!
//! Run with `cargo run --example phase_state_table`.

use qcompare::compare::strategy_table;

fn main() -> qcompare::Result<()> {
    println!("{:>3}  {:>8}  {:>8}  {:>8}  {:>9}  ordering", "N", "P_no", "P_disc", "P_opt", "tr(E=Λ)");
    for n in 2..=8 {
        let t = strategy_table(n)?;
        println!(
            "{:>3}  {:>8.5}  {:>8.5}  {:>8.5}  {:>9.5}  {}",
            t.n, t.p_no, t.p_disc, t.p_opt, t.disc_trace, t.ordering
        );
    }
    Ok(())
}
