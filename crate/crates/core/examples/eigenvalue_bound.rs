//! The largest eigenvalue of `(1/N) Σ |φ_k ψ_k⟩⟨φ_k ψ_k|` never exceeds the
//! largest eigenvalue of either marginal average. Checked on random sets.
//!
//! Run with `cargo run --example eigenvalue_bound`.

use num_complex::Complex64;
use qcompare::states::PureState;
use qcompare::sufficiency::check_joint_eigenvalue_bound;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(dim: usize, rng: &mut impl Rng) -> qcompare::Result<PureState> {
    let amps = (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    PureState::normalized(amps)
}

fn main() -> qcompare::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = f64::NEG_INFINITY;
    for trial in 0..10 {
        let n = rng.random_range(1..=6);
        let (da, db) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let phis = (0..n).map(|_| random_state(da, &mut rng)).collect::<Result<Vec<_>, _>>()?;
        let psis = (0..n).map(|_| random_state(db, &mut rng)).collect::<Result<Vec<_>, _>>()?;
        let c = check_joint_eigenvalue_bound(&phis, &psis)?;
        let slack = c.lambda_max_joint - c.lambda_max_a.min(c.lambda_max_b);
        worst = worst.max(slack);
        println!(
            "#{trial}: N={n} dims {da}×{db}  λ(R) = {:.4} ≤ min({:.4}, {:.4})  holds = {}",
            c.lambda_max_joint, c.lambda_max_a, c.lambda_max_b, c.holds
        );
    }
    println!("largest λ(R) − min(λ_A, λ_B): {worst:.4}");
    Ok(())
}
