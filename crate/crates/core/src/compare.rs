//! Minimum-error comparison of two systems drawn from a known ensemble.
//!
//! With `E≠ = 1 - E=` every strategy has success probability
//! `baseline + tr(E= Λ)`, where
//!
//! ```text
//! Λ = Σ_k η_k² ρ_k⊗ρ_k − Σ_{k≠j} η_k η_j ρ_k⊗ρ_j,     baseline = 1 − Σ_k η_k².
//! ```
//!
//! The optimal, discrimination and no-measurement strategies share this code
//! path and differ only in the choice of `E=`. Arbitrary priors are accepted
//! for any number of states.

use std::cmp::Ordering;

use serde::Serialize;

use crate::discriminate::{phase_state_srm, Outcome, Povm, POVM_TOL};
use crate::error::{Error, Result};
use crate::linalg::{positive_eigenvalue_sum, positive_part_projector, HermitianOperator, DEFAULT_EIG_EPS};
use crate::states::{phase_states, Ensemble};

/// Probabilities within this distance are reported as equal in strategy tables.
pub const TIE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ComparisonOperator {
    pub lambda: HermitianOperator,
    /// Success probability of always answering "different".
    pub baseline: f64,
}

impl ComparisonOperator {
    /// `baseline + tr(E= Λ)`
    pub fn success_for(&self, e_same: &HermitianOperator) -> f64 {
        self.baseline + e_same.trace_product(&self.lambda)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Optimal,
    Discrimination,
    NoMeasurement,
}

#[derive(Clone, Debug)]
pub struct ComparisonResult {
    pub strategy: Strategy,
    pub p_success: f64,
    pub p_error: f64,
    /// The element `E=`; the two-outcome measurement is `{E=, 1 - E=}`.
    pub povm_same: HermitianOperator,
}

impl ComparisonResult {
    /// The full comparison measurement `{E=, E≠}` on the doubled space.
    pub fn povm(&self) -> Result<Povm> {
        let n = self.povm_same.dim();
        let diff = &HermitianOperator::identity(n) - &self.povm_same;
        Povm::with_tolerance(vec![(Outcome::Same, self.povm_same.clone()), (Outcome::Different, diff)], 1e-8)
    }
}

/// Builds `Λ` as `2 Σ_k η_k² ρ_k⊗ρ_k − ρ̄⊗ρ̄` with `ρ̄ = Σ_k η_k ρ_k`.
pub fn build_comparison_operator(e: &Ensemble) -> ComparisonOperator {
    let avg = e.average();
    let diag = e.states().iter().zip(e.priors()).fold(HermitianOperator::zero(e.dim() * e.dim()), |acc, (s, &p)| {
        &acc + &s.density().kron(s.density()).scale(p * p)
    });
    let lambda = HermitianOperator::symmetrized((&diag.scale(2.0) - &avg.kron(&avg)).matrix().clone());
    let baseline = 1.0 - e.priors().iter().map(|p| p * p).sum::<f64>();
    ComparisonOperator { lambda, baseline }
}

fn result(op: &ComparisonOperator, strategy: Strategy, e_same: HermitianOperator) -> ComparisonResult {
    let p_success = op.success_for(&e_same);
    ComparisonResult { strategy, p_success, p_error: 1.0 - p_success, povm_same: e_same }
}

/// `E=` projects onto the positive eigenspace of `Λ` (the full eigenspace when degenerate).
pub fn optimal_comparison(e: &Ensemble) -> Result<ComparisonResult> {
    let op = build_comparison_operator(e);
    let e_same = positive_part_projector(&op.lambda, DEFAULT_EIG_EPS)?;
    let mut r = result(&op, Strategy::Optimal, e_same);
    // report the spectral value rather than the re-evaluated trace
    r.p_success = op.baseline + positive_eigenvalue_sum(&op.lambda, DEFAULT_EIG_EPS)?;
    r.p_error = 1.0 - r.p_success;
    Ok(r)
}

/// Measures each system with `d` and answers "same" when the outcomes agree:
/// `E= = Σ_k e_k ⊗ e_k`. Element `k` of `d` is the guess for state `k`.
pub fn discrimination_strategy(e: &Ensemble, d: &Povm) -> Result<ComparisonResult> {
    if d.len() != e.len() {
        return Err(Error::dim(format!("discrimination POVM has {} outcomes for {} states", d.len(), e.len())));
    }
    if d.dim() != e.dim() {
        return Err(Error::dim(format!("POVM acts on dim {}, states have dim {}", d.dim(), e.dim())));
    }
    if !d.is_complete(POVM_TOL) {
        return Err(Error::InvalidPovm(format!(
            "discrimination strategy needs a complete POVM (defect {:e})",
            d.completeness_defect()
        )));
    }
    let op = build_comparison_operator(e);
    let e_same =
        d.elements().iter().fold(HermitianOperator::zero(e.dim() * e.dim()), |acc, (_, ek)| &acc + &ek.kron(ek));
    Ok(result(&op, Strategy::Discrimination, e_same))
}

/// Always answers "different": `E= = 0`.
pub fn no_measurement(e: &Ensemble) -> ComparisonResult {
    let op = build_comparison_operator(e);
    result(&op, Strategy::NoMeasurement, HermitianOperator::zero(e.dim() * e.dim()))
}

/// Success, error and inconclusive probabilities of a general comparison POVM.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonProbabilities {
    pub p_success: f64,
    pub p_error: f64,
    pub p_inconclusive: f64,
}

/// Evaluates a POVM labelled `=`, `≠` (and optionally `?`) against the ensemble.
pub fn evaluate_povm(e: &Ensemble, povm: &Povm) -> Result<ComparisonProbabilities> {
    let d = e.dim();
    if povm.dim() != d * d {
        return Err(Error::dim(format!("POVM acts on dim {}, expected {}", povm.dim(), d * d)));
    }
    let (mut p_success, mut p_error) = (0.0, 0.0);
    for (k, (rk, &pk)) in e.states().iter().zip(e.priors()).enumerate() {
        for (j, (rj, &pj)) in e.states().iter().zip(e.priors()).enumerate() {
            let joint = rk.density().kron(rj.density());
            let same = povm.probability(Outcome::Same, &joint);
            let diff = povm.probability(Outcome::Different, &joint);
            let w = pk * pj;
            if k == j {
                p_success += w * same;
                p_error += w * diff;
            } else {
                p_success += w * diff;
                p_error += w * same;
            }
        }
    }
    Ok(ComparisonProbabilities { p_success, p_error, p_inconclusive: 1.0 - p_success - p_error })
}

/// The three strategies for the `Z_N` phase-state ensemble with equal priors.
#[derive(Clone, Debug, Serialize)]
pub struct StrategyTable {
    pub n: usize,
    pub p_no: f64,
    pub p_disc: f64,
    pub p_opt: f64,
    /// `tr(E=^disc Λ)`
    pub disc_trace: f64,
    /// Rank of `E=^opt`.
    pub opt_rank: usize,
    /// For example `"no = disc < opt"`.
    pub ordering: String,
}

impl StrategyTable {
    /// Tolerant comparison of two named entries (`"no"`, `"disc"`, `"opt"`).
    pub fn relation(&self, a: &str, b: &str) -> Option<Ordering> {
        Some(compare_tol(self.value(a)?, self.value(b)?))
    }

    fn value(&self, name: &str) -> Option<f64> {
        match name {
            "no" => Some(self.p_no),
            "disc" => Some(self.p_disc),
            "opt" => Some(self.p_opt),
            _ => None,
        }
    }
}

fn compare_tol(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= TIE_TOL {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Ascending chain such as `"disc < no = opt"`; ties are listed as no, disc, opt.
pub fn ordering_chain(entries: &[(&str, f64)]) -> String {
    let mut sorted: Vec<(usize, &(&str, f64))> = entries.iter().enumerate().collect();
    sorted.sort_by(|(ia, a), (ib, b)| compare_tol(a.1, b.1).then(ia.cmp(ib)));
    let mut out = String::new();
    for (i, (_, (name, value))) in sorted.iter().enumerate() {
        if i > 0 {
            let prev = sorted[i - 1].1 .1;
            out.push_str(if compare_tol(prev, *value) == Ordering::Equal { " = " } else { " < " });
        }
        out.push_str(name);
    }
    out
}

pub fn strategy_table(n: usize) -> Result<StrategyTable> {
    let states = phase_states(n)?;
    let e = Ensemble::uniform(&states)?;
    let op = build_comparison_operator(&e);
    let opt = optimal_comparison(&e)?;
    let srm = phase_state_srm(n)?;
    let disc = discrimination_strategy(&e, &srm.povm)?;
    let no = no_measurement(&e);
    let opt_rank = opt.povm_same.trace().round() as usize;
    let ordering = ordering_chain(&[("no", no.p_success), ("disc", disc.p_success), ("opt", opt.p_success)]);
    Ok(StrategyTable {
        n,
        p_no: no.p_success,
        p_disc: disc.p_success,
        p_opt: opt.p_success,
        disc_trace: disc.povm_same.trace_product(&op.lambda),
        opt_rank,
        ordering,
    })
}
