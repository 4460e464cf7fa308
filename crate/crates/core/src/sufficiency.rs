//! When answering "different" without measuring is already optimal.
//!
//! For `N` equiprobable pure states, `Λ = (2/N) R − r ⊗ r` with
//! `R = (1/N) Σ |φ_k φ_k⟩⟨φ_k φ_k|` and `r = (1/N) Σ |φ_k⟩⟨φ_k|`. Because the
//! largest eigenvalue of `R` never exceeds that of `r`, `Λ ≤ 0` as soon as
//! `λ_min(r) ≥ √(2 λ_max(r) / N)` on the support of `r`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::states::PureState;

/// Eigenvalues at or below this are outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

/// Slack allowed when the sufficiency inequality holds with equality.
pub const CONDITION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupportSpectrum {
    pub lambda_max: f64,
    pub lambda_min_nonzero: f64,
    pub rank: usize,
}

impl SupportSpectrum {
    pub fn of(h: &HermitianOperator) -> Result<Self> {
        let support: Vec<f64> = h.eigenvalues()?.into_iter().filter(|&l| l > SUPPORT_CUTOFF).collect();
        match (support.first(), support.last()) {
            (Some(&lo), Some(&hi)) => Ok(Self { lambda_max: hi, lambda_min_nonzero: lo, rank: support.len() }),
            _ => Err(Error::domain("operator has empty support")),
        }
    }
}

fn check_states(states: &[PureState]) -> Result<usize> {
    let Some(first) = states.first() else {
        return Err(Error::domain("need at least one state"));
    };
    let d = first.dim();
    if let Some(bad) = states.iter().find(|s| s.dim() != d) {
        return Err(Error::dim(format!("states have dims {d} and {}", bad.dim())));
    }
    Ok(d)
}

/// The pair `(R, r)`: `R` on the doubled space, `r` on one system, both unit trace.
pub fn build_r_pair(states: &[PureState]) -> Result<(HermitianOperator, HermitianOperator)> {
    let d = check_states(states)?;
    let w = 1.0 / states.len() as f64;
    let mut big = HermitianOperator::zero(d * d);
    let mut small = HermitianOperator::zero(d);
    for s in states {
        let p = s.projector();
        big = &big + &p.kron(&p).scale(w);
        small = &small + &p.scale(w);
    }
    Ok((big, small))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SufficiencyCheck {
    pub sufficient: bool,
    pub spectrum: SupportSpectrum,
    /// `√(2 λ_max / N)`
    pub threshold: f64,
}

/// Tests `λ_min ≥ √(2 λ_max / N)` on the support of `r`, for equal priors.
pub fn no_measurement_sufficient(states: &[PureState]) -> Result<SufficiencyCheck> {
    let (_, r) = build_r_pair(states)?;
    let spectrum = SupportSpectrum::of(&r)?;
    let threshold = (2.0 * spectrum.lambda_max / states.len() as f64).sqrt();
    Ok(SufficiencyCheck { sufficient: spectrum.lambda_min_nonzero >= threshold - CONDITION_TOL, spectrum, threshold })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JointBoundCheck {
    pub holds: bool,
    pub lambda_max_joint: f64,
    pub lambda_max_a: f64,
    pub lambda_max_b: f64,
}

/// Checks `λ_max(R^AB) ≤ min(λ_max(r_φ^A), λ_max(r_ψ^B))` for paired state lists,
/// where `R^AB = (1/N) Σ |φ_k ψ_k⟩⟨φ_k ψ_k|`.
pub fn check_joint_eigenvalue_bound(phis: &[PureState], psis: &[PureState]) -> Result<JointBoundCheck> {
    if phis.len() != psis.len() {
        return Err(Error::dim(format!("{} states on A but {} on B", phis.len(), psis.len())));
    }
    let da = check_states(phis)?;
    let db = check_states(psis)?;
    let w = 1.0 / phis.len() as f64;
    let mut joint = HermitianOperator::zero(da * db);
    let mut ra = HermitianOperator::zero(da);
    let mut rb = HermitianOperator::zero(db);
    for (phi, psi) in phis.iter().zip(psis) {
        joint = &joint + &HermitianOperator::projector(&phi.tensor(psi)).scale(w);
        ra = &ra + &phi.projector().scale(w);
        rb = &rb + &psi.projector().scale(w);
    }
    let lambda_max_joint = joint.max_eigenvalue()?;
    let lambda_max_a = ra.max_eigenvalue()?;
    let lambda_max_b = rb.max_eigenvalue()?;
    Ok(JointBoundCheck {
        holds: lambda_max_joint <= lambda_max_a.min(lambda_max_b) + 1e-10,
        lambda_max_joint,
        lambda_max_a,
        lambda_max_b,
    })
}
