//! Optimal state discrimination: two-state minimum error, the phase-state
//! square-root measurement, and two pure states with an error margin.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{positive_eigenvalue_sum, positive_part_projector, HermitianOperator, DEFAULT_EIG_EPS};
use crate::oracle::{self, OptimizerConfig};
use crate::states::{overlap, phase_states, MixedState, PureState, NORM_TOL};

/// Positivity and completeness tolerance for POVMs built in closed form.
pub const POVM_TOL: f64 = 1e-10;

/// Margins within this of the critical value count as saturated, so that
/// rounding in the critical value cannot flip the regime.
pub const REGIME_TOL: f64 = 1e-12;

/// Label of a POVM outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// "The state is number k" in a discrimination measurement.
    Guess(usize),
    Same,
    Different,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Guess(k) => write!(f, "guess {k}"),
            Outcome::Same => f.write_str("="),
            Outcome::Different => f.write_str("≠"),
            Outcome::Inconclusive => f.write_str("?"),
        }
    }
}

/// Finite list of labeled positive operators with `Σ E ≤ 1`.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<(Outcome, HermitianOperator)>,
    dim: usize,
}

impl Povm {
    pub fn new(elements: Vec<(Outcome, HermitianOperator)>) -> Result<Self> {
        Self::with_tolerance(elements, POVM_TOL)
    }

    /// Checks positivity of every element and of `1 - Σ E` to within `tol`.
    pub fn with_tolerance(elements: Vec<(Outcome, HermitianOperator)>, tol: f64) -> Result<Self> {
        let Some((_, first)) = elements.first() else {
            return Err(Error::InvalidPovm("POVM has no elements".into()));
        };
        let dim = first.dim();
        for (label, e) in &elements {
            if e.dim() != dim {
                return Err(Error::dim(format!("POVM element {label} has dim {}, expected {dim}", e.dim())));
            }
            let min = e.min_eigenvalue()?;
            if min < -tol {
                return Err(Error::InvalidPovm(format!("element {label} has eigenvalue {min:e}")));
            }
        }
        let povm = Self { elements, dim };
        let slack = (&HermitianOperator::identity(dim) - &povm.total()).min_eigenvalue()?;
        if slack < -tol {
            return Err(Error::InvalidPovm(format!("elements sum beyond identity (by {:e})", -slack)));
        }
        Ok(povm)
    }

    pub fn elements(&self) -> &[(Outcome, HermitianOperator)] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, label: Outcome) -> Option<&HermitianOperator> {
        self.elements.iter().find(|(l, _)| *l == label).map(|(_, e)| e)
    }

    pub fn total(&self) -> HermitianOperator {
        self.elements.iter().fold(HermitianOperator::zero(self.dim), |acc, (_, e)| &acc + e)
    }

    /// `max |Σ E - 1|` entrywise.
    pub fn completeness_defect(&self) -> f64 {
        self.total().max_abs_diff(&HermitianOperator::identity(self.dim))
    }

    pub fn is_complete(&self, tol: f64) -> bool {
        self.completeness_defect() <= tol
    }

    /// Smallest eigenvalue over all elements.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.elements.iter().map(|(_, e)| e.min_eigenvalue()).try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))
    }

    /// Appends `1 - Σ E` as an explicit inconclusive element.
    pub fn with_inconclusive_remainder(mut self) -> Self {
        let rest = &HermitianOperator::identity(self.dim) - &self.total();
        self.elements.push((Outcome::Inconclusive, rest));
        self
    }

    /// Probability of `label` for the state `rho`.
    pub fn probability(&self, label: Outcome, rho: &HermitianOperator) -> f64 {
        self.element(label).map_or(0.0, |e| e.trace_product(rho))
    }
}

/// A discrimination measurement together with its success probability.
#[derive(Clone, Debug)]
pub struct Discrimination {
    pub povm: Povm,
    pub success: f64,
}

fn check_priors(eta1: f64, eta2: f64) -> Result<()> {
    if !(eta1 >= 0.0 && eta2 >= 0.0) || (eta1 + eta2 - 1.0).abs() > NORM_TOL {
        return Err(Error::domain(format!("priors must be nonnegative and sum to 1, got ({eta1}, {eta2})")));
    }
    Ok(())
}

/// Minimum-error discrimination of `ρ₁` (prior `η₁`) against `ρ₂` (prior `η₂`).
///
/// `e₁` projects onto the positive eigenspace of `η₁ρ₁ - η₂ρ₂` and `e₂ = 1 - e₁`;
/// the success probability is `η₂ + Σ λ₊`. When the weighted difference has no
/// positive eigenvalue `e₁ = 0`.
pub fn helstrom(rho1: &MixedState, rho2: &MixedState, eta1: f64, eta2: f64) -> Result<Discrimination> {
    check_priors(eta1, eta2)?;
    if rho1.dim() != rho2.dim() {
        return Err(Error::dim(format!("states have dims {} and {}", rho1.dim(), rho2.dim())));
    }
    let gamma = &rho1.density().scale(eta1) - &rho2.density().scale(eta2);
    let e1 = positive_part_projector(&gamma, DEFAULT_EIG_EPS)?;
    let e2 = &HermitianOperator::identity(rho1.dim()) - &e1;
    let success = eta2 + positive_eigenvalue_sum(&gamma, DEFAULT_EIG_EPS)?;
    let povm = Povm::new(vec![(Outcome::Guess(0), e1), (Outcome::Guess(1), e2)])?;
    Ok(Discrimination { povm, success })
}

/// Square-root measurement `e_k = (2/N)|φ_k⟩⟨φ_k|` for the `Z_N` phase states.
///
/// The success probability is evaluated from the POVM with equal priors.
pub fn phase_state_srm(n: usize) -> Result<Discrimination> {
    let states = phase_states(n)?;
    let w = 2.0 / n as f64;
    let elements = states.iter().enumerate().map(|(k, s)| (Outcome::Guess(k), s.projector().scale(w))).collect();
    let povm = Povm::new(elements)?;
    if !povm.is_complete(POVM_TOL) {
        return Err(Error::InvalidPovm(format!(
            "square-root measurement incomplete by {:e}",
            povm.completeness_defect()
        )));
    }
    let success =
        states.iter().enumerate().map(|(k, s)| povm.probability(Outcome::Guess(k), &s.projector()) / n as f64).sum();
    Ok(Discrimination { povm, success })
}

/// Which branch of an error-margin optimum applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Margin at or above the critical value: the minimum-error optimum is feasible.
    Saturated,
    /// The margin constraint is active.
    MarginLimited,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginDiscrimination {
    pub overlap: f64,
    pub margin: f64,
    pub q_success: f64,
    pub q_error: f64,
    pub mu_c: f64,
    pub regime: Regime,
}

pub(crate) fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Critical margin `(1 - √(1 - s²))/2` above which the margin is inactive.
pub fn critical_discrimination_margin(s: f64) -> f64 {
    0.5 * (1.0 - (1.0 - s * s).sqrt())
}

/// Optimal discrimination of two equiprobable pure states with overlap
/// modulus `s`, with error probability at most `mu`.
pub fn margin_discrimination(s: f64, mu: f64) -> Result<MarginDiscrimination> {
    check_unit_interval("overlap modulus", s)?;
    check_unit_interval("error margin", mu)?;
    let mu_c = critical_discrimination_margin(s);
    let (q_success, q_error, regime) = if mu >= mu_c - REGIME_TOL {
        (0.5 * (1.0 + (1.0 - s * s).sqrt()), mu_c, Regime::Saturated)
    } else {
        ((mu.sqrt() + (1.0 - s).sqrt()).powi(2), mu, Regime::MarginLimited)
    };
    Ok(MarginDiscrimination { overlap: s, margin: mu, q_success, q_error, mu_c, regime })
}

/// [`margin_discrimination`] for two explicit states.
pub fn margin_discrimination_states(phi1: &PureState, phi2: &PureState, mu: f64) -> Result<MarginDiscrimination> {
    let s = overlap(phi1, phi2)?.norm().min(1.0);
    margin_discrimination(s, mu)
}

/// An explicit single-system POVM `{e₁, e₂, e?}` for discrimination with margin `mu`.
///
/// Above the critical margin this is the minimum-error measurement; below it
/// the elements come from the numerical optimizer, so the returned success
/// probability is certified feasible but only approximately optimal.
pub fn margin_discrimination_povm(
    phi1: &PureState,
    phi2: &PureState,
    mu: f64,
    cfg: &OptimizerConfig,
) -> Result<Discrimination> {
    check_unit_interval("error margin", mu)?;
    let s = overlap(phi1, phi2)?.norm().min(1.0);
    if mu >= critical_discrimination_margin(s) - REGIME_TOL {
        let d = helstrom(&phi1.density(), &phi2.density(), 0.5, 0.5)?;
        return Ok(Discrimination { povm: d.povm.with_inconclusive_remainder(), success: d.success });
    }
    let block = oracle::maximize_margin_block(phi1, phi2, mu, cfg)?;
    let povm = Povm::with_tolerance(vec![(Outcome::Guess(0), block.first), (Outcome::Guess(1), block.second)], 1e-8)?
        .with_inconclusive_remainder();
    Ok(Discrimination { povm, success: block.q_success })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::states_with_overlap;

    #[test]
    fn helstrom_orthogonal() {
        let a = PureState::basis(2, 0).unwrap().density();
        let b = PureState::basis(2, 1).unwrap().density();
        let d = helstrom(&a, &b, 0.5, 0.5).unwrap();
        assert!((d.success - 1.0).abs() < 1e-14);
        assert!(d.povm.is_complete(1e-12));
    }

    #[test]
    fn helstrom_pure_overlap() {
        for s in [0.0, 0.3, 0.8, 0.99] {
            let (a, b) = states_with_overlap(s).unwrap();
            let d = helstrom(&a.density(), &b.density(), 0.5, 0.5).unwrap();
            assert!((d.success - 0.5 * (1.0 + (1.0 - s * s).sqrt())).abs() < 1e-12);
        }
    }

    #[test]
    fn helstrom_identical_states_pick_likelier() {
        let rho = PureState::from_real(&[0.6, 0.8]).unwrap().density();
        let d = helstrom(&rho, &rho, 0.3, 0.7).unwrap();
        assert!((d.success - 0.7).abs() < 1e-14);
        assert!(d.povm.element(Outcome::Guess(0)).unwrap().max_abs_diff(&HermitianOperator::zero(2)) < 1e-15);
        let d = helstrom(&rho, &rho, 0.7, 0.3).unwrap();
        assert!((d.success - 0.7).abs() < 1e-14);
        let d = helstrom(&rho, &rho, 0.5, 0.5).unwrap();
        assert!((d.success - 0.5).abs() < 1e-14);
    }

    #[test]
    fn helstrom_rejects_bad_priors() {
        let rho = MixedState::maximally_mixed(2);
        assert!(matches!(helstrom(&rho, &rho, 0.5, 0.6), Err(Error::Domain(_))));
        assert!(matches!(helstrom(&rho, &rho, -0.5, 1.5), Err(Error::Domain(_))));
        let big = MixedState::maximally_mixed(3);
        assert!(matches!(helstrom(&rho, &big, 0.5, 0.5), Err(Error::Dimension(_))));
    }

    #[test]
    fn srm_values() {
        let d = phase_state_srm(2).unwrap();
        assert!((d.success - 1.0).abs() < 1e-14);
        let d = phase_state_srm(3).unwrap();
        assert!((d.success - 2.0 / 3.0).abs() < 1e-14);
        let d = phase_state_srm(5).unwrap();
        assert!((d.success - 0.4).abs() < 1e-14);
        assert!(d.povm.completeness_defect() < 1e-10);
        assert_eq!(d.povm.len(), 5);
    }

    #[test]
    fn margin_closed_forms() {
        let r = margin_discrimination(0.0, 0.0).unwrap();
        assert_eq!((r.q_success, r.q_error), (1.0, 0.0));
        let r = margin_discrimination(0.0, 0.37).unwrap();
        assert_eq!((r.q_success, r.q_error), (1.0, 0.0));

        for s in [0.1, 0.5, 0.8, 1.0] {
            let r = margin_discrimination(s, 0.0).unwrap();
            assert!((r.q_success - (1.0 - s)).abs() < 1e-15);
            assert_eq!(r.regime, Regime::MarginLimited);
        }

        // √(1 - 0.64) = 0.6 exactly: μ_c = 0.2, Q = 0.8
        let r = margin_discrimination(0.8, 0.2).unwrap();
        assert!((r.mu_c - 0.2).abs() < 1e-15);
        assert!((r.q_success - 0.8).abs() < 1e-15 && (r.q_error - 0.2).abs() < 1e-15);
        assert_eq!(r.regime, Regime::Saturated);
        let r = margin_discrimination(0.8, 0.9).unwrap();
        assert!((r.q_success - 0.8).abs() < 1e-15);
    }

    #[test]
    fn margin_rejects_out_of_range() {
        assert!(margin_discrimination(1.1, 0.1).is_err());
        assert!(margin_discrimination(0.5, -0.1).is_err());
        assert!(margin_discrimination(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn margin_povm_matches_closed_form() {
        let cfg = OptimizerConfig::default();
        let (a, b) = states_with_overlap(0.8).unwrap();
        for mu in [0.0, 0.05, 0.1, 0.2, 0.5] {
            let d = margin_discrimination_povm(&a, &b, mu, &cfg).unwrap();
            let want = margin_discrimination(0.8, mu).unwrap().q_success;
            assert!((d.success - want).abs() < 1e-6, "mu={mu}: {} vs {want}", d.success);
            assert!(d.povm.is_complete(1e-12));
        }
    }
}
