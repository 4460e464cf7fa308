//! Independent numerical checks for the closed-form results.
//!
//! Nothing in here uses the analytic optima it is meant to certify:
//!
//! * [`maximize_two_outcome`] runs projected gradient ascent of `tr(EΛ)` over
//!   `0 ≤ E ≤ 1`, projecting by clamping eigenvalues.
//! * [`maximize_margin_block`] solves the two-state discrimination problem
//!   with an error margin as a second-order cone program by the barrier
//!   method, and repairs the final point to be exactly feasible.
//! * [`simulate_comparison`] samples the Born rule.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::discriminate::{Outcome, Povm};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::states::{Ensemble, PureState};

/// Negative outcome probabilities beyond this are reported as an invalid POVM.
pub const PROBABILITY_TOL: f64 = 1e-9;

const SIMULATION_CHUNK: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    pub step: f64,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { max_iters: 1_000, step: 1.0, tol: 1e-12, restarts: 2, seed: 0x5eed }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(Error::domain("optimizer needs max_iters >= 1 and restarts >= 1"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) || !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::domain("optimizer step and tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TwoOutcomeResult {
    /// Best element `E` found, `0 ≤ E ≤ 1`.
    pub element: HermitianOperator,
    /// `tr(EΛ)` at that element.
    pub value: f64,
    /// False when every restart hit `max_iters` first.
    pub converged: bool,
}

/// Maximizes `tr(EΛ)` over `0 ≤ E ≤ 1` by projected gradient ascent.
pub fn maximize_two_outcome(lambda: &HermitianOperator, cfg: &OptimizerConfig) -> Result<TwoOutcomeResult> {
    cfg.validate()?;
    let n = lambda.dim();
    let clamp01 = |e: &HermitianOperator| e.map_spectrum(|x| x.clamp(0.0, 1.0));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<TwoOutcomeResult> = None;

    for restart in 0..cfg.restarts {
        let start = if restart == 0 {
            HermitianOperator::identity(n).scale(0.5)
        } else {
            clamp01(&random_hermitian(n, &mut rng))?
        };
        let mut e = start;
        let mut converged = false;
        for _ in 0..cfg.max_iters {
            let next = clamp01(&(&e + &lambda.scale(cfg.step)))?;
            let moved = next.max_abs_diff(&e);
            e = next;
            if moved < cfg.tol {
                converged = true;
                break;
            }
        }
        let value = e.trace_product(lambda);
        let better = best.as_ref().is_none_or(|b| value > b.value);
        let any_converged = converged || best.as_ref().is_some_and(|b| b.converged);
        if better {
            best = Some(TwoOutcomeResult { element: e, value, converged: any_converged });
        } else if let Some(b) = best.as_mut() {
            b.converged = any_converged;
        }
    }
    Ok(best.expect("at least one restart"))
}

fn random_hermitian(n: usize, rng: &mut impl Rng) -> HermitianOperator {
    let m = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    HermitianOperator::symmetrized(m)
}

/// Second-order cone `t(x) ≥ |u(x)|` with `t = a·x + α` and `u = Bx + β ∈ R²`.
struct Cone {
    a: DVector<f64>,
    alpha: f64,
    b: DMatrix<f64>,
    beta: DVector<f64>,
}

impl Cone {
    fn parts(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        (self.a.dot(x) + self.alpha, &self.b * x + &self.beta)
    }

    /// `t − |u|`, positive exactly in the interior.
    fn margin(&self, x: &DVector<f64>) -> f64 {
        let (t, u) = self.parts(x);
        t - u.norm()
    }
}

/// `max c·x` subject to cones and linear constraints `e·x ≤ r`, by the
/// log-barrier method from a strictly feasible start.
struct Socp {
    c: DVector<f64>,
    cones: Vec<Cone>,
    linear: Vec<(DVector<f64>, f64)>,
}

/// Newton steps allowed per barrier weight before the weight is raised anyway.
const NEWTON_STEPS_PER_STAGE: usize = 100;

/// Outcome of a barrier solve: an interior point and a bound on its suboptimality.
struct SocpSolution {
    x: DVector<f64>,
    gap_bound: f64,
    converged: bool,
}

impl Socp {
    fn interior(&self, x: &DVector<f64>) -> bool {
        self.cones.iter().all(|k| k.margin(x) > 0.0) && self.linear.iter().all(|(e, r)| r - e.dot(x) > 0.0)
    }

    fn barrier(&self, x: &DVector<f64>) -> f64 {
        let cones: f64 = self
            .cones
            .iter()
            .map(|k| {
                let (t, u) = k.parts(x);
                -(t * t - u.norm_squared()).ln()
            })
            .sum();
        let lin: f64 = self.linear.iter().map(|(e, r)| -(r - e.dot(x)).ln()).sum();
        cones + lin
    }

    fn gradient_hessian(&self, x: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let n = x.len();
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        for k in &self.cones {
            let (t, u) = k.parts(x);
            let q = t * t - u.norm_squared();
            let dq = &k.a * (2.0 * t) - k.b.transpose() * &u * 2.0;
            g -= &dq / q;
            let d2q = &k.a * k.a.transpose() * 2.0 - k.b.transpose() * &k.b * 2.0;
            h += &dq * dq.transpose() / (q * q) - d2q / q;
        }
        for (e, r) in &self.linear {
            let s = r - e.dot(x);
            g += e / s;
            h += e * e.transpose() / (s * s);
        }
        (g, h)
    }

    fn solve(&self, start: DVector<f64>, target_gap: f64) -> SocpSolution {
        let barrier_parameter = (2 * self.cones.len() + self.linear.len()) as f64;
        let mut x = start;
        let mut tau = 1.0;
        let mut converged = true;
        loop {
            let objective = |x: &DVector<f64>| -tau * self.c.dot(x) + self.barrier(x);
            let mut centered = false;
            for _ in 0..NEWTON_STEPS_PER_STAGE {
                let (g, h) = self.gradient_hessian(&x);
                let grad = &g - &self.c * tau;
                let Some(step) = newton_step(&h, &grad) else {
                    break;
                };
                let decrement = -grad.dot(&step);
                if decrement < 1e-9 {
                    centered = true;
                    break;
                }
                let f0 = objective(&x);
                let mut alpha = 1.0;
                loop {
                    let trial = &x + &step * alpha;
                    if self.interior(&trial) && objective(&trial) <= f0 - 0.25 * alpha * decrement {
                        x = trial;
                        break;
                    }
                    alpha *= 0.5;
                    if alpha < 1e-20 {
                        break;
                    }
                }
                if alpha < 1e-20 {
                    // no further progress is representable at this barrier weight
                    centered = true;
                    break;
                }
            }
            converged &= centered;
            let gap_bound = barrier_parameter / tau;
            if gap_bound <= target_gap {
                return SocpSolution { x, gap_bound, converged };
            }
            tau *= 8.0;
        }
    }
}

/// Solves `H·step = −grad`, shifting `H` towards the identity when rounding
/// has made it lose positive definiteness.
fn newton_step(h: &DMatrix<f64>, grad: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = h.diagonal().abs().max().max(f64::MIN_POSITIVE);
    let mut shift = 0.0;
    for _ in 0..40 {
        let shifted = h + DMatrix::identity(h.nrows(), h.ncols()) * shift;
        if let Some(ch) = shifted.cholesky() {
            return Some(-ch.solve(grad));
        }
        shift = if shift == 0.0 { scale * 1e-14 } else { shift * 10.0 };
    }
    None
}

fn row(v: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(v)
}

fn block(rows: &[[f64; 6]; 2]) -> DMatrix<f64> {
    DMatrix::from_fn(2, 6, |i, j| rows[i][j])
}

/// Real Bloch vector `(n_x, n_z)` of a real qubit state `(cos θ, sin θ)`.
fn real_bloch(v: [f64; 2]) -> [f64; 2] {
    [2.0 * v[0] * v[1], v[0] * v[0] - v[1] * v[1]]
}

/// Real symmetric `h₀·1 + h_x σ_x + h_z σ_z` as an operator in the frame `(w₀, w₁)`.
fn frame_operator(h0: f64, hx: f64, hz: f64, w: &[Vec<Complex64>; 2]) -> HermitianOperator {
    let local = [[h0 + hz, hx], [hx, h0 - hz]];
    let m = ComplexMatrix::from_fn(2, 2, |r, c| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, wi) in w.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                acc += wi[r] * local[i][j] * wj[c].conj();
            }
        }
        acc
    });
    HermitianOperator::symmetrized(m)
}

#[derive(Clone, Debug)]
pub struct MarginBlockResult {
    /// Element for the guess "first state".
    pub first: HermitianOperator,
    /// Element for the guess "second state".
    pub second: HermitianOperator,
    pub q_success: f64,
    pub q_error: f64,
    /// Upper bound on how far `q_success` can lie below the optimum.
    pub gap_bound: f64,
    pub converged: bool,
}

/// Maximizes `½⟨x₁|A|x₁⟩ + ½⟨x₂|B|x₂⟩` over `A, B ≥ 0`, `A + B ≤ 1`, subject to
/// `½⟨x₁|B|x₁⟩ + ½⟨x₂|A|x₂⟩ ≤ margin`.
///
/// The pair is rotated so both states are real, which makes an optimal `A, B`
/// real symmetric; in Bloch form the problem is a six-variable second-order
/// cone program solved by the barrier method to a duality gap of `cfg.tol`
/// (at most `1e-9`). Zero margin restricts `A` to `x₂⊥` and `B` to `x₁⊥`.
/// The returned pair is always feasible, so `q_success` never exceeds the true
/// optimum up to a rounding slack of `1e-14` in the error probability.
pub fn maximize_margin_block(
    x1: &PureState,
    x2: &PureState,
    margin: f64,
    cfg: &OptimizerConfig,
) -> Result<MarginBlockResult> {
    cfg.validate()?;
    if x1.dim() != 2 || x2.dim() != 2 {
        return Err(Error::dim(format!(
            "margin block needs states in a 2-dim space, got dims {} and {}",
            x1.dim(),
            x2.dim()
        )));
    }
    if !(0.0..=1.0).contains(&margin) {
        return Err(Error::domain(format!("error margin must lie in [0, 1], got {margin}")));
    }

    // frame (w₀, w₁): x₁ ↦ (1, 0), x₂ ↦ (t, √(1 − t²)) up to phase, t ≥ 0
    let ov = x1.overlap(x2)?;
    let t = ov.norm().min(1.0);
    let w0 = x1.amplitudes().to_vec();
    let rest: Vec<Complex64> = if t < 1.0 - 1e-15 {
        let phase = if t > 0.0 { ov.conj() / t } else { Complex64::new(1.0, 0.0) };
        let raw: Vec<Complex64> = x2.amplitudes().iter().zip(&w0).map(|(b, a)| b * phase - a * t).collect();
        let n = linalg_norm(&raw);
        raw.iter().map(|z| z / n).collect()
    } else {
        vec![-w0[1].conj(), w0[0].conj()]
    };
    let frame = [w0, rest];
    let n1 = real_bloch([1.0, 0.0]);
    let n2 = real_bloch([t, (1.0 - t * t).max(0.0).sqrt()]);
    let target_gap = cfg.tol.min(1e-9);

    let score = |c: &Candidate| 0.5 * (c.first.expectation(x1.amplitudes()) + c.second.expectation(x2.amplitudes()));

    let mut best = zero_error_candidate(x1, x2, t, n1, n2, target_gap)?;
    if margin > 0.0 {
        let interior = interior_candidate(x1, x2, &frame, n1, n2, margin, &best.x, target_gap)?;
        // for margins near 1e-10 and below the cone program is ill-conditioned
        // and the zero-error face can be the better of two feasible points
        if score(&interior) >= score(&best) {
            best = interior;
        }
    }
    let q_success = score(&best);
    let Candidate { first, second, gap_bound, converged, .. } = best;
    let q_error = 0.5 * (second.expectation(x1.amplitudes()) + first.expectation(x2.amplitudes()));
    Ok(MarginBlockResult { first, second, q_success, q_error, gap_bound, converged })
}

/// A feasible pair with its solver diagnostics.
struct Candidate {
    /// Solver variables in the real frame.
    x: DVector<f64>,
    first: HermitianOperator,
    second: HermitianOperator,
    gap_bound: f64,
    converged: bool,
}

/// Best zero-error pair `A = p|x₂⊥⟩⟨x₂⊥|`, `B = q|x₁⊥⟩⟨x₁⊥|`, found over `(p, q)`.
fn zero_error_candidate(
    x1: &PureState,
    x2: &PureState,
    t: f64,
    n1: [f64; 2],
    n2: [f64; 2],
    target_gap: f64,
) -> Result<Candidate> {
    // in the real frame A = (p/2)(1 − n₂·σ) and B = (q/2)(1 − n₁·σ)
    let w = 0.5 * (1.0 - t * t);
    let problem = Socp {
        c: DVector::from_row_slice(&[w, w]),
        cones: vec![Cone {
            a: DVector::from_row_slice(&[-0.5, -0.5]),
            alpha: 1.0,
            b: DMatrix::from_row_slice(2, 2, &[0.5 * n2[0], 0.5 * n1[0], 0.5 * n2[1], 0.5 * n1[1]]),
            beta: DVector::zeros(2),
        }],
        linear: vec![(DVector::from_row_slice(&[-1.0, 0.0]), 0.0), (DVector::from_row_slice(&[0.0, -1.0]), 0.0)],
    };
    let sol = problem.solve(DVector::from_row_slice(&[0.25, 0.25]), target_gap);
    let perp = |v: &[Complex64]| vec![-v[1].conj(), v[0].conj()];
    let first = HermitianOperator::projector(&perp(x2.amplitudes())).scale(sol.x[0].max(0.0));
    let second = HermitianOperator::projector(&perp(x1.amplitudes())).scale(sol.x[1].max(0.0));
    let (first, second) = repair(first, second, x1, x2, 0.0)?;
    Ok(Candidate { x: sol.x, first, second, gap_bound: sol.gap_bound, converged: sol.converged })
}

/// Full cone program in the variables `(a₀, a_x, a_z, b₀, b_x, b_z)` with
/// `A = a₀ + a_x σ_x + a_z σ_z` and `B` likewise, in the real frame.
#[allow(clippy::too_many_arguments)]
fn interior_candidate(
    x1: &PureState,
    x2: &PureState,
    frame: &[Vec<Complex64>; 2],
    n1: [f64; 2],
    n2: [f64; 2],
    margin: f64,
    zero_error: &DVector<f64>,
    target_gap: f64,
) -> Result<Candidate> {
    let c = row(&[0.5, 0.5 * n1[0], 0.5 * n1[1], 0.5, 0.5 * n2[0], 0.5 * n2[1]]);
    let e = row(&[0.5, 0.5 * n2[0], 0.5 * n2[1], 0.5, 0.5 * n1[0], 0.5 * n1[1]]);
    let unit = |i: usize| {
        let mut v = [0.0; 6];
        v[i] = 1.0;
        v
    };
    let problem = Socp {
        c,
        cones: vec![
            Cone { a: row(&unit(0)), alpha: 0.0, b: block(&[unit(1), unit(2)]), beta: DVector::zeros(2) },
            Cone { a: row(&unit(3)), alpha: 0.0, b: block(&[unit(4), unit(5)]), beta: DVector::zeros(2) },
            Cone {
                a: row(&[-1.0, 0.0, 0.0, -1.0, 0.0, 0.0]),
                alpha: 1.0,
                b: block(&[[0.0, 1.0, 0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 1.0, 0.0, 0.0, 1.0]]),
                beta: DVector::zeros(2),
            },
        ],
        linear: vec![(e, margin)],
    };
    // shrink the zero-error optimum and add a little identity: strictly
    // feasible, and close to the optimum when the margin is small
    let (p, q) = (zero_error[0].max(0.0), zero_error[1].max(0.0));
    let eps = (0.25 * margin).min(0.1);
    let keep = 1.0 - (4.0 * eps).max(1e-3);
    let start = row(&[
        keep * 0.5 * p + eps,
        -keep * 0.5 * p * n2[0],
        -keep * 0.5 * p * n2[1],
        keep * 0.5 * q + eps,
        -keep * 0.5 * q * n1[0],
        -keep * 0.5 * q * n1[1],
    ]);
    let start = if problem.interior(&start) { start } else { row(&[eps, 0.0, 0.0, eps, 0.0, 0.0]) };
    let sol = problem.solve(start, target_gap);
    let x = &sol.x;
    let first = frame_operator(x[0], x[1], x[2], frame);
    let second = frame_operator(x[3], x[4], x[5], frame);
    let (first, second) = repair(first, second, x1, x2, margin)?;
    Ok(Candidate { x: sol.x, first, second, gap_bound: sol.gap_bound, converged: sol.converged })
}

fn linalg_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Error-probability excess attributed to rounding rather than infeasibility.
const ROUNDING_SLACK: f64 = 1e-14;

/// Removes rounding-level infeasibility so the pair is exactly a sub-POVM within the margin.
fn repair(
    a: HermitianOperator,
    b: HermitianOperator,
    x1: &PureState,
    x2: &PureState,
    margin: f64,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let mut a = a.map_spectrum(|l| l.max(0.0))?;
    let mut b = b.map_spectrum(|l| l.max(0.0))?;
    let top = (&a + &b).max_eigenvalue()?;
    if top > 1.0 {
        a = a.scale(1.0 / top);
        b = b.scale(1.0 / top);
    }
    let err = 0.5 * (b.expectation(x1.amplitudes()) + a.expectation(x2.amplitudes()));
    if err > margin + ROUNDING_SLACK {
        let k = margin / err;
        a = a.scale(k);
        b = b.scale(k);
    }
    Ok((a, b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub errors: u64,
    pub inconclusive: u64,
    pub p_success_hat: f64,
    pub p_error_hat: f64,
    /// Standard error of `p_success_hat`.
    pub stderr: f64,
}

/// Monte Carlo estimate of comparison success and error rates.
///
/// Each trial draws `k` and `j` independently from the priors, prepares
/// `ρ_k ⊗ ρ_j` and samples an outcome of `povm` with Born probabilities.
/// Probability mass not covered by the POVM counts as inconclusive. Trials
/// run in fixed-size chunks, chunk `i` using stream `i` of the seeded
/// generator, so the report depends only on the seed and the inputs.
pub fn simulate_comparison(ensemble: &Ensemble, povm: &Povm, trials: u64, seed: u64) -> Result<SimulationReport> {
    let d = ensemble.dim();
    if povm.dim() != d * d {
        return Err(Error::dim(format!("comparison POVM acts on dimension {}, expected {}", povm.dim(), d * d)));
    }
    if trials == 0 {
        return Err(Error::domain("trials must be positive"));
    }
    for (label, _) in povm.elements() {
        if !matches!(label, Outcome::Same | Outcome::Different | Outcome::Inconclusive) {
            return Err(Error::InvalidPovm(format!("unexpected outcome label {label} for a comparison")));
        }
    }

    let n = ensemble.len();
    // table[k][j] = cumulative probabilities of (same, different) given ρ_k ⊗ ρ_j
    let mut table = vec![[0.0f64; 2]; n * n];
    for (k, rk) in ensemble.states().iter().enumerate() {
        for (j, rj) in ensemble.states().iter().enumerate() {
            let joint = rk.density().kron(rj.density());
            let mut same = 0.0;
            let mut diff = 0.0;
            let mut total = 0.0;
            for (label, e) in povm.elements() {
                let p = e.trace_product(&joint);
                if p < -PROBABILITY_TOL {
                    return Err(Error::InvalidPovm(format!(
                        "outcome {label} has probability {p:e} for states ({k}, {j})"
                    )));
                }
                let p = p.max(0.0);
                total += p;
                match label {
                    Outcome::Same => same += p,
                    Outcome::Different => diff += p,
                    _ => {}
                }
            }
            if total > 1.0 + PROBABILITY_TOL {
                return Err(Error::InvalidPovm(format!("outcome probabilities sum to {total} for states ({k}, {j})")));
            }
            table[k * n + j] = [same, same + diff];
        }
    }
    let mut cumulative: Vec<f64> = ensemble
        .priors()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    *cumulative.last_mut().expect("nonempty ensemble") = f64::INFINITY;
    let pick = |u: f64| cumulative.iter().position(|&c| u < c).expect("last bucket is open");

    let chunks = trials.div_ceil(SIMULATION_CHUNK as u64);
    let counts: Vec<[u64; 3]> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let start = chunk * SIMULATION_CHUNK as u64;
            let len = (trials - start).min(SIMULATION_CHUNK as u64);
            let mut c = [0u64; 3];
            for _ in 0..len {
                let k = pick(rng.random::<f64>());
                let j = pick(rng.random::<f64>());
                let [same, same_or_diff] = table[k * n + j];
                let u: f64 = rng.random();
                let said_same = u < same;
                let said_diff = !said_same && u < same_or_diff;
                if said_same || said_diff {
                    if said_same == (k == j) {
                        c[0] += 1;
                    } else {
                        c[1] += 1;
                    }
                } else {
                    c[2] += 1;
                }
            }
            c
        })
        .collect();
    let [successes, errors, inconclusive] =
        counts.iter().fold([0u64; 3], |acc, c| [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2]]);
    let p_hat = successes as f64 / trials as f64;
    Ok(SimulationReport {
        trials,
        seed,
        successes,
        errors,
        inconclusive,
        p_success_hat: p_hat,
        p_error_hat: errors as f64 / trials as f64,
        stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::states_with_overlap;

    #[test]
    fn two_outcome_diagonal() {
        let lambda = HermitianOperator::from_real_diagonal(&[0.3, -0.1]);
        let r = maximize_two_outcome(&lambda, &OptimizerConfig::default()).unwrap();
        assert!((r.value - 0.3).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn margin_block_extremes() {
        let cfg = OptimizerConfig::default();
        let (x1, x2) = states_with_overlap(0.6).unwrap();
        // helstrom value (1 + 0.8)/2
        let r = maximize_margin_block(&x1, &x2, 1.0, &cfg).unwrap();
        assert!((r.q_success - 0.9).abs() < 1e-8, "{}", r.q_success);
        // unambiguous value 1 - 0.6
        let r = maximize_margin_block(&x1, &x2, 0.0, &cfg).unwrap();
        assert!((r.q_success - 0.4).abs() < 1e-8, "{}", r.q_success);
        assert!(r.q_error <= 1e-15);
    }

    #[test]
    fn margin_block_rejects_bad_input() {
        let cfg = OptimizerConfig::default();
        let (x1, x2) = states_with_overlap(0.6).unwrap();
        assert!(matches!(maximize_margin_block(&x1, &x2, -0.1, &cfg), Err(Error::Domain(_))));
        let q = PureState::basis(3, 0).unwrap();
        assert!(matches!(maximize_margin_block(&q, &q, 0.1, &cfg), Err(Error::Dimension(_))));
    }
}
