//! Comparison of two equiprobable pure states with an error margin.
//!
//! The comparison measurement `{E=, E≠, E?}` must keep the error probability
//! `P×` at or below a margin `m`. The swap `Π` and the state exchange
//! `Γ = U ⊗ U` (with `Uφ₁ = φ₂`, `Uφ₂ = φ₁`) split the two-qubit space into
//!
//! * `V++ = span{X₁, X₂}`, `X₁ = |φ₁φ₁⟩ + |φ₂φ₂⟩`, `X₂ = |φ₁φ₂⟩ + |φ₂φ₁⟩`,
//! * `V+− = span{Y₊}`, `Y₊ = |φ₁φ₁⟩ − |φ₂φ₂⟩`,
//! * `V−− = span{Y₋}`, `Y₋ = |φ₁φ₂⟩ − |φ₂φ₁⟩`.
//!
//! `Y₊` always belongs to `E=` and `Y₋` to `E≠`; on `V++` the problem is a
//! two-pure-state discrimination with a rescaled margin.

use num_complex::Complex64;
use serde::Serialize;

use crate::compare::{evaluate_povm, ComparisonProbabilities};
use crate::discriminate::{
    check_unit_interval, helstrom, margin_discrimination_povm, Outcome, Povm, Regime, REGIME_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{self, kron_vec, swap_operator, ComplexMatrix, HermitianOperator};
use crate::numfmt::{format_sig, SIG_DIGITS};
use crate::oracle::{maximize_margin_block, OptimizerConfig};
use crate::states::{overlap, Ensemble, PureState};

/// Below this `⟨Y₊|Y₊⟩` the two states are treated as identical.
const DEGENERATE_NORM: f64 = 1e-12;

/// Tolerance used when validating assembled (numerically optimized) POVMs.
pub const ASSEMBLY_TOL: f64 = 1e-8;

/// Orthogonal decomposition of the doubled space by swap and exchange symmetry.
///
/// Vectors are stored normalized, with `φ₂` rephased so that `⟨φ₁|φ₂⟩ = s ≥ 0`.
#[derive(Clone, Debug)]
pub struct SymmetryBasis {
    pub overlap: f64,
    pub x1: Vec<Complex64>,
    pub x2: Vec<Complex64>,
    pub y_plus: Vec<Complex64>,
    pub y_minus: Vec<Complex64>,
    /// Squared norms of the unnormalized `X₁, X₂, Y₊, Y₋`.
    pub norm_x1: f64,
    pub norm_x2: f64,
    pub norm_y_plus: f64,
    pub norm_y_minus: f64,
    dim: usize,
    exchange: ComplexMatrix,
}

fn normalize(v: Vec<Complex64>) -> (Vec<Complex64>, f64) {
    let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let inv = 1.0 / n2.sqrt();
    (v.into_iter().map(|z| z * inv).collect(), n2)
}

fn combine(a: &[Complex64], b: &[Complex64], sign: f64) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + y * sign).collect()
}

pub fn symmetry_basis(phi1: &PureState, phi2: &PureState) -> Result<SymmetryBasis> {
    let ov = overlap(phi1, phi2)?;
    let s = ov.norm().min(1.0);
    let phase = if s > 0.0 { ov.conj() / ov.norm() } else { Complex64::new(1.0, 0.0) };
    let p1 = phi1.amplitudes().to_vec();
    let p2: Vec<Complex64> = phi2.amplitudes().iter().map(|z| z * phase).collect();

    let aa = kron_vec(&p1, &p1);
    let bb = kron_vec(&p2, &p2);
    let ab = kron_vec(&p1, &p2);
    let ba = kron_vec(&p2, &p1);
    let y_plus_raw = combine(&aa, &bb, -1.0);
    if linalg::norm(&y_plus_raw).powi(2) < DEGENERATE_NORM {
        return Err(Error::Unsupported(
            "identical states: the antisymmetric sectors vanish and no basis exists".into(),
        ));
    }
    let (x1, norm_x1) = normalize(combine(&aa, &bb, 1.0));
    let (x2, norm_x2) = normalize(combine(&ab, &ba, 1.0));
    let (y_plus, norm_y_plus) = normalize(y_plus_raw);
    let (y_minus, norm_y_minus) = normalize(combine(&ab, &ba, -1.0));

    // reflection fixing (φ₁ + φ₂) and negating (φ₁ − φ₂)
    let (u_minus, _) = normalize(combine(&p1, &p2, -1.0));
    let d = phi1.dim();
    let exchange = &ComplexMatrix::identity(d) - &ComplexMatrix::outer(&u_minus, &u_minus).scale(2.0);

    Ok(SymmetryBasis {
        overlap: s,
        x1,
        x2,
        y_plus,
        y_minus,
        norm_x1,
        norm_x2,
        norm_y_plus,
        norm_y_minus,
        dim: d,
        exchange,
    })
}

impl SymmetryBasis {
    /// `⟨X̃₁|X̃₂⟩`, equal to `2s/(1 + s²)`.
    pub fn x_overlap(&self) -> Complex64 {
        linalg::inner(&self.x1, &self.x2)
    }

    /// Single-system unitary `U` swapping the two states.
    pub fn state_exchange(&self) -> &ComplexMatrix {
        &self.exchange
    }

    /// `Π`
    pub fn swap(&self) -> ComplexMatrix {
        swap_operator(self.dim)
    }

    /// `Γ = U ⊗ U`
    pub fn exchange(&self) -> ComplexMatrix {
        self.exchange.kron(&self.exchange)
    }

    /// `(⟨v|Π|v⟩, ⟨v|Γ|v⟩)` for `X̃₁, X̃₂, Y₊, Y₋`.
    pub fn symmetry_labels(&self) -> [(f64, f64); 4] {
        let pi = self.swap();
        let gamma = self.exchange();
        let label = |v: &[Complex64]| (linalg::inner(v, &pi.apply(v)).re, linalg::inner(v, &gamma.apply(v)).re);
        [label(&self.x1), label(&self.x2), label(&self.y_plus), label(&self.y_minus)]
    }

    /// Orthonormal basis `(b₁, b₂)` of `V++` with `b₁ = X̃₁`, and the coordinates of `X̃₂` in it.
    fn block_frame(&self) -> (Vec<Complex64>, Vec<Complex64>, [f64; 2]) {
        let t = self.x_overlap().re.clamp(-1.0, 1.0);
        let rest = combine(&self.x2, &self.x1.iter().map(|z| z * t).collect::<Vec<_>>(), -1.0);
        let (b2, _) = normalize(rest);
        (self.x1.clone(), b2, [t, (1.0 - t * t).max(0.0).sqrt()])
    }
}

/// `ρ=` and `ρ≠` for two equiprobable pure states.
pub fn comparison_densities(phi1: &PureState, phi2: &PureState) -> Result<(HermitianOperator, HermitianOperator)> {
    if phi1.dim() != phi2.dim() {
        return Err(Error::dim("states must share a dimension"));
    }
    let proj = |v: Vec<Complex64>| HermitianOperator::projector(&v).scale(0.5);
    let same = &proj(phi1.tensor(phi1)) + &proj(phi2.tensor(phi2));
    let diff = &proj(phi1.tensor(phi2)) + &proj(phi2.tensor(phi1));
    Ok((same, diff))
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginComparison {
    pub overlap: f64,
    pub margin: f64,
    pub p_success: f64,
    pub p_error: f64,
    pub m_c: f64,
    pub regime: Regime,
    /// Per-system margin used by the discrimination strategy in the margin-limited regime.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

/// `m_c = s²/2`
pub fn critical_margin(s: f64) -> f64 {
    0.5 * s * s
}

fn check_inputs(s: f64, m: f64) -> Result<()> {
    check_unit_interval("overlap modulus", s)?;
    check_unit_interval("error margin", m)
}

/// Closed-form optimum of margin-constrained comparison.
pub fn optimal_margin_comparison(s: f64, m: f64) -> Result<MarginComparison> {
    check_inputs(s, m)?;
    let m_c = critical_margin(s);
    let (p_success, p_error, regime) = if m >= m_c - REGIME_TOL {
        (1.0 - m_c, m_c, Regime::Saturated)
    } else {
        let r = (2.0 * m).sqrt() + 1.0;
        (0.5 + 0.5 * r * (r - 2.0 * s), m, Regime::MarginLimited)
    };
    Ok(MarginComparison { overlap: s, margin: m, p_success, p_error, m_c, regime, mu: None })
}

/// `2μ(√μ + √(1 − s))²`, the comparison error of the discrimination strategy.
pub fn discrimination_comparison_error(s: f64, mu: f64) -> f64 {
    2.0 * mu * (mu.sqrt() + (1.0 - s).sqrt()).powi(2)
}

/// Solves `2μ(√μ + √(1 − s))² = m` for `μ ∈ [0, μ_c]` by bisection.
pub fn solve_mu_from_m(s: f64, m: f64) -> Result<f64> {
    check_inputs(s, m)?;
    let m_c = critical_margin(s);
    if m > m_c + REGIME_TOL {
        return Err(Error::domain(format!(
            "margin {m} exceeds the critical margin {m_c}; no per-system margin is needed"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, crate::discriminate::critical_discrimination_margin(s));
    if m == 0.0 {
        return Ok(0.0);
    }
    for _ in 0..200 {
        if hi - lo <= 1e-16 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if discrimination_comparison_error(s, mid) < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Both systems measured with the optimal single-system margin discrimination.
pub fn discrimination_strategy_margin(s: f64, m: f64) -> Result<MarginComparison> {
    check_inputs(s, m)?;
    let m_c = critical_margin(s);
    if m >= m_c - REGIME_TOL {
        return Ok(MarginComparison {
            overlap: s,
            margin: m,
            p_success: 1.0 - m_c,
            p_error: m_c,
            m_c,
            regime: Regime::Saturated,
            mu: None,
        });
    }
    let mu = solve_mu_from_m(s, m)?;
    let q = (mu.sqrt() + (1.0 - s).sqrt()).powi(2);
    Ok(MarginComparison {
        overlap: s,
        margin: m,
        p_success: q * q + mu * mu,
        p_error: m,
        m_c,
        regime: Regime::MarginLimited,
        mu: Some(mu),
    })
}

fn lift(block: &HermitianOperator, b1: &[Complex64], b2: &[Complex64]) -> HermitianOperator {
    let basis = [b1, b2];
    let n = b1.len();
    let m = ComplexMatrix::from_fn(n, n, |r, c| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate() {
                acc += bi[r] * block.get(i, j) * bj[c].conj();
            }
        }
        acc
    });
    HermitianOperator::symmetrized(m)
}

/// Explicit optimal `{E=, E≠, E?}` for margin `m`.
///
/// `E=` contains `|Ŷ₊⟩⟨Ŷ₊|` and `E≠` contains `|Ŷ₋⟩⟨Ŷ₋|`. The `V++` block is the
/// minimum-error measurement of `X̃₁` against `X̃₂` when `m ≥ m_c`, and otherwise
/// comes from the numerical margin optimizer with margin `2m/(1 + s²)`.
pub fn assemble_optimal_povm(phi1: &PureState, phi2: &PureState, m: f64, cfg: &OptimizerConfig) -> Result<Povm> {
    check_unit_interval("error margin", m)?;
    let basis = symmetry_basis(phi1, phi2)?;
    let s = basis.overlap;
    let (b1, b2, x2_coords) = basis.block_frame();
    let x1_2d = PureState::from_real(&[1.0, 0.0])?;
    let x2_2d = PureState::normalized(vec![x2_coords[0].into(), x2_coords[1].into()])?;

    let (e_same, e_diff) = if m >= critical_margin(s) - REGIME_TOL {
        let d = helstrom(&x1_2d.density(), &x2_2d.density(), 0.5, 0.5)?;
        let e = d.povm.elements();
        (e[0].1.clone(), e[1].1.clone())
    } else {
        let block_margin = (2.0 * m / (1.0 + s * s)).min(1.0);
        let r = maximize_margin_block(&x1_2d, &x2_2d, block_margin, cfg)?;
        (r.first, r.second)
    };

    let e_same = &lift(&e_same, &b1, &b2) + &HermitianOperator::projector(&basis.y_plus);
    let e_diff = &lift(&e_diff, &b1, &b2) + &HermitianOperator::projector(&basis.y_minus);
    let n = e_same.dim();
    let rest = &(&HermitianOperator::identity(n) - &e_same) - &e_diff;
    Povm::with_tolerance(
        vec![(Outcome::Same, e_same), (Outcome::Different, e_diff), (Outcome::Inconclusive, rest)],
        ASSEMBLY_TOL,
    )
}

/// Comparison POVM of the discrimination strategy with per-system margin `mu`:
/// `E= = e₁⊗e₁ + e₂⊗e₂`, `E≠ = e₁⊗e₂ + e₂⊗e₁`, `E? = 1 − E= − E≠`.
pub fn discrimination_comparison_povm(
    phi1: &PureState,
    phi2: &PureState,
    mu: f64,
    cfg: &OptimizerConfig,
) -> Result<Povm> {
    let d = margin_discrimination_povm(phi1, phi2, mu, cfg)?;
    let e1 = d.povm.element(Outcome::Guess(0)).expect("guess 0").clone();
    let e2 = d.povm.element(Outcome::Guess(1)).expect("guess 1").clone();
    let same = &e1.kron(&e1) + &e2.kron(&e2);
    let diff = &e1.kron(&e2) + &e2.kron(&e1);
    let n = same.dim();
    let rest = &(&HermitianOperator::identity(n) - &same) - &diff;
    Povm::with_tolerance(
        vec![(Outcome::Same, same), (Outcome::Different, diff), (Outcome::Inconclusive, rest)],
        ASSEMBLY_TOL,
    )
}

/// Success and error probabilities of a comparison POVM for two equiprobable states.
pub fn evaluate_margin_povm(phi1: &PureState, phi2: &PureState, povm: &Povm) -> Result<ComparisonProbabilities> {
    evaluate_povm(&Ensemble::uniform(&[phi1.clone(), phi2.clone()])?, povm)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MarginPoint {
    pub m: f64,
    pub p_opt: f64,
    pub p_disc: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginCurve {
    pub overlap: f64,
    pub m_c: f64,
    pub points: Vec<MarginPoint>,
}

impl MarginCurve {
    /// CSV with header `m,p_opt,p_disc,m_c`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let f = |x: f64| format_sig(x, SIG_DIGITS);
        let mut out = String::from("m,p_opt,p_disc,m_c\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{}\n", f(p.m), f(p.p_opt), f(p.p_disc), f(self.m_c)));
        }
        out
    }
}

/// `points` evenly spaced margins from 0 to `m_max` inclusive.
pub fn uniform_grid(m_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| m_max * i as f64 / (points - 1) as f64).collect(),
    }
}

/// Optimal and discrimination-strategy success probabilities along a margin grid.
pub fn fig1_curve(s: f64, grid: &[f64]) -> Result<MarginCurve> {
    check_unit_interval("overlap modulus", s)?;
    let points = grid
        .iter()
        .map(|&m| {
            Ok(MarginPoint {
                m,
                p_opt: optimal_margin_comparison(s, m)?.p_success,
                p_disc: discrimination_strategy_margin(s, m)?.p_success,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarginCurve { overlap: s, m_c: critical_margin(s), points })
}
