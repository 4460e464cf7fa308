//! Pure and mixed states, ensembles with priors, and Bloch vectors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, pauli_x, pauli_y, pauli_z, ComplexMatrix, HermitianOperator, ZERO};

/// Tolerance on `⟨ψ|ψ⟩ = 1` and on prior normalization.
pub const NORM_TOL: f64 = 1e-12;

/// Tolerance on density-operator trace and positivity.
pub const DENSITY_TOL: f64 = 1e-10;

/// Amplitudes below this modulus are skipped when fixing the global phase.
const PHASE_REF_CUTOFF: f64 = 1e-10;

/// Normalized state vector.
///
/// The global phase is fixed at construction: the first amplitude with
/// non-negligible modulus is made real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose norm is 1 within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::dim("state must have at least one amplitude"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invariant("state has non-finite amplitudes".into()));
        }
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant(format!("state is not normalized: <psi|psi> = {n2}")));
        }
        Ok(Self::fix_phase(amplitudes, n2.sqrt()))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = linalg::norm(&amplitudes);
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self::fix_phase(amplitudes, n))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::dim(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    fn fix_phase(mut amplitudes: Vec<Complex64>, norm: f64) -> Self {
        let phase = amplitudes
            .iter()
            .find(|z| z.norm() / norm > PHASE_REF_CUTOFF)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(Complex64::new(1.0, 0.0));
        for z in &mut amplitudes {
            *z = *z * phase / norm;
        }
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> HermitianOperator {
        HermitianOperator::projector(&self.amplitudes)
    }

    pub fn density(&self) -> MixedState {
        MixedState { density: self.projector() }
    }

    /// `⟨self|other⟩`
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        overlap(self, other)
    }

    /// `|self⟩ ⊗ |other⟩` as a raw vector.
    pub fn tensor(&self, other: &PureState) -> Vec<Complex64> {
        linalg::kron_vec(&self.amplitudes, &other.amplitudes)
    }
}

/// Inner product `⟨a|b⟩`.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::dim(format!("overlap of states with dims {} and {}", a.dim(), b.dim())));
    }
    Ok(linalg::inner(&a.amplitudes, &b.amplitudes))
}

/// Density operator: positive semidefinite with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    density: HermitianOperator,
}

impl MixedState {
    pub fn new(density: HermitianOperator) -> Result<Self> {
        let tr = density.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::Invariant(format!("density operator trace is {tr}, expected 1")));
        }
        let min = density.min_eigenvalue()?;
        if min < -DENSITY_TOL {
            return Err(Error::Invariant(format!(
                "density operator is not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { density })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { density: HermitianOperator::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.density.dim()
    }

    pub fn density(&self) -> &HermitianOperator {
        &self.density
    }
}

impl From<&PureState> for MixedState {
    fn from(s: &PureState) -> Self {
        s.density()
    }
}

/// Real 3-vector `n` with `ρ = (1 + n·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::domain("Bloch vector has non-finite components"));
        }
        if v.norm() > 1.0 + NORM_TOL {
            return Err(Error::domain(format!("Bloch vector length {} exceeds 1", v.norm())));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn sub(&self, other: &Self) -> [f64; 3] {
        [self.x - other.x, self.y - other.y, self.z - other.z]
    }
}

/// `n·σ` for a real 3-vector.
pub fn sigma_dot(n: [f64; 3]) -> HermitianOperator {
    &(&pauli_x().scale(n[0]) + &pauli_y().scale(n[1])) + &pauli_z().scale(n[2])
}

pub fn bloch_from_state(s: &MixedState) -> Result<BlochVector> {
    if s.dim() != 2 {
        return Err(Error::dim(format!("Bloch vectors need a qubit, got dimension {}", s.dim())));
    }
    let rho = s.density();
    let x = rho.trace_product(&pauli_x());
    let y = rho.trace_product(&pauli_y());
    let z = rho.trace_product(&pauli_z());
    // clip rounding overshoot on pure states
    let len = (x * x + y * y + z * z).sqrt();
    let k = if len > 1.0 { 1.0 / len } else { 1.0 };
    BlochVector::new(x * k, y * k, z * k)
}

pub fn state_from_bloch(n: &BlochVector) -> Result<MixedState> {
    let n = BlochVector::new(n.x, n.y, n.z)?;
    let rho = &HermitianOperator::identity(2) + &sigma_dot([n.x, n.y, n.z]);
    Ok(MixedState { density: rho.scale(0.5) })
}

/// The `Z_N` phase-state family `(|0⟩ + e^{2πik/N}|1⟩)/√2`, `k = 0..N`.
pub fn phase_states(n: usize) -> Result<Vec<PureState>> {
    if n < 2 {
        return Err(Error::domain(format!("phase-state family needs N >= 2, got {n}")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            PureState::new(vec![Complex64::new(h, 0.0), Complex64::from_polar(h, theta)])
        })
        .collect()
}

/// Two real qubit states with `⟨φ₁|φ₂⟩ = s`, symmetric about the x axis.
pub fn states_with_overlap(s: f64) -> Result<(PureState, PureState)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain(format!("overlap modulus must lie in [0, 1], got {s}")));
    }
    let theta = s.acos() / 2.0;
    let (c, sn) = (theta.cos(), theta.sin());
    Ok((PureState::normalized(vec![c.into(), sn.into()])?, PureState::normalized(vec![c.into(), (-sn).into()])?))
}

/// States with prior probabilities.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<MixedState>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<MixedState>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::domain("ensemble must contain at least one state"));
        }
        if states.len() != priors.len() {
            return Err(Error::dim(format!("{} states but {} priors", states.len(), priors.len())));
        }
        let d = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::dim(format!("ensemble mixes dimensions {d} and {}", bad.dim())));
        }
        if let Some(p) = priors.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::domain(format!("prior probabilities must be nonnegative, got {p}")));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("prior probabilities sum to {total}, expected 1")));
        }
        Ok(Self { states, priors })
    }

    pub fn from_pure(states: &[PureState], priors: Vec<f64>) -> Result<Self> {
        Self::new(states.iter().map(PureState::density).collect(), priors)
    }

    /// Pure states with equal priors `1/N`.
    pub fn uniform(states: &[PureState]) -> Result<Self> {
        let n = states.len().max(1);
        Self::from_pure(states, vec![1.0 / n as f64; states.len()])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[MixedState] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `Σ_k η_k ρ_k`
    pub fn average(&self) -> HermitianOperator {
        self.states
            .iter()
            .zip(&self.priors)
            .fold(HermitianOperator::zero(self.dim()), |acc, (s, &p)| &acc + &s.density().scale(p))
    }
}

/// One entry of the `states` array in an ensemble file: either amplitudes or a density matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum StateEntry {
    Pure(Vec<[f64; 2]>),
    Density(Vec<Vec<[f64; 2]>>),
}

/// JSON ensemble format: `{"states": [[[re, im], ...], ...], "priors": [...]}`.
///
/// `priors` may be omitted for equal weights. Entries may also be density
/// matrices given as lists of rows.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EnsembleFile {
    pub states: Vec<StateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
}

/// Prefixes an entry's error with its index, keeping the error kind.
fn tag_state(k: usize, e: Error) -> Error {
    match e {
        Error::Invariant(m) => Error::Invariant(format!("state {k}: {m}")),
        Error::Dimension(m) => Error::Dimension(format!("state {k}: {m}")),
        Error::Domain(m) => Error::Domain(format!("state {k}: {m}")),
        other => other,
    }
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl EnsembleFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("ensemble JSON: {e}")))
    }

    pub fn from_pure(states: &[PureState], priors: Option<Vec<f64>>) -> Self {
        let states =
            states.iter().map(|s| StateEntry::Pure(s.amplitudes().iter().map(|z| [z.re, z.im]).collect())).collect();
        Self { states, priors }
    }

    pub fn priors_or_uniform(&self) -> Vec<f64> {
        self.priors.clone().unwrap_or_else(|| vec![1.0 / self.states.len().max(1) as f64; self.states.len()])
    }

    /// Pure-state view; fails if any entry is a density matrix.
    pub fn pure_states(&self) -> Result<Vec<PureState>> {
        self.states
            .iter()
            .enumerate()
            .map(|(k, entry)| match entry {
                StateEntry::Pure(amps) => PureState::new(to_complex(amps)).map_err(|e| tag_state(k, e)),
                StateEntry::Density(_) => {
                    Err(Error::domain(format!("state {k} is a density matrix; this operation needs pure states")))
                }
            })
            .collect()
    }

    pub fn to_ensemble(&self) -> Result<Ensemble> {
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(k, entry)| {
                let tag = |e: Error| tag_state(k, e);
                match entry {
                    StateEntry::Pure(amps) => PureState::new(to_complex(amps)).map(|s| s.density()).map_err(tag),
                    StateEntry::Density(rows) => {
                        let n = rows.len();
                        if rows.iter().any(|r| r.len() != n) {
                            return Err(tag(Error::dim("density matrix must be square")));
                        }
                        let flat: Vec<Complex64> = rows.iter().flat_map(|r| to_complex(r)).collect();
                        let m = ComplexMatrix::from_row_slice(n, n, &flat).map_err(tag)?;
                        MixedState::new(HermitianOperator::new(m).map_err(tag)?).map_err(tag)
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(states, self.priors_or_uniform())
    }
}
