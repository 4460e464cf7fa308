//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything in this crate lives in spaces of dimension at most a few dozen,
//! so matrices are stored densely on top of `nalgebra`. [`HermitianOperator`]
//! is the workhorse: comparison operators, density operators and POVM
//! elements are all Hermitian, and most quantities of interest come out of
//! their spectra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues at or below this cutoff count as non-positive.
pub const DEFAULT_EIG_EPS: f64 = 1e-10;

/// Largest entrywise deviation from Hermiticity accepted before symmetrizing.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Residual (relative to the operator's scale) above which an eigensolve is rejected.
const EIG_RESIDUAL_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dim(format!("{} entries given for a {rows}x{cols} matrix", entries.len())));
        }
        let m = Self(DMatrix::from_row_slice(rows, cols, entries));
        if !m.is_finite() {
            return Err(Error::Invariant("matrix has non-finite entries".into()));
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { ZERO })
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols(), v.len(), "matrix-vector dimension mismatch");
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * v[j]).sum()).collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    fn from(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.0.shape())?;
        let mut list = f.debug_list();
        for i in 0..self.rows() {
            let row: Vec<_> = (0..self.cols()).map(|j| self.0[(i, j)]).collect();
            list.entry(&row);
        }
        list.finish()
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Tensor (Kronecker) product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Tensor product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `⟨a|b⟩`
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "inner product dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense complex Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity to [`HERMITIAN_TOL`] and then symmetrizes to `(A + A†)/2`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::dim(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() == 0 {
            return Err(Error::dim("operator dimension must be positive"));
        }
        if !matrix.is_finite() {
            return Err(Error::Invariant("operator has non-finite entries".into()));
        }
        let dev = matrix.max_abs_diff(&matrix.adjoint());
        if dev > HERMITIAN_TOL {
            return Err(Error::Invariant(format!("operator is not Hermitian (max |A - A†| = {dev:e})")));
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Symmetrizes without the sanity check. For operators that are Hermitian by construction.
    pub(crate) fn symmetrized(matrix: ComplexMatrix) -> Self {
        let adj = matrix.adjoint();
        Self { matrix: (&matrix + &adj).scale(0.5) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self { matrix: ComplexMatrix::from_real_diagonal(diag) }
    }

    /// `|v⟩⟨v|` (not normalized).
    pub fn projector(v: &[Complex64]) -> Self {
        Self::symmetrized(ComplexMatrix::outer(v, v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(self · other)`, which is real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "trace product dimension mismatch");
        let n = self.dim();
        let a = self.matrix.as_nalgebra();
        let b = other.matrix.as_nalgebra();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (a[(i, j)] * b[(j, i)]).re;
            }
        }
        acc
    }

    /// `⟨v|self|v⟩`
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        inner(v, &self.matrix.apply(v)).re
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { matrix: self.matrix.scale(factor) }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.kron(&other.matrix) }
    }

    /// `U · self · U†`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let adj = u.adjoint();
        Self::symmetrized(&(u * &self.matrix) * &adj)
    }

    pub fn eig(&self) -> Result<EigenSystem> {
        eig(self)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig(self)?.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("nonempty spectrum"))
    }

    /// Applies `f` to every eigenvalue, keeping the eigenvectors.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let sys = eig(self)?;
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, &lambda) in sys.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w != 0.0 {
                let v = sys.eigenvector(i);
                out = &out + &ComplexMatrix::outer(&v, &v).scale(w);
            }
        }
        Ok(Self::symmetrized(out))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

impl<'a> Add<&'a HermitianOperator> for &'a HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &'a HermitianOperator) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix + &rhs.matrix }
    }
}

impl<'a> Sub<&'a HermitianOperator> for &'a HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &'a HermitianOperator) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix - &rhs.matrix }
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}

/// Spectral decomposition with eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.column(i)
    }

    /// `V · diag(λ) · V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let diag = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        &(&self.eigenvectors * &diag) * &self.eigenvectors.adjoint()
    }
}

/// Full spectral decomposition of a Hermitian operator.
pub fn eig(h: &HermitianOperator) -> Result<EigenSystem> {
    let a = h.matrix.as_nalgebra();
    let scale = h.matrix.frobenius_norm().max(1.0);
    let Some(decomp) = SymmetricEigen::try_new(a.clone(), f64::EPSILON, 10_000) else {
        let off_diag: f64 = a
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx % (a.nrows() + 1) != 0)
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        return Err(Error::NoConvergence { residual: off_diag });
    };

    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomp.eigenvalues[i].total_cmp(&decomp.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| decomp.eigenvectors[(r, order[c])]);

    let av = h.matrix() * &vectors;
    let mut residual: f64 = 0.0;
    for (c, &lambda) in eigenvalues.iter().enumerate() {
        for r in 0..n {
            residual = residual.max((av.get(r, c) - vectors.get(r, c) * lambda).norm());
        }
    }
    if residual > EIG_RESIDUAL_TOL * scale {
        return Err(Error::NoConvergence { residual });
    }
    Ok(EigenSystem { eigenvalues, eigenvectors: vectors })
}

/// Projector onto the span of eigenvectors with eigenvalue `> eps`.
///
/// Returns the zero operator when no eigenvalue exceeds `eps`.
pub fn positive_part_projector(h: &HermitianOperator, eps: f64) -> Result<HermitianOperator> {
    h.map_spectrum(|lambda| if lambda > eps { 1.0 } else { 0.0 })
}

/// Sum of the eigenvalues strictly above `eps`.
pub fn positive_eigenvalue_sum(h: &HermitianOperator, eps: f64) -> Result<f64> {
    Ok(h.eigenvalues()?.into_iter().filter(|&l| l > eps).sum())
}

pub fn pauli_x() -> HermitianOperator {
    HermitianOperator::symmetrized(ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO }))
}

pub fn pauli_y() -> HermitianOperator {
    HermitianOperator::symmetrized(ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    }))
}

pub fn pauli_z() -> HermitianOperator {
    HermitianOperator::from_real_diagonal(&[1.0, -1.0])
}

/// The swap operator on `C^d ⊗ C^d`: `Π|a⟩|b⟩ = |b⟩|a⟩`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (col / d, col % d);
        if row == b * d + a {
            ONE
        } else {
            ZERO
        }
    })
}
