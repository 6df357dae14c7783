//! Density matrices over labelled tensor spaces and the scalar quantities
//! computed from them.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron, ComplexMatrix, C64};
use crate::space::TensorSpace;

/// Allowed `|tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Allowed `max |ρ - ρ†|`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are round-off; anything lower is an error.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// A unit-trace, Hermitian, positive semidefinite matrix on a [`TensorSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: TensorSpace,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity.
    pub fn new(space: TensorSpace, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_parts(space, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape checks only. The caller is responsible for the physical
    /// invariants (see [`DensityMatrix::validate`]).
    pub fn from_parts(space: TensorSpace, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows(), matrix.cols()));
        }
        if matrix.rows() != space.total_dim() {
            return Err(Error::DimensionMismatch { expected: space.total_dim(), found: matrix.rows() });
        }
        Ok(Self { space, matrix })
    }

    /// `|ψ⟩⟨ψ|`; `psi` must be normalised.
    pub fn pure(space: TensorSpace, psi: &[C64]) -> Result<Self> {
        if psi.len() != space.total_dim() {
            return Err(Error::DimensionMismatch { expected: space.total_dim(), found: psi.len() });
        }
        Self::new(space, ComplexMatrix::outer(psi))
    }

    pub fn maximally_mixed(space: TensorSpace) -> Self {
        let d = space.total_dim();
        let matrix = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
        Self { space, matrix }
    }

    /// `self ⊗ other` on the concatenated space.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let factors = self
            .space
            .labels()
            .iter()
            .cloned()
            .zip(self.space.dims().iter().copied())
            .chain(other.space.labels().iter().cloned().zip(other.space.dims().iter().copied()));
        let space = TensorSpace::new(factors)?;
        Ok(Self { space, matrix: kron(&self.matrix, &other.matrix) })
    }

    /// Same matrix, new labels (dimensions unchanged).
    pub fn relabeled<S: Into<String>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.space.len() {
            return Err(Error::DimensionMismatch { expected: self.space.len(), found: labels.len() });
        }
        let space = TensorSpace::new(labels.into_iter().zip(self.space.dims().iter().copied()))?;
        Ok(Self { space, matrix: self.matrix.clone() })
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix.get(i, j)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Checks the three state invariants at their default tolerances.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(TRACE_TOL)
    }

    /// Like [`validate`](Self::validate) with a custom trace tolerance.
    pub fn validate_with(&self, trace_tol: f64) -> Result<()> {
        let defect = self.matrix.hermiticity_defect();
        if !(defect <= HERMITICITY_TOL) {
            return Err(Error::NotHermitian(defect));
        }
        let drift = (self.trace() - C64::new(1.0, 0.0)).norm();
        if !(drift <= trace_tol) {
            return Err(Error::InvalidTrace(drift));
        }
        let min = self.eigenvalues()?[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(())
    }

    /// `U ρ U†` on the same space.
    pub fn evolve(&self, u: &ComplexMatrix) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.conjugate_by(u) }
    }

    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        partial_trace(self, keep)
    }

    /// `⟨i|ρ_label|j⟩` of a single-site reduced state.
    pub fn site_element(&self, label: &str, i: usize, j: usize) -> Result<C64> {
        Ok(self.partial_trace(&[label])?.get(i, j))
    }
}

/// Reduced state on `keep`, which is listed in the space's original order.
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix> {
    let space = rho.space();
    let kept = space.positions_sorted(keep)?;
    if kept.len() == space.len() {
        return Ok(rho.clone());
    }
    let dims = space.dims();
    let strides = space.strides();
    let traced: Vec<usize> = (0..space.len()).filter(|p| !kept.contains(p)).collect();

    // Full-space offset contributed by each kept / traced multi-index.
    let offsets = |positions: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &p in positions {
            let mut next = Vec::with_capacity(out.len() * dims[p]);
            for &base in &out {
                for a in 0..dims[p] {
                    next.push(base + a * strides[p]);
                }
            }
            out = next;
        }
        out
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    let m = rho.matrix();
    let dk = kept_off.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (i, &ki) in kept_off.iter().enumerate() {
        for (j, &kj) in kept_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &traced_off {
                acc += m.get(ki + t, kj + t);
            }
            out.set(i, j, acc);
        }
    }
    DensityMatrix::from_parts(space.subspace(keep)?, out)
}

/// Shannon entropy in bits of a spectrum, clamping round-off negatives.
pub fn entropy_bits(eigenvalues: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &lam in eigenvalues {
        if lam < -POSITIVITY_TOL {
            return Err(Error::NegativeEigenvalue(lam));
        }
        if lam > 0.0 {
            h -= lam * lam.log2();
        }
    }
    Ok(h.max(0.0))
}

/// `-Σ λ log₂ λ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_bits(&rho.eigenvalues()?)
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.rows();
    let mut c = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                c += m.get(i, j).norm();
            }
        }
    }
    c
}

/// Thermal qubit `diag(1 + tanh β, 1 - tanh β) / 2`, labelled `E`.
pub fn gibbs_qubit(beta: f64) -> Result<DensityMatrix> {
    if !beta.is_finite() {
        return Err(Error::NonFinite("beta"));
    }
    let th = beta.tanh();
    let space = TensorSpace::qubits(["E"])?;
    DensityMatrix::from_parts(space, ComplexMatrix::from_real_diagonal(&[(1.0 + th) / 2.0, (1.0 - th) / 2.0]))
}

/// `½ Σ |eig(a - b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch);
    }
    let diff = a.matrix() - b.matrix();
    let eig = hermitian_eigenvalues(&diff.hermitian_part())?;
    Ok(0.5 * eig.iter().map(|x| x.abs()).sum::<f64>())
}
