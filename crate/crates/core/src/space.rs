//! Labelled tensor-product spaces.
//!
//! The leftmost label is the slowest-varying index of the Kronecker product;
//! `embed` and `partial_trace` both rely on that ordering.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{kron_all, ComplexMatrix};
use crate::MAX_DIM;

/// Ordered list of subsystem labels with their dimensions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TensorSpace {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut dims = Vec::new();
        for (label, dim) in factors {
            let label = label.into();
            if dim == 0 {
                return Err(Error::ZeroDimension(label));
            }
            if labels.contains(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            labels.push(label);
            dims.push(dim);
        }
        if labels.is_empty() {
            return Err(Error::EmptySelection);
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
        if total > MAX_DIM {
            return Err(Error::DimensionTooLarge(total));
        }
        Ok(Self { labels, dims })
    }

    /// Space of qubits with the given labels.
    pub fn qubits<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(labels.into_iter().map(|l| (l, 2)))
    }

    /// `S, A1, ..., An`.
    pub fn system_and_fragments(n_accessible: usize) -> Result<Self> {
        Self::qubits(std::iter::once("S".to_string()).chain(fragment_labels(n_accessible)))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    /// Sub-space on the given labels, kept in this space's order.
    pub fn subspace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let positions = self.positions_sorted(keep)?;
        Ok(Self {
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
            dims: positions.iter().map(|&p| self.dims[p]).collect(),
        })
    }

    /// Positions of `keep` in ascending order. Rejects empty, unknown and
    /// repeated labels.
    pub(crate) fn positions_sorted<S: AsRef<str>>(&self, keep: &[S]) -> Result<Vec<usize>> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut positions = Vec::with_capacity(keep.len());
        for label in keep {
            let p = self.position(label.as_ref())?;
            if positions.contains(&p) {
                return Err(Error::DuplicateLabel(label.as_ref().to_string()));
            }
            positions.push(p);
        }
        positions.sort_unstable();
        Ok(positions)
    }

    /// Space with one more factor appended last.
    pub fn with_appended(&self, label: impl Into<String>, dim: usize) -> Result<Self> {
        let extra = std::iter::once((label.into(), dim));
        Self::new(self.labels.iter().cloned().zip(self.dims.iter().copied()).chain(extra))
    }

    /// Row-major strides of each factor.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }
}

impl fmt::Debug for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (l, d)) in self.labels.iter().zip(&self.dims).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:{d}")?;
        }
        write!(f, "]")
    }
}

/// `A1, ..., An`.
pub fn fragment_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("A{i}")).collect()
}

/// Places `op` on `target`, identity elsewhere.
pub fn embed(op: &ComplexMatrix, target: &str, space: &TensorSpace) -> Result<ComplexMatrix> {
    let pos = space.position(target)?;
    let d = space.dims()[pos];
    if !op.is_square() {
        return Err(Error::NotSquare(op.rows(), op.cols()));
    }
    if op.rows() != d {
        return Err(Error::DimensionMismatch { expected: d, found: op.rows() });
    }
    let left: usize = space.dims()[..pos].iter().product();
    let right: usize = space.dims()[pos + 1..].iter().product();
    let factors = [ComplexMatrix::identity(left), op.clone(), ComplexMatrix::identity(right)];
    Ok(kron_all(factors.iter()))
}

/// Places a two-site operator, given on `first ⊗ second` in that order, into
/// `space`. The two labels need not be adjacent.
pub fn embed_pair(op: &ComplexMatrix, first: &str, second: &str, space: &TensorSpace) -> Result<ComplexMatrix> {
    let p1 = space.position(first)?;
    let p2 = space.position(second)?;
    if p1 == p2 {
        return Err(Error::OverlappingLabels(first.to_string()));
    }
    let (d1, d2) = (space.dims()[p1], space.dims()[p2]);
    if !op.is_square() {
        return Err(Error::NotSquare(op.rows(), op.cols()));
    }
    if op.rows() != d1 * d2 {
        return Err(Error::DimensionMismatch { expected: d1 * d2, found: op.rows() });
    }
    let n = space.total_dim();
    let strides = space.strides();
    let (s1, s2) = (strides[p1], strides[p2]);
    let mut out = ComplexMatrix::zeros(n, n);
    for row in 0..n {
        let (a1, a2) = ((row / s1) % d1, (row / s2) % d2);
        let rest = row - a1 * s1 - a2 * s2;
        for b1 in 0..d1 {
            for b2 in 0..d2 {
                let v = op.get(a1 * d2 + a2, b1 * d2 + b2);
                if v.norm_sqr() != 0.0 {
                    out.set(row, rest + b1 * s1 + b2 * s2, v);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, pauli};

    #[test]
    fn rejects_invalid_spaces() {
        assert_eq!(TensorSpace::qubits(["S", "S"]).unwrap_err(), Error::DuplicateLabel("S".into()));
        assert_eq!(TensorSpace::new([("S", 0)]).unwrap_err(), Error::ZeroDimension("S".into()));
        assert_eq!(TensorSpace::qubits(Vec::<String>::new()).unwrap_err(), Error::EmptySelection);
        assert_eq!(TensorSpace::qubits(["a", "b", "c", "d", "e", "f"]).unwrap_err(), Error::DimensionTooLarge(64));
        assert!(TensorSpace::qubits(["a", "b", "c", "d", "e"]).is_ok());
    }

    #[test]
    fn subspace_keeps_original_order() {
        let s = TensorSpace::system_and_fragments(3).unwrap();
        let sub = s.subspace(&["A2", "S"]).unwrap();
        assert_eq!(sub.labels(), &["S".to_string(), "A2".to_string()]);
        assert!(matches!(s.subspace(&["X"]), Err(Error::UnknownLabel(_))));
        assert!(matches!(s.subspace::<&str>(&[]), Err(Error::EmptySelection)));
    }

    #[test]
    fn embed_examples() {
        let s = TensorSpace::qubits(["S"]).unwrap();
        assert_eq!(embed(&pauli::z(), "S", &s).unwrap(), pauli::z());

        let sa = TensorSpace::qubits(["S", "A1"]).unwrap();
        assert_eq!(embed(&pauli::z(), "A1", &sa).unwrap(), kron(&pauli::identity(), &pauli::z()));

        let full = TensorSpace::system_and_fragments(3).unwrap();
        let chain = kron(&kron(&kron(&pauli::x(), &pauli::identity()), &pauli::identity()), &pauli::identity());
        assert_eq!(embed(&pauli::x(), "S", &full).unwrap(), chain);
    }

    #[test]
    fn embed_errors() {
        let s = TensorSpace::qubits(["S"]).unwrap();
        assert!(matches!(embed(&pauli::z(), "E", &s), Err(Error::UnknownLabel(_))));
        assert!(matches!(
            embed(&ComplexMatrix::identity(3), "S", &s),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn embed_pair_matches_kron_for_adjacent_and_split_sites() {
        let space = TensorSpace::qubits(["S", "A1", "E"]).unwrap();
        let xy = kron(&pauli::x(), &pauli::y());
        let adjacent = embed_pair(&xy, "A1", "E", &space).unwrap();
        assert_eq!(adjacent, kron(&pauli::identity(), &xy));

        let split = embed_pair(&xy, "S", "E", &space).unwrap();
        let expected = &embed(&pauli::x(), "S", &space).unwrap() * &embed(&pauli::y(), "E", &space).unwrap();
        assert_eq!(split, expected);

        // reversed order of labels
        let rev = embed_pair(&xy, "E", "S", &space).unwrap();
        let expected = &embed(&pauli::y(), "S", &space).unwrap() * &embed(&pauli::x(), "E", &space).unwrap();
        assert_eq!(rev, expected);
    }
}
