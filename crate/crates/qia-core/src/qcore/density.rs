//! Density matrices and partial traces.

use super::{ComplexAmp, PureState, QcoreError, TOL};

/// Square complex matrix of power-of-two dimension, row-major.
///
/// A valid density matrix is Hermitian, has unit trace and nonnegative
/// eigenvalues; [`DensityMatrix::validate`] checks the first two cheaply and
/// the entropy path checks the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<ComplexAmp>,
}

impl DensityMatrix {
    pub fn from_entries(dim: usize, entries: Vec<ComplexAmp>) -> Result<Self, QcoreError> {
        if !dim.is_power_of_two() {
            return Err(QcoreError::DimensionMismatch(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        if entries.len() != dim * dim {
            return Err(QcoreError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(DensityMatrix { dim, entries })
    }

    /// Projector |ψ⟩⟨ψ| onto a pure state.
    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amps();
        let dim = amps.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for &a in amps {
            for &b in amps {
                entries.push(a * b.conj());
            }
        }
        DensityMatrix { dim, entries }
    }

    /// Maximally mixed state I/dim.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        let mut entries = vec![ComplexAmp::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ComplexAmp::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> ComplexAmp {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[ComplexAmp] {
        &self.entries
    }

    pub fn trace(&self) -> ComplexAmp {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    /// Convex combination Σ pᵢ ρᵢ. Dimensions must agree.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self, QcoreError> {
        let dim = parts
            .first()
            .map(|(_, m)| m.dim)
            .ok_or_else(|| QcoreError::InvalidProbabilities("empty mixture".into()))?;
        let mut entries = vec![ComplexAmp::new(0.0, 0.0); dim * dim];
        for (p, m) in parts {
            if m.dim != dim {
                return Err(QcoreError::DimensionMismatch(
                    "mixture components differ in dimension".into(),
                ));
            }
            for (e, &x) in entries.iter_mut().zip(&m.entries) {
                *e += ComplexAmp::new(*p, 0.0) * x;
            }
        }
        Ok(DensityMatrix { dim, entries })
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for r in 0..self.dim {
            for c in r..self.dim {
                if (self.entry(r, c) - self.entry(c, r).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Checks Hermiticity and unit trace.
    pub fn validate(&self) -> Result<(), QcoreError> {
        if !self.is_hermitian(TOL) {
            return Err(QcoreError::NotHermitian);
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > TOL || t.im.abs() > TOL {
            return Err(QcoreError::NotNormalized { norm_sqr: t.re });
        }
        Ok(())
    }

    /// Reduced density matrix over `keep`, tracing out every other qubit.
    /// The kept qubits stay in register order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QcoreError> {
        let num_qubits = self.dim.trailing_zeros() as usize;
        partial_trace_entries(&self.entries, num_qubits, keep)
    }
}

impl PureState {
    /// Reduced density matrix of |ψ⟩⟨ψ| over `keep`, in register order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QcoreError> {
        let rho = DensityMatrix::from_pure(self);
        partial_trace_entries(&rho.entries, self.num_qubits(), keep)
    }
}

fn partial_trace_entries(
    entries: &[ComplexAmp],
    num_qubits: usize,
    keep: &[usize],
) -> Result<DensityMatrix, QcoreError> {
    if keep.is_empty() {
        return Err(QcoreError::EmptyKeepSet);
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return Err(QcoreError::IndexClash(keep_sorted[0]));
    }
    for &q in &keep_sorted {
        if q >= num_qubits {
            return Err(QcoreError::QubitOutOfRange {
                index: q,
                num_qubits,
            });
        }
    }
    let dim = 1 << num_qubits;
    let traced: Vec<usize> = (0..num_qubits)
        .filter(|q| !keep_sorted.contains(q))
        .collect();
    let kdim = 1 << keep_sorted.len();
    let tdim = 1 << traced.len();

    // Expand a (kept-bits, traced-bits) pair into a full register index.
    let expand = |kbits: usize, tbits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep_sorted.iter().enumerate() {
            if kbits >> (keep_sorted.len() - 1 - pos) & 1 == 1 {
                idx |= 1 << (num_qubits - 1 - q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if tbits >> (traced.len() - 1 - pos) & 1 == 1 {
                idx |= 1 << (num_qubits - 1 - q);
            }
        }
        idx
    };

    let mut out = vec![ComplexAmp::new(0.0, 0.0); kdim * kdim];
    for kr in 0..kdim {
        for kc in 0..kdim {
            let mut sum = ComplexAmp::new(0.0, 0.0);
            for t in 0..tdim {
                let row = expand(kr, t);
                let col = expand(kc, t);
                sum += entries[row * dim + col];
            }
            out[kr * kdim + kc] = sum;
        }
    }
    DensityMatrix::from_entries(kdim, out)
}
