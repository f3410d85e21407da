//! Dense state-vector quantum kernel for registers of up to six qubits:
//! preparation, gates, projective measurement, density matrices, and the
//! entropy functionals the security analysis is built on.
//!
//! Conventions fixed once here and relied on everywhere else:
//!
//! * Qubit ordering is big-endian: qubit 0 is the most significant bit of
//!   the amplitude index, so `|10001⟩` has qubit 0 equal to 1.
//! * Bell states and Pauli operations carry the two-bit codes defined in
//!   [`labels`]; `iσy` is the real matrix `|0⟩⟨1| − |1⟩⟨0|`.
//! * States are compared up to global phase where a protocol compares kets;
//!   see [`PureState::approx_eq_up_to_phase`].

mod density;
mod entropy;
mod labels;
mod state;

pub use density::DensityMatrix;
pub use entropy::{holevo, von_neumann_entropy};
pub use labels::{BellLabel, MeasBasis, PauliLabel, StateLabel};
pub use state::{inner, PureState, MAX_QUBITS};

/// Complex amplitude. Stored values are always finite.
pub type ComplexAmp = num_complex::Complex64;

/// Tolerance for normalization, Hermiticity and phase-insensitive equality.
pub const TOL: f64 = 1e-9;

/// Errors raised by the quantum kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QcoreError {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("register of {requested} qubits exceeds the {MAX_QUBITS}-qubit capacity")]
    RegisterOverflow { requested: usize },
    #[error("operation requires two distinct qubits, got index {0} twice")]
    IndexClash(usize),
    #[error("single-qubit measurement cannot use the Bell basis; use bell_measure")]
    BellBasisOnSingleQubit,
    #[error("the kept-qubit set of a partial trace must be nonempty")]
    EmptyKeepSet,
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),
    #[error("state vector is not normalized (|amps|^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitudes must be finite")]
    NonFiniteAmplitude,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
