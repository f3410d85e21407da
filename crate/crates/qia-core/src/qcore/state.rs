//! Pure states: preparation, tensoring, gates, and projective measurement.

use rand::Rng;

use super::{BellLabel, ComplexAmp, MeasBasis, PauliLabel, QcoreError, StateLabel, TOL};
use crate::runtime::SeededRng;

/// Largest register the kernel supports (the six-qubit Eve-ancilla scenario).
pub const MAX_QUBITS: usize = 6;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A normalized complex amplitude vector over an ordered qubit register.
///
/// Amplitudes are indexed by big-endian bitstring: qubit 0 is the most
/// significant bit of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<ComplexAmp>,
}

impl PureState {
    /// Computational basis state |bits⟩ of `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QcoreError> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(QcoreError::RegisterOverflow {
                requested: num_qubits,
            });
        }
        let dim = 1 << num_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amps = vec![ComplexAmp::new(0.0, 0.0); dim];
        amps[index] = ComplexAmp::new(1.0, 0.0);
        Ok(PureState { num_qubits, amps })
    }

    /// Builds a state from raw amplitudes, checking size, finiteness and norm.
    pub fn from_amps(amps: Vec<ComplexAmp>) -> Result<Self, QcoreError> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(QcoreError::DimensionMismatch(format!(
                "amplitude vector length {dim} is not a power of two"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(QcoreError::RegisterOverflow {
                requested: num_qubits,
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QcoreError::NonFiniteAmplitude);
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > TOL {
            return Err(QcoreError::NotNormalized { norm_sqr });
        }
        Ok(PureState { num_qubits, amps })
    }

    /// One of |0⟩, |1⟩, |+⟩, |−⟩, with |±⟩ = (|0⟩ ± |1⟩)/√2.
    pub fn prepare_basis_state(label: StateLabel) -> Self {
        let amps = match label {
            StateLabel::Zero => vec![ComplexAmp::new(1.0, 0.0), ComplexAmp::new(0.0, 0.0)],
            StateLabel::One => vec![ComplexAmp::new(0.0, 0.0), ComplexAmp::new(1.0, 0.0)],
            StateLabel::Plus => vec![
                ComplexAmp::new(FRAC_1_SQRT_2, 0.0),
                ComplexAmp::new(FRAC_1_SQRT_2, 0.0),
            ],
            StateLabel::Minus => vec![
                ComplexAmp::new(FRAC_1_SQRT_2, 0.0),
                ComplexAmp::new(-FRAC_1_SQRT_2, 0.0),
            ],
        };
        PureState {
            num_qubits: 1,
            amps,
        }
    }

    /// The two-qubit Bell state named by `label`, signs included.
    pub fn prepare_bell(label: BellLabel) -> Self {
        let mut amps = vec![ComplexAmp::new(0.0, 0.0); 4];
        let sign = if label.phase_bit() == 0 { 1.0 } else { -1.0 };
        if label.amplitude_bit() == 0 {
            amps[0b00] = ComplexAmp::new(FRAC_1_SQRT_2, 0.0);
            amps[0b11] = ComplexAmp::new(sign * FRAC_1_SQRT_2, 0.0);
        } else {
            amps[0b01] = ComplexAmp::new(FRAC_1_SQRT_2, 0.0);
            amps[0b10] = ComplexAmp::new(sign * FRAC_1_SQRT_2, 0.0);
        }
        PureState {
            num_qubits: 2,
            amps,
        }
    }

    /// Kronecker product `a ⊗ b` in big-endian order: `a`'s qubits keep
    /// their indices, `b`'s follow.
    pub fn tensor(a: &PureState, b: &PureState) -> Result<Self, QcoreError> {
        let num_qubits = a.num_qubits + b.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(QcoreError::RegisterOverflow {
                requested: num_qubits,
            });
        }
        let mut amps = Vec::with_capacity(1 << num_qubits);
        for &x in &a.amps {
            for &y in &b.amps {
                amps.push(x * y);
            }
        }
        Ok(PureState { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amps(&self) -> &[ComplexAmp] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), QcoreError> {
        if qubit >= self.num_qubits {
            return Err(QcoreError::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Bit mask selecting `qubit` inside an amplitude index.
    fn bit(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    /// Applies a 2×2 operator (`m[i][j] = ⟨i|op|j⟩`) to one qubit.
    pub fn apply_1q(&mut self, qubit: usize, m: &[[ComplexAmp; 2]; 2]) -> Result<(), QcoreError> {
        self.check_qubit(qubit)?;
        let bit = self.bit(qubit);
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | bit];
                self.amps[idx] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[idx | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Applies the Pauli operation named by `label` to one qubit.
    pub fn apply_pauli(&mut self, qubit: usize, label: PauliLabel) -> Result<(), QcoreError> {
        self.apply_1q(qubit, &label.matrix())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<(), QcoreError> {
        let h = ComplexAmp::new(FRAC_1_SQRT_2, 0.0);
        self.apply_1q(qubit, &[[h, h], [h, -h]])
    }

    /// Standard CNOT on the designated (control, target) pair.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<(), QcoreError> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(QcoreError::IndexClash(control));
        }
        let cbit = self.bit(control);
        let tbit = self.bit(target);
        for idx in 0..self.amps.len() {
            if idx & cbit != 0 && idx & tbit == 0 {
                self.amps.swap(idx, idx | tbit);
            }
        }
        Ok(())
    }

    /// Probability of outcome `bit` when measuring `qubit` in `basis`.
    pub fn outcome_probability(
        &self,
        qubit: usize,
        basis: MeasBasis,
        bit: u8,
    ) -> Result<f64, QcoreError> {
        self.check_qubit(qubit)?;
        if basis == MeasBasis::Bell {
            return Err(QcoreError::BellBasisOnSingleQubit);
        }
        let mask = self.bit(qubit);
        let mut p = 0.0;
        match basis {
            MeasBasis::Z => {
                for (idx, a) in self.amps.iter().enumerate() {
                    let b = ((idx & mask) != 0) as u8;
                    if b == bit {
                        p += a.norm_sqr();
                    }
                }
            }
            MeasBasis::X => {
                // |±⟩ projector amplitude: (a0 ± a1)/√2 per index pair.
                let sign = if bit == 0 { 1.0 } else { -1.0 };
                for idx in 0..self.amps.len() {
                    if idx & mask == 0 {
                        let proj = (self.amps[idx] + sign * self.amps[idx | mask])
                            * ComplexAmp::new(FRAC_1_SQRT_2, 0.0);
                        p += proj.norm_sqr();
                    }
                }
            }
            MeasBasis::Bell => unreachable!(),
        }
        Ok(p)
    }

    /// Measures one qubit in the Z or X basis. The outcome is sampled by the
    /// Born rule; `self` becomes the projected, renormalized post state.
    pub fn measure(
        &mut self,
        qubit: usize,
        basis: MeasBasis,
        rng: &mut SeededRng,
    ) -> Result<StateLabel, QcoreError> {
        let p0 = self.outcome_probability(qubit, basis, 0)?;
        let bit = u8::from(!rng.gen_bool(p0.clamp(0.0, 1.0)));
        self.project_single(qubit, basis, bit);
        Ok(StateLabel::from_basis_bit(basis, bit))
    }

    /// Projects onto the `bit` outcome of `basis` on `qubit` and renormalizes.
    /// Callers must ensure the outcome has nonzero probability.
    pub(crate) fn project_single(&mut self, qubit: usize, basis: MeasBasis, bit: u8) {
        let mask = self.bit(qubit);
        match basis {
            MeasBasis::Z => {
                for idx in 0..self.amps.len() {
                    let b = ((idx & mask) != 0) as u8;
                    if b != bit {
                        self.amps[idx] = ComplexAmp::new(0.0, 0.0);
                    }
                }
            }
            MeasBasis::X => {
                let sign = if bit == 0 { 1.0 } else { -1.0 };
                let half = ComplexAmp::new(0.5, 0.0);
                for idx in 0..self.amps.len() {
                    if idx & mask == 0 {
                        let proj = (self.amps[idx] + sign * self.amps[idx | mask]) * half;
                        self.amps[idx] = proj;
                        self.amps[idx | mask] = sign * proj;
                    }
                }
            }
            MeasBasis::Bell => unreachable!("bell projection goes through bell_measure"),
        }
        self.renormalize();
    }

    /// Probabilities of the four Bell outcomes on the ordered pair (q1, q2).
    pub fn bell_probabilities(&self, q1: usize, q2: usize) -> Result<[f64; 4], QcoreError> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(QcoreError::IndexClash(q1));
        }
        let mut probs = [0.0f64; 4];
        for label in BellLabel::all() {
            let projected = self.bell_projected(q1, q2, label);
            probs[label.code() as usize] = projected.iter().map(|a| a.norm_sqr()).sum();
        }
        Ok(probs)
    }

    /// Unnormalized amplitudes after projecting (q1, q2) onto Bell(label).
    fn bell_projected(&self, q1: usize, q2: usize, label: BellLabel) -> Vec<ComplexAmp> {
        let m1 = self.bit(q1);
        let m2 = self.bit(q2);
        let sign = if label.phase_bit() == 0 { 1.0 } else { -1.0 };
        // Index pairs spanned by the Bell state: (00,11) or (01,10) on (q1,q2).
        let (lo_bits, hi_bits) = if label.amplitude_bit() == 0 {
            (0, m1 | m2)
        } else {
            (m2, m1)
        };
        let mut out = vec![ComplexAmp::new(0.0, 0.0); self.amps.len()];
        let half = ComplexAmp::new(0.5, 0.0);
        for idx in 0..self.amps.len() {
            if idx & (m1 | m2) == 0 {
                let lo = idx | lo_bits;
                let hi = idx | hi_bits;
                // ⟨bell|ψ⟩ restricted to this residual index
                let coeff = (self.amps[lo] + sign * self.amps[hi]) * half;
                out[lo] = coeff;
                out[hi] = sign * coeff;
            }
        }
        out
    }

    /// Projective measurement of the ordered pair (q1, q2) in the Bell basis.
    /// Samples by the Born rule; `self` becomes the renormalized post state.
    pub fn bell_measure(
        &mut self,
        q1: usize,
        q2: usize,
        rng: &mut SeededRng,
    ) -> Result<BellLabel, QcoreError> {
        let probs = self.bell_probabilities(q1, q2)?;
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        let mut picked = BellLabel::PSI_MINUS;
        for label in BellLabel::all() {
            acc += probs[label.code() as usize];
            if draw < acc {
                picked = label;
                break;
            }
        }
        self.amps = self.bell_projected(q1, q2, picked);
        self.renormalize();
        Ok(picked)
    }

    fn renormalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        debug_assert!(norm > 1e-12, "projection onto a zero-probability outcome");
        for a in &mut self.amps {
            *a /= norm;
        }
    }

    /// Extends the register by one qubit, replacing `qubit` through the
    /// two-branch map `|b⟩_qubit ↦ Σ_jk images[b][2j+k] |j⟩_qubit |k⟩_new`.
    /// The new qubit takes the highest index. Each branch must be normalized;
    /// the map is applied coherently.
    pub fn extend_qubit(
        &self,
        qubit: usize,
        images: &[[ComplexAmp; 4]; 2],
    ) -> Result<PureState, QcoreError> {
        self.check_qubit(qubit)?;
        if self.num_qubits + 1 > MAX_QUBITS {
            return Err(QcoreError::RegisterOverflow {
                requested: self.num_qubits + 1,
            });
        }
        for branch in images {
            let n: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
            if (n - 1.0).abs() > TOL {
                return Err(QcoreError::NotNormalized { norm_sqr: n });
            }
        }
        let n = self.num_qubits + 1;
        let mask = self.bit(qubit);
        let mut amps = vec![ComplexAmp::new(0.0, 0.0); 1 << n];
        for (idx, &a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let b = usize::from(idx & mask != 0);
            for (jk, &c) in images[b].iter().enumerate() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let j = jk >> 1;
                let k = jk & 1;
                let base = if j == 0 { idx & !mask } else { idx | mask };
                let new_idx = (base << 1) | k;
                amps[new_idx] += a * c;
            }
        }
        let out = PureState {
            num_qubits: n,
            amps,
        };
        let norm_sqr = out.norm_sqr();
        if (norm_sqr - 1.0).abs() > TOL {
            return Err(QcoreError::NotNormalized { norm_sqr });
        }
        Ok(out)
    }

    /// Equality up to a global phase, within `tol` per amplitude.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        // Align phases on the largest-magnitude amplitude.
        let (pivot, _) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("states are nonempty");
        if other.amps[pivot].norm_sqr() < 1e-24 {
            return false;
        }
        let phase = self.amps[pivot] / other.amps[pivot];
        let scale = phase / phase.norm();
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a - b * scale).norm() <= tol)
    }
}

/// Inner product `⟨a|b⟩`.
pub fn inner(a: &[ComplexAmp], b: &[ComplexAmp]) -> ComplexAmp {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
