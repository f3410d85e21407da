//! Two-bit classical codes bound to quantum objects: Bell-state labels,
//! Pauli-operation labels, single-qubit preparation labels, and measurement
//! bases.

use crate::qcore::ComplexAmp;

/// Two-bit code naming a Bell state.
///
/// The binding is `00 ↔ Φ⁺`, `01 ↔ Φ⁻`, `10 ↔ Ψ⁺`, `11 ↔ Ψ⁻`, with
/// `Φ± = (|00⟩ ± |11⟩)/√2` and `Ψ± = (|01⟩ ± |10⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellLabel {
    code: u8,
}

impl BellLabel {
    pub const PHI_PLUS: BellLabel = BellLabel { code: 0b00 };
    pub const PHI_MINUS: BellLabel = BellLabel { code: 0b01 };
    pub const PSI_PLUS: BellLabel = BellLabel { code: 0b10 };
    pub const PSI_MINUS: BellLabel = BellLabel { code: 0b11 };

    /// Builds a label from a two-bit code (values 0..=3).
    pub fn from_code(code: u8) -> Self {
        assert!(code < 4, "Bell label code must be two bits");
        BellLabel { code }
    }

    pub fn from_bits(b1: u8, b2: u8) -> Self {
        Self::from_code((b1 & 1) << 1 | (b2 & 1))
    }

    pub fn code(self) -> u8 {
        self.code
    }

    /// First bit: 1 for the anti-correlated (Ψ) family.
    pub fn amplitude_bit(self) -> u8 {
        self.code >> 1
    }

    /// Second bit: 1 for the negative-phase member.
    pub fn phase_bit(self) -> u8 {
        self.code & 1
    }

    pub fn all() -> [BellLabel; 4] {
        [0, 1, 2, 3].map(BellLabel::from_code)
    }

    /// Bitwise XOR of two labels, the quantity Charlie checks in Protocol 3.
    pub fn xor(self, other: BellLabel) -> u8 {
        self.code ^ other.code
    }
}

impl std::fmt::Display for BellLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.code {
            0b00 => "Phi+",
            0b01 => "Phi-",
            0b10 => "Psi+",
            _ => "Psi-",
        };
        write!(f, "{name}")
    }
}

/// Two-bit code naming a Pauli operation.
///
/// `00 ↔ I`, `01 ↔ σx`, `10 ↔ iσy`, `11 ↔ σz`. The `10` entry is stored as
/// the real matrix `|0⟩⟨1| − |1⟩⟨0|`, i.e. the product σz·σx, which is how
/// the protocol tables write it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliLabel {
    code: u8,
}

impl PauliLabel {
    pub const IDENTITY: PauliLabel = PauliLabel { code: 0b00 };
    pub const SIGMA_X: PauliLabel = PauliLabel { code: 0b01 };
    pub const I_SIGMA_Y: PauliLabel = PauliLabel { code: 0b10 };
    pub const SIGMA_Z: PauliLabel = PauliLabel { code: 0b11 };

    pub fn from_code(code: u8) -> Self {
        assert!(code < 4, "Pauli label code must be two bits");
        PauliLabel { code }
    }

    pub fn from_bits(b1: u8, b2: u8) -> Self {
        Self::from_code((b1 & 1) << 1 | (b2 & 1))
    }

    pub fn code(self) -> u8 {
        self.code
    }

    pub fn all() -> [PauliLabel; 4] {
        [0, 1, 2, 3].map(PauliLabel::from_code)
    }

    /// The 2×2 matrix, row-major, `m[i][j] = ⟨i|op|j⟩`.
    pub fn matrix(self) -> [[ComplexAmp; 2]; 2] {
        let o = ComplexAmp::new(0.0, 0.0);
        let p = ComplexAmp::new(1.0, 0.0);
        let m = ComplexAmp::new(-1.0, 0.0);
        match self.code {
            0b00 => [[p, o], [o, p]],
            0b01 => [[o, p], [p, o]],
            0b10 => [[o, p], [m, o]],
            _ => [[p, o], [o, m]],
        }
    }
}

/// One of the four BB84 preparation/outcome labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateLabel {
    Zero,
    One,
    Plus,
    Minus,
}

impl StateLabel {
    pub fn all() -> [StateLabel; 4] {
        [
            StateLabel::Zero,
            StateLabel::One,
            StateLabel::Plus,
            StateLabel::Minus,
        ]
    }

    pub fn basis(self) -> MeasBasis {
        match self {
            StateLabel::Zero | StateLabel::One => MeasBasis::Z,
            StateLabel::Plus | StateLabel::Minus => MeasBasis::X,
        }
    }

    /// The classical bit the label encodes: |0⟩,|+⟩ ↦ 0 and |1⟩,|−⟩ ↦ 1.
    pub fn bit(self) -> u8 {
        match self {
            StateLabel::Zero | StateLabel::Plus => 0,
            StateLabel::One | StateLabel::Minus => 1,
        }
    }

    pub fn from_basis_bit(basis: MeasBasis, bit: u8) -> Self {
        match (basis, bit & 1) {
            (MeasBasis::Z, 0) => StateLabel::Zero,
            (MeasBasis::Z, _) => StateLabel::One,
            (MeasBasis::X, 0) => StateLabel::Plus,
            (MeasBasis::X, _) => StateLabel::Minus,
            (MeasBasis::Bell, _) => panic!("Bell basis has no single-qubit labels"),
        }
    }

    /// The orthogonal partner within the same basis.
    pub fn conjugate(self) -> Self {
        match self {
            StateLabel::Zero => StateLabel::One,
            StateLabel::One => StateLabel::Zero,
            StateLabel::Plus => StateLabel::Minus,
            StateLabel::Minus => StateLabel::Plus,
        }
    }
}

impl std::fmt::Display for StateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            StateLabel::Zero => "|0>",
            StateLabel::One => "|1>",
            StateLabel::Plus => "|+>",
            StateLabel::Minus => "|->",
        };
        write!(f, "{name}")
    }
}

/// Measurement basis selector.
///
/// `Z = {|0⟩,|1⟩}`, `X = {|+⟩,|−⟩}`; `Bell` applies to an ordered qubit pair
/// and is only accepted by [`crate::qcore::PureState::bell_measure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasBasis {
    Z,
    X,
    Bell,
}
