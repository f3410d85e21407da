//! Simulation library for three quantum identity authentication protocols:
//! a decoy-interleaved QSDC-style scheme, a single-qubit BB84-style scheme,
//! and a three-party Bell-state scheme with entanglement swapping, together
//! with the eavesdropping attacks and information-theoretic quantities of
//! their security analysis.
//!
//! * [`qcore`] — dense state-vector kernel (≤ 6 qubits).
//! * [`runtime`] — keys, decoys, tapped channels, transcripts, seeded RNG.
//! * [`protocol1`], [`protocol2`], [`protocol3`] — the protocol state
//!   machines.
//! * [`adversary`] — Eve's strategies as channel taps and scenario runners.
//! * [`analysis`] — closed-form detection probabilities, joint
//!   distributions, entropies and Holevo quantities.

pub mod adversary;
pub mod analysis;
pub mod protocol1;
pub mod protocol2;
pub mod protocol3;
pub mod qcore;
pub mod runtime;

pub use adversary::ProtocolId;
pub use analysis::AttackKind;
