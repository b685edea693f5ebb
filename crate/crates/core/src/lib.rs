//! Reversible circuit synthesis over NOT, CNOT and 2-CNOT gates.
//!
//! Points of Z₂ⁿ are encoded as integers with line 1 as the least
//! significant bit, so ⟨x₁,x₂,x₃,x₄⟩ = ⟨1,0,0,1⟩ is 9.

pub mod bounds;
pub mod circuit;
mod exact;
pub mod perm;
pub mod synthesis;
pub mod verify;

pub use circuit::{Circuit, CircuitError, CircuitMetrics, Gate, GateClass, GateWeights};
pub use perm::{Cycle, PermError, Permutation, Point, Transposition};
pub use synthesis::{synthesize, GroupSize, SynthError, SynthesisConfig};
