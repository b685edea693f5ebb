//! Synthesis of even permutations by conjugating transposition groups.
//!
//! A permutation h is split into groups of K independent transpositions plus
//! a small residual (see [`decompose_to_groups`]). Each group is conjugated by
//! NOT/CNOT/Toffoli gates into a single gate `C_{log₂k+1,…,n;1}` (see
//! [`canonicalize_group`]); the group's circuit is then the conjugating trace,
//! the central gate, and the trace reversed. The residual is split into pairs
//! of transpositions and handled the same way with k = 4.
//!
//! For n ≤ 3 every permutation is reachable and the group machinery does not
//! apply, so synthesis falls back to breadth-first search.

mod canon;
mod groups;
mod mct;

pub use canon::{
    canonicalize_group, canonicalize_group_with, Canonicalization, ClearingMode, ConjugationTrace,
    PointMatrix, Stage,
};
pub use groups::{compose_groups, decompose_to_groups, residual_to_pairs, TranspositionGroup};
pub use mct::{decompose_gate, decompose_mct};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed};
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, DEFAULT_MAX_N};
use crate::exact::{big, log2_enclosure, log2_log2_enclosure, LOG2_BITS};
use crate::perm::{PermError, Permutation, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("odd permutation on {n} lines: circuits over NOT, CNOT and 2-CNOT realize only even permutations when n >= 4")]
    OddPermutation { n: u32 },
    #[error("group size k = {k} is invalid for {n} lines (need a power of two, 4 <= k <= 2^(n-1), and log2 k <= n-2 once log2 k >= 3)")]
    GroupSize { k: u64, n: u32 },
    #[error("cannot form groups of {k} transpositions on {n} lines")]
    GroupCount { k: usize, n: u32 },
    #[error("phi must be at least 1")]
    Phi,
    #[error("a transposition group needs at least one transposition")]
    EmptyGroup,
    #[error("point {0} appears in two transpositions of one group")]
    NotIndependent(Point),
    #[error("odd residual permutation cannot be split into pairs of transpositions")]
    OddResidual,
    #[error("no two fixed points available as auxiliary transposition")]
    NoAuxiliaryPoints,
    #[error("a {controls}-control gate on {n} lines has no line to borrow")]
    NoFreeLine { controls: u32, n: u32 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("self-check failed: input {point} maps to {got}, expected {expected}")]
    SelfCheck {
        point: Point,
        expected: Point,
        got: Point,
    },
}

/// Group size selection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum GroupSize {
    /// Derived from n and φ by [`choose_k`].
    #[default]
    Auto,
    /// Number of moved points per group, k = 2K.
    Fixed(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisConfig {
    pub k: GroupSize,
    /// Slowly growing parameter φ(n) used by automatic group sizing; at least 1.
    pub phi: Rational64,
    /// Largest line count accepted for synthesis and self-checking.
    pub max_n: u32,
    /// Simulate the result and compare it with the target.
    pub self_check: bool,
    pub clearing: ClearingMode,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self {
            k: GroupSize::Auto,
            phi: Rational64::from_integer(2),
            max_n: DEFAULT_MAX_N,
            self_check: true,
            clearing: ClearingMode::Sequential,
        }
    }
}

impl SynthesisConfig {
    /// The group size used on `n` lines (n ≥ 4).
    pub fn resolve_k(&self, n: u32) -> Result<u32, SynthError> {
        if self.phi < Rational64::one() {
            return Err(SynthError::Phi);
        }
        let k = match self.k {
            GroupSize::Auto => choose_k(n as u64, self.phi),
            GroupSize::Fixed(k) => k,
        };
        validate_k(k as u64, n)?;
        Ok(k)
    }
}

/// Accepts k when it is a power of two with 4 ≤ k ≤ 2ⁿ⁻¹, and when the
/// multi-control gates of the canonicalization stage can borrow a line:
/// log₂k ≤ n − 2 as soon as they have three or more controls.
pub fn validate_k(k: u64, n: u32) -> Result<(), SynthError> {
    let err = SynthError::GroupSize { k, n };
    if k < 4 || !k.is_power_of_two() {
        return Err(err);
    }
    let lk = k.trailing_zeros();
    if lk >= n || (lk >= 3 && lk > n.saturating_sub(2)) {
        return Err(err);
    }
    Ok(())
}

/// k = 2^⌊log₂ m⌋ with m = log₂n − log₂log₂n − log₂φ, clamped to the valid
/// range (never below 4).
///
/// m is evaluated from a rigorous lower enclosure, so k never exceeds the
/// exact value.
pub fn choose_k(n: u64, phi: Rational64) -> u32 {
    let min_k = 4u32;
    if n < 4 || phi <= Rational64::from_integer(0) {
        return min_k;
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let m: BigRational = log2_enclosure(&nn, LOG2_BITS).lo
        - log2_log2_enclosure(&nn, LOG2_BITS).hi
        - log2_enclosure(&big(phi), LOG2_BITS).hi;
    let mut e = 0u32;
    if m.is_positive() {
        while BigRational::from_integer(BigInt::one() << (e as usize + 1)) <= m {
            e += 1;
        }
    }
    // Largest exponent accepted by `validate_k` for this n.
    let max_e = if n >= 5 { (n - 2).min(31) as u32 } else { 2 };
    1u32 << e.clamp(2, max_e)
}

/// A group's circuit together with its canonicalization and per-stage gate counts.
#[derive(Debug, Clone)]
pub struct GroupCircuit {
    pub circuit: Circuit,
    pub canonicalization: Canonicalization,
    /// Gates contributed by each stage after multi-control gates are expanded:
    /// both copies of stages 1–4, then the expanded central gate.
    pub stage_counts: [usize; 5],
}

/// Circuit `T * central * reverse(T)` for one group, with every
/// multi-control gate of `T` and the central gate expanded over Ω²ₙ.
pub fn synthesize_group(group: &TranspositionGroup, n: u32) -> Result<GroupCircuit, SynthError> {
    synthesize_group_with(group, n, ClearingMode::Sequential)
}

pub fn synthesize_group_with(
    group: &TranspositionGroup,
    n: u32,
    mode: ClearingMode,
) -> Result<GroupCircuit, SynthError> {
    validate_k(group.k() as u64, n)?;
    let canon = canonicalize_group_with(group, n, mode)?;
    let mut stage_counts = [0usize; 5];
    let mut expanded = Vec::new();
    for (i, stage) in Stage::ALL.into_iter().enumerate() {
        let before = expanded.len();
        for &g in canon.trace.stage(stage) {
            expanded.extend(decompose_gate(g, n)?);
        }
        stage_counts[i] = 2 * (expanded.len() - before);
    }
    let central = decompose_gate(canon.central, n)?;
    stage_counts[4] = central.len();

    let mut circuit = Circuit::new(n)?;
    circuit.extend_from_slice(&expanded)?;
    circuit.extend_from_slice(&central)?;
    expanded.reverse();
    circuit.extend_from_slice(&expanded)?;
    Ok(GroupCircuit {
        circuit,
        canonicalization: canon,
        stage_counts,
    })
}

/// Summary of a [`synthesize_detailed`] run.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub circuit: Circuit,
    /// Group size used; `None` when the search fallback handled n ≤ 3.
    pub k: Option<u32>,
    /// Groups of k/2 transpositions.
    pub groups: usize,
    /// Groups of two transpositions built from the residual.
    pub residual_groups: usize,
}

/// Synthesizes a circuit over Ω²ₙ defining `h`.
pub fn synthesize(h: &Permutation, cfg: &SynthesisConfig) -> Result<Circuit, SynthError> {
    synthesize_detailed(h, cfg).map(|s| s.circuit)
}

pub fn synthesize_detailed(
    h: &Permutation,
    cfg: &SynthesisConfig,
) -> Result<Synthesis, SynthError> {
    let n = h.n();
    let limit = cfg.max_n.min(crate::perm::MAX_TABLE_LINES);
    if n > limit {
        return Err(CircuitError::TooManyLines { lines: n, limit }.into());
    }
    if h.is_identity() {
        return Ok(Synthesis {
            circuit: Circuit::new(n)?,
            k: None,
            groups: 0,
            residual_groups: 0,
        });
    }
    if n <= 3 {
        let circuit =
            crate::verify::bfs_synthesize(h).map_err(|e| SynthError::Invariant(e.to_string()))?;
        return Ok(Synthesis {
            circuit,
            k: None,
            groups: 0,
            residual_groups: 0,
        });
    }
    if !h.is_even() {
        return Err(SynthError::OddPermutation { n });
    }
    let k = cfg.resolve_k(n)?;
    let (groups, residual) = decompose_to_groups(h, k as usize / 2)?;
    let pairs = residual_to_pairs(&residual)?;

    let parts: Vec<GroupCircuit> = groups
        .par_iter()
        .chain(pairs.par_iter())
        .map(|g| synthesize_group_with(g, n, cfg.clearing))
        .collect::<Result<_, _>>()?;
    let mut circuit = Circuit::new(n)?;
    for part in &parts {
        circuit.extend_from_slice(part.circuit.gates())?;
    }

    if cfg.self_check {
        let got = circuit.simulate_with_limit(limit)?;
        if let Some(x) = (0..h.size()).find(|&x| got.apply(x) != h.apply(x)) {
            return Err(SynthError::SelfCheck {
                point: x,
                expected: h.apply(x),
                got: got.apply(x),
            });
        }
    }
    Ok(Synthesis {
        circuit,
        k: Some(k),
        groups: groups.len(),
        residual_groups: pairs.len(),
    })
}
