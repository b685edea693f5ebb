//! Reversible gates, circuits and their metrics.
//!
//! Lines are numbered from 1. A gate `C_{I;t}` flips line `t` when every line
//! in `I` carries a 1; with `I = ∅` it is a NOT gate. Circuits apply their
//! gates in sequence order, so `simulate(a.concat(b)) = simulate(b) ∘ simulate(a)`.

use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::perm::{Permutation, Point};

/// Circuits may address at most this many lines (one control bit per line in a `u32`).
pub const MAX_LINES: u32 = 32;

/// Default ceiling on the line count for exhaustive simulation.
pub const DEFAULT_MAX_N: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line count {0} is outside 1..={MAX_LINES}")]
    LineCount(u32),
    #[error("line {line} is outside 1..={n}")]
    LineOutOfRange { line: u32, n: u32 },
    #[error("target line {0} is also a control")]
    TargetIsControl(u32),
    #[error("control line {0} listed twice")]
    DuplicateControl(u32),
    #[error("circuits act on {left} and {right} lines")]
    MismatchedLines { left: u32, right: u32 },
    #[error("{lines} lines exceed the exhaustive simulation limit of {limit}")]
    TooManyLines { lines: u32, limit: u32 },
    #[error(
        "gate {0} has more than two controls; weights are defined only for NOT, CNOT and 2-CNOT"
    )]
    NotOmega2(Gate),
}

/// NOT, CNOT and 2-CNOT make up the gate set Ω²ₙ; larger gates appear only
/// mid-synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateClass {
    Not,
    Cnot,
    Toffoli,
    MultiControl(u32),
}

/// A generalized Toffoli gate `C_{I;t}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    controls: u32,
    target: u8,
}

impl Gate {
    /// Builds `C_{controls;target}` from 1-based line indices.
    pub fn new(controls: impl IntoIterator<Item = u32>, target: u32) -> Result<Self, CircuitError> {
        check_line(target, MAX_LINES)?;
        let mut mask = 0u32;
        for c in controls {
            check_line(c, MAX_LINES)?;
            if c == target {
                return Err(CircuitError::TargetIsControl(c));
            }
            let bit = 1 << (c - 1);
            if mask & bit != 0 {
                return Err(CircuitError::DuplicateControl(c));
            }
            mask |= bit;
        }
        Ok(Self {
            controls: mask,
            target: target as u8,
        })
    }

    /// Builds a gate from a control bit mask (bit `i - 1` is line `i`).
    pub fn from_mask(controls: u32, target: u32) -> Result<Self, CircuitError> {
        check_line(target, MAX_LINES)?;
        if controls & (1 << (target - 1)) != 0 {
            return Err(CircuitError::TargetIsControl(target));
        }
        Ok(Self {
            controls,
            target: target as u8,
        })
    }

    /// `N_t`. Panics on an invalid line.
    pub fn not(target: u32) -> Self {
        Self::new([], target).expect("valid NOT gate")
    }

    /// `C_{c;t}`. Panics on invalid or coinciding lines.
    pub fn cnot(control: u32, target: u32) -> Self {
        Self::new([control], target).expect("valid CNOT gate")
    }

    /// `C_{c1,c2;t}`. Panics on invalid or coinciding lines.
    pub fn toffoli(c1: u32, c2: u32, target: u32) -> Self {
        Self::new([c1, c2], target).expect("valid 2-CNOT gate")
    }

    pub fn target(&self) -> u32 {
        self.target as u32
    }

    /// Control lines in increasing order.
    pub fn controls(&self) -> impl Iterator<Item = u32> + '_ {
        (0..32)
            .filter(move |i| self.controls >> i & 1 == 1)
            .map(|i| i + 1)
    }

    pub fn control_mask(&self) -> u32 {
        self.controls
    }

    pub fn target_mask(&self) -> u32 {
        1 << (self.target - 1)
    }

    /// Lines touched by the gate, `{t} ∪ I`, as a bit mask.
    pub fn support_mask(&self) -> u32 {
        self.controls | self.target_mask()
    }

    pub fn num_controls(&self) -> u32 {
        self.controls.count_ones()
    }

    pub fn class(&self) -> GateClass {
        match self.num_controls() {
            0 => GateClass::Not,
            1 => GateClass::Cnot,
            2 => GateClass::Toffoli,
            m => GateClass::MultiControl(m),
        }
    }

    pub fn is_omega2(&self) -> bool {
        self.num_controls() <= 2
    }

    /// Highest line index the gate touches.
    pub fn max_line(&self) -> u32 {
        32 - self.support_mask().leading_zeros()
    }

    /// Flips the target bit of `x` iff all control bits are set.
    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        if x & self.controls == self.controls {
            x ^ self.target_mask()
        } else {
            x
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.controls == 0 {
            return write!(f, "N_{}", self.target);
        }
        f.write_str("C_{")?;
        for (i, c) in self.controls().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ";{}}}", self.target)
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_line(line: u32, n: u32) -> Result<(), CircuitError> {
    if line == 0 || line > n {
        return Err(CircuitError::LineOutOfRange { line, n });
    }
    Ok(())
}

/// Weights of NOT/CNOT (`wc`) and 2-CNOT (`wt`) gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateWeights {
    wc: Rational64,
    wt: Rational64,
}

impl GateWeights {
    /// Both weights must be positive.
    pub fn new(wc: Rational64, wt: Rational64) -> Option<Self> {
        let zero = Rational64::from_integer(0);
        (wc > zero && wt > zero).then_some(Self { wc, wt })
    }

    pub fn wc(&self) -> Rational64 {
        self.wc
    }

    pub fn wt(&self) -> Rational64 {
        self.wt
    }
}

impl Default for GateWeights {
    fn default() -> Self {
        Self {
            wc: Rational64::from_integer(1),
            wt: Rational64::from_integer(5),
        }
    }
}

/// Gate complexity, depth, class counts and quantum weight of a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitMetrics {
    pub l: usize,
    pub d: usize,
    /// NOT plus CNOT gates.
    pub lc: usize,
    /// 2-CNOT gates.
    pub lt: usize,
    pub w: Rational64,
}

/// Number of gates in each class, with multi-control gates lumped together.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub not: usize,
    pub cnot: usize,
    pub toffoli: usize,
    pub multi: usize,
}

/// An ordered gate sequence on `n` lines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: u32,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: u32) -> Result<Self, CircuitError> {
        if n == 0 || n > MAX_LINES {
            return Err(CircuitError::LineCount(n));
        }
        Ok(Self {
            n,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n: u32, gates: impl IntoIterator<Item = Gate>) -> Result<Self, CircuitError> {
        let mut c = Self::new(n)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if gate.max_line() > self.n {
            return Err(CircuitError::LineOutOfRange {
                line: gate.max_line(),
                n: self.n,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend_from_slice(&mut self, gates: &[Gate]) -> Result<(), CircuitError> {
        for &g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `self * other`: the gates of `self`, then those of `other`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.n != other.n {
            return Err(CircuitError::MismatchedLines {
                left: self.n,
                right: other.n,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { n: self.n, gates })
    }

    /// Gates in reverse order; defines the inverse permutation since every gate is an involution.
    pub fn reversed(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// True when every gate belongs to Ω²ₙ.
    pub fn is_omega2(&self) -> bool {
        self.gates.iter().all(Gate::is_omega2)
    }

    pub fn gate_complexity(&self) -> usize {
        self.gates.len()
    }

    /// ASAP layer (1-based) of every gate: one more than the latest earlier
    /// gate sharing a line with it.
    pub fn layers(&self) -> Vec<usize> {
        let mut line_layer = [0usize; MAX_LINES as usize];
        self.gates
            .iter()
            .map(|g| {
                let support = g.support_mask();
                let lines = (0..self.n as usize).filter(|&i| support >> i & 1 == 1);
                let layer = lines.clone().map(|i| line_layer[i]).max().unwrap_or(0) + 1;
                for i in lines {
                    line_layer[i] = layer;
                }
                layer
            })
            .collect()
    }

    /// Order-respecting ASAP depth; an upper bound on the minimum number of
    /// support-disjoint layers over all regroupings.
    pub fn depth(&self) -> usize {
        self.layers().into_iter().max().unwrap_or(0)
    }

    pub fn class_counts(&self) -> ClassCounts {
        let mut counts = ClassCounts::default();
        for g in &self.gates {
            match g.class() {
                GateClass::Not => counts.not += 1,
                GateClass::Cnot => counts.cnot += 1,
                GateClass::Toffoli => counts.toffoli += 1,
                GateClass::MultiControl(_) => counts.multi += 1,
            }
        }
        counts
    }

    pub fn metrics(&self, weights: &GateWeights) -> Result<CircuitMetrics, CircuitError> {
        if let Some(&g) = self.gates.iter().find(|g| !g.is_omega2()) {
            return Err(CircuitError::NotOmega2(g));
        }
        let counts = self.class_counts();
        let lc = counts.not + counts.cnot;
        let lt = counts.toffoli;
        Ok(CircuitMetrics {
            l: self.gates.len(),
            d: self.depth(),
            lc,
            lt,
            w: weights.wc * Rational64::from_integer(lc as i64)
                + weights.wt * Rational64::from_integer(lt as i64),
        })
    }

    /// Applies the gates left to right to a single point.
    pub fn apply(&self, x: Point) -> Point {
        self.gates.iter().fold(x, |x, g| g.apply(x))
    }

    /// The permutation defined by the circuit, using the default line limit.
    pub fn simulate(&self) -> Result<Permutation, CircuitError> {
        self.simulate_with_limit(DEFAULT_MAX_N)
    }

    /// Exhaustive simulation over all 2ⁿ inputs.
    ///
    /// Bit-sliced: each line holds a 2ⁿ-bit column, and a gate XORs the AND of
    /// its control columns into its target column.
    pub fn simulate_with_limit(&self, max_n: u32) -> Result<Permutation, CircuitError> {
        let limit = max_n.min(crate::perm::MAX_TABLE_LINES);
        if self.n > limit {
            return Err(CircuitError::TooManyLines {
                lines: self.n,
                limit,
            });
        }
        let n = self.n as usize;
        let size = 1usize << n;
        let words = size.div_ceil(64);
        let mut cols: Vec<Vec<u64>> = (0..n).map(|i| initial_column(i, words)).collect();
        let mut acc = vec![0u64; words];
        for g in &self.gates {
            acc.fill(!0);
            for c in g.controls() {
                for (a, &w) in acc.iter_mut().zip(&cols[c as usize - 1]) {
                    *a &= w;
                }
            }
            for (t, &a) in cols[g.target() as usize - 1].iter_mut().zip(&acc) {
                *t ^= a;
            }
        }
        let mut image = vec![0 as Point; size];
        for (i, col) in cols.iter().enumerate() {
            for (x, y) in image.iter_mut().enumerate() {
                *y |= ((col[x / 64] >> (x % 64) & 1) as Point) << i;
            }
        }
        Ok(Permutation::from_image_unchecked(self.n, image))
    }
}

/// Column of bit `i` over the inputs 0..64·words.
fn initial_column(i: usize, words: usize) -> Vec<u64> {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    (0..words)
        .map(|w| {
            if i < 6 {
                LOW[i]
            } else if w >> (i - 6) & 1 == 1 {
                !0
            } else {
                0
            }
        })
        .collect()
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gates.is_empty() {
            return f.write_str("ε");
        }
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Cycle;

    fn six_gate() -> Circuit {
        Circuit::from_gates(
            4,
            [
                Gate::cnot(1, 2),
                Gate::cnot(3, 1),
                Gate::not(2),
                Gate::not(4),
                Gate::toffoli(1, 4, 2),
                Gate::not(3),
            ],
        )
        .unwrap()
    }

    fn two_pairs() -> Circuit {
        Circuit::from_gates(
            4,
            [
                Gate::cnot(1, 4),
                Gate::cnot(2, 3),
                Gate::not(1),
                Gate::not(3),
                Gate::not(4),
                Gate::toffoli(3, 4, 1),
                Gate::not(4),
                Gate::not(3),
                Gate::not(1),
                Gate::cnot(2, 3),
                Gate::cnot(1, 4),
            ],
        )
        .unwrap()
    }

    fn pointwise(c: &Circuit) -> Vec<Point> {
        (0..1u32 << c.n()).map(|x| c.apply(x)).collect()
    }

    #[test]
    fn apply_gate_examples() {
        assert_eq!(Gate::not(2).apply(0), 2);
        assert_eq!(Gate::cnot(1, 2).apply(1), 3);
        assert_eq!(Gate::cnot(1, 2).apply(0), 0);
        assert_eq!(Gate::toffoli(3, 4, 1).apply(12), 13);
    }

    #[test]
    fn gate_validation_and_class() {
        assert_eq!(Gate::new([2], 2), Err(CircuitError::TargetIsControl(2)));
        assert_eq!(Gate::new([1, 1], 2), Err(CircuitError::DuplicateControl(1)));
        assert!(matches!(
            Gate::new([], 0),
            Err(CircuitError::LineOutOfRange { .. })
        ));
        assert_eq!(Gate::not(3).class(), GateClass::Not);
        assert_eq!(
            Gate::new([1, 2, 3], 4).unwrap().class(),
            GateClass::MultiControl(3)
        );
        assert_eq!(Gate::toffoli(4, 3, 1).to_string(), "C_{3,4;1}");
        assert_eq!(Gate::not(1).to_string(), "N_1");
        let mut c = Circuit::new(3).unwrap();
        assert!(matches!(
            c.push(Gate::not(4)),
            Err(CircuitError::LineOutOfRange { line: 4, n: 3 })
        ));
    }

    #[test]
    fn simulate_examples() {
        assert!(Circuit::new(3).unwrap().simulate().unwrap().is_identity());
        let one = Circuit::from_gates(4, [Gate::toffoli(3, 4, 1)]).unwrap();
        let expected = Permutation::from_cycles(
            4,
            &[
                Cycle::new(vec![12, 13]).unwrap(),
                Cycle::new(vec![14, 15]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(one.simulate().unwrap(), expected);
        let two_pairs_perm = Permutation::from_cycles(
            4,
            &[
                Cycle::new(vec![0, 9]).unwrap(),
                Cycle::new(vec![6, 15]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(two_pairs().simulate().unwrap(), two_pairs_perm);
        let big = Circuit::new(25).unwrap();
        assert_eq!(
            big.simulate(),
            Err(CircuitError::TooManyLines {
                lines: 25,
                limit: 24
            })
        );
    }

    #[test]
    fn bit_sliced_matches_pointwise() {
        // Crosses the 64-bit word boundary on lines 6 and above.
        let gates = [
            Gate::new([1, 7, 8], 2).unwrap(),
            Gate::cnot(8, 1),
            Gate::not(7),
            Gate::toffoli(2, 6, 8),
            Gate::cnot(3, 6),
        ];
        let c = Circuit::from_gates(8, gates).unwrap();
        assert_eq!(c.simulate().unwrap().image(), pointwise(&c).as_slice());
    }

    #[test]
    fn metrics_examples() {
        let w = GateWeights::default();
        let m = six_gate().metrics(&w).unwrap();
        assert_eq!((m.l, m.d, m.lc, m.lt), (6, 3, 5, 1));
        assert_eq!(m.w, Rational64::from_integer(10));
        assert_eq!(two_pairs().gate_complexity(), 11);
        let empty = Circuit::new(4).unwrap().metrics(&w).unwrap();
        assert_eq!((empty.l, empty.d, empty.lc, empty.lt), (0, 0, 0, 0));
        assert_eq!(empty.w, Rational64::from_integer(0));
        let unit = GateWeights::new(1.into(), 1.into()).unwrap();
        let one = Circuit::from_gates(4, [Gate::toffoli(3, 4, 1)]).unwrap();
        assert_eq!(one.metrics(&unit).unwrap().w, Rational64::from_integer(1));
        let mct = Circuit::from_gates(5, [Gate::new([2, 3, 4], 1).unwrap()]).unwrap();
        assert!(matches!(mct.metrics(&w), Err(CircuitError::NotOmega2(_))));
        assert!(GateWeights::new(0.into(), 1.into()).is_none());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(six_gate().depth(), 3);
        assert_eq!(six_gate().layers(), vec![1, 2, 2, 1, 3, 3]);
        let disjoint = Circuit::from_gates(4, [Gate::cnot(1, 2), Gate::cnot(3, 4)]).unwrap();
        assert_eq!(disjoint.depth(), 1);
        assert_eq!(Circuit::new(4).unwrap().depth(), 0);
    }

    #[test]
    fn concat_and_reverse() {
        let c = two_pairs();
        let empty = Circuit::new(4).unwrap();
        assert_eq!(c.concat(&empty).unwrap(), c);
        let r = Circuit::from_gates(2, [Gate::not(1), Gate::cnot(1, 2)])
            .unwrap()
            .reversed();
        assert_eq!(r.gates(), &[Gate::cnot(1, 2), Gate::not(1)]);
        let prefix = Circuit::from_gates(4, c.gates()[..5].iter().copied()).unwrap();
        assert!(prefix
            .concat(&prefix.reversed())
            .unwrap()
            .simulate()
            .unwrap()
            .is_identity());
        assert!(matches!(
            c.concat(&Circuit::new(3).unwrap()),
            Err(CircuitError::MismatchedLines { .. })
        ));
    }
}
