//! Multi-control Toffoli gates rewritten over NOT/CNOT/2-CNOT with borrowed lines.
//!
//! Borrowed ("dirty") lines may hold any value on entry and are returned
//! unchanged. With `m` controls:
//!
//! * `m − 2` borrowed lines: the ladder of `4(m − 2)` Toffoli gates.
//! * a single borrowed line `a`: split the controls into halves `A`, `B` and
//!   emit `C_{A;a} · C_{B∪{a};t} · C_{A;a} · C_{B∪{a};t}`, each half in turn a
//!   ladder that borrows the lines the other half leaves idle.
//!
//! Either way at most `8m` gates are produced.

use crate::circuit::Gate;

use super::SynthError;

/// Lines `1..=n` as a bit mask.
fn all_lines(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn lines_of(mask: u32) -> Vec<u32> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Replaces `C_{controls;target}` on `n` lines by gates with at most two controls.
pub fn decompose_mct(controls: &[u32], target: u32, n: u32) -> Result<Vec<Gate>, SynthError> {
    let gate = Gate::new(controls.iter().copied(), target)?;
    if gate.max_line() > n {
        return Err(SynthError::Circuit(
            crate::circuit::CircuitError::LineOutOfRange {
                line: gate.max_line(),
                n,
            },
        ));
    }
    decompose_gate(gate, n)
}

/// As [`decompose_mct`], for an existing gate.
pub fn decompose_gate(gate: Gate, n: u32) -> Result<Vec<Gate>, SynthError> {
    let m = gate.num_controls();
    if m <= 2 {
        return Ok(vec![gate]);
    }
    let free = lines_of(all_lines(n) & !gate.support_mask());
    if free.is_empty() {
        return Err(SynthError::NoFreeLine { controls: m, n });
    }
    let controls: Vec<u32> = gate.controls().collect();
    let mut out = Vec::new();
    if free.len() as u32 >= m - 2 {
        ladder(&controls, gate.target(), &free[..m as usize - 2], &mut out);
    } else {
        let borrowed = free[0];
        let (a, b) = controls.split_at(controls.len().div_ceil(2));
        let first = Gate::new(a.iter().copied(), borrowed)?;
        let second = Gate::new(b.iter().copied().chain([borrowed]), gate.target())?;
        let first = decompose_gate(first, n)?;
        let second = decompose_gate(second, n)?;
        for _ in 0..2 {
            out.extend_from_slice(&first);
            out.extend_from_slice(&second);
        }
    }
    Ok(out)
}

/// `4(m − 2)` Toffolis computing `t ^= c₁ ∧ … ∧ c_m` with `m − 2` borrowed lines.
fn ladder(controls: &[u32], target: u32, borrowed: &[u32], out: &mut Vec<Gate>) {
    let m = controls.len();
    debug_assert!(m >= 3 && borrowed.len() == m - 2);
    let c = |i: usize| controls[i - 1];
    let a = |i: usize| borrowed[i - 1];
    let top = Gate::toffoli(c(m), a(m - 2), target);
    let down: Vec<Gate> = (1..=m - 3)
        .rev()
        .map(|i| Gate::toffoli(c(i + 2), a(i), a(i + 1)))
        .collect();
    let bottom = Gate::toffoli(c(1), c(2), a(1));
    for _ in 0..2 {
        out.push(top);
        out.extend_from_slice(&down);
        out.push(bottom);
        out.extend(down.iter().rev().copied());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;

    fn check(controls: &[u32], target: u32, n: u32) -> Vec<Gate> {
        let gates = decompose_mct(controls, target, n).unwrap();
        let expected = Gate::new(controls.iter().copied(), target).unwrap();
        for x in 0..1u32 << n {
            let got = gates.iter().fold(x, |x, g| g.apply(x));
            assert_eq!(
                got,
                expected.apply(x),
                "controls {controls:?} target {target} x {x}"
            );
        }
        assert!(gates.iter().all(Gate::is_omega2));
        gates
    }

    #[test]
    fn small_gates_pass_through() {
        assert_eq!(
            decompose_mct(&[3, 4], 1, 4).unwrap(),
            vec![Gate::toffoli(3, 4, 1)]
        );
        assert_eq!(decompose_mct(&[], 2, 4).unwrap(), vec![Gate::not(2)]);
        assert_eq!(decompose_mct(&[1], 2, 2).unwrap(), vec![Gate::cnot(1, 2)]);
    }

    #[test]
    fn three_controls_one_borrowed_line() {
        let gates = check(&[2, 3, 4], 1, 5);
        assert_eq!(gates.len(), 4);
        assert!(gates.iter().any(|g| g.support_mask() & (1 << 4) != 0));
    }

    #[test]
    fn exhaustive_small_shapes() {
        for n in 4..=9u32 {
            for m in 3..=n - 2 {
                let controls: Vec<u32> = (2..2 + m).collect();
                let gates = check(&controls, 1, n);
                assert!(
                    gates.len() as u32 <= 8 * m,
                    "n={n} m={m} len={}",
                    gates.len()
                );
            }
        }
        // Scattered lines, target in the middle.
        check(&[1, 6, 3, 8], 5, 9);
        check(&[7, 2, 4], 1, 7);
    }

    #[test]
    fn borrowed_lines_restored() {
        let gates = decompose_mct(&[1, 2, 3, 4, 5], 6, 7).unwrap();
        let c = Circuit::from_gates(7, gates).unwrap();
        for x in 0..128u32 {
            assert_eq!(c.apply(x) & 0b100_0000, x & 0b100_0000);
        }
    }

    #[test]
    fn no_free_line() {
        assert_eq!(
            decompose_mct(&[1, 2, 3], 4, 4),
            Err(SynthError::NoFreeLine { controls: 3, n: 4 })
        );
    }
}
