//! Oracles: equivalence checking, breadth-first optimal synthesis for tiny n,
//! and seeded random inputs.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, DEFAULT_MAX_N};
use crate::perm::{PermError, Permutation, Point, MAX_TABLE_LINES};

/// Points tried when a circuit is too wide for exhaustive simulation.
pub const SAMPLE_POINTS: usize = 1 << 16;
const SAMPLE_SEED: u64 = 0x005e_ed0f_c1c5;

/// Widest group the search tables can hold (n·2ⁿ bits per state).
pub const BFS_MAX_LINES: u32 = 4;
/// Widest group searched exhaustively by [`bfs_synthesize`].
pub const BFS_FULL_LINES: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("circuit has {circuit} lines but the permutation acts on {perm}")]
    MismatchedLines { circuit: u32, perm: u32 },
    #[error("breadth-first search supports at most {limit} lines, got {n}")]
    SearchTooWide { n: u32, limit: u32 },
    #[error("permutation not reached by the search")]
    Unreachable,
}

/// A point on which a circuit and a permutation disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counterexample {
    pub point: Point,
    pub expected: Point,
    pub got: Point,
}

/// Outcome of [`check_implements`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    /// Every point was compared; otherwise only a seeded sample was.
    pub exhaustive: bool,
    pub points_checked: u64,
    /// Smallest failing point among those checked.
    pub counterexample: Option<Counterexample>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Equivalence established over the whole domain.
    pub fn proves_equivalence(&self) -> bool {
        self.exhaustive && self.passed()
    }
}

/// Compares `c` with `h` on every point, up to the default line limit.
pub fn check_implements(c: &Circuit, h: &Permutation) -> Result<Check, VerifyError> {
    check_implements_with_limit(c, h, DEFAULT_MAX_N)
}

/// As [`check_implements`]; above `max_n` lines only [`SAMPLE_POINTS`]
/// seeded random points are compared.
pub fn check_implements_with_limit(
    c: &Circuit,
    h: &Permutation,
    max_n: u32,
) -> Result<Check, VerifyError> {
    let n = h.n();
    if c.n() != n {
        return Err(VerifyError::MismatchedLines {
            circuit: c.n(),
            perm: n,
        });
    }
    if n <= max_n.min(MAX_TABLE_LINES) {
        let got = c.simulate_with_limit(n)?;
        let counterexample = (0..h.size())
            .find(|&x| got.apply(x) != h.apply(x))
            .map(|x| Counterexample {
                point: x,
                expected: h.apply(x),
                got: got.apply(x),
            });
        return Ok(Check {
            exhaustive: true,
            points_checked: h.size() as u64,
            counterexample,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut points: Vec<Point> = (0..SAMPLE_POINTS)
        .map(|_| rng.random_range(0..h.size()))
        .collect();
    points.sort_unstable();
    points.dedup();
    let counterexample = points.iter().find_map(|&x| {
        let got = c.apply(x);
        (got != h.apply(x)).then(|| Counterexample {
            point: x,
            expected: h.apply(x),
            got,
        })
    });
    Ok(Check {
        exhaustive: false,
        points_checked: points.len() as u64,
        counterexample,
    })
}

/// Ω²ₙ in canonical order: NOTs by target, CNOTs by (control, target),
/// then 2-CNOTs by sorted controls and target.
pub fn omega_gates(n: u32) -> Vec<Gate> {
    let mut gates: Vec<Gate> = (1..=n).map(Gate::not).collect();
    for c in 1..=n {
        gates.extend((1..=n).filter(|&t| t != c).map(|t| Gate::cnot(c, t)));
    }
    for c1 in 1..=n {
        for c2 in c1 + 1..=n {
            gates.extend(
                (1..=n)
                    .filter(|&t| t != c1 && t != c2)
                    .map(|t| Gate::toffoli(c1, c2, t)),
            );
        }
    }
    gates
}

/// Uniformly random even permutation on `n` lines, deterministic per seed.
pub fn random_even_permutation(n: u32, seed: u64) -> Result<Permutation, PermError> {
    if !(2..=MAX_TABLE_LINES).contains(&n) {
        return Err(PermError::LineCount(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut image: Vec<Point> = (0..1u32 << n).collect();
    image.shuffle(&mut rng);
    let mut p = Permutation::from_image_unchecked(n, image);
    if !p.is_even() {
        let mut image = p.image().to_vec();
        image.swap(0, 1);
        p = Permutation::from_image_unchecked(n, image);
    }
    Ok(p)
}

/// `len` gates drawn uniformly from Ω²ₙ.
pub fn random_omega_circuit(n: u32, len: usize, seed: u64) -> Result<Circuit, CircuitError> {
    let gates = omega_gates(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Circuit::from_gates(n, (0..len).map(|_| gates[rng.random_range(0..gates.len())]))
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: u64,
    gate: u16,
    depth: u16,
}

/// Breadth-first search over the group generated by Ω²ₙ, starting from the
/// identity. States are image tables packed n bits per point.
#[derive(Debug, Clone)]
pub struct BfsTable {
    n: u32,
    gates: Vec<Gate>,
    nodes: HashMap<u64, Node>,
    level_sizes: Vec<usize>,
    complete: bool,
}

fn pack(n: u32, image: &[Point]) -> u64 {
    image
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &y)| acc | (y as u64) << (i as u32 * n))
}

fn unpack(n: u32, state: u64) -> Vec<Point> {
    let mask = (1u64 << n) - 1;
    (0..1u32 << n)
        .map(|i| (state >> (i * n) & mask) as Point)
        .collect()
}

impl BfsTable {
    /// Explores the whole group; n ≤ 3.
    pub fn build(n: u32) -> Result<Self, VerifyError> {
        if n > BFS_FULL_LINES {
            return Err(VerifyError::SearchTooWide {
                n,
                limit: BFS_FULL_LINES,
            });
        }
        Self::explore(n, usize::MAX)
    }

    /// Explores all circuits of at most `max_gates` gates; n ≤ 4.
    pub fn build_capped(n: u32, max_gates: usize) -> Result<Self, VerifyError> {
        if n > BFS_MAX_LINES {
            return Err(VerifyError::SearchTooWide {
                n,
                limit: BFS_MAX_LINES,
            });
        }
        Self::explore(n, max_gates)
    }

    fn explore(n: u32, max_gates: usize) -> Result<Self, VerifyError> {
        if n == 0 {
            return Err(PermError::LineCount(0).into());
        }
        let gates = omega_gates(n);
        // Each gate as a pointwise table, for composing on packed states.
        let tables: Vec<Vec<Point>> = gates
            .iter()
            .map(|g| (0..1u32 << n).map(|x| g.apply(x)).collect())
            .collect();
        let start = pack(n, &(0..1u32 << n).collect::<Vec<_>>());
        let mut nodes = HashMap::new();
        nodes.insert(
            start,
            Node {
                parent: start,
                gate: u16::MAX,
                depth: 0,
            },
        );
        let mut level_sizes = vec![1];
        let mut queue = VecDeque::from([start]);
        let mut complete = true;
        while let Some(state) = queue.pop_front() {
            let depth = nodes[&state].depth;
            if depth as usize >= max_gates {
                complete = false;
                continue;
            }
            let image = unpack(n, state);
            for (gi, table) in tables.iter().enumerate() {
                let next: Vec<Point> = image.iter().map(|&y| table[y as usize]).collect();
                let key = pack(n, &next);
                if let std::collections::hash_map::Entry::Vacant(e) = nodes.entry(key) {
                    e.insert(Node {
                        parent: state,
                        gate: gi as u16,
                        depth: depth + 1,
                    });
                    if level_sizes.len() <= depth as usize + 1 {
                        level_sizes.push(0);
                    }
                    level_sizes[depth as usize + 1] += 1;
                    queue.push_back(key);
                }
            }
        }
        // A capped search that stopped exactly at the group's diameter
        // still saw every state.
        if !complete && level_sizes.len() <= max_gates {
            complete = true;
        }
        Ok(Self {
            n,
            gates,
            nodes,
            level_sizes,
            complete,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of distinct permutations reached.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// States first reached at each gate count.
    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    /// Largest optimal gate count among the reached permutations.
    pub fn diameter(&self) -> usize {
        self.level_sizes.len() - 1
    }

    /// The search ran until no new state appeared.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn permutations(&self) -> impl Iterator<Item = Permutation> + '_ {
        self.nodes
            .keys()
            .map(|&s| Permutation::from_image_unchecked(self.n, unpack(self.n, s)))
    }

    /// Optimal gate count for `h`, if reached.
    pub fn distance(&self, h: &Permutation) -> Option<usize> {
        if h.n() != self.n {
            return None;
        }
        self.nodes
            .get(&pack(self.n, h.image()))
            .map(|node| node.depth as usize)
    }

    /// A minimum-length circuit for `h`, if reached.
    pub fn circuit(&self, h: &Permutation) -> Option<Circuit> {
        if h.n() != self.n {
            return None;
        }
        let mut state = pack(self.n, h.image());
        let mut node = *self.nodes.get(&state)?;
        let mut gates = Vec::with_capacity(node.depth as usize);
        while node.depth > 0 {
            gates.push(self.gates[node.gate as usize]);
            state = node.parent;
            node = self.nodes[&state];
        }
        gates.reverse();
        Some(Circuit::from_gates(self.n, gates).expect("gates fit the table's lines"))
    }
}

/// Shared complete tables for n = 1..=3.
pub fn bfs_table(n: u32) -> Result<&'static BfsTable, VerifyError> {
    static TABLES: [OnceLock<BfsTable>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if n == 0 || n > BFS_FULL_LINES {
        return Err(VerifyError::SearchTooWide {
            n,
            limit: BFS_FULL_LINES,
        });
    }
    let slot = &TABLES[n as usize - 1];
    if let Some(t) = slot.get() {
        return Ok(t);
    }
    let table = BfsTable::build(n)?;
    Ok(slot.get_or_init(|| table))
}

/// Minimum-gate circuit over Ω²ₙ for `h`; n ≤ 3.
pub fn bfs_synthesize(h: &Permutation) -> Result<Circuit, VerifyError> {
    bfs_table(h.n())?.circuit(h).ok_or(VerifyError::Unreachable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Cycle;

    #[test]
    fn check_examples() {
        let two_pairs = Circuit::from_gates(
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
        .unwrap();
        let h = Permutation::from_cycles(
            4,
            &[
                Cycle::new(vec![0, 9]).unwrap(),
                Cycle::new(vec![6, 15]).unwrap(),
            ],
        )
        .unwrap();
        assert!(check_implements(&two_pairs, &h)
            .unwrap()
            .proves_equivalence());

        let id = Permutation::identity(2).unwrap();
        assert!(check_implements(&Circuit::new(2).unwrap(), &id)
            .unwrap()
            .passed());
        let n1 = Circuit::from_gates(2, [Gate::not(1)]).unwrap();
        let check = check_implements(&n1, &id).unwrap();
        assert_eq!(check.counterexample.map(|c| c.point), Some(0));
    }

    #[test]
    fn sampled_check_never_claims_proof() {
        let c = Circuit::from_gates(6, [Gate::toffoli(1, 2, 6)]).unwrap();
        let h = c.simulate().unwrap();
        let check = check_implements_with_limit(&c, &h, 4).unwrap();
        assert!(check.passed() && !check.exhaustive && !check.proves_equivalence());
        let other = Circuit::from_gates(6, [Gate::not(6)]).unwrap();
        let check = check_implements_with_limit(&other, &h, 4).unwrap();
        assert_eq!(check.counterexample.map(|c| c.point), Some(0));
    }

    #[test]
    fn mismatched_lines() {
        let c = Circuit::new(3).unwrap();
        let h = Permutation::identity(4).unwrap();
        assert_eq!(
            check_implements(&c, &h),
            Err(VerifyError::MismatchedLines {
                circuit: 3,
                perm: 4
            })
        );
    }

    #[test]
    fn omega_order_and_size() {
        let g = omega_gates(3);
        assert_eq!(g.len(), 12);
        assert_eq!(g[0], Gate::not(1));
        assert_eq!(g[3], Gate::cnot(1, 2));
        assert_eq!(g[9], Gate::toffoli(1, 2, 3));
    }

    #[test]
    fn bfs_examples() {
        let id = Permutation::identity(2).unwrap();
        assert!(bfs_synthesize(&id).unwrap().is_empty());
        let n1 = Circuit::from_gates(2, [Gate::not(1)]).unwrap();
        assert_eq!(bfs_synthesize(&n1.simulate().unwrap()).unwrap(), n1);
        assert!(matches!(
            bfs_synthesize(&Permutation::identity(4).unwrap()),
            Err(VerifyError::SearchTooWide { .. })
        ));
    }

    #[test]
    fn full_groups_for_small_n() {
        for (n, size) in [(1, 2), (2, 24)] {
            let t = BfsTable::build(n).unwrap();
            assert_eq!(t.len(), size);
            assert!(t.is_complete());
        }
    }

    #[test]
    fn random_even_is_even_and_deterministic() {
        for seed in 0..50 {
            let p = random_even_permutation(4, seed).unwrap();
            assert!(p.is_even());
            assert_eq!(p, random_even_permutation(4, seed).unwrap());
        }
        assert_ne!(
            random_even_permutation(5, 1).unwrap(),
            random_even_permutation(5, 2).unwrap()
        );
        assert!(random_even_permutation(1, 0).is_err());
    }
}
