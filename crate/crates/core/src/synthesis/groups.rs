//! Splitting a permutation into groups of independent transpositions.
//!
//! A list of groups `[G₁, G₂, …, G_t]` always means the product
//! `G_t ∘ … ∘ G₂ ∘ G₁`: groups act in list order, matching the order their
//! circuits are concatenated.

use std::collections::{BTreeSet, VecDeque};

use crate::perm::{Cycle, Permutation, Point, Transposition};

use super::SynthError;

/// K pairwise independent transpositions; k = 2K points in total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TranspositionGroup {
    transpositions: Vec<Transposition>,
}

impl TranspositionGroup {
    pub fn new(transpositions: Vec<Transposition>) -> Result<Self, SynthError> {
        if transpositions.is_empty() {
            return Err(SynthError::EmptyGroup);
        }
        let mut seen = BTreeSet::new();
        for t in &transpositions {
            for p in [t.a(), t.b()] {
                if !seen.insert(p) {
                    return Err(SynthError::NotIndependent(p));
                }
            }
        }
        Ok(Self { transpositions })
    }

    pub fn transpositions(&self) -> &[Transposition] {
        &self.transpositions
    }

    /// Number of transpositions, K.
    pub fn len(&self) -> usize {
        self.transpositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transpositions.is_empty()
    }

    /// Number of moved points, k = 2K.
    pub fn k(&self) -> usize {
        2 * self.transpositions.len()
    }

    /// Moved points in matrix row order: a₁, b₁, a₂, b₂, …
    pub fn rows(&self) -> Vec<Point> {
        self.transpositions
            .iter()
            .flat_map(|t| [t.a(), t.b()])
            .collect()
    }

    pub fn permutation(&self, n: u32) -> Result<Permutation, SynthError> {
        Ok(Permutation::from_transpositions(n, &self.transpositions)?)
    }
}

/// Composes groups in list order (first group acts first).
pub fn compose_groups(n: u32, groups: &[TranspositionGroup]) -> Result<Permutation, SynthError> {
    let mut acc = Permutation::identity(n)?;
    for g in groups {
        acc = g.permutation(n)?.compose(&acc)?;
    }
    Ok(acc)
}

/// Peels off up to `want` independent transpositions from a cycle.
///
/// With c = (p₀ … p_{r−1}) and s = r − 2·want, the tail pairs
/// (p_s p_{s+1}), …, (p_{r−2} p_{r−1}) act first and the cycle
/// (p₀ … p_{s−1} p_s p_{s+2} … p_{r−2}) afterwards. Returns the remainder.
fn peel(cycle: &mut Vec<Point>, want: usize, out: &mut Vec<Transposition>) {
    let r = cycle.len();
    let s = r - 2 * want;
    let tail: Vec<Point> = cycle.drain(s..).collect();
    for pair in tail.chunks_exact(2) {
        out.push(Transposition::new(pair[0], pair[1]).expect("cycle points are distinct"));
    }
    cycle.extend(tail.iter().step_by(2));
    if cycle.len() < 2 {
        cycle.clear();
    }
}

/// Writes `h = h' ∘ G_t ∘ … ∘ G₁` with each `Gᵢ` holding exactly
/// `group_size` independent transpositions.
///
/// Cycles are consumed in canonical order from a rotating queue: a round takes
/// as many pairs as each visited cycle still offers until the group is full,
/// and the shortened cycles rejoin the back of the queue. Rounds stop once the
/// cycles together offer fewer than `group_size` pairs, which leaves at most
/// 3(K − 1) moved points in the residual `h'`.
pub fn decompose_to_groups(
    h: &Permutation,
    group_size: usize,
) -> Result<(Vec<TranspositionGroup>, Permutation), SynthError> {
    let n = h.n();
    if h.is_identity() {
        return Ok((Vec::new(), h.clone()));
    }
    if group_size < 2 || 2 * group_size as u64 > h.size() as u64 {
        return Err(SynthError::GroupCount { k: group_size, n });
    }
    let mut queue: VecDeque<Vec<Point>> = h
        .cycles()
        .into_iter()
        .map(|c| c.points().to_vec())
        .collect();
    let mut available: usize = queue.iter().map(|c| c.len() / 2).sum();
    let mut groups = Vec::new();

    while available >= group_size {
        let mut needed = group_size;
        let mut picked = Vec::with_capacity(group_size);
        let mut visited = Vec::new();
        while needed > 0 {
            let mut cycle = queue.pop_front().expect("enough pairs remain");
            let offer = cycle.len() / 2;
            let take = offer.min(needed);
            available -= offer;
            peel(&mut cycle, take, &mut picked);
            needed -= take;
            if !cycle.is_empty() {
                available += cycle.len() / 2;
                visited.push(cycle);
            }
        }
        queue.extend(visited);
        groups.push(TranspositionGroup::new(picked)?);
    }

    let rest: Vec<Cycle> = queue
        .into_iter()
        .map(|c| Cycle::new(c).map(|c| c.canonical()))
        .collect::<Result<_, _>>()?;
    let residual = Permutation::from_cycles(n, &rest)?;
    Ok((groups, residual))
}

/// Expresses an even residual as groups of two independent transpositions.
///
/// Pairs are taken as in [`decompose_to_groups`]; what remains is either
/// nothing or a 3-cycle (i j k), written as (i k)∘(i j) and padded with an
/// auxiliary transposition (r s) on both halves. r and s are the two smallest
/// points that `hp` fixes.
pub fn residual_to_pairs(hp: &Permutation) -> Result<Vec<TranspositionGroup>, SynthError> {
    if hp.is_identity() {
        return Ok(Vec::new());
    }
    if !hp.is_even() {
        return Err(SynthError::OddResidual);
    }
    let (mut groups, rest) = decompose_to_groups(hp, 2)?;
    let cycles = rest.cycles();
    match cycles.as_slice() {
        [] => {}
        [c] if c.len() == 3 => {
            let (i, j, k) = (c.points()[0], c.points()[1], c.points()[2]);
            let mut fixed = (0..hp.size()).filter(|&x| hp.apply(x) == x);
            let (r, s) = match (fixed.next(), fixed.next()) {
                (Some(r), Some(s)) => (r, s),
                _ => return Err(SynthError::NoAuxiliaryPoints),
            };
            let aux = Transposition::new(r, s)?;
            groups.push(TranspositionGroup::new(vec![
                Transposition::new(i, j)?,
                aux,
            ])?);
            groups.push(TranspositionGroup::new(vec![
                Transposition::new(i, k)?,
                aux,
            ])?);
        }
        _ => {
            return Err(SynthError::Invariant(format!(
                "even residual left {rest} after pairing"
            )))
        }
    }
    Ok(groups)
}
