//! Conjugating a transposition group into a single multi-control gate.
//!
//! The group's points are stacked as rows of a k × n matrix over GF(2)
//! (column j is line j). Conjugating the group by a gate `e` maps every row x
//! to e(x), so each step below is one gate appended to the trace:
//!
//! 1. clear every column that duplicates an earlier one (CNOT from the
//!    leftmost copy);
//! 2. zero the first row with NOTs;
//! 3. bring row r (0-based) to the value r, one row at a time, keeping the
//!    rows above it fixed;
//! 4. set every column above log₂k to ones with NOTs.
//!
//! Afterwards the group is exactly the gate `C_{log₂k+1,…,n;1}`.

use std::collections::HashMap;
use std::ops::Range;

use crate::circuit::Gate;
use crate::perm::Point;

use super::groups::TranspositionGroup;
use super::SynthError;

/// How duplicate columns are cleared in the first stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ClearingMode {
    /// One CNOT per duplicate, rightmost column first.
    #[default]
    Sequential,
    /// Balanced fan-in: equal columns clear each other pairwise, halving the
    /// survivors each round, so the stage has logarithmic depth.
    Tree,
}

/// The canonicalization stages that emit gates into the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    ClearColumns,
    ZeroFirstRow,
    Canonicalize,
    Complement,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::ClearColumns,
        Stage::ZeroFirstRow,
        Stage::Canonicalize,
        Stage::Complement,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

/// The k × n GF(2) matrix of a group's points, one row per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMatrix {
    n: u32,
    rows: Vec<Point>,
}

impl PointMatrix {
    pub fn new(n: u32, rows: Vec<Point>) -> Self {
        Self { n, rows }
    }

    pub fn from_group(group: &TranspositionGroup, n: u32) -> Self {
        Self::new(n, group.rows())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> &[Point] {
        &self.rows
    }

    /// Entry in row `row` (0-based) and column `line` (1-based).
    pub fn entry(&self, row: usize, line: u32) -> bool {
        self.rows[row] >> (line - 1) & 1 == 1
    }

    /// Column `line` as a bit vector over the rows.
    pub fn column(&self, line: u32) -> Vec<bool> {
        (0..self.rows.len()).map(|r| self.entry(r, line)).collect()
    }

    /// Conjugates the represented permutation by `gate`.
    pub fn conjugate(&mut self, gate: &Gate) {
        for row in &mut self.rows {
            *row = gate.apply(*row);
        }
    }

    fn rows_distinct(&self) -> bool {
        let mut sorted = self.rows.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

/// Gates conjugating a group into its central gate, tagged by stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationTrace {
    gates: Vec<Gate>,
    stage_ends: [usize; 4],
}

impl ConjugationTrace {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn stage_range(&self, stage: Stage) -> Range<usize> {
        let i = stage.index();
        let start = if i == 0 { 0 } else { self.stage_ends[i - 1] };
        start..self.stage_ends[i]
    }

    pub fn stage(&self, stage: Stage) -> &[Gate] {
        &self.gates[self.stage_range(stage)]
    }
}

/// Result of [`canonicalize_group`].
#[derive(Debug, Clone)]
pub struct Canonicalization {
    pub trace: ConjugationTrace,
    pub central: Gate,
    /// Number of pairwise distinct columns of the original matrix.
    pub distinct_columns: u32,
    /// Matrix after each of the four stages.
    pub snapshots: [PointMatrix; 4],
    /// Rounds used by the column-clearing stage (one gate layer each).
    pub clearing_rounds: u32,
}

struct Builder {
    matrix: PointMatrix,
    gates: Vec<Gate>,
}

impl Builder {
    fn emit(&mut self, gate: Gate) {
        self.matrix.conjugate(&gate);
        self.gates.push(gate);
    }
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<(), SynthError> {
    if ok {
        Ok(())
    } else {
        Err(SynthError::Invariant(what()))
    }
}

/// Checks `k` against the line count: a power of two, at least 4, log₂k < n.
pub(crate) fn check_group_points(k: usize, n: u32) -> Result<u32, SynthError> {
    if k < 4 || !k.is_power_of_two() || k.trailing_zeros() >= n {
        return Err(SynthError::GroupSize { k: k as u64, n });
    }
    Ok(k.trailing_zeros())
}

pub fn canonicalize_group(
    group: &TranspositionGroup,
    n: u32,
) -> Result<Canonicalization, SynthError> {
    canonicalize_group_with(group, n, ClearingMode::Sequential)
}

pub fn canonicalize_group_with(
    group: &TranspositionGroup,
    n: u32,
    mode: ClearingMode,
) -> Result<Canonicalization, SynthError> {
    let k = group.k();
    let lk = check_group_points(k, n)?;
    if let Some(&p) = group.rows().iter().find(|&&p| n < 32 && p >> n != 0) {
        return Err(SynthError::Perm(crate::perm::PermError::OutOfRange {
            point: p,
            n,
        }));
    }
    let mut b = Builder {
        matrix: PointMatrix::from_group(group, n),
        gates: Vec::new(),
    };
    let mut stage_ends = [0usize; 4];

    // Stage 1: clear duplicate columns.
    let mut first_of: HashMap<Vec<bool>, u32> = HashMap::new();
    let mut copies: Vec<(u32, Vec<u32>)> = Vec::new();
    for line in 1..=n {
        let col = b.matrix.column(line);
        match first_of.get(&col) {
            Some(&rep) => {
                if col.iter().any(|&x| x) {
                    copies
                        .iter_mut()
                        .find(|(r, _)| *r == rep)
                        .expect("representative registered")
                        .1
                        .push(line);
                }
            }
            None => {
                first_of.insert(col, line);
                copies.push((line, Vec::new()));
            }
        }
    }
    let distinct_columns = first_of.len() as u32;
    let mut clearing_rounds = 0;
    match mode {
        ClearingMode::Sequential => {
            let mut dups: Vec<(u32, u32)> = copies
                .iter()
                .flat_map(|(rep, ds)| ds.iter().map(move |&d| (*rep, d)))
                .collect();
            dups.sort_by_key(|d| std::cmp::Reverse(d.1));
            clearing_rounds = dups.len() as u32;
            for (rep, line) in dups {
                b.emit(Gate::cnot(rep, line));
            }
        }
        ClearingMode::Tree => {
            let mut survivors: Vec<Vec<u32>> = copies
                .into_iter()
                .filter(|(_, ds)| !ds.is_empty())
                .map(|(rep, ds)| std::iter::once(rep).chain(ds).collect())
                .collect();
            while survivors.iter().any(|s| s.len() > 1) {
                clearing_rounds += 1;
                for s in &mut survivors {
                    let mut kept = Vec::with_capacity(s.len().div_ceil(2));
                    for chunk in s.chunks(2) {
                        // Both columns are still untouched copies of the representative.
                        if let [keep, clear] = *chunk {
                            b.emit(Gate::cnot(keep, clear));
                        }
                        kept.push(chunk[0]);
                    }
                    *s = kept;
                }
            }
        }
    }
    stage_ends[0] = b.gates.len();
    let a1 = b.matrix.clone();
    invariant(
        (1..=n).all(|line| {
            let col = a1.column(line);
            !col.iter().any(|&x| x) || first_of.get(&col) == Some(&line)
        }),
        || "stage 1 left a duplicate column".into(),
    )?;

    // Stage 2: zero the first row.
    let first = b.matrix.rows()[0];
    for line in (1..=n).filter(|l| first >> (l - 1) & 1 == 1) {
        b.emit(Gate::not(line));
    }
    stage_ends[1] = b.gates.len();
    let a2 = b.matrix.clone();
    invariant(a2.rows()[0] == 0, || {
        "stage 2 left a nonzero first row".into()
    })?;

    // Stage 3: row r becomes r.
    let low_mask: Point = (1 << lk) - 1;
    for r in 1..k {
        let want = r as Point;
        let v = b.matrix.rows()[r];
        if v == want {
            continue;
        }
        if v & !low_mask == 0 {
            // Only low columns are set: move the row into column log₂k + 1.
            // Rows above are r' < r ≤ v and cannot contain all of v's bits.
            b.emit(Gate::from_mask(v, lk + 1)?);
        }
        let v = b.matrix.rows()[r];
        let pivot = (v & !low_mask).trailing_zeros() + 1;
        for line in (1..=n).filter(|&l| l != pivot) {
            let bit = 1 << (line - 1);
            if (v ^ want) & bit != 0 {
                b.emit(Gate::cnot(pivot, line));
            }
        }
        b.emit(Gate::from_mask(want, pivot)?);
        let rows = b.matrix.rows();
        invariant(
            rows[..=r].iter().enumerate().all(|(i, &x)| x == i as Point),
            || format!("stage 3 broke a canonical row while fixing row {r}"),
        )?;
    }
    stage_ends[2] = b.gates.len();
    let a3 = b.matrix.clone();

    // Stage 4: complement the high columns.
    for line in lk + 1..=n {
        b.emit(Gate::not(line));
    }
    stage_ends[3] = b.gates.len();
    let a4 = b.matrix.clone();
    let high: Point = (((1u64 << n) - 1) as Point) & !low_mask;
    invariant(
        a4.rows()
            .iter()
            .enumerate()
            .all(|(i, &x)| x == i as Point | high),
        || "stage 4 did not reach the central form".into(),
    )?;
    invariant(a4.rows_distinct(), || "rows collided".into())?;

    let central = Gate::from_mask(high, 1)?;
    Ok(Canonicalization {
        trace: ConjugationTrace {
            gates: b.gates,
            stage_ends,
        },
        central,
        distinct_columns,
        snapshots: [a1, a2, a3, a4],
        clearing_rounds,
    })
}
