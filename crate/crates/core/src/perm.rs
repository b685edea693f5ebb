//! Points of Z₂ⁿ, permutations stored as image tables, and cycle structure.
//!
//! A [`Point`] is the integer encoding of a vector ⟨x₁, …, xₙ⟩ with x₁ in the
//! least significant bit, so ⟨1,0,0,1⟩ is 9.
//!
//! Composition follows the usual function convention: `f.compose(&g)` is
//! f∘g with (f∘g)(x) = f(g(x)), i.e. the right factor acts first. Under this
//! convention a cycle splits into independent transpositions as
//!
//! ```text
//! (i1 i2 … ir) = (i1 i3 i5 …) ∘ (i1 i2)(i3 i4)…
//! ```
//!
//! which is the form [`crate::synthesis::decompose_to_groups`] relies on.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// An element of Z₂ⁿ; bit `i - 1` holds coordinate xᵢ.
pub type Point = u32;

/// Largest line count for which a dense image table may be built.
pub const MAX_TABLE_LINES: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("line count {0} is outside 1..={MAX_TABLE_LINES}")]
    LineCount(u32),
    #[error("point {point} is out of range for {n} lines")]
    OutOfRange { point: Point, n: u32 },
    #[error("image table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("image table is not a bijection: {0} appears twice")]
    NotBijective(Point),
    #[error("point {0} appears in more than one cycle")]
    Overlap(Point),
    #[error("permutations act on {left} and {right} lines")]
    MismatchedLines { left: u32, right: u32 },
    #[error("transposition endpoints must differ, got ({0} {0})")]
    DegenerateTransposition(Point),
    #[error("a cycle needs at least two distinct points")]
    ShortCycle,
    #[error("point {0} repeats inside a cycle")]
    RepeatedPoint(Point),
}

fn check_lines(n: u32) -> Result<(), PermError> {
    if n == 0 || n > MAX_TABLE_LINES {
        return Err(PermError::LineCount(n));
    }
    Ok(())
}

/// A bijection on `[0, 2ⁿ)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    n: u32,
    image: Vec<Point>,
}

impl Permutation {
    pub fn identity(n: u32) -> Result<Self, PermError> {
        check_lines(n)?;
        Ok(Self {
            n,
            image: (0..1u32 << n).collect(),
        })
    }

    /// Builds a permutation from `image[x] = h(x)`, checking it is a bijection.
    pub fn from_image(n: u32, image: Vec<Point>) -> Result<Self, PermError> {
        check_lines(n)?;
        let size = 1usize << n;
        if image.len() != size {
            return Err(PermError::TableSize {
                got: image.len(),
                expected: size,
            });
        }
        let mut seen = vec![false; size];
        for &y in &image {
            if y as usize >= size {
                return Err(PermError::OutOfRange { point: y, n });
            }
            if std::mem::replace(&mut seen[y as usize], true) {
                return Err(PermError::NotBijective(y));
            }
        }
        Ok(Self { n, image })
    }

    pub(crate) fn from_image_unchecked(n: u32, image: Vec<Point>) -> Self {
        debug_assert_eq!(image.len(), 1usize << n);
        Self { n, image }
    }

    /// The permutation whose non-trivial cycles are exactly `cycles`.
    pub fn from_cycles(n: u32, cycles: &[Cycle]) -> Result<Self, PermError> {
        let mut perm = Self::identity(n)?;
        let mut used = BTreeSet::new();
        for cycle in cycles {
            for &p in cycle.points() {
                if p >= perm.size() {
                    return Err(PermError::OutOfRange { point: p, n });
                }
                if !used.insert(p) {
                    return Err(PermError::Overlap(p));
                }
            }
            let pts = cycle.points();
            for (i, &p) in pts.iter().enumerate() {
                perm.image[p as usize] = pts[(i + 1) % pts.len()];
            }
        }
        Ok(perm)
    }

    /// Product of independent transpositions; they are checked for overlap.
    pub fn from_transpositions(n: u32, ts: &[Transposition]) -> Result<Self, PermError> {
        let cycles: Vec<Cycle> = ts.iter().map(|t| t.to_cycle()).collect();
        Self::from_cycles(n, &cycles)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Domain size 2ⁿ.
    pub fn size(&self) -> u32 {
        1 << self.n
    }

    pub fn image(&self) -> &[Point] {
        &self.image
    }

    pub fn apply(&self, x: Point) -> Point {
        self.image[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// `self ∘ g`: apply `g` first, then `self`.
    pub fn compose(&self, g: &Permutation) -> Result<Permutation, PermError> {
        if self.n != g.n {
            return Err(PermError::MismatchedLines {
                left: self.n,
                right: g.n,
            });
        }
        let image = g.image.iter().map(|&y| self.image[y as usize]).collect();
        Ok(Self::from_image_unchecked(self.n, image))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y as usize] = x as Point;
        }
        Self::from_image_unchecked(self.n, inv)
    }

    /// Sign via cycle structure: a cycle of length r contributes r − 1 transpositions.
    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        let mut transpositions = 0usize;
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions.is_multiple_of(2)
    }

    /// Disjoint cycles covering the non-fixed points, each starting at its
    /// smallest point, listed in increasing order of that point.
    pub fn cycles(&self) -> Vec<Cycle> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] || self.image[start] as usize == start {
                continue;
            }
            let mut points = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                points.push(x as Point);
                x = self.image[x] as usize;
            }
            // Scanning upward means `start` is already the smallest point.
            out.push(Cycle { points });
        }
        out
    }

    /// Sorted list of points moved by the permutation.
    pub fn non_fixed_points(&self) -> Vec<Point> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as Point != y)
            .map(|(x, _)| x as Point)
            .collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation(n={}, {})", self.n, self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in &cycles {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An unordered pair of distinct points.
///
/// Stored with the larger endpoint first (`a > b`); matrices built from a
/// transposition list use `a` then `b` as consecutive rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    a: Point,
    b: Point,
}

impl Transposition {
    pub fn new(x: Point, y: Point) -> Result<Self, PermError> {
        if x == y {
            return Err(PermError::DegenerateTransposition(x));
        }
        Ok(Self {
            a: x.max(y),
            b: x.min(y),
        })
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn to_cycle(&self) -> Cycle {
        Cycle {
            points: vec![self.b, self.a],
        }
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.a, self.b)
    }
}

/// A cyclic sequence of at least two distinct points, p₀ → p₁ → … → p₀.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    points: Vec<Point>,
}

impl Cycle {
    pub fn new(points: Vec<Point>) -> Result<Self, PermError> {
        if points.len() < 2 {
            return Err(PermError::ShortCycle);
        }
        let mut seen = BTreeSet::new();
        for &p in &points {
            if !seen.insert(p) {
                return Err(PermError::RepeatedPoint(p));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rotation that starts at the smallest point.
    pub fn canonical(&self) -> Cycle {
        let pos = self
            .points
            .iter()
            .enumerate()
            .min_by_key(|&(_, p)| *p)
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut points = self.points.clone();
        points.rotate_left(pos);
        Cycle { points }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}
