//! The abstract incidence structure: points `0..v`, blocks as sorted point
//! lists, and constant-time lookup of joining blocks and block intersections.

use std::fmt;

use thiserror::Error;

use crate::automorphisms::PointPermutation;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitalError {
    #[error("points must be distinct (got {0} twice)")]
    SamePoint(usize),
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
    #[error("block {0} out of range")]
    BlockOutOfRange(usize),
    #[error("not a valid design:\n{0}")]
    NotADesign(DesignReport),
    #[error("permutation has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Which axioms a structure was validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// A 2-(q³+1, q+1, 1) design.
    Unital,
    /// Any 2-(v, k, 1) design; `order` is then `k − 1`.
    LinearSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    BlockSize,
    PairMissing,
    PairDuplicated,
    PointRange,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::BlockSize => "block-size",
            ViolationKind::PairMissing => "pair-missing",
            ViolationKind::PairDuplicated => "pair-duplicated",
            ViolationKind::PointRange => "point-range",
        })
    }
}

/// A design-axiom violation with its witness. Block ids index the candidate
/// list as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `distinct` counts distinct points, so a repeated point also lands here.
    BlockSize { block: usize, distinct: usize, expected: usize },
    PairMissing { x: usize, y: usize },
    PairDuplicated { x: usize, y: usize, first: usize, second: usize },
    PointRange { block: usize, point: usize },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::BlockSize { .. } => ViolationKind::BlockSize,
            Violation::PairMissing { .. } => ViolationKind::PairMissing,
            Violation::PairDuplicated { .. } => ViolationKind::PairDuplicated,
            Violation::PointRange { .. } => ViolationKind::PointRange,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BlockSize { block, distinct, expected } => {
                write!(f, "block-size: block {block} has {distinct} distinct points, expected {expected}")
            }
            Violation::PairMissing { x, y } => write!(f, "pair-missing: {{{x}, {y}}} lies on no block"),
            Violation::PairDuplicated { x, y, first, second } => {
                write!(f, "pair-duplicated: {{{x}, {y}}} lies on blocks {first} and {second}")
            }
            Violation::PointRange { block, point } => {
                write!(f, "point-range: block {block} contains point {point}")
            }
        }
    }
}

/// Outcome of a full design-axiom scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignReport {
    pub points: usize,
    pub block_size: usize,
    pub blocks: usize,
    /// Blocks per point, when it is the same for every point.
    pub replication: Option<usize>,
    pub violations: Vec<Violation>,
}

impl DesignReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }

    pub fn first(&self, kind: ViolationKind) -> Option<&Violation> {
        self.violations.iter().find(|v| v.kind() == kind)
    }

    /// Number of violations of each kind, in `ViolationKind` order.
    pub fn counts(&self) -> Vec<(ViolationKind, usize)> {
        let mut out: Vec<(ViolationKind, usize)> = Vec::new();
        let mut kinds: Vec<ViolationKind> = self.violations.iter().map(Violation::kind).collect();
        kinds.sort();
        for k in kinds {
            match out.last_mut() {
                Some((last, n)) if *last == k => *n += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }
}

impl fmt::Display for DesignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points: {}", self.points)?;
        writeln!(f, "block-size: {}", self.block_size)?;
        writeln!(f, "blocks: {}", self.blocks)?;
        match self.replication {
            Some(r) => writeln!(f, "replication: {r}")?,
            None => writeln!(f, "replication: non-uniform")?,
        }
        writeln!(f, "violations: {}", self.violations.len())?;
        for (kind, n) in self.counts() {
            let witness = self.first(kind).expect("kind present");
            writeln!(f, "violation {kind}: {n} (first: {witness})")?;
        }
        write!(f, "design: {}", if self.pass() { "pass" } else { "fail" })
    }
}

/// Checks a candidate block list against the 2-(q³+1, q+1, 1) axioms.
///
/// Never fails: malformed input yields a failing report. Every violation is
/// collected, not just the first.
pub fn verify_design(candidate: &[Vec<usize>], q: usize) -> DesignReport {
    let v = q.checked_pow(3).map_or(usize::MAX, |c| c + 1);
    scan(candidate, v, q + 1)
}

/// Checks a candidate against the 2-(v, k, 1) axioms, with `k` taken from the
/// first block.
pub fn verify_linear_space(candidate: &[Vec<usize>], points: usize) -> DesignReport {
    let k = candidate.first().map_or(0, |b| distinct(b).len());
    scan(candidate, points, k)
}

fn distinct(block: &[usize]) -> Vec<usize> {
    let mut b = block.to_vec();
    b.sort_unstable();
    b.dedup();
    b
}

fn scan(candidate: &[Vec<usize>], v: usize, k: usize) -> DesignReport {
    let mut violations = Vec::new();
    // refuse to allocate a pair table for absurd inputs; those fail on range anyway
    let table_ok = v <= 1 << 14;
    let mut first_block = if table_ok { vec![NONE; v * v] } else { Vec::new() };
    let mut degree = vec![0usize; if table_ok { v } else { 0 }];

    for (id, raw) in candidate.iter().enumerate() {
        let block = distinct(raw);
        if block.len() != k || raw.len() != k {
            violations.push(Violation::BlockSize { block: id, distinct: block.len(), expected: k });
        }
        let mut in_range = Vec::with_capacity(block.len());
        for &p in &block {
            if p >= v || !table_ok {
                violations.push(Violation::PointRange { block: id, point: p });
            } else {
                in_range.push(p);
            }
        }
        for (i, &x) in in_range.iter().enumerate() {
            degree[x] += 1;
            for &y in &in_range[i + 1..] {
                let slot = &mut first_block[x * v + y];
                if *slot == NONE {
                    *slot = id as u32;
                } else {
                    violations.push(Violation::PairDuplicated {
                        x,
                        y,
                        first: *slot as usize,
                        second: id,
                    });
                }
            }
        }
    }
    if table_ok {
        for x in 0..v {
            for y in x + 1..v {
                if first_block[x * v + y] == NONE {
                    violations.push(Violation::PairMissing { x, y });
                }
            }
        }
    }
    let replication = match degree.first() {
        Some(&r) if degree.iter().all(|&d| d == r) => Some(r),
        _ => None,
    };
    DesignReport { points: v, block_size: k, blocks: candidate.len(), replication, violations }
}

/// A verified linear space, usually a unital of order `q`.
///
/// Blocks are stored sorted and the block list is sorted, so two structures on
/// the same labelled points are equal iff their block lists are.
#[derive(Clone, PartialEq, Eq)]
pub struct Unital {
    order: usize,
    kind: StructureKind,
    points: usize,
    blocks: Vec<Vec<usize>>,
    pair_block: Vec<u32>,
    block_meet: Vec<u32>,
    point_blocks: Vec<Vec<usize>>,
    incidence: Vec<bool>,
}

impl fmt::Debug for Unital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Unital")
            .field("order", &self.order)
            .field("kind", &self.kind)
            .field("points", &self.points)
            .field("blocks", &self.blocks.len())
            .finish()
    }
}

impl Unital {
    /// Validates `blocks` as a unital of order `q` and stores it canonically.
    pub fn from_blocks(q: usize, blocks: Vec<Vec<usize>>) -> Result<Unital, UnitalError> {
        let report = verify_design(&blocks, q);
        if !report.pass() {
            return Err(UnitalError::NotADesign(report));
        }
        Ok(Unital::build(q, StructureKind::Unital, report.points, blocks))
    }

    /// Validates `blocks` as a 2-(v, k, 1) design without the unital parameter
    /// constraints. Needed for control structures such as the Fano plane.
    pub fn linear_space(points: usize, blocks: Vec<Vec<usize>>) -> Result<Unital, UnitalError> {
        let report = verify_linear_space(&blocks, points);
        if !report.pass() || report.block_size < 2 {
            return Err(UnitalError::NotADesign(report));
        }
        Ok(Unital::build(report.block_size - 1, StructureKind::LinearSpace, points, blocks))
    }

    fn build(order: usize, kind: StructureKind, v: usize, mut blocks: Vec<Vec<usize>>) -> Unital {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let b = blocks.len();
        let mut pair_block = vec![NONE; v * v];
        let mut point_blocks = vec![Vec::new(); v];
        let mut incidence = vec![false; v * b];
        for (id, block) in blocks.iter().enumerate() {
            for (i, &x) in block.iter().enumerate() {
                point_blocks[x].push(id);
                incidence[x * b + id] = true;
                for &y in &block[i + 1..] {
                    pair_block[x * v + y] = id as u32;
                    pair_block[y * v + x] = id as u32;
                }
            }
        }
        let mut block_meet = vec![NONE; b * b];
        for (p, through) in point_blocks.iter().enumerate() {
            for (i, &b1) in through.iter().enumerate() {
                for &b2 in &through[i + 1..] {
                    block_meet[b1 * b + b2] = p as u32;
                    block_meet[b2 * b + b1] = p as u32;
                }
            }
        }
        Unital { order, kind, points: v, blocks, pair_block, block_meet, point_blocks, incidence }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn num_points(&self) -> usize {
        self.points
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &[usize] {
        &self.blocks[id]
    }

    /// Ids of the blocks through `p`, ascending.
    pub fn blocks_through(&self, p: usize) -> &[usize] {
        &self.point_blocks[p]
    }

    #[inline]
    pub fn contains(&self, block: usize, p: usize) -> bool {
        self.incidence[p * self.blocks.len() + block]
    }

    /// The joining block `x ∨ y`.
    pub fn joining_block(&self, x: usize, y: usize) -> Result<usize, UnitalError> {
        for p in [x, y] {
            if p >= self.points {
                return Err(UnitalError::PointOutOfRange(p));
            }
        }
        if x == y {
            return Err(UnitalError::SamePoint(x));
        }
        Ok(self.join(x, y))
    }

    /// Unchecked joining block; `x ≠ y` must hold.
    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        debug_assert_ne!(x, y);
        self.pair_block[x * self.points + y] as usize
    }

    /// The common point of two distinct blocks, if any.
    #[inline]
    pub fn meet(&self, b1: usize, b2: usize) -> Option<usize> {
        let p = self.block_meet[b1 * self.blocks.len() + b2];
        (p != NONE).then_some(p as usize)
    }

    /// Finds the id of a block given its point set in any order.
    pub fn find_block(&self, points: &[usize]) -> Option<usize> {
        let (&a, rest) = points.split_first()?;
        let &b = rest.iter().find(|&&b| b != a)?;
        if a >= self.points || b >= self.points {
            return None;
        }
        let id = self.join(a, b);
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        (self.blocks[id] == sorted).then_some(id)
    }

    /// Applies `perm` to every block: point `p` becomes `perm(p)`.
    pub fn relabel(&self, perm: &PointPermutation) -> Result<Unital, UnitalError> {
        if perm.len() != self.points {
            return Err(UnitalError::LengthMismatch { expected: self.points, found: perm.len() });
        }
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&p| perm.apply(p)).collect()).collect();
        Ok(Unital::build(self.order, self.kind, self.points, blocks))
    }
}
