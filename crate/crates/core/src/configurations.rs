//! O'Nan configurations and `x`-parallel blocks.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::unital::Unital;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("point {point} lies on block {block}")]
    PointOnBlock { block: usize, point: usize },
}

/// Four pairwise intersecting blocks whose six intersection points are
/// distinct.
///
/// `blocks` is ascending; `points` lists the intersections of the block pairs
/// (0,1), (0,2), (0,3), (1,2), (1,3), (2,3) in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ONanWitness {
    pub blocks: [usize; 4],
    pub points: [usize; 6],
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl ONanWitness {
    /// Rebuilds a witness from four block ids, if they form an O'Nan configuration.
    pub fn from_blocks(u: &Unital, mut blocks: [usize; 4]) -> Option<ONanWitness> {
        blocks.sort_unstable();
        let mut points = [0; 6];
        for (slot, &(i, j)) in points.iter_mut().zip(&PAIRS) {
            if blocks[i] == blocks[j] {
                return None;
            }
            *slot = u.meet(blocks[i], blocks[j])?;
        }
        let mut sorted = points;
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1]).then_some(ONanWitness { blocks, points })
    }

    /// Replays the witness against `u` from raw incidences.
    pub fn validate(&self, u: &Unital) -> bool {
        if self.blocks.iter().any(|&b| b >= u.num_blocks()) || self.points.iter().any(|&p| p >= u.num_points()) {
            return false;
        }
        let mut distinct = self.points;
        distinct.sort_unstable();
        if distinct.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        // each point on exactly the two blocks of its pair
        self.points.iter().zip(&PAIRS).all(|(&p, &(i, j))| {
            (0..4).all(|k| u.contains(self.blocks[k], p) == (k == i || k == j))
        })
    }
}

impl fmt::Display for ONanWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "blocks: {} / points: {}", join(&self.blocks), join(&self.points))
    }
}

/// Exhaustive search for an O'Nan configuration.
///
/// Returns the witness whose ascending block 4-tuple is lexicographically
/// least. Enumeration runs over triangles `a < b < c` (pairwise meeting in
/// three distinct points); the fourth block is then the join of a point of
/// `a` with a point of `b`, both off the triangle.
pub fn find_onan(u: &Unital) -> Option<ONanWitness> {
    (0..u.num_blocks()).into_par_iter().find_map_first(|a| onan_from(u, a))
}

fn onan_from(u: &Unital, a: usize) -> Option<ONanWitness> {
    let mut seconds: Vec<usize> = u
        .block(a)
        .iter()
        .flat_map(|&p| u.blocks_through(p).iter().copied())
        .filter(|&b| b > a)
        .collect();
    seconds.sort_unstable();
    for b in seconds {
        let p_ab = u.meet(a, b).expect("b meets a");
        let mut thirds: Vec<usize> = u
            .block(a)
            .iter()
            .filter(|&&p| p != p_ab)
            .flat_map(|&p| u.blocks_through(p).iter().copied())
            .filter(|&c| c > b && u.meet(c, b).is_some_and(|p| p != p_ab))
            .collect();
        thirds.sort_unstable();
        for c in thirds {
            let p_ac = u.meet(a, c).expect("c meets a");
            let p_bc = u.meet(b, c).expect("c meets b");
            let mut best: Option<usize> = None;
            for &s in u.block(a) {
                if s == p_ab || s == p_ac {
                    continue;
                }
                for &t in u.block(b) {
                    if t == p_ab || t == p_bc {
                        continue;
                    }
                    let d = u.join(s, t);
                    if d > c && best.is_none_or(|cur| d < cur) && u.meet(d, c).is_some() {
                        best = Some(d);
                    }
                }
            }
            if let Some(d) = best {
                return ONanWitness::from_blocks(u, [a, b, c, d]);
            }
        }
    }
    None
}

/// Whether `candidate` is `x`-parallel to `block`: it misses `x` and meets
/// every block joining `x` to a point of `block`. Requires `x ∉ block`.
pub fn is_x_parallel(u: &Unital, candidate: usize, block: usize, x: usize) -> bool {
    debug_assert!(!u.contains(block, x));
    !u.contains(candidate, x)
        && u.block(block).iter().all(|&p| {
            let joining = u.join(x, p);
            u.meet(candidate, joining).is_some()
        })
}

fn parallel_candidates(u: &Unital, block: usize, x: usize) -> impl Iterator<Item = usize> + '_ {
    // every x-parallel block meets x ∨ p₀ off x
    let p0 = u.block(block)[0];
    let first = u.join(x, p0);
    u.block(first)
        .iter()
        .filter(move |&&s| s != x)
        .flat_map(move |&s| u.blocks_through(s).iter().copied())
        .filter(move |&c| c != first && is_x_parallel(u, c, block, x))
}

/// All blocks `x`-parallel to `block`, ascending. `block` itself is always
/// among them.
pub fn x_parallel_blocks(u: &Unital, block: usize, x: usize) -> Result<Vec<usize>, ConfigError> {
    if u.contains(block, x) {
        return Err(ConfigError::PointOnBlock { block, point: x });
    }
    let mut out: Vec<usize> = parallel_candidates(u, block, x).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `x_parallel_blocks(u, block, x).len()` without allocating the list.
/// Requires `x ∉ block`.
pub fn count_x_parallel(u: &Unital, block: usize, x: usize) -> usize {
    // each candidate meets x ∨ p₀ in exactly one point, so no duplicates arise
    parallel_candidates(u, block, x).count()
}

/// Blocks through `y` that are `x`-parallel to `block`.
pub fn x_parallel_through(u: &Unital, block: usize, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
    u.blocks_through(y).iter().copied().filter(move |&c| is_x_parallel(u, c, block, x))
}
