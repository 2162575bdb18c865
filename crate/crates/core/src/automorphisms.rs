//! Point permutations, translation groups and isomorphism search.
//!
//! Both searches work the same way: a partial point map is extended one
//! choice at a time, and every choice is closed under the two forcing rules
//! of a linear space (two mapped points fix the image of their joining block,
//! two mapped blocks fix the image of their common point). Dead ends are
//! detected as soon as a block would be sent outside a block.

use std::collections::VecDeque;
use std::fmt;

use crate::unital::{Unital, UnitalError};

/// A bijection on point indices `0..v`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointPermutation {
    image: Vec<usize>,
}

impl fmt::Debug for PointPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointPermutation{:?}", self.image)
    }
}

impl PointPermutation {
    pub fn identity(n: usize) -> PointPermutation {
        PointPermutation { image: (0..n).collect() }
    }

    /// `None` unless `image` is a bijection on `0..image.len()`.
    pub fn from_images(image: Vec<usize>) -> Option<PointPermutation> {
        let mut seen = vec![false; image.len()];
        for &p in &image {
            if p >= image.len() || std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        Some(PointPermutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.image[p]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.image.iter().enumerate().filter(|(i, p)| i == *p).map(|(i, _)| i)
    }

    /// `self` followed by `then`: `p ↦ then(self(p))`.
    pub fn then(&self, then: &PointPermutation) -> PointPermutation {
        PointPermutation { image: self.image.iter().map(|&p| then.image[p]).collect() }
    }

    pub fn inverse(&self) -> PointPermutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &p) in self.image.iter().enumerate() {
            inv[p] = i;
        }
        PointPermutation { image: inv }
    }

    /// Image of a point set, sorted.
    pub fn apply_set(&self, points: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = points.iter().map(|&p| self.image[p]).collect();
        out.sort_unstable();
        out
    }

    /// Disjoint cycles of length > 1, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.image[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.image[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation such as `(0 1 2)(3 4)`; `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
            .collect()
    }
}

/// Whether `perm` maps the block set of `u` onto itself.
pub fn is_automorphism(u: &Unital, perm: &PointPermutation) -> Result<bool, UnitalError> {
    if perm.len() != u.num_points() {
        return Err(UnitalError::LengthMismatch { expected: u.num_points(), found: perm.len() });
    }
    Ok(is_isomorphism(u, u, perm))
}

/// Whether `perm` carries every block of `from` onto a block of `to`.
pub fn is_isomorphism(from: &Unital, to: &Unital, perm: &PointPermutation) -> bool {
    perm.len() == from.num_points()
        && from.num_points() == to.num_points()
        && from.num_blocks() == to.num_blocks()
        && from.blocks().iter().all(|b| to.find_block(&perm.apply_set(b)).is_some())
}

/// Whether `perm` is a translation of `u` with the given center: an
/// automorphism fixing `center` and every block through it.
pub fn is_translation(u: &Unital, perm: &PointPermutation, center: usize) -> bool {
    perm.len() == u.num_points()
        && perm.apply(center) == center
        && u.blocks_through(center).iter().all(|&b| perm.apply_set(u.block(b)) == u.block(b))
        && is_isomorphism(u, u, perm)
}

const UNMAPPED: usize = usize::MAX;

/// Partial isomorphism `from → to` closed under the linear-space forcing rules.
#[derive(Clone)]
struct PartialMap<'a> {
    from: &'a Unital,
    to: &'a Unital,
    point: Vec<usize>,
    point_used: Vec<bool>,
    block: Vec<usize>,
    block_used: Vec<bool>,
    mapped_points: Vec<usize>,
    mapped_blocks: Vec<usize>,
    /// Translation search: every point must stay on its block through the center.
    center: Option<usize>,
}

#[derive(Clone, Copy)]
enum Pending {
    Point(usize, usize),
    Block(usize, usize),
}

impl<'a> PartialMap<'a> {
    fn new(from: &'a Unital, to: &'a Unital) -> PartialMap<'a> {
        PartialMap {
            from,
            to,
            point: vec![UNMAPPED; from.num_points()],
            point_used: vec![false; to.num_points()],
            block: vec![UNMAPPED; from.num_blocks()],
            block_used: vec![false; to.num_blocks()],
            mapped_points: Vec::new(),
            mapped_blocks: Vec::new(),
            center: None,
        }
    }

    fn is_complete(&self) -> bool {
        self.mapped_points.len() == self.point.len()
    }

    /// Records `p ↦ image` and closes under forcing; `false` on contradiction.
    fn assign(&mut self, p: usize, image: usize) -> bool {
        let mut queue = VecDeque::from([Pending::Point(p, image)]);
        while let Some(job) = queue.pop_front() {
            let ok = match job {
                Pending::Point(p, img) => self.set_point(p, img, &mut queue),
                Pending::Block(b, img) => self.set_block(b, img, &mut queue),
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn point_allowed(&self, p: usize, img: usize) -> bool {
        match self.center {
            // translations keep every point on its block through the center
            Some(c) => (p == c) == (img == c) && (p == c || self.to.contains(self.from.join(c, p), img)),
            None => true,
        }
    }

    fn set_point(&mut self, p: usize, img: usize, queue: &mut VecDeque<Pending>) -> bool {
        match self.point[p] {
            UNMAPPED => {}
            cur => return cur == img,
        }
        if self.point_used[img] || !self.point_allowed(p, img) {
            return false;
        }
        // blocks through p that are already mapped must contain img
        for &b in self.from.blocks_through(p) {
            let bi = self.block[b];
            if bi != UNMAPPED && !self.to.contains(bi, img) {
                return false;
            }
        }
        self.point[p] = img;
        self.point_used[img] = true;
        for &other in &self.mapped_points {
            let b = self.from.join(p, other);
            if self.block[b] == UNMAPPED {
                queue.push_back(Pending::Block(b, self.to.join(img, self.point[other])));
            }
        }
        self.mapped_points.push(p);
        true
    }

    fn set_block(&mut self, b: usize, img: usize, queue: &mut VecDeque<Pending>) -> bool {
        match self.block[b] {
            UNMAPPED => {}
            cur => return cur == img,
        }
        if self.block_used[img] {
            return false;
        }
        for &p in self.from.block(b) {
            let pi = self.point[p];
            if pi != UNMAPPED && !self.to.contains(img, pi) {
                return false;
            }
        }
        self.block[b] = img;
        self.block_used[img] = true;
        for &other in &self.mapped_blocks {
            match (self.from.meet(b, other), self.to.meet(img, self.block[other])) {
                (Some(p), Some(pi)) => {
                    if self.point[p] == UNMAPPED {
                        queue.push_back(Pending::Point(p, pi));
                    } else if self.point[p] != pi {
                        return false;
                    }
                }
                (None, None) => {}
                _ => return false,
            }
        }
        self.mapped_blocks.push(b);
        true
    }

    /// Images still possible for an unmapped point `p`.
    fn candidates(&self, p: usize, class_from: &[u64], class_to: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for img in 0..self.to.num_points() {
            if self.point_used[img] || class_from[p] != class_to[img] || !self.point_allowed(p, img) {
                continue;
            }
            let ok = self.from.blocks_through(p).iter().all(|&b| {
                let bi = self.block[b];
                bi == UNMAPPED || self.to.contains(bi, img)
            });
            if ok {
                out.push(img);
            }
        }
        out
    }

    fn into_permutation(self) -> PointPermutation {
        PointPermutation { image: self.point }
    }
}

/// Depth-first completion of `map`. The unmapped point with the fewest
/// candidates is branched on; `prefer` orders the candidate equal to the
/// preimage first so that identity-like completions are found first.
fn complete<'a>(
    map: PartialMap<'a>,
    class_from: &[u64],
    class_to: &[u64],
    prefer_identity: bool,
    found: &mut dyn FnMut(PointPermutation) -> bool,
) -> bool {
    if map.is_complete() {
        return found(map.into_permutation());
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for p in 0..map.point.len() {
        if map.point[p] != UNMAPPED {
            continue;
        }
        let cands = map.candidates(p, class_from, class_to);
        if cands.is_empty() {
            return false;
        }
        if best.as_ref().is_none_or(|(_, c)| cands.len() < c.len()) {
            let single = cands.len() == 1;
            best = Some((p, cands));
            if single {
                break;
            }
        }
    }
    let (p, mut cands) = best.expect("incomplete map has an unmapped point");
    if prefer_identity {
        if let Some(i) = cands.iter().position(|&c| c == p) {
            cands[..=i].rotate_right(1);
        }
    }
    for img in cands {
        let mut next = map.clone();
        if next.assign(p, img) && complete(next, class_from, class_to, prefer_identity, found) {
            return true;
        }
    }
    false
}

/// All translations of `u` with the given center, sorted, identity first.
///
/// For each candidate image `y` of a fixed reference point `w` (the least
/// non-center point of the least block through the center), the map is
/// extended by forced moves and branching. Every completion is re-checked
/// against the definition before being returned.
pub fn translations_with_center(u: &Unital, center: usize) -> Vec<PointPermutation> {
    let trivial = vec![0u64; u.num_points()];
    let Some(&b0) = u.blocks_through(center).first() else {
        return vec![PointPermutation::identity(u.num_points())];
    };
    let w = *u.block(b0).iter().find(|&&p| p != center).expect("block has two points");
    let mut out = Vec::new();
    for &y in u.block(b0) {
        if y == center {
            continue;
        }
        let mut map = PartialMap::new(u, u);
        map.center = Some(center);
        if !map.assign(center, center) || !map.assign(w, y) {
            continue;
        }
        // at most one completion exists per choice of y, but collect them all
        let mut hits = Vec::new();
        complete(map, &trivial, &trivial, false, &mut |perm| {
            hits.push(perm);
            false
        });
        out.extend(hits.into_iter().filter(|t| is_translation(u, t, center)));
    }
    out.sort();
    out.dedup();
    out
}

/// Whether `|T_[c]| = q` for every point `c`.
pub fn admits_all_translations(u: &Unital) -> bool {
    (0..u.num_points()).all(|c| translations_with_center(u, c).len() == u.order())
}

/// Result of an isomorphism query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    Found(PointPermutation),
    NotIsomorphic,
    /// The structures cannot be isomorphic because basic parameters differ.
    Mismatch(String),
}

impl IsoOutcome {
    pub fn witness(&self) -> Option<&PointPermutation> {
        match self {
            IsoOutcome::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// Isomorphism-invariant point colouring: for each point `x`, the histogram of
/// how many blocks are `x`-parallel to each block missing `x`.
pub fn point_invariants(u: &Unital) -> Vec<u64> {
    (0..u.num_points())
        .map(|x| {
            let mut hist: Vec<u64> = Vec::new();
            for b in 0..u.num_blocks() {
                if u.contains(b, x) {
                    continue;
                }
                let n = crate::configurations::count_x_parallel(u, b, x);
                if hist.len() <= n {
                    hist.resize(n + 1, 0);
                }
                hist[n] += 1;
            }
            // FNV-1a over the histogram
            hist.iter().fold(0xcbf29ce484222325u64, |h, &c| (h ^ c).wrapping_mul(0x100000001b3))
        })
        .collect()
}

/// Searches for a point bijection carrying the blocks of `a` onto those of `b`.
///
/// Exhaustive backtracking over point images, restricted to matching
/// invariant classes and closed under forcing after every choice.
pub fn find_isomorphism(a: &Unital, b: &Unital) -> IsoOutcome {
    if a.num_points() != b.num_points() || a.order() != b.order() || a.kind() != b.kind() {
        return IsoOutcome::Mismatch(format!(
            "parameters differ: (v={}, q={}) vs (v={}, q={})",
            a.num_points(),
            a.order(),
            b.num_points(),
            b.order()
        ));
    }
    if a.num_blocks() != b.num_blocks() || a.block_size() != b.block_size() {
        return IsoOutcome::Mismatch("block counts or sizes differ".to_string());
    }
    if a == b {
        return IsoOutcome::Found(PointPermutation::identity(a.num_points()));
    }
    let (ca, cb) = (point_invariants(a), point_invariants(b));
    let (mut sa, mut sb) = (ca.clone(), cb.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return IsoOutcome::NotIsomorphic;
    }
    let mut result = None;
    complete(PartialMap::new(a, b), &ca, &cb, true, &mut |perm| {
        if is_isomorphism(a, b, &perm) {
            result = Some(perm);
            true
        } else {
            false
        }
    });
    match result {
        Some(p) => IsoOutcome::Found(p),
        None => IsoOutcome::NotIsomorphic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine_plane() -> Unital {
        let pt = |x: usize, y: usize| 3 * x + y;
        let mut blocks = Vec::new();
        for x in 0..3 {
            blocks.push((0..3).map(|y| pt(x, y)).collect());
        }
        for m in 0..3 {
            for c in 0..3 {
                blocks.push((0..3).map(|x| pt(x, (m * x + c) % 3)).collect());
            }
        }
        Unital::from_blocks(2, blocks).unwrap()
    }

    #[test]
    fn permutation_basics() {
        let p = PointPermutation::from_images(vec![1, 2, 0, 4, 3]).unwrap();
        assert_eq!(p.cycle_notation(), "(0 1 2)(3 4)");
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.then(&p).images(), &[2, 0, 1, 3, 4]);
        assert_eq!(PointPermutation::identity(3).cycle_notation(), "()");
        assert!(PointPermutation::from_images(vec![0, 0]).is_none());
        assert!(PointPermutation::from_images(vec![0, 2]).is_none());
    }

    #[test]
    fn identity_is_automorphism_and_length_checked() {
        let u = affine_plane();
        assert_eq!(is_automorphism(&u, &PointPermutation::identity(9)), Ok(true));
        assert_eq!(
            is_automorphism(&u, &PointPermutation::identity(8)),
            Err(UnitalError::LengthMismatch { expected: 9, found: 8 })
        );
    }

    #[test]
    fn affine_translations() {
        // in AG(2,3) the translations with center c are the point reflection
        // through c and the identity
        let u = affine_plane();
        for c in 0..9 {
            let t = translations_with_center(&u, c);
            assert_eq!(t.len(), 2);
            assert!(t[0].is_identity());
            assert_eq!(t[1].fixed_points().collect::<Vec<_>>(), vec![c]);
        }
        assert!(admits_all_translations(&u));
    }

    #[test]
    fn self_isomorphism_is_identity() {
        let u = affine_plane();
        assert_eq!(find_isomorphism(&u, &u), IsoOutcome::Found(PointPermutation::identity(9)));
    }
}
