#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitals::{PointPermutation, Unital};

pub fn fano() -> Unital {
    Unital::linear_space(
        7,
        vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ],
    )
    .unwrap()
}

pub fn random_permutation(n: usize, seed: u64) -> PointPermutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    PointPermutation::from_images(image).unwrap()
}

/// Blocks `x`-parallel to `block`, straight from the definition with set
/// operations only (no lookup tables).
pub fn x_parallel_oracle(u: &Unital, block: usize, x: usize) -> Vec<usize> {
    let joins: Vec<&[usize]> = u
        .block(block)
        .iter()
        .map(|&p| {
            let id = (0..u.num_blocks())
                .find(|&b| u.block(b).contains(&x) && u.block(b).contains(&p))
                .unwrap();
            u.block(id)
        })
        .collect();
    (0..u.num_blocks())
        .filter(|&c| {
            let cand = u.block(c);
            !cand.contains(&x) && joins.iter().all(|j| j.iter().any(|p| cand.contains(p)))
        })
        .collect()
}
