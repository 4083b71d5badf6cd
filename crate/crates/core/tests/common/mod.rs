#![allow(dead_code)]

use qproj_core::oracle::{locked_convention, Quiver};
use qproj_core::{mutate_delta, DeltaVector, IntMatrix, MutationSequence, Seed, Sign};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dv(v: &[i64]) -> DeltaVector {
    DeltaVector::from_i64(v)
}

pub fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

/// Seed from the worked example: Markov quiver on vertices 2,3,4 plus a
/// vertex 1 attached to 2 and 3.
pub fn golden_seed() -> Seed {
    Seed::from_rows(&[
        vec![0, 2, -1, 0],
        vec![-2, 0, 2, -2],
        vec![1, -2, 0, 2],
        vec![0, 2, -2, 0],
    ])
    .unwrap()
}

pub fn golden_eps() -> DeltaVector {
    dv(&[0, 0, 1, -2])
}

pub fn random_seed(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Seed {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(-bound..=bound);
            rows[i][j] = x;
            rows[j][i] = -x;
        }
    }
    Seed::from_rows(&rows).unwrap()
}

/// Random acyclic quiver (arrows follow a random vertex order) as a seed
/// under the calibrated convention.
pub fn random_acyclic(rng: &mut ChaCha8Rng, n: usize, max_mult: usize, density: f64) -> Seed {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                let mult = rng.gen_range(1..=max_mult);
                arrows.extend(std::iter::repeat((order[a], order[b])).take(mult));
            }
        }
    }
    let q = Quiver::new(n, arrows).unwrap();
    Seed::new(q.to_b(locked_convention().unwrap())).unwrap()
}

pub fn linear_a(n: usize) -> Seed {
    let q = Quiver::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap();
    Seed::new(q.to_b(locked_convention().unwrap())).unwrap()
}

/// Random sequence without immediate repetitions.
pub fn random_sequence(rng: &mut ChaCha8Rng, n: usize, len: usize) -> MutationSequence {
    let mut steps: Vec<usize> = Vec::with_capacity(len);
    while steps.len() < len {
        let k = rng.gen_range(0..n);
        if steps.last() != Some(&k) || n == 1 {
            steps.push(k);
        }
    }
    MutationSequence::new(steps)
}

/// A weight that the sequence carries to `sign·e_vertex`: the unit vector at
/// the end of the sequence, transported back to `seed`.
pub fn pull_back_unit(seed: &Seed, seq: &MutationSequence, vertex: usize, sign: Sign) -> DeltaVector {
    let seeds = seq.seeds(seed).unwrap();
    let mut d = DeltaVector::unit(seed.n(), vertex, sign);
    for (t, &k) in seq.steps.iter().enumerate().rev() {
        d = mutate_delta(&seeds[t + 1], &d, k).unwrap();
    }
    d
}

pub fn max_abs(d: &DeltaVector) -> i64 {
    d.to_i64().map(|v| v.iter().map(|x| x.abs()).max().unwrap_or(0)).unwrap_or(i64::MAX)
}

/// Sum of positive and of negative parts, the presentation sizes.
pub fn sides(d: &DeltaVector) -> (i64, i64) {
    let v = d.to_i64().unwrap();
    (v.iter().filter(|x| **x > 0).sum(), -v.iter().filter(|x| **x < 0).sum::<i64>())
}
