#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use surfgroup::{MonodromyData, Permutation, PipelineOptions, Strategy};

pub fn perm(n: usize, cycles: &str) -> Permutation {
    Permutation::parse_cycles(cycles, n).unwrap()
}

pub fn data(n: usize, branches: &[&str]) -> MonodromyData {
    MonodromyData::validate(n, branches.iter().map(|b| perm(n, b)).collect()).unwrap()
}

/// `count` copies of the transposition `(1 2)`.
pub fn hyperelliptic(count: usize) -> MonodromyData {
    data(2, &vec!["(1 2)"; count])
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// Draws `σ₁..σ_{r−1}` uniformly, closes the product with `σ_r`, and retries
/// until the tuple is transitive with no identity branch.
pub fn random_tuple<R: Rng>(n: usize, r: usize, rng: &mut R) -> Option<MonodromyData> {
    for _ in 0..10_000 {
        let mut perms: Vec<Permutation> = (0..r - 1).map(|_| random_permutation(n, rng)).collect();
        let product = perms
            .iter()
            .fold(Permutation::identity(n), |acc, p| acc.then(p));
        perms.push(product.inverse());
        if let Ok(d) = MonodromyData::validate(n, perms) {
            return Some(d);
        }
    }
    None
}

pub fn full(strategy: Strategy) -> PipelineOptions {
    PipelineOptions {
        strategy,
        canonical: true,
        verify: true,
    }
}
