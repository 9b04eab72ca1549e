#![allow(dead_code)]

use robust_submod::objective::Coverage;
use robust_submod::{ids, ElementId, Laminar, Matroid, ObjectiveOracle, Partition, RngHandle, Uniform};

/// Random laminar family on `n` elements: a random recursive split of a
/// shuffled order, each node with a capacity in `1..=size`.
pub fn random_laminar(rng: &mut RngHandle, n: usize) -> Laminar {
    let mut order = ids(0..n);
    rng.shuffle(&mut order);
    let mut family = Vec::new();
    split(rng, &order, &mut family, true);
    Laminar::new(n, family).expect("recursive splits are laminar")
}

fn split(rng: &mut RngHandle, block: &[ElementId], family: &mut Vec<(Vec<ElementId>, usize)>, root: bool) {
    if block.is_empty() {
        return;
    }
    if !root || rng.below(2) == 0 {
        let cap = 1 + rng.below(block.len());
        family.push((block.to_vec(), cap));
    }
    if block.len() == 1 {
        return;
    }
    let cut = 1 + rng.below(block.len() - 1);
    if rng.below(3) > 0 {
        split(rng, &block[..cut], family, false);
        split(rng, &block[cut..], family, false);
    }
}

pub fn random_partition(rng: &mut RngHandle, n: usize) -> Partition {
    let parts = 1 + rng.below(3.min(n.max(1)));
    let assignment: Vec<usize> = (0..n).map(|_| rng.below(parts)).collect();
    let caps: Vec<usize> = (0..parts).map(|_| 1 + rng.below(2)).collect();
    Partition::new(assignment, caps).expect("valid partition")
}

/// One of uniform, partition, or laminar, drawn at random.
pub fn random_matroid(rng: &mut RngHandle, n: usize) -> Box<dyn Matroid> {
    match rng.below(3) {
        0 => Box::new(Uniform::new(n, 1 + rng.below(4.min(n)))),
        1 => Box::new(random_partition(rng, n)),
        _ => Box::new(random_laminar(rng, n)),
    }
}

/// Coverage with integer item weights, so sums are exact.
pub fn random_coverage(rng: &mut RngHandle, n: usize, items: usize) -> ObjectiveOracle<f64> {
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..items).filter(|_| rng.below(3) == 0).collect())
        .collect();
    let weights: Vec<f64> = (0..items).map(|_| (1 + rng.below(5)) as f64).collect();
    ObjectiveOracle::new(Coverage::new(covers, weights).expect("valid coverage"))
}

pub fn random_modular(rng: &mut RngHandle, n: usize) -> ObjectiveOracle<f64> {
    robust_submod::objective::modular_objective((0..n).map(|_| rng.below(10) as f64).collect())
}

pub fn random_objective(rng: &mut RngHandle, n: usize) -> ObjectiveOracle<f64> {
    if rng.below(2) == 0 {
        random_coverage(rng, n, 2 * n)
    } else {
        random_modular(rng, n)
    }
}

pub fn random_points(rng: &mut RngHandle, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| vec![rng.unit(), rng.unit()]).collect()
}

pub fn subset(v: &[ElementId], mask: u64) -> Vec<ElementId> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}
