//! Seeded synthetic instances.

use robust_submod::RngHandle;

use crate::instance::{Data, Instance};

/// RNG stream ids. Each consumer of randomness gets its own stream so that
/// adding draws in one place never shifts another.
pub mod streams {
    pub const SYNTH: u64 = 1;
    pub const ALGORITHM: u64 = 2;
    pub const PARTS: u64 = 3;
    pub const ORDER: u64 = 4;
    pub const USER: u64 = 5;
}

/// `n` uniform points in the unit square. A point in grid cell
/// `(row, col)` gets part `row · grid + col`.
pub fn geometric(n: usize, grid: usize, seed: u64) -> Instance {
    let grid = grid.max(1);
    let mut rng = RngHandle::new(seed, streams::SYNTH);
    let mut points = Vec::with_capacity(n);
    let mut parts = Vec::with_capacity(n);
    for _ in 0..n {
        let (x, y) = (rng.unit(), rng.unit());
        let cell = |v: f64| ((v * grid as f64) as usize).min(grid - 1);
        parts.push(vec![cell(y) * grid + cell(x)]);
        points.push(vec![x, y]);
    }
    Instance {
        n,
        labels: None,
        data: Data::Points(points),
        parts: Some(parts),
    }
}

/// Erdős–Rényi `G(n, p)` for the dominating objective. With `parts`, vertex
/// `i` is in part `i mod parts`.
pub fn coverage(n: usize, p: f64, parts: Option<usize>, seed: u64) -> Instance {
    let mut rng = RngHandle::new(seed, streams::SYNTH);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.unit() < p {
                edges.push((i, j));
            }
        }
    }
    Instance {
        n,
        labels: None,
        data: Data::Graph(edges),
        parts: parts.map(|m| (0..n).map(|i| vec![i % m.max(1)]).collect()),
    }
}

/// `k + d` unit weights at random positions, zeros elsewhere. Requires
/// `k + d ≤ n`; extra unit weights are dropped otherwise.
pub fn modular_lowerbound(n: usize, k: usize, d: usize, seed: u64) -> Instance {
    let mut rng = RngHandle::new(seed, streams::SYNTH);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut weights = vec![0.0; n];
    for &i in order.iter().take(k + d) {
        weights[i] = 1.0;
    }
    Instance {
        n,
        labels: None,
        data: Data::Weights(weights),
        parts: None,
    }
}

/// A user vector with coordinates uniform in `[-1, 1)`.
pub fn user_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngHandle::new(seed, streams::USER);
    (0..dim).map(|_| 2.0 * rng.unit() - 1.0).collect()
}
