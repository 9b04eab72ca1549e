//! Small random instances with integer-valued objectives, sized for
//! exhaustive ground truth.

use robust_submod::objective::Coverage;
use robust_submod::objective::modular_objective;
use robust_submod::{ElementId, Laminar, Matroid, ObjectiveOracle, Oracle64, Partition, RngHandle, Uniform};

pub struct SmallInstance {
    pub label: String,
    pub n: usize,
    pub f: Oracle64,
    pub m: Box<dyn Matroid>,
}

/// Coverage of up to `2n` items with weights in `1..=5`, each element
/// covering up to three random items.
pub fn random_coverage(rng: &mut RngHandle, n: usize) -> Oracle64 {
    let items = 2 * n.max(1);
    let weights = (0..items).map(|_| (1 + rng.below(5)) as f64).collect();
    let covers = (0..n)
        .map(|_| (0..1 + rng.below(3)).map(|_| rng.below(items)).collect())
        .collect();
    ObjectiveOracle::new(Coverage::new(covers, weights).expect("items are in range"))
}

/// Weights in `0..=9`.
pub fn random_modular(rng: &mut RngHandle, n: usize) -> Oracle64 {
    modular_objective((0..n).map(|_| rng.below(10) as f64).collect())
}

fn random_parts(rng: &mut RngHandle, n: usize) -> Vec<usize> {
    let parts = 1 + rng.below(n.clamp(1, 4));
    (0..n).map(|_| rng.below(parts)).collect()
}

/// Uniform, partition or laminar (parts plus an optional root cap).
pub fn random_matroid(rng: &mut RngHandle, n: usize) -> (Box<dyn Matroid>, String) {
    match rng.below(3) {
        0 => {
            let k = 1 + rng.below(n.clamp(1, 4));
            (Box::new(Uniform::new(n, k)), format!("uniform(k={k})"))
        }
        1 => {
            let parts = random_parts(rng, n);
            let cap = 1 + rng.below(2);
            (Box::new(Partition::with_capacity(parts, cap)), format!("partition(cap={cap})"))
        }
        _ => {
            let parts = random_parts(rng, n);
            let cap = 1 + rng.below(2);
            let total = 1 + rng.below(4);
            let mut family: Vec<(Vec<ElementId>, usize)> = Vec::new();
            for p in 0..=parts.iter().copied().max().unwrap_or(0) {
                let members: Vec<ElementId> =
                    (0..n).filter(|&i| parts[i] == p).map(ElementId).collect();
                if !members.is_empty() {
                    family.push((members, cap));
                }
            }
            family.push(((0..n).map(ElementId).collect(), total));
            let m = Laminar::new(n, family).expect("parts under a root are laminar");
            (Box::new(m), format!("laminar(cap={cap}, total={total})"))
        }
    }
}

/// A random instance on `n` elements: coverage or modular objective under a
/// uniform, partition or laminar matroid.
pub fn random_small(rng: &mut RngHandle, n: usize) -> SmallInstance {
    let (f, kind) = if rng.below(2) == 0 {
        (random_coverage(rng, n), "coverage")
    } else {
        (random_modular(rng, n), "modular")
    };
    let (m, mlabel) = random_matroid(rng, n);
    SmallInstance {
        label: format!("{kind} n={n} {mlabel}"),
        n,
        f,
        m,
    }
}
