//! Oblivious deletion-set generators. A plan depends only on the instance
//! and its own seed.

use serde::{Deserialize, Serialize};

use crate::element::Membership;
use crate::error::{Error, Result};
use crate::solvers::lazy_greedy;
use crate::{ElementId, GroundSet, Matroid, ObjectiveOracle, RngHandle, Scalar};

/// Precision of the greedy adversary's lazy greedy.
pub const ADVERSARY_EPS0: f64 = 0.0001;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DeletionPlan {
    pub generator_id: String,
    pub seed: u64,
    pub deleted: Vec<ElementId>,
}

impl DeletionPlan {
    pub fn none() -> Self {
        DeletionPlan {
            generator_id: "none".into(),
            seed: 0,
            deleted: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.deleted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deleted.is_empty()
    }
}

/// Each round runs lazy greedy on the elements not yet taken and deletes
/// its solution in selection order, until `d` elements are gathered or
/// nothing remains.
pub fn greedy_adversary<T: Scalar, M: Matroid + ?Sized>(
    v: &GroundSet,
    f: &ObjectiveOracle<T>,
    m: &M,
    d: usize,
) -> Result<DeletionPlan> {
    let mut taken = Membership::new(v.len());
    let mut deleted = Vec::with_capacity(d);
    while deleted.len() < d {
        let pool: Vec<ElementId> = v.elements().filter(|&e| !taken.contains(e)).collect();
        if pool.is_empty() {
            break;
        }
        let round = lazy_greedy(&pool, f, m, ADVERSARY_EPS0)?;
        if round.members.is_empty() {
            break;
        }
        for e in round.members {
            if deleted.len() == d {
                break;
            }
            taken.insert(e);
            deleted.push(e);
        }
    }
    deleted.sort_unstable();
    Ok(DeletionPlan {
        generator_id: "greedy".into(),
        seed: 0,
        deleted,
    })
}

/// Uniform random `d`-subset.
pub fn random_adversary(v: &GroundSet, d: usize, seed: u64) -> Result<DeletionPlan> {
    if d > v.len() {
        return Err(Error::Precondition(format!(
            "cannot delete {d} of {} elements",
            v.len()
        )));
    }
    let mut rng = RngHandle::new(seed, 0);
    let mut pool = v.all();
    for i in 0..d {
        let j = i + rng.below(pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(d);
    pool.sort_unstable();
    Ok(DeletionPlan {
        generator_id: "random".into(),
        seed,
        deleted: pool,
    })
}

/// The `d` largest singletons, ties to the smaller id.
pub fn top_value_adversary<T: Scalar>(
    v: &GroundSet,
    f: &ObjectiveOracle<T>,
    d: usize,
) -> Result<DeletionPlan> {
    let mut scored = v
        .elements()
        .map(|e| f.singleton(e).map(|s| (e, s)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| crate::scalar::cmp_scalar(b.1, a.1).then(a.0.cmp(&b.0)));
    let mut deleted: Vec<ElementId> = scored.into_iter().take(d).map(|(e, _)| e).collect();
    deleted.sort_unstable();
    Ok(DeletionPlan {
        generator_id: "top-value".into(),
        seed: 0,
        deleted,
    })
}
