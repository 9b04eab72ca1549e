//! Centralized Phase I: threshold sweep with randomized bucket draining.
//!
//! The `d` highest-valued singletons are withheld into `V_d`. For thresholds
//! `τ` in decreasing order, the bucket `B_τ` collects every remaining element
//! that is still addable and has marginal at least `τ`. While the bucket holds
//! at least `⌈d/ε⌉` elements, a uniformly random member joins the solution
//! `A`; whatever remains is removed from the ground set and saved to `B`.

use serde::Serialize;

use crate::element::Membership;
use crate::error::{Error, Result};
use crate::mutation::Mutation;
use crate::scalar::cmp_scalar;
use crate::trace::{Trace, TraceEvent};
use crate::{ElementId, GroundSet, Matroid, ObjectiveOracle, RngHandle, Scalar};

/// Deletion budget and precision shared by both Phase I algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RobustParams<T> {
    pub d: usize,
    pub eps: T,
}

impl<T: Scalar> RobustParams<T> {
    pub fn new(d: usize, eps: T) -> Result<Self> {
        if !(eps > T::zero() && eps < T::one()) {
            return Err(Error::Config(format!("eps = {eps} must lie in (0, 1)")));
        }
        Ok(RobustParams { d, eps })
    }

    /// Smallest bucket size that triggers a draw.
    pub fn bucket_threshold(&self) -> usize {
        bucket_threshold(self.d, self.eps)
    }

    /// Whether the approximation guarantees (`ε < 1/3`) apply.
    pub fn theoretical_regime(&self) -> bool {
        self.eps < T::one() / T::lit(3.0)
    }
}

/// `max(1, ⌈d/ε⌉)`, found as the least `q ≥ 1` with `q·ε ≥ d` so that the
/// guard `|B| ≥ d/ε` is decided by one multiplication rather than a division.
pub fn bucket_threshold<T: Scalar>(d: usize, eps: T) -> usize {
    if d == 0 {
        return 1;
    }
    let d_t = T::from_count(d);
    let mut q = (d_t / eps).ceil().to_usize().unwrap_or(usize::MAX).max(1);
    while q > 1 && T::from_count(q - 1) * eps >= d_t {
        q -= 1;
    }
    while T::from_count(q) * eps < d_t {
        q += 1;
    }
    q
}

/// Powers `(1+ε)^i` with `ε·Δ/((1+ε)·k) < (1+ε)^i ≤ Δ`, descending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdSet<T> {
    pub eps: T,
    pub delta: T,
    pub k: usize,
    pub exponents: Vec<i32>,
    pub taus: Vec<T>,
}

impl<T: Scalar> ThresholdSet<T> {
    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// `⌈log_{1+ε}((1+ε)·k/ε)⌉ + 1`, the most thresholds any `Δ` can produce.
    pub fn max_len(k: usize, eps: T) -> usize {
        if k == 0 {
            return 0;
        }
        let base = T::one() + eps;
        let span = (base * T::from_count(k) / eps).ln() / base.ln();
        span.ceil().to_usize().unwrap_or(0) + 1
    }
}

#[inline]
pub(crate) fn power<T: Scalar>(eps: T, i: i32) -> T {
    (T::one() + eps).powi(i)
}

/// Largest `i` with `(1+ε)^i ≤ x`, for `x > 0`; checked by direct
/// multiplication around the logarithmic estimate.
pub(crate) fn floor_exponent<T: Scalar>(x: T, eps: T) -> i32 {
    let base = T::one() + eps;
    let mut i = (x.ln() / base.ln()).floor().to_i32().unwrap_or(0);
    while power(eps, i + 1) <= x {
        i += 1;
    }
    while power(eps, i) > x {
        i -= 1;
    }
    i
}

pub fn threshold_set<T: Scalar>(delta: T, k: usize, eps: T) -> ThresholdSet<T> {
    let mut set = ThresholdSet {
        eps,
        delta,
        k,
        exponents: Vec::new(),
        taus: Vec::new(),
    };
    if !(delta > T::zero()) || k == 0 {
        return set;
    }
    let lower = eps * delta / ((T::one() + eps) * T::from_count(k));
    let mut i = floor_exponent(delta, eps);
    loop {
        let tau = power(eps, i);
        if tau <= lower {
            break;
        }
        set.exponents.push(i);
        set.taus.push(tau);
        i -= 1;
    }
    set
}

/// One solution insertion: the element, its bucket threshold, and its
/// marginal with respect to the solution just before it was added.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Insertion<T> {
    pub id: ElementId,
    pub tau: T,
    pub marginal: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizedParams<T> {
    pub d: usize,
    pub eps: T,
    pub k: usize,
    pub delta: T,
    pub bucket_threshold: usize,
    pub thresholds: ThresholdSet<T>,
}

/// Output of centralized Phase I: the solution `A` in insertion order and the
/// backup set `B = V_d ∪ leftovers`.
#[derive(Clone, Debug, Serialize)]
pub struct CentralizedSummary<T: Scalar> {
    #[serde(rename = "A")]
    pub solution: Vec<Insertion<T>>,
    #[serde(rename = "B")]
    pub backup: Vec<ElementId>,
    #[serde(skip)]
    pub top: Vec<ElementId>,
    pub params: CentralizedParams<T>,
    #[serde(skip)]
    pub trace: Trace<T>,
}

impl<T: Scalar> CentralizedSummary<T> {
    pub fn solution_ids(&self) -> Vec<ElementId> {
        self.solution.iter().map(|x| x.id).collect()
    }

    pub fn size(&self) -> usize {
        self.solution.len() + self.backup.len()
    }

    /// `d + k + |T|·(q − 1) + (q − 1)` for bucket threshold `q`: the loop
    /// guards never let a run exceed it.
    pub fn size_bound(&self) -> usize {
        let p = &self.params;
        let slack = p.bucket_threshold - 1;
        p.d + p.k + p.thresholds.len() * slack + slack
    }
}

/// Runs centralized Phase I over the whole ground set.
pub fn phase1_centralized<T, M>(
    ground: &GroundSet,
    f: &ObjectiveOracle<T>,
    m: &M,
    params: RobustParams<T>,
    rng: &mut RngHandle,
) -> Result<CentralizedSummary<T>>
where
    T: Scalar,
    M: Matroid + ?Sized,
{
    run(ground, f, m, params, rng, Mutation::None)
}

/// [`phase1_centralized`] with an injected defect.
#[cfg(feature = "mutants")]
pub fn phase1_centralized_mutated<T, M>(
    ground: &GroundSet,
    f: &ObjectiveOracle<T>,
    m: &M,
    params: RobustParams<T>,
    rng: &mut RngHandle,
    mutation: Mutation,
) -> Result<CentralizedSummary<T>>
where
    T: Scalar,
    M: Matroid + ?Sized,
{
    run(ground, f, m, params, rng, mutation)
}

fn run<T, M>(
    ground: &GroundSet,
    f: &ObjectiveOracle<T>,
    m: &M,
    params: RobustParams<T>,
    rng: &mut RngHandle,
    mutation: Mutation,
) -> Result<CentralizedSummary<T>>
where
    T: Scalar,
    M: Matroid + ?Sized,
{
    let n = ground.len();
    if f.ground_size() != n || m.ground_size() != n {
        return Err(Error::Config(format!(
            "ground set has {n} elements but the objective has {} and the matroid {}",
            f.ground_size(),
            m.ground_size()
        )));
    }
    let RobustParams { d, eps } = RobustParams::new(params.d, params.eps)?;
    if d > n {
        return Err(Error::Config(format!("d = {d} exceeds the ground set size {n}")));
    }

    let k = m.rank();
    let mut cache = f.cache_at(&[])?;
    let mut by_value: Vec<(ElementId, T)> = ground.elements().map(|e| (e, cache.gain(e))).collect();
    by_value.sort_by(|a, b| cmp_scalar(b.1, a.1).then(a.0.cmp(&b.0)));
    let top: Vec<ElementId> = by_value[..d].iter().map(|x| x.0).collect();
    let delta = by_value.get(d).map_or(T::zero(), |x| x.1);

    let thresholds = threshold_set(delta, k, eps);
    let q = mutation.bucket_threshold(bucket_threshold(d, eps));

    let mut remaining: Vec<ElementId> = by_value[d..].iter().map(|x| x.0).collect();
    remaining.sort_unstable();
    let mut blocked = Membership::new(n);
    let mut solution: Vec<Insertion<T>> = Vec::new();
    let mut solution_ids: Vec<ElementId> = Vec::new();
    let mut backup = top.clone();
    let mut trace = Trace::new();

    for &tau in &thresholds.taus {
        loop {
            let mut bucket: Vec<(ElementId, T)> = Vec::new();
            for &e in &remaining {
                if blocked.contains(e) {
                    continue;
                }
                if !m.can_add(&solution_ids, e) {
                    blocked.insert(e);
                    trace.push(TraceEvent::Infeasible {
                        element: e,
                        solution_len: solution_ids.len(),
                    });
                    continue;
                }
                let g = cache.gain(e);
                if g >= tau {
                    bucket.push((e, g));
                }
            }
            if bucket.len() < q {
                for &(e, g) in &bucket {
                    trace.push(TraceEvent::Leftover {
                        element: e,
                        tau,
                        marginal: g,
                    });
                    backup.push(e);
                }
                let saved = Membership::from_slice(n, &bucket.iter().map(|x| x.0).collect::<Vec<_>>());
                remaining.retain(|&e| !saved.contains(e));
                break;
            }
            let (e, g) = bucket[rng.pick_index(bucket.len())?];
            cache.insert(e);
            solution_ids.push(e);
            solution.push(Insertion {
                id: e,
                tau,
                marginal: g,
            });
            trace.push(TraceEvent::Insert {
                element: e,
                tau,
                marginal: g,
            });
            remaining.retain(|&x| x != e);
        }
    }
    backup.sort_unstable();

    Ok(CentralizedSummary {
        solution,
        backup,
        top,
        params: CentralizedParams {
            d,
            eps,
            k,
            delta,
            bucket_threshold: q,
            thresholds,
        },
        trace,
    })
}
