//! Phase II and the non-robust baselines.
//!
//! * [`lazy_greedy`]: priority-queue greedy with a `(1+ε₀)` staleness test.
//! * [`swapping`]: one-pass weighted swapping with the 2× replacement rule.
//! * [`omniscient_greedy`] / [`omniscient_swapping`]: the same, told the
//!   deletions in advance.
//! * [`robust_swapping_cascade`]: `d + 1` chained swapping instances.
//! * [`phase2`]: best of the surviving solution and an inner solver run on
//!   the surviving summary.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::centralized::CentralizedSummary;
use crate::element::{check_members, Membership};
use crate::error::Result;
use crate::scalar::cmp_scalar;
use crate::streaming::{StreamingSummary, Weighted};
use crate::{ElementId, GroundSet, Matroid, ObjectiveOracle, Scalar};

/// Default lazy-greedy precision.
pub const DEFAULT_EPS0: f64 = 0.0001;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution<T> {
    pub members: Vec<ElementId>,
    pub value: T,
    pub solver: String,
    pub oracle_calls: u64,
}

impl<T: Scalar> Solution<T> {
    fn empty(solver: &str) -> Self {
        Solution {
            members: Vec::new(),
            value: T::zero(),
            solver: solver.to_string(),
            oracle_calls: 0,
        }
    }
}

/// Phase II inner algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InnerSolver {
    LazyGreedy { eps0: f64 },
    Swapping,
}

impl Default for InnerSolver {
    fn default() -> Self {
        InnerSolver::LazyGreedy { eps0: DEFAULT_EPS0 }
    }
}

impl InnerSolver {
    pub fn id(&self) -> &'static str {
        match self {
            InnerSolver::LazyGreedy { .. } => "lazy-greedy",
            InnerSolver::Swapping => "swapping",
        }
    }

    /// Approximation factor plugged into the theoretical bounds: `2 + 3ε₀`
    /// for lazy greedy, `4` for swapping.
    pub fn beta(&self) -> f64 {
        match self {
            InnerSolver::LazyGreedy { eps0 } => 2.0 + 3.0 * eps0,
            InnerSolver::Swapping => 4.0,
        }
    }

    pub fn solve<T: Scalar, M: Matroid + ?Sized>(
        &self,
        candidates: &[ElementId],
        f: &ObjectiveOracle<T>,
        m: &M,
    ) -> Result<Solution<T>> {
        match *self {
            InnerSolver::LazyGreedy { eps0 } => lazy_greedy(candidates, f, m, eps0),
            InnerSolver::Swapping => swapping(candidates, f, m),
        }
    }
}

struct Queued<T> {
    priority: T,
    id: ElementId,
}

impl<T: Scalar> PartialEq for Queued<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Queued<T> {}

impl<T: Scalar> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Queued<T> {
    // Max-heap on priority; smaller id wins ties.
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_scalar(self.priority, other.priority).then(other.id.cmp(&self.id))
    }
}

/// Re-queue cap `⌈(1/ε₀)·ln(k/ε₀)⌉`, at least 1.
pub fn lazy_greedy_max_iter(k: usize, eps0: f64) -> u64 {
    let raw = ((k as f64 / eps0).ln() / eps0).ceil();
    if raw.is_finite() && raw >= 1.0 {
        raw as u64
    } else {
        1
    }
}

/// Lazy greedy over `candidates`. Deterministic: ties go to the smaller id.
pub fn lazy_greedy<T: Scalar, M: Matroid + ?Sized>(
    candidates: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
    eps0: f64,
) -> Result<Solution<T>> {
    check_members(candidates, f.ground_size())?;
    let start = f.calls();
    let k = m.rank();
    if k == 0 || candidates.is_empty() {
        return Ok(Solution::empty("lazy-greedy"));
    }
    let max_iter = lazy_greedy_max_iter(k, eps0);
    let slack = T::one() + T::lit(eps0);

    let mut cache = f.cache_at(&[])?;
    let mut heap: BinaryHeap<Queued<T>> = candidates
        .iter()
        .map(|&id| Queued {
            priority: cache.gain(id),
            id,
        })
        .collect();
    let mut requeued = vec![0u64; f.ground_size()];
    let mut members: Vec<ElementId> = Vec::new();

    while let Some(Queued { priority, id }) = heap.pop() {
        if members.len() == k || !m.can_add(&members, id) || requeued[id.0] >= max_iter {
            continue;
        }
        let gain = cache.gain(id);
        if priority <= slack * gain {
            cache.insert(id);
            members.push(id);
        } else {
            heap.push(Queued { priority: gain, id });
            requeued[id.0] += 1;
        }
    }
    Ok(Solution {
        value: cache.value(),
        members,
        solver: "lazy-greedy".into(),
        oracle_calls: f.calls() - start,
    })
}

/// Full record of a [`swapping`] pass.
#[derive(Clone, Debug)]
pub struct SwapRun<T: Scalar> {
    pub solution: Solution<T>,
    /// Weights of the final solution members.
    pub kept: Vec<Weighted<T>>,
    /// Every processed element with the weight it got on arrival.
    pub processed: Vec<Weighted<T>>,
}

/// One swapping instance: weighted independent set plus its cache.
struct Swapper<'a, T: Scalar, M: ?Sized> {
    f: &'a ObjectiveOracle<T>,
    m: &'a M,
    kept: Vec<Weighted<T>>,
    cache: crate::objective::OracleCache<'a, T>,
}

enum Offer {
    Added,
    Swapped(ElementId),
    Rejected,
}

impl<'a, T: Scalar, M: Matroid + ?Sized> Swapper<'a, T, M> {
    fn new(f: &'a ObjectiveOracle<T>, m: &'a M) -> Result<Self> {
        Ok(Swapper {
            f,
            m,
            kept: Vec::new(),
            cache: f.cache_at(&[])?,
        })
    }

    fn ids(&self) -> Vec<ElementId> {
        self.kept.iter().map(|x| x.id).collect()
    }

    fn offer(&mut self, e: ElementId) -> Result<(T, Offer)> {
        let w = self.cache.gain(e);
        let ids = self.ids();
        if self.m.can_add(&ids, e) {
            self.kept.push(Weighted { id: e, weight: w });
            self.cache.insert(e);
            return Ok((w, Offer::Added));
        }
        let circuit = self.m.fundamental_circuit(&ids, e)?;
        let (pos, lightest) = self
            .kept
            .iter()
            .enumerate()
            .filter(|(_, x)| circuit.members.contains(&x.id))
            .min_by(|a, b| cmp_scalar(a.1.weight, b.1.weight).then(a.1.id.cmp(&b.1.id)))
            .map(|(p, x)| (p, *x))
            .expect("a circuit through an independent set meets it");
        if T::lit(2.0) * lightest.weight < w {
            self.kept.remove(pos);
            self.kept.push(Weighted { id: e, weight: w });
            let ids = self.ids();
            self.cache.reset_to(&ids);
            Ok((w, Offer::Swapped(lightest.id)))
        } else {
            Ok((w, Offer::Rejected))
        }
    }

    fn finish(self, solver: &str, start: u64) -> Solution<T> {
        Solution {
            members: self.kept.iter().map(|x| x.id).collect(),
            value: self.cache.value(),
            solver: solver.into(),
            oracle_calls: self.f.calls() - start,
        }
    }
}

pub fn swapping_run<T: Scalar, M: Matroid + ?Sized>(
    stream: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<SwapRun<T>> {
    check_members(stream, f.ground_size())?;
    let start = f.calls();
    let mut inst = Swapper::new(f, m)?;
    let mut processed = Vec::with_capacity(stream.len());
    for &e in stream {
        let (w, _) = inst.offer(e)?;
        processed.push(Weighted { id: e, weight: w });
    }
    let kept = inst.kept.clone();
    Ok(SwapRun {
        solution: inst.finish("swapping", start),
        kept,
        processed,
    })
}

/// One-pass swapping; memory is exactly the solution.
pub fn swapping<T: Scalar, M: Matroid + ?Sized>(
    stream: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<Solution<T>> {
    swapping_run(stream, f, m).map(|r| r.solution)
}

fn surviving(ground_size: usize, pool: &[ElementId], deleted: &[ElementId]) -> Vec<ElementId> {
    let gone = Membership::from_slice(ground_size, deleted);
    pool.iter().copied().filter(|&e| !gone.contains(e)).collect()
}

/// Lazy greedy on `V \ D`.
pub fn omniscient_greedy<T: Scalar, M: Matroid + ?Sized>(
    ground: &GroundSet,
    deleted: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
    eps0: f64,
) -> Result<Solution<T>> {
    check_members(deleted, f.ground_size())?;
    let pool = surviving(f.ground_size(), &ground.all(), deleted);
    let mut s = lazy_greedy(&pool, f, m, eps0)?;
    s.solver = "omniscient-greedy".into();
    Ok(s)
}

/// Swapping over `stream` with deleted elements skipped.
pub fn omniscient_swapping<T: Scalar, M: Matroid + ?Sized>(
    stream: &[ElementId],
    deleted: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<Solution<T>> {
    check_members(deleted, f.ground_size())?;
    let pool = surviving(f.ground_size(), stream, deleted);
    let mut s = swapping(&pool, f, m)?;
    s.solver = "omniscient-swapping".into();
    Ok(s)
}

/// Solutions of `d + 1` chained swapping instances.
#[derive(Clone, Debug, Serialize)]
pub struct CascadeSummary<T> {
    pub instances: Vec<Vec<Weighted<T>>>,
}

impl<T: Scalar> CascadeSummary<T> {
    pub fn members(&self) -> Vec<ElementId> {
        let mut all: Vec<ElementId> = self.instances.iter().flatten().map(|x| x.id).collect();
        all.sort_unstable();
        all
    }

    pub fn size(&self) -> usize {
        self.instances.iter().map(Vec::len).sum()
    }
}

/// Runs `d + 1` swapping instances in sequence: anything instance `i`
/// rejects or evicts is offered to instance `i + 1`.
pub fn robust_swapping_cascade<T: Scalar, M: Matroid + ?Sized>(
    stream: &[ElementId],
    d: usize,
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<CascadeSummary<T>> {
    check_members(stream, f.ground_size())?;
    let mut instances = (0..=d).map(|_| Swapper::new(f, m)).collect::<Result<Vec<_>>>()?;
    for &arrival in stream {
        let mut carry = Some(arrival);
        for inst in instances.iter_mut() {
            let Some(e) = carry else { break };
            carry = match inst.offer(e)?.1 {
                Offer::Added => None,
                Offer::Swapped(out) => Some(out),
                Offer::Rejected => Some(e),
            };
        }
    }
    Ok(CascadeSummary {
        instances: instances.into_iter().map(|i| i.kept).collect(),
    })
}

/// Best instance untouched by `deleted`; if every instance lost an element,
/// the best surviving remainder.
pub fn cascade_phase2<T: Scalar>(
    summary: &CascadeSummary<T>,
    deleted: &[ElementId],
    f: &ObjectiveOracle<T>,
) -> Result<Solution<T>> {
    check_members(deleted, f.ground_size())?;
    let start = f.calls();
    let gone = Membership::from_slice(f.ground_size(), deleted);
    let untouched: Vec<&Vec<Weighted<T>>> = summary
        .instances
        .iter()
        .filter(|inst| inst.iter().all(|x| !gone.contains(x.id)))
        .collect();
    let candidates: Vec<Vec<ElementId>> = if untouched.is_empty() {
        summary
            .instances
            .iter()
            .map(|inst| inst.iter().map(|x| x.id).filter(|&e| !gone.contains(e)).collect())
            .collect()
    } else {
        untouched
            .iter()
            .map(|inst| inst.iter().map(|x| x.id).collect())
            .collect()
    };
    let mut best: Option<Solution<T>> = None;
    for members in candidates {
        let value = f.value(&members)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(Solution {
                members,
                value,
                solver: "robust-swapping-cascade".into(),
                oracle_calls: 0,
            });
        }
    }
    let mut best = best.unwrap_or_else(|| Solution::empty("robust-swapping-cascade"));
    best.oracle_calls = f.calls() - start;
    Ok(best)
}

/// Phase I output consumed by [`phase2`].
pub trait Summary {
    fn solution_ids(&self) -> Vec<ElementId>;
    fn backup_ids(&self) -> &[ElementId];
    fn deletion_budget(&self) -> usize;
}

impl<T: Scalar> Summary for CentralizedSummary<T> {
    fn solution_ids(&self) -> Vec<ElementId> {
        CentralizedSummary::solution_ids(self)
    }
    fn backup_ids(&self) -> &[ElementId] {
        &self.backup
    }
    fn deletion_budget(&self) -> usize {
        self.params.d
    }
}

impl<T: Scalar> Summary for StreamingSummary<T> {
    fn solution_ids(&self) -> Vec<ElementId> {
        StreamingSummary::solution_ids(self)
    }
    fn backup_ids(&self) -> &[ElementId] {
        &self.backup
    }
    fn deletion_budget(&self) -> usize {
        self.params.d
    }
}

/// `argmax{f(A \ D), f(ALG((A ∪ B) \ D))}`; ties go to the inner solver.
pub fn phase2<T, M, S>(
    summary: &S,
    deleted: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
    alg: InnerSolver,
) -> Result<Solution<T>>
where
    T: Scalar,
    M: Matroid + ?Sized,
    S: Summary + ?Sized,
{
    check_members(deleted, f.ground_size())?;
    if deleted.len() > summary.deletion_budget() {
        warn!(
            "{} deletions exceed the Phase I budget d = {}",
            deleted.len(),
            summary.deletion_budget()
        );
    }
    let start = f.calls();
    let n = f.ground_size();
    let kept_a = surviving(n, &summary.solution_ids(), deleted);
    let mut pool = kept_a.clone();
    pool.extend(surviving(n, summary.backup_ids(), deleted));
    pool.sort_unstable();
    pool.dedup();

    let inner = alg.solve(&pool, f, m)?;
    let value_a = f.value(&kept_a)?;
    let value_inner = f.value(&inner.members)?;
    let (members, value) = if value_a > value_inner {
        (kept_a, value_a)
    } else {
        (inner.members, value_inner)
    };
    Ok(Solution {
        members,
        value,
        solver: format!("phase2/{}", alg.id()),
        oracle_calls: f.calls() - start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centralized::{CentralizedParams, Insertion, ThresholdSet};
    use crate::element::ids;
    use crate::matroid::{Partition, Uniform};
    use crate::objective::modular_objective;
    use crate::trace::Trace;

    fn sorted(mut v: Vec<ElementId>) -> Vec<ElementId> {
        v.sort_unstable();
        v
    }

    fn summary(a: &[usize], b: &[usize], d: usize) -> CentralizedSummary<f64> {
        CentralizedSummary {
            solution: a
                .iter()
                .map(|&i| Insertion {
                    id: ElementId(i),
                    tau: 1.0,
                    marginal: 1.0,
                })
                .collect(),
            backup: ids(b.iter().copied()),
            top: Vec::new(),
            params: CentralizedParams {
                d,
                eps: 0.5,
                k: 1,
                delta: 0.0,
                bucket_threshold: 1,
                thresholds: ThresholdSet {
                    eps: 0.5,
                    delta: 0.0,
                    k: 1,
                    exponents: vec![],
                    taus: vec![],
                },
            },
            trace: Trace::new(),
        }
    }

    #[test]
    fn lazy_greedy_exact_on_modular() {
        let f = modular_objective(vec![5.0, 3.0, 1.0]);
        let s = lazy_greedy(&ids(0..3), &f, &Uniform::new(3, 2), DEFAULT_EPS0).unwrap();
        assert_eq!(sorted(s.members), ids([0, 1]));
        assert_eq!(s.value, 8.0);
    }

    #[test]
    fn lazy_greedy_respects_parts() {
        let f = modular_objective(vec![5.0, 3.0, 1.0]);
        let m = Partition::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        let s = lazy_greedy(&ids(0..3), &f, &m, DEFAULT_EPS0).unwrap();
        assert_eq!(sorted(s.members), ids([0, 2]));
        assert_eq!(s.value, 6.0);
    }

    #[test]
    fn max_iter_uses_natural_log() {
        assert_eq!(lazy_greedy_max_iter(10, 0.5), (2.0 * 20f64.ln()).ceil() as u64);
        assert_eq!(lazy_greedy_max_iter(1, 2.0), 1);
    }

    #[test]
    fn swapping_rule() {
        let f = modular_objective(vec![1.0, 3.0]);
        let s = swapping(&ids([0, 1]), &f, &Uniform::new(2, 1)).unwrap();
        assert_eq!(s.members, ids([1]));
        let f = modular_objective(vec![1.0, 1.5]);
        let s = swapping(&ids([0, 1]), &f, &Uniform::new(2, 1)).unwrap();
        assert_eq!(s.members, ids([0]));
    }

    #[test]
    fn omniscient_variants() {
        let f = modular_objective(vec![5.0, 4.0, 3.0]);
        let m = Uniform::new(3, 2);
        let g = GroundSet::new(3);
        let s = omniscient_greedy(&g, &ids([0]), &f, &m, DEFAULT_EPS0).unwrap();
        assert_eq!(sorted(s.members), ids([1, 2]));
        let all = omniscient_greedy(&g, &ids(0..3), &f, &m, DEFAULT_EPS0).unwrap();
        assert!(all.members.is_empty());
        let none = omniscient_greedy(&g, &[], &f, &m, DEFAULT_EPS0).unwrap();
        let plain = lazy_greedy(&ids(0..3), &f, &m, DEFAULT_EPS0).unwrap();
        assert_eq!(none.members, plain.members);

        let s = omniscient_swapping(&ids(0..3), &ids([0]), &f, &m).unwrap();
        assert_eq!(sorted(s.members), ids([1, 2]));
        assert!(omniscient_swapping(&ids(0..3), &ids(0..3), &f, &m).unwrap().members.is_empty());
        let none = omniscient_swapping(&ids(0..3), &[], &f, &m).unwrap();
        assert_eq!(none.members, swapping(&ids(0..3), &f, &m).unwrap().members);
    }

    #[test]
    fn phase2_prefers_better_arm() {
        let f = modular_objective(vec![1.0, 3.0]);
        let m = Uniform::new(2, 1);
        let s = phase2(&summary(&[0], &[1], 0), &[], &f, &m, InnerSolver::default()).unwrap();
        assert_eq!(s.members, ids([1]));
        assert_eq!(s.value, 3.0);
        let s = phase2(&summary(&[0], &[1], 2), &ids([0, 1]), &f, &m, InnerSolver::default()).unwrap();
        assert!(s.members.is_empty());
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn cascade_with_zero_budget_is_swapping() {
        let f = modular_objective(vec![1.0, 3.0, 2.0, 7.0]);
        let m = Uniform::new(4, 2);
        let c = robust_swapping_cascade(&ids(0..4), 0, &f, &m).unwrap();
        let s = swapping(&ids(0..4), &f, &m).unwrap();
        assert_eq!(c.instances.len(), 1);
        assert_eq!(c.instances[0].iter().map(|x| x.id).collect::<Vec<_>>(), s.members);
    }

    #[test]
    fn cascade_forwards_rejections() {
        let f = modular_objective(vec![1.0, 3.0, 2.5]);
        let m = Uniform::new(3, 1);
        let c = robust_swapping_cascade(&ids(0..3), 2, &f, &m).unwrap();
        // 0 enters #0, 1 evicts it to #1, 2 is rejected by #0 and evicts 0 from #1.
        let layout: Vec<Vec<ElementId>> = c
            .instances
            .iter()
            .map(|i| i.iter().map(|x| x.id).collect())
            .collect();
        assert_eq!(layout, vec![ids([1]), ids([2]), ids([0])]);
        let best = cascade_phase2(&c, &ids([1]), &f).unwrap();
        assert_eq!(best.members, ids([2]));
    }
}
