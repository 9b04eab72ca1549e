//! Streaming Phase I.
//!
//! One pass over the stream keeps a weighted independent solution `A`, the
//! `d` best singletons seen so far (`V_d`), and small buckets `B_τ` of
//! elements whose marginal with respect to `A` lies in `[τ, (1+ε)τ)`.
//! Whenever some bucket reaches `⌈d/ε⌉` elements a random member is drained:
//! its weight is fixed to its current marginal, and it either joins `A`,
//! replaces the lightest member of its fundamental circuit when it weighs
//! more than twice as much, or is dropped. Each change to `A` re-buckets
//! every buffered element against the new solution.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::centralized::{bucket_threshold, floor_exponent, power, RobustParams, ThresholdSet};
use crate::element::{check_members, Membership};
use crate::error::{Error, Result};
use crate::mutation::Mutation;
use crate::objective::OracleCache;
use crate::scalar::cmp_scalar;
use crate::trace::{Trace, TraceEvent};
use crate::{ElementId, Matroid, ObjectiveOracle, RngHandle, Scalar};

/// An element with the weight fixed when it was drained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Weighted<T> {
    pub id: ElementId,
    pub weight: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct StreamingParams<T> {
    pub d: usize,
    pub eps: T,
    pub k: usize,
    pub bucket_threshold: usize,
    pub delta: T,
    pub tau_min: T,
}

pub struct StreamState<'a, T: Scalar, M: Matroid + ?Sized> {
    f: &'a ObjectiveOracle<T>,
    m: &'a M,
    d: usize,
    eps: T,
    k: usize,
    q: usize,
    rng: RngHandle,
    mutation: Mutation,
    cache: OracleCache<'a, T>,
    solution: Vec<Weighted<T>>,
    evicted: Vec<Weighted<T>>,
    drained: Vec<Weighted<T>>,
    top: Vec<(ElementId, T)>,
    /// Keyed by the exponent `i` of `τ = (1+ε)^i`.
    buckets: BTreeMap<i32, Vec<ElementId>>,
    delta: T,
    tau_min: T,
    seen: Membership,
    trace: Trace<T>,
    peak_memory: usize,
    max_active: usize,
}

/// Output of streaming Phase I: weighted `A`, the evicted set `K`, and
/// `B = V_d ∪ surviving buckets`.
#[derive(Clone, Debug, Serialize)]
pub struct StreamingSummary<T: Scalar> {
    #[serde(rename = "A")]
    pub solution: Vec<Weighted<T>>,
    #[serde(rename = "K")]
    pub evicted: Vec<Weighted<T>>,
    #[serde(rename = "B")]
    pub backup: Vec<ElementId>,
    /// Every element drawn from a bucket, with its fixed weight.
    #[serde(skip)]
    pub drained: Vec<Weighted<T>>,
    pub params: StreamingParams<T>,
    pub peak_memory: usize,
    /// Most nonempty buckets observed at once.
    pub max_active_buckets: usize,
    #[serde(skip)]
    pub trace: Trace<T>,
}

impl<T: Scalar> StreamingSummary<T> {
    pub fn solution_ids(&self) -> Vec<ElementId> {
        self.solution.iter().map(|x| x.id).collect()
    }

    pub fn size(&self) -> usize {
        self.solution.len() + self.backup.len()
    }

    /// `rank + d + L·q + 1` where `L` bounds the number of live thresholds.
    pub fn memory_bound(&self) -> usize {
        let p = &self.params;
        p.k + p.d + ThresholdSet::<T>::max_len(p.k, p.eps) * p.bucket_threshold + 1
    }

    pub fn solution_weight(&self) -> T {
        self.solution.iter().map(|x| x.weight).sum()
    }

    pub fn evicted_weight(&self) -> T {
        self.evicted.iter().map(|x| x.weight).sum()
    }
}

/// Initializes streaming Phase I.
pub fn stream_init<'a, T, M>(
    params: RobustParams<T>,
    m: &'a M,
    f: &'a ObjectiveOracle<T>,
    rng: RngHandle,
) -> Result<StreamState<'a, T, M>>
where
    T: Scalar,
    M: Matroid + ?Sized,
{
    StreamState::new(f, m, params, rng)
}

impl<'a, T: Scalar, M: Matroid + ?Sized> StreamState<'a, T, M> {
    pub fn new(f: &'a ObjectiveOracle<T>, m: &'a M, params: RobustParams<T>, rng: RngHandle) -> Result<Self> {
        Self::with_mutation(f, m, params, rng, Mutation::None)
    }

    pub(crate) fn with_mutation(
        f: &'a ObjectiveOracle<T>,
        m: &'a M,
        params: RobustParams<T>,
        rng: RngHandle,
        mutation: Mutation,
    ) -> Result<Self> {
        let RobustParams { d, eps } = RobustParams::new(params.d, params.eps)?;
        if f.ground_size() != m.ground_size() {
            return Err(Error::Config(format!(
                "objective has {} elements but the matroid has {}",
                f.ground_size(),
                m.ground_size()
            )));
        }
        Ok(StreamState {
            f,
            m,
            d,
            eps,
            k: m.rank(),
            q: mutation.bucket_threshold(bucket_threshold(d, eps)),
            rng,
            mutation,
            cache: f.cache_at(&[])?,
            solution: Vec::new(),
            evicted: Vec::new(),
            drained: Vec::new(),
            top: Vec::with_capacity(d),
            buckets: BTreeMap::new(),
            delta: T::zero(),
            tau_min: T::zero(),
            seen: Membership::new(f.ground_size()),
            trace: Trace::new(),
            peak_memory: 0,
            max_active: 0,
        })
    }

    /// Elements currently held: solution, `V_d`, and every bucket.
    pub fn stored(&self) -> usize {
        self.solution.len() + self.top.len() + self.buckets.values().map(Vec::len).sum::<usize>()
    }

    pub fn peak_memory(&self) -> usize {
        self.peak_memory
    }

    pub fn solution(&self) -> &[Weighted<T>] {
        &self.solution
    }

    pub fn tau_min(&self) -> T {
        self.tau_min
    }

    pub fn bucket_threshold(&self) -> usize {
        self.q
    }

    /// `(τ, members)` for every nonempty bucket, largest `τ` first.
    pub fn buckets(&self) -> Vec<(T, Vec<ElementId>)> {
        self.buckets
            .iter()
            .rev()
            .filter(|(_, b)| !b.is_empty())
            .map(|(&i, b)| (power(self.eps, i), b.clone()))
            .collect()
    }

    fn observe_memory(&mut self, in_flight: usize) {
        self.peak_memory = self.peak_memory.max(self.stored() + in_flight);
        let active = self.buckets.values().filter(|b| !b.is_empty()).count();
        self.max_active = self.max_active.max(active);
    }

    fn solution_ids(&self) -> Vec<ElementId> {
        self.solution.iter().map(|x| x.id).collect()
    }

    /// Processes one arrival.
    pub fn process(&mut self, arrival: ElementId) -> Result<()> {
        check_members(&[arrival], self.f.ground_size())?;
        if !self.seen.insert(arrival) {
            return Err(Error::DuplicateElement(arrival));
        }
        self.observe_memory(1);
        let value = self.f.singleton(arrival)?;
        if self.top.len() < self.d {
            self.top.push((arrival, value));
            self.observe_memory(0);
            return Ok(());
        }

        // V_d keeps the d largest values; the smallest (larger id on ties) is popped.
        let (e, fe) = match self.min_top() {
            Some(pos) if value > self.top[pos].1 => std::mem::replace(&mut self.top[pos], (arrival, value)),
            _ => (arrival, value),
        };

        if fe > self.delta {
            self.delta = fe;
        }
        self.tau_min = if self.k == 0 {
            T::infinity()
        } else {
            self.eps / (T::one() + self.eps) * self.delta / T::from_count(self.k)
        };
        self.prune();

        let gain = self.cache.gain(e);
        let Some(i) = self.live_exponent(gain) else {
            self.trace.push(TraceEvent::Discarded {
                element: e,
                marginal: gain,
            });
            self.observe_memory(0);
            return Ok(());
        };
        self.buckets.entry(i).or_default().push(e);
        self.trace.push(TraceEvent::Bucketed {
            element: e,
            tau: power(self.eps, i),
            marginal: gain,
        });
        self.observe_memory(0);
        self.drain()
    }

    fn min_top(&self) -> Option<usize> {
        (0..self.top.len()).min_by(|&a, &b| {
            let (ea, va) = self.top[a];
            let (eb, vb) = self.top[b];
            cmp_scalar(va, vb).then(eb.cmp(&ea))
        })
    }

    /// Exponent of the largest surviving threshold `τ ≤ gain`; `None` when
    /// every power below `gain` has already been pruned.
    fn live_exponent(&self, gain: T) -> Option<i32> {
        if !(gain > T::zero()) || gain < self.tau_min {
            return None;
        }
        let i = floor_exponent(gain, self.eps);
        (power(self.eps, i) >= self.tau_min).then_some(i)
    }

    /// Drops every bucket whose threshold fell below `τ_min`.
    fn prune(&mut self) {
        let eps = self.eps;
        let tau_min = self.tau_min;
        let dead: Vec<i32> = self
            .buckets
            .keys()
            .copied()
            .filter(|&i| power(eps, i) < tau_min)
            .collect();
        for i in dead {
            for e in self.buckets.remove(&i).unwrap_or_default() {
                self.trace.push(TraceEvent::Discarded {
                    element: e,
                    marginal: T::nan(),
                });
            }
        }
    }

    fn full_bucket(&self) -> Option<i32> {
        self.buckets
            .iter()
            .rev()
            .find(|(_, b)| b.len() >= self.q)
            .map(|(&i, _)| i)
    }

    fn drain(&mut self) -> Result<()> {
        while let Some(i) = self.full_bucket() {
            let bucket = self.buckets.get_mut(&i).expect("full bucket exists");
            let pick = self.rng.pick_index(bucket.len())?;
            let g = bucket.swap_remove(pick);
            let w = self.cache.gain(g);
            self.drained.push(Weighted { id: g, weight: w });
            self.trace.push(TraceEvent::Drain {
                element: g,
                tau: power(self.eps, i),
                weight: w,
            });

            let ids = self.solution_ids();
            let changed = if self.m.can_add(&ids, g) {
                self.solution.push(Weighted { id: g, weight: w });
                self.trace.push(TraceEvent::Add { element: g, weight: w });
                true
            } else {
                let circuit = self.m.fundamental_circuit(&ids, g)?;
                let (pos, lightest) = self
                    .solution
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| circuit.members.contains(&x.id))
                    .min_by(|a, b| cmp_scalar(a.1.weight, b.1.weight).then(a.1.id.cmp(&b.1.id)))
                    .map(|(p, x)| (p, *x))
                    .expect("a circuit through an independent set meets it");
                let two = T::lit(2.0);
                let swap = match self.mutation {
                    Mutation::InvertedSwapGuard => w < two * lightest.weight,
                    _ => w > two * lightest.weight,
                };
                if swap {
                    self.solution.remove(pos);
                    self.solution.push(Weighted { id: g, weight: w });
                    self.evicted.push(lightest);
                    self.trace.push(TraceEvent::Swap {
                        element: g,
                        weight: w,
                        evicted: lightest.id,
                        evicted_weight: lightest.weight,
                    });
                } else {
                    self.trace.push(TraceEvent::Reject {
                        element: g,
                        weight: w,
                        blocker: lightest.id,
                        blocker_weight: lightest.weight,
                    });
                }
                swap
            };
            if changed {
                let ids = self.solution_ids();
                self.cache.reset_to(&ids);
                self.refresh();
            }
            self.observe_memory(0);
        }
        Ok(())
    }

    /// Re-buckets every buffered element against the current solution.
    fn refresh(&mut self) {
        let buffered: Vec<ElementId> = std::mem::take(&mut self.buckets)
            .into_iter()
            .rev()
            .flat_map(|(_, b)| b)
            .collect();
        for e in buffered {
            let gain = self.cache.gain(e);
            match self.live_exponent(gain) {
                Some(i) => self.buckets.entry(i).or_default().push(e),
                None => self.trace.push(TraceEvent::Discarded {
                    element: e,
                    marginal: gain,
                }),
            }
        }
    }

    /// Checks the bucket sandwich `τ ≤ f(e|A) < (1+ε)τ` by recomputing every
    /// marginal from scratch. Returns the first offending element.
    pub fn sandwich_violation(&self) -> Option<(ElementId, T, T)> {
        let ids = self.solution_ids();
        for (&i, bucket) in &self.buckets {
            let tau = power(self.eps, i);
            for &e in bucket {
                let g = self.f.objective().evaluate(&[ids.clone(), vec![e]].concat())
                    - self.f.objective().evaluate(&ids);
                let hi = tau * (T::one() + self.eps);
                if !(T::approx_le(tau, g) && g < hi + T::tolerance(g, hi)) {
                    return Some((e, tau, g));
                }
            }
        }
        None
    }

    pub fn finalize(self) -> StreamingSummary<T> {
        let mut backup: Vec<ElementId> = self.top.iter().map(|x| x.0).collect();
        backup.extend(self.buckets.values().flatten().copied());
        backup.sort_unstable();
        StreamingSummary {
            solution: self.solution,
            evicted: self.evicted,
            backup,
            drained: self.drained,
            params: StreamingParams {
                d: self.d,
                eps: self.eps,
                k: self.k,
                bucket_threshold: self.q,
                delta: self.delta,
                tau_min: self.tau_min,
            },
            peak_memory: self.peak_memory,
            max_active_buckets: self.max_active,
            trace: self.trace,
        }
    }
}

/// Feeds `order` through a fresh [`StreamState`] and finalizes it.
pub fn run_stream<T, M>(
    f: &ObjectiveOracle<T>,
    m: &M,
    params: RobustParams<T>,
    rng: RngHandle,
    order: &[ElementId],
) -> Result<StreamingSummary<T>>
where
    T: Scalar,
    M: Matroid + ?Sized,
{
    let mut state = StreamState::new(f, m, params, rng)?;
    for &e in order {
        state.process(e)?;
    }
    Ok(state.finalize())
}

/// [`run_stream`] with an injected defect.
#[cfg(feature = "mutants")]
pub fn run_stream_mutated<T, M>(
    f: &ObjectiveOracle<T>,
    m: &M,
    params: RobustParams<T>,
    rng: RngHandle,
    order: &[ElementId],
    mutation: Mutation,
) -> Result<StreamingSummary<T>>
where
    T: Scalar,
    M: Matroid + ?Sized,
{
    let mut state = StreamState::with_mutation(f, m, params, rng, mutation)?;
    for &e in order {
        state.process(e)?;
    }
    Ok(state.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ids;
    use crate::matroid::Uniform;
    use crate::objective::modular_objective;

    fn params(d: usize, eps: f64) -> RobustParams<f64> {
        RobustParams::new(d, eps).unwrap()
    }

    #[test]
    fn init_is_empty() {
        let f = modular_objective(vec![1.0; 4]);
        let m = Uniform::new(4, 2);
        let s = stream_init(params(2, 0.5), &m, &f, RngHandle::new(0, 0)).unwrap();
        assert_eq!(s.peak_memory(), 0);
        assert_eq!(s.stored(), 0);
        assert_eq!(s.tau_min(), 0.0);
    }

    #[test]
    fn first_d_arrivals_fill_top() {
        let f = modular_objective(vec![5.0, 1.0, 3.0]);
        let m = Uniform::new(3, 1);
        let mut s = StreamState::new(&f, &m, params(2, 0.5), RngHandle::new(0, 0)).unwrap();
        s.process(ElementId(0)).unwrap();
        s.process(ElementId(1)).unwrap();
        assert!(s.buckets().is_empty());
        assert!(s.solution().is_empty());
        let out = s.finalize();
        assert_eq!(out.backup, ids([0, 1]));
        assert!(out.solution.is_empty());
    }

    #[test]
    fn zero_budget_buckets_immediately() {
        let f = modular_objective(vec![2.0]);
        let m = Uniform::new(1, 1);
        let out = run_stream(&f, &m, params(0, 0.5), RngHandle::new(0, 0), &ids([0])).unwrap();
        // Bucket threshold 1 drains straight into the solution.
        assert_eq!(out.solution_ids(), ids([0]));
        assert_eq!(out.solution[0].weight, 2.0);
    }

    #[test]
    fn heavy_arrival_swaps() {
        let f = modular_objective(vec![1.0, 3.0]);
        let m = Uniform::new(2, 1);
        let out = run_stream(&f, &m, params(0, 0.5), RngHandle::new(0, 0), &ids([0, 1])).unwrap();
        assert_eq!(out.solution, vec![Weighted { id: ElementId(1), weight: 3.0 }]);
        assert_eq!(out.evicted, vec![Weighted { id: ElementId(0), weight: 1.0 }]);
    }

    #[test]
    fn light_arrival_is_dropped() {
        let f = modular_objective(vec![1.0, 1.5]);
        let m = Uniform::new(2, 1);
        let out = run_stream(&f, &m, params(0, 0.5), RngHandle::new(0, 0), &ids([0, 1])).unwrap();
        assert_eq!(out.solution_ids(), ids([0]));
        assert!(out.evicted.is_empty());
        assert_eq!(out.drained.len(), 2);
    }

    #[test]
    fn duplicate_arrival_rejected() {
        let f = modular_objective(vec![1.0, 2.0]);
        let m = Uniform::new(2, 1);
        let mut s = StreamState::new(&f, &m, params(1, 0.5), RngHandle::new(0, 0)).unwrap();
        s.process(ElementId(1)).unwrap();
        assert_eq!(s.process(ElementId(1)), Err(Error::DuplicateElement(ElementId(1))));
        assert!(matches!(s.process(ElementId(9)), Err(Error::ForeignElement { .. })));
    }

    #[test]
    fn empty_stream() {
        let f = modular_objective(vec![1.0]);
        let m = Uniform::new(1, 1);
        let out = run_stream(&f, &m, params(3, 0.5), RngHandle::new(0, 0), &[]).unwrap();
        assert!(out.solution.is_empty());
        assert!(out.backup.is_empty());
        assert_eq!(out.peak_memory, 0);
    }

    #[test]
    fn top_tie_evicts_larger_id() {
        // d = 2; values 2, 2 fill V_d; arrival 5 displaces the larger id (1).
        let f = modular_objective(vec![2.0, 2.0, 5.0]);
        let m = Uniform::new(3, 3);
        let out = run_stream(&f, &m, params(2, 0.5), RngHandle::new(0, 0), &ids([0, 1, 2])).unwrap();
        // Element 1 is popped into a bucket of size 1 < q = 4; B keeps it.
        assert_eq!(out.backup, ids([0, 1, 2]));
        let bucketed: Vec<_> = out
            .trace
            .events()
            .iter()
            .filter_map(|ev| match ev {
                TraceEvent::Bucketed { element, .. } => Some(*element),
                _ => None,
            })
            .collect();
        assert_eq!(bucketed, ids([1]));
    }

    #[test]
    fn rank_zero_discards_everything() {
        let f = modular_objective(vec![1.0, 2.0]);
        let m = Uniform::new(2, 0);
        let out = run_stream(&f, &m, params(0, 0.5), RngHandle::new(0, 0), &ids([0, 1])).unwrap();
        assert!(out.solution.is_empty());
        assert!(out.backup.is_empty());
    }
}
