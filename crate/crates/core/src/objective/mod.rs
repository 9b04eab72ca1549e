//! Monotone submodular value oracles.
//!
//! An [`Objective`] knows how to evaluate a set from scratch and how to
//! build an incremental [`MarginalCache`]. Algorithms never talk to an
//! `Objective` directly; they go through an [`ObjectiveOracle`], which
//! validates element ids and counts oracle calls.

mod coverage;
mod geo;
mod modular;
mod movie;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use coverage::Coverage;
pub use geo::{pairwise_distance_std, KMedoid, LogDet, Metric};
pub use modular::Modular;
pub use movie::Movie;

use crate::element::{check_members, Membership};
use crate::error::Result;
use crate::{ElementId, Scalar};

pub trait Objective<T: Scalar>: fmt::Debug + Send + Sync {
    fn ground_size(&self) -> usize;

    fn kind(&self) -> &'static str;

    /// `f(s)` computed from scratch. Members are assumed in range and distinct.
    fn evaluate(&self, s: &[ElementId]) -> T;

    /// Incremental state positioned at the empty set.
    fn cache(&self) -> Box<dyn MarginalCache<T> + '_>;
}

/// Incremental evaluation state for a growing set `S`.
pub trait MarginalCache<T: Scalar> {
    fn members(&self) -> &[ElementId];

    /// `f(S)`.
    fn value(&self) -> T;

    /// `f(e | S)` for `e` not in `S`.
    fn gain(&self, e: ElementId) -> T;

    /// `S ← S + e`.
    fn insert(&mut self, e: ElementId);

    /// `S ← ∅`.
    fn clear(&mut self);
}

/// Fallback cache that recomputes `f(S + e) − f(S)` from scratch.
pub struct ScratchCache<'a, T: Scalar, O: ?Sized> {
    objective: &'a O,
    members: Vec<ElementId>,
    value: T,
}

impl<'a, T: Scalar, O: Objective<T> + ?Sized> ScratchCache<'a, T, O> {
    pub fn new(objective: &'a O) -> Self {
        ScratchCache {
            objective,
            members: Vec::new(),
            value: T::zero(),
        }
    }
}

impl<T: Scalar, O: Objective<T> + ?Sized> MarginalCache<T> for ScratchCache<'_, T, O> {
    fn members(&self) -> &[ElementId] {
        &self.members
    }
    fn value(&self) -> T {
        self.value
    }
    fn gain(&self, e: ElementId) -> T {
        let mut with = self.members.clone();
        with.push(e);
        self.objective.evaluate(&with) - self.value
    }
    fn insert(&mut self, e: ElementId) {
        self.members.push(e);
        self.value = self.objective.evaluate(&self.members);
    }
    fn clear(&mut self) {
        self.members.clear();
        self.value = T::zero();
    }
}

/// Closure-backed objective, mostly for tests and ad-hoc functions.
pub struct FnObjective<F> {
    n: usize,
    name: &'static str,
    f: F,
}

impl<F> FnObjective<F> {
    pub fn new(n: usize, name: &'static str, f: F) -> Self {
        FnObjective { n, name, f }
    }
}

impl<F> fmt::Debug for FnObjective<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnObjective")
            .field("n", &self.n)
            .field("name", &self.name)
            .finish()
    }
}

impl<T, F> Objective<T> for FnObjective<F>
where
    T: Scalar,
    F: Fn(&[ElementId]) -> T + Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }
    fn kind(&self) -> &'static str {
        self.name
    }
    fn evaluate(&self, s: &[ElementId]) -> T {
        (self.f)(s)
    }
    fn cache(&self) -> Box<dyn MarginalCache<T> + '_> {
        Box::new(ScratchCache::new(self))
    }
}

/// Call-counting front end over a shared objective.
pub struct ObjectiveOracle<T: Scalar> {
    inner: Arc<dyn Objective<T>>,
    calls: AtomicU64,
}

impl<T: Scalar> fmt::Debug for ObjectiveOracle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveOracle")
            .field("inner", &self.inner)
            .field("calls", &self.calls())
            .finish()
    }
}

impl<T: Scalar> ObjectiveOracle<T> {
    pub fn new<O: Objective<T> + 'static>(objective: O) -> Self {
        Self::from_shared(Arc::new(objective))
    }

    pub fn from_shared(inner: Arc<dyn Objective<T>>) -> Self {
        ObjectiveOracle {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    /// Same objective, fresh call counter. Used to give each trial its own oracle.
    pub fn fork(&self) -> Self {
        Self::from_shared(Arc::clone(&self.inner))
    }

    pub fn objective(&self) -> &dyn Objective<T> {
        &*self.inner
    }

    pub fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    pub fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    #[inline]
    fn tick(&self) {
        self.calls.fetch_add(1, Ordering::Relaxed);
    }

    pub fn value(&self, s: &[ElementId]) -> Result<T> {
        check_members(s, self.ground_size())?;
        self.tick();
        Ok(self.inner.evaluate(s))
    }

    /// `f(e | s) = f(s + e) − f(s)`; zero when `e ∈ s`.
    pub fn marginal(&self, e: ElementId, s: &[ElementId]) -> Result<T> {
        check_members(s, self.ground_size())?;
        check_members(&[e], self.ground_size())?;
        self.tick();
        if s.contains(&e) {
            return Ok(T::zero());
        }
        let mut cache = self.inner.cache();
        for &x in s {
            cache.insert(x);
        }
        Ok(cache.gain(e))
    }

    /// Singleton value `f({e})`, counted as one call.
    pub fn singleton(&self, e: ElementId) -> Result<T> {
        self.value(&[e])
    }

    /// Counting incremental cache positioned at `s`.
    pub fn cache_at(&self, s: &[ElementId]) -> Result<OracleCache<'_, T>> {
        check_members(s, self.ground_size())?;
        let mut cache = OracleCache {
            inner: self.inner.cache(),
            present: Membership::new(self.ground_size()),
            calls: &self.calls,
        };
        for &x in s {
            cache.insert(x);
        }
        Ok(cache)
    }
}

/// A [`MarginalCache`] whose `gain` calls are charged to the oracle counter.
/// Gains of members are zero and repeated inserts are ignored.
pub struct OracleCache<'a, T: Scalar> {
    inner: Box<dyn MarginalCache<T> + 'a>,
    present: Membership,
    calls: &'a AtomicU64,
}

impl<T: Scalar> OracleCache<'_, T> {
    pub fn members(&self) -> &[ElementId] {
        self.inner.members()
    }

    pub fn value(&self) -> T {
        self.inner.value()
    }

    pub fn gain(&self, e: ElementId) -> T {
        self.calls.fetch_add(1, Ordering::Relaxed);
        if self.present.contains(e) {
            T::zero()
        } else {
            self.inner.gain(e)
        }
    }

    pub fn insert(&mut self, e: ElementId) {
        if self.present.insert(e) {
            self.inner.insert(e);
        }
    }

    pub fn reset_to(&mut self, s: &[ElementId]) {
        for &x in self.inner.members() {
            self.present.clear(x);
        }
        self.inner.clear();
        for &x in s {
            self.insert(x);
        }
    }
}

pub fn modular_objective<T: Scalar>(weights: Vec<T>) -> ObjectiveOracle<T> {
    ObjectiveOracle::new(Modular::new(weights))
}

/// Dominating function of an undirected graph on `n` vertices.
pub fn dominating_objective<T: Scalar>(n: usize, edges: &[(usize, usize)]) -> Result<ObjectiveOracle<T>> {
    Ok(ObjectiveOracle::new(Coverage::dominating(n, edges)?))
}

pub fn movie_objective<T: Scalar>(user: Vec<T>, movies: Vec<Vec<T>>, alpha: T) -> Result<ObjectiveOracle<T>> {
    Ok(ObjectiveOracle::new(Movie::new(user, movies, alpha)?))
}

pub fn kmedoid_objective<T: Scalar>(points: Vec<Vec<T>>, e0: ElementId, metric: Metric) -> Result<ObjectiveOracle<T>> {
    Ok(ObjectiveOracle::new(KMedoid::new(points, e0, metric)?))
}

pub fn logdet_objective<T: Scalar>(points: Vec<Vec<T>>, h: T, alpha: T, metric: Metric) -> Result<ObjectiveOracle<T>> {
    Ok(ObjectiveOracle::new(LogDet::new(points, h, alpha, metric)?))
}
