//! Append-only execution traces.
//!
//! Phase I algorithms log every decision here so the structural checks in
//! [`crate::oracle`] can replay the run after the fact.

use serde::Serialize;

use crate::{ElementId, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum TraceEvent<T> {
    /// Centralized: `element` moved from the bucket of `tau` into the solution.
    Insert {
        element: ElementId,
        tau: T,
        marginal: T,
    },
    /// Centralized: `element` was left in the bucket of `tau` and saved to B.
    Leftover {
        element: ElementId,
        tau: T,
        marginal: T,
    },
    /// Centralized: `element` first stopped being addable; the solution had
    /// `solution_len` members at that moment.
    Infeasible {
        element: ElementId,
        solution_len: usize,
    },
    /// Streaming: `element` was placed in the bucket of `tau`.
    Bucketed {
        element: ElementId,
        tau: T,
        marginal: T,
    },
    /// Streaming: `element` dropped below the minimum threshold.
    Discarded { element: ElementId, marginal: T },
    /// Streaming: `element` was drawn from a full bucket and fixed its weight.
    Drain {
        element: ElementId,
        tau: T,
        weight: T,
    },
    /// Streaming: drained element entered the solution without eviction.
    Add { element: ElementId, weight: T },
    /// Streaming: drained element replaced `evicted`.
    Swap {
        element: ElementId,
        weight: T,
        evicted: ElementId,
        evicted_weight: T,
    },
    /// Streaming: drained element failed the swap guard against `blocker`.
    Reject {
        element: ElementId,
        weight: T,
        blocker: ElementId,
        blocker_weight: T,
    },
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct Trace<T> {
    events: Vec<TraceEvent<T>>,
}

impl<T: Scalar> Trace<T> {
    pub fn new() -> Self {
        Trace { events: Vec::new() }
    }

    pub(crate) fn push(&mut self, event: TraceEvent<T>) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[TraceEvent<T>] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}
