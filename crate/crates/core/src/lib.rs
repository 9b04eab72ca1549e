//! Deletion-robust monotone submodular maximization under matroid constraints.
//!
//! The crate builds small *summaries* of a ground set (Phase I) from which a
//! good independent solution can still be extracted after an adversary
//! deletes up to `d` elements (Phase II). Two Phase I procedures exist:
//!
//! * [`centralized::phase1_centralized`]: threshold sweep over the whole
//!   ground set, drawing solution elements at random from large buckets.
//! * [`streaming::StreamState`]: one pass with bounded memory, weighted
//!   solution and a 2× swap rule.
//!
//! Phase II and the classic baselines live in [`solvers`]; deletion
//! generators in [`adversary`]; exhaustive ground truth and structural
//! checkers in [`oracle`].
//!
//! All real-valued computation is generic over [`Scalar`] (`f32`, `f64`).
//! The `*64` aliases below fix the precision the harness uses.
//!
//! ```
//! use robust_submod::adversary::greedy_adversary;
//! use robust_submod::centralized::{phase1_centralized, RobustParams};
//! use robust_submod::objective::dominating_objective;
//! use robust_submod::solvers::{phase2, InnerSolver};
//! use robust_submod::{GroundSet, Matroid, RngHandle, Uniform};
//!
//! let edges = [(0, 1), (0, 2), (1, 3), (2, 4), (3, 4), (4, 5)];
//! let f = dominating_objective::<f64>(6, &edges).unwrap();
//! let m = Uniform::new(6, 2);
//! let ground = GroundSet::new(6);
//!
//! // Phase I sees only the budget d = 1.
//! let params = RobustParams::new(1, 0.5).unwrap();
//! let mut rng = RngHandle::new(42, 0);
//! let summary = phase1_centralized(&ground, &f, &m, params, &mut rng).unwrap();
//!
//! // The adversary deletes one element; Phase II repairs the solution.
//! let plan = greedy_adversary(&ground, &f, &m, 1).unwrap();
//! let solution = phase2(&summary, &plan.deleted, &f, &m, InnerSolver::default()).unwrap();
//! assert!(m.is_independent(&solution.members).unwrap());
//! assert!(solution.members.iter().all(|e| !plan.deleted.contains(e)));
//! ```

pub mod adversary;
pub mod centralized;
mod element;
mod error;
pub mod matroid;
#[cfg_attr(not(feature = "mutants"), allow(dead_code))]
mod mutation;
pub mod objective;
pub mod oracle;
mod rng;
mod scalar;
pub mod solvers;
pub mod streaming;
mod trace;

pub use element::{ids, ElementId, GroundSet};
pub use error::{Error, Result};
#[cfg(feature = "mutants")]
pub use mutation::Mutation;
pub use matroid::{Circuit, Laminar, Matroid, Partition, Truncated, Uniform};
pub use objective::{Objective, ObjectiveOracle};
pub use rng::{RngHandle, RngKey, PRNG_ALGORITHM};
pub use scalar::Scalar;
pub use trace::{Trace, TraceEvent};

pub type Oracle64 = ObjectiveOracle<f64>;
pub type Oracle32 = ObjectiveOracle<f32>;
pub type CentralizedSummary64 = centralized::CentralizedSummary<f64>;
pub type StreamingSummary64 = streaming::StreamingSummary<f64>;
pub type Solution64 = solvers::Solution<f64>;
