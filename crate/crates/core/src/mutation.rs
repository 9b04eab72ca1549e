//! Deliberate defects for mutation testing of the structural checkers.
//! Only reachable from outside the crate with the `mutants` feature.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Streaming swaps when `w(g) < 2·w(k_g)` instead of `>`.
    InvertedSwapGuard,
    /// Both Phase I algorithms drain buckets one element early.
    BucketThresholdMinusOne,
}

impl Mutation {
    pub(crate) fn bucket_threshold(self, q: usize) -> usize {
        match self {
            Mutation::BucketThresholdMinusOne => q.saturating_sub(1).max(1),
            _ => q,
        }
    }
}
