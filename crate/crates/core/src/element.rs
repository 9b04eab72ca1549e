use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of an element of the ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(i)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building id lists in tests and examples.
pub fn ids<I: IntoIterator<Item = usize>>(raw: I) -> Vec<ElementId> {
    raw.into_iter().map(ElementId).collect()
}

/// The universe `0..n`, optionally with external labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        GroundSet { n, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        GroundSet {
            n: labels.len(),
            labels: Some(labels),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, id: ElementId) -> Option<&str> {
        self.labels.as_ref()?.get(id.0).map(String::as_str)
    }

    pub fn contains(&self, id: ElementId) -> bool {
        id.0 < self.n
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.n).map(ElementId)
    }

    pub fn all(&self) -> Vec<ElementId> {
        self.elements().collect()
    }
}

pub(crate) fn check_members(s: &[ElementId], n: usize) -> Result<()> {
    match s.iter().find(|e| e.0 >= n) {
        Some(&id) => Err(Error::ForeignElement { id, n }),
        None => Ok(()),
    }
}

/// Fixed-size membership table over the ground set.
#[derive(Clone, Debug)]
pub(crate) struct Membership(Vec<bool>);

impl Membership {
    pub fn new(n: usize) -> Self {
        Membership(vec![false; n])
    }

    pub fn from_slice(n: usize, s: &[ElementId]) -> Self {
        let mut m = Self::new(n);
        for &e in s {
            m.insert(e);
        }
        m
    }

    #[inline]
    pub fn contains(&self, e: ElementId) -> bool {
        self.0.get(e.0).copied().unwrap_or(false)
    }

    /// Returns `false` if `e` was already present.
    #[inline]
    pub fn insert(&mut self, e: ElementId) -> bool {
        !std::mem::replace(&mut self.0[e.0], true)
    }

    #[inline]
    pub fn clear(&mut self, e: ElementId) {
        self.0[e.0] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_define_size() {
        let g = GroundSet::with_labels(vec!["a".into(), "b".into()]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.label(ElementId(1)), Some("b"));
        assert_eq!(g.label(ElementId(2)), None);
        assert!(!g.contains(ElementId(2)));
    }

    #[test]
    fn foreign_members_rejected() {
        assert!(check_members(&ids([0, 1]), 2).is_ok());
        assert_eq!(
            check_members(&ids([0, 2]), 2),
            Err(Error::ForeignElement { id: ElementId(2), n: 2 })
        );
    }
}
