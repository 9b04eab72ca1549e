use super::{MarginalCache, Objective};
use crate::{ElementId, Scalar};

/// Additive function `f(S) = Σ w(e)`.
#[derive(Clone, Debug)]
pub struct Modular<T> {
    weights: Vec<T>,
}

impl<T: Scalar> Modular<T> {
    pub fn new(weights: Vec<T>) -> Self {
        Modular { weights }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

impl<T: Scalar> Objective<T> for Modular<T> {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }
    fn kind(&self) -> &'static str {
        "modular"
    }
    fn evaluate(&self, s: &[ElementId]) -> T {
        s.iter().map(|e| self.weights[e.0]).sum()
    }
    fn cache(&self) -> Box<dyn MarginalCache<T> + '_> {
        Box::new(ModularCache {
            weights: &self.weights,
            members: Vec::new(),
            value: T::zero(),
        })
    }
}

struct ModularCache<'a, T> {
    weights: &'a [T],
    members: Vec<ElementId>,
    value: T,
}

impl<T: Scalar> MarginalCache<T> for ModularCache<'_, T> {
    fn members(&self) -> &[ElementId] {
        &self.members
    }
    fn value(&self) -> T {
        self.value
    }
    fn gain(&self, e: ElementId) -> T {
        self.weights[e.0]
    }
    fn insert(&mut self, e: ElementId) {
        self.members.push(e);
        self.value = self.value + self.weights[e.0];
    }
    fn clear(&mut self) {
        self.members.clear();
        self.value = T::zero();
    }
}
