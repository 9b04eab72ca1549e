use super::{MarginalCache, Objective};
use crate::error::{Error, Result};
use crate::{ElementId, Scalar};

/// Weighted set coverage: element `e` covers the items `covers[e]`, and
/// `f(S)` is the total weight of covered items.
#[derive(Clone, Debug)]
pub struct Coverage<T> {
    covers: Vec<Vec<usize>>,
    item_weights: Vec<T>,
}

impl<T: Scalar> Coverage<T> {
    pub fn new(covers: Vec<Vec<usize>>, item_weights: Vec<T>) -> Result<Self> {
        let n_items = item_weights.len();
        for (e, items) in covers.iter().enumerate() {
            if let Some(&bad) = items.iter().find(|&&i| i >= n_items) {
                return Err(Error::Construction(format!(
                    "element {e} covers item {bad} but there are only {n_items} items"
                )));
            }
        }
        let covers = covers
            .into_iter()
            .map(|mut items| {
                items.sort_unstable();
                items.dedup();
                items
            })
            .collect();
        Ok(Coverage {
            covers,
            item_weights,
        })
    }

    /// `f(S) = |{v : ∃ s ∈ S, (s, v) ∈ E}|` on an undirected graph.
    pub fn dominating(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut covers = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Construction(format!(
                    "edge ({a}, {b}) leaves the vertex range 0..{n}"
                )));
            }
            covers[a].push(b);
            covers[b].push(a);
        }
        Self::new(covers, vec![T::one(); n])
    }

    pub fn covers(&self, e: ElementId) -> &[usize] {
        &self.covers[e.0]
    }
}

impl<T: Scalar> Objective<T> for Coverage<T> {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }
    fn kind(&self) -> &'static str {
        "coverage"
    }
    fn evaluate(&self, s: &[ElementId]) -> T {
        let mut covered = vec![false; self.item_weights.len()];
        for e in s {
            for &i in &self.covers[e.0] {
                covered[i] = true;
            }
        }
        covered
            .iter()
            .zip(&self.item_weights)
            .filter(|(&c, _)| c)
            .map(|(_, &w)| w)
            .sum()
    }
    fn cache(&self) -> Box<dyn MarginalCache<T> + '_> {
        Box::new(CoverageCache {
            objective: self,
            covered: vec![false; self.item_weights.len()],
            members: Vec::new(),
            value: T::zero(),
        })
    }
}

struct CoverageCache<'a, T> {
    objective: &'a Coverage<T>,
    covered: Vec<bool>,
    members: Vec<ElementId>,
    value: T,
}

impl<T: Scalar> MarginalCache<T> for CoverageCache<'_, T> {
    fn members(&self) -> &[ElementId] {
        &self.members
    }
    fn value(&self) -> T {
        self.value
    }
    fn gain(&self, e: ElementId) -> T {
        self.objective.covers[e.0]
            .iter()
            .filter(|&&i| !self.covered[i])
            .map(|&i| self.objective.item_weights[i])
            .sum()
    }
    fn insert(&mut self, e: ElementId) {
        for &i in &self.objective.covers[e.0] {
            if !std::mem::replace(&mut self.covered[i], true) {
                self.value = self.value + self.objective.item_weights[i];
            }
        }
        self.members.push(e);
    }
    fn clear(&mut self) {
        self.covered.iter_mut().for_each(|c| *c = false);
        self.members.clear();
        self.value = T::zero();
    }
}

#[cfg(test)]
mod tests {
    use crate::element::ids;
    use crate::objective::dominating_objective;
    use crate::ElementId;

    #[test]
    fn star_value() {
        let f = dominating_objective::<f64>(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(f.value(&ids([0])).unwrap(), 2.0);
    }

    #[test]
    fn triangle_marginal() {
        // N(0) = {1, 2} already covered; N(1) = {0, 2} adds vertex 0.
        let f = dominating_objective::<f64>(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(f.marginal(ElementId(1), &ids([0])).unwrap(), 1.0);
    }

    #[test]
    fn out_of_range_edge() {
        assert!(dominating_objective::<f64>(2, &[(0, 2)]).is_err());
    }
}
