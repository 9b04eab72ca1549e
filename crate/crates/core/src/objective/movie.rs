use super::{MarginalCache, Objective};
use crate::error::{Error, Result};
use crate::{ElementId, Scalar};

/// Personalized recommendation objective over a movie catalogue:
///
/// `f(S) = (1 − α) Σ_{s∈S} ⟨u, s⟩₊ + α Σ_{m} max_{s∈S} ⟨m, s⟩`
///
/// with the max over the empty set taken as 0. The facility term is not
/// clamped; it is monotone and submodular only when every pairwise inner
/// product is nonnegative, see [`Movie::negative_similarity_pairs`].
#[derive(Clone, Debug)]
pub struct Movie<T> {
    movies: Vec<Vec<T>>,
    linear: Vec<T>,
    alpha: T,
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

impl<T: Scalar> Movie<T> {
    pub fn new(user: Vec<T>, movies: Vec<Vec<T>>, alpha: T) -> Result<Self> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::Construction(format!("mixing weight {alpha} is outside [0, 1]")));
        }
        let dim = user.len();
        if let Some((i, m)) = movies.iter().enumerate().find(|(_, m)| m.len() != dim) {
            return Err(Error::Construction(format!(
                "movie {i} has dimension {} but the user vector has {dim}",
                m.len()
            )));
        }
        let linear = movies
            .iter()
            .map(|m| dot(&user, m).max(T::zero()))
            .collect();
        Ok(Movie {
            movies,
            linear,
            alpha,
        })
    }

    /// Number of ordered pairs `(m, s)` with `⟨m, s⟩ < 0`. Zero means the
    /// instance is monotone submodular.
    pub fn negative_similarity_pairs(&self) -> usize {
        let n = self.movies.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| dot(&self.movies[i], &self.movies[j]) < T::zero())
            .count()
    }

    fn sim(&self, m: usize, s: usize) -> T {
        dot(&self.movies[m], &self.movies[s])
    }
}

impl<T: Scalar> Objective<T> for Movie<T> {
    fn ground_size(&self) -> usize {
        self.movies.len()
    }
    fn kind(&self) -> &'static str {
        "movie"
    }
    fn evaluate(&self, s: &[ElementId]) -> T {
        if s.is_empty() {
            return T::zero();
        }
        let lin: T = s.iter().map(|e| self.linear[e.0]).sum();
        let facility: T = (0..self.movies.len())
            .map(|m| {
                s.iter()
                    .map(|e| self.sim(m, e.0))
                    .fold(T::neg_infinity(), T::max)
            })
            .sum();
        (T::one() - self.alpha) * lin + self.alpha * facility
    }
    fn cache(&self) -> Box<dyn MarginalCache<T> + '_> {
        Box::new(MovieCache {
            objective: self,
            best: vec![T::zero(); self.movies.len()],
            members: Vec::new(),
            value: T::zero(),
        })
    }
}

struct MovieCache<'a, T> {
    objective: &'a Movie<T>,
    /// `max_{s∈S} ⟨m, s⟩` per movie; meaningless while `members` is empty.
    best: Vec<T>,
    members: Vec<ElementId>,
    value: T,
}

impl<T: Scalar> MovieCache<'_, T> {
    fn facility_gain(&self, e: ElementId) -> T {
        let o = self.objective;
        if self.members.is_empty() {
            (0..o.movies.len()).map(|m| o.sim(m, e.0)).sum()
        } else {
            (0..o.movies.len())
                .map(|m| (o.sim(m, e.0) - self.best[m]).max(T::zero()))
                .sum()
        }
    }
}

impl<T: Scalar> MarginalCache<T> for MovieCache<'_, T> {
    fn members(&self) -> &[ElementId] {
        &self.members
    }
    fn value(&self) -> T {
        self.value
    }
    fn gain(&self, e: ElementId) -> T {
        let o = self.objective;
        (T::one() - o.alpha) * o.linear[e.0] + o.alpha * self.facility_gain(e)
    }
    fn insert(&mut self, e: ElementId) {
        self.value = self.value + self.gain(e);
        let first = self.members.is_empty();
        for m in 0..self.best.len() {
            let s = self.objective.sim(m, e.0);
            if first || s > self.best[m] {
                self.best[m] = s;
            }
        }
        self.members.push(e);
    }
    fn clear(&mut self) {
        self.members.clear();
        self.value = T::zero();
    }
}
