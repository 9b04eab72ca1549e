//! Objectives over metric point sets: k-medoid and kernel log-determinant.

use serde::{Deserialize, Serialize};

use super::{MarginalCache, Objective};
use crate::error::{Error, Result};
use crate::{ElementId, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Euclidean distance on raw coordinates.
    #[default]
    Euclidean,
    /// Great-circle distance in kilometres; points are `(lat, lon)` in degrees.
    Haversine,
}

impl Metric {
    pub fn distance<T: Scalar>(self, a: &[T], b: &[T]) -> T {
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(&x, &y)| (x - y) * (x - y))
                .sum::<T>()
                .sqrt(),
            Metric::Haversine => {
                let rad = T::lit(std::f64::consts::PI / 180.0);
                let (lat1, lon1) = (a[0] * rad, a[1] * rad);
                let (lat2, lon2) = (b[0] * rad, b[1] * rad);
                let two = T::lit(2.0);
                let h = ((lat2 - lat1) / two).sin().powi(2)
                    + lat1.cos() * lat2.cos() * ((lon2 - lon1) / two).sin().powi(2);
                T::lit(2.0 * 6371.0) * h.sqrt().min(T::one()).asin()
            }
        }
    }
}

fn check_points<T: Scalar>(points: &[Vec<T>], metric: Metric) -> Result<()> {
    let dim = points.first().map_or(0, Vec::len);
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::Construction(format!(
                "point {i} has dimension {} instead of {dim}",
                p.len()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Construction(format!("point {i} has a non-finite coordinate")));
        }
    }
    if metric == Metric::Haversine && dim != 2 {
        return Err(Error::Construction("haversine needs (lat, lon) points".into()));
    }
    Ok(())
}

/// Standard deviation of all pairwise distances, the default bandwidth for
/// the log-det kernel.
pub fn pairwise_distance_std<T: Scalar>(points: &[Vec<T>], metric: Metric) -> T {
    let n = points.len();
    let (mut count, mut mean, mut m2) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let d = metric.distance(&points[i], &points[j]).as_f64();
            count += 1.0;
            let delta = d - mean;
            mean += delta / count;
            m2 += delta * (d - mean);
        }
    }
    if count < 2.0 {
        return T::zero();
    }
    T::lit((m2 / (count - 1.0)).sqrt())
}

/// `f(S) = L({e₀}) − L(S ∪ {e₀})` with `L(S) = (1/|V|) Σ_v min_{e∈S} d(e, v)`.
#[derive(Clone, Debug)]
pub struct KMedoid<T> {
    points: Vec<Vec<T>>,
    metric: Metric,
    e0: ElementId,
    /// `d(e₀, v)` for every `v`.
    base: Vec<T>,
    base_loss: T,
}

impl<T: Scalar> KMedoid<T> {
    pub fn new(points: Vec<Vec<T>>, e0: ElementId, metric: Metric) -> Result<Self> {
        check_points(&points, metric)?;
        if e0.0 >= points.len() {
            return Err(Error::Construction(format!(
                "auxiliary point {e0} is not among the {} points",
                points.len()
            )));
        }
        let base: Vec<T> = points
            .iter()
            .map(|v| metric.distance(&points[e0.0], v))
            .collect();
        let base_loss = base.iter().copied().sum::<T>() / T::from_count(points.len());
        Ok(KMedoid {
            points,
            metric,
            e0,
            base,
            base_loss,
        })
    }

    pub fn auxiliary(&self) -> ElementId {
        self.e0
    }

    fn dist(&self, a: usize, b: usize) -> T {
        self.metric.distance(&self.points[a], &self.points[b])
    }

    /// `L(S ∪ {e₀})`.
    pub fn loss_with_auxiliary(&self, s: &[ElementId]) -> T {
        let n = T::from_count(self.points.len());
        (0..self.points.len())
            .map(|v| {
                s.iter()
                    .map(|e| self.dist(e.0, v))
                    .fold(self.base[v], T::min)
            })
            .sum::<T>()
            / n
    }
}

impl<T: Scalar> Objective<T> for KMedoid<T> {
    fn ground_size(&self) -> usize {
        self.points.len()
    }
    fn kind(&self) -> &'static str {
        "kmedoid"
    }
    fn evaluate(&self, s: &[ElementId]) -> T {
        if s.is_empty() {
            return T::zero();
        }
        self.base_loss - self.loss_with_auxiliary(s)
    }
    fn cache(&self) -> Box<dyn MarginalCache<T> + '_> {
        Box::new(KMedoidCache {
            objective: self,
            nearest: self.base.clone(),
            members: Vec::new(),
            value: T::zero(),
        })
    }
}

struct KMedoidCache<'a, T> {
    objective: &'a KMedoid<T>,
    /// Current distance from each point to `S ∪ {e₀}`.
    nearest: Vec<T>,
    members: Vec<ElementId>,
    value: T,
}

impl<T: Scalar> MarginalCache<T> for KMedoidCache<'_, T> {
    fn members(&self) -> &[ElementId] {
        &self.members
    }
    fn value(&self) -> T {
        self.value
    }
    fn gain(&self, e: ElementId) -> T {
        let o = self.objective;
        let saved: T = self
            .nearest
            .iter()
            .enumerate()
            .map(|(v, &cur)| (cur - o.dist(e.0, v)).max(T::zero()))
            .sum();
        saved / T::from_count(self.nearest.len())
    }
    fn insert(&mut self, e: ElementId) {
        self.value = self.value + self.gain(e);
        for v in 0..self.nearest.len() {
            let d = self.objective.dist(e.0, v);
            if d < self.nearest[v] {
                self.nearest[v] = d;
            }
        }
        self.members.push(e);
    }
    fn clear(&mut self) {
        self.nearest.copy_from_slice(&self.objective.base);
        self.members.clear();
        self.value = T::zero();
    }
}

/// `f(S) = log det(I + α K_{S,S})` with `K_ij = exp(−d(i, j)² / h²)`.
#[derive(Clone, Debug)]
pub struct LogDet<T> {
    points: Vec<Vec<T>>,
    metric: Metric,
    inv_h2: T,
    alpha: T,
}

impl<T: Scalar> LogDet<T> {
    pub fn new(points: Vec<Vec<T>>, h: T, alpha: T, metric: Metric) -> Result<Self> {
        check_points(&points, metric)?;
        if !(h > T::zero() && h.is_finite()) {
            return Err(Error::Construction(format!("bandwidth {h} must be positive")));
        }
        if !(alpha > T::zero() && alpha.is_finite()) {
            return Err(Error::Construction(format!("regularizer {alpha} must be positive")));
        }
        Ok(LogDet {
            points,
            metric,
            inv_h2: (h * h).recip(),
            alpha,
        })
    }

    /// Kernel entry `K_ij`.
    pub fn kernel(&self, i: ElementId, j: ElementId) -> T {
        let d = self.metric.distance(&self.points[i.0], &self.points[j.0]);
        (-(d * d) * self.inv_h2).exp()
    }

    /// `I + α K_{S,S}` as a dense row-major matrix.
    pub fn regularized_gram(&self, s: &[ElementId]) -> Vec<Vec<T>> {
        s.iter()
            .map(|&a| {
                s.iter()
                    .map(|&b| {
                        let k = self.alpha * self.kernel(a, b);
                        if a == b {
                            T::one() + k
                        } else {
                            k
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

impl<T: Scalar> Objective<T> for LogDet<T> {
    fn ground_size(&self) -> usize {
        self.points.len()
    }
    fn kind(&self) -> &'static str {
        "logdet"
    }
    fn evaluate(&self, s: &[ElementId]) -> T {
        let mut cache = self.cache();
        for &e in s {
            cache.insert(e);
        }
        cache.value()
    }
    fn cache(&self) -> Box<dyn MarginalCache<T> + '_> {
        Box::new(LogDetCache {
            objective: self,
            chol: Vec::new(),
            members: Vec::new(),
            value: T::zero(),
        })
    }
}

/// Cholesky factor of `I + α K_{S,S}`, extended one row per insertion.
struct LogDetCache<'a, T> {
    objective: &'a LogDet<T>,
    chol: Vec<Vec<T>>,
    members: Vec<ElementId>,
    value: T,
}

impl<T: Scalar> LogDetCache<'_, T> {
    /// Forward-solved row `y` with `L y = α K_{S,e}` and the Schur
    /// complement `1 + α − |y|²`.
    fn extension(&self, e: ElementId) -> (Vec<T>, T) {
        let o = self.objective;
        let mut y: Vec<T> = Vec::with_capacity(self.members.len());
        for (i, row) in self.chol.iter().enumerate() {
            let rhs = o.alpha * o.kernel(self.members[i], e);
            let partial: T = row[..i].iter().zip(&y).map(|(&l, &v)| l * v).sum();
            y.push((rhs - partial) / row[i]);
        }
        let norm: T = y.iter().map(|&v| v * v).sum();
        (y, T::one() + o.alpha - norm)
    }
}

impl<T: Scalar> MarginalCache<T> for LogDetCache<'_, T> {
    fn members(&self) -> &[ElementId] {
        &self.members
    }
    fn value(&self) -> T {
        self.value
    }
    fn gain(&self, e: ElementId) -> T {
        // The Schur complement of a matrix with spectrum ≥ 1 is ≥ 1.
        self.extension(e).1.max(T::one()).ln()
    }
    fn insert(&mut self, e: ElementId) {
        let (mut y, schur) = self.extension(e);
        let schur = schur.max(T::one());
        self.value = self.value + schur.ln();
        y.push(schur.sqrt());
        self.chol.push(y);
        self.members.push(e);
    }
    fn clear(&mut self) {
        self.chol.clear();
        self.members.clear();
        self.value = T::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ids;
    use crate::objective::{kmedoid_objective, logdet_objective};

    #[test]
    fn logdet_empty_and_singleton() {
        let pts = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        let f = logdet_objective(pts, 1.0, 10.0, Metric::Euclidean).unwrap();
        assert_eq!(f.value(&[]).unwrap(), 0.0);
        assert!((f.value(&ids([1])).unwrap() - 11f64.ln()).abs() < 1e-12);
        assert!((11f64.ln() - 2.3979).abs() < 1e-4);
    }

    #[test]
    fn logdet_identical_points() {
        let pts = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let f = logdet_objective(pts, 2.0, 10.0, Metric::Euclidean).unwrap();
        // det [[11, 10], [10, 11]] = 21.
        assert!((f.value(&ids([0, 1])).unwrap() - 21f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn logdet_rejects_bad_parameters() {
        let pts = vec![vec![0.0]];
        assert!(LogDet::new(pts.clone(), 0.0, 1.0, Metric::Euclidean).is_err());
        assert!(LogDet::new(pts.clone(), 1.0, -1.0, Metric::Euclidean).is_err());
        assert!(LogDet::new(vec![vec![f64::NAN]], 1.0, 1.0, Metric::Euclidean).is_err());
    }

    #[test]
    fn kmedoid_auxiliary_is_worthless() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![5.0, 5.0]];
        let f = kmedoid_objective(pts, ElementId(0), Metric::Euclidean).unwrap();
        assert_eq!(f.value(&[]).unwrap(), 0.0);
        assert_eq!(f.value(&ids([0])).unwrap(), 0.0);
        assert!(f.value(&ids([2])).unwrap() > 0.0);
    }

    #[test]
    fn haversine_quarter_meridian() {
        let d = Metric::Haversine.distance(&[0.0, 0.0], &[90.0, 0.0]);
        assert!((d - std::f64::consts::PI / 2.0 * 6371.0).abs() < 1e-6);
    }

    #[test]
    fn distance_std_of_collinear_triple() {
        // Pairwise distances 1, 1, 2: sample std = sqrt(1/3).
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        let s: f64 = pairwise_distance_std(&pts, Metric::Euclidean);
        assert!((s - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}
