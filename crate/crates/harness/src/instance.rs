//! Instances: the data behind an objective plus optional part labels.

use std::fmt::Write as _;
use std::path::Path;

use robust_submod::matroid::truncate;
use robust_submod::objective::{
    dominating_objective, kmedoid_objective, logdet_objective, modular_objective, pairwise_distance_std, Movie,
};
use robust_submod::{
    ElementId, GroundSet, Laminar, Matroid, ObjectiveOracle, Oracle64, Partition, RngHandle, Uniform,
};
use serde::Serialize;

use crate::config::{InstanceSpec, MatroidSpec, ObjectiveSpec, PartAssignment};
use crate::dataset;
use crate::error::{HarnessError, Result};
use crate::synth::{self, streams};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Data {
    Points(Vec<Vec<f64>>),
    Graph(Vec<(usize, usize)>),
    Weights(Vec<f64>),
    Movies { movies: Vec<Vec<f64>>, user: Vec<f64> },
}

impl Data {
    fn kind(&self) -> &'static str {
        match self {
            Data::Points(_) => "points",
            Data::Graph(_) => "graph",
            Data::Weights(_) => "weights",
            Data::Movies { .. } => "movie features",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Instance {
    pub n: usize,
    pub labels: Option<Vec<String>>,
    pub data: Data,
    /// Candidate parts per element; most elements have exactly one.
    pub parts: Option<Vec<Vec<usize>>>,
}

impl Instance {
    pub fn load(spec: &InstanceSpec) -> Result<Self> {
        Ok(match spec {
            InstanceSpec::Geometric { n, grid, seed } => synth::geometric(*n, *grid, *seed),
            InstanceSpec::Coverage { n, p, seed, parts } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(HarnessError::Config(format!("edge probability {p} is outside [0, 1]")));
                }
                synth::coverage(*n, *p, *parts, *seed)
            }
            InstanceSpec::ModularLowerbound { n, k, d, seed } => {
                if k + d > *n {
                    return Err(HarnessError::Config(format!("k + d = {} exceeds n = {n}", k + d)));
                }
                synth::modular_lowerbound(*n, *k, *d, *seed)
            }
            InstanceSpec::Points { path } => {
                let p = dataset::load_points(path)?;
                Instance {
                    n: p.coords.len(),
                    labels: Some(p.labels),
                    data: Data::Points(p.coords),
                    parts: p.parts.map(|v| v.into_iter().map(|x| vec![x]).collect()),
                }
            }
            InstanceSpec::Edges { path, n } => {
                let g = dataset::load_edges(path)?;
                let n = match n {
                    Some(n) if *n < g.n => {
                        return Err(HarnessError::Config(format!(
                            "{} mentions vertex {} but n = {n}",
                            path.display(),
                            g.n - 1
                        )))
                    }
                    Some(n) => *n,
                    None => g.n,
                };
                Instance {
                    n,
                    labels: None,
                    data: Data::Graph(g.edges),
                    parts: None,
                }
            }
            InstanceSpec::Features { path, user, user_seed } => {
                let f = dataset::load_features(path)?;
                let dim = f.vectors.first().map_or(0, Vec::len);
                let user = match user {
                    Some(u) => dataset::load_user(u)?,
                    None => synth::user_vector(dim, *user_seed),
                };
                Instance {
                    n: f.vectors.len(),
                    labels: Some(f.labels),
                    data: Data::Movies { movies: f.vectors, user },
                    parts: None,
                }
            }
            InstanceSpec::Weights { path } => {
                let w = dataset::load_weights(path)?;
                Instance {
                    n: w.len(),
                    labels: None,
                    data: Data::Weights(w),
                    parts: None,
                }
            }
        })
    }

    pub fn ground(&self) -> GroundSet {
        match &self.labels {
            Some(l) => GroundSet::with_labels(l.clone()),
            None => GroundSet::new(self.n),
        }
    }

    pub fn objective(&self, spec: &ObjectiveSpec) -> Result<Oracle64> {
        let mismatch = || {
            HarnessError::Config(format!(
                "objective {spec:?} cannot be built from {} data",
                self.data.kind()
            ))
        };
        let oracle = match (spec, &self.data) {
            (ObjectiveSpec::Kmedoid { e0, metric }, Data::Points(p)) => {
                kmedoid_objective(p.clone(), ElementId(*e0), *metric)?
            }
            (ObjectiveSpec::Logdet { h, alpha, metric }, Data::Points(p)) => {
                let h = h.unwrap_or_else(|| pairwise_distance_std(p, *metric));
                if !(h > 0.0) {
                    return Err(HarnessError::Config(format!("log-det bandwidth h = {h} must be positive")));
                }
                logdet_objective(p.clone(), h, *alpha, *metric)?
            }
            (ObjectiveSpec::Dominating, Data::Graph(edges)) => dominating_objective(self.n, edges)?,
            (ObjectiveSpec::Modular, Data::Weights(w)) => modular_objective(w.clone()),
            (ObjectiveSpec::Movie { alpha }, Data::Movies { movies, user }) => {
                let movie = Movie::new(user.clone(), movies.clone(), *alpha)?;
                let negative = movie.negative_similarity_pairs();
                if negative > 0 {
                    log::warn!(
                        "{negative} movie pairs have negative similarity; the objective may be neither monotone nor submodular"
                    );
                }
                ObjectiveOracle::new(movie)
            }
            _ => return Err(mismatch()),
        };
        Ok(oracle)
    }

    /// One part per element. Multi-part elements get a uniform choice drawn
    /// from `assignment_seed`.
    pub fn resolve_parts(&self, file: Option<&Path>, assignment_seed: u64) -> Result<Vec<usize>> {
        let loaded;
        let candidates = match file {
            Some(path) => {
                loaded = dataset::load_parts(path, self.n)?;
                &loaded
            }
            None => self.parts.as_ref().ok_or_else(|| {
                HarnessError::Config("this matroid needs part labels but the instance has none".into())
            })?,
        };
        let mut rng = RngHandle::new(assignment_seed, streams::PARTS);
        Ok(candidates
            .iter()
            .map(|c| match c.len() {
                1 => c[0],
                len => c[rng.below(len)],
            })
            .collect())
    }

    /// Builds the constraint. `trial_seed` drives the part assignment under
    /// [`PartAssignment::Redraw`], `base_seed` under [`PartAssignment::Fixed`].
    pub fn matroid(&self, spec: &MatroidSpec, base_seed: u64, trial_seed: u64) -> Result<Box<dyn Matroid>> {
        let seed = |a: &PartAssignment| match a {
            PartAssignment::Redraw => trial_seed,
            PartAssignment::Fixed => base_seed,
        };
        let n = self.n;
        Ok(match spec {
            MatroidSpec::Uniform { k } => Box::new(Uniform::new(n, *k)),
            MatroidSpec::Partition { cap, caps, parts_file, assignment } => {
                let parts = self.resolve_parts(parts_file.as_deref(), seed(assignment))?;
                match (cap, caps) {
                    (Some(c), None) => Box::new(Partition::with_capacity(parts, *c)),
                    (None, Some(cs)) => Box::new(Partition::new(parts, cs.clone())?),
                    _ => {
                        return Err(HarnessError::Config(
                            "a partition matroid needs exactly one of `cap` and `caps`".into(),
                        ))
                    }
                }
            }
            MatroidSpec::Laminar { cap, total, family, parts_file, assignment } => {
                let parts = self.resolve_parts(parts_file.as_deref(), seed(assignment))?;
                let n_parts = parts.iter().max().map_or(0, |&p| p + 1);
                let mut sets = vec![(Vec::new(), *cap); n_parts];
                for (i, &p) in parts.iter().enumerate() {
                    sets[p].0.push(ElementId(i));
                }
                sets.retain(|s| !s.0.is_empty());
                if let Some(t) = total {
                    sets.push(((0..n).map(ElementId).collect(), *t));
                }
                for (members, c) in family {
                    sets.push((members.iter().copied().map(ElementId).collect(), *c));
                }
                Box::new(Laminar::new(n, sets)?)
            }
            MatroidSpec::Truncated { cap, k, parts_file, assignment } => {
                let parts = self.resolve_parts(parts_file.as_deref(), seed(assignment))?;
                Box::new(truncate(Partition::with_capacity(parts, *cap), *k))
            }
        })
    }

    /// Writes the instance in the loader format of its data: a points CSV,
    /// an edge list, a weight list, or a feature CSV.
    pub fn to_file_format(&self) -> String {
        let label = |i: usize| match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        };
        let mut out = String::new();
        match &self.data {
            Data::Points(p) => {
                let parts = self.parts.as_ref().filter(|ps| ps.iter().all(|c| c.len() == 1));
                out.push_str(if parts.is_some() { "id,x,y,part\n" } else { "id,x,y\n" });
                for (i, c) in p.iter().enumerate() {
                    let _ = write!(out, "{},{},{}", label(i), c[0], c[1]);
                    if let Some(ps) = parts {
                        let _ = write!(out, ",{}", ps[i][0]);
                    }
                    out.push('\n');
                }
            }
            Data::Graph(edges) => {
                let _ = writeln!(out, "# {} vertices", self.n);
                for (a, b) in edges {
                    let _ = writeln!(out, "{a} {b}");
                }
            }
            Data::Weights(w) => {
                for x in w {
                    let _ = writeln!(out, "{x}");
                }
            }
            Data::Movies { movies, .. } => {
                for (i, m) in movies.iter().enumerate() {
                    out.push_str(&label(i));
                    for x in m {
                        let _ = write!(out, ",{x}");
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}
