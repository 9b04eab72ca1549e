//! Experiment configuration: a TOML file plus command-line overrides.
//!
//! ```toml
//! algorithm = "centralized"   # streaming | robust-swapping-cascade | omniscient-greedy | omniscient-swapping
//! inner = "lazy-greedy"       # or "swapping"
//! d = [5, 10, 20]
//! eps = 0.99
//! trials = 3
//! seed = 7
//!
//! [instance]
//! kind = "geometric"          # coverage | modular-lowerbound | points | edges | features | weights
//! n = 200
//! grid = 5
//!
//! [objective]
//! kind = "kmedoid"            # logdet | dominating | modular | movie
//!
//! [matroid]
//! kind = "laminar"            # uniform | partition | truncated
//! cap = 2
//!
//! [stream]
//! order = "file"              # random | value-descending
//!
//! [adversary]
//! kind = "greedy"             # random | top-value | none
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use robust_submod::objective::Metric;
use robust_submod::solvers::{InnerSolver, DEFAULT_EPS0};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Centralized,
    Streaming,
    RobustSwappingCascade,
    OmniscientGreedy,
    OmniscientSwapping,
}

impl Algorithm {
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Centralized => "centralized",
            Algorithm::Streaming => "streaming",
            Algorithm::RobustSwappingCascade => "robust-swapping-cascade",
            Algorithm::OmniscientGreedy => "omniscient-greedy",
            Algorithm::OmniscientSwapping => "omniscient-swapping",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| HarnessError::Config(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerKind {
    #[default]
    LazyGreedy,
    Swapping,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSpec {
    /// Uniform points in the unit square, labelled by a `grid × grid` cell.
    Geometric {
        n: usize,
        #[serde(default = "default_grid")]
        grid: usize,
        #[serde(default)]
        seed: u64,
    },
    /// `G(n, p)`; with `parts`, vertex `i` is labelled `i mod parts`.
    Coverage {
        n: usize,
        p: f64,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        parts: Option<usize>,
    },
    /// `k + d` unit weights among `n − k − d` zeros.
    ModularLowerbound {
        n: usize,
        k: usize,
        d: usize,
        #[serde(default)]
        seed: u64,
    },
    /// CSV `id,x,y[,part]`.
    Points { path: PathBuf },
    /// Whitespace-separated vertex pairs, one edge per line. `n` keeps
    /// trailing isolated vertices that the file cannot express.
    Edges {
        path: PathBuf,
        #[serde(default)]
        n: Option<usize>,
    },
    /// CSV `id,v1,...,vD` plus a one-row user vector; without `user`, a
    /// random user vector is drawn from `user_seed`.
    Features {
        path: PathBuf,
        #[serde(default)]
        user: Option<PathBuf>,
        #[serde(default)]
        user_seed: u64,
    },
    /// One real weight per line.
    Weights { path: PathBuf },
}

fn default_grid() -> usize {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Kmedoid {
        #[serde(default)]
        e0: usize,
        #[serde(default)]
        metric: Metric,
    },
    /// `h` defaults to the standard deviation of pairwise distances.
    Logdet {
        #[serde(default)]
        h: Option<f64>,
        #[serde(default = "default_logdet_alpha")]
        alpha: f64,
        #[serde(default)]
        metric: Metric,
    },
    Dominating,
    Modular,
    Movie {
        #[serde(default = "default_movie_alpha")]
        alpha: f64,
    },
}

fn default_logdet_alpha() -> f64 {
    10.0
}

fn default_movie_alpha() -> f64 {
    0.95
}

/// How an element listed with several candidate parts is assigned.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartAssignment {
    /// Uniform choice redrawn from each trial seed.
    #[default]
    Redraw,
    /// Uniform choice drawn once from the base seed.
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform {
        k: usize,
    },
    /// Parts come from `parts_file` (one line per element with one or more
    /// whitespace-separated part indices) or from the instance labels.
    Partition {
        #[serde(default)]
        cap: Option<usize>,
        #[serde(default)]
        caps: Option<Vec<usize>>,
        #[serde(default)]
        parts_file: Option<PathBuf>,
        #[serde(default)]
        assignment: PartAssignment,
    },
    /// One capacity node per part, an optional root over everything, and
    /// any extra `(members, capacity)` sets.
    Laminar {
        cap: usize,
        #[serde(default)]
        total: Option<usize>,
        #[serde(default)]
        family: Vec<(Vec<usize>, usize)>,
        #[serde(default)]
        parts_file: Option<PathBuf>,
        #[serde(default)]
        assignment: PartAssignment,
    },
    /// A partition matroid with capacity `cap` per part, capped at `k`.
    Truncated {
        cap: usize,
        k: usize,
        #[serde(default)]
        parts_file: Option<PathBuf>,
        #[serde(default)]
        assignment: PartAssignment,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "order", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StreamSpec {
    #[default]
    File,
    Random {
        #[serde(default)]
        seed: u64,
    },
    ValueDescending,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AdversarySpec {
    #[default]
    Greedy,
    Random {
        #[serde(default)]
        seed: u64,
    },
    TopValue,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub inner: InnerKind,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
    pub d: Vec<usize>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub instance: InstanceSpec,
    pub objective: ObjectiveSpec,
    pub matroid: MatroidSpec,
    #[serde(default)]
    pub stream: StreamSpec,
    #[serde(default)]
    pub adversary: AdversarySpec,
}

fn default_eps0() -> f64 {
    DEFAULT_EPS0
}

fn default_eps() -> f64 {
    0.99
}

fn default_trials() -> usize {
    1
}

/// Command-line values that replace their config counterparts.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub algorithm: Option<Algorithm>,
    pub d: Option<Vec<usize>>,
    pub eps: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Reads, resolves relative paths, and validates.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {}", path.display(), e.to_string().trim_start_matches("config: "))))?;
        cfg.resolve_paths(path.parent().unwrap_or_else(|| Path::new(".")));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(a) = o.algorithm {
            self.algorithm = a;
        }
        if let Some(d) = &o.d {
            self.d = d.clone();
        }
        if let Some(eps) = o.eps {
            self.eps = eps;
        }
        if let Some(t) = o.trials {
            self.trials = t;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.validate()
    }

    pub fn inner_solver(&self) -> InnerSolver {
        match self.inner {
            InnerKind::LazyGreedy => InnerSolver::LazyGreedy { eps0: self.eps0 },
            InnerKind::Swapping => InnerSolver::Swapping,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(HarnessError::Config(format!("eps = {} must lie in (0, 1)", self.eps)));
        }
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return Err(HarnessError::Config(format!("eps0 = {} must be positive", self.eps0)));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.d.is_empty() {
            return Err(HarnessError::Config("the d sweep is empty".into()));
        }
        for path in self.paths() {
            if !path.exists() {
                return Err(HarnessError::Config(format!("{} does not exist", path.display())));
            }
        }
        Ok(())
    }

    fn paths(&self) -> Vec<&PathBuf> {
        let mut out = Vec::new();
        match &self.instance {
            InstanceSpec::Points { path } | InstanceSpec::Edges { path, .. } | InstanceSpec::Weights { path } => {
                out.push(path)
            }
            InstanceSpec::Features { path, user, .. } => {
                out.push(path);
                out.extend(user.iter());
            }
            _ => {}
        }
        match &self.matroid {
            MatroidSpec::Partition { parts_file, .. }
            | MatroidSpec::Laminar { parts_file, .. }
            | MatroidSpec::Truncated { parts_file, .. } => out.extend(parts_file.iter()),
            MatroidSpec::Uniform { .. } => {}
        }
        out
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.instance {
            InstanceSpec::Points { path } | InstanceSpec::Edges { path, .. } | InstanceSpec::Weights { path } => fix(path),
            InstanceSpec::Features { path, user, .. } => {
                fix(path);
                if let Some(u) = user {
                    fix(u);
                }
            }
            _ => {}
        }
        match &mut self.matroid {
            MatroidSpec::Partition { parts_file, .. }
            | MatroidSpec::Laminar { parts_file, .. }
            | MatroidSpec::Truncated { parts_file, .. } => {
                if let Some(p) = parts_file {
                    fix(p);
                }
            }
            MatroidSpec::Uniform { .. } => {}
        }
    }
}

/// Parses `5,10,20` for `--d`.
pub fn parse_d_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| HarnessError::Config(format!("bad deletion budget {x:?} in --d")))
        })
        .collect()
}
