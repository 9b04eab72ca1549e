//! Experiment orchestration: for every deletion budget and trial, freeze a
//! deletion plan, run Phase I and Phase II, and record metrics.

use std::time::Instant;

use robust_submod::adversary::{greedy_adversary, random_adversary, top_value_adversary, DeletionPlan};
use robust_submod::centralized::{phase1_centralized, RobustParams};
use robust_submod::solvers::{
    cascade_phase2, omniscient_greedy, omniscient_swapping, phase2, robust_swapping_cascade,
};
use robust_submod::streaming::run_stream;
use robust_submod::{ElementId, GroundSet, Matroid, Oracle64, RngHandle, PRNG_ALGORITHM};
use serde::{Deserialize, Serialize};

use crate::config::{AdversarySpec, Algorithm, ExperimentConfig, MatroidSpec, StreamSpec};
use crate::error::{HarnessError, Result};
use crate::instance::Instance;
use crate::synth::streams;

/// One `(d, trial)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub algorithm: String,
    pub d: usize,
    pub trial: usize,
    pub value: f64,
    /// `|A| + |B|` for the two-phase algorithms.
    pub summary_size: usize,
    pub solution_size: usize,
    pub backup_size: usize,
    pub peak_memory: usize,
    pub oracle_calls: u64,
    pub phase1_seconds: f64,
    pub phase2_seconds: f64,
    pub seed: u64,
    pub stream: u64,
    pub prng: String,
    pub theoretical_regime: bool,
    pub deletion: DeletionPlan,
    pub solution: Vec<ElementId>,
}

impl Row {
    /// The fields a replay must reproduce exactly.
    pub fn replay_key(&self) -> (u64, usize, u64) {
        (self.value.to_bits(), self.summary_size, self.oracle_calls)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub std: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Stat {
        let n = xs.len() as f64;
        if xs.is_empty() {
            return Stat { mean: 0.0, std: 0.0 };
        }
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() < 2 {
            0.0
        } else {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Stat { mean, std }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub d: usize,
    pub trials: usize,
    pub value: Stat,
    pub summary_size: Stat,
    pub peak_memory: Stat,
    pub oracle_calls: Stat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    pub aggregates: Vec<Aggregate>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("bad report: {e}")))
    }

    /// Columns `algorithm,d,trial,value,summary_size,peak_memory,oracle_calls`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["algorithm", "d", "trial", "value", "summary_size", "peak_memory", "oracle_calls"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.algorithm.clone(),
                r.d.to_string(),
                r.trial.to_string(),
                r.value.to_string(),
                r.summary_size.to_string(),
                r.peak_memory.to_string(),
                r.oracle_calls.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

/// Seed of trial `t`: the base seed offset by `t`.
pub fn trial_seed(base: u64, trial: usize) -> u64 {
    base.wrapping_add(trial as u64)
}

/// The loaded instance and objective for one config, shared by all cells.
pub struct Experiment {
    pub cfg: ExperimentConfig,
    pub instance: Instance,
    pub ground: GroundSet,
    pub oracle: Oracle64,
}

impl Experiment {
    pub fn prepare(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let instance = Instance::load(&cfg.instance)?;
        let oracle = instance.objective(&cfg.objective)?;
        if let Some(&d) = cfg.d.iter().find(|&&d| d > instance.n) {
            return Err(HarnessError::Config(format!("d = {d} exceeds the {} elements", instance.n)));
        }
        Ok(Experiment {
            cfg: cfg.clone(),
            ground: instance.ground(),
            instance,
            oracle,
        })
    }

    pub fn run(&self) -> Result<ExperimentReport> {
        let mut rows = Vec::new();
        let mut aggregates = Vec::new();
        for &d in &self.cfg.d {
            let start = rows.len();
            for trial in 0..self.cfg.trials {
                let row = self.run_cell(d, trial, trial_seed(self.cfg.seed, trial))?;
                log::info!(
                    "{} d={d} trial={trial}: value {} summary {} calls {}",
                    row.algorithm,
                    row.value,
                    row.summary_size,
                    row.oracle_calls
                );
                rows.push(row);
            }
            aggregates.push(aggregate(d, &rows[start..]));
        }
        Ok(ExperimentReport {
            config: self.cfg.clone(),
            rows,
            aggregates,
        })
    }

    pub fn matroid(&self, trial_seed: u64) -> Result<Box<dyn Matroid>> {
        self.instance.matroid(&self.cfg.matroid, self.cfg.seed, trial_seed)
    }

    /// Arrival order for the streaming algorithms.
    pub fn stream_order(&self) -> Result<Vec<ElementId>> {
        let mut order = self.ground.all();
        match &self.cfg.stream {
            StreamSpec::File => {}
            StreamSpec::Random { seed } => RngHandle::new(*seed, streams::ORDER).shuffle(&mut order),
            StreamSpec::ValueDescending => {
                let f = self.oracle.fork();
                let mut scored = order
                    .into_iter()
                    .map(|e| f.singleton(e).map(|v| (e, v)))
                    .collect::<robust_submod::Result<Vec<_>>>()?;
                scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
                order = scored.into_iter().map(|(e, _)| e).collect();
            }
        }
        Ok(order)
    }

    /// Depends on the instance and the generator seed only; it is computed
    /// on its own oracle before any algorithm randomness is drawn.
    pub fn deletion_plan(&self, m: &dyn Matroid, d: usize) -> Result<DeletionPlan> {
        let f = self.oracle.fork();
        Ok(match &self.cfg.adversary {
            AdversarySpec::Greedy => greedy_adversary(&self.ground, &f, m, d)?,
            AdversarySpec::Random { seed } => random_adversary(&self.ground, d, *seed)?,
            AdversarySpec::TopValue => top_value_adversary(&self.ground, &f, d)?,
            AdversarySpec::None => DeletionPlan::none(),
        })
    }

    /// Runs one cell from its seed alone, so any row can be replayed.
    pub fn run_cell(&self, d: usize, trial: usize, seed: u64) -> Result<Row> {
        let m = self.matroid(seed)?;
        let m: &dyn Matroid = &*m;
        let plan = self.deletion_plan(m, d)?;
        let deleted = &plan.deleted;
        let order = match self.cfg.algorithm {
            Algorithm::Streaming | Algorithm::RobustSwappingCascade | Algorithm::OmniscientSwapping => {
                self.stream_order()?
            }
            _ => Vec::new(),
        };
        let params = RobustParams::new(d, self.cfg.eps)?;
        let inner = self.cfg.inner_solver();
        let f = self.oracle.fork();
        let mut rng = RngHandle::new(seed, streams::ALGORITHM);

        let t0 = Instant::now();
        let (solution, sizes, peak, phase1) = match self.cfg.algorithm {
            Algorithm::Centralized => {
                let s = phase1_centralized(&self.ground, &f, m, params, &mut rng)?;
                let p1 = t0.elapsed().as_secs_f64();
                let sol = phase2(&s, deleted, &f, m, inner)?;
                (sol, (s.solution.len(), s.backup.len()), self.instance.n, p1)
            }
            Algorithm::Streaming => {
                let s = run_stream(&f, m, params, rng, &order)?;
                let p1 = t0.elapsed().as_secs_f64();
                let sol = phase2(&s, deleted, &f, m, inner)?;
                (sol, (s.solution.len(), s.backup.len()), s.peak_memory, p1)
            }
            Algorithm::RobustSwappingCascade => {
                let s = robust_swapping_cascade(&order, d, &f, m)?;
                let p1 = t0.elapsed().as_secs_f64();
                let sol = cascade_phase2(&s, deleted, &f)?;
                (sol, (s.size(), 0), s.size(), p1)
            }
            Algorithm::OmniscientGreedy => {
                let sol = omniscient_greedy(&self.ground, deleted, &f, m, self.cfg.eps0)?;
                let held = self.instance.n - deleted.len();
                (sol, (0, 0), held, 0.0)
            }
            Algorithm::OmniscientSwapping => {
                let sol = omniscient_swapping(&order, deleted, &f, m)?;
                (sol, (0, 0), m.rank(), 0.0)
            }
        };
        let total = t0.elapsed().as_secs_f64();
        let (summary_size, solution_size, backup_size) = match self.cfg.algorithm {
            Algorithm::OmniscientGreedy | Algorithm::OmniscientSwapping => {
                (solution.members.len(), solution.members.len(), 0)
            }
            _ => (sizes.0 + sizes.1, sizes.0, sizes.1),
        };
        Ok(Row {
            algorithm: self.cfg.algorithm.id().to_string(),
            d,
            trial,
            value: solution.value,
            summary_size,
            solution_size,
            backup_size,
            peak_memory: peak,
            oracle_calls: f.calls(),
            phase1_seconds: phase1,
            phase2_seconds: total - phase1,
            seed,
            stream: streams::ALGORITHM,
            prng: PRNG_ALGORITHM.to_string(),
            theoretical_regime: params.theoretical_regime(),
            deletion: plan,
            solution: solution.members,
        })
    }

    /// Re-runs `row` from its recorded seed and fails unless value, summary
    /// size and oracle calls match exactly.
    pub fn replay(&self, row: &Row) -> Result<Row> {
        if row.prng != PRNG_ALGORITHM {
            return Err(HarnessError::Config(format!(
                "row was produced with {}, this build uses {PRNG_ALGORITHM}",
                row.prng
            )));
        }
        if row.algorithm != self.cfg.algorithm.id() {
            return Err(HarnessError::Config(format!(
                "row is from {}, config runs {}",
                row.algorithm,
                self.cfg.algorithm.id()
            )));
        }
        let again = self.run_cell(row.d, row.trial, row.seed)?;
        if again.replay_key() != row.replay_key() || again.deletion != row.deletion {
            return Err(HarnessError::CheckFailed(format!(
                "replay of d = {}, trial = {} gave value {} / size {} / calls {}, recorded {} / {} / {}",
                row.d, row.trial, again.value, again.summary_size, again.oracle_calls, row.value, row.summary_size,
                row.oracle_calls
            )));
        }
        Ok(again)
    }
}

fn aggregate(d: usize, rows: &[Row]) -> Aggregate {
    let col = |g: &dyn Fn(&Row) -> f64| Stat::of(&rows.iter().map(g).collect::<Vec<_>>());
    Aggregate {
        d,
        trials: rows.len(),
        value: col(&|r| r.value),
        summary_size: col(&|r| r.summary_size as f64),
        peak_memory: col(&|r| r.peak_memory as f64),
        oracle_calls: col(&|r| r.oracle_calls as f64),
    }
}

/// Whether the config's matroid draws part assignments per trial.
pub fn redraws_parts(cfg: &ExperimentConfig) -> bool {
    use crate::config::PartAssignment::Redraw;
    match &cfg.matroid {
        MatroidSpec::Uniform { .. } => false,
        MatroidSpec::Partition { assignment, .. }
        | MatroidSpec::Laminar { assignment, .. }
        | MatroidSpec::Truncated { assignment, .. } => *assignment == Redraw,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    Experiment::prepare(cfg)?.run()
}
