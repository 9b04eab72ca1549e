//! Verification suites run by `robust-submod verify`.
//!
//! * `axioms`: matroid axioms, submodularity and monotonicity of every
//!   objective, pruned against unpruned brute force.
//! * `lemmas`: structural invariants of both Phase I algorithms on small
//!   random runs (size bounds, trace replay, the infeasibility injection,
//!   the streaming weight inequalities, the sampling bound).
//! * `ratios`: approximation guarantees against exhaustive optima.
//!
//! Each check records its own wall-clock time.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use robust_submod::adversary::greedy_adversary;
use robust_submod::centralized::{phase1_centralized, RobustParams, ThresholdSet};
use robust_submod::objective::{kmedoid_objective, logdet_objective, movie_objective, Metric};
use robust_submod::oracle::{
    brute_force_opt, brute_force_opt_unpruned, check_centralized_trace, check_drained_dominance,
    check_infeasibility_injection, check_matroid_axioms, check_submodular_monotone, weight_totals,
    BRUTE_FORCE_LIMIT,
};
use robust_submod::solvers::{lazy_greedy, phase2, swapping, InnerSolver, DEFAULT_EPS0};
use robust_submod::streaming::run_stream;
use robust_submod::{
    CentralizedSummary64, ElementId, GroundSet, Matroid, Oracle64, Partition, RngHandle, StreamingSummary64,
};
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::testbed::{random_coverage, random_matroid, random_modular, random_small, SmallInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Axioms,
    Lemmas,
    Ratios,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Axioms, Suite::Lemmas, Suite::Ratios];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Lemmas => "lemmas",
            Suite::Ratios => "ratios",
        }
    }
}

impl FromStr for Suite {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown suite {s:?}")))
    }
}

/// Which Phase I implementation the suites exercise. The mutants exist to
/// show that the checks catch real defects; they need the `mutants` feature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    Faithful,
    InvertedSwapGuard,
    BucketThresholdMinusOne,
}

impl FromStr for Variant {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faithful" => Ok(Variant::Faithful),
            "inverted-swap-guard" => Ok(Variant::InvertedSwapGuard),
            "bucket-threshold-minus-one" => Ok(Variant::BucketThresholdMinusOne),
            _ => Err(HarnessError::Config(format!("unknown variant {s:?}"))),
        }
    }
}

impl Variant {
    #[cfg(feature = "mutants")]
    fn mutation(self) -> robust_submod::Mutation {
        use robust_submod::Mutation;
        match self {
            Variant::Faithful => Mutation::None,
            Variant::InvertedSwapGuard => Mutation::InvertedSwapGuard,
            Variant::BucketThresholdMinusOne => Mutation::BucketThresholdMinusOne,
        }
    }

    fn available(self) -> Result<()> {
        if self == Variant::Faithful || cfg!(feature = "mutants") {
            Ok(())
        } else {
            Err(HarnessError::Config(format!(
                "variant {self:?} needs a build with the `mutants` feature"
            )))
        }
    }

    pub fn centralized(
        self,
        ground: &GroundSet,
        f: &Oracle64,
        m: &dyn Matroid,
        params: RobustParams<f64>,
        rng: &mut RngHandle,
    ) -> Result<CentralizedSummary64> {
        self.available()?;
        #[cfg(feature = "mutants")]
        if self != Variant::Faithful {
            return Ok(robust_submod::centralized::phase1_centralized_mutated(
                ground,
                f,
                m,
                params,
                rng,
                self.mutation(),
            )?);
        }
        Ok(phase1_centralized(ground, f, m, params, rng)?)
    }

    pub fn streaming(
        self,
        f: &Oracle64,
        m: &dyn Matroid,
        params: RobustParams<f64>,
        rng: RngHandle,
        order: &[ElementId],
    ) -> Result<StreamingSummary64> {
        self.available()?;
        #[cfg(feature = "mutants")]
        if self != Variant::Faithful {
            return Ok(robust_submod::streaming::run_stream_mutated(
                f,
                m,
                params,
                rng,
                order,
                self.mutation(),
            )?);
        }
        Ok(run_stream(f, m, params, rng, order)?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}/{} ({:.3}s): {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.seconds,
                c.detail
            )?;
        }
        let failed = self.failed().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Random instances per check.
    pub runs: usize,
    pub seed: u64,
    pub variant: Variant,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            runs: 200,
            seed: 1,
            variant: Variant::Faithful,
        }
    }
}

/// Outcome of one check before timing: pass flag and a one-line detail.
pub type Outcome = (bool, String);

fn timed(suite: Suite, name: &'static str, body: impl FnOnce() -> Result<Outcome>) -> Result<Check> {
    let t = Instant::now();
    let (passed, detail) = body()?;
    Ok(Check {
        suite: suite.id(),
        name,
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    })
}

pub fn verify(suites: &[Suite], opts: VerifyOptions) -> Result<VerifyReport> {
    opts.variant.available()?;
    let mut report = VerifyReport::default();
    for &suite in suites {
        let o = opts;
        match suite {
            Suite::Axioms => {
                report.checks.push(timed(suite, "matroid-axioms", || matroid_axioms(o))?);
                report.checks.push(timed(suite, "submodular-monotone", || objective_axioms(o))?);
                report.checks.push(timed(suite, "brute-force-pruning", || pruning(o))?);
            }
            Suite::Lemmas => {
                let runs = small_runs(o)?;
                report.checks.push(timed(suite, "summary-size", || Ok(summary_sizes(&runs)))?);
                report.checks.push(timed(suite, "centralized-trace", || centralized_traces(&runs))?);
                report.checks.push(timed(suite, "infeasibility-injection", || injections(&runs))?);
                report.checks.push(timed(suite, "evicted-weight", || evicted_weights(&runs))?);
                report.checks.push(timed(suite, "union-weight", || union_weights(&runs))?);
                report.checks.push(timed(suite, "drained-dominance", || drained_dominance(&runs))?);
                report.checks.push(timed(suite, "sampling-bound", || sampling_bounds(o, 0.5, 100))?);
            }
            Suite::Ratios => {
                report.checks.push(timed(suite, "baseline-ratios", || baseline_ratios(o))?);
                report.checks.push(timed(suite, "robust-ratios", || robust_ratios(o, 0.3, 50))?);
            }
        }
    }
    Ok(report)
}

fn summarize(failures: &[String], total: usize, what: &str) -> Outcome {
    match failures.first() {
        None => (true, format!("{total} {what}")),
        Some(first) => (false, format!("{} of {total} {what} failed; first: {first}", failures.len())),
    }
}

fn matroid_axioms(o: VerifyOptions) -> Result<Outcome> {
    let mut rng = RngHandle::new(o.seed, 10);
    let mut failures = Vec::new();
    for _ in 0..o.runs {
        let n = 1 + rng.below(8);
        let (m, label) = random_matroid(&mut rng, n);
        if let Some(v) = check_matroid_axioms(&*m, n)? {
            failures.push(format!("{label}: {v:?}"));
        }
        let parts = (0..n).map(|_| rng.below(3)).collect();
        let k = rng.below(n + 1);
        let t = robust_submod::matroid::truncate(Partition::with_capacity(parts, 2), k);
        if let Some(v) = check_matroid_axioms(&t, n)? {
            failures.push(format!("truncated(k={k}): {v:?}"));
        }
    }
    Ok(summarize(&failures, 2 * o.runs, "matroids"))
}

fn random_points(rng: &mut RngHandle, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| vec![rng.unit(), rng.unit()]).collect()
}

fn objective_axioms(o: VerifyOptions) -> Result<Outcome> {
    let mut rng = RngHandle::new(o.seed, 11);
    let mut failures = Vec::new();
    let rounds = (o.runs / 5).max(1);
    for _ in 0..rounds {
        let n = 2 + rng.below(7);
        let pts = random_points(&mut rng, n);
        let features: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.unit(), rng.unit(), rng.unit()]).collect();
        let user = vec![rng.unit(), rng.unit(), rng.unit()];
        let objectives: Vec<Oracle64> = vec![
            random_coverage(&mut rng, n),
            random_modular(&mut rng, n),
            kmedoid_objective(pts.clone(), ElementId(0), Metric::Euclidean)?,
            logdet_objective(pts, 0.5, 10.0, Metric::Euclidean)?,
            movie_objective(user, features, 0.95)?,
        ];
        for f in &objectives {
            let v: Vec<ElementId> = (0..n).map(ElementId).collect();
            let r = check_submodular_monotone(f, &v, 500, rng.below(1 << 30) as u64)?;
            if !r.passed() {
                failures.push(format!(
                    "{} n={n}: monotone margin {}, submodular margin {}",
                    f.kind(),
                    r.monotone_margin,
                    r.submodular_margin
                ));
            }
        }
    }
    Ok(summarize(&failures, 5 * rounds, "objectives"))
}

fn pruning(o: VerifyOptions) -> Result<Outcome> {
    let mut rng = RngHandle::new(o.seed, 12);
    let mut failures = Vec::new();
    for _ in 0..o.runs {
        let n = 1 + rng.below(10);
        let inst = random_small(&mut rng, n);
        let v: Vec<ElementId> = (0..n).map(ElementId).collect();
        let a = brute_force_opt(&v, &inst.f, &*inst.m)?;
        let b = brute_force_opt_unpruned(&v, &inst.f, &*inst.m)?;
        if a.opt_value != b.opt_value {
            failures.push(format!("{}: {} vs {}", inst.label, a.opt_value, b.opt_value));
        }
    }
    Ok(summarize(&failures, o.runs, "instances"))
}

/// One small centralized and streaming run with a frozen greedy deletion.
pub struct SmallRun {
    pub inst: SmallInstance,
    pub d: usize,
    pub eps: f64,
    pub deleted: Vec<ElementId>,
    pub centralized: CentralizedSummary64,
    pub streaming: StreamingSummary64,
}

/// `d + k + |T|·⌈d/ε⌉`, the size guarantee for both algorithms;
/// `thresholds` is the realized `|T|` for centralized runs and the
/// worst-case live count for streaming runs.
pub fn size_guarantee(d: usize, k: usize, thresholds: usize, q: usize) -> usize {
    d + k + thresholds * q
}

pub fn centralized_size_ok(s: &CentralizedSummary64) -> bool {
    let p = &s.params;
    s.size() <= size_guarantee(p.d, p.k, p.thresholds.len(), p.bucket_threshold)
}

pub fn streaming_size_ok(s: &StreamingSummary64) -> bool {
    let p = &s.params;
    s.size() <= size_guarantee(p.d, p.k, ThresholdSet::<f64>::max_len(p.k, p.eps), p.bucket_threshold)
}

fn small_runs(o: VerifyOptions) -> Result<Vec<SmallRun>> {
    let mut rng = RngHandle::new(o.seed, 13);
    let mut out = Vec::with_capacity(o.runs);
    for r in 0..o.runs {
        let n = 4 + rng.below(9);
        let inst = random_small(&mut rng, n);
        let d = rng.below(4).min(n);
        let eps = [0.3, 0.5, 0.99][rng.below(3)];
        let ground = GroundSet::new(n);
        let deleted = greedy_adversary(&ground, &inst.f.fork(), &*inst.m, d)?.deleted;
        let params = RobustParams::new(d, eps)?;
        let mut alg = RngHandle::new(o.seed.wrapping_add(r as u64), 2);
        let centralized = o.variant.centralized(&ground, &inst.f, &*inst.m, params, &mut alg)?;
        let order: Vec<ElementId> = (0..n).map(ElementId).collect();
        let streaming = o.variant.streaming(&inst.f, &*inst.m, params, alg.split(3), &order)?;
        out.push(SmallRun {
            inst,
            d,
            eps,
            deleted,
            centralized,
            streaming,
        });
    }
    Ok(out)
}

fn summary_sizes(runs: &[SmallRun]) -> Outcome {
    let failures: Vec<String> = runs
        .iter()
        .filter_map(|r| {
            let c = centralized_size_ok(&r.centralized);
            let s = streaming_size_ok(&r.streaming);
            (!(c && s)).then(|| {
                format!(
                    "{} d={} eps={}: centralized {} streaming {}",
                    r.inst.label,
                    r.d,
                    r.eps,
                    r.centralized.size(),
                    r.streaming.size()
                )
            })
        })
        .collect();
    summarize(&failures, runs.len(), "run pairs")
}

fn centralized_traces(runs: &[SmallRun]) -> Result<Outcome> {
    let mut failures = Vec::new();
    for r in runs {
        let v = check_centralized_trace(&r.centralized, &r.inst.f.fork(), &*r.inst.m)?;
        if let Some(first) = v.first() {
            failures.push(format!("{}: {} {}", r.inst.label, first.check, first.detail));
        }
    }
    Ok(summarize(&failures, runs.len(), "traces"))
}

fn surviving(n: usize, deleted: &[ElementId]) -> Vec<ElementId> {
    (0..n).map(ElementId).filter(|e| !deleted.contains(e)).collect()
}

fn injections(runs: &[SmallRun]) -> Result<Outcome> {
    let mut failures = Vec::new();
    for r in runs {
        let f = r.inst.f.fork();
        let opt = brute_force_opt(&surviving(r.inst.n, &r.deleted), &f, &*r.inst.m)?;
        let check = check_infeasibility_injection(&r.centralized, &opt.opt_set, &f)?;
        if !check.passed() {
            failures.push(format!("{}: family {:?}", r.inst.label, check.family));
        }
    }
    Ok(summarize(&failures, runs.len(), "runs"))
}

fn evicted_weights(runs: &[SmallRun]) -> Result<Outcome> {
    let mut failures = Vec::new();
    for r in runs {
        let t = weight_totals(&r.streaming, &r.inst.f.fork())?;
        if !t.evicted_bound_exact() {
            failures.push(format!(
                "{}: w(K) = {}, w(A) = {}, f(A) = {}",
                r.inst.label, t.w_evicted, t.w_solution, t.f_solution
            ));
        }
    }
    Ok(summarize(&failures, runs.len(), "runs"))
}

/// `a ≤ b` up to a relative tolerance of `1e-9`.
pub fn le_rel(a: f64, b: f64) -> bool {
    a <= b + 1e-9 * b.abs().max(a.abs())
}

fn union_weights(runs: &[SmallRun]) -> Result<Outcome> {
    let mut failures = Vec::new();
    for r in runs {
        let t = weight_totals(&r.streaming, &r.inst.f.fork())?;
        if !le_rel(t.f_union, t.w_union) {
            failures.push(format!("{}: f(A∪K) = {} > w(A∪K) = {}", r.inst.label, t.f_union, t.w_union));
        }
    }
    Ok(summarize(&failures, runs.len(), "runs"))
}

fn drained_dominance(runs: &[SmallRun]) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in runs.iter().filter(|r| r.streaming.drained.len() <= BRUTE_FORCE_LIMIT) {
        checked += 1;
        let c = check_drained_dominance(&r.streaming, &*r.inst.m)?;
        if !c.passed() {
            failures.push(format!(
                "{}: w(X) = {} for X = {:?}, 2·w(A) = {}",
                r.inst.label,
                c.heaviest_weight,
                c.heaviest,
                2.0 * c.solution_weight
            ));
        }
    }
    Ok(summarize(&failures, checked, "runs"))
}

/// Mean and standard error of `xs`.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sampling bound for one instance and fixed `deleted`:
/// `mean f(A) ≤ ((1+ε)/(1−ε))·mean f(A∖D) + 3·SE`, tested on the per-seed
/// differences `f(A) − c·f(A∖D)`. Returns `(holds, mean difference, SE)`.
pub fn sampling_bound(pairs: &[(f64, f64)], eps: f64) -> (bool, f64, f64) {
    let c = (1.0 + eps) / (1.0 - eps);
    let diffs: Vec<f64> = pairs.iter().map(|(a, kept)| a - c * kept).collect();
    let (mean, se) = mean_se(&diffs);
    (mean <= 3.0 * se + 1e-9, mean, se)
}

/// `(f(A), f(A∖D))` per seed.
pub type ValuePairs = Vec<(f64, f64)>;

/// [`ValuePairs`] for centralized and streaming runs across `seeds`.
pub fn sampling_pairs(
    inst: &SmallInstance,
    d: usize,
    eps: f64,
    deleted: &[ElementId],
    seeds: std::ops::Range<u64>,
    variant: Variant,
) -> Result<(ValuePairs, ValuePairs)> {
    let ground = GroundSet::new(inst.n);
    let order: Vec<ElementId> = (0..inst.n).map(ElementId).collect();
    let params = RobustParams::new(d, eps)?;
    let f = inst.f.fork();
    let value_pair = |a: Vec<ElementId>| -> Result<(f64, f64)> {
        let kept: Vec<ElementId> = a.iter().copied().filter(|e| !deleted.contains(e)).collect();
        Ok((f.value(&a)?, f.value(&kept)?))
    };
    let (mut c, mut s) = (Vec::new(), Vec::new());
    for seed in seeds {
        let mut rng = RngHandle::new(seed, 2);
        let cs = variant.centralized(&ground, &f, &*inst.m, params, &mut rng)?;
        c.push(value_pair(cs.solution_ids())?);
        let ss = variant.streaming(&f, &*inst.m, params, RngHandle::new(seed, 2), &order)?;
        s.push(value_pair(ss.solution_ids())?);
    }
    Ok((c, s))
}

fn sampling_bounds(o: VerifyOptions, eps: f64, seeds: u64) -> Result<Outcome> {
    let mut rng = RngHandle::new(o.seed, 14);
    let mut failures = Vec::new();
    let instances = (o.runs / 20).max(1);
    for _ in 0..instances {
        let n = 6 + rng.below(7);
        let inst = random_small(&mut rng, n);
        let d = 1 + rng.below(3);
        let deleted = greedy_adversary(&GroundSet::new(n), &inst.f.fork(), &*inst.m, d)?.deleted;
        let base = rng.below(1 << 30) as u64;
        let (c, s) = sampling_pairs(&inst, d, eps, &deleted, base..base + seeds, o.variant)?;
        for (alg, pairs) in [("centralized", c), ("streaming", s)] {
            let (ok, mean, se) = sampling_bound(&pairs, eps);
            if !ok {
                failures.push(format!("{alg} on {} d={d}: mean excess {mean:.4} > 3·SE {:.4}", inst.label, 3.0 * se));
            }
        }
    }
    Ok(summarize(&failures, 2 * instances, "instance/algorithm pairs"))
}

fn baseline_ratios(o: VerifyOptions) -> Result<Outcome> {
    let mut rng = RngHandle::new(o.seed, 15);
    let mut failures = Vec::new();
    for _ in 0..o.runs {
        let n = 1 + rng.below(12);
        let inst = random_small(&mut rng, n);
        let v: Vec<ElementId> = (0..n).map(ElementId).collect();
        let opt = brute_force_opt(&v, &inst.f, &*inst.m)?.opt_value;
        let g = lazy_greedy(&v, &inst.f, &*inst.m, DEFAULT_EPS0)?.value;
        let s = swapping(&v, &inst.f, &*inst.m)?.value;
        if g * (2.0 + 3.0 * DEFAULT_EPS0) < opt {
            failures.push(format!("{}: lazy greedy {g} vs OPT {opt}", inst.label));
        }
        if s * 4.0 < opt {
            failures.push(format!("{}: swapping {s} vs OPT {opt}", inst.label));
        }
    }
    Ok(summarize(&failures, o.runs, "instances"))
}

/// `2 + β + (2β + 15)·ε` plus 2 more for streaming.
pub fn robust_bound(streaming: bool, beta: f64, eps: f64) -> f64 {
    let base = if streaming { 4.0 } else { 2.0 };
    base + beta + (2.0 * beta + 15.0) * eps
}

/// `OPT(V∖D) / mean f(S)` must stay below the bound plus three standard
/// errors of the ratio (delta method).
pub fn ratio_within(opt: f64, values: &[f64], bound: f64) -> (bool, f64) {
    let (mean, se) = mean_se(values);
    if opt == 0.0 {
        return (true, 1.0);
    }
    if mean == 0.0 {
        return (false, f64::INFINITY);
    }
    let ratio = opt / mean;
    let ratio_se = opt * se / (mean * mean);
    (ratio <= bound + 3.0 * ratio_se, ratio)
}

pub struct RobustRatio {
    pub centralized: (bool, f64),
    pub streaming: (bool, f64),
}

/// Phase I + II across `seeds` on one instance with a frozen greedy plan.
pub fn robust_ratio(
    inst: &SmallInstance,
    d: usize,
    eps: f64,
    seeds: std::ops::Range<u64>,
    variant: Variant,
) -> Result<RobustRatio> {
    let n = inst.n;
    let ground = GroundSet::new(n);
    let f = inst.f.fork();
    let m = &*inst.m;
    let deleted = greedy_adversary(&ground, &f, m, d)?.deleted;
    let opt = brute_force_opt(&surviving(n, &deleted), &f, m)?.opt_value;
    let inner = InnerSolver::LazyGreedy { eps0: DEFAULT_EPS0 };
    let params = RobustParams::new(d, eps)?;
    let order: Vec<ElementId> = (0..n).map(ElementId).collect();
    let (mut c, mut s) = (Vec::new(), Vec::new());
    for seed in seeds {
        let mut rng = RngHandle::new(seed, 2);
        let cs = variant.centralized(&ground, &f, m, params, &mut rng)?;
        c.push(phase2(&cs, &deleted, &f, m, inner)?.value);
        let ss = variant.streaming(&f, m, params, RngHandle::new(seed, 2), &order)?;
        s.push(phase2(&ss, &deleted, &f, m, inner)?.value);
    }
    let beta = inner.beta();
    Ok(RobustRatio {
        centralized: ratio_within(opt, &c, robust_bound(false, beta, eps)),
        streaming: ratio_within(opt, &s, robust_bound(true, beta, eps)),
    })
}

fn robust_ratios(o: VerifyOptions, eps: f64, seeds: u64) -> Result<Outcome> {
    let mut rng = RngHandle::new(o.seed, 16);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let instances = (o.runs / 10).max(1);
    for _ in 0..instances {
        let n = 2 + rng.below(11);
        let inst = random_small(&mut rng, n);
        let d = rng.below(3).min(n);
        let base = rng.below(1 << 30) as u64;
        let r = robust_ratio(&inst, d, eps, base..base + seeds, o.variant)?;
        for (alg, (ok, ratio)) in [("centralized", r.centralized), ("streaming", r.streaming)] {
            worst = worst.max(ratio);
            if !ok {
                failures.push(format!("{alg} on {} d={d}: ratio {ratio:.3}", inst.label));
            }
        }
    }
    let (ok, detail) = summarize(&failures, 2 * instances, "instance/algorithm pairs");
    Ok((ok, format!("{detail}; worst ratio {worst:.3}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistics() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(robust_bound(false, 2.0, 0.0), 4.0);
        assert_eq!(robust_bound(true, 2.0, 0.1), 6.0 + 1.9);
        assert!(ratio_within(0.0, &[0.0], 1.0).0);
        assert!(!ratio_within(1.0, &[0.0, 0.0], 100.0).0);
        assert!(sampling_bound(&[(3.0, 1.0), (3.0, 1.0)], 0.5).0);
        assert!(!sampling_bound(&[(3.1, 1.0), (3.1, 1.0)], 0.5).0);
    }

    #[test]
    fn parses_names() {
        assert_eq!("lemmas".parse::<Suite>().unwrap(), Suite::Lemmas);
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("inverted-swap-guard".parse::<Variant>().unwrap(), Variant::InvertedSwapGuard);
    }
}
