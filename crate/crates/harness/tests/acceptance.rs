//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use robust_submod::adversary::greedy_adversary;
use robust_submod::centralized::{phase1_centralized, RobustParams};
use robust_submod::objective::{dominating_objective, modular_objective, Coverage};
use robust_submod::oracle::{
    brute_force_opt, check_drained_dominance, check_infeasibility_injection, find_transversal,
    satisfies_marriage_condition, weight_totals, Transversal,
};
use robust_submod::solvers::{lazy_greedy, swapping, DEFAULT_EPS0};
use robust_submod::streaming::run_stream;
use robust_submod::{ElementId, GroundSet, Laminar, Matroid, ObjectiveOracle, Oracle64, Partition, RngHandle, Uniform};
use robust_submod_harness::config::{Algorithm, ExperimentConfig};
use robust_submod_harness::experiment::{Experiment, ExperimentReport};
use robust_submod_harness::testbed::{random_small, SmallInstance};
use robust_submod_harness::verify::{
    centralized_size_ok, le_rel, robust_ratio, sampling_bound, sampling_pairs, streaming_size_ok, Variant,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn all_ids(n: usize) -> Vec<ElementId> {
    (0..n).map(ElementId).collect()
}

/// Integer-valued instances with `n ≤ 200` and rank `≤ 10`.
fn sweep_instance(rng: &mut RngHandle) -> (Oracle64, Box<dyn Matroid>, usize, String) {
    let n = if rng.below(4) == 0 { 4 + rng.below(9) } else { 13 + rng.below(188) };
    let (f, fname) = match rng.below(3) {
        0 => {
            let p = 0.01 + 0.09 * rng.unit();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.unit() < p {
                        edges.push((i, j));
                    }
                }
            }
            (dominating_objective(n, &edges).unwrap(), "dominating")
        }
        1 => {
            let items = 3 * n;
            let weights = (0..items).map(|_| (1 + rng.below(9)) as f64).collect();
            let covers = (0..n).map(|_| (0..1 + rng.below(6)).map(|_| rng.below(items)).collect()).collect();
            (ObjectiveOracle::new(Coverage::new(covers, weights).unwrap()), "coverage")
        }
        _ => (modular_objective((0..n).map(|_| rng.below(21) as f64).collect()), "modular"),
    };
    let (m, mname): (Box<dyn Matroid>, String) = match rng.below(3) {
        0 => {
            let k = 1 + rng.below(10);
            (Box::new(Uniform::new(n, k)), format!("uniform(k={k})"))
        }
        1 => {
            let parts = 1 + rng.below(5);
            let cap = 1 + rng.below(2);
            let labels = (0..n).map(|_| rng.below(parts)).collect();
            (Box::new(Partition::with_capacity(labels, cap)), format!("partition({parts}x{cap})"))
        }
        _ => {
            let parts = 1 + rng.below(6);
            let cap = 1 + rng.below(3);
            let total = 1 + rng.below(10);
            let labels: Vec<usize> = (0..n).map(|_| rng.below(parts)).collect();
            let mut family: Vec<(Vec<ElementId>, usize)> = (0..parts)
                .map(|p| ((0..n).filter(|&i| labels[i] == p).map(ElementId).collect::<Vec<_>>(), cap))
                .filter(|(s, _)| !s.is_empty())
                .collect();
            family.push((all_ids(n), total));
            (Box::new(Laminar::new(n, family).unwrap()), format!("laminar({parts}x{cap}, total={total})"))
        }
    };
    let label = format!("{fname} n={n} {mname}");
    (f, m, n, label)
}

/// Criteria 1 and 4 share one sweep: 1000 randomized run pairs.
struct Sweep {
    size_failures: Vec<String>,
    weight_failures: Vec<String>,
    dominance_checked: usize,
    dominance_failures: Vec<String>,
    runs: usize,
}

fn sweep() -> Result<Sweep, String> {
    let mut out = Sweep {
        size_failures: Vec::new(),
        weight_failures: Vec::new(),
        dominance_checked: 0,
        dominance_failures: Vec::new(),
        runs: 1000,
    };
    for run in 0..out.runs as u64 {
        let mut rng = RngHandle::new(run, 100);
        let (f, m, n, label) = sweep_instance(&mut rng);
        let d = rng.below(21).min(n);
        let eps = [0.3, 0.5, 0.99][rng.below(3)];
        let params = RobustParams::new(d, eps).map_err(err)?;
        let ground = GroundSet::new(n);
        let mut order = all_ids(n);
        rng.shuffle(&mut order);

        let c = phase1_centralized(&ground, &f, &*m, params, &mut RngHandle::new(run, 2)).map_err(err)?;
        if !centralized_size_ok(&c) {
            out.size_failures.push(format!("run {run} centralized {label} d={d} eps={eps}: |A|+|B| = {}", c.size()));
        }
        let s = run_stream(&f, &*m, params, RngHandle::new(run, 2), &order).map_err(err)?;
        if !streaming_size_ok(&s) {
            out.size_failures.push(format!("run {run} streaming {label} d={d} eps={eps}: |A|+|B| = {}", s.size()));
        }
        let t = weight_totals(&s, &f).map_err(err)?;
        if !t.evicted_bound_exact() {
            out.weight_failures.push(format!(
                "run {run} {label}: w(K) = {}, w(A) = {}, f(A) = {}",
                t.w_evicted, t.w_solution, t.f_solution
            ));
        }
        if !le_rel(t.f_union, t.w_union) {
            out.weight_failures.push(format!("run {run} {label}: f(A∪K) = {} > w(A∪K) = {}", t.f_union, t.w_union));
        }
        if n <= 12 {
            out.dominance_checked += 1;
            let dom = check_drained_dominance(&s, &*m).map_err(err)?;
            if !dom.passed() {
                out.dominance_failures.push(format!(
                    "run {run} {label}: w(X) = {} > 2·w(A) = {}",
                    dom.heaviest_weight,
                    2.0 * dom.solution_weight
                ));
            }
        }
    }
    Ok(out)
}

fn first(failures: &[String]) -> String {
    format!("{} failures; first: {}", failures.len(), failures[0])
}

fn criterion_1(sweep: &Sweep) -> Outcome {
    ensure(sweep.size_failures.is_empty(), || first(&sweep.size_failures))?;
    Ok(format!("{} centralized and {} streaming runs within d + k + |T|·⌈d/ε⌉", sweep.runs, sweep.runs))
}

fn small_instances(count: usize, stream: u64) -> Vec<SmallInstance> {
    let mut rng = RngHandle::new(2024, stream);
    (0..count)
        .map(|_| {
            let n = 2 + rng.below(11);
            random_small(&mut rng, n)
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let eps = 0.3;
    let mut rng = RngHandle::new(7, 200);
    let mut worst = (0.0f64, 0.0f64);
    let instances = small_instances(500, 201);
    for (i, inst) in instances.iter().enumerate() {
        let d = rng.below(4).min(inst.n);
        let seeds = 1000 * i as u64..1000 * i as u64 + 200;
        let r = robust_ratio(inst, d, eps, seeds, Variant::Faithful).map_err(err)?;
        worst = (worst.0.max(r.centralized.1), worst.1.max(r.streaming.1));
        ensure(r.centralized.0, || format!("centralized on {} d={d}: ratio {}", inst.label, r.centralized.1))?;
        ensure(r.streaming.0, || format!("streaming on {} d={d}: ratio {}", inst.label, r.streaming.1))?;
    }
    Ok(format!(
        "500 instances x 200 seeds at eps = {eps}; worst ratio centralized {:.3}, streaming {:.3}",
        worst.0, worst.1
    ))
}

fn criterion_3() -> Outcome {
    let eps = 0.5;
    let mut rng = RngHandle::new(9, 300);
    let instances = small_instances(30, 301);
    let mut worst: f64 = f64::NEG_INFINITY;
    for (i, inst) in instances.iter().enumerate() {
        let d = 1 + rng.below(3.min(inst.n));
        let deleted = greedy_adversary(&GroundSet::new(inst.n), &inst.f.fork(), &*inst.m, d).map_err(err)?.deleted;
        let seeds = 10_000 * i as u64..10_000 * i as u64 + 500;
        let (c, s) = sampling_pairs(inst, d, eps, &deleted, seeds, Variant::Faithful).map_err(err)?;
        for (alg, pairs) in [("centralized", c), ("streaming", s)] {
            let (ok, mean, se) = sampling_bound(&pairs, eps);
            worst = worst.max(mean - 3.0 * se);
            ensure(ok, || format!("{alg} on {} d={d}: mean excess {mean} > 3·SE = {}", inst.label, 3.0 * se))?;
        }
    }
    Ok(format!(
        "30 instances x 500 seeds, both algorithms; max (excess − 3·SE) = {worst:.4} ≤ 0"
    ))
}

fn criterion_4(sweep: &Sweep) -> Outcome {
    ensure(sweep.weight_failures.is_empty(), || first(&sweep.weight_failures))?;
    ensure(sweep.dominance_failures.is_empty(), || first(&sweep.dominance_failures))?;
    // A dedicated n ≤ 12 sample so the exhaustive check sees many runs.
    let mut checked = sweep.dominance_checked;
    for (i, inst) in small_instances(500, 401).iter().enumerate() {
        let params = RobustParams::new(i % 4 % (inst.n + 1), [0.3, 0.5, 0.99][i % 3]).map_err(err)?;
        let s = run_stream(&inst.f, &*inst.m, params, RngHandle::new(i as u64, 2), &all_ids(inst.n)).map_err(err)?;
        let t = weight_totals(&s, &inst.f).map_err(err)?;
        ensure(t.evicted_bound_exact() && le_rel(t.f_union, t.w_union), || format!("{}: {t:?}", inst.label))?;
        let dom = check_drained_dominance(&s, &*inst.m).map_err(err)?;
        ensure(dom.passed(), || format!("{}: {dom:?}", inst.label))?;
        checked += 1;
    }
    Ok(format!(
        "w(K) ≤ w(A) ≤ f(A) and f(A∪K) ≤ w(A∪K) on {} streaming runs; exhaustive w(X) ≤ 2·w(A) on {checked} runs with n ≤ 12",
        sweep.runs + 500
    ))
}

fn criterion_5() -> Outcome {
    let beta = 2.0 + 3.0 * DEFAULT_EPS0;
    let mut rng = RngHandle::new(5, 500);
    for inst in small_instances(500, 501) {
        let mut v = all_ids(inst.n);
        let opt = brute_force_opt(&v, &inst.f, &*inst.m).map_err(err)?.opt_value;
        let g = lazy_greedy(&v, &inst.f, &*inst.m, DEFAULT_EPS0).map_err(err)?.value;
        ensure(g * beta >= opt, || format!("{}: lazy greedy {g}, OPT {opt}", inst.label))?;
        let s = swapping(&v, &inst.f, &*inst.m).map_err(err)?.value;
        ensure(s * 4.0 >= opt, || format!("{}: swapping {s} in id order, OPT {opt}", inst.label))?;
        rng.shuffle(&mut v);
        let s = swapping(&v, &inst.f, &*inst.m).map_err(err)?.value;
        ensure(s * 4.0 >= opt, || format!("{}: swapping {s} in random order, OPT {opt}", inst.label))?;
    }
    Ok("500 instances: lazy greedy ≥ OPT/(2+3ε₀), swapping ≥ OPT/4 in two orders".into())
}

/// Every multiset of `len` subsets of `{0..6}`, as bitmasks in
/// non-decreasing order.
fn families(len: usize, out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, min: u8) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    for mask in min..64 {
        current.push(mask);
        families(len, out, current, mask);
        current.pop();
    }
}

fn decode(mask: u8) -> Vec<ElementId> {
    (0..6).filter(|b| mask >> b & 1 == 1).map(ElementId).collect()
}

fn criterion_6() -> Outcome {
    let mut total = 0usize;
    let mut with_sdr = 0usize;
    for len in 1..=4 {
        let mut all = Vec::new();
        families(len, &mut all, &mut Vec::new(), 0);
        for masks in all {
            let family: Vec<Vec<ElementId>> = masks.iter().map(|&m| decode(m)).collect();
            let hall = satisfies_marriage_condition(&family).map_err(err)?;
            match find_transversal(&family) {
                Transversal::Mapping { representatives } => {
                    ensure(hall, || format!("{masks:?}: mapping found but Hall fails"))?;
                    let mut seen = 0u8;
                    for (set, r) in masks.iter().zip(&representatives) {
                        let bit = 1u8 << r.0;
                        ensure(set & bit != 0 && seen & bit == 0, || format!("{masks:?}: bad mapping {representatives:?}"))?;
                        seen |= bit;
                    }
                    with_sdr += 1;
                }
                Transversal::Violation { sets, union } => {
                    ensure(!hall, || format!("{masks:?}: Hall holds but no mapping found"))?;
                    let real: u8 = sets.iter().fold(0, |acc, &i| acc | masks[i]);
                    ensure(decode(real) == union && sets.len() > union.len(), || {
                        format!("{masks:?}: certificate {sets:?} / {union:?} is invalid")
                    })?;
                }
            }
            total += 1;
        }
    }
    let mut injections = 0;
    let mut rng = RngHandle::new(6, 600);
    for (i, inst) in small_instances(200, 601).iter().enumerate() {
        let d = rng.below(4).min(inst.n);
        let eps = [0.3, 0.5, 0.99][rng.below(3)];
        let ground = GroundSet::new(inst.n);
        let f = inst.f.fork();
        let deleted = greedy_adversary(&ground, &f, &*inst.m, d).map_err(err)?.deleted;
        let params = RobustParams::new(d, eps).map_err(err)?;
        let c = phase1_centralized(&ground, &f, &*inst.m, params, &mut RngHandle::new(i as u64, 2)).map_err(err)?;
        let pool: Vec<ElementId> = all_ids(inst.n).into_iter().filter(|e| !deleted.contains(e)).collect();
        let opt = brute_force_opt(&pool, &f, &*inst.m).map_err(err)?;
        let check = check_infeasibility_injection(&c, &opt.opt_set, &f).map_err(err)?;
        ensure(check.passed(), || format!("{}: no injection for {:?}", inst.label, check.family))?;
        injections += check.rejected.len();
    }
    Ok(format!(
        "{total} families ({with_sdr} with a transversal) agree with Hall; 200 centralized runs inject {injections} rejected OPT elements"
    ))
}

fn geometric_config(objective: &str, algorithm: Algorithm) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_toml(&format!(
        "algorithm = \"centralized\"\nd = [5, 10, 20]\neps = 0.99\ntrials = 3\nseed = 17\n\
         [instance]\nkind = \"geometric\"\nn = 200\ngrid = 5\nseed = 3\n\
         [objective]\nkind = \"{objective}\"\n[matroid]\nkind = \"laminar\"\ncap = 2\n"
    ))
    .unwrap();
    cfg.algorithm = algorithm;
    cfg
}

fn criterion_7() -> Outcome {
    let mut details = Vec::new();
    for objective in ["kmedoid", "logdet"] {
        let ours = Experiment::prepare(&geometric_config(objective, Algorithm::Centralized))
            .and_then(|e| e.run())
            .map_err(err)?;
        let omni = Experiment::prepare(&geometric_config(objective, Algorithm::OmniscientGreedy))
            .and_then(|e| e.run())
            .map_err(err)?;
        for (a, b) in ours.aggregates.iter().zip(&omni.aggregates) {
            let ratio = a.value.mean / b.value.mean;
            ensure(ratio >= 0.85, || format!("{objective} d={}: ratio {ratio:.4}", a.d))?;
            details.push(format!("{objective} d={} {ratio:.3}", a.d));
        }
    }
    Ok(format!("centralized / omniscient-greedy mean value: {}", details.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut configs = Vec::new();
    for alg in [
        Algorithm::Centralized,
        Algorithm::Streaming,
        Algorithm::RobustSwappingCascade,
        Algorithm::OmniscientGreedy,
        Algorithm::OmniscientSwapping,
    ] {
        let mut cfg = geometric_config("logdet", alg);
        cfg.d = vec![0, 5];
        cfg.trials = 2;
        configs.push(cfg);
        let mut cov = ExperimentConfig::from_toml(
            "algorithm = \"centralized\"\nd = [2, 6]\neps = 0.3\ntrials = 3\nseed = 99\n\
             [instance]\nkind = \"coverage\"\nn = 80\np = 0.05\nseed = 1\nparts = 4\n\
             [objective]\nkind = \"dominating\"\n[matroid]\nkind = \"truncated\"\ncap = 3\nk = 8\n\
             [stream]\norder = \"random\"\nseed = 2\n",
        )
        .unwrap();
        cov.algorithm = alg;
        configs.push(cov);
    }
    let mut rows = 0;
    for cfg in configs {
        let report = Experiment::prepare(&cfg).and_then(|e| e.run()).map_err(err)?;
        let parsed = ExperimentReport::from_json(&report.to_json()).map_err(err)?;
        let fresh = Experiment::prepare(&parsed.config).map_err(err)?;
        for row in parsed.rows.iter().rev() {
            let again = fresh.replay(row).map_err(err)?;
            ensure(again.replay_key() == row.replay_key(), || format!("{} d={} trial={}", row.algorithm, row.d, row.trial))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} rows from 10 configs replayed bit-exactly from their recorded seeds"))
}

fn run(name: &str, body: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let secs = t.elapsed().as_secs_f64();
    match &result {
        Ok(detail) => println!("criterion {name}: PASS ({secs:.1}s) {detail}"),
        Err(detail) => println!("criterion {name}: FAIL ({secs:.1}s) {detail}"),
    }
    result.is_ok()
}

fn main() -> ExitCode {
    // Ignore libtest-style arguments such as `--nocapture`.
    let t = Instant::now();
    let sweep = sweep();
    let sweep_secs = t.elapsed().as_secs_f64();
    let sweep = &sweep;
    let shared = |f: fn(&Sweep) -> Outcome| {
        move || -> Outcome {
            let s = sweep.as_ref().map_err(Clone::clone)?;
            f(s).map(|d| format!("{d} (sweep {sweep_secs:.1}s)"))
        }
    };
    let results = [
        run("1 summary-size bound", shared(criterion_1)),
        run("2 approximation ratio", criterion_2),
        run("3 sampling bound", criterion_3),
        run("4 streaming weight lemmas", shared(criterion_4)),
        run("5 baseline guarantees", criterion_5),
        run("6 transversal machinery", criterion_6),
        run("7 quality vs omniscient", criterion_7),
        run("8 replay determinism", criterion_8),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
