//! Ground truth for tests: exhaustive optima, structural property checks,
//! a Hall-transversal finder, and replay checks over Phase I traces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::centralized::CentralizedSummary;
use crate::element::{check_members, Membership};
use crate::error::{Error, Result};
use crate::scalar::cmp_scalar;
use crate::streaming::{StreamingSummary, Weighted};
use crate::trace::TraceEvent;
use crate::{ElementId, Matroid, ObjectiveOracle, RngHandle, Scalar};

/// Largest input the exhaustive routines accept.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Largest ground set [`check_matroid_axioms`] accepts.
pub const AXIOM_LIMIT: usize = 10;

/// Largest set checked exhaustively by [`check_submodular_monotone`].
pub const EXHAUSTIVE_SUBMODULAR_LIMIT: usize = 8;

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::Guardrail { n, limit })
    } else {
        Ok(())
    }
}

fn subset(v: &[ElementId], mask: u64) -> Vec<ElementId> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceResult<T> {
    pub opt_set: Vec<ElementId>,
    pub opt_value: T,
    /// Independent sets evaluated.
    pub enumerated: u64,
}

/// `max f(R)` over independent `R ⊆ v`. Depth-first in lexicographic
/// include-first order; supersets of dependent sets are never visited.
/// Ties keep the first set found.
pub fn brute_force_opt<T: Scalar, M: Matroid + ?Sized>(
    v: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<BruteForceResult<T>> {
    guard(v.len(), BRUTE_FORCE_LIMIT)?;
    check_members(v, f.ground_size())?;
    check_members(v, m.ground_size())?;
    let mut best = BruteForceResult {
        opt_set: Vec::new(),
        opt_value: f.value(&[])?,
        enumerated: 1,
    };
    let mut current = Vec::with_capacity(m.rank());
    descend(v, 0, &mut current, f, m, &mut best)?;
    best.opt_set.sort_unstable();
    Ok(best)
}

fn descend<T: Scalar, M: Matroid + ?Sized>(
    v: &[ElementId],
    from: usize,
    current: &mut Vec<ElementId>,
    f: &ObjectiveOracle<T>,
    m: &M,
    best: &mut BruteForceResult<T>,
) -> Result<()> {
    for i in from..v.len() {
        current.push(v[i]);
        if m.independent(current) {
            let value = f.value(current)?;
            best.enumerated += 1;
            if value > best.opt_value {
                best.opt_value = value;
                best.opt_set = current.clone();
            }
            descend(v, i + 1, current, f, m, best)?;
        }
        current.pop();
    }
    Ok(())
}

/// Same optimum as [`brute_force_opt`] by testing every bitmask.
pub fn brute_force_opt_unpruned<T: Scalar, M: Matroid + ?Sized>(
    v: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<BruteForceResult<T>> {
    guard(v.len(), BRUTE_FORCE_LIMIT)?;
    check_members(v, f.ground_size())?;
    check_members(v, m.ground_size())?;
    let mut best: Option<BruteForceResult<T>> = None;
    let mut enumerated = 0;
    for mask in 0..1u64 << v.len() {
        let s = subset(v, mask);
        if !m.independent(&s) {
            continue;
        }
        enumerated += 1;
        let value = f.value(&s)?;
        if best.as_ref().is_none_or(|b| value > b.opt_value) {
            best = Some(BruteForceResult {
                opt_set: s,
                opt_value: value,
                enumerated: 0,
            });
        }
    }
    let mut best = best.expect("the empty set is always enumerated");
    best.enumerated = enumerated;
    Ok(best)
}

/// Greedy that rescans every candidate each step: largest marginal wins,
/// smaller id breaks ties. Reference for [`crate::solvers::lazy_greedy`].
pub fn plain_greedy<T: Scalar, M: Matroid + ?Sized>(
    candidates: &[ElementId],
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<Vec<ElementId>> {
    check_members(candidates, f.ground_size())?;
    let mut chosen: Vec<ElementId> = Vec::new();
    let mut left: Vec<ElementId> = candidates.to_vec();
    left.sort_unstable();
    loop {
        let mut pick: Option<(usize, T)> = None;
        for (i, &e) in left.iter().enumerate() {
            if !m.can_add(&chosen, e) {
                continue;
            }
            let gain = f.marginal(e, &chosen)?;
            if pick.is_none_or(|(_, g)| gain > g) {
                pick = Some((i, gain));
            }
        }
        match pick {
            Some((i, _)) => chosen.push(left.remove(i)),
            None => return Ok(chosen),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum AxiomViolation {
    EmptyDependent,
    /// `|small| < |large|`, both independent, and no `x ∈ large \ small`
    /// keeps `small + x` independent.
    Augmentation {
        small: Vec<ElementId>,
        large: Vec<ElementId>,
    },
    /// `set` is independent but `subset = set − x` is not.
    DownwardClosure {
        set: Vec<ElementId>,
        subset: Vec<ElementId>,
    },
    RankMismatch { claimed: usize, actual: usize },
}

/// Exhaustive check of the independence axioms on the first `n` elements.
/// `Ok(None)` means every axiom holds.
pub fn check_matroid_axioms<M: Matroid + ?Sized>(m: &M, n: usize) -> Result<Option<AxiomViolation>> {
    guard(n, AXIOM_LIMIT)?;
    if n > m.ground_size() {
        return Err(Error::Precondition(format!(
            "asked for {n} elements of a {}-element matroid",
            m.ground_size()
        )));
    }
    let v: Vec<ElementId> = crate::element::ids(0..n);
    let size = 1usize << n;
    let indep: Vec<bool> = (0..size).map(|mask| m.independent(&subset(&v, mask as u64))).collect();
    if !indep[0] {
        return Ok(Some(AxiomViolation::EmptyDependent));
    }
    for small in 0..size {
        if !indep[small] {
            continue;
        }
        for large in 0..size {
            if !indep[large] || large.count_ones() <= small.count_ones() {
                continue;
            }
            let extra = large & !small;
            let augmentable = (0..n).any(|x| extra >> x & 1 == 1 && indep[small | 1 << x]);
            if !augmentable {
                return Ok(Some(AxiomViolation::Augmentation {
                    small: subset(&v, small as u64),
                    large: subset(&v, large as u64),
                }));
            }
        }
    }
    for set in 0..size {
        if !indep[set] {
            continue;
        }
        for x in 0..n {
            let sub = set & !(1 << x);
            if set >> x & 1 == 1 && !indep[sub] {
                return Ok(Some(AxiomViolation::DownwardClosure {
                    set: subset(&v, set as u64),
                    subset: subset(&v, sub as u64),
                }));
            }
        }
    }
    if n == m.ground_size() {
        let actual = (0..size)
            .filter(|&s| indep[s])
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0);
        if actual != m.rank() {
            return Ok(Some(AxiomViolation::RankMismatch {
                claimed: m.rank(),
                actual,
            }));
        }
    }
    Ok(None)
}

/// Worst margins seen by [`check_submodular_monotone`]; negative beyond
/// tolerance means a violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubmodularReport<T> {
    pub exhaustive: bool,
    pub checks: u64,
    /// `min f(e | S)`.
    pub monotone_margin: T,
    pub monotone_witness: Option<(Vec<ElementId>, ElementId)>,
    /// `min f(e | S) − f(e | S + y)`.
    pub submodular_margin: T,
    pub submodular_witness: Option<(Vec<ElementId>, ElementId, ElementId)>,
    pub tolerance: T,
}

impl<T: Scalar> SubmodularReport<T> {
    pub fn passed(&self) -> bool {
        self.monotone_margin >= -self.tolerance && self.submodular_margin >= -self.tolerance
    }
}

/// Checks `f(e|S) ≥ 0` and `f(e|S) ≥ f(e|S+y)`: over every `S ⊆ v` and
/// `e, y ∉ S` when `|v| ≤ 8`, otherwise over `samples` random triples.
pub fn check_submodular_monotone<T: Scalar>(
    f: &ObjectiveOracle<T>,
    v: &[ElementId],
    samples: usize,
    seed: u64,
) -> Result<SubmodularReport<T>> {
    check_members(v, f.ground_size())?;
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    let mut report = SubmodularReport {
        exhaustive: v.len() <= EXHAUSTIVE_SUBMODULAR_LIMIT,
        checks: 0,
        monotone_margin: T::infinity(),
        monotone_witness: None,
        submodular_margin: T::infinity(),
        submodular_witness: None,
        tolerance: T::zero(),
    };
    let mut scale = T::zero();
    let mut record = |report: &mut SubmodularReport<T>, s: &[ElementId], e, y: Option<ElementId>, vals: [T; 4]| {
        let [fs, fe, fy, fey] = vals;
        for x in vals {
            scale = scale.max(x.abs());
        }
        report.checks += 1;
        if fe - fs < report.monotone_margin {
            report.monotone_margin = fe - fs;
            report.monotone_witness = Some((s.to_vec(), e));
        }
        if let Some(y) = y {
            let margin = (fe - fs) - (fey - fy);
            if margin < report.submodular_margin {
                report.submodular_margin = margin;
                report.submodular_witness = Some((s.to_vec(), e, y));
            }
        }
    };

    if report.exhaustive {
        let n = v.len();
        let values = (0..1u64 << n)
            .map(|mask| f.value(&subset(&v, mask)))
            .collect::<Result<Vec<T>>>()?;
        for s in 0..1usize << n {
            for e in (0..n).filter(|e| s >> e & 1 == 0) {
                let se = s | 1 << e;
                let mut any = false;
                for y in (0..n).filter(|&y| y != e && s >> y & 1 == 0) {
                    any = true;
                    let vals = [values[s], values[se], values[s | 1 << y], values[se | 1 << y]];
                    record(&mut report, &subset(&v, s as u64), v[e], Some(v[y]), vals);
                }
                if !any {
                    let vals = [values[s], values[se], T::zero(), T::zero()];
                    record(&mut report, &subset(&v, s as u64), v[e], None, vals);
                }
            }
        }
    } else {
        let mut rng = RngHandle::new(seed, 0);
        for _ in 0..samples {
            let mut order = v.clone();
            rng.shuffle(&mut order);
            let e = order[0];
            let y = order.get(1).copied();
            let s: Vec<ElementId> = order[2.min(order.len())..]
                .iter()
                .copied()
                .filter(|_| rng.below(2) == 1)
                .collect();
            let fs = f.value(&s)?;
            let mut with = s.clone();
            with.push(e);
            let fe = f.value(&with)?;
            let (fy, fey) = match y {
                Some(y) => {
                    let mut sy = s.clone();
                    sy.push(y);
                    with.push(y);
                    (f.value(&sy)?, f.value(&with)?)
                }
                None => (T::zero(), T::zero()),
            };
            record(&mut report, &s, e, y, [fs, fe, fy, fey]);
        }
    }
    report.tolerance = T::rel_tol() * scale + T::abs_tol();
    Ok(report)
}

/// Outcome of [`find_transversal`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Transversal {
    /// `representatives[i] ∈ family[i]`, all distinct.
    Mapping { representatives: Vec<ElementId> },
    /// A subfamily (by index) whose union is smaller than itself.
    Violation { sets: Vec<usize>, union: Vec<ElementId> },
}

impl Transversal {
    pub fn is_mapping(&self) -> bool {
        matches!(self, Transversal::Mapping { .. })
    }
}

/// System of distinct representatives by augmenting paths, or a
/// marriage-condition certificate when none exists.
pub fn find_transversal(family: &[Vec<ElementId>]) -> Transversal {
    let mut index: BTreeMap<ElementId, usize> = BTreeMap::new();
    let adj: Vec<Vec<usize>> = family
        .iter()
        .map(|set| {
            let mut row: Vec<usize> = set
                .iter()
                .map(|&e| {
                    let next = index.len();
                    *index.entry(e).or_insert(next)
                })
                .collect();
            row.dedup();
            row
        })
        .collect();
    let elems: Vec<ElementId> = {
        let mut by_slot = vec![ElementId(0); index.len()];
        for (&e, &slot) in &index {
            by_slot[slot] = e;
        }
        by_slot
    };

    let mut owner: Vec<Option<usize>> = vec![None; elems.len()];
    for start in 0..adj.len() {
        let mut seen_right = vec![false; elems.len()];
        let mut seen_left = vec![false; adj.len()];
        if !augment(start, &adj, &mut owner, &mut seen_right, &mut seen_left) {
            let sets: Vec<usize> = (0..adj.len()).filter(|&i| seen_left[i]).collect();
            let mut union: Vec<ElementId> = (0..elems.len())
                .filter(|&r| seen_right[r])
                .map(|r| elems[r])
                .collect();
            union.sort_unstable();
            return Transversal::Violation { sets, union };
        }
    }
    let mut representatives = vec![ElementId(0); adj.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            representatives[*i] = elems[r];
        }
    }
    Transversal::Mapping { representatives }
}

fn augment(
    left: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    seen_right: &mut [bool],
    seen_left: &mut [bool],
) -> bool {
    seen_left[left] = true;
    for &r in &adj[left] {
        if seen_right[r] {
            continue;
        }
        seen_right[r] = true;
        let free = match owner[r] {
            None => true,
            Some(other) => augment(other, adj, owner, seen_right, seen_left),
        };
        if free {
            owner[r] = Some(left);
            return true;
        }
    }
    false
}

/// `|W| ≤ |∪W|` for every subfamily, by enumeration. Guarded at 20 sets.
pub fn satisfies_marriage_condition(family: &[Vec<ElementId>]) -> Result<bool> {
    guard(family.len(), BRUTE_FORCE_LIMIT)?;
    for mask in 1u64..1 << family.len() {
        let mut union: Vec<ElementId> = family
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, s)| s.iter().copied())
            .collect();
        union.sort_unstable();
        union.dedup();
        if (mask.count_ones() as usize) > union.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One failed structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
}

fn violation(check: &'static str, detail: String) -> Violation {
    Violation { check, detail }
}

/// Replays a centralized run: independence after every insertion,
/// non-increasing thresholds, recorded marginals against recomputed ones,
/// `τ ≤ μ ≤ (1+ε)τ`, and the hard size bounds.
pub fn check_centralized_trace<T: Scalar, M: Matroid + ?Sized>(
    summary: &CentralizedSummary<T>,
    f: &ObjectiveOracle<T>,
    m: &M,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let eps = summary.params.eps;
    let mut prefix: Vec<ElementId> = Vec::new();
    let mut last_tau = T::infinity();
    for ins in &summary.solution {
        let mu = f.marginal(ins.id, &prefix)?;
        prefix.push(ins.id);
        if !m.independent(&prefix) {
            out.push(violation("independence", format!("dependent after inserting {}", ins.id)));
        }
        if ins.tau > last_tau {
            out.push(violation(
                "threshold-order",
                format!("{} inserted at {} after {}", ins.id, ins.tau, last_tau),
            ));
        }
        last_tau = ins.tau;
        if !T::approx_eq(mu, ins.marginal) {
            out.push(violation(
                "marginal-record",
                format!("{}: recorded {} but recomputed {}", ins.id, ins.marginal, mu),
            ));
        }
        if !T::approx_le(ins.tau, mu) || !T::approx_le(mu, (T::one() + eps) * ins.tau) {
            out.push(violation(
                "sandwich",
                format!("{}: marginal {} outside [{}, (1+ε)·{}]", ins.id, mu, ins.tau, ins.tau),
            ));
        }
    }
    if summary.solution.len() > m.rank() {
        out.push(violation(
            "rank",
            format!("{} insertions exceed rank {}", summary.solution.len(), m.rank()),
        ));
    }
    if summary.size() > summary.size_bound() {
        out.push(violation(
            "size-bound",
            format!("|A|+|B| = {} > {}", summary.size(), summary.size_bound()),
        ));
    }
    let backup = Membership::from_slice(f.ground_size(), &summary.backup);
    for ev in summary.trace.events() {
        if let TraceEvent::Leftover { element, .. } = ev {
            if !backup.contains(*element) {
                out.push(violation("leftover", format!("{element} left over but not in B")));
            }
        }
    }
    Ok(out)
}

/// The injection behind the infeasibility step: every element of `opt`
/// that failed the feasibility test maps to a distinct solution member
/// that was present at that moment and whose insertion marginal is at least
/// `f(x | A) / (1+ε)`.
#[derive(Clone, Debug, Serialize)]
pub struct InjectionCheck {
    pub rejected: Vec<ElementId>,
    pub family: Vec<Vec<ElementId>>,
    pub outcome: Transversal,
}

impl InjectionCheck {
    pub fn passed(&self) -> bool {
        self.outcome.is_mapping()
    }
}

pub fn check_infeasibility_injection<T: Scalar>(
    summary: &CentralizedSummary<T>,
    opt: &[ElementId],
    f: &ObjectiveOracle<T>,
) -> Result<InjectionCheck> {
    check_members(opt, f.ground_size())?;
    let in_opt = Membership::from_slice(f.ground_size(), opt);
    let a = summary.solution_ids();
    let slack = T::one() + summary.params.eps;
    let mut rejected = Vec::new();
    let mut family = Vec::new();
    for ev in summary.trace.events() {
        let TraceEvent::Infeasible { element, solution_len } = *ev else {
            continue;
        };
        if !in_opt.contains(element) {
            continue;
        }
        let gain = f.marginal(element, &a)?;
        let candidates: Vec<ElementId> = summary.solution[..solution_len]
            .iter()
            .filter(|y| T::approx_le(gain, slack * y.marginal))
            .map(|y| y.id)
            .collect();
        rejected.push(element);
        family.push(candidates);
    }
    let outcome = find_transversal(&family);
    Ok(InjectionCheck {
        rejected,
        family,
        outcome,
    })
}

/// Weight and value totals of a streaming run's final state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightTotals<T> {
    pub w_evicted: T,
    pub w_solution: T,
    pub f_solution: T,
    pub w_union: T,
    pub f_union: T,
}

impl<T: Scalar> WeightTotals<T> {
    /// `w(K) ≤ w(A) ≤ f(A)` without tolerance.
    pub fn evicted_bound_exact(&self) -> bool {
        self.w_evicted <= self.w_solution && self.w_solution <= self.f_solution
    }

    /// `w(K) ≤ w(A) ≤ f(A)` up to floating tolerance.
    pub fn evicted_bound(&self) -> bool {
        T::approx_le(self.w_evicted, self.w_solution) && T::approx_le(self.w_solution, self.f_solution)
    }

    /// `f(A ∪ K) ≤ w(A ∪ K)` up to floating tolerance.
    pub fn union_bound(&self) -> bool {
        T::approx_le(self.f_union, self.w_union)
    }
}

pub fn weight_totals<T: Scalar>(summary: &StreamingSummary<T>, f: &ObjectiveOracle<T>) -> Result<WeightTotals<T>> {
    let a = summary.solution_ids();
    let mut union = a.clone();
    union.extend(summary.evicted.iter().map(|x| x.id));
    let w_solution = summary.solution_weight();
    let w_evicted = summary.evicted_weight();
    Ok(WeightTotals {
        w_evicted,
        w_solution,
        f_solution: f.value(&a)?,
        w_union: w_solution + w_evicted,
        f_union: f.value(&union)?,
    })
}

/// `w(A \ D) ≤ f(A \ D)`; returns both sides.
pub fn surviving_weight<T: Scalar>(
    summary: &StreamingSummary<T>,
    deleted: &[ElementId],
    f: &ObjectiveOracle<T>,
) -> Result<(T, T)> {
    check_members(deleted, f.ground_size())?;
    let gone = Membership::from_slice(f.ground_size(), deleted);
    let kept: Vec<&Weighted<T>> = summary.solution.iter().filter(|x| !gone.contains(x.id)).collect();
    let w: T = kept.iter().map(|x| x.weight).sum();
    let ids: Vec<ElementId> = kept.iter().map(|x| x.id).collect();
    Ok((w, f.value(&ids)?))
}

/// Heaviest independent subset of `items` by enumeration.
pub fn max_weight_independent<T: Scalar, M: Matroid + ?Sized>(
    items: &[Weighted<T>],
    m: &M,
) -> Result<(Vec<ElementId>, T)> {
    guard(items.len(), BRUTE_FORCE_LIMIT)?;
    let ids: Vec<ElementId> = items.iter().map(|x| x.id).collect();
    check_members(&ids, m.ground_size())?;
    let mut best = (Vec::new(), T::zero());
    for mask in 1..1u64 << items.len() {
        let s = subset(&ids, mask);
        if !m.independent(&s) {
            continue;
        }
        let w: T = items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| x.weight)
            .sum();
        if cmp_scalar(w, best.1).is_gt() {
            best = (s, w);
        }
    }
    Ok(best)
}

/// Dominance of the final solution over processed elements:
/// `w(X) ≤ 2·w(A)` for every independent `X ⊆ processed`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceCheck<T> {
    pub heaviest: Vec<ElementId>,
    pub heaviest_weight: T,
    pub solution_weight: T,
}

impl<T: Scalar> DominanceCheck<T> {
    pub fn passed(&self) -> bool {
        T::approx_le(self.heaviest_weight, T::lit(2.0) * self.solution_weight)
    }
}

pub fn check_weight_dominance<T: Scalar, M: Matroid + ?Sized>(
    processed: &[Weighted<T>],
    solution: &[Weighted<T>],
    m: &M,
) -> Result<DominanceCheck<T>> {
    let (heaviest, heaviest_weight) = max_weight_independent(processed, m)?;
    Ok(DominanceCheck {
        heaviest,
        heaviest_weight,
        solution_weight: solution.iter().map(|x| x.weight).sum(),
    })
}

/// [`check_weight_dominance`] over a streaming run's drained elements.
pub fn check_drained_dominance<T: Scalar, M: Matroid + ?Sized>(
    summary: &StreamingSummary<T>,
    m: &M,
) -> Result<DominanceCheck<T>> {
    check_weight_dominance(&summary.drained, &summary.solution, m)
}
