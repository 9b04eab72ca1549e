//! Matroid independence oracles.
//!
//! Every family used by the algorithms implements [`Matroid`]: uniform,
//! partition, laminar, and the truncation wrapper that caps any matroid at a
//! cardinality. Sets are passed as slices of distinct [`ElementId`]s.

use std::fmt;

use crate::element::check_members;
use crate::error::{Error, Result};
use crate::ElementId;

/// The unique minimal dependent subset of `A + e` for an independent `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub members: Vec<ElementId>,
}

pub trait Matroid: fmt::Debug + Send + Sync {
    fn ground_size(&self) -> usize;

    /// Independence test without range checks. Callers guarantee every
    /// member is below `ground_size()`.
    fn independent(&self, s: &[ElementId]) -> bool;

    /// Size of every basis.
    fn rank(&self) -> usize;

    fn kind(&self) -> &'static str;

    fn is_independent(&self, s: &[ElementId]) -> Result<bool> {
        check_members(s, self.ground_size())?;
        Ok(self.independent(s))
    }

    /// Whether `s + e` is independent, for `e` not in `s`.
    fn can_add(&self, s: &[ElementId], e: ElementId) -> bool {
        let mut with = Vec::with_capacity(s.len() + 1);
        with.extend_from_slice(s);
        with.push(e);
        self.independent(&with)
    }

    /// `C = {e} ∪ {x ∈ a : a + e − x independent}`; costs `|a| + 1` oracle
    /// calls and is exact whenever `a` is independent and `a + e` is not.
    fn fundamental_circuit(&self, a: &[ElementId], e: ElementId) -> Result<Circuit> {
        check_members(a, self.ground_size())?;
        check_members(&[e], self.ground_size())?;
        if a.contains(&e) {
            return Err(Error::Precondition(format!("{e} is already in the set")));
        }
        if !self.independent(a) {
            return Err(Error::Precondition("base set is dependent".into()));
        }
        if self.can_add(a, e) {
            return Err(Error::Precondition(format!(
                "adding {e} keeps the set independent; there is no circuit"
            )));
        }
        let mut members = vec![e];
        let mut probe: Vec<ElementId> = Vec::with_capacity(a.len());
        for (i, &x) in a.iter().enumerate() {
            probe.clear();
            probe.extend(a.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y));
            probe.push(e);
            if self.independent(&probe) {
                members.push(x);
            }
        }
        members.sort_unstable();
        Ok(Circuit { members })
    }
}

impl<M: Matroid + ?Sized> Matroid for Box<M> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn independent(&self, s: &[ElementId]) -> bool {
        (**self).independent(s)
    }
    fn rank(&self) -> usize {
        (**self).rank()
    }
    fn kind(&self) -> &'static str {
        (**self).kind()
    }
    fn can_add(&self, s: &[ElementId], e: ElementId) -> bool {
        (**self).can_add(s, e)
    }
}

impl<M: Matroid + ?Sized> Matroid for &M {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn independent(&self, s: &[ElementId]) -> bool {
        (**self).independent(s)
    }
    fn rank(&self) -> usize {
        (**self).rank()
    }
    fn kind(&self) -> &'static str {
        (**self).kind()
    }
    fn can_add(&self, s: &[ElementId], e: ElementId) -> bool {
        (**self).can_add(s, e)
    }
}

/// Basis size found by the matroid greedy over `0..n`.
fn greedy_rank<M: Matroid + ?Sized>(m: &M) -> usize {
    let mut basis = Vec::new();
    for i in 0..m.ground_size() {
        let e = ElementId(i);
        if m.can_add(&basis, e) {
            basis.push(e);
        }
    }
    basis.len()
}

/// All sets of size at most `k`.
#[derive(Clone, Debug)]
pub struct Uniform {
    n: usize,
    k: usize,
}

impl Uniform {
    pub fn new(n: usize, k: usize) -> Self {
        Uniform { n, k }
    }

    pub fn capacity(&self) -> usize {
        self.k
    }
}

impl Matroid for Uniform {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn independent(&self, s: &[ElementId]) -> bool {
        s.len() <= self.k
    }
    fn rank(&self) -> usize {
        self.k.min(self.n)
    }
    fn kind(&self) -> &'static str {
        "uniform"
    }
    fn can_add(&self, s: &[ElementId], _e: ElementId) -> bool {
        s.len() < self.k
    }
}

/// Element `i` belongs to part `parts[i]`; part `j` admits `caps[j]` members.
#[derive(Clone, Debug)]
pub struct Partition {
    parts: Vec<usize>,
    caps: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>, caps: Vec<usize>) -> Result<Self> {
        if let Some((i, &p)) = parts.iter().enumerate().find(|&(_, &p)| p >= caps.len()) {
            return Err(Error::Construction(format!(
                "element {i} is assigned to part {p} but only {} capacities were given",
                caps.len()
            )));
        }
        Ok(Partition { parts, caps })
    }

    /// One shared capacity for every part present in `parts`.
    pub fn with_capacity(parts: Vec<usize>, cap: usize) -> Self {
        let n_parts = parts.iter().max().map_or(0, |&p| p + 1);
        Partition {
            parts,
            caps: vec![cap; n_parts],
        }
    }

    pub fn part_of(&self, e: ElementId) -> usize {
        self.parts[e.0]
    }

    pub fn num_parts(&self) -> usize {
        self.caps.len()
    }
}

impl Matroid for Partition {
    fn ground_size(&self) -> usize {
        self.parts.len()
    }
    fn independent(&self, s: &[ElementId]) -> bool {
        let mut used = vec![0usize; self.caps.len()];
        s.iter().all(|e| {
            let p = self.parts[e.0];
            used[p] += 1;
            used[p] <= self.caps[p]
        })
    }
    fn rank(&self) -> usize {
        let mut sizes = vec![0usize; self.caps.len()];
        for &p in &self.parts {
            sizes[p] += 1;
        }
        sizes.iter().zip(&self.caps).map(|(&s, &c)| s.min(c)).sum()
    }
    fn kind(&self) -> &'static str {
        "partition"
    }
    fn can_add(&self, s: &[ElementId], e: ElementId) -> bool {
        let p = self.parts[e.0];
        s.iter().filter(|x| self.parts[x.0] == p).count() < self.caps[p]
    }
}

#[derive(Clone, Debug)]
struct LaminarNode {
    capacity: usize,
    parent: Option<usize>,
}

/// Capacities on a laminar family, stored as a forest. Each element points
/// at the smallest member set containing it; independence walks the chain
/// of ancestors.
#[derive(Clone, Debug)]
pub struct Laminar {
    n: usize,
    nodes: Vec<LaminarNode>,
    leaf: Vec<Option<usize>>,
    rank: usize,
}

impl Laminar {
    pub fn new(n: usize, family: Vec<(Vec<ElementId>, usize)>) -> Result<Self> {
        let mut sets: Vec<(Vec<bool>, usize, usize)> = Vec::with_capacity(family.len());
        for (members, cap) in family {
            check_members(&members, n).map_err(|e| Error::Construction(e.to_string()))?;
            let mut mask = vec![false; n];
            for e in &members {
                if std::mem::replace(&mut mask[e.0], true) {
                    return Err(Error::Construction(format!("element {e} listed twice in a set")));
                }
            }
            sets.push((mask, members.len(), cap));
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let (a, b) = (&sets[i].0, &sets[j].0);
                let both = a.iter().zip(b).any(|(&x, &y)| x && y);
                let a_in_b = a.iter().zip(b).all(|(&x, &y)| !x || y);
                let b_in_a = a.iter().zip(b).all(|(&x, &y)| !y || x);
                if both && !a_in_b && !b_in_a {
                    return Err(Error::Construction(format!(
                        "sets {i} and {j} overlap without nesting; the family is not laminar"
                    )));
                }
            }
        }
        // Ascending size: every set's parent comes later in this order.
        sets.sort_by_key(|s| s.1);
        let mut nodes = Vec::with_capacity(sets.len());
        for (i, (mask, size, cap)) in sets.iter().enumerate() {
            let parent = (i + 1..sets.len()).find(|&j| {
                sets[j].1 >= *size && mask.iter().zip(&sets[j].0).all(|(&x, &y)| !x || y)
            });
            nodes.push(LaminarNode {
                capacity: *cap,
                parent,
            });
        }
        let leaf = (0..n)
            .map(|e| sets.iter().position(|s| s.0[e]))
            .collect();
        let mut lam = Laminar {
            n,
            nodes,
            leaf,
            rank: 0,
        };
        lam.rank = greedy_rank(&lam);
        Ok(lam)
    }

    /// Each part of `parts` becomes one member set with capacity `cap`.
    pub fn from_parts(parts: &[usize], cap: usize) -> Self {
        let n_parts = parts.iter().max().map_or(0, |&p| p + 1);
        let mut family = vec![(Vec::new(), cap); n_parts];
        for (i, &p) in parts.iter().enumerate() {
            family[p].0.push(ElementId(i));
        }
        Laminar::new(parts.len(), family).expect("a partition is laminar")
    }

    pub fn num_sets(&self) -> usize {
        self.nodes.len()
    }
}

impl Matroid for Laminar {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn independent(&self, s: &[ElementId]) -> bool {
        let mut used = vec![0usize; self.nodes.len()];
        for e in s {
            let mut cur = self.leaf[e.0];
            while let Some(node) = cur {
                used[node] += 1;
                if used[node] > self.nodes[node].capacity {
                    return false;
                }
                cur = self.nodes[node].parent;
            }
        }
        true
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn kind(&self) -> &'static str {
        "laminar"
    }
}

/// `{S ∈ M : |S| ≤ k}` for any inner matroid `M`.
#[derive(Clone, Debug)]
pub struct Truncated<M> {
    inner: M,
    k: usize,
}

impl<M: Matroid> Truncated<M> {
    pub fn new(inner: M, k: usize) -> Self {
        Truncated { inner, k }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

pub fn truncate<M: Matroid>(m: M, k: usize) -> Truncated<M> {
    Truncated::new(m, k)
}

impl<M: Matroid> Matroid for Truncated<M> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn independent(&self, s: &[ElementId]) -> bool {
        s.len() <= self.k && self.inner.independent(s)
    }
    fn rank(&self) -> usize {
        self.k.min(self.inner.rank())
    }
    fn kind(&self) -> &'static str {
        "truncation"
    }
    fn can_add(&self, s: &[ElementId], e: ElementId) -> bool {
        s.len() < self.k && self.inner.can_add(s, e)
    }
}
