//! Finite topologies, the preorder/topology correspondence, and the two
//! filter constructions taken from an invariant topology.
//!
//! A topology on `{0..n-1}` (n ≤ 16) is stored as its full family of open
//! sets, each a `u32` bitmask. Going from a preorder to a topology takes the
//! up-sets `U_x = {y : x → y}` as a base; going back uses the specialization
//! preorder (`x → y` iff every open set containing `x` contains `y`).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::group::PermGroup;
use crate::preorder::Preorder;
use crate::sets::{FilterBase, OmegaSet, SetBody, Universe};

/// Largest universe for an explicit topology.
pub const MAX_POINTS: usize = 16;

/// Largest `n` for [`enumerate_preorders`].
pub const MAX_ENUMERATED_PREORDER_POINTS: usize = 5;

/// Largest `n` for [`enumerate_topologies`].
pub const MAX_ENUMERATED_TOPOLOGY_POINTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteTopology {
    n: usize,
    /// Sorted, distinct.
    opens: Vec<u32>,
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn mask_points(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_POINTS {
        return Err(Error::resource(format!("{n} points exceed the topology guard of {MAX_POINTS}")));
    }
    Ok(())
}

/// Closes a family under pairwise union and intersection.
fn lattice_closure(seed: impl IntoIterator<Item = u32>) -> BTreeSet<u32> {
    let mut family: BTreeSet<u32> = BTreeSet::new();
    let mut work: Vec<u32> = seed.into_iter().collect();
    while let Some(s) = work.pop() {
        if !family.insert(s) {
            continue;
        }
        let existing: Vec<u32> = family.iter().copied().collect();
        for t in existing {
            for u in [s | t, s & t] {
                if !family.contains(&u) {
                    work.push(u);
                }
            }
        }
    }
    family
}

impl FiniteTopology {
    /// Builds the topology generated by `opens` as a lattice: adds ∅ and
    /// the whole set and closes under union and intersection. The flag is
    /// true when closure changed the family.
    pub fn from_opens(n: usize, opens: impl IntoIterator<Item = u32>) -> Result<(Self, bool)> {
        check_size(n)?;
        let given: BTreeSet<u32> = opens.into_iter().collect();
        if let Some(bad) = given.iter().find(|&&m| m & !full_mask(n) != 0) {
            return Err(Error::usage(format!("open set {bad:#b} mentions points outside 0..{n}")));
        }
        let closed = lattice_closure(given.iter().copied().chain([0, full_mask(n)]));
        let changed = closed != given;
        Ok((
            FiniteTopology {
                n,
                opens: closed.into_iter().collect(),
            },
            changed,
        ))
    }

    /// Parses `"n; a,b; c"`: universe size first, then opens as
    /// comma-separated point lists separated by `;` or newlines. An empty
    /// entry is the empty set.
    pub fn parse(text: &str) -> Result<(Self, bool)> {
        let mut records = text.split([';', '\n']).map(str::trim);
        let n: usize = records
            .next()
            .filter(|r| !r.is_empty())
            .ok_or_else(|| Error::parse("missing universe size"))?
            .parse()
            .map_err(|_| Error::parse("universe size is not a number"))?;
        check_size(n)?;
        let mut opens = Vec::new();
        for rec in records {
            let mut mask = 0u32;
            for tok in rec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let p: usize = tok.parse().map_err(|_| Error::parse(format!("bad point {tok:?}")))?;
                if p >= n {
                    return Err(Error::usage(format!("point {p} outside 0..{n}")));
                }
                mask |= 1 << p;
            }
            opens.push(mask);
        }
        FiniteTopology::from_opens(n, opens)
    }

    pub fn discrete(n: usize) -> Result<Self> {
        preorder_to_topology(&Preorder::equality(n))
    }

    pub fn indiscrete(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(FiniteTopology {
            n,
            opens: if n == 0 { vec![0] } else { vec![0, full_mask(n)] },
        })
    }

    /// Opens are the unions of blocks.
    pub fn from_partition(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        preorder_to_topology(&Preorder::from_partition(n, blocks)?)
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &[u32] {
        &self.opens
    }

    pub fn full(&self) -> u32 {
        full_mask(self.n)
    }

    pub fn is_open(&self, mask: u32) -> bool {
        self.opens.binary_search(&mask).is_ok()
    }

    /// Smallest open set containing `x`.
    pub fn minimal_open(&self, x: usize) -> u32 {
        self.opens
            .iter()
            .filter(|&&u| u >> x & 1 == 1)
            .fold(self.full(), |acc, &u| acc & u)
    }

    /// Every open set of `self` is open in `other`.
    pub fn is_coarser_than(&self, other: &FiniteTopology) -> bool {
        self.n == other.n && self.opens.iter().all(|&u| other.is_open(u))
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1 << self.n
    }

    pub fn is_indiscrete(&self) -> bool {
        self.opens.iter().all(|&u| u == 0 || u == self.full())
    }

    /// Invariant under every permutation of the points.
    pub fn is_trivial(&self) -> bool {
        self.is_discrete() || self.is_indiscrete()
    }

    fn universe(&self) -> Universe {
        Universe::Finite(self.n as u64)
    }

    fn mask_to_set(&self, mask: u32) -> OmegaSet {
        OmegaSet::finite(self.universe(), mask_points(mask).map(|p| p as u64)).expect("mask within universe")
    }

    fn set_to_mask(&self, s: &OmegaSet) -> Result<u32> {
        if s.universe() != self.universe() {
            return Err(Error::usage("set is not over the topology's points"));
        }
        let elems = s.finite_elements().expect("finite universe sets are exact");
        Ok(elems.iter().fold(0, |m, &p| m | 1 << p))
    }

    /// Lists opens as sorted point lists.
    pub fn open_lists(&self) -> Vec<Vec<usize>> {
        self.opens.iter().map(|&u| mask_points(u).collect()).collect()
    }
}

/// Opens are the up-closed sets of `p`, i.e. unions of the base sets `U_x`.
pub fn preorder_to_topology(p: &Preorder) -> Result<FiniteTopology> {
    check_size(p.len())?;
    let mut opens: BTreeSet<u32> = BTreeSet::from([0]);
    for x in 0..p.len() {
        let ux = p.up_set(x);
        let extended: Vec<u32> = opens.iter().map(|&s| s | ux).collect();
        opens.extend(extended);
    }
    Ok(FiniteTopology {
        n: p.len(),
        opens: opens.into_iter().collect(),
    })
}

/// The specialization preorder.
pub fn topology_to_preorder(t: &FiniteTopology) -> Preorder {
    let n = t.n;
    let minimal: Vec<u32> = (0..n).map(|x| t.minimal_open(x)).collect();
    Preorder::from_matrix_unchecked(n, (0..n * n).map(|i| minimal[i / n] >> (i % n) & 1 == 1).collect())
}

/// Fixed by the round trip topology → preorder → topology.
pub fn is_relational(t: &FiniteTopology) -> bool {
    preorder_to_topology(&topology_to_preorder(t)).is_ok_and(|back| back == *t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationClass {
    pub t0: bool,
    pub t1: bool,
}

pub fn separation_class(t: &FiniteTopology) -> SeparationClass {
    let p = topology_to_preorder(t);
    SeparationClass {
        t0: p.is_antisymmetric(),
        t1: p.is_equality(),
    }
}

/// Every preorder on `n` points, by backtracking over the off-diagonal
/// entries with transitivity pruning. Output order is deterministic.
pub fn enumerate_preorders(n: usize) -> Result<Vec<Preorder>> {
    if n > MAX_ENUMERATED_PREORDER_POINTS {
        return Err(Error::resource(format!(
            "preorder enumeration is limited to {MAX_ENUMERATED_PREORDER_POINTS} points"
        )));
    }
    // cell state: None = undecided
    fn consistent(n: usize, cells: &[Option<bool>]) -> bool {
        let get = |a: usize, b: usize| cells[a * n + b];
        for a in 0..n {
            for b in 0..n {
                if get(a, b) != Some(true) {
                    continue;
                }
                for c in 0..n {
                    if get(b, c) == Some(true) && get(a, c) == Some(false) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn rec(n: usize, idx: usize, order: &[usize], cells: &mut Vec<Option<bool>>, out: &mut Vec<Preorder>) {
        if idx == order.len() {
            out.push(Preorder::from_matrix_unchecked(n, cells.iter().map(|c| c.unwrap_or(false)).collect()));
            return;
        }
        for value in [false, true] {
            cells[order[idx]] = Some(value);
            if consistent(n, cells) {
                rec(n, idx + 1, order, cells, out);
            }
        }
        cells[order[idx]] = None;
    }
    let mut cells: Vec<Option<bool>> = (0..n * n).map(|i| (i / n == i % n).then_some(true)).collect();
    let order: Vec<usize> = (0..n * n).filter(|i| i / n != i % n).collect();
    let mut out = Vec::new();
    rec(n, 0, &order, &mut cells, &mut out);
    Ok(out)
}

/// Every topology on `n` points, found directly as families of subsets
/// containing ∅ and the whole set and closed under union and intersection.
/// Independent of the preorder correspondence.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteTopology>> {
    if n > MAX_ENUMERATED_TOPOLOGY_POINTS {
        return Err(Error::resource(format!(
            "topology enumeration is limited to {MAX_ENUMERATED_TOPOLOGY_POINTS} points"
        )));
    }
    let full = full_mask(n);
    let middle: Vec<u32> = (1..full).collect();
    let mut out = Vec::new();
    for choice in 0u64..1 << middle.len() {
        let mut family = vec![0u32];
        family.extend(middle.iter().enumerate().filter(|(k, _)| choice >> k & 1 == 1).map(|(_, &m)| m));
        if full != 0 {
            family.push(full);
        }
        let closed = family
            .iter()
            .all(|&a| family.iter().all(|&b| family.contains(&(a | b)) && family.contains(&(a & b))));
        if closed {
            family.sort_unstable();
            out.push(FiniteTopology { n, opens: family });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTopology {
    pub topology: FiniteTopology,
    pub trivial: bool,
    pub separation: SeparationClass,
}

/// Invariant topologies of `g`: one per invariant preorder, since every
/// finite topology is relational.
pub fn invariant_topologies(g: &PermGroup) -> Result<Vec<InvariantTopology>> {
    g.invariant_preorders()?
        .into_iter()
        .map(|p| {
            let topology = preorder_to_topology(&p.preorder)?;
            Ok(InvariantTopology {
                trivial: topology.is_trivial(),
                separation: separation_class(&topology),
                topology,
            })
        })
        .collect()
}

/// Open sets meeting every nonempty open set.
pub fn dense_opens(t: &FiniteTopology) -> Vec<u32> {
    let nonempty: Vec<u32> = t.opens.iter().copied().filter(|&u| u != 0).collect();
    t.opens
        .iter()
        .copied()
        .filter(|&d| nonempty.iter().all(|&u| u & d != 0))
        .collect()
}

/// Filter base whose generators are the dense open sets.
pub fn dense_open_filter(t: &FiniteTopology) -> FilterBase {
    let gens = dense_opens(t).into_iter().map(|d| t.mask_to_set(d)).collect();
    FilterBase::new(t.universe(), gens).expect("generators share the universe")
}

fn is_discrete_mask(t: &FiniteTopology, s: u32) -> bool {
    mask_points(s).all(|x| t.minimal_open(x) & s == 1 << x)
}

/// Every point of `s` is isolated: some open set meets `s` in that point alone.
pub fn is_discrete_subset(t: &FiniteTopology, s: &OmegaSet) -> Result<bool> {
    Ok(is_discrete_mask(t, t.set_to_mask(s)?))
}

/// Maximal discrete subsets, as bitmasks in increasing order.
pub fn maximal_discrete_subsets(t: &FiniteTopology) -> Vec<u32> {
    let discrete: Vec<u32> = (0..=t.full()).filter(|&s| is_discrete_mask(t, s)).collect();
    discrete
        .iter()
        .copied()
        .filter(|&s| !discrete.iter().any(|&b| b != s && b & s == s))
        .collect()
}

/// Filter base whose generators are complements of the maximal discrete
/// subsets; finite unions come from intersections in the generated filter.
/// On a finite space every singleton is discrete, so this filter is always
/// trivial.
pub fn discrete_complement_filter(t: &FiniteTopology) -> FilterBase {
    let gens = maximal_discrete_subsets(t)
        .into_iter()
        .map(|s| t.mask_to_set(t.full() & !s))
        .collect();
    FilterBase::new(t.universe(), gens).expect("generators share the universe")
}

/// `x ~ y` when some disjoint open sets contain `x` and `y`; in a finite
/// space this means the minimal open neighbourhoods are disjoint.
pub fn separation_graph(t: &FiniteTopology) -> SimpleGraph {
    let minimal: Vec<u32> = (0..t.n).map(|x| t.minimal_open(x)).collect();
    SimpleGraph::from_fn(t.n, |x, y| minimal[x] & minimal[y] == 0)
}

/// Countable topologies on ℕ with closed-form dense and discrete structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowModel {
    /// Opens: ∅ and the cofinite sets.
    Cofinite,
    /// Opens: ∅ and the final segments `{k, k+1, ...}`.
    FinalSegments,
}

impl WindowModel {
    /// `Some(answer)` when openness is decidable from the representation.
    pub fn is_open(self, s: &OmegaSet) -> Option<bool> {
        match (self, s.body()) {
            (_, SetBody::Finite(v)) => Some(v.is_empty()),
            (WindowModel::Cofinite, SetBody::Cofinite(_)) => Some(true),
            (WindowModel::FinalSegments, SetBody::Cofinite(ex)) => {
                Some(ex.iter().enumerate().all(|(i, &x)| i as u64 == x))
            }
            (_, SetBody::Window(_)) => None,
        }
    }

    /// Both models have every nonempty open set dense.
    pub fn is_dense_open(self, s: &OmegaSet) -> Option<bool> {
        Some(self.is_open(s)? && s.is_empty() == Some(false))
    }

    /// Cofinite topology: discrete iff finite. Final segments: discrete iff
    /// at most one point.
    pub fn is_discrete_subset(self, s: &OmegaSet) -> Option<bool> {
        match (self, s.body()) {
            (WindowModel::Cofinite, SetBody::Finite(_)) => Some(true),
            (WindowModel::FinalSegments, SetBody::Finite(v)) => Some(v.len() <= 1),
            (_, SetBody::Cofinite(_)) => Some(false),
            (WindowModel::FinalSegments, SetBody::Window(b)) if b.count() > 1 => Some(false),
            (_, SetBody::Window(_)) => None,
        }
    }

    /// Dense open sets reaching below `window`. For the cofinite model the
    /// generators are `Ω∖{k}` for `k < window`. Final segments form a chain,
    /// so a cofinal sample (`k = 0`, powers of two, `window - 1`) generates
    /// the same filter as the whole chain below the window.
    pub fn dense_open_filter(self, window: u64) -> FilterBase {
        let u = Universe::Countable;
        let gens = match self {
            WindowModel::Cofinite => (0..window).map(|k| OmegaSet::cofinite(u, [k])).collect::<Result<Vec<_>>>(),
            WindowModel::FinalSegments => {
                let starts: BTreeSet<u64> = std::iter::once(0)
                    .chain((0..64).map(|j| 1u64 << j).take_while(|&k| k < window))
                    .chain(window.checked_sub(1))
                    .collect();
                starts.into_iter().map(|k| OmegaSet::cofinite(u, 0..k)).collect()
            }
        };
        FilterBase::new(u, gens.expect("countable universe admits every point")).expect("one universe")
    }

    /// Complements of discrete sets below `window`. In both models a finite
    /// union of discrete sets is an arbitrary finite set, generated by the
    /// singletons `{k}`, `k < window`.
    pub fn discrete_complement_filter(self, window: u64) -> FilterBase {
        let u = Universe::Countable;
        let gens = (0..window)
            .map(|k| OmegaSet::cofinite(u, [k]).expect("countable universe"))
            .collect();
        FilterBase::new(u, gens).expect("one universe")
    }
}
