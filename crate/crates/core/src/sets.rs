//! Subsets of a countable ground set and filters presented by generators.
//!
//! The ground set is ℕ, or `{0..n-1}` for a finite universe. A set is held
//! exactly (finite or cofinite list) or approximately as a bit window over
//! `[0, W)`. A window makes no claim about points `>= W`; any question whose
//! answer depends on such points comes back as
//! [`TriState::UnknownWithinWindow`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground set a subset lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Universe {
    /// `{0, .., n-1}`.
    Finite(u64),
    /// ℕ.
    Countable,
}

impl Universe {
    pub fn size(self) -> Option<u64> {
        match self {
            Universe::Finite(n) => Some(n),
            Universe::Countable => None,
        }
    }

    fn admits(self, x: u64) -> bool {
        match self {
            Universe::Finite(n) => x < n,
            Universe::Countable => true,
        }
    }
}

/// Fixed-length bitset used for window bodies.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "BitsRepr", from = "BitsRepr")]
pub struct Bits {
    len: u64,
    words: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BitsRepr {
    len: u64,
    members: Vec<u64>,
}

impl From<Bits> for BitsRepr {
    fn from(b: Bits) -> Self {
        BitsRepr {
            len: b.len,
            members: b.ones().collect(),
        }
    }
}

impl From<BitsRepr> for Bits {
    fn from(r: BitsRepr) -> Self {
        let mut b = Bits::new(r.len);
        for x in r.members.into_iter().filter(|&x| x < r.len) {
            b.insert(x);
        }
        b
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits[{}]", self.len)?;
        f.debug_set().entries(self.ones()).finish()
    }
}

impl Bits {
    pub fn new(len: u64) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64) as usize],
        }
    }

    pub fn from_fn(len: u64, mut pred: impl FnMut(u64) -> bool) -> Self {
        let mut b = Bits::new(len);
        for x in 0..len {
            if pred(x) {
                b.insert(x);
            }
        }
        b
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.len && self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: u64) {
        assert!(x < self.len, "bit {x} outside window {}", self.len);
        self.words[(x / 64) as usize] |= 1 << (x % 64);
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn first(&self) -> Option<u64> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i as u64 * 64 + w.trailing_zeros() as u64)
    }

    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let t = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(i as u64 * 64 + t)
            })
        })
    }

    /// Shortens the window to `len` bits (no-op when already shorter).
    pub fn truncate(&mut self, len: u64) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.words.truncate(len.div_ceil(64) as usize);
        if !len.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
    }

    /// In-place intersection; the result has the shorter of the two lengths.
    pub fn intersect_with(&mut self, other: &Bits) {
        self.truncate(other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.ones().all(|x| other.contains(x))
    }
}

/// Representation of a subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetBody {
    /// Exactly these (strictly increasing) elements.
    Finite(Vec<u64>),
    /// Everything except these (strictly increasing) elements.
    Cofinite(Vec<u64>),
    /// Membership known only below the window length.
    Window(Bits),
}

/// A subset of the ground set. Values are normalized on construction so
/// that structural equality is set equality for exact representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaSet {
    universe: Universe,
    body: SetBody,
}

fn sorted_distinct(items: impl IntoIterator<Item = u64>) -> Vec<u64> {
    items.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

impl OmegaSet {
    pub fn finite(universe: Universe, items: impl IntoIterator<Item = u64>) -> Result<Self> {
        let items = sorted_distinct(items);
        if let Some(&bad) = items.iter().find(|&&x| !universe.admits(x)) {
            return Err(Error::usage(format!("element {bad} outside universe {universe:?}")));
        }
        Ok(OmegaSet {
            universe,
            body: SetBody::Finite(items),
        })
    }

    pub fn cofinite(universe: Universe, excluded: impl IntoIterator<Item = u64>) -> Result<Self> {
        let excluded = sorted_distinct(excluded);
        if let Some(&bad) = excluded.iter().find(|&&x| !universe.admits(x)) {
            return Err(Error::usage(format!("element {bad} outside universe {universe:?}")));
        }
        Ok(OmegaSet {
            universe,
            body: SetBody::Cofinite(excluded),
        }
        .normalized())
    }

    pub fn empty(universe: Universe) -> Self {
        OmegaSet {
            universe,
            body: SetBody::Finite(Vec::new()),
        }
    }

    pub fn full(universe: Universe) -> Self {
        OmegaSet {
            universe,
            body: SetBody::Cofinite(Vec::new()),
        }
        .normalized()
    }

    /// Window over `[0, len)` holding the points where `pred` is true.
    /// On a finite universe a window covering every point becomes exact.
    pub fn window(universe: Universe, len: u64, pred: impl FnMut(u64) -> bool) -> Self {
        OmegaSet {
            universe,
            body: SetBody::Window(Bits::from_fn(len, pred)),
        }
        .normalized()
    }

    pub fn from_bits(universe: Universe, bits: Bits) -> Self {
        OmegaSet {
            universe,
            body: SetBody::Window(bits),
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        let Some(n) = self.universe.size() else {
            return self;
        };
        let body = match self.body {
            SetBody::Cofinite(ex) => SetBody::Finite((0..n).filter(|x| ex.binary_search(x).is_err()).collect()),
            SetBody::Window(bits) if bits.len() >= n => SetBody::Finite(bits.ones().filter(|&x| x < n).collect()),
            other => other,
        };
        OmegaSet {
            universe: self.universe,
            body,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn body(&self) -> &SetBody {
        &self.body
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.body, SetBody::Window(_))
    }

    /// Window length for approximate sets, `None` for exact ones.
    pub fn window_len(&self) -> Option<u64> {
        match &self.body {
            SetBody::Window(b) => Some(b.len()),
            _ => None,
        }
    }

    /// `Some(answer)` when membership of `x` is determined.
    pub fn contains(&self, x: u64) -> Option<bool> {
        if !self.universe.admits(x) {
            return Some(false);
        }
        match &self.body {
            SetBody::Finite(v) => Some(v.binary_search(&x).is_ok()),
            SetBody::Cofinite(v) => Some(v.binary_search(&x).is_err()),
            SetBody::Window(b) => (x < b.len()).then(|| b.contains(x)),
        }
    }

    /// Elements of an exact finite set.
    pub fn finite_elements(&self) -> Option<&[u64]> {
        match &self.body {
            SetBody::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Members below `limit` whose membership is known.
    pub fn members_below(&self, limit: u64) -> Vec<u64> {
        let limit = self.universe.size().map_or(limit, |n| limit.min(n));
        match &self.body {
            SetBody::Finite(v) => v.iter().copied().take_while(|&x| x < limit).collect(),
            SetBody::Cofinite(ex) => (0..limit).filter(|x| ex.binary_search(x).is_err()).collect(),
            SetBody::Window(b) => b.ones().take_while(|&x| x < limit).collect(),
        }
    }

    /// Least member, if one is known.
    pub fn least_member(&self) -> Option<u64> {
        match &self.body {
            SetBody::Finite(v) => v.first().copied(),
            SetBody::Cofinite(ex) => least_outside(ex, &[]),
            SetBody::Window(b) => b.first(),
        }
    }

    /// `Some(true)` if certainly empty, `Some(false)` if certainly not.
    pub fn is_empty(&self) -> Option<bool> {
        match &self.body {
            SetBody::Finite(v) => Some(v.is_empty()),
            // finite universes never hold a cofinite body
            SetBody::Cofinite(_) => Some(false),
            SetBody::Window(b) => (!b.is_empty()).then_some(false),
        }
    }

    pub fn complement(&self) -> Self {
        let body = match &self.body {
            SetBody::Finite(v) => SetBody::Cofinite(v.clone()),
            SetBody::Cofinite(v) => SetBody::Finite(v.clone()),
            SetBody::Window(b) => SetBody::Window(Bits::from_fn(b.len(), |x| !b.contains(x))),
        };
        OmegaSet {
            universe: self.universe,
            body,
        }
        .normalized()
    }

    /// Bit window over `[0, len)`; for a window body `len` is capped at
    /// its own length.
    pub fn to_bits(&self, len: u64) -> Bits {
        match &self.body {
            SetBody::Window(b) => {
                let mut b = b.clone();
                b.truncate(len);
                b
            }
            _ => Bits::from_fn(len, |x| self.contains(x) == Some(true)),
        }
    }

    /// Caps a window body at `len`; exact sets are returned unchanged.
    pub fn truncated(&self, len: u64) -> Self {
        match &self.body {
            SetBody::Window(b) if b.len() > len => OmegaSet::from_bits(self.universe, self.to_bits(len)),
            _ => self.clone(),
        }
    }

    /// Decides `self ⊆ other`. A failure carries an element of `self`
    /// outside `other`.
    pub fn subset_of(&self, other: &OmegaSet) -> Result<TriState<u64>> {
        same_universe([self, other])?;
        use SetBody::*;
        let verdict = match (&self.body, &other.body) {
            (Finite(a), _) => {
                let mut unknown = None;
                for &x in a {
                    match other.contains(x) {
                        Some(false) => return Ok(TriState::fails(x)),
                        None => unknown = other.window_len(),
                        Some(true) => {}
                    }
                }
                match unknown {
                    Some(window) => TriState::unknown(window),
                    None => TriState::Holds,
                }
            }
            (Cofinite(a), Finite(b)) => TriState::fails(least_outside(a, b).expect("cofinite set is infinite")),
            (Cofinite(a), Cofinite(b)) => match b.iter().find(|x| a.binary_search(x).is_err()) {
                Some(&x) => TriState::fails(x),
                None => TriState::Holds,
            },
            _ => {
                let window = [self.window_len(), other.window_len()].into_iter().flatten().min().expect("one side is a window");
                match (0..window).find(|&x| self.contains(x) == Some(true) && other.contains(x) == Some(false)) {
                    Some(x) => TriState::fails(x),
                    None => TriState::unknown(window),
                }
            }
        };
        Ok(verdict)
    }
}

impl fmt::Display for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match &self.body {
            SetBody::Finite(v) => write!(f, "{{{}}}", list(v)),
            SetBody::Cofinite(v) => write!(f, "Ω∖{{{}}}", list(v)),
            SetBody::Window(b) => write!(f, "{{{}}}<{}", list(&b.ones().collect::<Vec<_>>()), b.len()),
        }
    }
}

/// Least natural number in neither sorted list.
fn least_outside(a: &[u64], b: &[u64]) -> Option<u64> {
    (0..=u64::MAX).find(|x| a.binary_search(x).is_err() && b.binary_search(x).is_err())
}

fn same_universe<'a>(sets: impl IntoIterator<Item = &'a OmegaSet>) -> Result<Universe> {
    let mut iter = sets.into_iter();
    let Some(first) = iter.next() else {
        return Err(Error::usage("empty set list"));
    };
    for s in iter {
        if s.universe != first.universe {
            return Err(Error::usage(format!(
                "mixed universes {:?} and {:?}",
                first.universe, s.universe
            )));
        }
    }
    Ok(first.universe)
}

/// Intersection of a nonempty list of sets.
///
/// Exact inputs give an exact result; otherwise the result is a window of
/// the shortest input window length.
pub fn intersect_all(sets: &[OmegaSet]) -> Result<OmegaSet> {
    let universe = same_universe(sets)?;
    let window = sets.iter().filter_map(OmegaSet::window_len).min();
    if let Some(len) = window {
        let mut acc = Bits::from_fn(len, |_| true);
        for s in sets {
            acc.intersect_with(&s.to_bits(len));
        }
        return Ok(OmegaSet::from_bits(universe, acc));
    }
    let smallest_finite = sets
        .iter()
        .filter_map(OmegaSet::finite_elements)
        .min_by_key(|v| v.len());
    let body = match smallest_finite {
        Some(v) => SetBody::Finite(
            v.iter()
                .copied()
                .filter(|&x| sets.iter().all(|s| s.contains(x) == Some(true)))
                .collect(),
        ),
        None => SetBody::Cofinite(sorted_distinct(sets.iter().flat_map(|s| match &s.body {
            SetBody::Cofinite(ex) => ex.clone(),
            _ => unreachable!("only cofinite sets remain"),
        }))),
    };
    Ok(OmegaSet { universe, body }.normalized())
}

/// Outcome of a check that may only be semi-decidable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TriState<W> {
    Holds,
    Fails {
        witness: W,
    },
    /// Nothing refuted below `window`; `evidence` is an optional positive
    /// witness found during the search.
    UnknownWithinWindow {
        window: u64,
        evidence: Option<W>,
    },
}

impl<W> TriState<W> {
    pub fn fails(witness: W) -> Self {
        TriState::Fails { witness }
    }

    pub fn unknown(window: u64) -> Self {
        TriState::UnknownWithinWindow { window, evidence: None }
    }

    /// Holds outright or nothing refuted within the window.
    pub fn holds_or_evidence(&self) -> bool {
        !self.is_fails()
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, TriState::Fails { .. })
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, TriState::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            TriState::Fails { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn map_witness<V>(self, mut f: impl FnMut(W) -> V) -> TriState<V> {
        match self {
            TriState::Holds => TriState::Holds,
            TriState::Fails { witness } => TriState::Fails { witness: f(witness) },
            TriState::UnknownWithinWindow { window, evidence } => TriState::UnknownWithinWindow {
                window,
                evidence: evidence.map(f),
            },
        }
    }

    /// Conjunction: the first failure wins, then the smallest window.
    pub fn and(self, other: TriState<W>) -> TriState<W> {
        use TriState::*;
        match (self, other) {
            (f @ Fails { .. }, _) | (_, f @ Fails { .. }) => f,
            (UnknownWithinWindow { window: a, evidence: ea }, UnknownWithinWindow { window: b, evidence: eb }) => {
                UnknownWithinWindow {
                    window: a.min(b),
                    evidence: ea.or(eb),
                }
            }
            (u @ UnknownWithinWindow { .. }, Holds) | (Holds, u @ UnknownWithinWindow { .. }) => u,
            (Holds, Holds) => Holds,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TriState::Holds => "holds",
            TriState::Fails { .. } => "fails",
            TriState::UnknownWithinWindow { .. } => "unknown-within-window",
        }
    }
}

/// Generating family for a filter: the filter is every set containing a
/// finite intersection of generators. No generators generates `{Ω}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterBase {
    universe: Universe,
    generators: Vec<OmegaSet>,
}

impl FilterBase {
    pub fn new(universe: Universe, generators: Vec<OmegaSet>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.universe != universe) {
            return Err(Error::usage(format!(
                "generator in {:?} for a base over {universe:?}",
                g.universe
            )));
        }
        Ok(FilterBase { universe, generators })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn generators(&self) -> &[OmegaSet] {
        &self.generators
    }

    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(OmegaSet::is_exact)
    }

    /// Intersection of every generator (Ω for an empty base).
    ///
    /// Adding generators only shrinks the intersection, so for a finite base
    /// this one set decides membership in the generated filter.
    pub fn core(&self) -> Result<OmegaSet> {
        if self.generators.is_empty() {
            Ok(OmegaSet::full(self.universe))
        } else {
            intersect_all(&self.generators)
        }
    }
}

/// Membership of `s` in the filter generated by `base`. A failure carries a
/// point of the generators' common intersection lying outside `s`.
pub fn filter_contains(base: &FilterBase, s: &OmegaSet) -> Result<TriState<u64>> {
    if s.universe != base.universe {
        return Err(Error::usage("filter and set over different universes"));
    }
    base.core()?.subset_of(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NontrivialityWitness {
    /// A point lying in every checked intersection.
    CommonPoint(u64),
    /// Indices of generators whose intersection is empty.
    EmptyIntersection(Vec<usize>),
}

/// Whether the filter generated by `base` omits the empty set.
///
/// Exact bases are decided outright. Window bases are checked on every
/// sub-family of at most `sample_depth` generators within `window`; an
/// intersection that is empty inside the window is reported as a failure.
pub fn base_is_nontrivial(
    base: &FilterBase,
    sample_depth: usize,
    window: u64,
) -> Result<TriState<NontrivialityWitness>> {
    if sample_depth == 0 {
        return Err(Error::usage("sample_depth must be at least 1"));
    }
    let gens = &base.generators;
    if base.is_exact() {
        let core = base.core()?;
        if core.is_empty() == Some(false) {
            return Ok(TriState::Holds);
        }
        let indices = find_empty_subfamily(gens, sample_depth.min(gens.len()), u64::MAX)
            .unwrap_or_else(|| (0..gens.len()).collect());
        return Ok(TriState::fails(NontrivialityWitness::EmptyIntersection(indices)));
    }

    let cap = gens.iter().filter_map(OmegaSet::window_len).min().unwrap_or(window).min(window);
    let restricted: Vec<OmegaSet> = gens.iter().map(|g| g.truncated(cap)).collect();
    let core = intersect_all(&restricted)?;
    if let Some(z) = core.members_below(cap).first() {
        return Ok(TriState::UnknownWithinWindow {
            window: cap,
            evidence: Some(NontrivialityWitness::CommonPoint(*z)),
        });
    }
    match find_empty_subfamily(&restricted, sample_depth.min(gens.len()), cap) {
        Some(indices) => Ok(TriState::fails(NontrivialityWitness::EmptyIntersection(indices))),
        None => Ok(TriState::unknown(cap)),
    }
}

/// Depth-first search over sub-families of size at most `depth`, in
/// lexicographic index order, for one whose intersection is empty.
fn find_empty_subfamily(gens: &[OmegaSet], depth: usize, cap: u64) -> Option<Vec<usize>> {
    fn dfs(
        gens: &[OmegaSet],
        depth: usize,
        cap: u64,
        start: usize,
        acc: Option<&OmegaSet>,
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        for i in start..gens.len() {
            let next = match acc {
                None => gens[i].clone(),
                Some(a) => intersect_all(&[a.clone(), gens[i].clone()]).ok()?,
            };
            chosen.push(i);
            let empty = if next.is_exact() {
                next.is_empty() == Some(true)
            } else {
                next.members_below(cap).is_empty()
            };
            if empty {
                return Some(chosen.clone());
            }
            if chosen.len() < depth {
                if let Some(found) = dfs(gens, depth, cap, i + 1, Some(&next), chosen) {
                    return Some(found);
                }
            }
            chosen.pop();
        }
        None
    }
    dfs(gens, depth, cap, 0, None, &mut Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementWitness {
    /// Index of the generator of the first base missing from the second filter.
    pub generator: usize,
    /// Point of the second base's core outside that generator.
    pub point: u64,
}

/// Evidence that the filter generated by `a` is contained in the filter
/// generated by `b`: every generator of `a` must belong to the filter of `b`.
pub fn filter_refines(a: &FilterBase, b: &FilterBase, window: u64) -> Result<TriState<RefinementWitness>> {
    if a.universe != b.universe {
        return Err(Error::usage("filters over different universes"));
    }
    let core = b.core()?.truncated(window);
    let mut verdict = TriState::Holds;
    for (generator, g) in a.generators.iter().enumerate() {
        let v = core.subset_of(&g.truncated(window))?.map_witness(|point| RefinementWitness { generator, point });
        if v.is_fails() {
            return Ok(v);
        }
        verdict = verdict.and(v);
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const N: Universe = Universe::Countable;

    fn fin(items: &[u64]) -> OmegaSet {
        OmegaSet::finite(N, items.iter().copied()).unwrap()
    }

    fn cof(items: &[u64]) -> OmegaSet {
        OmegaSet::cofinite(N, items.iter().copied()).unwrap()
    }

    fn base(gens: Vec<OmegaSet>) -> FilterBase {
        FilterBase::new(N, gens).unwrap()
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(intersect_all(&[cof(&[1]), cof(&[2])]).unwrap(), cof(&[1, 2]));
        assert_eq!(intersect_all(&[fin(&[1, 2, 3]), cof(&[2])]).unwrap(), fin(&[1, 3]));
        let w = OmegaSet::window(N, 8, |x| x % 2 == 0);
        let got = intersect_all(&[w, fin(&[2, 3, 4])]).unwrap();
        assert_eq!(got.window_len(), Some(8));
        assert_eq!(got.members_below(8), vec![2, 4]);
    }

    #[test]
    fn mixed_universes_rejected() {
        let a = OmegaSet::finite(Universe::Finite(4), [1]).unwrap();
        assert!(matches!(intersect_all(&[a, fin(&[1])]), Err(Error::Usage(_))));
        assert!(intersect_all(&[]).is_err());
    }

    #[test]
    fn finite_universe_normalizes() {
        let u = Universe::Finite(4);
        let c = OmegaSet::cofinite(u, [1]).unwrap();
        assert_eq!(c, OmegaSet::finite(u, [0, 2, 3]).unwrap());
        let w = OmegaSet::window(u, 10, |x| x != 2);
        assert_eq!(w, OmegaSet::finite(u, [0, 1, 3]).unwrap());
        assert!(OmegaSet::finite(u, [4]).is_err());
    }

    #[test]
    fn filter_contains_examples() {
        assert_eq!(filter_contains(&base(vec![fin(&[0, 1])]), &fin(&[0, 1, 2])).unwrap(), TriState::Holds);
        assert_eq!(
            filter_contains(&base(vec![fin(&[0, 1]), fin(&[2, 3])]), &fin(&[5])).unwrap(),
            TriState::Holds
        );
        // Ω∖{0} ⊄ {1,2}: least point of the generator outside {1,2} is 3
        assert_eq!(
            filter_contains(&base(vec![cof(&[0])]), &fin(&[1, 2])).unwrap(),
            TriState::fails(3)
        );
        assert_eq!(filter_contains(&base(vec![]), &cof(&[])).unwrap(), TriState::Holds);
        assert!(filter_contains(&base(vec![]), &fin(&[7])).unwrap().is_fails());
    }

    #[test]
    fn window_membership_is_unknown_not_holds() {
        let g = OmegaSet::window(N, 16, |x| x % 4 == 0);
        let s = OmegaSet::window(N, 16, |x| x % 2 == 0);
        assert_eq!(filter_contains(&base(vec![g.clone()]), &s).unwrap(), TriState::unknown(16));
        let t = fin(&[0, 4]);
        assert_eq!(filter_contains(&base(vec![g]), &t).unwrap(), TriState::fails(8));
    }

    #[test]
    fn nontrivial_examples() {
        assert_eq!(base_is_nontrivial(&base(vec![cof(&[0]), cof(&[1])]), 2, 64).unwrap(), TriState::Holds);
        assert_eq!(
            base_is_nontrivial(&base(vec![fin(&[0, 1]), fin(&[2, 3])]), 2, 64).unwrap(),
            TriState::fails(NontrivialityWitness::EmptyIntersection(vec![0, 1]))
        );
        assert!(base_is_nontrivial(&base(vec![]), 1, 8).unwrap().is_holds());
        assert!(base_is_nontrivial(&base(vec![]), 0, 8).is_err());
    }

    #[test]
    fn windowed_common_point_is_least() {
        // stand-in for three neighbourhoods: numbers with bit k set
        let gens = (1..=3).map(|k| OmegaSet::window(N, 64, move |x| x >> k & 1 == 1)).collect();
        let v = base_is_nontrivial(&base(gens), 3, 64).unwrap();
        assert_eq!(
            v,
            TriState::UnknownWithinWindow {
                window: 64,
                evidence: Some(NontrivialityWitness::CommonPoint(14))
            }
        );
    }

    #[test]
    fn refines_examples() {
        let b01 = base(vec![fin(&[0, 1])]);
        assert_eq!(filter_refines(&b01, &b01, 100).unwrap(), TriState::Holds);
        let b012 = base(vec![fin(&[0, 1, 2])]);
        assert_eq!(filter_refines(&b012, &b01, 100).unwrap(), TriState::Holds);
        let v = filter_refines(&b01, &b012, 100).unwrap();
        assert_eq!(v, TriState::fails(RefinementWitness { generator: 0, point: 2 }));
    }

    #[test]
    fn serde_round_trip_window() {
        let w = OmegaSet::window(N, 70, |x| x % 3 == 1);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<OmegaSet>(&json).unwrap(), w);
    }

    // Brute-force oracle: enumerate every sub-family and test emptiness of
    // its intersection by direct membership over the finite universe.
    fn brute_nontrivial(n: u64, gens: &[Vec<u64>]) -> bool {
        (1u32..1 << gens.len()).all(|mask| {
            (0..n).any(|x| {
                gens.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .all(|(_, g)| g.contains(&x))
            })
        })
    }

    fn exact_set() -> impl Strategy<Value = OmegaSet> {
        (any::<bool>(), prop::collection::vec(0u64..12, 0..6)).prop_map(|(finite, v)| {
            if finite {
                fin(&v)
            } else {
                cof(&v)
            }
        })
    }

    proptest! {
        #[test]
        fn intersection_laws(a in exact_set(), b in exact_set(), c in exact_set()) {
            let ab = intersect_all(&[a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(&ab, &intersect_all(&[b.clone(), a.clone()]).unwrap());
            let left = intersect_all(&[ab, c.clone()]).unwrap();
            let bc = intersect_all(&[b.clone(), c.clone()]).unwrap();
            prop_assert_eq!(left, intersect_all(&[a.clone(), bc]).unwrap());
            prop_assert_eq!(intersect_all(&[a.clone(), a.clone()]).unwrap(), a);
        }

        #[test]
        fn generators_belong_to_their_filter(gens in prop::collection::vec(exact_set(), 1..5)) {
            let b = base(gens.clone());
            for g in &gens {
                prop_assert_eq!(filter_contains(&b, g).unwrap(), TriState::Holds);
            }
        }

        #[test]
        fn refinement_reflexive_transitive(
            a in prop::collection::vec(exact_set(), 0..4),
            b in prop::collection::vec(exact_set(), 0..4),
            c in prop::collection::vec(exact_set(), 0..4),
        ) {
            let (a, b, c) = (base(a), base(b), base(c));
            prop_assert!(filter_refines(&a, &a, 64).unwrap().is_holds());
            let ab = filter_refines(&a, &b, 64).unwrap().is_holds();
            let bc = filter_refines(&b, &c, 64).unwrap().is_holds();
            if ab && bc {
                prop_assert!(filter_refines(&a, &c, 64).unwrap().is_holds());
            }
        }

        #[test]
        fn nontrivial_matches_brute_force(
            gens in prop::collection::vec(prop::collection::vec(0u64..6, 0..5), 1..6),
        ) {
            let u = Universe::Finite(6);
            let sets = gens.iter().map(|g| OmegaSet::finite(u, g.iter().copied()).unwrap()).collect();
            let b = FilterBase::new(u, sets).unwrap();
            let got = base_is_nontrivial(&b, 3, 6).unwrap();
            prop_assert_eq!(got.is_holds(), brute_nontrivial(6, &gens));
            if let TriState::Fails { witness: NontrivialityWitness::EmptyIntersection(ix) } = got {
                let chosen: Vec<OmegaSet> = ix.iter().map(|&i| b.generators()[i].clone()).collect();
                prop_assert_eq!(intersect_all(&chosen).unwrap().is_empty(), Some(true));
            }
        }
    }
}
