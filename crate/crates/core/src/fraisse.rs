//! Finite prefixes of three homogeneous countable structures: the
//! equivalence relation with infinitely many infinite classes, a staged
//! generic partial order, and the preorder obtained by inflating each
//! point of that order to an infinite fibre.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preorder::Preorder;
use crate::sets::{OmegaSet, TriState, Universe};

/// Element guard for [`generic_poset_stage`].
pub const MAX_POSET_ELEMENTS: usize = 10_000;

/// Inverse of `(p, i) ↦ (p + i)(p + i + 1)/2 + i`.
pub fn cantor_unpair(n: u64) -> (u64, u64) {
    let w = ((8 * u128::from(n) + 1).isqrt() as u64 - 1) / 2;
    let t = w * (w + 1) / 2;
    let i = n - t;
    (w - i, i)
}

pub fn cantor_pair(p: u64, i: u64) -> u64 {
    (p + i) * (p + i + 1) / 2 + i
}

/// Class of `n` in the partition with infinitely many infinite classes.
pub fn partition_class(n: u64) -> u64 {
    cantor_unpair(n).0
}

/// Members of class `c` below `w`.
pub fn partition_window(c: u64, w: u64) -> OmegaSet {
    OmegaSet::window(Universe::Countable, w, |n| partition_class(n) == c)
}

/// Number of classes with at least `min_size` members below `w`.
pub fn classes_with_members(w: u64, min_size: u64) -> usize {
    let mut counts: Vec<u64> = Vec::new();
    for n in 0..w {
        let c = partition_class(n) as usize;
        if c >= counts.len() {
            counts.resize(c + 1, 0);
        }
        counts[c] += 1;
    }
    counts.iter().filter(|&&k| k >= min_size).count()
}

/// One-point extension type over a configuration `config`: the new point
/// lies above every element of `down` and below every element of `up`, and
/// is incomparable to the rest of `config`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtensionType {
    pub config: Vec<usize>,
    pub down: Vec<usize>,
    pub up: Vec<usize>,
}

/// A strict partial order on `0..n` grown in stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedPoset {
    n: usize,
    less: Vec<bool>,
    /// Element count after each stage.
    stage_ends: Vec<usize>,
    /// The type each element was added to realize, when built by stages.
    log: Vec<Option<ExtensionType>>,
}

impl StagedPoset {
    pub fn empty() -> Self {
        StagedPoset {
            n: 0,
            less: Vec::new(),
            stage_ends: Vec::new(),
            log: Vec::new(),
        }
    }

    /// A single-stage poset from strict relations `a < b`, closed
    /// transitively; cycles are rejected.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut less = vec![false; n * n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::usage(format!("relation ({a},{b}) outside 0..{n}")));
            }
            less[a * n + b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if less[a * n + k] && less[k * n + b] {
                        less[a * n + b] = true;
                    }
                }
            }
        }
        if (0..n).any(|a| less[a * n + a]) {
            return Err(Error::usage("relations contain a cycle"));
        }
        Ok(StagedPoset {
            n,
            less,
            stage_ends: vec![n],
            log: vec![None; n],
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn stages(&self) -> usize {
        self.stage_ends.len()
    }

    pub fn stage_ends(&self) -> &[usize] {
        &self.stage_ends
    }

    pub fn log(&self) -> &[Option<ExtensionType>] {
        &self.log
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a * self.n + b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    /// Elements added in stages `0..stage` (all of them when `stage` is past the end).
    pub fn stage_prefix_len(&self, stage: usize) -> usize {
        match stage {
            0 => 0,
            s => self.stage_ends.get(s - 1).copied().unwrap_or(self.n),
        }
    }

    /// The poset after its first `stage` stages.
    pub fn prefix(&self, stage: usize) -> StagedPoset {
        let m = self.stage_prefix_len(stage);
        StagedPoset {
            n: m,
            less: (0..m * m).map(|i| self.less(i / m, i % m)).collect(),
            stage_ends: self.stage_ends.iter().copied().take(stage).collect(),
            log: self.log[..m].to_vec(),
        }
    }

    /// Every valid type over `config`: `down` down-closed and `up` up-closed
    /// within `config`, disjoint, with every element of `down` below every
    /// element of `up`. Incomparable-to-all comes first.
    pub fn types_over(&self, config: &[usize]) -> Vec<ExtensionType> {
        let k = config.len();
        let mut out = Vec::new();
        for code in 0..3usize.pow(k as u32) {
            let (mut down, mut up) = (Vec::new(), Vec::new());
            let mut c = code;
            for &e in config {
                match c % 3 {
                    1 => down.push(e),
                    2 => up.push(e),
                    _ => {}
                }
                c /= 3;
            }
            let down_closed = down
                .iter()
                .all(|&d| config.iter().all(|&e| !self.less(e, d) || down.contains(&e)));
            let up_closed = up.iter().all(|&u| config.iter().all(|&e| !self.less(u, e) || up.contains(&e)));
            let separated = down.iter().all(|&d| up.iter().all(|&u| self.less(d, u)));
            if down_closed && up_closed && separated {
                out.push(ExtensionType {
                    config: config.to_vec(),
                    down,
                    up,
                });
            }
        }
        out
    }

    /// `x ∉ config` with the relations prescribed by `t`.
    pub fn realizes(&self, x: usize, t: &ExtensionType) -> bool {
        !t.config.contains(&x)
            && t.config.iter().all(|&c| {
                let want_below = t.down.contains(&c);
                let want_above = t.up.contains(&c);
                self.less(c, x) == want_below && self.less(x, c) == want_above
            })
    }

    /// Strict relation as `0/1` rows.
    pub fn to_matrix_text(&self) -> String {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| if self.less(a, b) { '1' } else { '0' }).collect::<String>() + "\n")
            .collect()
    }

    /// Covering pairs `a ⋖ b`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less(a, b) && !(0..n).any(|c| self.less(a, c) && self.less(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Hasse diagram, edges pointing upwards.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
        for v in 0..self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (a, b) in self.hasse_edges() {
            out.push_str(&format!("  {a} -> {b};\n"));
        }
        out.push_str("}\n");
        out
    }

    fn closure_down(&self, set: &[usize]) -> BTreeSet<usize> {
        (0..self.n)
            .filter(|&y| set.iter().any(|&d| y == d || self.less(y, d)))
            .collect()
    }

    fn closure_up(&self, set: &[usize]) -> BTreeSet<usize> {
        (0..self.n)
            .filter(|&y| set.iter().any(|&u| y == u || self.less(u, y)))
            .collect()
    }

    fn push_stage(&mut self, new_points: Vec<(BTreeSet<usize>, BTreeSet<usize>, ExtensionType)>) {
        let old = self.n;
        let n = old + new_points.len();
        let mut less = vec![false; n * n];
        for a in 0..old {
            for b in 0..old {
                less[a * n + b] = self.less(a, b);
            }
        }
        for (k, (down, up, _)) in new_points.iter().enumerate() {
            let x = old + k;
            for &d in down {
                less[d * n + x] = true;
            }
            for &u in up {
                less[x * n + u] = true;
            }
            // forced by transitivity: x < a < y
            for (j, (down_y, _, _)) in new_points.iter().enumerate() {
                if up.iter().any(|a| down_y.contains(a)) {
                    less[x * n + old + j] = true;
                }
            }
        }
        self.n = n;
        self.less = less;
        self.log.extend(new_points.into_iter().map(|(_, _, t)| Some(t)));
        self.stage_ends.push(n);
    }
}

/// Subsets of `0..m` of size at most `k`, by size then lexicographically.
fn small_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for e in start..m {
            cur.push(e);
            rec(m, size, e + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 0..=k.min(m) {
        rec(m, size, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Each stage adds one point for every distinct one-point extension type
/// over configurations of at most `max_config` current elements. Points of
/// one stage are comparable only when transitivity forces it.
pub fn generic_poset_stage(stages: usize, max_config: usize) -> Result<StagedPoset> {
    let mut p = StagedPoset::empty();
    for _ in 0..stages {
        let mut seen = BTreeSet::new();
        let mut new_points = Vec::new();
        for config in small_subsets(p.n, max_config) {
            for t in p.types_over(&config) {
                let down = p.closure_down(&t.down);
                let up = p.closure_up(&t.up);
                if seen.insert((down.clone(), up.clone())) {
                    new_points.push((down, up, t));
                    if p.n + new_points.len() > MAX_POSET_ELEMENTS {
                        return Err(Error::resource(format!("poset would exceed {MAX_POSET_ELEMENTS} elements")));
                    }
                }
            }
        }
        p.push_stage(new_points);
    }
    Ok(p)
}

/// Every valid type over every configuration of at most `config_size`
/// elements from the first `base_stages` stages is realized by some element
/// outside the configuration.
pub fn extension_audit_over(p: &StagedPoset, config_size: usize, base_stages: usize) -> TriState<ExtensionType> {
    let pool = p.stage_prefix_len(base_stages);
    for config in small_subsets(pool, config_size) {
        for t in p.types_over(&config) {
            if !(0..p.len()).any(|x| p.realizes(x, &t)) {
                return TriState::fails(t);
            }
        }
    }
    TriState::Holds
}

/// [`extension_audit_over`] with configurations drawn from the first stage.
pub fn extension_property_audit(p: &StagedPoset, config_size: usize) -> TriState<ExtensionType> {
    extension_audit_over(p, config_size, 1)
}

/// Point `n` sits in the fibre over poset element `p(n)`, the first
/// coordinate of its Cantor unpairing; `x → y` iff `p(x) = p(y)` or
/// `p(x) < p(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflatedPreorder {
    poset: StagedPoset,
}

impl InflatedPreorder {
    pub fn new(poset: StagedPoset) -> Self {
        InflatedPreorder { poset }
    }

    pub fn poset(&self) -> &StagedPoset {
        &self.poset
    }

    pub fn point(&self, n: u64) -> Result<usize> {
        let (p, _) = cantor_unpair(n);
        if p >= self.poset.len() as u64 {
            return Err(Error::usage(format!(
                "point {n} lies over poset element {p}, but the poset has {} elements",
                self.poset.len()
            )));
        }
        Ok(p as usize)
    }

    pub fn relates(&self, x: u64, y: u64) -> Result<bool> {
        let (a, b) = (self.point(x)?, self.point(y)?);
        Ok(a == b || self.poset.less(a, b))
    }

    /// Largest window whose points all lie over poset elements.
    pub fn max_window(&self) -> u64 {
        // the first point over element m is (m)(m+1)/2
        let m = self.poset.len() as u64;
        m * (m + 1) / 2
    }

    /// The preorder on points `0..w`, validated on construction.
    pub fn materialize(&self, w: u64) -> Result<Preorder> {
        let pts: Vec<usize> = (0..w).map(|x| self.point(x)).collect::<Result<_>>()?;
        let w = w as usize;
        Preorder::new(
            w,
            (0..w * w)
                .map(|i| {
                    let (a, b) = (pts[i / w], pts[i % w]);
                    a == b || self.poset.less(a, b)
                })
                .collect(),
        )
    }

    /// Points of the fibre over `element` below `w`.
    pub fn fibre_size(&self, element: usize, w: u64) -> u64 {
        (0..w).filter(|&n| cantor_unpair(n).0 == element as u64).count() as u64
    }
}
