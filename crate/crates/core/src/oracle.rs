//! Countable graphs presented as deterministic adjacency oracles.
//!
//! Random-looking graphs hash each unordered pair `{i, j}` with
//! [`pair_hash`]; the same parameters give the same graph on every
//! platform.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::sets::{OmegaSet, TriState, Universe};

/// The splitmix64 finalizer.
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of the unordered pair `{i, j}` under `seed`:
/// `splitmix64(splitmix64(seed ^ splitmix64(lo)) ^ hi)` with `lo = min(i, j)`
/// and `hi = max(i, j)`.
pub fn pair_hash(seed: u64, i: u64, j: u64) -> u64 {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    splitmix64(splitmix64(seed ^ splitmix64(lo)) ^ hi)
}

/// Probability `num/den`, `0 ≤ num ≤ den`, `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::usage(format!("{num}/{den} is not a probability")));
        }
        Ok(Ratio { num, den })
    }

    pub const HALF: Ratio = Ratio { num: 1, den: 2 };
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        let num = a.trim().parse().map_err(|_| Error::parse(format!("bad probability {s:?}")))?;
        let den = b.trim().parse().map_err(|_| Error::parse(format!("bad probability {s:?}")))?;
        Ratio::new(num, den)
    }
}

/// Edge colouring of the countable complete graph with `k` colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColouredCompleteOracle {
    pub seed: u64,
    pub k: u32,
}

impl ColouredCompleteOracle {
    pub fn new(seed: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::usage("a colouring needs at least one colour"));
        }
        Ok(ColouredCompleteOracle { seed, k })
    }

    /// `None` on the diagonal.
    pub fn colour(&self, i: u64, j: u64) -> Option<u32> {
        (i != j).then(|| (pair_hash(self.seed, i, j) % u64::from(self.k)) as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphOracle {
    /// For `i < j`: `i ~ j` iff bit `i` of `j` is set.
    BitRado,
    Bernoulli { seed: u64, p: Ratio },
    /// Edges whose colour lies in `colours` (sorted, distinct).
    ColourProjection { colouring: ColouredCompleteOracle, colours: Vec<u32> },
    /// Vertices `0..n`; the universe is finite.
    ExplicitFinite { graph: SimpleGraph },
    /// Countable blow-up of a finite graph on `m` vertices:
    /// `i ~ j` iff `i mod m ~ j mod m`.
    Periodic { graph: SimpleGraph },
}

impl GraphOracle {
    pub fn bernoulli(seed: u64, p: Ratio) -> Self {
        GraphOracle::Bernoulli { seed, p }
    }

    pub fn explicit(graph: SimpleGraph) -> Self {
        GraphOracle::ExplicitFinite { graph }
    }

    pub fn periodic(graph: SimpleGraph) -> Result<Self> {
        if graph.order() == 0 {
            return Err(Error::usage("periodic lift needs at least one vertex"));
        }
        Ok(GraphOracle::Periodic { graph })
    }

    /// Parses `bitrado`, `bernoulli:seed=S,p=A/B`, `colour:seed=S,k=K,colours=0,1`,
    /// `file:PATH` and `periodic:PATH`.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        match kind {
            "bitrado" | "rado" if rest.is_empty() => Ok(GraphOracle::BitRado),
            "bernoulli" => {
                let kv = KeyValues::parse(rest, &["seed", "p"])?;
                Ok(GraphOracle::bernoulli(kv.u64("seed")?.unwrap_or(0), kv.get("p").map_or(Ok(Ratio::HALF), str::parse)?))
            }
            "colour" | "color" => {
                let kv = KeyValues::parse(rest, &["seed", "k", "colours", "colors"])?;
                let k = kv.u64("k")?.unwrap_or(3);
                let k = u32::try_from(k).map_err(|_| Error::usage("too many colours"))?;
                let colouring = ColouredCompleteOracle::new(kv.u64("seed")?.unwrap_or(0), k)?;
                let colours = match kv.get("colours").or(kv.get("colors")) {
                    Some(list) => parse_list(list)?,
                    None => vec![0],
                };
                colour_subgraph(&colouring, &colours)
            }
            "file" | "periodic" => {
                if rest.is_empty() {
                    return Err(Error::usage(format!("{kind}: needs a path")));
                }
                let body = std::fs::read_to_string(rest).map_err(|e| Error::usage(format!("cannot read {rest}: {e}")))?;
                let graph = SimpleGraph::parse_matrix(&body)?;
                if kind == "file" {
                    Ok(GraphOracle::explicit(graph))
                } else {
                    GraphOracle::periodic(graph)
                }
            }
            _ => Err(Error::parse(format!("unknown graph descriptor {text:?}"))),
        }
    }

    /// Short textual description; explicit graphs are summarized by order.
    pub fn describe(&self) -> String {
        match self {
            GraphOracle::BitRado => "bitrado".into(),
            GraphOracle::Bernoulli { seed, p } => format!("bernoulli:seed={seed},p={p}"),
            GraphOracle::ColourProjection { colouring, colours } => {
                let list: Vec<String> = colours.iter().map(u32::to_string).collect();
                format!("colour:seed={},k={},colours={}", colouring.seed, colouring.k, list.join(","))
            }
            GraphOracle::ExplicitFinite { graph } => format!("explicit:n={}", graph.order()),
            GraphOracle::Periodic { graph } => format!("periodic:m={}", graph.order()),
        }
    }

    pub fn universe(&self) -> Universe {
        match self {
            GraphOracle::ExplicitFinite { graph } => Universe::Finite(graph.order() as u64),
            _ => Universe::Countable,
        }
    }

    pub fn adjacent(&self, i: u64, j: u64) -> bool {
        if i == j {
            return false;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        match self {
            GraphOracle::BitRado => lo < 64 && hi >> lo & 1 == 1,
            GraphOracle::Bernoulli { seed, p } => pair_hash(*seed, lo, hi) % p.den < p.num,
            GraphOracle::ColourProjection { colouring, colours } => {
                colouring.colour(lo, hi).is_some_and(|c| colours.binary_search(&c).is_ok())
            }
            GraphOracle::ExplicitFinite { graph } => {
                hi < graph.order() as u64 && graph.adjacent(lo as usize, hi as usize)
            }
            GraphOracle::Periodic { graph } => {
                let m = graph.order() as u64;
                graph.adjacent((lo % m) as usize, (hi % m) as usize)
            }
        }
    }

    /// Vertices that exist below `bound`.
    fn scan_limit(&self, bound: u64) -> u64 {
        self.universe().size().map_or(bound, |n| n.min(bound))
    }
}

struct KeyValues<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> KeyValues<'a> {
    /// `a=1,b=2,c=3,4`: a bare item continues the previous value list.
    fn parse(text: &'a str, allowed: &[&str]) -> Result<Self> {
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        let mut cut = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b',' {
                let next = &text[i + 1..];
                let item_end = next.find(',').unwrap_or(next.len());
                if next[..item_end].contains('=') {
                    cut.push(i);
                }
            }
        }
        cut.push(text.len());
        for end in cut {
            let item = text[start..end].trim();
            start = end + 1;
            if item.is_empty() {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("expected key=value, got {item:?}")))?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(Error::parse(format!("unknown key {k:?}")));
            }
            pairs.push((k, v.trim()));
        }
        Ok(KeyValues { pairs })
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().rev().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn u64(&self, key: &str) -> Result<Option<u64>> {
        self.get(key)
            .map(|v| v.parse().map_err(|_| Error::parse(format!("{key}={v} is not a number"))))
            .transpose()
    }
}

fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::parse(format!("bad list item {t:?}"))))
        .collect()
}

/// Subgraph of the colouring keeping the listed colours.
pub fn colour_subgraph(c: &ColouredCompleteOracle, colours: &[u32]) -> Result<GraphOracle> {
    if let Some(bad) = colours.iter().find(|&&x| x >= c.k) {
        return Err(Error::usage(format!("colour {bad} outside 0..{}", c.k)));
    }
    let colours: Vec<u32> = colours.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    Ok(GraphOracle::ColourProjection { colouring: *c, colours })
}

/// Neighbours of `v` below `w`.
pub fn neighbourhood_window(g: &GraphOracle, v: u64, w: u64) -> OmegaSet {
    OmegaSet::window(g.universe(), w, |x| g.adjacent(v, x))
}

fn finite_members<'a>(s: &'a OmegaSet, what: &str) -> Result<&'a [u64]> {
    s.finite_elements()
        .ok_or_else(|| Error::usage(format!("{what} must be a finite set")))
}

/// Least `z < bound` outside `exclude` adjacent to every vertex of `s`.
pub(crate) fn scan_common_neighbour(
    g: &GraphOracle,
    s: &[u64],
    exclude: impl Fn(u64) -> bool,
    bound: u64,
) -> Option<u64> {
    (0..g.scan_limit(bound)).find(|&z| !exclude(z) && s.iter().all(|&x| g.adjacent(x, z)))
}

/// Least `z < bound` outside `exclude` adjacent to all of `s`.
pub fn common_neighbour(g: &GraphOracle, s: &OmegaSet, exclude: &OmegaSet, bound: u64) -> Result<Option<u64>> {
    let s = finite_members(s, "S")?;
    let ex = finite_members(exclude, "exclude")?;
    Ok(scan_common_neighbour(g, s, |z| ex.binary_search(&z).is_ok(), bound))
}

/// The BIT closed form `Σ 2^u + 2^(max(U ∪ W) + 1)`, when it fits in 64 bits.
/// An empty `U ∪ W` gives 1.
pub fn bitrado_closed_form(u: &[u64], w: &[u64]) -> Option<u64> {
    let m = match u.iter().chain(w).max() {
        None => 0,
        Some(top) => top.checked_add(1).filter(|&m| m < 64)?,
    };
    Some(u.iter().fold(1u64 << m, |acc, &x| acc | 1 << x))
}

fn is_extension_witness(g: &GraphOracle, u: &[u64], w: &[u64], z: u64) -> bool {
    !u.contains(&z) && !w.contains(&z) && u.iter().all(|&x| g.adjacent(x, z)) && !w.iter().any(|&x| g.adjacent(x, z))
}

/// A vertex `z < bound` outside `U ∪ W`, adjacent to all of `U` and none of
/// `W`. For BitRado the closed form is tried before the linear scan.
pub fn extension_witness(g: &GraphOracle, u: &OmegaSet, w: &OmegaSet, bound: u64) -> Result<Option<u64>> {
    let us = finite_members(u, "U")?;
    let ws = finite_members(w, "W")?;
    if let Some(x) = us.iter().find(|x| ws.binary_search(x).is_ok()) {
        return Err(Error::usage(format!("U and W share vertex {x}")));
    }
    Ok(extension_witness_slices(g, us, ws, bound))
}

pub(crate) fn extension_witness_slices(g: &GraphOracle, us: &[u64], ws: &[u64], bound: u64) -> Option<u64> {
    // with nothing to satisfy the scan's answer 0 is already least
    if *g == GraphOracle::BitRado && !(us.is_empty() && ws.is_empty()) {
        if let Some(z) = bitrado_closed_form(us, ws).filter(|&z| z < bound) {
            debug_assert!(is_extension_witness(g, us, ws, z));
            return Some(z);
        }
    }
    (0..g.scan_limit(bound)).find(|&z| is_extension_witness(g, us, ws, z))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFailure {
    pub u: Vec<u64>,
    pub w: Vec<u64>,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionAudit {
    pub checked: usize,
    /// Largest witness found; a rough measure of search effort.
    pub max_witness: Option<u64>,
    pub verdict: TriState<ExtensionFailure>,
}

/// Every disjoint `(U, W)` over `0..points`, i.e. all `3^points`
/// assignments of each point to U, W or neither.
pub fn exhaustive_extension_audit(g: &GraphOracle, points: u32, bound: u64) -> Result<ExtensionAudit> {
    if points > 12 {
        return Err(Error::resource("exhaustive audit is limited to 12 points"));
    }
    let total = 3usize.pow(points);
    let mut max_witness = None;
    for code in 0..total {
        let (mut us, mut ws) = (Vec::new(), Vec::new());
        let mut c = code;
        for p in 0..u64::from(points) {
            match c % 3 {
                1 => us.push(p),
                2 => ws.push(p),
                _ => {}
            }
            c /= 3;
        }
        match extension_witness_slices(g, &us, &ws, bound) {
            Some(z) => max_witness = max_witness.max(Some(z)),
            None => {
                return Ok(ExtensionAudit {
                    checked: code + 1,
                    max_witness,
                    verdict: TriState::fails(ExtensionFailure { u: us, w: ws, bound }),
                })
            }
        }
    }
    Ok(ExtensionAudit {
        checked: total,
        max_witness,
        verdict: audit_verdict(g, bound),
    })
}

/// `samples` random disjoint pairs `(U, W)` with `|U| + |W| ≤ max_size`,
/// drawn from vertices below `range` with a ChaCha8 stream seeded by `seed`.
pub fn sampled_extension_audit(
    g: &GraphOracle,
    samples: usize,
    max_size: usize,
    range: u64,
    seed: u64,
    bound: u64,
) -> Result<ExtensionAudit> {
    let range = g.scan_limit(range);
    if (max_size as u64) > range {
        return Err(Error::usage(format!("cannot draw {max_size} distinct vertices below {range}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_witness = None;
    for i in 0..samples {
        let size = rng.random_range(0..=max_size);
        let mut picked: Vec<u64> = index::sample(&mut rng, range as usize, size).into_iter().map(|x| x as u64).collect();
        let split = rng.random_range(0..=size);
        let mut ws = picked.split_off(split);
        let mut us = picked;
        us.sort_unstable();
        ws.sort_unstable();
        match extension_witness_slices(g, &us, &ws, bound) {
            Some(z) => max_witness = max_witness.max(Some(z)),
            None => {
                return Ok(ExtensionAudit {
                    checked: i + 1,
                    max_witness,
                    verdict: TriState::fails(ExtensionFailure { u: us, w: ws, bound }),
                })
            }
        }
    }
    Ok(ExtensionAudit {
        checked: samples,
        max_witness,
        verdict: audit_verdict(g, bound),
    })
}

fn audit_verdict(g: &GraphOracle, bound: u64) -> TriState<ExtensionFailure> {
    match g.universe() {
        Universe::Finite(_) => TriState::Holds,
        Universe::Countable => TriState::unknown(bound),
    }
}

/// `count` distinct non-adjacent pairs `(v, w)`, `v ≠ w`, below `range`.
pub fn sample_nonadjacent_pairs(g: &GraphOracle, count: usize, range: u64, seed: u64) -> Result<Vec<(u64, u64)>> {
    let range = g.scan_limit(range);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0u64;
    while out.len() < count {
        attempts += 1;
        if range < 2 || attempts > 1000 * (count as u64 + 1) {
            return Err(Error::resource(format!("found only {} non-adjacent pairs below {range}", out.len())));
        }
        let v = rng.random_range(0..range);
        let w = rng.random_range(0..range);
        if v != w && !g.adjacent(v, w) && seen.insert((v.min(w), v.max(w))) {
            out.push((v, w));
        }
    }
    Ok(out)
}
