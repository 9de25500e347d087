//! Computable permutation actions on a countable set, moieties, and the
//! translate-intersection conditions.
//!
//! The ground set is ℤ encoded into ℕ by the zigzag map
//! `0, -1, 1, -2, 2, ... ↔ 0, 1, 2, 3, 4, ...`, or ℕ itself. Windows are
//! always windows of encoded points.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{parse_generators, Permutation};
use crate::sets::{Bits, OmegaSet, TriState, Universe};

/// Encoded translates are capped at this many distinct sets.
pub const MAX_TRANSLATES: usize = 4096;

/// Subfamilies checked per run are capped at this many.
pub const MAX_SUBFAMILIES: u64 = 50_000_000;

/// Points used to tell group elements apart during word enumeration.
const PROBE_POINTS: u64 = 256;

pub fn zigzag_encode(z: i64) -> u64 {
    ((z << 1) ^ (z >> 63)) as u64
}

pub fn zigzag_decode(n: u64) -> i64 {
    ((n >> 1) as i64) ^ -((n & 1) as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ground {
    Integers,
    Naturals,
}

impl Ground {
    pub fn decode(self, n: u64) -> i64 {
        match self {
            Ground::Integers => zigzag_decode(n),
            Ground::Naturals => n as i64,
        }
    }

    pub fn encode(self, z: i64) -> u64 {
        match self {
            Ground::Integers => zigzag_encode(z),
            Ground::Naturals => z as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// `x ↦ x + c` on ℤ.
    Shift { by: i64 },
    /// `x ↦ -x` on ℤ; its own inverse.
    Negate,
    /// Permutation of an initial segment of the ground set (as points of
    /// that set), fixing everything else.
    Finite { perm: Permutation },
}

impl Generator {
    fn apply(&self, ground: Ground, x: i64, inverse: bool) -> i64 {
        match self {
            Generator::Shift { by } => {
                if inverse {
                    x - by
                } else {
                    x + by
                }
            }
            Generator::Negate => -x,
            Generator::Finite { perm } => {
                let idx = match ground {
                    Ground::Integers => zigzag_encode(x),
                    Ground::Naturals => x as u64,
                };
                if idx >= perm.degree() as u64 {
                    return x;
                }
                let image = if inverse {
                    perm.inverse().apply(idx as usize)
                } else {
                    perm.apply(idx as usize)
                } as u64;
                ground.decode(image)
            }
        }
    }

    fn name(&self) -> String {
        match self {
            Generator::Shift { by } => format!("shift({by})"),
            Generator::Negate => "neg".into(),
            Generator::Finite { perm } => perm.to_string(),
        }
    }
}

/// One letter of a word: a generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionOracle {
    pub ground: Ground,
    pub generators: Vec<Generator>,
}

impl ActionOracle {
    pub fn new(ground: Ground, generators: Vec<Generator>) -> Result<Self> {
        if ground == Ground::Naturals
            && generators.iter().any(|g| !matches!(g, Generator::Finite { .. }))
        {
            return Err(Error::usage("shifts and negation need the integer ground set"));
        }
        Ok(ActionOracle { ground, generators })
    }

    pub fn trivial(ground: Ground) -> Self {
        ActionOracle {
            ground,
            generators: Vec::new(),
        }
    }

    pub fn shift() -> Self {
        ActionOracle {
            ground: Ground::Integers,
            generators: vec![Generator::Shift { by: 1 }],
        }
    }

    /// `shift`, `shift2`, `neg-shift`, `trivial` (on ℤ), `trivial-nat`,
    /// or `perm:CYCLES` for finite permutations of ℕ.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let text = text.trim();
        let ints = Ground::Integers;
        match text {
            "shift" => Ok(ActionOracle::shift()),
            "shift2" => ActionOracle::new(ints, vec![Generator::Shift { by: 1 }, Generator::Shift { by: 2 }]),
            "neg-shift" => ActionOracle::new(ints, vec![Generator::Shift { by: 1 }, Generator::Negate]),
            "trivial" => Ok(ActionOracle::trivial(ints)),
            "trivial-nat" => Ok(ActionOracle::trivial(Ground::Naturals)),
            _ => match text.strip_prefix("perm:") {
                Some(cycles) => {
                    let degree = cycles
                        .split(|c: char| !c.is_ascii_digit())
                        .filter_map(|t| t.parse::<usize>().ok())
                        .max()
                        .map_or(0, |m| m + 1);
                    let perms = parse_generators(degree, cycles)?;
                    ActionOracle::new(Ground::Naturals, perms.into_iter().map(|perm| Generator::Finite { perm }).collect())
                }
                None => Err(Error::parse(format!("unknown action descriptor {text:?}"))),
            },
        }
    }

    /// Letters: each generator, then each inverse that differs from it.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = (0..self.generators.len())
            .map(|generator| Letter { generator, inverse: false })
            .collect();
        for (generator, g) in self.generators.iter().enumerate() {
            let involution = match g {
                Generator::Negate => true,
                Generator::Finite { perm } => perm.then(perm).is_identity(),
                Generator::Shift { by } => *by == 0,
            };
            if !involution {
                out.push(Letter { generator, inverse: true });
            }
        }
        out
    }

    /// `x^w`, letters applied left to right, on encoded points.
    pub fn apply_word(&self, word: &[Letter], x: u64) -> u64 {
        let z = word.iter().fold(self.ground.decode(x), |z, l| {
            self.generators[l.generator].apply(self.ground, z, l.inverse)
        });
        self.ground.encode(z)
    }

    /// `x^(w⁻¹)`.
    pub fn apply_inverse_word(&self, word: &[Letter], x: u64) -> u64 {
        let z = word.iter().rev().fold(self.ground.decode(x), |z, l| {
            self.generators[l.generator].apply(self.ground, z, !l.inverse)
        });
        self.ground.encode(z)
    }

    pub fn word_name(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "id".into();
        }
        word.iter()
            .map(|l| {
                let base = self.generators[l.generator].name();
                if l.inverse {
                    format!("{base}^-1")
                } else {
                    base
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Each generator composed with its inverse fixes every point below
    /// `window`; returns the first point where that fails.
    pub fn inverse_defect(&self, window: u64) -> Option<(usize, u64)> {
        for generator in 0..self.generators.len() {
            let fwd = [Letter { generator, inverse: false }];
            for x in 0..window {
                if self.apply_inverse_word(&fwd, self.apply_word(&fwd, x)) != x {
                    return Some((generator, x));
                }
            }
        }
        None
    }

    /// Distinct group elements given by words of length at most `max_len`,
    /// in breadth-first order (shortest, then lexicographically least word
    /// in letter order).
    pub fn elements(&self, max_len: usize) -> Vec<Vec<Letter>> {
        let letters = self.letters();
        let probe = |w: &[Letter]| -> Vec<u64> { (0..PROBE_POINTS).map(|x| self.apply_word(w, x)).collect() };
        let mut seen = BTreeSet::from([probe(&[])]);
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    let mut w2 = w.clone();
                    w2.push(l);
                    if seen.insert(probe(&w2)) {
                        next.push(w2.clone());
                        out.push(w2);
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

impl fmt::Display for ActionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.generators.iter().map(Generator::name).collect();
        write!(f, "{:?}<{}>", self.ground, names.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Moiety {
    Even,
    Odd,
    NonNegative,
    /// Listed points, plus every `x ≥ from` with `x mod modulus` among `residues`.
    Periodic {
        members: Vec<i64>,
        from: i64,
        modulus: u64,
        residues: Vec<u64>,
    },
}

impl Moiety {
    /// `even`, `odd`, `nonneg`, or `set:1,3,5;from=10;mod=2;res=0`
    /// (an explicit list followed by an optional periodic tail).
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "even" => return Ok(Moiety::Even),
            "odd" => return Ok(Moiety::Odd),
            "nonneg" => return Ok(Moiety::NonNegative),
            _ => {}
        }
        let Some(body) = text.strip_prefix("set:") else {
            return Err(Error::parse(format!("unknown moiety descriptor {text:?}")));
        };
        let mut parts = body.split(';');
        let members = parse_ints(parts.next().unwrap_or(""))?;
        let (mut from, mut modulus, mut residues) = (0i64, 1u64, Vec::new());
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("expected key=value in {part:?}")))?;
            let bad = || Error::parse(format!("bad value in {part:?}"));
            match k.trim() {
                "from" => from = v.trim().parse().map_err(|_| bad())?,
                "mod" => modulus = v.trim().parse().map_err(|_| bad())?,
                "res" => residues = parse_ints(v)?.into_iter().map(|r| r as u64).collect(),
                other => return Err(Error::parse(format!("unknown key {other:?}"))),
            }
        }
        if modulus == 0 || residues.iter().any(|&r| r >= modulus) {
            return Err(Error::usage("residues must lie in 0..mod"));
        }
        Ok(Moiety::Periodic {
            members,
            from,
            modulus,
            residues,
        })
    }

    pub fn contains(&self, z: i64) -> bool {
        match self {
            Moiety::Even => z.rem_euclid(2) == 0,
            Moiety::Odd => z.rem_euclid(2) == 1,
            Moiety::NonNegative => z >= 0,
            Moiety::Periodic {
                members,
                from,
                modulus,
                residues,
            } => members.contains(&z) || (z >= *from && residues.contains(&(z.rem_euclid(*modulus as i64) as u64))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Moiety::Even => "even".into(),
            Moiety::Odd => "odd".into(),
            Moiety::NonNegative => "nonneg".into(),
            Moiety::Periodic {
                members,
                from,
                modulus,
                residues,
            } => {
                let m: Vec<String> = members.iter().map(i64::to_string).collect();
                let r: Vec<String> = residues.iter().map(u64::to_string).collect();
                format!("set:{};from={from};mod={modulus};res={}", m.join(","), r.join(","))
            }
        }
    }

    /// Encoded members below `window`.
    pub fn window(&self, ground: Ground, window: u64) -> OmegaSet {
        OmegaSet::window(Universe::Countable, window, |x| self.contains(ground.decode(x)))
    }

    /// Both the set and its complement have at least `threshold` encoded
    /// points below `window`.
    pub fn check(&self, ground: Ground, window: u64, threshold: u64) -> Result<()> {
        let inside = (0..window).filter(|&x| self.contains(ground.decode(x))).count() as u64;
        if inside < threshold || window - inside < threshold {
            return Err(Error::usage(format!(
                "{} is not a moiety within window {window}: {inside} members, {} non-members, threshold {threshold}",
                self.describe(),
                window - inside
            )));
        }
        Ok(())
    }
}

fn parse_ints(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::parse(format!("bad integer {t:?}"))))
        .collect()
}

/// The translate `Δg`: `x ∈ Δg` iff `x g⁻¹ ∈ Δ`, on encoded points below `window`.
pub fn translate(delta: &Moiety, action: &ActionOracle, word: &[Letter], window: u64) -> OmegaSet {
    OmegaSet::window(Universe::Countable, window, |x| {
        delta.contains(action.ground.decode(action.apply_inverse_word(word, x)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeklerMode {
    /// Every finite intersection of translates is empty or infinite.
    Topology,
    /// Every finite intersection of translates is infinite.
    Filter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeklerParams {
    pub max_word_len: usize,
    pub max_n: usize,
    pub window: u64,
    pub inf_threshold: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeklerWitness {
    /// One word per translate in the intersection.
    pub words: Vec<String>,
    /// Decoded members of the intersection below the window (empty for an
    /// empty intersection).
    pub members: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeklerReport {
    pub mode: MeklerMode,
    pub action: String,
    pub moiety: String,
    pub params: MeklerParams,
    pub elements: usize,
    pub distinct_translates: usize,
    pub subfamilies_checked: u64,
    pub verdict: TriState<MeklerWitness>,
}

fn mekler_check(delta: &Moiety, action: &ActionOracle, mode: MeklerMode, p: MeklerParams) -> Result<MeklerReport> {
    if p.max_n == 0 {
        return Err(Error::usage("max_n must be at least 1"));
    }
    delta.check(action.ground, p.window, p.inf_threshold)?;
    if let Some((g, x)) = action.inverse_defect(p.window.min(PROBE_POINTS)) {
        return Err(Error::usage(format!("generator {g} is not inverted at point {x}")));
    }
    let words = action.elements(p.max_word_len);
    let mut seen = HashSet::new();
    let mut translates: Vec<(Vec<Letter>, Bits)> = Vec::new();
    for w in &words {
        let bits = translate(delta, action, w, p.window).to_bits(p.window);
        if seen.insert(bits.clone()) {
            translates.push((w.clone(), bits));
            if translates.len() > MAX_TRANSLATES {
                return Err(Error::resource(format!("more than {MAX_TRANSLATES} distinct translates")));
            }
        }
    }

    let mut checked = 0u64;
    let mut chosen = Vec::new();
    let full = Bits::from_fn(p.window, |_| true);
    let failure = search_subfamilies(&translates, &full, 0, p, mode, &mut chosen, &mut checked)?;
    let verdict = match failure {
        Some(indices) => {
            let mut acc = full.clone();
            for &i in &indices {
                acc.intersect_with(&translates[i].1);
            }
            TriState::fails(MeklerWitness {
                words: indices.iter().map(|&i| action.word_name(&translates[i].0)).collect(),
                members: acc.ones().map(|x| action.ground.decode(x)).collect(),
            })
        }
        // only Δ itself, which is a moiety by construction
        None if translates.len() == 1 => TriState::Holds,
        None => TriState::unknown(p.window),
    };
    Ok(MeklerReport {
        mode,
        action: action.to_string(),
        moiety: delta.describe(),
        params: p,
        elements: words.len(),
        distinct_translates: translates.len(),
        subfamilies_checked: checked,
        verdict,
    })
}

fn search_subfamilies(
    translates: &[(Vec<Letter>, Bits)],
    acc: &Bits,
    start: usize,
    p: MeklerParams,
    mode: MeklerMode,
    chosen: &mut Vec<usize>,
    checked: &mut u64,
) -> Result<Option<Vec<usize>>> {
    for i in start..translates.len() {
        let mut next = acc.clone();
        next.intersect_with(&translates[i].1);
        chosen.push(i);
        *checked += 1;
        if *checked > MAX_SUBFAMILIES {
            return Err(Error::resource(format!("more than {MAX_SUBFAMILIES} subfamilies")));
        }
        let size = next.count();
        let ok = size >= p.inf_threshold || (size == 0 && mode == MeklerMode::Topology);
        if !ok {
            return Ok(Some(chosen.clone()));
        }
        if chosen.len() < p.max_n && size > 0 {
            if let Some(found) = search_subfamilies(translates, &next, i + 1, p, mode, chosen, checked)? {
                return Ok(Some(found));
            }
        }
        chosen.pop();
    }
    Ok(None)
}

/// Every intersection of at most `max_n` translates by words of length at
/// most `max_word_len` is empty or has at least `inf_threshold` points
/// below the window.
pub fn mekler_topology_check(delta: &Moiety, action: &ActionOracle, p: MeklerParams) -> Result<MeklerReport> {
    mekler_check(delta, action, MeklerMode::Topology, p)
}

/// As [`mekler_topology_check`], but empty intersections also fail.
pub fn mekler_filter_check(delta: &Moiety, action: &ActionOracle, p: MeklerParams) -> Result<MeklerReport> {
    mekler_check(delta, action, MeklerMode::Filter, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(max_word_len: usize, max_n: usize) -> MeklerParams {
        MeklerParams {
            max_word_len,
            max_n,
            window: 2000,
            inf_threshold: 100,
        }
    }

    fn decoded(s: &OmegaSet, window: u64) -> Vec<i64> {
        let mut v: Vec<i64> = s.members_below(window).into_iter().map(zigzag_decode).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn zigzag_round_trip() {
        assert_eq!((0..5).map(zigzag_decode).collect::<Vec<_>>(), vec![0, -1, 1, -2, 2]);
        for z in -1000..1000 {
            assert_eq!(zigzag_decode(zigzag_encode(z)), z);
        }
    }

    #[test]
    fn translate_examples() {
        let shift = ActionOracle::shift();
        let plus1 = [Letter { generator: 0, inverse: false }];
        let minus1 = [Letter { generator: 0, inverse: true }];
        let odd = translate(&Moiety::Even, &shift, &plus1, 100);
        assert_eq!(odd, Moiety::Odd.window(Ground::Integers, 100));
        assert_eq!(translate(&Moiety::NonNegative, &shift, &[], 100), Moiety::NonNegative.window(Ground::Integers, 100));
        let down3 = translate(&Moiety::NonNegative, &shift, &[minus1[0]; 3], 100);
        assert_eq!(decoded(&down3, 100), (-3..50).collect::<Vec<_>>());
    }

    #[test]
    fn translate_then_inverse_is_identity() {
        let a = ActionOracle::from_descriptor("neg-shift").unwrap();
        let delta = Moiety::from_descriptor("set:0,1,-7;from=10;mod=3;res=0,2").unwrap();
        for w in a.elements(3) {
            let there = translate(&delta, &a, &w, 500);
            // translating the translate back: x ∈ (Δw)w⁻¹ iff x w ∈ Δw iff x ∈ Δ
            let back = OmegaSet::window(Universe::Countable, 400, |x| there.contains(a.apply_word(&w, x)) == Some(true));
            assert_eq!(back, delta.window(Ground::Integers, 400), "{}", a.word_name(&w));
        }
    }

    #[test]
    fn word_enumeration_dedupes() {
        assert_eq!(ActionOracle::shift().elements(4).len(), 9);
        assert_eq!(ActionOracle::from_descriptor("shift2").unwrap().elements(2).len(), 9);
        // length ≤ 3: x ↦ x + c with |c| ≤ 3 and x ↦ -x + c with |c| ≤ 2
        let ns = ActionOracle::from_descriptor("neg-shift").unwrap().elements(3);
        assert_eq!(ns.len(), 12);
        assert_eq!(ActionOracle::trivial(Ground::Integers).elements(5).len(), 1);
    }

    #[test]
    fn even_integers_under_shift() {
        let shift = ActionOracle::shift();
        let top = mekler_topology_check(&Moiety::Even, &shift, params(2, 2)).unwrap();
        assert!(top.verdict.holds_or_evidence());
        assert_eq!(top.distinct_translates, 2);
        let fil = mekler_filter_check(&Moiety::Even, &shift, params(2, 2)).unwrap();
        let w = fil.verdict.witness().unwrap();
        assert_eq!(w.words, vec!["id", "shift(1)"]);
        assert!(w.members.is_empty());
    }

    #[test]
    fn half_lines_are_filter_like() {
        let rep = mekler_filter_check(&Moiety::NonNegative, &ActionOracle::shift(), params(8, 4)).unwrap();
        assert!(rep.verdict.holds_or_evidence());
        assert_eq!(rep.distinct_translates, 17);
    }

    #[test]
    fn half_line_translates_are_half_lines() {
        // every translate of ℕ ⊂ ℤ under shifts is {x ≥ c}: no word moves a
        // point in while moving a larger one out
        let shift = ActionOracle::shift();
        for w in shift.elements(6) {
            let t = decoded(&translate(&Moiety::NonNegative, &shift, &w, 400), 400);
            let c = t[0];
            assert_eq!(t, (c..200).collect::<Vec<_>>());
        }
    }

    #[test]
    fn seam_fixture_fails_topology_mode() {
        // Δ = {0,1} ∪ {evens ≥ 10}: Δ ∩ (Δ+1) = {1}
        let delta = Moiety::from_descriptor("set:0,1;from=10;mod=2;res=0").unwrap();
        let rep = mekler_topology_check(&delta, &ActionOracle::shift(), params(2, 2)).unwrap();
        let w = rep.verdict.witness().unwrap();
        assert_eq!(w.words, vec!["id", "shift(1)"]);
        assert_eq!(w.members, vec![1]);
    }

    #[test]
    fn single_point_seam_is_empty_or_infinite() {
        // {0} ∪ {evens ≥ 10}: odd shifts give ∅, even shifts share the tail
        let delta = Moiety::from_descriptor("set:0;from=10;mod=2;res=0").unwrap();
        let rep = mekler_topology_check(&delta, &ActionOracle::shift(), params(4, 3)).unwrap();
        assert!(rep.verdict.holds_or_evidence());
    }

    #[test]
    fn trivial_action_holds() {
        for m in [Moiety::Even, Moiety::NonNegative] {
            let a = ActionOracle::trivial(Ground::Integers);
            assert_eq!(mekler_topology_check(&m, &a, params(3, 3)).unwrap().verdict, TriState::Holds);
            assert_eq!(mekler_filter_check(&m, &a, params(3, 3)).unwrap().verdict, TriState::Holds);
        }
    }

    #[test]
    fn finite_permutations_on_naturals() {
        let a = ActionOracle::from_descriptor("perm:(0 1 2)(3 4)").unwrap();
        assert_eq!(a.ground, Ground::Naturals);
        assert_eq!(a.inverse_defect(100), None);
        let even = Moiety::Even;
        // finite permutations move only finitely many points, so translates
        // of a moiety share a cofinite part
        let rep = mekler_filter_check(&even, &a, params(4, 3)).unwrap();
        assert!(rep.verdict.holds_or_evidence());
        assert!(ActionOracle::new(Ground::Naturals, vec![Generator::Negate]).is_err());
    }

    #[test]
    fn non_moieties_rejected() {
        let all = Moiety::from_descriptor("set:;from=-100000;mod=1;res=0").unwrap();
        assert!(mekler_topology_check(&all, &ActionOracle::shift(), params(1, 1)).is_err());
        assert!(Moiety::from_descriptor("set:1;mod=2;res=2").is_err());
        assert!(Moiety::from_descriptor("bogus").is_err());
        assert!(mekler_topology_check(&Moiety::Even, &ActionOracle::shift(), params(1, 0)).is_err());
    }
}
