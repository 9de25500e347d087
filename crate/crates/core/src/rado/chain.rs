//! Descending chains of neighbourhood filters from a `k`-colouring of the
//! countable complete graph.
//!
//! Level `i` (1 ≤ i < k) compares `G_i` (colours `0..i`) with `G_{i+1}`
//! (colours `0..=i`). `G_k` is the complete graph, so a `k`-colouring gives
//! `k - 1` levels.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{colour_subgraph, neighbourhood_window, sampled_extension_audit, ColouredCompleteOracle, ExtensionAudit, GraphOracle};
use crate::rado::neighbourhood_filter;
use crate::sets::{filter_refines, RefinementWitness, TriState};

/// Vertices `v` checked for pointwise inclusion, and the range trial
/// configurations are drawn from.
pub const CHAIN_SAMPLE_VERTICES: u64 = 100;

/// Vertices whose neighbourhoods generate the sampled filters compared by
/// `filter_refines`.
pub const CHAIN_FILTER_GENERATORS: u64 = 4;

/// Window for the sampled filter comparison and extension audits.
pub const CHAIN_AUDIT_WINDOW: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainParameters {
    pub colours: u32,
    pub seed: u64,
    pub trials: usize,
    pub max_ws: usize,
    pub window: u64,
    pub sample_vertices: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionFailure {
    pub v: u64,
    /// Neighbour of `v` in the smaller graph missing from the larger one.
    pub x: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictnessTrial {
    pub v: u64,
    pub ws: Vec<u64>,
    /// Least `x < window` with every edge from `x` to `v` and the `ws`
    /// coloured with the level's new colour.
    pub witness: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLevel {
    /// `G_level` keeps colours `0..level`.
    pub level: u32,
    /// The colour present in `G_{level+1}` but not in `G_level`.
    pub new_colour: u32,
    pub pointwise_inclusion: TriState<InclusionFailure>,
    /// Filter of the larger graph inside the filter of the smaller one.
    pub filter_refinement: TriState<RefinementWitness>,
    pub trials: Vec<StrictnessTrial>,
    pub failed_trials: usize,
    /// Sampled extension property of `G_level`.
    pub extension_audit: ExtensionAudit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub parameters: ChainParameters,
    pub levels: Vec<ChainLevel>,
}

impl ChainReport {
    /// Strictness was witnessed in every trial at every level.
    pub fn all_strict(&self) -> bool {
        self.levels.iter().all(|l| l.failed_trials == 0)
    }

    pub fn all_inclusions_hold(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.pointwise_inclusion.holds_or_evidence() && l.filter_refinement.holds_or_evidence())
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (u32, &StrictnessTrial)> {
        self.levels.iter().flat_map(|l| l.trials.iter().map(move |t| (l.new_colour, t)))
    }
}

/// Independent re-check of a strictness witness: `x` is outside the
/// configuration and every edge from `x` to it has `colour`.
pub fn verify_strictness_witness(c: &ColouredCompleteOracle, colour: u32, v: u64, ws: &[u64], x: u64) -> bool {
    std::iter::once(v).chain(ws.iter().copied()).all(|y| c.colour(x, y) == Some(colour))
}

fn pointwise_inclusion(small: &GraphOracle, large: &GraphOracle, vertices: u64, window: u64) -> TriState<InclusionFailure> {
    for v in 0..vertices {
        let a = neighbourhood_window(small, v, window);
        let b = neighbourhood_window(large, v, window);
        if let Some(x) = a.members_below(window).into_iter().find(|&x| b.contains(x) != Some(true)) {
            return TriState::fails(InclusionFailure { v, x });
        }
    }
    TriState::unknown(window)
}

pub fn filter_chain(k: u32, seed: u64, trials: usize, max_ws: usize, window: u64) -> Result<ChainReport> {
    if k < 2 {
        return Err(Error::usage("a chain needs at least two colours"));
    }
    if max_ws == 0 {
        return Err(Error::usage("max_ws must be at least 1"));
    }
    if max_ws as u64 + 1 > CHAIN_SAMPLE_VERTICES {
        return Err(Error::usage(format!("max_ws must be below {CHAIN_SAMPLE_VERTICES}")));
    }
    let colouring = ColouredCompleteOracle::new(seed, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = Vec::new();
    for level in 1..k {
        let small_colours: Vec<u32> = (0..level).collect();
        let large_colours: Vec<u32> = (0..=level).collect();
        let small = colour_subgraph(&colouring, &small_colours)?;
        let large = colour_subgraph(&colouring, &large_colours)?;
        let new_colour = level;

        let pointwise = pointwise_inclusion(&small, &large, CHAIN_SAMPLE_VERTICES, window);
        let generators: Vec<u64> = (0..CHAIN_FILTER_GENERATORS).collect();
        let audit_window = window.min(CHAIN_AUDIT_WINDOW);
        let refinement = filter_refines(
            &neighbourhood_filter(&large, &generators, audit_window),
            &neighbourhood_filter(&small, &generators, audit_window),
            audit_window,
        )?;

        let mut level_trials = Vec::with_capacity(trials);
        for _ in 0..trials {
            let n = rng.random_range(1..=max_ws);
            let picked = index::sample(&mut rng, CHAIN_SAMPLE_VERTICES as usize, n + 1);
            let mut config: Vec<u64> = picked.into_iter().map(|x| x as u64).collect();
            let v = config.remove(0);
            config.sort_unstable();
            let witness = (0..window).find(|&x| verify_strictness_witness(&colouring, new_colour, v, &config, x));
            level_trials.push(StrictnessTrial { v, ws: config, witness });
        }
        let failed_trials = level_trials.iter().filter(|t| t.witness.is_none()).count();

        let extension_audit = sampled_extension_audit(&small, 20, 6, 64, seed ^ u64::from(level), CHAIN_AUDIT_WINDOW * 25)?;

        levels.push(ChainLevel {
            level,
            new_colour,
            pointwise_inclusion: pointwise,
            filter_refinement: refinement,
            trials: level_trials,
            failed_trials,
            extension_audit,
        });
    }
    Ok(ChainReport {
        parameters: ChainParameters {
            colours: k,
            seed,
            trials,
            max_ws,
            window,
            sample_vertices: CHAIN_SAMPLE_VERTICES,
        },
        levels,
    })
}
