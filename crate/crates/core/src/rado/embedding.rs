//! Forth-only construction of a spanning copy of the BIT Rado graph inside
//! a target graph.
//!
//! Source vertices are unbounded naturals: even steps pick vertices whose
//! low bits are clear, and these grow roughly like `2^k` after `2k` steps.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{scan_common_neighbour, GraphOracle};
use crate::sets::TriState;

/// Adjacency in the BIT Rado graph on unbounded naturals.
pub fn rado_adjacent(a: &BigUint, b: &BigUint) -> bool {
    if a == b {
        return false;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    lo.to_u64().is_some_and(|i| hi.bit(i))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialEmbedding {
    pairs: Vec<(BigUint, u64)>,
    used: BTreeSet<BigUint>,
    hit: BTreeSet<u64>,
    steps: usize,
}

impl PartialEmbedding {
    pub fn new() -> Self {
        Self::default()
    }

    /// A state built from explicit pairs, for checking by [`verify_embedding`].
    /// The step counter is set to the number of pairs.
    pub fn from_pairs(pairs: Vec<(BigUint, u64)>) -> Self {
        PartialEmbedding {
            used: pairs.iter().map(|(r, _)| r.clone()).collect(),
            hit: pairs.iter().map(|&(_, g)| g).collect(),
            steps: pairs.len(),
            pairs,
        }
    }

    pub fn pairs(&self) -> &[(BigUint, u64)] {
        &self.pairs
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_used(&self, r: &BigUint) -> bool {
        self.used.contains(r)
    }

    pub fn is_hit(&self, g: u64) -> bool {
        self.hit.contains(&g)
    }

    /// Least target vertex not hit; every smaller one is hit.
    pub fn hit_prefix(&self) -> u64 {
        (0..).find(|g| !self.hit.contains(g)).expect("hit set is finite")
    }

    /// Least source vertex not used.
    pub fn used_prefix(&self) -> u64 {
        (0u64..).find(|&r| !self.used.contains(&BigUint::from(r))).expect("used set is finite")
    }

    /// Image of a source vertex, if placed.
    pub fn image(&self, r: &BigUint) -> Option<u64> {
        self.pairs.iter().find(|(s, _)| s == r).map(|&(_, g)| g)
    }

    /// One `r g` pair per line.
    pub fn to_pairs_text(&self) -> String {
        self.pairs.iter().map(|(r, g)| format!("{r} {g}\n")).collect()
    }

    /// Placed copy of the source graph, drawn on target labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph embedding {\n");
        for (r, g) in &self.pairs {
            out.push_str(&format!("  {g} [label=\"{g} <- {r}\"];\n"));
        }
        for (i, (r, g)) in self.pairs.iter().enumerate() {
            for (r2, g2) in &self.pairs[i + 1..] {
                if rado_adjacent(r, r2) {
                    out.push_str(&format!("  {g} -- {g2};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    fn place(&mut self, r: BigUint, g: u64) {
        self.used.insert(r.clone());
        self.hit.insert(g);
        self.pairs.push((r, g));
        self.steps += 1;
    }

    /// Least unused source vertex with no source edge to any used vertex.
    fn isolated_source_vertex(&self) -> BigUint {
        let k = self.used_prefix();
        let step = BigUint::from(1u8) << k;
        let mut candidate = if k == 0 { BigUint::zero() } else { step.clone() };
        loop {
            if !self.used.contains(&candidate) && self.used.iter().all(|u| !rado_adjacent(u, &candidate)) {
                return candidate;
            }
            candidate += &step;
        }
    }
}

/// Images of the placed source neighbours of `r`.
fn constraint_images(state: &PartialEmbedding, r: &BigUint) -> Vec<u64> {
    state
        .pairs
        .iter()
        .filter(|(s, _)| rado_adjacent(s, r))
        .map(|&(_, g)| g)
        .collect()
}

/// Even steps cover the least unhit target vertex; odd steps extend the
/// domain to the least unused source vertex. On failure the state is left
/// unchanged.
pub fn going_forth_step(state: &mut PartialEmbedding, target: &GraphOracle, bound: u64) -> Result<()> {
    let step = state.steps;
    if step.is_multiple_of(2) {
        let v = state.hit_prefix();
        if target.universe().size().is_some_and(|n| v >= n) || v >= bound {
            return Err(Error::SearchExhausted {
                step,
                bound,
                constraints: Vec::new(),
                excluded: state.hit.len(),
            });
        }
        let r = state.isolated_source_vertex();
        debug_assert!(state.used.iter().all(|u| !rado_adjacent(u, &r)));
        state.place(r, v);
    } else {
        let r = BigUint::from(state.used_prefix());
        let constraints = constraint_images(state, &r);
        let hit = &state.hit;
        match scan_common_neighbour(target, &constraints, |z| hit.contains(&z), bound) {
            Some(z) => state.place(r, z),
            None => {
                return Err(Error::SearchExhausted {
                    step,
                    bound,
                    constraints,
                    excluded: state.hit.len(),
                })
            }
        }
    }
    debug_assert!(last_pair_preserved(state, target));
    Ok(())
}

fn last_pair_preserved(state: &PartialEmbedding, target: &GraphOracle) -> bool {
    let Some(((r, g), rest)) = state.pairs.split_last() else {
        return true;
    };
    rest.iter()
        .all(|(r2, g2)| g != g2 && r != r2 && (!rado_adjacent(r, r2) || target.adjacent(*g, *g2)))
}

pub fn run_spanning_embedding(target: &GraphOracle, steps: usize, bound: u64) -> Result<PartialEmbedding> {
    let mut state = PartialEmbedding::new();
    for _ in 0..steps {
        going_forth_step(&mut state, target, bound)?;
    }
    Ok(state)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "defect", rename_all = "kebab-case")]
pub enum EmbeddingDefect {
    /// Two pairs share a source or a target vertex.
    NotInjective { first: (String, u64), second: (String, u64) },
    /// A source edge lands on a target non-edge.
    EdgeLost { first: (String, u64), second: (String, u64) },
}

/// Re-checks injectivity and edge preservation over all placed pairs.
pub fn verify_embedding(e: &PartialEmbedding, target: &GraphOracle) -> TriState<EmbeddingDefect> {
    let label = |(r, g): &(BigUint, u64)| (r.to_string(), *g);
    for (i, a) in e.pairs.iter().enumerate() {
        for b in &e.pairs[i + 1..] {
            if a.0 == b.0 || a.1 == b.1 {
                return TriState::fails(EmbeddingDefect::NotInjective {
                    first: label(a),
                    second: label(b),
                });
            }
            if rado_adjacent(&a.0, &b.0) && !target.adjacent(a.1, b.1) {
                return TriState::fails(EmbeddingDefect::EdgeLost {
                    first: label(a),
                    second: label(b),
                });
            }
        }
    }
    TriState::Holds
}
