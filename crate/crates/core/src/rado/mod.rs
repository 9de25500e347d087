//! Neighbourhood filters of countable graphs and their comparison with the
//! Rado graph.

pub mod chain;
pub mod embedding;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{neighbourhood_window, GraphOracle};
use crate::sets::{base_is_nontrivial, filter_refines, FilterBase, NontrivialityWitness, OmegaSet, RefinementWitness, TriState};

pub use chain::{filter_chain, ChainReport};
pub use embedding::{going_forth_step, rado_adjacent, run_spanning_embedding, verify_embedding, EmbeddingDefect, PartialEmbedding};

/// Vertices whose neighbourhoods are sampled by
/// [`filter_nontrivial_iff_spanning`].
pub const SPANNING_SAMPLE_VERTICES: u64 = 8;

/// Generators are the windowed neighbourhoods of the listed vertices.
pub fn neighbourhood_filter(g: &GraphOracle, vertices: &[u64], window: u64) -> FilterBase {
    let gens = vertices.iter().map(|&v| neighbourhood_window(g, v, window)).collect();
    FilterBase::new(g.universe(), gens).expect("neighbourhoods share the oracle's universe")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedOpenWitness {
    pub v: u64,
    pub w: u64,
    /// In both closed neighbourhoods but not a neighbour of `v`.
    pub x: u64,
}

/// For each non-adjacent `(v, w)`, checks `Γ̄(v) ∩ Γ̄(w) ⊆ Γ(v)` below `window`.
pub fn closed_open_equivalence_check(
    g: &GraphOracle,
    samples: &[(u64, u64)],
    window: u64,
) -> Result<TriState<ClosedOpenWitness>> {
    if let Some(&(v, w)) = samples.iter().find(|&&(v, w)| v == w || g.adjacent(v, w)) {
        return Err(Error::usage(format!("sample ({v},{w}) is not a pair of distinct non-adjacent vertices")));
    }
    let limit = g.universe().size().map_or(window, |n| n.min(window));
    let closed = |a: u64, x: u64| x == a || g.adjacent(a, x);
    for &(v, w) in samples {
        if let Some(x) = (0..limit).find(|&x| closed(v, x) && closed(w, x) && !g.adjacent(v, x)) {
            return Ok(TriState::fails(ClosedOpenWitness { v, w, x }));
        }
    }
    let exhaustive = g.universe().size().is_some_and(|n| n <= window);
    Ok(if exhaustive || samples.is_empty() {
        TriState::Holds
    } else {
        TriState::unknown(window)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum SpanningFailure {
    SearchExhausted {
        step: usize,
        bound: u64,
        constraints: Vec<u64>,
        excluded: usize,
    },
    Defect {
        defect: EmbeddingDefect,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum TransportFailure {
    /// `x` is the image of a source neighbour of `g⁻¹(v)` but not adjacent to `v`.
    Pointwise { v: u64, x: u64 },
    Refinement { witness: RefinementWitness },
    /// The neighbourhood filter contains ∅, so it lies in no proper filter.
    TrivialFilter { witness: NontrivialityWitness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningParameters {
    pub graph: String,
    pub depth: usize,
    pub window: u64,
    pub steps: usize,
    pub bound: u64,
    pub sample_vertices: Vec<u64>,
}

/// Verdicts for the three equivalent conditions, computed independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningReport {
    pub parameters: SpanningParameters,
    /// Sampled neighbourhoods have non-empty finite intersections.
    pub nontrivial: TriState<NontrivialityWitness>,
    /// The forth-only construction ran for all steps and re-verifies.
    pub spanning: TriState<SpanningFailure>,
    /// The neighbourhood filter sits inside the filter of the transported
    /// copy of R.
    pub refinement: TriState<TransportFailure>,
    pub placed: usize,
    pub hit_prefix: u64,
    pub used_prefix: u64,
    /// All three verdicts agree (all evidence-hold or all fail).
    pub consistent: bool,
}

pub fn filter_nontrivial_iff_spanning(
    g: &GraphOracle,
    depth: usize,
    window: u64,
    steps: usize,
    bound: u64,
) -> Result<SpanningReport> {
    let vertices: Vec<u64> = (0..g.universe().size().map_or(SPANNING_SAMPLE_VERTICES, |n| n.min(SPANNING_SAMPLE_VERTICES))).collect();
    let base = neighbourhood_filter(g, &vertices, window);
    let nontrivial = base_is_nontrivial(&base, depth, window)?;

    let run = run_spanning_embedding(g, steps, bound);
    let (spanning, embedding) = match run {
        Ok(e) => (
            verify_embedding(&e, g).map_witness(|defect| SpanningFailure::Defect { defect }),
            Some(e),
        ),
        Err(Error::SearchExhausted {
            step,
            bound,
            constraints,
            excluded,
        }) => (
            TriState::fails(SpanningFailure::SearchExhausted {
                step,
                bound,
                constraints,
                excluded,
            }),
            None,
        ),
        Err(other) => return Err(other),
    };

    let refinement = match &embedding {
        Some(e) => transported_refinement(g, e, &vertices, &base, window)?,
        None => match &nontrivial {
            TriState::Fails { witness } => TriState::fails(TransportFailure::TrivialFilter { witness: witness.clone() }),
            _ => TriState::unknown(window),
        },
    };

    let agree = [nontrivial.holds_or_evidence(), spanning.holds_or_evidence(), refinement.holds_or_evidence()];
    let (placed, hit_prefix, used_prefix) = embedding
        .as_ref()
        .map_or((0, 0, 0), |e| (e.pairs().len(), e.hit_prefix(), e.used_prefix()));
    Ok(SpanningReport {
        parameters: SpanningParameters {
            graph: g.describe(),
            depth,
            window,
            steps,
            bound,
            sample_vertices: vertices,
        },
        nontrivial,
        spanning,
        refinement,
        placed,
        hit_prefix,
        used_prefix,
        consistent: agree.iter().all(|&a| a == agree[0]),
    })
}

/// Compares `F_Γ` with the filter generated by the embedded copy `R'` of R,
/// where `R'(g(r))` is the set of images of the placed neighbours of `r`,
/// known completely below the hit prefix.
fn transported_refinement(
    g: &GraphOracle,
    e: &PartialEmbedding,
    vertices: &[u64],
    base: &FilterBase,
    window: u64,
) -> Result<TriState<TransportFailure>> {
    let known = e.hit_prefix().min(window);
    let mut copy = Vec::new();
    for &v in vertices {
        let Some((r, _)) = e.pairs().iter().find(|&&(_, img)| img == v) else {
            return Ok(TriState::unknown(known));
        };
        let images: Vec<u64> = e
            .pairs()
            .iter()
            .filter(|(s, img)| *img < known && rado_adjacent(r, s))
            .map(|&(_, img)| img)
            .collect();
        if let Some(&x) = images.iter().find(|&&x| !g.adjacent(v, x)) {
            return Ok(TriState::fails(TransportFailure::Pointwise { v, x }));
        }
        copy.push(OmegaSet::window(g.universe(), known, |x| images.contains(&x)));
    }
    let transported = FilterBase::new(g.universe(), copy)?;
    Ok(filter_refines(base, &transported, known)?.map_witness(|witness| TransportFailure::Refinement { witness }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;
    use crate::oracle::Ratio;
    use crate::sets::Universe;

    fn k33_lift() -> GraphOracle {
        GraphOracle::periodic(SimpleGraph::from_fn(6, |a, b| (a < 3) != (b < 3))).unwrap()
    }

    #[test]
    fn neighbourhood_filter_examples() {
        let f = neighbourhood_filter(&GraphOracle::BitRado, &[0], 8);
        assert_eq!(f.generators()[0].members_below(8), vec![1, 3, 5, 7]);
        let empty = neighbourhood_filter(&GraphOracle::BitRado, &[], 8);
        assert!(empty.generators().is_empty());
        assert_eq!(empty.core().unwrap(), OmegaSet::full(Universe::Countable));

        let path = GraphOracle::explicit(SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap());
        let f = neighbourhood_filter(&path, &[0, 2], 3);
        let one = OmegaSet::finite(Universe::Finite(3), [1]).unwrap();
        assert_eq!(f.generators(), &[one.clone(), one.clone()]);
        assert!(base_is_nontrivial(&f, 2, 3).unwrap().is_holds());
        assert!(crate::sets::filter_contains(&f, &one).unwrap().is_holds());
    }

    #[test]
    fn closed_open_examples() {
        let r = GraphOracle::BitRado;
        assert!(closed_open_equivalence_check(&r, &[(0, 2)], 64).unwrap().holds_or_evidence());
        let star = GraphOracle::explicit(SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap());
        assert_eq!(closed_open_equivalence_check(&star, &[(1, 2)], 4).unwrap(), TriState::Holds);
        assert_eq!(closed_open_equivalence_check(&r, &[], 64).unwrap(), TriState::Holds);
        assert!(closed_open_equivalence_check(&r, &[(1, 2)], 64).is_err());
    }

    #[test]
    fn bitrado_against_itself() {
        // least common neighbours in BitRado grow like 2^max, so the run
        // stays short for a 10^6 bound
        let rep = filter_nontrivial_iff_spanning(&GraphOracle::BitRado, 3, 1 << 12, 32, 1_000_000).unwrap();
        assert!(rep.nontrivial.holds_or_evidence());
        assert!(rep.spanning.is_holds());
        assert!(rep.refinement.holds_or_evidence());
        assert!(rep.consistent);
        assert!(rep.hit_prefix >= 16);
        let long = filter_nontrivial_iff_spanning(&GraphOracle::BitRado, 3, 1 << 12, 40, 1_000_000).unwrap();
        assert!(matches!(long.spanning.witness(), Some(SpanningFailure::SearchExhausted { step: 35, .. })), "{:?}", long.spanning);
    }

    #[test]
    fn k33_lift_fails_everywhere() {
        let g = k33_lift();
        let rep = filter_nontrivial_iff_spanning(&g, 3, 1 << 12, 200, 100_000).unwrap();
        let Some(NontrivialityWitness::EmptyIntersection(ix)) = rep.nontrivial.witness() else {
            panic!("{:?}", rep.nontrivial);
        };
        assert!((0..1 << 12).all(|x| !ix.iter().all(|&v| g.adjacent(v as u64, x))));
        assert!(matches!(rep.spanning.witness(), Some(SpanningFailure::SearchExhausted { step, .. }) if step % 2 == 1));
        assert!(rep.refinement.is_fails());
        assert!(rep.consistent);
    }

    #[test]
    fn bernoulli_evidence_holds() {
        let g = GraphOracle::bernoulli(3, Ratio::HALF);
        let rep = filter_nontrivial_iff_spanning(&g, 3, 1 << 12, 200, 1_000_000).unwrap();
        assert!(rep.nontrivial.holds_or_evidence());
        assert!(rep.spanning.is_holds());
        assert!(rep.refinement.holds_or_evidence());
        assert!(rep.consistent);
    }
}
