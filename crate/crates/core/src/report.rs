//! Machine-readable run reports and the commands behind the CLI.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::actions::{mekler_filter_check, mekler_topology_check, ActionOracle, MeklerMode, MeklerParams, Moiety};
use crate::error::Result;
use crate::fraisse::{self, InflatedPreorder, StagedPoset};
use crate::group::PermGroup;
use crate::oracle::{self, neighbourhood_window, GraphOracle};
use crate::rado::{self, PartialEmbedding};
use crate::sets::{base_is_nontrivial, OmegaSet, TriState};
use crate::topology::{self, FiniteTopology};

/// A named check outcome; witnesses are stored as JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    #[serde(flatten)]
    pub outcome: TriState<Value>,
}

impl NamedVerdict {
    pub fn new<W: Serialize>(name: &str, outcome: TriState<W>) -> Self {
        NamedVerdict {
            name: name.to_string(),
            outcome: outcome.map_witness(|w| serde_json::to_value(w).expect("witnesses serialize")),
        }
    }

    pub fn flag(name: &str, ok: bool, witness: Value) -> Self {
        NamedVerdict {
            name: name.to_string(),
            outcome: if ok { TriState::Holds } else { TriState::fails(witness) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub verdicts: Vec<NamedVerdict>,
    pub witnesses: Value,
    pub wall_time_ms: u64,
}

impl RunReport {
    fn new(name: &str, parameters: Value) -> Self {
        RunReport {
            command: vec![name.to_string()],
            parameters: match parameters {
                Value::Object(m) => m,
                _ => Map::new(),
            },
            seed: None,
            verdicts: Vec::new(),
            witnesses: Value::Object(Map::new()),
            wall_time_ms: 0,
        }
    }

    fn push(&mut self, v: NamedVerdict) {
        self.verdicts.push(v);
    }

    fn witness(&mut self, key: &str, value: impl Serialize) {
        if let Value::Object(m) = &mut self.witnesses {
            m.insert(key.to_string(), serde_json::to_value(value).expect("witnesses serialize"));
        }
    }

    pub fn any_fails(&self) -> bool {
        self.verdicts.iter().any(|v| v.outcome.is_fails())
    }

    /// 0 when nothing fails, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.any_fails())
    }

    /// Everything except the wall time, for determinism comparisons.
    pub fn deterministic_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("wall_time_ms");
        }
        v
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn timed(f: impl FnOnce() -> Result<RunReport>) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = f()?;
    r.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

/// Enumerates preorders on `n` points and round-trips each through its
/// topology, and each enumerated topology through its preorder.
pub fn cmd_topo_roundtrip(n: usize) -> Result<RunReport> {
    timed(|| {
        let preorders = topology::enumerate_preorders(n)?;
        let topologies = topology::enumerate_topologies(n)?;
        let mut r = RunReport::new("topo-roundtrip", json!({ "n": n }));
        let bad_pre = preorders
            .iter()
            .find(|p| topology::topology_to_preorder(&topology::preorder_to_topology(p).expect("n is small")) != **p);
        r.push(NamedVerdict::flag(
            "preorder-round-trip",
            bad_pre.is_none(),
            json!(bad_pre.map(|p| p.to_matrix_text())),
        ));
        let bad_top = topologies.iter().find(|t| !topology::is_relational(t));
        r.push(NamedVerdict::flag(
            "every-topology-relational",
            bad_top.is_none(),
            json!(bad_top.map(FiniteTopology::open_lists)),
        ));
        r.push(NamedVerdict::flag(
            "counts-agree",
            preorders.len() == topologies.len(),
            json!({ "preorders": preorders.len(), "topologies": topologies.len() }),
        ));
        r.witness("preorders", preorders.len());
        r.witness("topologies", topologies.len());
        Ok(r)
    })
}

/// Transitivity, primitivity, strong primitivity and the invariant
/// topology inventory of the group generated by `generators`.
pub fn cmd_group_analyze(degree: usize, generators: &str) -> Result<RunReport> {
    timed(|| {
        let g = PermGroup::parse(degree, generators)?;
        let mut r = RunReport::new("group-analyze", json!({ "degree": degree, "generators": generators }));
        let transitive = g.is_transitive();
        let primitive = g.is_primitive();
        let strongly = g.is_strongly_primitive()?;
        let blocks = g.nontrivial_block_system();
        let inventory = topology::invariant_topologies(&g)?;
        let nontrivial: Vec<_> = inventory.iter().filter(|t| !t.trivial).collect();

        r.witness("transitive", transitive);
        r.witness("primitive", primitive);
        r.witness("strongly_primitive", strongly);
        r.witness("order", g.order().ok());
        r.witness("block_system", &blocks);
        r.witness(
            "invariant_topologies",
            inventory
                .iter()
                .map(|t| {
                    json!({
                        "opens": t.topology.open_lists(),
                        "trivial": t.trivial,
                        "t0": t.separation.t0,
                        "t1": t.separation.t1,
                    })
                })
                .collect::<Vec<_>>(),
        );
        r.witness("nontrivial_invariant_topologies", nontrivial.len());

        // Δ = {0}: which pairs can be pulled apart by a group element
        let mut samples = Vec::new();
        if degree >= 2 {
            let delta = OmegaSet::finite(crate::sets::Universe::Finite(degree as u64), [0])?;
            for x in 0..degree.min(4) {
                for y in (0..degree.min(4)).filter(|&y| y != x) {
                    let w = g.separation_witness(&delta, x, y)?;
                    samples.push(json!({ "x": x, "y": y, "witness": w.map(|p| p.to_string()) }));
                }
            }
        }
        r.witness("separation_samples", samples);

        if transitive {
            r.push(NamedVerdict::flag(
                "primitive-iff-strongly-primitive",
                primitive == strongly,
                json!({ "primitive": primitive, "strongly_primitive": strongly }),
            ));
            r.push(NamedVerdict::flag(
                "nontrivial-invariant-topologies-are-not-t0",
                nontrivial.iter().all(|t| !t.separation.t0),
                json!(nontrivial.iter().find(|t| t.separation.t0).map(|t| t.topology.open_lists())),
            ));
        }
        Ok(r)
    })
}

/// Extension witness for `U`, `W` in a graph oracle.
pub fn cmd_rado_extension(graph: &str, u: &[u64], w: &[u64], bound: u64) -> Result<RunReport> {
    timed(|| {
        let g = GraphOracle::from_descriptor(graph)?;
        let uni = g.universe();
        let z = oracle::extension_witness(&g, &OmegaSet::finite(uni, u.iter().copied())?, &OmegaSet::finite(uni, w.iter().copied())?, bound)?;
        let mut r = RunReport::new("rado-extension", json!({ "graph": g.describe(), "u": u, "w": w, "bound": bound }));
        r.witness("z", z);
        r.push(NamedVerdict::flag("extension-witness-found", z.is_some(), json!({ "u": u, "w": w, "bound": bound })));
        if g == GraphOracle::BitRado {
            r.witness("closed_form", oracle::bitrado_closed_form(u, w));
        }
        Ok(r)
    })
}

/// Runs the forth-only construction; the embedding is returned for export.
pub fn cmd_rado_embed(graph: &str, steps: usize, bound: u64) -> Result<(RunReport, PartialEmbedding)> {
    let start = Instant::now();
    let g = GraphOracle::from_descriptor(graph)?;
    let e = rado::run_spanning_embedding(&g, steps, bound)?;
    let mut r = RunReport::new("rado-embed", json!({ "graph": g.describe(), "steps": steps, "bound": bound }));
    if let GraphOracle::Bernoulli { seed, .. } = g {
        r.seed = Some(seed);
    }
    r.push(NamedVerdict::new("embedding-verified", rado::verify_embedding(&e, &g)));
    let prefix = e.hit_prefix();
    r.push(NamedVerdict::flag(
        "prefix-covered",
        prefix >= (steps / 2) as u64,
        json!({ "hit_prefix": prefix, "expected": steps / 2 }),
    ));
    r.witness("placed", e.pairs().len());
    r.witness("hit_prefix", prefix);
    r.witness("used_prefix", e.used_prefix());
    r.witness("largest_source_bits", e.pairs().iter().map(|(s, _)| s.bits()).max());
    r.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok((r, e))
}

pub fn cmd_rado_chain(colours: u32, seed: u64, trials: usize, max_ws: usize, window: u64) -> Result<RunReport> {
    timed(|| {
        let c = rado::filter_chain(colours, seed, trials, max_ws, window)?;
        let mut r = RunReport::new(
            "rado-chain",
            json!({ "colours": colours, "trials": trials, "max_ws": max_ws, "window": window, "sample_vertices": c.parameters.sample_vertices }),
        );
        r.seed = Some(seed);
        for level in &c.levels {
            let l = level.level;
            r.push(NamedVerdict::new(&format!("level-{l}-pointwise-inclusion"), level.pointwise_inclusion.clone()));
            r.push(NamedVerdict::new(&format!("level-{l}-filter-refinement"), level.filter_refinement.clone()));
            let failed: Vec<_> = level.trials.iter().filter(|t| t.witness.is_none()).collect();
            r.push(NamedVerdict::flag(&format!("level-{l}-strictness"), failed.is_empty(), json!(failed)));
            r.push(NamedVerdict::new(&format!("level-{l}-extension-audit"), level.extension_audit.verdict.clone()));
        }
        r.witness("levels", &c.levels);
        Ok(r)
    })
}

/// Neighbourhood filter of the listed vertices plus the closed/open check on
/// sampled non-adjacent pairs.
pub fn cmd_rado_nbhd(graph: &str, vertices: &[u64], window: u64, depth: usize, pairs: usize, seed: u64) -> Result<RunReport> {
    timed(|| {
        let g = GraphOracle::from_descriptor(graph)?;
        let base = rado::neighbourhood_filter(&g, vertices, window);
        let mut r = RunReport::new(
            "rado-nbhd",
            json!({ "graph": g.describe(), "vertices": vertices, "window": window, "depth": depth, "pairs": pairs }),
        );
        r.seed = Some(seed);
        r.push(NamedVerdict::new("filter-nontrivial", base_is_nontrivial(&base, depth, window)?));
        let samples = if pairs == 0 {
            Vec::new()
        } else {
            oracle::sample_nonadjacent_pairs(&g, pairs, window, seed)?
        };
        r.push(NamedVerdict::new("closed-generate-open", rado::closed_open_equivalence_check(&g, &samples, window)?));
        r.witness(
            "neighbourhoods",
            vertices
                .iter()
                .map(|&v| json!({ "v": v, "first": neighbourhood_window(&g, v, window).members_below(window).into_iter().take(16).collect::<Vec<_>>() }))
                .collect::<Vec<_>>(),
        );
        r.witness("pairs", samples);
        Ok(r)
    })
}

/// The three conditions side by side.
pub fn cmd_rado_spanning(graph: &str, depth: usize, window: u64, steps: usize, bound: u64) -> Result<RunReport> {
    timed(|| {
        let g = GraphOracle::from_descriptor(graph)?;
        let rep = rado::filter_nontrivial_iff_spanning(&g, depth, window, steps, bound)?;
        let mut r = RunReport::new("rado-spanning", serde_json::to_value(&rep.parameters).expect("serializable"));
        r.push(NamedVerdict::new("a-filter-nontrivial", rep.nontrivial.clone()));
        r.push(NamedVerdict::new("b-spanning-copy-of-r", rep.spanning.clone()));
        r.push(NamedVerdict::new("c-filter-inside-r-filter", rep.refinement.clone()));
        r.witness("consistent", rep.consistent);
        r.witness("placed", rep.placed);
        r.witness("hit_prefix", rep.hit_prefix);
        r.witness("used_prefix", rep.used_prefix);
        Ok(r)
    })
}

pub fn cmd_mekler(action: &str, moiety: &str, mode: MeklerMode, params: MeklerParams) -> Result<RunReport> {
    timed(|| {
        let a = ActionOracle::from_descriptor(action)?;
        let m = Moiety::from_descriptor(moiety)?;
        let rep = match mode {
            MeklerMode::Topology => mekler_topology_check(&m, &a, params)?,
            MeklerMode::Filter => mekler_filter_check(&m, &a, params)?,
        };
        let mut r = RunReport::new(
            "mekler",
            json!({ "action": action, "moiety": m.describe(), "mode": mode, "max_word_len": params.max_word_len, "max_n": params.max_n, "window": params.window, "inf_threshold": params.inf_threshold }),
        );
        let name = match mode {
            MeklerMode::Topology => "empty-or-infinite",
            MeklerMode::Filter => "always-infinite",
        };
        r.push(NamedVerdict::new(name, rep.verdict.clone()));
        r.witness("elements", rep.elements);
        r.witness("distinct_translates", rep.distinct_translates);
        r.witness("subfamilies_checked", rep.subfamilies_checked);
        Ok(r)
    })
}

/// Generic poset prefix, its extension audit, and the inflated preorder's
/// window materialization. Returns the poset for export.
pub fn cmd_poset(stages: usize, max_config: usize, config_size: usize, window: u64) -> Result<(RunReport, StagedPoset)> {
    let start = Instant::now();
    let p = fraisse::generic_poset_stage(stages, max_config)?;
    let mut r = RunReport::new(
        "poset",
        json!({ "stages": stages, "max_config": max_config, "config_size": config_size, "window": window }),
    );
    r.push(NamedVerdict::new("extension-audit-first-stage", fraisse::extension_property_audit(&p, config_size)));
    if stages >= 2 {
        r.push(NamedVerdict::new(
            "extension-audit-penultimate-stage",
            fraisse::extension_audit_over(&p, config_size.min(max_config), stages - 1),
        ));
    }
    let inflated = InflatedPreorder::new(p.clone());
    if window > 0 {
        let pre = inflated.materialize(window)?;
        r.push(NamedVerdict::flag("inflated-window-is-preorder", pre.is_reflexive() && pre.is_transitive(), Value::Null));
    }
    r.witness("elements", p.len());
    r.witness("stage_ends", p.stage_ends());
    r.witness("max_window", inflated.max_window());
    r.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok((r, p))
}

/// Classes of the unpairing partition with at least `min_size` members.
pub fn cmd_partition(window: u64, min_size: u64, min_classes: usize) -> Result<RunReport> {
    timed(|| {
        let mut r = RunReport::new("partition", json!({ "window": window, "min_size": min_size, "min_classes": min_classes }));
        let classes = fraisse::classes_with_members(window, min_size);
        r.push(NamedVerdict::flag(
            "enough-large-classes",
            classes >= min_classes,
            json!({ "classes": classes }),
        ));
        r.witness("large_classes", classes);
        r.witness("class_0_prefix", fraisse::partition_window(0, window).members_below(window.min(100)));
        Ok(r)
    })
}

/// Filters attached to a finite topology given as `n; opens...`.
pub fn cmd_topo_filters(text: &str) -> Result<RunReport> {
    timed(|| {
        let (t, changed) = FiniteTopology::parse(text)?;
        let n = t.points() as u64;
        let mut r = RunReport::new("topo-filters", json!({ "topology": text, "closed_under_operations": changed }));
        let dense = topology::dense_open_filter(&t);
        let discrete = topology::discrete_complement_filter(&t);
        r.push(NamedVerdict::new("dense-open-filter-nontrivial", base_is_nontrivial(&dense, dense.generators().len().max(1), n)?));
        // on a finite space this filter always degenerates
        let degenerate = base_is_nontrivial(&discrete, discrete.generators().len().max(1), n)?;
        r.push(NamedVerdict::flag(
            "discrete-complement-filter-trivial",
            degenerate.is_fails(),
            json!({ "generators": discrete.generators().iter().map(|g| g.members_below(n)).collect::<Vec<_>>() }),
        ));
        let sep = topology::separation_class(&t);
        r.witness("opens", t.open_lists());
        r.witness("t0", sep.t0);
        r.witness("t1", sep.t1);
        r.witness("relational", topology::is_relational(&t));
        r.witness("separation_graph_parts", topology::separation_graph(&t).complete_multipartite_partition());
        Ok(r)
    })
}
