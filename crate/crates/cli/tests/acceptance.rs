//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the pass/fail lines always reach
//! stdout. Expected values are recomputed here by brute force where they
//! are derived rather than taken from the library under test.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use filtop::actions::{mekler_filter_check, mekler_topology_check, ActionOracle, MeklerParams, Moiety};
use filtop::fraisse::{classes_with_members, extension_property_audit, generic_poset_stage, InflatedPreorder};
use filtop::group::named;
use filtop::oracle::{bitrado_closed_form, extension_witness, sample_nonadjacent_pairs, ColouredCompleteOracle, GraphOracle, Ratio};
use filtop::rado::chain::verify_strictness_witness;
use filtop::rado::{closed_open_equivalence_check, filter_chain, run_spanning_embedding, verify_embedding};
use filtop::sets::{base_is_nontrivial, filter_contains, SetBody};
use filtop::topology::{
    dense_open_filter, discrete_complement_filter, enumerate_preorders, enumerate_topologies, invariant_topologies,
    is_relational, preorder_to_topology, separation_graph, topology_to_preorder, WindowModel,
};
use filtop::{FiniteTopology, OmegaSet, Universe};

type Check = Result<String, String>;

/// Name, optional runtime limit in seconds, and the check itself.
type Criterion = (&'static str, Option<u64>, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: filtop::Error) -> String {
    e.to_string()
}

/// Reflexive transitive relations on `n` points, by trying every relation.
fn brute_force_preorder_count(n: usize) -> usize {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    (0u32..1 << off.len())
        .filter(|mask| {
            let rel = |a: usize, b: usize| a == b || off.iter().position(|&p| p == (a, b)).is_some_and(|i| mask >> i & 1 == 1);
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(rel(a, b) && rel(b, c)) || rel(a, c))))
        })
        .count()
}

fn c1_duality() -> Check {
    let mut counts = Vec::new();
    for n in 0..=4 {
        let pre = enumerate_preorders(n).map_err(err)?;
        ensure(pre.len() == brute_force_preorder_count(n), || format!("n={n}: {} preorders", pre.len()))?;
        for p in &pre {
            let t = preorder_to_topology(p).map_err(err)?;
            ensure(topology_to_preorder(&t) == *p, || format!("round trip broke {}", p.to_matrix_text()))?;
            ensure(is_relational(&t), || format!("topology {:?} not relational", t.open_lists()))?;
        }
        let tops = enumerate_topologies(n).map_err(err)?;
        ensure(tops.len() == pre.len(), || format!("n={n}: {} topologies", tops.len()))?;
        ensure(tops.iter().all(is_relational), || format!("n={n}: non-relational topology"))?;
        counts.push(pre.len());
    }
    ensure(counts == [1, 1, 4, 29, 355], || format!("counts {counts:?}"))?;
    Ok(format!("counts {counts:?}"))
}

fn c2_groups() -> Check {
    let corpus = named::transitive_corpus();
    ensure(corpus.len() >= 10, || format!("corpus has {} groups", corpus.len()))?;
    let (mut prim, mut imprim) = (0, 0);
    for (name, g) in &corpus {
        ensure(g.is_transitive() && g.degree() <= 6, || format!("{name} not transitive of degree <= 6"))?;
        let primitive = g.is_primitive();
        let strongly = g.is_strongly_primitive().map_err(err)?;
        ensure(primitive == strongly, || format!("{name}: primitive={primitive} strongly={strongly}"))?;
        let inventory = invariant_topologies(g).map_err(err)?;
        if primitive {
            prim += 1;
            ensure(inventory.iter().all(|t| t.trivial), || format!("{name}: primitive with a non-trivial invariant topology"))?;
        } else {
            imprim += 1;
            let blocks = g.nontrivial_block_system().ok_or(format!("{name}: imprimitive without blocks"))?;
            let block_top = FiniteTopology::from_partition(g.degree(), &blocks.blocks).map_err(err)?;
            let found = inventory.iter().find(|t| t.topology == block_top);
            ensure(found.is_some_and(|t| !t.trivial && !t.separation.t0), || {
                format!("{name}: block topology missing or T0")
            })?;
        }
    }
    Ok(format!("{} groups, {prim} primitive, {imprim} imprimitive", corpus.len()))
}

fn c3_bitrado_extension() -> Check {
    let g = GraphOracle::BitRado;
    let bit = |z: u64, i: u64| z >> i & 1 == 1;
    let mut checked = 0;
    for code in 0..3u32.pow(8) {
        let (mut u, mut w) = (Vec::new(), Vec::new());
        let mut c = code;
        for x in 0..8u64 {
            match c % 3 {
                1 => u.push(x),
                2 => w.push(x),
                _ => {}
            }
            c /= 3;
        }
        let us = OmegaSet::finite(Universe::Countable, u.iter().copied()).map_err(err)?;
        let ws = OmegaSet::finite(Universe::Countable, w.iter().copied()).map_err(err)?;
        let z = extension_witness(&g, &us, &ws, 1 << 20).map_err(err)?.ok_or(format!("no witness for {u:?} {w:?}"))?;
        ensure(u.iter().all(|&x| g.adjacent(x, z)) && w.iter().all(|&x| x != z && !g.adjacent(x, z)), || {
            format!("bad witness {z} for {u:?} {w:?}")
        })?;
        let cf = bitrado_closed_form(&u, &w).ok_or("closed form overflow")?;
        // above every listed vertex, so adjacency is bit membership
        let top = u.iter().chain(&w).max().copied();
        ensure(top.is_none_or(|m| cf > m), || format!("closed form {cf} not above {u:?} {w:?}"))?;
        ensure(u.iter().all(|&x| bit(cf, x)) && w.iter().all(|&x| !bit(cf, x)), || {
            format!("closed form {cf} fails bit check for {u:?} {w:?}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} assignments"))
}

fn c4_embedding() -> Check {
    let mut out = Vec::new();
    for seed in 1..=5 {
        let g = GraphOracle::bernoulli(seed, Ratio::HALF);
        let e = run_spanning_embedding(&g, 200, 1_000_000).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(verify_embedding(&e, &g).is_holds(), || format!("seed {seed}: embedding defect"))?;
        ensure((0..100).all(|v| e.is_hit(v)), || format!("seed {seed}: hit prefix {}", e.hit_prefix()))?;
        out.push(e.hit_prefix());
    }
    Ok(format!("hit prefixes {out:?}"))
}

fn c5_chain() -> Check {
    let r = filter_chain(3, 7, 50, 4, 100_000).map_err(err)?;
    let c = ColouredCompleteOracle::new(7, 3).map_err(err)?;
    ensure(r.levels.len() == 2, || format!("{} levels for k=3", r.levels.len()))?;
    for l in &r.levels {
        ensure(l.pointwise_inclusion.holds_or_evidence(), || format!("level {}: {:?}", l.level, l.pointwise_inclusion))?;
        ensure(l.trials.len() == 50 && l.failed_trials == 0, || format!("level {}: {} failed", l.level, l.failed_trials))?;
        for t in &l.trials {
            ensure(t.ws.len() <= 4, || "too many w-vertices".into())?;
            let x = t.witness.ok_or("missing witness")?;
            ensure(verify_strictness_witness(&c, l.new_colour, t.v, &t.ws, x), || format!("witness {x} does not re-verify"))?;
        }
    }
    let r4 = filter_chain(4, 7, 50, 4, 100_000).map_err(err)?;
    ensure(r4.levels.len() == 3 && r4.all_strict() && r4.all_inclusions_hold(), || "k=4 chain not strict".into())?;
    Ok("k=3: 2x50 witnesses, k=4: 3 strict levels".into())
}

fn c6_mekler() -> Check {
    let p = MeklerParams {
        max_word_len: 4,
        max_n: 4,
        window: 10_000,
        inf_threshold: 100,
    };
    let shift = ActionOracle::from_descriptor("shift").map_err(err)?;
    let even = Moiety::from_descriptor("even").map_err(err)?;
    let topo = mekler_topology_check(&even, &shift, p).map_err(err)?;
    ensure(topo.verdict.holds_or_evidence(), || format!("even/topology: {:?}", topo.verdict))?;
    let filt = mekler_filter_check(&even, &shift, p).map_err(err)?;
    let w = filt.verdict.witness().ok_or(format!("even/filter: {:?}", filt.verdict))?;
    ensure(w.words.iter().any(|s| s == "shift(1)") && w.members.is_empty(), || format!("witness {w:?}"))?;
    let nonneg = Moiety::from_descriptor("nonneg").map_err(err)?;
    let nn = mekler_filter_check(&nonneg, &shift, p).map_err(err)?;
    ensure(nn.verdict.holds_or_evidence(), || format!("nonneg/filter: {:?}", nn.verdict))?;
    Ok(format!("witness words {:?}", w.words))
}

fn c7_closed_open() -> Check {
    let window = 1 << 12;
    for g in [GraphOracle::BitRado, GraphOracle::bernoulli(2, Ratio::HALF)] {
        let pairs = sample_nonadjacent_pairs(&g, 100, window, 0).map_err(err)?;
        ensure(pairs.len() == 100, || "short sample".into())?;
        let v = closed_open_equivalence_check(&g, &pairs, window).map_err(err)?;
        ensure(v.holds_or_evidence(), || format!("{}: {v:?}", g.describe()))?;
        // brute force over the window
        for &(a, b) in &pairs {
            let bad = (0..window).find(|&x| (x == a || g.adjacent(a, x)) && (x == b || g.adjacent(b, x)) && !g.adjacent(a, x));
            ensure(bad.is_none(), || format!("{}: ({a},{b}) at {bad:?}", g.describe()))?;
        }
    }
    Ok("200 pairs".into())
}

fn c8_filters() -> Check {
    let mut total = 0;
    for n in 1..=4 {
        for t in enumerate_topologies(n).map_err(err)? {
            let dense = dense_open_filter(&t);
            ensure(base_is_nontrivial(&dense, 4, n as u64).map_err(err)?.is_holds(), || {
                format!("dense filter trivial on {:?}", t.open_lists())
            })?;
            let disc = discrete_complement_filter(&t);
            ensure(base_is_nontrivial(&disc, 4, n as u64).map_err(err)?.is_fails(), || {
                format!("discrete-complement filter proper on {:?}", t.open_lists())
            })?;
            total += 1;
        }
    }
    let window = 10_000;
    let expected = OmegaSet::cofinite(Universe::Countable, 0..window).map_err(err)?;
    for (label, base) in [
        ("dense", WindowModel::Cofinite.dense_open_filter(window)),
        ("discrete", WindowModel::Cofinite.discrete_complement_filter(window)),
    ] {
        ensure(base.generators().iter().all(|g| matches!(g.body(), SetBody::Cofinite(_))), || {
            format!("{label}: non-cofinite generator")
        })?;
        ensure(base.core().map_err(err)? == expected, || format!("{label}: core differs"))?;
        let cof = OmegaSet::cofinite(Universe::Countable, [3, 17, 9_999]).map_err(err)?;
        ensure(filter_contains(&base, &cof).map_err(err)?.is_holds(), || format!("{label}: misses a cofinite set"))?;
        let fin = OmegaSet::finite(Universe::Countable, 0..window + 10).map_err(err)?;
        ensure(filter_contains(&base, &fin).map_err(err)?.is_fails(), || format!("{label}: contains a finite set"))?;
    }
    Ok(format!("{total} topologies, cofinite model at window {window}"))
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for x in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..=p.len() {
                let mut q: Vec<Vec<usize>> = p.clone();
                if i == q.len() {
                    q.push(vec![x]);
                } else {
                    q[i].push(x);
                }
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn c9_separation() -> Check {
    let mut checked = 0;
    for n in 1..=8 {
        for blocks in set_partitions(n) {
            let t = FiniteTopology::from_partition(n, &blocks).map_err(err)?;
            let g = separation_graph(&t);
            let parts = g.complete_multipartite_partition().ok_or(format!("{blocks:?}: not multipartite"))?;
            let a: BTreeSet<Vec<usize>> = parts.into_iter().collect();
            let b: BTreeSet<Vec<usize>> = blocks.iter().cloned().collect();
            ensure(a == b, || format!("{blocks:?}: parts {a:?}"))?;
            checked += 1;
        }
        ensure(separation_graph(&FiniteTopology::discrete(n).map_err(err)?).is_complete(), || format!("discrete n={n}"))?;
        ensure(separation_graph(&FiniteTopology::indiscrete(n).map_err(err)?).is_edgeless(), || format!("indiscrete n={n}"))?;
    }
    Ok(format!("{checked} partition topologies"))
}

fn c10_fraisse() -> Check {
    let classes = classes_with_members(10_000, 50);
    ensure(classes >= 50, || format!("{classes} large classes"))?;
    let p = generic_poset_stage(3, 2).map_err(err)?;
    for k in [1, 2] {
        let v = extension_property_audit(&p, k);
        ensure(v.is_holds(), || format!("config size {k}: {v:?}"))?;
    }
    let inflated = InflatedPreorder::new(p);
    for w in [12, 50, 200] {
        let pre = inflated.materialize(w).map_err(err)?;
        ensure(pre.len() == w as usize && pre.is_reflexive() && pre.is_transitive(), || format!("W={w}"))?;
    }
    Ok(format!("{classes} classes with >= 50 members"))
}

const CLI_RUNS: &[&[&str]] = &[
    &["topo", "roundtrip", "--n", "4"],
    &["topo", "filters", "--topology", "3; 0; 0,1"],
    &["group", "--degree", "4", "--gens", "(0 1 2 3)"],
    &["group", "--degree", "3", "--gens", "(0 1 2),(0 1)"],
    &["rado", "extension", "--u", "0,1", "--w", "2", "--graph", "bitrado"],
    &["rado", "embed", "--graph", "bernoulli:seed=1,p=1/2", "--steps", "200", "--bound", "1000000"],
    &["rado", "chain", "--colours", "3", "--seed", "7", "--trials", "50", "--window", "100000"],
    &["rado", "nbhd", "--graph", "bernoulli:seed=2,p=1/2", "--pairs", "20", "--seed", "5"],
    &["rado", "spanning", "--graph", "bernoulli:seed=3,p=1/2"],
    &["rado", "spanning", "--graph", "bitrado", "--steps", "40"],
    &["mekler", "--action", "shift", "--moiety", "even", "--mode", "filter"],
    &["mekler", "--action", "neg-shift", "--moiety", "nonneg", "--mode", "topology", "--max-word-len", "3", "--max-n", "2"],
    &["poset", "--stages", "3", "--max-config", "2", "--config-size", "2", "--window", "200"],
    &["partition"],
];

fn deterministic_sections(args: &[&str]) -> Result<(String, Option<i32>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_filtop"))
        .args(args)
        .env_remove("FILTOP_WINDOW")
        .env_remove("FILTOP_BOUND")
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    if stdout.trim().is_empty() {
        return Ok((stderr.into_owned(), out.status.code()));
    }
    let mut v: serde_json::Value = serde_json::from_str(&stdout).map_err(|e| format!("{args:?}: {e}"))?;
    let m = v.as_object_mut().ok_or("report is not an object")?;
    m.remove("wall_time_ms").ok_or("report lacks wall_time_ms")?;
    Ok((serde_json::to_string(&v).expect("json"), out.status.code()))
}

fn c11_determinism() -> Check {
    for args in CLI_RUNS {
        let a = deterministic_sections(args)?;
        let b = deterministic_sections(args)?;
        ensure(a == b, || format!("{args:?} differs between runs"))?;
        ensure(matches!(a.1, Some(0..=3)), || format!("{args:?}: exit {:?}", a.1))?;
    }
    Ok(format!("{} commands", CLI_RUNS.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 duality counts and round trips", Some(60), c1_duality),
        ("2 primitive iff strongly primitive over transitive corpus", None, c2_groups),
        ("3 BitRado extension property on 3^8 assignments", Some(5), c3_bitrado_extension),
        ("4 going-forth spanning embedding, seeds 1..5", Some(30), c4_embedding),
        ("5 strict filter chains for k=3 and k=4", None, c5_chain),
        ("6 translate conditions for shift on even and nonneg", None, c6_mekler),
        ("7 closed/open neighbourhood equivalence", None, c7_closed_open),
        ("8 dense-open and discrete-complement filters", None, c8_filters),
        ("9 separation graphs of partition topologies", None, c9_separation),
        ("10 partition oracle, generic poset, inflated preorder", None, c10_fraisse),
        ("11 CLI determinism", None, c11_determinism),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let mut result = f();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&result, limit) {
            if elapsed > Duration::from_secs(secs) {
                result = Err(format!("took {elapsed:.1?}, limit {secs}s"));
            }
        }
        match result {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
