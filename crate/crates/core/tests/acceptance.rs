//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints its verdict line; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use posetmc::clique::{
    build_colored_graph, clique_max, clique_min, clique_table, embed_via_clique,
    embed_via_clique_counted, is_interval_monotone, solve_multicolored_clique, ColoredGraph,
    Vertex,
};
use posetmc::csp::{build_csp, embed_via_csp, embed_via_csp_counted, relation_is_min_closed};
use posetmc::embedding::{CompatibilityFunctions, EmbeddingHost};
use posetmc::generators::{
    bench_instance, independent_poset, or_compose, poset_of_graph, random_graph, random_poset,
    stack_posets,
};
use posetmc::oracle::{
    brute_force_clique, brute_force_embed, brute_force_model_check, brute_force_prefix_cliques,
    brute_force_width, coordinatewise, OracleCaps,
};
use posetmc::reduction::enumerate_templates;
use posetmc::{dilworth, model_check, parse, Poset, SolveStats, SolverKind};
use rand::seq::SliceRandom;
use rand::Rng;

use common::{compat, has_independent_set, host, loglog_slope, pattern, rng, sentence_text, width};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Pattern/host pairs shared by several criteria.
fn corpus() -> Vec<(Poset, Poset)> {
    let mut r = rng(0xC0FFEE);
    (0..500)
        .map(|_| (pattern(&mut r, 4), host(&mut r, 12, 4)))
        .collect()
}

/// The graphs the clique engine builds while solving `(q, p)`, in order.
fn solver_graphs(q: &Poset, p: &Poset) -> Vec<ColoredGraph> {
    let h = EmbeddingHost::new(p).unwrap();
    let mut out = Vec::new();
    for f in CompatibilityFunctions::new(q.len(), h.width()) {
        let g = build_colored_graph(q, &h, &f, &mut SolveStats::default());
        let done = solve_multicolored_clique(&g).is_some();
        out.push(g);
        if done {
            break;
        }
    }
    out
}

fn criterion_1(corpus: &[(Poset, Poset)]) -> Verdict {
    let start = Instant::now();
    let caps = OracleCaps::default();
    let mut agree = 0;
    let mut yes = 0;
    for (q, p) in corpus {
        let h = EmbeddingHost::new(p).unwrap();
        let brute = brute_force_embed(q, p, &caps).unwrap().is_some();
        let csp = embed_via_csp(q, &h).is_some();
        let clique = embed_via_clique(q, &h).is_some();
        if brute == csp && csp == clique {
            agree += 1;
        }
        yes += brute as usize;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        agree == corpus.len() && secs < 60.0,
        format!(
            "{agree}/{} pairs agree ({yes} YES), {secs:.1}s",
            corpus.len()
        ),
    )
}

fn criterion_2() -> Verdict {
    let mut r = rng(2);
    let caps = OracleCaps::default();
    let (mut cases, mut agree) = (0, 0);
    let mut holds = 0;
    for _ in 0..240 {
        let s = parse(&sentence_text(&mut r, 3, 4)).expect("generated sentence parses");
        let p = random_poset(r.gen_range(1..=8), r.gen_range(0.0..0.8), r.gen());
        let truth = brute_force_model_check(&s, &p, &caps).unwrap();
        holds += truth as usize;
        for solver in SolverKind::ALL {
            cases += 1;
            if model_check(&s, &p, solver).unwrap().holds == truth {
                agree += 1;
            }
        }
    }
    verdict(
        agree == cases,
        format!("{agree}/{cases} checks agree over 240 sentence/poset pairs ({holds} true)"),
    )
}

fn criterion_3() -> Verdict {
    let mut r = rng(3);
    let (mut relations, mut failures) = (0, 0);
    for _ in 0..150 {
        let q = pattern(&mut r, 4);
        let p = host(&mut r, 12, 4);
        let h = EmbeddingHost::new(&p).unwrap();
        let f = compat(&mut r, q.len(), h.width());
        let inst = build_csp(&q, &h, &f, &mut SolveStats::default());
        for c in &inst.constraints {
            relations += 1;
            failures += !relation_is_min_closed(c) as usize;
        }
    }
    verdict(
        failures == 0,
        format!("150 instances, {relations} relations, {failures} not min-closed"),
    )
}

fn criterion_4(corpus: &[(Poset, Poset)]) -> Verdict {
    let (mut graphs, mut failures) = (0, 0);
    for (q, p) in corpus {
        for g in solver_graphs(q, p) {
            graphs += 1;
            failures += !is_interval_monotone(&g) as usize;
        }
    }
    let v = Vertex::new;
    let hole =
        ColoredGraph::from_edges(&[1, 3], &[(v(0, 0), v(1, 0)), (v(0, 0), v(1, 2))]).unwrap();
    let crossing =
        ColoredGraph::from_edges(&[2, 2], &[(v(0, 0), v(1, 1)), (v(0, 1), v(1, 0))]).unwrap();
    let counterexamples_fail = !is_interval_monotone(&hole) && !is_interval_monotone(&crossing);
    verdict(
        failures == 0 && counterexamples_fail,
        format!(
            "{graphs} built graphs, {failures} failures; hand-built counterexamples rejected: {counterexamples_fail}"
        ),
    )
}

/// Every full clique of `g`, as vertex lists.
fn all_cliques(g: &ColoredGraph) -> Vec<Vec<Vertex>> {
    let k = g.k();
    (0..g.class_len(k - 1))
        .flat_map(|v| brute_force_prefix_cliques(g, k - 1, v))
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(i, &pos)| Vertex::new(i, pos))
                .collect()
        })
        .collect()
}

fn criterion_5(corpus: &[(Poset, Poset)]) -> Verdict {
    let mut r = rng(5);
    let (mut pairs, mut failures) = (0, 0);
    for (q, p) in corpus {
        if pairs >= 400 {
            break;
        }
        for g in solver_graphs(q, p) {
            let cliques = all_cliques(&g);
            if cliques.len() < 2 {
                continue;
            }
            let classes: Vec<usize> = (0..g.k()).collect();
            for _ in 0..4 {
                let pair: Vec<Vec<Vertex>> = cliques.choose_multiple(&mut r, 2).cloned().collect();
                pairs += 1;
                let lo = clique_min(&pair, &classes, &g);
                let hi = clique_max(&pair, &classes, &g);
                let ok = matches!((&lo, &hi), (Ok(a), Ok(b)) if g.is_clique(a) && g.is_clique(b));
                failures += !ok as usize;
            }
        }
    }
    verdict(
        pairs >= 200 && failures == 0,
        format!("{pairs} clique pairs sampled, {failures} extremes not cliques"),
    )
}

fn criterion_6() -> Verdict {
    let mut r = rng(6);
    let (mut graphs, mut entries, mut mismatches) = (0, 0, 0);
    while graphs < 120 {
        let q = pattern(&mut r, 4);
        let p = host(&mut r, 24, 3);
        let h = EmbeddingHost::new(&p).unwrap();
        let f = compat(&mut r, q.len(), h.width());
        let g = build_colored_graph(&q, &h, &f, &mut SolveStats::default());
        let product: usize = (0..g.k()).map(|i| g.class_len(i)).product();
        if product > 10_000 {
            continue;
        }
        graphs += 1;
        let table = clique_table(&g, &mut SolveStats::default());
        for i in 0..g.k() {
            for v in 0..g.class_len(i) {
                entries += 1;
                let cliques = brute_force_prefix_cliques(&g, i, v);
                let want_min = coordinatewise(&cliques, usize::min);
                let want_max = coordinatewise(&cliques, usize::max);
                if table.min_k[i][v] != want_min || table.max_k[i][v] != want_max {
                    mismatches += 1;
                }
            }
        }
    }
    verdict(
        mismatches == 0,
        format!("{graphs} graphs, {entries} table entries, {mismatches} mismatches"),
    )
}

fn criterion_7() -> Verdict {
    let mut r = rng(7);
    let caps = OracleCaps::default();
    let mut posets: Vec<Poset> = (1..=12)
        .flat_map(|n| [Poset::chain(n), Poset::antichain(n)])
        .collect();
    posets.extend((1..=4).map(independent_poset));
    posets.extend(
        (0..400).map(|_| random_poset(r.gen_range(1..=12), r.gen_range(0.0..=1.0), r.gen())),
    );
    let mut failures = 0;
    for p in &posets {
        let cert = dilworth(p).unwrap();
        let truth = brute_force_width(p, &caps).unwrap();
        let (w, partition) = posetmc::width_and_chain_partition(p).unwrap();
        if w != truth || partition.len() != truth || !cert.verify(p) {
            failures += 1;
        }
    }
    verdict(
        failures == 0,
        format!("{} posets, {failures} failures", posets.len()),
    )
}

fn criterion_8() -> Verdict {
    let mut r = rng(8);
    let caps = OracleCaps {
        pattern: 9,
        host: 24,
        ..OracleCaps::default()
    };
    let (mut cases, mut agree) = (0, 0);
    for i in 0..120 {
        let g = random_graph(r.gen_range(1..=8), r.gen_range(0.1..0.9), 800 + i);
        let p = poset_of_graph(&g);
        for k in 1..=3 {
            cases += 1;
            let embeds = brute_force_embed(&independent_poset(k), &p, &caps)
                .unwrap()
                .is_some();
            if embeds == has_independent_set(&g, k) {
                agree += 1;
            }
        }
    }
    verdict(
        agree == cases,
        format!("{agree}/{cases} (graph, k) cases agree"),
    )
}

fn criterion_9() -> Verdict {
    let mut r = rng(9);
    let (mut lists, mut or_ok, mut width_ok) = (0, 0, 0);
    let mut composed_yes = 0;
    for _ in 0..60 {
        let count = r.gen_range(2..=4);
        let instances: Vec<(Poset, usize)> = (0..count)
            .map(|_| (host(&mut r, 7, 3), r.gen_range(1..=2)))
            .collect();
        let any = instances.iter().any(|(p, k)| {
            let h = EmbeddingHost::new(p).unwrap();
            embed_via_clique(&independent_poset(*k), &h).is_some()
        });
        let comp = or_compose(&instances);
        let h = EmbeddingHost::new(&comp.poset).unwrap();
        let combined = embed_via_clique(&independent_poset(comp.k), &h).is_some();
        lists += 1;
        composed_yes += combined as usize;
        or_ok += (combined == any) as usize;
        let max_width = comp.padded.iter().map(width).max().unwrap();
        width_ok += (width(&stack_posets(&comp.padded)) == max_width) as usize;
    }
    verdict(
        or_ok == lists && width_ok == lists,
        format!("{lists} lists ({composed_yes} YES): OR property {or_ok}/{lists}, stacked width {width_ok}/{lists}"),
    )
}

/// Hosts of exactly the requested width, resampling seeds in order.
fn scaling_instance(n: usize, index: u64) -> (Poset, Poset) {
    (0..)
        .map(|attempt| bench_instance(3, n, 3, index * 1_000 + attempt))
        .find(|(_, p)| width(p) == 3)
        .unwrap()
}

fn total_ops(sizes: &[usize], reps: u64, solver: SolverKind) -> Vec<f64> {
    sizes
        .iter()
        .map(|&n| {
            let mut stats = SolveStats::default();
            for i in 0..reps {
                let (q, p) = scaling_instance(n, i);
                let h = EmbeddingHost::new(&p).unwrap();
                match solver {
                    SolverKind::Csp => embed_via_csp_counted(&q, &h, &mut stats),
                    _ => embed_via_clique_counted(&q, &h, &mut stats),
                };
            }
            stats.ops as f64
        })
        .collect()
}

fn criterion_10(suite_start: Instant) -> Verdict {
    const REPS: u64 = 8;
    let large = [200, 400, 800, 1600, 3200];
    let small = [50, 100, 200, 400];
    let xs = |s: &[usize]| s.iter().map(|&n| n as f64).collect::<Vec<_>>();
    let clique_large = loglog_slope(&xs(&large), &total_ops(&large, REPS, SolverKind::Clique));
    let clique_small = loglog_slope(&xs(&small), &total_ops(&small, REPS, SolverKind::Clique));
    let csp_small = loglog_slope(&xs(&small), &total_ops(&small, REPS, SolverKind::Csp));
    let elapsed = suite_start.elapsed();
    verdict(
        (1.5..=2.8).contains(&clique_large) && csp_small > clique_small && elapsed <= Duration::from_secs(300),
        format!(
            "clique slope {clique_large:.3} on 200..3200; on 50..400 csp {csp_small:.3} vs clique {clique_small:.3}; suite {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// Labelled partial orders (q > 0) or preorders, by brute force over all
/// relations on `q` points.
fn count_relations(q: usize, antisymmetric: bool) -> usize {
    let cells = q * q;
    (0u32..1 << cells)
        .filter(|&m| {
            let r = |a: usize, b: usize| m >> (a * q + b) & 1 == 1;
            (0..q).all(|a| r(a, a))
                && (0..q).all(|a| (0..q).all(|b| !antisymmetric || a == b || !(r(a, b) && r(b, a))))
                && (0..q).all(|a| (0..q).all(|b| (0..q).all(|c| !(r(a, b) && r(b, c)) || r(a, c))))
        })
        .count()
}

fn criterion_11() -> Verdict {
    let distinct = |q: usize| {
        let names: Vec<String> = (0..q).map(|i| format!("v{i}")).collect();
        let mut lits = vec![];
        for a in 0..q {
            for b in a + 1..q {
                lits.push(format!("!({} = {})", names[a], names[b]));
            }
        }
        let prefix: String = names.iter().map(|n| format!("E {n}. ")).collect();
        parse(&format!("{prefix}{}", lits.join(" & "))).unwrap()
    };
    let free = |q: usize| {
        let prefix: String = (0..q).map(|i| format!("E v{i}. ")).collect();
        parse(&format!("{prefix}v0 <= v0")).unwrap()
    };
    let count = |s| enumerate_templates(&s).unwrap().len();
    let (two, three) = (count(distinct(2)), count(distinct(3)));
    let exact = two == count_relations(2, true)
        && three == count_relations(3, true)
        && (two, three) == (3, 19);
    let free_counts: Vec<usize> = (1..=4).map(|q| count(free(q))).collect();
    let free_match = (1..=3).all(|q| free_counts[q - 1] == count_relations(q, false));
    let bounded = free_counts
        .iter()
        .enumerate()
        .all(|(i, &c)| (c as f64) < 4f64.powi(((i + 1) * (i + 1)) as i32));
    verdict(
        exact && free_match && bounded,
        format!("distinct q=2: {two}, q=3: {three}; unconstrained q=1..4: {free_counts:?}, below 4^(q*q): {bounded}"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = corpus();
    let hosts: BTreeSet<usize> = corpus.iter().map(|(_, p)| width(p)).collect();
    println!("corpus: {} pairs, host widths {hosts:?}", corpus.len());

    let mut results: Vec<(usize, Verdict)> = vec![
        (1, criterion_1(&corpus)),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4(&corpus)),
        (5, criterion_5(&corpus)),
        (6, criterion_6()),
        (7, criterion_7()),
        (8, criterion_8()),
        (9, criterion_9()),
        (11, criterion_11()),
    ];
    results.push((10, criterion_10(start)));
    results.sort_by_key(|(n, _)| *n);

    // Sanity: the clique oracle agrees with the solver on one built graph.
    let (q, p) = &corpus[0];
    let g = &solver_graphs(q, p)[0];
    assert_eq!(
        brute_force_clique(g, &OracleCaps::default())
            .unwrap()
            .is_some(),
        solve_multicolored_clique(g).is_some()
    );

    let mut failed = 0;
    for (n, v) in &results {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {tag}  {}", v.detail);
        failed += !v.pass as usize;
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
