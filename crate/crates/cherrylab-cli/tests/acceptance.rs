//! Acceptance gate: ten end-to-end criteria covering exact budget
//! arithmetic, construction identities, extremal property suites, the
//! clique extraction, the randomized embedder against brute-force oracles,
//! exhaustive impossibility searches, and CLI determinism.
//!
//! Each test prints one `criterion N (<name>): PASS/FAIL` line (visible
//! with `--nocapture`) and enforces the criterion's wall-clock bound.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use cherrylab::coloring::{
    check_copy, pair_codegree, random_bounded_coloring, BoundMode, CopyMode, HostColoring,
    VertexScope,
};
use cherrylab::constructions::{
    build_tree, lex_block_coloring, partition_coloring, polarity_graph, rook_union, TreeKind,
};
use cherrylab::embed::search::{
    brute_force_embed, radius2_spanning_tree_search, rainbow_block_check,
};
use cherrylab::embed::{embed, find_clique_p, EmbedConfig, EmbedError, EmbedOutcome};
use cherrylab::graph::{
    count_cherries, extremal_edge_check, leaf_cherry_count, random_bounded_degree_tree,
    random_graph, EdgeScope, PatternGraph,
};
use cherrylab::lll::{budget_closed_form, lll_budget};
use cherrylab::util::{ceil_two_quarter_root, floor_scaled_quarter_root, pair_rank};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Runs a criterion body, prints its PASS/FAIL line, and enforces the
/// wall-clock limit.
fn criterion(number: u32, name: &str, limit: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match result {
        Ok(()) if elapsed <= limit => {
            println!("criterion {number} ({name}): PASS [{elapsed:.2?}]");
        }
        Ok(()) => {
            println!(
                "criterion {number} ({name}): FAIL [took {elapsed:.2?}, limit {limit:.2?}]"
            );
            panic!("criterion {number} exceeded its wall-clock limit");
        }
        Err(cause) => {
            println!("criterion {number} ({name}): FAIL [{elapsed:.2?}]");
            resume_unwind(cause);
        }
    }
}

fn rainbow_host(n: usize) -> HostColoring {
    HostColoring::from_fn(n, |u, v| pair_rank(n, u, v) as u32 + 1).unwrap()
}

fn mono_host(n: usize) -> HostColoring {
    HostColoring::from_fn(n, |_, _| 1).unwrap()
}

fn quarter() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(4))
}

#[test]
fn criterion_01_exact_budget_reproduction() {
    criterion(1, "exact budget reproduction", Duration::from_secs(1), || {
        let budget = lll_budget(CopyMode::Proper, 560).unwrap();
        let expected = BigRational::new(BigInt::from(3307), BigInt::from(15996));
        assert_eq!(budget.total, expected, "total must be exactly 3307/15996");
        assert!(budget.total < quarter(), "total must be below 1/4");
    });
}

#[test]
fn criterion_02_rainbow_budget_feasibility() {
    criterion(2, "rainbow budget feasibility", Duration::from_secs(5), || {
        let budget = lll_budget(CopyMode::Rainbow, 1512).unwrap();
        assert!(budget.total < quarter(), "rainbow total at 1512 must be below 1/4");

        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
        for _ in 0..100 {
            let c = rng.random_range(7..=1_000_000u64);
            for mode in [CopyMode::Proper, CopyMode::Rainbow] {
                let b = lll_budget(mode, c).unwrap();
                let closed = budget_closed_form(mode, c).unwrap();
                assert_eq!(
                    b.total, closed,
                    "per-class sum must equal the closed form at {mode}, C = {c}"
                );
            }
        }
    });
}

#[test]
fn criterion_03_cherry_formula() {
    criterion(3, "radius-two tree cherry formula", Duration::from_secs(1), || {
        for t in 2u64..=6 {
            let m = t * t * t;
            let g = build_tree(TreeKind::Cube, m).unwrap();
            // m^{4/3} + (m - m^{2/3}) / 2 with m = t^3.
            let expected = t.pow(4) + (t.pow(3) - t.pow(2)) / 2;
            assert_eq!(
                count_cherries(&g),
                expected,
                "cherry count of the cube tree at m = {m}"
            );
        }
    });
}

#[test]
fn criterion_04_partition_coloring_impossibility() {
    criterion(4, "partition coloring impossibility", Duration::from_secs(300), || {
        let c = partition_coloring(9).unwrap();
        let report = c.boundedness_report();
        assert_eq!(report.k_local, 3, "partition(9) must be locally 3-bounded");
        assert_eq!(report.k_global, 9, "partition(9) must be globally 9-bounded");

        let search = radius2_spanning_tree_search(&c, 100_000_000).unwrap();
        assert!(
            search.outcome.is_none_certified(),
            "no properly colored spanning tree of radius <= 2 may exist, got {:?}",
            search.outcome
        );

        // Sanity check of the same engine: an all-distinct coloring admits one.
        let rainbow = rainbow_host(9);
        let witness = radius2_spanning_tree_search(&rainbow, 100_000_000).unwrap();
        match witness.outcome {
            cherrylab::embed::search::Radius2Outcome::Found { tree, embedding } => {
                assert!(check_copy(&rainbow, &tree, &embedding).unwrap().is_ok());
            }
            other => panic!("expected a witness on the all-distinct host, got {other:?}"),
        }
    });
}

#[test]
fn criterion_05_extremal_property_suite() {
    criterion(5, "extremal edge and leaf bounds", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF5);
        for trial in 0..1000u64 {
            let n = rng.random_range(2..=50usize);
            let percent = rng.random_range(5..=95u32);
            let g = random_graph(n, percent, trial).unwrap();
            let r = count_cherries(&g);

            assert!(
                extremal_edge_check(&g, EdgeScope::All).unwrap().holds,
                "edge bound failed on trial {trial}"
            );

            for _ in 0..10 {
                let size = rng.random_range(1..=n);
                let mut subset: Vec<u32> = (1..=n as u32).collect();
                for i in 0..size {
                    let j = rng.random_range(i..n);
                    subset.swap(i, j);
                }
                subset.truncate(size);
                assert!(
                    extremal_edge_check(&g, EdgeScope::Incident(&subset)).unwrap().holds,
                    "incident-edge bound failed on trial {trial}"
                );
            }

            for u in 1..=n as u32 {
                let deg = g.degree(u) as u64;
                let lc = leaf_cherry_count(&g, u).unwrap();
                assert!(
                    (lc as u128) * (lc as u128) <= 2 * (r as u128) * (deg as u128),
                    "leaf-cherry bound failed at vertex {u} on trial {trial}: \
                     {lc}^2 > 2 * {r} * {deg}"
                );
            }
        }
    });
}

#[test]
fn criterion_06_clique_extraction_at_scale() {
    criterion(6, "clique extraction at n = 8960", Duration::from_secs(120), || {
        let (n, r, k) = (8960usize, 16u64, 2u64);
        let host = random_bounded_coloring(n, k as usize, BoundMode::Local, 0xC11C).unwrap();
        assert!(host.boundedness_report().k_local <= 2);

        let size_floor = ceil_two_quarter_root(r) as usize;
        let codegree_cap = floor_scaled_quarter_root(5 * k, r);
        let mut accepted = 0u32;
        for seed in 0..50u64 {
            let res = match find_clique_p(&host, r, k, CopyMode::Proper, seed, 20) {
                Ok(res) => res,
                Err(EmbedError::CliqueRetriesExhausted { .. }) => continue,
                Err(e) => panic!("seed {seed}: extraction error {e}"),
            };
            assert!(res.attempts <= 20);
            accepted += 1;

            // Re-verify all three invariants by direct scan, independently
            // of the library's internal checks.
            assert!(res.p.len() >= size_floor, "seed {seed}: |P| = {}", res.p.len());
            let induced = host.induced(&res.p).unwrap();
            assert_eq!(
                induced.count_mono_triples(),
                0,
                "seed {seed}: induced coloring on P must be proper"
            );
            for (i, &v1) in res.p.iter().enumerate() {
                for &v3 in &res.p[i + 1..] {
                    let co = pair_codegree(&host, v1, v3, VertexScope::All).unwrap();
                    assert!(
                        co <= codegree_cap,
                        "seed {seed}: codegree({v1}, {v3}) = {co} exceeds {codegree_cap}"
                    );
                }
            }
        }
        assert!(accepted >= 48, "only {accepted}/50 seeds accepted");
    });
}

#[test]
fn criterion_07_embedder_soundness_and_completeness() {
    criterion(7, "embedder soundness and desk-scale completeness", Duration::from_secs(300), || {
        // (a) Soundness: every embedding returned over 500 randomized
        // trials passes the copy check.
        let mut rng = ChaCha8Rng::seed_from_u64(0x50D4);
        let mut found = 0u32;
        for trial in 0..500u64 {
            let n_host = rng.random_range(8..=24usize);
            let n_pat = rng.random_range(2..=n_host.min(10));
            let rainbow = trial % 2 == 1;
            let g = if trial % 3 == 0 {
                random_bounded_degree_tree(n_pat, 3, trial).unwrap()
            } else {
                random_graph(n_pat, rng.random_range(30..=70u32), trial).unwrap()
            };
            let (mode, bound) = if rainbow {
                (CopyMode::Rainbow, BoundMode::Global)
            } else {
                (CopyMode::Proper, BoundMode::Local)
            };
            let k = rng.random_range(1..=2usize);
            let c = random_bounded_coloring(n_host, k, bound, 7000 + trial).unwrap();
            let mut cfg = EmbedConfig::new(mode, 9000 + trial);
            cfg.max_resamples = 20_000;
            cfg.max_restarts = 2;
            if let EmbedOutcome::Found(run) = embed(&g, &c, &cfg).unwrap() {
                assert!(
                    check_copy(&c, &g, &run.embedding).unwrap().is_ok(),
                    "trial {trial}: returned embedding failed the copy check"
                );
                found += 1;
            }
        }
        assert!(found > 300, "suspiciously few successes: {found}/500");

        // (b) Agreement with the exhaustive oracle on hosts with n <= 9.
        let triangle = PatternGraph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap();
        let star4 = PatternGraph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        let path4 = PatternGraph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let c4 = rook_union(2, 1).unwrap();
        let path2 = PatternGraph::new(2, [(1, 2)]).unwrap();
        let patterns = [&path2, &triangle, &star4, &path4, &c4];

        let hosts = [
            mono_host(6),
            rainbow_host(8),
            partition_coloring(9).unwrap(),
            random_bounded_coloring(9, 2, BoundMode::Local, 11).unwrap(),
            random_bounded_coloring(8, 1, BoundMode::Global, 12).unwrap(),
        ];

        for (hi, host) in hosts.iter().enumerate() {
            for (pi, &pattern) in patterns.iter().enumerate() {
                for mode in [CopyMode::Proper, CopyMode::Rainbow] {
                    let oracle = brute_force_embed(pattern, host, mode, 100_000_000).unwrap();
                    assert!(
                        !matches!(
                            oracle.outcome,
                            cherrylab::embed::search::SearchOutcome::Inconclusive
                        ),
                        "oracle must be definitive on host {hi}, pattern {pi}, {mode}"
                    );
                    let mut cfg = EmbedConfig::new(mode, 31 + hi as u64 * 10 + pi as u64);
                    cfg.max_resamples = 5_000;
                    cfg.max_restarts = 2;
                    let attempt = embed(pattern, host, &cfg).unwrap();
                    if oracle.outcome.is_none_certified() {
                        assert!(
                            attempt.found().is_none(),
                            "host {hi}, pattern {pi}, {mode}: embed succeeded where \
                             the oracle certified impossibility"
                        );
                    }
                    if let Some(run) = attempt.found() {
                        assert!(
                            oracle.outcome.found().is_some(),
                            "host {hi}, pattern {pi}, {mode}: oracle missed a copy"
                        );
                        assert!(check_copy(host, pattern, &run.embedding).unwrap().is_ok());
                    }
                }
            }
        }

        // (c) Completeness on random degree-capped spanning trees.
        for &n in &[30usize, 60] {
            for seed in 0..50u64 {
                let g = random_bounded_degree_tree(n, 3, 100 + seed).unwrap();
                let c =
                    random_bounded_coloring(n, 2, BoundMode::Local, 200 + seed).unwrap();
                let cfg = EmbedConfig::new(CopyMode::Proper, 300 + seed);
                let out = embed(&g, &c, &cfg).unwrap();
                let run = out
                    .found()
                    .unwrap_or_else(|| panic!("n = {n}, seed {seed}: embed failed"));
                assert!(check_copy(&c, &g, &run.embedding).unwrap().is_ok());
            }
        }
    });
}

#[test]
fn criterion_08_constructions() {
    criterion(8, "polarity and rook constructions", Duration::from_secs(10), || {
        for q in [2usize, 3, 4, 5, 7] {
            let g = polarity_graph(q).unwrap();
            assert_eq!(g.vertex_count(), q * q + q + 1, "order at q = {q}");
            assert_eq!(g.max_degree(), q + 1, "max degree at q = {q}");
            assert_eq!(g.diameter(), Some(2), "diameter at q = {q}");
            let low_degree = g.vertices().filter(|&v| g.degree(v) == q).count();
            assert_eq!(low_degree, q + 1, "count of degree-q vertices at q = {q}");
        }

        let rook = rook_union(3, 1).unwrap();
        assert!(rook.vertices().all(|v| rook.degree(v) == 4), "rook(3) must be 4-regular");
        assert_eq!(rook.diameter(), Some(2));
        assert!(
            rook.neighborhood_independence_at_most_two(),
            "every rook neighborhood splits into two cliques"
        );
    });
}

#[test]
fn criterion_09_block_coloring_checks() {
    criterion(9, "lexicographic block coloring checks", Duration::from_secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1E8);
        for _ in 0..20 {
            let ell = rng.random_range(1..=5usize);
            let n = rng.random_range(4 * ell..=4 * ell + 30);
            let c = lex_block_coloring(n, ell).unwrap();
            assert!(
                c.boundedness_report().k_global <= 4 * ell,
                "lex block coloring at (n, ell) = ({n}, {ell}) must be globally \
                 {}-bounded",
                4 * ell
            );
        }

        // No rainbow 4-cycle with all four vertices inside the block.
        let c = lex_block_coloring(16, 1).unwrap();
        let c4 = rook_union(2, 1).unwrap();
        let x: Vec<u32> = (1..=4).collect();
        let report = rainbow_block_check(&c, &c4, &x, 3, 100_000_000).unwrap();
        assert!(
            report.outcome.is_certified(),
            "a rainbow 4-cycle inside the block must be impossible, got {:?}",
            report.outcome
        );

        // No rainbow rook-graph copy at all when the whole host is one block.
        let c = lex_block_coloring(12, 3).unwrap();
        let h3 = rook_union(3, 1).unwrap();
        let all: Vec<u32> = (1..=12).collect();
        let quota = h3.vertex_count() - 1;
        let report = rainbow_block_check(&c, &h3, &all, quota, 100_000_000).unwrap();
        assert!(
            report.outcome.is_certified(),
            "a rainbow rook-graph copy must be impossible, got {:?}",
            report.outcome
        );
    });
}

#[test]
fn criterion_10_cli_determinism() {
    criterion(10, "command-line determinism", Duration::from_secs(60), || {
        let bin = env!("CARGO_BIN_EXE_cherrylab");
        let dir = tempfile::tempdir().unwrap();
        let tree = dir.path().join("tree.pg");
        let host = dir.path().join("host.ecc");

        let gen_tree = Command::new(bin)
            .args(["gen-graph", "random-tree", "--n", "30", "--seed", "5"])
            .args(["--out", tree.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(gen_tree.status.success());
        let gen_host = Command::new(bin)
            .args(["gen-coloring", "random", "--n", "30", "--k", "2", "--seed", "6"])
            .args(["--out", host.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(gen_host.status.success());

        let run = |threads: &str, cert_name: &str| {
            let cert = dir.path().join(cert_name);
            let out = Command::new(bin)
                .args(["embed", "--graph", tree.to_str().unwrap()])
                .args(["--coloring", host.to_str().unwrap()])
                .args(["--mode", "proper", "--seed", "99", "--threads", threads])
                .args(["--out", cert.to_str().unwrap()])
                .output()
                .unwrap();
            assert!(out.status.success(), "embed run failed: {out:?}");
            let mut report: serde_json::Value =
                serde_json::from_slice(&out.stdout).unwrap();
            report.as_object_mut().unwrap().remove("timings_ms");
            // Artifact paths differ per certificate name; drop them too.
            report.as_object_mut().unwrap().remove("artifacts");
            (std::fs::read(cert).unwrap(), report)
        };

        let (cert_a, report_a) = run("1", "a.json");
        let (cert_b, report_b) = run("1", "b.json");
        let (cert_c, report_c) = run("4", "c.json");

        assert_eq!(cert_a, cert_b, "same seed and threads must give identical certificates");
        assert_eq!(report_a, report_b, "reports must match modulo timings");
        assert_eq!(cert_a, cert_c, "--threads 1 must reproduce --threads 4 exactly");
        assert_eq!(report_a, report_c, "thread count must not change the report");
    });
}
