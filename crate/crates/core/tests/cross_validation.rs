//! Cross-validation between the independent implementations: the general
//! dynamic program, the interval fast path, the realizer, and the
//! brute-force oracle.

use orthotest_core::blocks::{realize_partial2tree, test_partial2tree, P2tOutcome};
use orthotest_core::compact::compact;
use orthotest_core::fastpath::{ip_intervals, test_ip, Interval, SeriesCounters};
use orthotest_core::generate::{gen_random, RandomKind};
use orthotest_core::graph::Graph;
use orthotest_core::oracle::{oracle_spirality_set, oracle_test, OracleLimits};
use orthotest_core::realize::synthesize;
use orthotest_core::spirality::{measure_spirality, AlphaMode, ComponentCtx};
use orthotest_core::spq::{build_spq_star, rooted_view, NodeKind};
use orthotest_core::tester::{construct, test_block, DpTable, RootConstraint, TestOptions};
use std::collections::HashMap;

/// Nested parallel structures sharing poles: the degree-4 pole geometry
/// pins the join angle variables, and the unfiltered enumeration disagrees
/// with the oracle here.
#[test]
fn adversarial_joins_match_oracle() {
    let cases: Vec<(&str, Graph)> = vec![
        (
            "nested-p-share-pole",
            Graph::new(
                7,
                &[(0, 3), (3, 2), (0, 4), (4, 2), (2, 1), (0, 5), (5, 1), (0, 6), (6, 1)],
            )
            .unwrap(),
        ),
        (
            "double-bundle",
            Graph::new(
                9,
                &[
                    (0, 4),
                    (4, 2),
                    (0, 5),
                    (5, 2),
                    (2, 3),
                    (3, 6),
                    (6, 1),
                    (3, 7),
                    (7, 1),
                    (0, 8),
                    (8, 1),
                    (0, 1),
                ],
            )
            .unwrap(),
        ),
        (
            "two-bundles-in-series",
            Graph::new(
                8,
                &[
                    (0, 3),
                    (3, 1),
                    (0, 4),
                    (4, 1),
                    (1, 5),
                    (5, 2),
                    (1, 6),
                    (6, 2),
                    (2, 7),
                    (7, 0),
                ],
            )
            .unwrap(),
        ),
    ];
    let lim = OracleLimits::relaxed(16);
    for (name, g) in &cases {
        let tree = build_spq_star(g).unwrap();
        let mut table = DpTable::new(g, tree.clone(), TestOptions::default());
        let mut cache: HashMap<(usize, usize), _> = HashMap::new();
        for root in tree.q_star_nodes() {
            let view = rooted_view(&tree, g, root).unwrap();
            for &node in &view.post_order {
                let dp = table.node_set(&view, node);
                let key = (node, view.parent[node]);
                let ora = cache
                    .entry(key)
                    .or_insert_with(|| {
                        oracle_spirality_set(g, &tree, &view, node, &lim).unwrap()
                    })
                    .clone();
                assert_eq!(dp, ora, "{name}: node {node} rooted at {root}");
            }
        }
    }
    // The unfiltered alpha range would claim drawability for undrawable
    // components; make sure the default options use the realizable filter.
    assert_eq!(TestOptions::default().alpha_mode, AlphaMode::Realizable);
}

#[test]
fn fastpath_equals_general_dp() {
    for seed in 0..40u64 {
        let g = gen_random(RandomKind::IndependentParallel, 50, seed).unwrap();
        let tree = build_spq_star(&g).unwrap();
        let dp = ip_intervals(&tree);
        let mut table = DpTable::new(&g, tree.clone(), TestOptions::default());
        for root in tree.q_star_nodes() {
            let view = rooted_view(&tree, &g, root).unwrap();
            for &node in &view.post_order {
                let set = table.node_set(&view, node);
                let iv = Interval::from_set(&set).expect("six-structure conformance");
                let fp = dp.get(&tree, node, view.parent[node]);
                assert_eq!(iv, fp, "seed {seed} node {node} root {root}");
            }
        }
        let slow = test_block(&g, RootConstraint::None, TestOptions::default())
            .unwrap()
            .is_some();
        let fast = test_ip(&g).unwrap().is_some();
        assert_eq!(slow, fast, "seed {seed}");
    }
}

/// Reroot updates via counter deltas reproduce from-scratch counters.
#[test]
fn reroot_counters_match_scratch() {
    for seed in 0..20u64 {
        let g = gen_random(RandomKind::IndependentParallel, 60, seed).unwrap();
        let tree = build_spq_star(&g).unwrap();
        let dp = ip_intervals(&tree);
        for x in 0..tree.node_count() {
            if tree.kind(x) != NodeKind::S {
                continue;
            }
            for &(nb, _) in &tree.adj[x] {
                let delta = dp.series_counters_excluding(&tree, x, nb);
                let mut scratch = SeriesCounters::default();
                for &(other, _) in &tree.adj[x] {
                    if other == nb {
                        continue;
                    }
                    scratch.add(dp.get(&tree, other, x));
                }
                assert_eq!(delta, scratch, "seed {seed} s-node {x}");
            }
        }
    }
}

#[test]
fn realize_roundtrip_random_blocks() {
    let mut yes = 0;
    for seed in 0..120u64 {
        for kind in [RandomKind::Sp, RandomKind::IndependentParallel] {
            let g = gen_random(kind, 40, seed).unwrap();
            let w = match test_block(&g, RootConstraint::None, TestOptions::default()).unwrap() {
                Some(w) => w,
                None => continue,
            };
            yes += 1;
            let tree = build_spq_star(&g).unwrap();
            let mut table = DpTable::new(&g, tree.clone(), TestOptions::default());
            let asg = construct(&mut table, &w).unwrap();
            let rep = synthesize(&g, &tree, &asg).unwrap();
            let report = rep.validate();
            assert!(report.ok(), "seed {seed}: {:?}", report.violations);
            for node in 0..tree.node_count() {
                if node != w.root && asg.view.parent[node] == orthotest_core::spq::NO_PARENT {
                    continue;
                }
                let ctx = ComponentCtx::from_view(&g, &tree, &asg.view, node);
                assert_eq!(
                    measure_spirality(&rep, &g, &ctx),
                    asg.sigma[node],
                    "seed {seed} node {node}"
                );
            }
            let mut crep = rep.clone();
            crep.coords = Some(compact(&rep));
            let creport = crep.validate();
            assert!(creport.ok(), "seed {seed} coords: {:?}", creport.violations);
        }
    }
    assert!(yes >= 100, "expected plenty of drawable instances, got {yes}");
}

#[test]
fn composition_matches_oracle_random() {
    let lim = OracleLimits::relaxed(11);
    let mut tested = 0;
    for seed in 0..2000u64 {
        let g = match gen_random(RandomKind::Partial2Tree, 9, seed) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if g.vertex_count() > 10 || g.edge_count() > 13 {
            continue;
        }
        tested += 1;
        let ours = matches!(
            test_partial2tree(&g, TestOptions::default()),
            P2tOutcome::Yes { .. }
        );
        let truth = oracle_test(&g, &lim, &[]).unwrap();
        assert_eq!(ours, truth, "seed {seed}: {}", g.to_json());
        if ours {
            let rep = realize_partial2tree(&g, TestOptions::default())
                .unwrap_or_else(|| panic!("seed {seed}: positive test must realize"));
            let report = rep.validate();
            assert!(report.ok(), "seed {seed}: {:?}", report.violations);
            let mut crep = rep.clone();
            crep.coords = Some(compact(&rep));
            assert!(crep.validate().ok(), "seed {seed} coords");
        }
        if tested >= 150 {
            break;
        }
    }
    assert!(tested >= 150);
}

/// Lazy label evaluation changes work, never verdicts.
#[test]
fn lazy_labels_same_verdicts() {
    use orthotest_core::blocks::test_partial2tree_with_stats;
    for seed in 0..60u64 {
        let g = gen_random(RandomKind::Partial2Tree, 25, seed).unwrap();
        let (eager, _) = test_partial2tree_with_stats(&g, TestOptions::default(), false);
        let (lazy, _) = test_partial2tree_with_stats(&g, TestOptions::default(), true);
        let same = matches!(
            (&eager, &lazy),
            (P2tOutcome::Yes { .. }, P2tOutcome::Yes { .. }) | (P2tOutcome::No, P2tOutcome::No)
        );
        assert!(same, "seed {seed}: {eager:?} vs {lazy:?}");
    }
}

/// FFT-backed Cartesian sums produce identical verdicts and sets.
#[test]
fn fft_engine_identical() {
    use orthotest_core::spirality::SumEngine;
    for seed in 0..25u64 {
        let g = gen_random(RandomKind::Sp, 60, seed).unwrap();
        let tree = build_spq_star(&g).unwrap();
        let mut a = DpTable::new(
            &g,
            tree.clone(),
            TestOptions {
                engine: SumEngine::ShiftOr,
                ..TestOptions::default()
            },
        );
        let mut b = DpTable::new(
            &g,
            tree.clone(),
            TestOptions {
                engine: SumEngine::Fft,
                ..TestOptions::default()
            },
        );
        for root in tree.q_star_nodes() {
            let view = rooted_view(&tree, &g, root).unwrap();
            for &node in &view.post_order {
                assert_eq!(
                    a.node_set(&view, node),
                    b.node_set(&view, node),
                    "seed {seed} node {node}"
                );
            }
        }
    }
}

/// Memoization on or off never changes any per-node set.
#[test]
fn memo_soundness() {
    for seed in 0..25u64 {
        let g = gen_random(RandomKind::Sp, 40, seed).unwrap();
        let tree = build_spq_star(&g).unwrap();
        let mut shared = DpTable::new(&g, tree.clone(), TestOptions::default());
        for root in tree.q_star_nodes() {
            let view = rooted_view(&tree, &g, root).unwrap();
            // Fresh table per root = no cross-root memo reuse.
            let mut fresh = DpTable::new(&g, tree.clone(), TestOptions::default());
            for &node in &view.post_order {
                assert_eq!(
                    shared.node_set(&view, node),
                    fresh.node_set(&view, node),
                    "seed {seed} root {root} node {node}"
                );
            }
        }
    }
}

/// Verdicts do not depend on the order roots are tried.
#[test]
fn root_order_independence() {
    for seed in 0..30u64 {
        let g = gen_random(RandomKind::Sp, 30, seed).unwrap();
        let tree = build_spq_star(&g).unwrap();
        let baseline = test_block(&g, RootConstraint::None, TestOptions::default())
            .unwrap()
            .is_some();
        // Manual sweep in raw node order.
        let mut table = DpTable::new(&g, tree.clone(), TestOptions::default());
        let mut any = false;
        for root in tree.q_star_nodes() {
            let view = rooted_view(&tree, &g, root).unwrap();
            let mut ok = true;
            for &node in &view.post_order {
                if table.node_set(&view, node).is_empty() {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let child = view.root_child();
            let set = table.node_set(&view, child);
            let len = tree.chain(root).len() as i32;
            for d in (-2 * (len - 1)..=2 * (len - 1)).step_by(2) {
                if set.contains(orthotest_core::spirality::Spirality(d + 8)) {
                    any = true;
                    break;
                }
            }
            if any {
                break;
            }
        }
        assert_eq!(any, baseline, "seed {seed}");
    }
}

/// Relabeling invariance of the block decomposition.
#[test]
fn bc_tree_relabeling_invariance() {
    use orthotest_core::graph::build_bc_tree;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    for seed in 0..20u64 {
        let g = gen_random(RandomKind::Partial2Tree, 20, seed).unwrap();
        let n = g.vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut rng);
        let edges: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|&(a, b)| (perm[a as usize], perm[b as usize]))
            .collect();
        let h = Graph::new(n, &edges).unwrap();
        let bg = build_bc_tree(&g);
        let bh = build_bc_tree(&h);
        assert_eq!(bg.blocks.len(), bh.blocks.len());
        assert_eq!(bg.cutvertices.len(), bh.cutvertices.len());
        // Block vertex-set sizes match as multisets under the relabeling.
        let mut sg: Vec<usize> = bg.blocks.iter().map(|b| b.vertices.len()).collect();
        let mut sh: Vec<usize> = bh.blocks.iter().map(|b| b.vertices.len()).collect();
        sg.sort_unstable();
        sh.sort_unstable();
        assert_eq!(sg, sh);
        let mut cg: Vec<u32> = bg.cutvertices.iter().map(|&c| perm[c as usize]).collect();
        cg.sort_unstable();
        assert_eq!(cg, bh.cutvertices);
    }
}

/// Path independence of measurement, on representations with nontrivial
/// components.
#[test]
fn measurement_path_independence() {
    use orthotest_core::spirality::measure_spirality_all_paths;
    for seed in 0..25u64 {
        let g = gen_random(RandomKind::Sp, 25, seed).unwrap();
        let w = match test_block(&g, RootConstraint::None, TestOptions::default()).unwrap() {
            Some(w) => w,
            None => continue,
        };
        let tree = build_spq_star(&g).unwrap();
        let mut table = DpTable::new(&g, tree.clone(), TestOptions::default());
        let asg = construct(&mut table, &w).unwrap();
        let rep = synthesize(&g, &tree, &asg).unwrap();
        for node in 0..tree.node_count() {
            if node != w.root && asg.view.parent[node] == orthotest_core::spq::NO_PARENT {
                continue;
            }
            let ctx = ComponentCtx::from_view(&g, &tree, &asg.view, node);
            let all = measure_spirality_all_paths(&rep, &g, &ctx);
            assert!(!all.is_empty());
            assert!(
                all.iter().all(|&s| s == all[0]),
                "seed {seed} node {node}: {all:?}"
            );
        }
    }
}

/// Oracle stream determinism and set symmetry.
#[test]
fn oracle_determinism_and_symmetry() {
    // Stub graphs add up to four pendant vertices on top of the component.
    let lim = OracleLimits::relaxed(13);
    for seed in 0..10u64 {
        let g = match gen_random(RandomKind::Sp, 6, seed) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if g.vertex_count() > 8 {
            continue;
        }
        let tree = build_spq_star(&g).unwrap();
        let root = tree.q_star_nodes().next().unwrap();
        let view = rooted_view(&tree, &g, root).unwrap();
        for &node in &view.post_order {
            let a = oracle_spirality_set(&g, &tree, &view, node, &lim).unwrap();
            let b = oracle_spirality_set(&g, &tree, &view, node, &lim).unwrap();
            assert_eq!(a, b);
            assert!(a.is_symmetric(), "seed {seed} node {node}: {a:?}");
        }
    }
}
