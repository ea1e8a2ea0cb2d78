//! Acceptance gate: one test per release criterion, each printing a single
//! PASS/FAIL line. Every criterion checks library output against an
//! independent oracle (exhaustive enumeration, brute-force search, or a
//! planted ground truth), never against the code under test.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cgedit::cograph::{cotree, cotree_to_graph, find_p4, is_cograph};
use cgedit::editing::{
    brute_force_all_optimal_edits, brute_force_optimal_edit, exact_edit, heuristic_edit,
    heuristic_edit_observed, heuristic_edit_with_tree, verify_edit_result, TieBreak,
};
use cgedit::graph::{EditSet, Graph, VertexSet};
use cgedit::io::generate_perturbed_cograph;
use cgedit::merge::{
    check_module_preserving, merge_edit_set, pairwise_merge_sequence, sigma_decomposition,
    validate_merge, MergeSpec,
};
use cgedit::mod_decomp::{
    brute_force_strong_modules, enumerate_all_modules, is_module, modular_decomposition_tree,
    quotient, MDNode, ModuleKind, ModularPartition,
};

fn gate(name: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    println!(
        "[PRIMARY] {name}: {}",
        if outcome.is_ok() { "PASS" } else { "FAIL" }
    );
    if let Err(e) = outcome {
        std::panic::resume_unwind(e);
    }
}

/// Builds the graph on `n` vertices whose edge set is the bit pattern
/// `mask` over the C(n,2) pairs in lexicographic order.
fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn for_all_graphs(n: usize, mut f: impl FnMut(&Graph)) {
    let pairs = n * (n - 1) / 2;
    for mask in 0..1u64 << pairs {
        f(&graph_from_mask(n, mask));
    }
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn p4() -> Graph {
    Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
}

fn c5() -> Graph {
    Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap()
}

#[test]
fn criterion_1_oracle_equivalence() {
    gate("criterion 1 (exact solver matches brute-force oracle)", || {
        for n in 1..=6 {
            for_all_graphs(n, |g| {
                let brute = brute_force_optimal_edit(g).unwrap();
                let exact = exact_edit(g).unwrap();
                assert_eq!(
                    exact.cost, brute.cost,
                    "cost mismatch on n={n} g={g:?}"
                );
                assert!(verify_edit_result(g, &exact).unwrap().all_ok());
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for n in [7usize, 8] {
            for i in 0..1000 {
                let p = [0.2, 0.35, 0.5, 0.65, 0.8][i % 5];
                let g = random_graph(n, p, &mut rng);
                let brute = brute_force_optimal_edit(&g).unwrap();
                let exact = exact_edit(&g).unwrap();
                assert_eq!(exact.cost, brute.cost, "cost mismatch on n={n} g={g:?}");
            }
        }
    });
}

#[test]
fn criterion_2_canonical_instances() {
    gate("criterion 2 (canonical edit costs: P4=1, C5=2, cographs=0)", || {
        assert_eq!(brute_force_optimal_edit(&p4()).unwrap().cost, 1);
        assert_eq!(brute_force_optimal_edit(&c5()).unwrap().cost, 2);
        assert_eq!(exact_edit(&p4()).unwrap().cost, 1);
        assert_eq!(exact_edit(&c5()).unwrap().cost, 2);
        // Every cograph must cost 0 under every solver.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=8 {
            for _ in 0..50 {
                let seed = rng.gen();
                let (g, _, _) = generate_perturbed_cograph(n, 0, seed).unwrap();
                assert!(is_cograph(&g));
                assert_eq!(brute_force_optimal_edit(&g).unwrap().cost, 0);
                assert_eq!(exact_edit(&g).unwrap().cost, 0);
                assert_eq!(heuristic_edit(&g, TieBreak::Deterministic).unwrap().cost, 0);
            }
        }
    });
}

/// Checks a tree's labels against the definitions: parallel nodes induce
/// disconnected subgraphs, series nodes co-disconnected ones, and prime
/// nodes are connected both ways with a quotient free of nontrivial
/// modules.
fn check_labels(g: &Graph, node: &MDNode) {
    match node.kind {
        ModuleKind::Leaf => assert_eq!(node.vertices.len(), 1),
        ModuleKind::Parallel | ModuleKind::Series | ModuleKind::Prime => {
            assert!(node.children.len() >= 2);
            let (sub, _) = g.induced_subgraph(&node.vertices).unwrap();
            let conn = sub.connected_components().len() == 1;
            let co_conn = sub.complement().connected_components().len() == 1;
            match node.kind {
                ModuleKind::Parallel => assert!(!conn),
                ModuleKind::Series => assert!(!co_conn),
                ModuleKind::Prime => {
                    assert!(conn && co_conn);
                    let blocks: Vec<VertexSet> =
                        node.children.iter().map(|c| c.vertices.clone()).collect();
                    let part = ModularPartition::new(blocks);
                    let (q, _) = quotient(g, &part).unwrap();
                    // Prime quotient: only trivial modules.
                    let mods = enumerate_all_modules(&q, None).unwrap();
                    assert_eq!(mods.len(), q.vertex_count() + 1);
                }
                _ => unreachable!(),
            }
            for c in &node.children {
                check_labels(g, c);
            }
        }
    }
}

/// The structural module theorems: every module is a tree node or a union
/// of ≥2 children of one non-prime node (and every such union is a
/// module), and no proper nontrivial union of a prime node's children is a
/// module.
fn check_module_structure(g: &Graph, tree: &cgedit::mod_decomp::MDTree) {
    let nodes: Vec<&MDNode> = tree.root.nodes();
    let all_mods = enumerate_all_modules(g, None).unwrap();
    for m in &all_mods {
        let is_node = nodes.iter().any(|nd| nd.vertices == *m);
        if is_node {
            continue;
        }
        let explained = nodes.iter().any(|nd| {
            nd.kind != ModuleKind::Prime
                && nd.kind != ModuleKind::Leaf
                && nd.children.iter().filter(|c| c.vertices.is_subset(m)).count() >= 2
                && {
                    let union = nd
                        .children
                        .iter()
                        .filter(|c| c.vertices.is_subset(m))
                        .fold(VertexSet::new(), |acc, c| acc.union(&c.vertices));
                    union == *m
                }
        });
        assert!(explained, "module {m:?} unexplained by the tree of {g:?}");
    }
    for nd in &nodes {
        if nd.kind == ModuleKind::Leaf {
            continue;
        }
        let k = nd.children.len();
        for subset in 1u64..(1 << k) - 1 {
            if subset.count_ones() < 2 {
                continue;
            }
            let union = (0..k)
                .filter(|i| subset >> i & 1 == 1)
                .fold(VertexSet::new(), |acc, i| acc.union(&nd.children[i].vertices));
            let m = is_module(g, &union).unwrap();
            match nd.kind {
                ModuleKind::Prime => assert!(!m, "prime child union {union:?} is a module"),
                _ => assert!(m, "non-prime child union {union:?} is not a module"),
            }
        }
    }
}

#[test]
fn criterion_3_modular_decomposition() {
    gate("criterion 3 (decomposition tree matches brute-force strong modules)", || {
        let mut check = |g: &Graph| {
            let tree = modular_decomposition_tree(g).unwrap();
            let mut got: Vec<VertexSet> = tree.strong_modules();
            got.sort();
            let mut want = brute_force_strong_modules(g, None).unwrap();
            want.sort();
            assert_eq!(got, want, "strong modules differ on {g:?}");
            check_labels(g, &tree.root);
            check_module_structure(g, &tree);
        };
        for n in 1..=6 {
            for_all_graphs(n, &mut check);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 7..=10 {
            for i in 0..10_000 {
                let p = [0.15, 0.3, 0.5, 0.7, 0.85][i % 5];
                check(&random_graph(n, p, &mut rng));
            }
        }
    });
}

#[test]
fn criterion_4_recognition_triple_agreement() {
    gate("criterion 4 (three recognizers agree; cotree round-trips)", || {
        let mut check = |g: &Graph| {
            let by_p4 = find_p4(g).is_none();
            let by_recursion = is_cograph(g);
            let tree = modular_decomposition_tree(g).unwrap();
            let by_tree = tree.prime_nodes_bottom_up().is_empty();
            assert_eq!(by_p4, by_recursion, "recognizers disagree on {g:?}");
            assert_eq!(by_p4, by_tree, "recognizers disagree on {g:?}");
            match cotree(g) {
                Ok(t) => {
                    assert!(by_p4);
                    assert_eq!(cotree_to_graph(&t), *g, "round-trip failed on {g:?}");
                }
                Err(_) => assert!(!by_p4),
            }
        };
        for n in 1..=7 {
            for_all_graphs(n, &mut check);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..10_000 {
            let n = rng.gen_range(4..=64);
            let p = [0.1, 0.25, 0.5, 0.75, 0.9][i % 5];
            check(&random_graph(n, p, &mut rng));
        }
        // Random instances are almost never cographs; exercise the
        // round-trip branch on planted ones as well.
        for seed in 0..500 {
            let n = 2 + (seed as usize % 63);
            let (g, _, _) = generate_perturbed_cograph(n, 0, seed).unwrap();
            check(&g);
        }
    });
}

#[test]
fn criterion_5_heuristic_contract() {
    gate("criterion 5 (heuristic: cograph, module-preserving, scaling)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..10_000 {
            // Mixed sizes: mostly small-to-medium, every 100th large.
            let n = if i % 100 == 99 {
                rng.gen_range(100..=200)
            } else {
                rng.gen_range(4..=50)
            };
            let p = [0.1, 0.3, 0.5, 0.7, 0.9][i % 5];
            let g = random_graph(n, p, &mut rng);
            if n <= 50 && i % 50 == 0 {
                // Scratch-vs-incremental A-matrix invariant at every merge.
                let mut steps = 0usize;
                heuristic_edit_observed(&g, TieBreak::Deterministic, |snap| {
                    steps += 1;
                    for (x, bx) in snap.blocks.iter().enumerate() {
                        for (y, by) in snap.blocks.iter().enumerate() {
                            if x == y {
                                continue;
                            }
                            let scratch: u64 = snap
                                .blocks
                                .iter()
                                .enumerate()
                                .filter(|&(z, _)| z != x && z != y)
                                .map(|(_, bz)| {
                                    let differs = snap.graph.has_edge(bx.min_id(), bz.min_id())
                                        != snap.graph.has_edge(by.min_id(), bz.min_id());
                                    if differs {
                                        bz.len() as u64
                                    } else {
                                        0
                                    }
                                })
                                .sum();
                            assert_eq!(snap.a[x][y], scratch, "A divergence on {g:?}");
                        }
                    }
                })
                .unwrap();
            }
            let r = heuristic_edit(&g, TieBreak::Deterministic).unwrap();
            assert!(is_cograph(&r.result_graph), "not a cograph on {g:?}");
            let (preserved, witness) = check_module_preserving(&g, &r.edits).unwrap();
            assert!(preserved, "broken module {witness:?} on {g:?}");
        }

        // Editing-phase scaling: the decomposition is prebuilt so only the
        // merge loop is timed. The median doubling ratio must stay within
        // a cubic-with-constants envelope.
        let median_time = |n: usize, rng: &mut ChaCha8Rng| -> f64 {
            let mut times: Vec<f64> = (0..11)
                .map(|_| {
                    let g = random_graph(n, 0.5, rng);
                    let tree = modular_decomposition_tree(&g).unwrap();
                    let t = std::time::Instant::now();
                    let r = heuristic_edit_with_tree(&g, &tree, TieBreak::Deterministic).unwrap();
                    let dt = t.elapsed().as_secs_f64();
                    std::hint::black_box(r.cost);
                    dt
                })
                .collect();
            times.sort_by(f64::total_cmp);
            times[times.len() / 2]
        };
        let t50 = median_time(50, &mut rng);
        let t100 = median_time(100, &mut rng);
        let t200 = median_time(200, &mut rng);
        assert!(
            t100 / t50 <= 10.0 && t200 / t100 <= 10.0,
            "editing phase scaling too steep: t50={t50:.6} t100={t100:.6} t200={t200:.6}"
        );
    });
}

/// Audits one optimal module-preserving edit set against the merge
/// calculus: reconstruction from per-module merge edits, the σ counting
/// and subgraph-equality laws, and a full pairwise replay with disjoint θ
/// slices preserving all modules of `g`.
fn audit_merge_theory(g: &Graph, f: &EditSet) {
    let h = g.apply_edits(f).unwrap();
    let parts = sigma_decomposition(g, f).unwrap();

    // The σ parts cover exactly the strong modules of h that are not
    // modules of g.
    let th = modular_decomposition_tree(&h).unwrap();
    let mut expected: Vec<VertexSet> = th
        .strong_modules()
        .into_iter()
        .filter(|m| !is_module(g, m).unwrap())
        .collect();
    expected.sort_by_key(|m| (m.len(), m.min_id()));
    let got: Vec<VertexSet> = parts.iter().map(|p| p.m_star.clone()).collect();
    assert_eq!(got, expected, "σ module list mismatch on {g:?} f={f:?}");

    // Reconstruction: the union of the per-module merge edit sets is f.
    let mut rebuilt = EditSet::new();
    for part in &parts {
        rebuilt = rebuilt.union(&merge_edit_set(f, &part.host_prime, &part.m_star));
    }
    assert_eq!(rebuilt, *f, "merge-edit reconstruction mismatch on {g:?}");

    // Counting and prefix laws: disjoint σ slices summing to |f|; each
    // prefix realizes its modules' final subgraphs and preserves every
    // module of g.
    assert_eq!(parts.iter().map(|p| p.sigma.len()).sum::<usize>(), f.len());
    let g_modules = enumerate_all_modules(g, None).unwrap();
    let mut prefix = EditSet::new();
    for (j, part) in parts.iter().enumerate() {
        assert!(prefix.is_disjoint(&part.sigma), "σ slices overlap on {g:?}");
        prefix = prefix.union(&part.sigma);
        let gj = g.apply_edits(&prefix).unwrap();
        for done in &parts[..=j] {
            let (a, _) = gj.induced_subgraph(&done.m_star).unwrap();
            let (b, _) = h.induced_subgraph(&done.m_star).unwrap();
            assert_eq!(a, b, "prefix subgraph mismatch on {g:?}");
            assert!(is_module(&gj, &done.m_star).unwrap());
        }
        for m in &g_modules {
            assert!(is_module(&gj, m).unwrap(), "module {m:?} broken mid-way on {g:?}");
        }
    }

    // Pairwise replay: disjoint θ covering f, each nonempty step a valid
    // pairwise merge, modules of g and prior results intact throughout.
    let trace = pairwise_merge_sequence(g, f, true).unwrap();
    assert!(trace.residual.is_empty());
    let mut used = EditSet::new();
    for s in &trace.steps {
        assert!(used.is_disjoint(&s.theta), "θ slices overlap on {g:?}");
        used = used.union(&s.theta);
        assert_eq!(s.left.union(&s.right), s.result);
    }
    assert_eq!(used, *f, "θ union does not cover f on {g:?}");
    let inter = trace.intermediates.as_ref().expect("replay keeps intermediates");
    assert_eq!(inter.len(), trace.steps.len() + 1);
    assert_eq!(*inter.last().unwrap(), h);
    let mut results_so_far: Vec<VertexSet> = Vec::new();
    for (i, s) in trace.steps.iter().enumerate() {
        let (before, after) = (&inter[i], &inter[i + 1]);
        if !s.theta.is_empty() {
            let spec = MergeSpec::new(vec![s.left.clone(), s.right.clone()]).unwrap();
            assert!(
                validate_merge(before, after, &spec).unwrap(),
                "invalid pairwise merge step on {g:?}"
            );
        }
        for m in &g_modules {
            assert!(is_module(after, m).unwrap(), "module of g broken on {g:?}");
        }
        for r in &results_so_far {
            if !r.is_subset(&s.result) {
                assert!(is_module(after, r).unwrap(), "prior result broken on {g:?}");
            }
        }
        results_so_far.push(s.result.clone());
    }
}

#[test]
fn criterion_6_merge_theory_audits() {
    gate("criterion 6 (merge calculus audits on all small optima)", || {
        let mut audit_graph = |g: &Graph| {
            for f in brute_force_all_optimal_edits(g).unwrap() {
                if f.is_empty() {
                    continue;
                }
                let (preserving, _) = check_module_preserving(g, &f).unwrap();
                if preserving {
                    audit_merge_theory(g, &f);
                }
            }
        };
        for n in 2..=5 {
            for_all_graphs(n, &mut audit_graph);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for i in 0..500 {
            let p = [0.25, 0.5, 0.75][i % 3];
            audit_graph(&random_graph(6, p, &mut rng));
        }
    });
}

#[test]
fn criterion_7_no_insertions_across_components() {
    gate("criterion 7 (optima never insert edges between components)", || {
        for n in 2..=5 {
            for_all_graphs(n, |g| {
                let comps = g.connected_components();
                if comps.len() < 2 {
                    return;
                }
                let comp_of = |v: u32| comps.iter().position(|c| c.contains(v)).unwrap();
                for f in brute_force_all_optimal_edits(g).unwrap() {
                    for &(u, v) in f.iter() {
                        let inserted = !g.has_edge(u, v);
                        assert!(
                            !(inserted && comp_of(u) != comp_of(v)),
                            "optimum inserts {u}-{v} across components of {g:?}"
                        );
                    }
                }
            });
        }
    });
}

#[test]
fn criterion_8_generator_sanity() {
    gate("criterion 8 (planted instances: k=0 cographs, oracle cost ≤ k)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300 {
            let n = rng.gen_range(1..=100);
            let (g, _, flips) = generate_perturbed_cograph(n, 0, rng.gen()).unwrap();
            assert!(flips.is_empty());
            assert!(is_cograph(&g));
        }
        for _ in 0..600 {
            let n = rng.gen_range(2..=8);
            let k = rng.gen_range(0..=n * (n - 1) / 2);
            let (g, _, flips) = generate_perturbed_cograph(n, k, rng.gen()).unwrap();
            assert_eq!(flips.len(), k);
            let cost = brute_force_optimal_edit(&g).unwrap().cost;
            assert!(cost <= k, "oracle cost {cost} exceeds k={k} on {g:?}");
        }
    });
}
