//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the checked bound. Run with `--nocapture` to see them:
//!
//! ```text
//! cargo test -p cnbc --test acceptance -- --nocapture
//! ```

use std::time::{Duration, Instant};

use cnbc::coloring::{verify_cnbc, verify_nbc, Coloring};
use cnbc::construct::{
    build_hk, color_complete, color_hamming, color_hamming_closed_form, supergraph_embed,
    vertex_addition_3km2, ColoredGraph, ConstructError,
};
use cnbc::diagnostics::{
    check_counting, check_degree_cnbc, check_regular_counting, preflight, PreflightVerdict,
};
use cnbc::graph::{
    build_product, complete_graph, cycle_graph, path_graph, Graph, ProductKind,
};
use cnbc::reduction::{build_reduction, extract_coloring, lift_coloring};
use cnbc::solver::{brute_force, cross_validate, solve, BalanceMode, SolveOptions, SolveStatus};
use cnbc::transfer::{
    cartesian_k2_transfer, cartesian_mixed_transfer, direct_k2_transfer,
    direct_product_obstruction, join_transfer, lexicographic_transfer, reduce_colors,
    strong_product_transfer, TransferError,
};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn pass(criterion: usize, detail: impl std::fmt::Display) {
    println!("[PASS] criterion {criterion}: {detail}");
}

/// All graphs on `n` labeled vertices, by edge mask.
fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

#[test]
fn criterion_01_complete_graphs() {
    let start = Instant::now();
    for k in [2usize, 3, 4] {
        for n in 1..=12usize {
            let g = complete_graph(n).unwrap();
            let result = solve(&g, &SolveOptions::new(k)).unwrap();
            assert_eq!(
                result.status.is_satisfiable(),
                n % k == 0,
                "K_{n} with k={k}"
            );
            if let Some(c) = result.status.coloring() {
                assert!(c.is_equitable(), "complete-graph classes must be equal");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    pass(1, format!("K_n solvable iff k | n, n <= 12, k in 2..4 ({elapsed:?})"));
}

#[test]
fn criterion_02_hamming_theorem() {
    for (d, k) in [(3usize, 2usize), (5, 2), (4, 3)] {
        let recursive = color_hamming(d, k).unwrap();
        assert!(verify_cnbc(&recursive.graph, &recursive.coloring)
            .unwrap()
            .is_balanced());
        let closed = color_hamming_closed_form(d, k).unwrap();
        assert!(verify_cnbc(&closed.graph, &closed.coloring)
            .unwrap()
            .is_balanced());
    }
    for (d, k) in [(2usize, 2usize), (3, 3)] {
        assert!(matches!(
            color_hamming(d, k),
            Err(ConstructError::DimensionNotCongruent { .. })
        ));
        assert!(matches!(
            color_hamming_closed_form(d, k),
            Err(ConstructError::DimensionNotCongruent { .. })
        ));
        let g = cnbc::graph::hamming_graph(d, k).unwrap();
        let report = preflight(&g, k);
        assert_eq!(report.verdict, PreflightVerdict::DefinitelyNotCnbc);
        assert_eq!(report.first_failure().unwrap().name, "degree");
        let result = solve(&g, &SolveOptions::new(k)).unwrap();
        assert_eq!(result.status, SolveStatus::Unsatisfiable);
    }
    // the 81-vertex instance verifies well inside a second
    let h43 = color_hamming(4, 3).unwrap();
    let t = Instant::now();
    assert!(verify_cnbc(&h43.graph, &h43.coloring).unwrap().is_balanced());
    let elapsed = t.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(2, format!("H(d,k) certified iff d = 1 mod k; H(4,3) verified in {elapsed:?}"));
}

/// Builds the corpus of certified colorings used by criterion 3: every
/// construction, several products and transfers, and solver output.
fn certified_corpus() -> Vec<ColoredGraph> {
    let mut corpus: Vec<ColoredGraph> = Vec::new();
    for k in [2usize, 3, 4] {
        for mult in 1..=(12 / k) {
            corpus.push(color_complete(k * mult, k).unwrap());
        }
    }
    for (d, k) in [(3, 2), (5, 2), (4, 3)] {
        corpus.push(color_hamming(d, k).unwrap());
        corpus.push(color_hamming_closed_form(d, k).unwrap());
    }
    for k in 2..=5 {
        corpus.push(build_hk(k).unwrap());
    }
    let seeds = [
        path_graph(3).unwrap(),
        path_graph(4).unwrap(),
        cycle_graph(4).unwrap(),
        cycle_graph(5).unwrap(),
        complete_graph(3).unwrap(),
        Graph::empty(2),
    ];
    for g in &seeds {
        for k in [2usize, 3] {
            corpus.push(supergraph_embed(g, k).unwrap().colored);
        }
    }
    // transfers
    let k2 = color_complete(2, 2).unwrap();
    let k6 = color_complete(6, 2).unwrap();
    let k33 = color_complete(3, 3).unwrap();
    let cube = color_hamming(3, 2).unwrap();
    corpus.push(strong_product_transfer(&k2, &path_graph(3).unwrap()).unwrap());
    corpus.push(strong_product_transfer(&k6, &cycle_graph(4).unwrap()).unwrap());
    corpus.push(strong_product_transfer(&cube, &path_graph(2).unwrap()).unwrap());
    corpus.push(join_transfer(&k2, &k2).unwrap());
    corpus.push(join_transfer(&cube, &k6).unwrap());
    corpus.push(join_transfer(&k33, &k33).unwrap());
    corpus.push(direct_k2_transfer(&k2).unwrap());
    corpus.push(direct_k2_transfer(&k6).unwrap());
    corpus.push(direct_k2_transfer(&k33).unwrap());
    corpus.push(lexicographic_transfer(&path_graph(3).unwrap(), &k2).unwrap());
    corpus.push(lexicographic_transfer(&cycle_graph(5).unwrap(), &k33).unwrap());
    let prism = cartesian_k2_transfer(&k33).unwrap();
    corpus.push(cartesian_mixed_transfer(&k33, &prism.graph, &prism.coloring).unwrap());
    let ladder = cartesian_k2_transfer(&k2).unwrap();
    corpus.push(cartesian_mixed_transfer(&k2, &ladder.graph, &ladder.coloring).unwrap());
    // color reductions re-certified
    let k12 = color_complete(12, 6).unwrap();
    for p in [2usize, 3] {
        let reduced = reduce_colors(&k12.graph, &k12.coloring, p).unwrap();
        corpus.push(
            ColoredGraph::certify(k12.graph.clone(), reduced, format!("reduced(p={p})")).unwrap(),
        );
    }
    // solver-found colorings
    for (g, k) in [
        (complete_graph(6).unwrap(), 2usize),
        (cycle_graph(9).unwrap(), 3),
        (build_product(ProductKind::Direct, &complete_graph(2).unwrap(), &complete_graph(2).unwrap()).unwrap(), 2),
    ] {
        let result = solve(&g, &SolveOptions::new(k)).unwrap();
        let c = result.status.coloring().unwrap().clone();
        corpus.push(ColoredGraph::certify(g, c, format!("solved(k={k})")).unwrap());
    }
    // lifted reduction colorings
    for (g, proper) in [
        (complete_graph(3).unwrap(), vec![1, 2, 3]),
        (cycle_graph(5).unwrap(), vec![1, 2, 1, 2, 3]),
        (path_graph(4).unwrap(), vec![1, 2, 3, 1]),
    ] {
        let (expanded, cert) = build_reduction(&g, 3).unwrap();
        let lifted =
            lift_coloring(&g, &expanded, &cert, &Coloring::new(3, proper).unwrap()).unwrap();
        corpus.push(ColoredGraph::certify(expanded, lifted, "lifted").unwrap());
    }
    corpus
}

#[test]
fn criterion_03_counting_identities() {
    let corpus = certified_corpus();
    assert!(
        corpus.len() >= 50,
        "corpus has only {} colorings",
        corpus.len()
    );
    let mut regular_instances = 0;
    for colored in &corpus {
        let counting = check_counting(&colored.graph, &colored.coloring).unwrap();
        assert!(
            counting.all_pass(),
            "counting identities failed on {}",
            colored.provenance
        );
        if colored.graph.is_regular().is_some() {
            regular_instances += 1;
            let reg = check_regular_counting(&colored.graph, &colored.coloring).unwrap();
            assert!(
                reg.all_pass(),
                "regular counting failed on {}",
                colored.provenance
            );
        }
    }
    pass(
        3,
        format!(
            "counting identities exact on {} colorings ({} regular)",
            corpus.len(),
            regular_instances
        ),
    );
}

#[test]
fn criterion_04_complement_duality() {
    let start = Instant::now();
    let mut cases = 0u64;
    for n in [2usize, 4, 6] {
        // all equitable 2-colorings of n vertices
        let mut colorings = Vec::new();
        for mask in 0u64..(1 << n) {
            if (mask.count_ones() as usize) == n / 2 {
                let colors: Vec<usize> =
                    (0..n).map(|v| if mask >> v & 1 == 1 { 1 } else { 2 }).collect();
                colorings.push(Coloring::new(2, colors).unwrap());
            }
        }
        let pairs = n * (n - 1) / 2;
        for mask in 0u64..(1 << pairs) {
            let g = graph_from_mask(n, mask);
            let complement = g.complement();
            for c in &colorings {
                let nbc = verify_nbc(&g, c).unwrap().is_balanced();
                let cnbc = verify_cnbc(&complement, c).unwrap().is_balanced();
                assert_eq!(nbc, cnbc, "duality broke on n={n} mask={mask}");
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(4, format!("open/closed duality on {cases} exhaustive cases ({elapsed:?})"));
}

/// Random certified base whose classes are equal; k in {2, 3}.
fn random_equitable_base(rng: &mut StdRng, k: usize) -> ColoredGraph {
    match rng.gen_range(0..3) {
        0 => color_complete(k * rng.gen_range(1..=3), k).unwrap(),
        1 => {
            let n = rng.gen_range(1..=4);
            let g = random_graph(rng, n, 0.5);
            supergraph_embed(&g, k).unwrap().colored
        }
        _ => {
            if k == 2 {
                color_hamming(3, 2).unwrap()
            } else {
                color_complete(k, k).unwrap()
            }
        }
    }
}

/// Random certified base, possibly with skewed classes.
fn random_base(rng: &mut StdRng, k: usize) -> ColoredGraph {
    if rng.gen_bool(0.3) {
        let mut base = build_hk(k).unwrap();
        if rng.gen_bool(0.5) {
            // skew further: iterate the addition at a same-colored vertex
            let z = base
                .graph
                .vertices()
                .find(|&v| base.coloring.color(v) == k)
                .unwrap();
            base = vertex_addition_3km2(&base, z).unwrap();
        }
        base
    } else {
        random_equitable_base(rng, k)
    }
}

#[test]
fn criterion_05_transfer_suite() {
    const CASES: usize = 200;
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);

    for case in 0..CASES {
        let k = if case % 2 == 0 { 2 } else { 3 };

        let base = random_base(&mut rng, k);
        let other = random_graph(&mut rng, rng.gen_range(1..=4), 0.5);
        let out = strong_product_transfer(&base, &other).unwrap();
        assert!(verify_cnbc(&out.graph, &out.coloring).unwrap().is_balanced());

        let base = random_base(&mut rng, k);
        let out = cartesian_k2_transfer(&base).unwrap();
        assert!(verify_nbc(&out.graph, &out.coloring).unwrap().is_balanced());

        // mixed cartesian: open-balanced factor from the prism transfer or
        // an edgeless graph with arbitrary colors
        let base = random_base(&mut rng, k);
        let (oh, oc) = if rng.gen_bool(0.5) {
            let seed = random_base(&mut rng, k);
            let nbc = cartesian_k2_transfer(&seed).unwrap();
            (nbc.graph, nbc.coloring)
        } else {
            let n = rng.gen_range(1..=5);
            let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=k)).collect();
            (Graph::empty(n), Coloring::new(k, colors).unwrap())
        };
        let out = cartesian_mixed_transfer(&base, &oh, &oc).unwrap();
        assert!(verify_cnbc(&out.graph, &out.coloring).unwrap().is_balanced());

        let left = random_graph(&mut rng, rng.gen_range(1..=5), 0.5);
        let base = random_equitable_base(&mut rng, k);
        let out = lexicographic_transfer(&left, &base).unwrap();
        assert!(verify_cnbc(&out.graph, &out.coloring).unwrap().is_balanced());

        let a = random_equitable_base(&mut rng, k);
        let b = random_equitable_base(&mut rng, k);
        let out = join_transfer(&a, &b).unwrap();
        assert!(verify_cnbc(&out.graph, &out.coloring).unwrap().is_balanced());

        let base = random_base(&mut rng, k);
        let out = direct_k2_transfer(&base).unwrap();
        assert!(verify_cnbc(&out.graph, &out.coloring).unwrap().is_balanced());

        // reduce-colors from a composite color count
        let big_k = if case % 2 == 0 { 4 } else { 6 };
        let base = random_equitable_base(&mut rng, big_k);
        let p = if big_k == 4 {
            2
        } else {
            [2usize, 3][rng.gen_range(0..2)]
        };
        let reduced = reduce_colors(&base.graph, &base.coloring, p).unwrap();
        assert!(verify_cnbc(&base.graph, &reduced).unwrap().is_balanced());
    }

    // documented counterexamples, k = 3: gates fire and the composed graphs
    // independently have wrong degrees
    let k3 = color_complete(3, 3).unwrap();
    let h3 = build_hk(3).unwrap();
    assert!(matches!(
        lexicographic_transfer(&k3.graph, &h3),
        Err(TransferError::NotEquitable(_))
    ));
    let lex = build_product(ProductKind::Lexicographic, &k3.graph, &h3.graph).unwrap();
    assert!(check_degree_cnbc(&lex, 3).is_err());
    assert!(matches!(
        join_transfer(&k3, &h3),
        Err(TransferError::NotEquitable(_))
    ));
    let joined = build_product(ProductKind::Join, &k3.graph, &h3.graph).unwrap();
    assert!(check_degree_cnbc(&joined, 3).is_err());

    pass(5, format!("{CASES} randomized cases per transfer, all certified; both counterexamples rejected"));
}

#[test]
fn criterion_06_non_heredity() {
    let c4 = cycle_graph(4).unwrap();
    assert!(check_degree_cnbc(&c4, 2).is_err());
    let embedding = supergraph_embed(&c4, 2).unwrap();
    assert!(
        verify_cnbc(&embedding.colored.graph, &embedding.colored.coloring)
            .unwrap()
            .is_balanced()
    );
    let layer1 = embedding.colored.graph.induced(&embedding.embedding).unwrap();
    assert!(layer1.same_adjacency(&c4));
    pass(6, "induced C_4 inside a certified host while C_4 itself fails the degree check");
}

#[test]
fn criterion_07_vertex_addition() {
    for k in [2usize, 3, 4] {
        let hk = build_hk(k).unwrap();
        assert_eq!(hk.graph.order(), 4 * k - 2);
        assert!(verify_cnbc(&hk.graph, &hk.coloring).unwrap().is_balanced());
        let sizes = hk.coloring.class_sizes();
        for c in 0..k - 1 {
            assert_eq!(sizes[c], 1 + 3, "color {} gains three", c + 1);
        }
        assert_eq!(sizes[k - 1], 1 + 1, "z's color gains one");

        // five more rounds at a vertex of z's color
        let mut g = hk;
        let mut deficit = 2;
        for _ in 0..5 {
            let z = g
                .graph
                .vertices()
                .find(|&v| g.coloring.color(v) == k)
                .unwrap();
            g = vertex_addition_3km2(&g, z).unwrap();
            deficit += 2;
            let sizes = g.coloring.class_sizes();
            assert_eq!(sizes[0] - sizes[k - 1], deficit);
        }
    }
    pass(7, "order 4k-2, class deltas (+3.., +1), deficit widens by 2 per round for 5 rounds");
}

#[test]
fn criterion_08_solver_vs_oracle() {
    let start = Instant::now();
    let mut total = 0usize;
    for (max_n, k) in [(6usize, 2usize), (5, 3)] {
        for n in 1..=max_n {
            let pairs = n * (n - 1) / 2;
            let corpus: Vec<Graph> = (0u64..(1 << pairs))
                .map(|mask| graph_from_mask(n, mask))
                .collect();
            let report = cross_validate(&corpus, k, BalanceMode::Cnbc).unwrap();
            assert!(
                report.all_agree(),
                "disagreements for n={n}, k={k}: {:?}",
                report.disagreements
            );
            total += report.cases;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    pass(8, format!("solver and oracle agree on {total} graphs ({elapsed:?})"));
}

#[test]
fn criterion_09_reduction() {
    let instances: [(&str, Graph, Vec<usize>); 3] = [
        ("K_3", complete_graph(3).unwrap(), vec![1, 2, 3]),
        ("C_5", cycle_graph(5).unwrap(), vec![1, 2, 1, 2, 3]),
        ("P_4", path_graph(4).unwrap(), vec![1, 2, 3, 1]),
    ];
    for (name, g, proper) in &instances {
        let (expanded, cert) = build_reduction(g, 3).unwrap();
        let degree_sum: usize = g.vertices().map(|v| g.degree(v) - 1).sum();
        assert_eq!(
            expanded.order(),
            g.order() + g.size() + 5 * degree_sum,
            "size formula on {name}"
        );
        let proper = Coloring::new(3, proper.clone()).unwrap();
        let lifted = lift_coloring(g, &expanded, &cert, &proper).unwrap();
        assert!(verify_cnbc(&expanded, &lifted).unwrap().is_balanced());
        let back = extract_coloring(g, &expanded, &cert, &lifted).unwrap();
        assert_eq!(back, proper, "lift then extract on {name}");
    }

    // K_4 is not 3-colorable: a satisfiable answer would be a soundness bug
    let k4 = complete_graph(4).unwrap();
    let (expanded, cert) = build_reduction(&k4, 3).unwrap();
    assert_eq!(expanded.order(), 4 + 6 + 5 * 8);
    let opts = SolveOptions::new(3)
        .with_time_limit(Duration::from_secs(300))
        .with_cliques(cert.rainbow_cliques());
    let result = solve(&expanded, &opts).unwrap();
    match result.status {
        SolveStatus::Satisfiable(_) => panic!("balanced coloring found for the K_4 expansion"),
        SolveStatus::Unsatisfiable | SolveStatus::Timeout => {}
    }
    pass(9, format!(
        "lift/extract round-trips on K_3, C_5, P_4; K_4 expansion {} within limits",
        match result.status {
            SolveStatus::Unsatisfiable => "proved unsatisfiable",
            _ => "timed out without a false positive",
        }
    ));
}

#[test]
fn criterion_10_k2_direct_anomaly() {
    let k2 = complete_graph(2).unwrap();
    let product = build_product(ProductKind::Direct, &k2, &k2).unwrap();
    // 2K_2: two disjoint edges
    assert_eq!(product.order(), 4);
    assert_eq!(product.size(), 2);
    let result = solve(&product, &SolveOptions::new(2)).unwrap();
    assert!(result.status.is_satisfiable(), "2K_2 balances with k = 2");
    // oracle agrees
    assert!(!brute_force(&product, 2, BalanceMode::Cnbc).unwrap().is_empty());
    // the k >= 3 obstruction refuses to certify anything at k = 2
    assert!(matches!(
        direct_product_obstruction(&k2, &k2, 2),
        Err(TransferError::ObstructionNeedsKAtLeast3)
    ));
    pass(10, "K_2 x K_2 balances at k=2; obstruction certificate restricted to k >= 3");
}
