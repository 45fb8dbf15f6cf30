use qgraph_core::baselines::{edmonds_karp, min_cut_brute_force};
use qgraph_core::flow::{
    blocking_flow, depth_monotone, max_flow_with, phase_count_check, residual_bound_check,
    PhaseMode, ResidualView,
};
use qgraph_core::graph::generate;
use qgraph_core::{assign_layers, IntegerFlow, IntegerNetwork, Model, OracleConfig, Searcher};

fn networks() -> impl Iterator<Item = (u64, IntegerNetwork)> {
    (0..160u64).map(|seed| {
        let n = 2 + (seed % 11) as usize;
        let bound = 1 + seed % 4;
        let m = (n - 1) + (seed as usize * 7) % (n * (n - 1) - (n - 1) + 1);
        (seed, generate::random_network(n, m, bound, seed).unwrap())
    })
}

#[test]
fn value_matches_both_oracles() {
    for (seed, net) in networks() {
        let expected = edmonds_karp(&net).value;
        assert_eq!(min_cut_brute_force(&net).unwrap(), expected);
        for model in [Model::Adjacency, Model::List] {
            let view = net.to_model(model);
            let (flow, report) =
                max_flow_with(&view, &OracleConfig::with_seed(seed), true).unwrap();
            flow.validate(&view).unwrap();
            assert_eq!(flow.value(), expected, "seed {seed}, model {model}");
            assert!(residual_bound_check(&view, &report, expected)
                .into_iter()
                .all(|ok| ok));
            assert_eq!(phase_count_check(&view, &report), (true, true));
            assert!(depth_monotone(&report), "seed {seed}");
            assert!(report
                .phases
                .iter()
                .all(|p| p.degree_violations == 0 && p.degree_checks > 0));
        }
    }
}

// is the sink reachable from the source through layer-increasing residual arcs?
fn layered_path_exists(view: &ResidualView<'_>, layer: &[Option<usize>], depth: usize) -> bool {
    let net = view.network();
    let mut stack = vec![net.source()];
    let mut seen = vec![false; net.n()];
    while let Some(v) = stack.pop() {
        if v == net.sink() {
            return true;
        }
        let lv = layer[v].unwrap();
        for (w, _) in view.residual_neighbors(v) {
            let ok = layer[w] == Some(lv + 1) && (lv + 1 < depth || w == net.sink());
            if ok && !std::mem::replace(&mut seen[w], true) {
                stack.push(w);
            }
        }
    }
    false
}

#[test]
fn each_phase_is_blocking() {
    for (seed, net) in networks().filter(|(_, net)| net.bound() == 1) {
        for model in [Model::Adjacency, Model::List] {
            let net = net.to_model(model);
            let searcher = Searcher::new(&OracleConfig::with_seed(seed), net.n());
            let mut view = ResidualView::new(&net, IntegerFlow::zero(&net));
            let mut last_depth = 0;
            loop {
                let layers = assign_layers(&view, net.source(), &searcher);
                let Some(depth) = layers.of(net.sink()) else {
                    break;
                };
                assert!(depth > last_depth);
                last_depth = depth;
                let stats = blocking_flow(&mut view, &layers, &searcher, None, true).unwrap();
                assert!(
                    !layered_path_exists(&view, &layers.layer, depth),
                    "seed {seed}"
                );
                assert_eq!(stats.degree_violations, 0);
                let mut stats = stats;
                stats.layers = Some(layers);
                // one vertex per layer on every path
                for (l, sum) in stats.layer_sums().into_iter().enumerate().skip(1) {
                    assert_eq!(sum, stats.paths, "layer {l}");
                }
                assert!(stats.a.iter().sum::<u64>() <= depth as u64 * stats.paths);
                assert!(stats.c.iter().sum::<u64>() <= net.n() as u64);
            }
            assert_eq!(view.flow().value(), edmonds_karp(&net).value);
        }
    }
}

#[test]
fn hard_instances() {
    for p in 1..=10usize {
        for extra in 0..=1usize {
            if p * p / 2 + extra > p * p {
                continue;
            }
            let net = generate::majority_hard_instance(p, extra, p as u64).unwrap();
            let expected = (p * p / 2 + extra) as i64;
            assert_eq!(edmonds_karp(&net).value, expected);
            for model in [Model::Adjacency, Model::List] {
                let net = net.to_model(model);
                let (flow, report) =
                    max_flow_with(&net, &OracleConfig::with_seed(7), p <= 5).unwrap();
                assert_eq!(flow.value(), expected, "p {p}, extra {extra}");
                assert!(residual_bound_check(&net, &report, expected)
                    .into_iter()
                    .all(|ok| ok));
            }
        }
    }
}

#[test]
fn long_paths_switch_to_single_augmentation() {
    // two disjoint unit paths of 19 and 20 arcs: deeper than k from the start
    let n = 39;
    let t = n - 1;
    let mut arcs: Vec<(usize, usize)> = vec![(0, 1)];
    arcs.extend((1..19).map(|v| (v, v + 1)));
    arcs.push((19, t));
    arcs.push((0, 20));
    arcs.extend((20..37).map(|v| (v, v + 1)));
    arcs.push((37, t));
    let g = qgraph_core::BlackBoxGraph::new(n, arcs.clone(), true, Model::List).unwrap();
    let net = IntegerNetwork::new(g, vec![1; arcs.len()], 0, t, 1).unwrap();
    let (flow, report) = max_flow_with(&net, &OracleConfig::with_seed(1), true).unwrap();
    assert!(report.threshold < 19);
    assert_eq!(flow.value(), 2);
    assert_eq!(report.switched_at, Some(0));
    assert!(report
        .phases
        .iter()
        .all(|p| p.mode == PhaseMode::SingleAugmenting && p.paths == 1));
    assert_eq!(phase_count_check(&net, &report), (true, true));
    assert_eq!(report.dyadic_constant, 0.0);
}

#[test]
fn deterministic_per_seed() {
    let net = generate::random_network(12, 40, 3, 9).unwrap();
    let run = |seed| {
        let (flow, report) = max_flow_with(&net, &OracleConfig::with_seed(seed), false).unwrap();
        (flow, serde_json::to_string(&report).unwrap())
    };
    assert_eq!(run(5), run(5));
}
