use qgraph_core::baselines::{
    brute_force_max_matching, count_augmenting_for_first, decompose_symmetric_difference,
    subset_dp_matching_size, two_coloring,
};
use qgraph_core::bipartite::{
    augment, find_disjoint_augmenting_paths, iteration_bound, AugmentingView,
};
use qgraph_core::general::find_augmenting_path_from;
use qgraph_core::graph::generate;
use qgraph_core::{
    max_bipartite_matching, max_general_matching, BlackBoxGraph, ListLayout, Matching, Model,
    OracleConfig, Rational, Searcher,
};

fn variants(g: &BlackBoxGraph, seed: u64) -> Vec<BlackBoxGraph> {
    vec![
        g.to_model(Model::Adjacency),
        g.clone(),
        g.to_layout(ListLayout {
            padding: 3,
            scatter: Some(seed),
        }),
    ]
}

#[test]
fn bipartite_agrees_with_brute_force() {
    for seed in 0..150u64 {
        let n1 = 1 + (seed % 7) as usize;
        let n2 = 1 + (seed / 7 % 7) as usize;
        let p = [0.2, 0.4, 0.7][(seed % 3) as usize];
        let g = generate::random_bipartite(n1, n2, p, seed).unwrap();
        let expected = brute_force_max_matching(&g).unwrap().value as usize;
        for h in variants(&g, seed) {
            let (m, report) = max_bipartite_matching(&h, &OracleConfig::with_seed(seed)).unwrap();
            m.validate(&h).unwrap();
            assert_eq!(m.size(), expected, "seed {seed}, model {}", h.model());
            assert!(report.iterations.len() <= iteration_bound(h.n()));
        }
    }
}

#[test]
fn bipartite_rejects_odd_cycle_and_directed_input() {
    let c5 = generate::cycle(5).unwrap();
    assert!(max_bipartite_matching(&c5, &OracleConfig::default()).is_err());
    let d = BlackBoxGraph::new(2, vec![(0, 1)], true, Model::List).unwrap();
    assert!(max_bipartite_matching(&d, &OracleConfig::default()).is_err());
    assert!(max_general_matching(&d, &OracleConfig::default()).is_err());
}

// every simple augmenting path from a free vertex in `starts`, by exhaustive DFS
fn augmenting_paths_from(
    g: &BlackBoxGraph,
    m: &Matching,
    starts: impl Iterator<Item = usize>,
) -> Vec<Vec<usize>> {
    fn extend(
        g: &BlackBoxGraph,
        m: &Matching,
        path: &mut Vec<usize>,
        on: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        let next: Vec<usize> = if path.len().is_multiple_of(2) {
            if m.is_free(v) {
                out.push(path.clone());
                return;
            }
            m.mate(v).into_iter().collect()
        } else {
            g.neighbors(v)
                .into_iter()
                .filter(|&w| !m.contains(v, w))
                .collect()
        };
        for w in next {
            if !on[w] {
                on[w] = true;
                path.push(w);
                extend(g, m, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    for x in starts.filter(|&x| m.is_free(x)) {
        let mut on = vec![false; g.n()];
        on[x] = true;
        extend(g, m, &mut vec![x], &mut on, &mut out);
    }
    out
}

#[test]
fn path_sets_are_shortest_disjoint_and_maximal() {
    let mut checked = 0;
    for seed in 0..80u64 {
        let g = generate::random_bipartite(5, 5, 0.45, seed).unwrap();
        let right = two_coloring(&g).unwrap();
        let searcher = Searcher::new(&OracleConfig::with_seed(seed), g.n());
        let mut m = Matching::empty(g.n());
        // a greedy start so that later paths are longer than one edge
        for (u, v) in g.edges().iter().copied().take(2) {
            if m.is_free(u) && m.is_free(v) {
                m = Matching::from_pairs(g.n(), &[m.pairs(), vec![(u, v)]].concat()).unwrap();
            }
        }
        loop {
            let view = AugmentingView::new(&g, &right, &m);
            let set = find_disjoint_augmenting_paths(&view, &searcher);
            let all = augmenting_paths_from(&g, &m, (0..g.n()).filter(|&x| !right[x]));
            let shortest = all.iter().map(Vec::len).min();
            if set.paths.is_empty() {
                assert!(all.is_empty(), "seed {seed}: augmenting path missed");
                break;
            }
            let len = shortest.unwrap();
            assert_eq!(set.length, Some(len + 1));
            let mut used = vec![false; g.n()];
            for p in &set.paths {
                assert_eq!(p.len(), len);
                m.check_augmenting(p).unwrap();
                for &x in p {
                    assert!(!std::mem::replace(&mut used[x], true));
                }
            }
            let extendable = all
                .iter()
                .filter(|p| p.len() == len)
                .any(|p| p.iter().all(|&x| !used[x]));
            assert!(!extendable, "seed {seed}: path set not maximal");
            m = augment(&m, &set.paths).unwrap();
            checked += 1;
        }
    }
    assert!(checked > 80);
}

#[test]
fn intermediate_matchings_leave_enough_disjoint_paths() {
    for seed in 0..100u64 {
        let g = generate::random_bipartite(6, 7, 0.35, seed).unwrap();
        let (best, report) = max_bipartite_matching(&g, &OracleConfig::with_seed(seed)).unwrap();
        for m in &report.intermediate {
            let parts = decompose_symmetric_difference(m, &best).unwrap();
            assert!(count_augmenting_for_first(&parts) >= best.size() - m.size());
        }
    }
}

#[test]
fn general_agrees_with_brute_force() {
    let mut nested = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed % 13) as usize;
        let p = [0.25, 0.4, 0.6][(seed % 3) as usize];
        let g = generate::random_graph(n, p, seed).unwrap();
        let expected = subset_dp_matching_size(&g).unwrap();
        for h in variants(&g, seed) {
            let (m, report) = max_general_matching(&h, &OracleConfig::with_seed(seed)).unwrap();
            m.validate(&h).unwrap();
            assert_eq!(m.size(), expected, "seed {seed}, model {}", h.model());
            for phase in &report.phases {
                let (c, f) = (&phase.counters, phase.even_count);
                assert!(
                    c.labeled <= f && c.bridges <= f && c.collapsed <= f,
                    "seed {seed}"
                );
                assert!(
                    c.insertions <= 2 * f,
                    "seed {seed}: {} insertions, {f} even",
                    c.insertions
                );
            }
            nested += report
                .phases
                .iter()
                .filter(|p| p.counters.collapses.len() >= 2)
                .count();
        }
    }
    assert!(nested > 0, "no phase collapsed more than one blossom");
}

#[test]
fn general_exhaustive_small() {
    for n in 2..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 1u32..(1 << pairs.len()) {
            let edges: Vec<_> = (0..pairs.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            let g = BlackBoxGraph::new(n, edges, false, Model::Adjacency).unwrap();
            let expected = brute_force_max_matching(&g).unwrap().value as usize;
            let (m, _) = max_general_matching(&g, &OracleConfig::with_seed(mask as u64)).unwrap();
            assert_eq!(m.size(), expected, "n {n}, mask {mask:b}");
        }
    }
}

// all matchings of g, by recursion over the edge list
fn all_matchings(g: &BlackBoxGraph) -> Vec<Matching> {
    fn rec(
        edges: &[(usize, usize)],
        i: usize,
        pairs: &mut Vec<(usize, usize)>,
        used: &mut [bool],
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == edges.len() {
            out.push(pairs.clone());
            return;
        }
        rec(edges, i + 1, pairs, used, out);
        let (u, v) = edges[i];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            pairs.push((u, v));
            rec(edges, i + 1, pairs, used, out);
            pairs.pop();
            used[u] = false;
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(
        g.edges(),
        0,
        &mut Vec::new(),
        &mut vec![false; g.n()],
        &mut out,
    );
    out.into_iter()
        .map(|p| Matching::from_pairs(g.n(), &p).unwrap())
        .collect()
}

#[test]
fn single_phase_finds_a_path_exactly_when_one_exists() {
    let mut cases = 0;
    let mut with_collapse = 0;
    for seed in 0..60u64 {
        let g = generate::random_graph(7 + (seed % 2) as usize, 0.45, seed).unwrap();
        for m in all_matchings(&g).into_iter().step_by(3) {
            for start in (0..g.n()).filter(|&v| m.is_free(v)) {
                let exists = !augmenting_paths_from(&g, &m, std::iter::once(start)).is_empty();
                let searcher = Searcher::new(&OracleConfig::with_seed(seed), g.n());
                let out = find_augmenting_path_from(&g, &m, start, &searcher).unwrap();
                assert_eq!(
                    out.path.is_some(),
                    exists,
                    "seed {seed}, start {start}, M {:?}",
                    m.pairs()
                );
                if let Some(path) = &out.path {
                    assert_eq!(*path.last().unwrap(), start);
                    m.check_augmenting(path).unwrap();
                }
                cases += 1;
                with_collapse += usize::from(out.counters.bridges > 0);
            }
        }
    }
    assert!(
        cases > 1000 && with_collapse > 100,
        "{cases} cases, {with_collapse} with blossoms"
    );
}

#[test]
fn nested_blossoms() {
    // triangle 1-2-3 sits on the odd cycle 0-1-(2,3)-4-5-0; the only
    // augmenting path from 6 runs through both
    let edges = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 1),
        (3, 4),
        (4, 5),
        (5, 0),
        (0, 6),
        (2, 7),
    ];
    let g = BlackBoxGraph::new(8, edges, false, Model::List).unwrap();
    let m =
        Matching::from_pairs(8, &[(0, 5), (1, 3), (2, 4)]).unwrap_or_else(|_| Matching::empty(8));
    let expected = brute_force_max_matching(&g).unwrap().value as usize;
    let (best, _) = max_general_matching(&g, &OracleConfig::with_seed(1)).unwrap();
    assert_eq!(best.size(), expected);
    if m.validate(&g).is_ok() {
        let exists = !augmenting_paths_from(&g, &m, std::iter::once(6)).is_empty();
        let searcher = Searcher::new(&OracleConfig::with_seed(2), 8);
        let out = find_augmenting_path_from(&g, &m, 6, &searcher).unwrap();
        assert_eq!(out.path.is_some(), exists);
    }
}

#[test]
fn failure_injection_stays_valid() {
    let config = OracleConfig::with_seed(4)
        .with_failure_prob(Rational::new(1, 3))
        .unwrap();
    for seed in 0..30u64 {
        let g = generate::random_graph(10, 0.4, seed).unwrap();
        let expected = subset_dp_matching_size(&g).unwrap();
        let (m, _) = max_general_matching(&g, &config).unwrap();
        m.validate(&g).unwrap();
        assert!(m.size() <= expected);
        let b = generate::random_bipartite(5, 5, 0.4, seed).unwrap();
        // a missed neighbor can restart coloring with the wrong parity, so a
        // false rejection is the other possible one-sided outcome
        match max_bipartite_matching(&b, &config) {
            Ok((mb, _)) => mb.validate(&b).unwrap(),
            Err(e) => assert!(matches!(e, qgraph_core::Error::NotBipartite(..)), "{e}"),
        }
    }
}
