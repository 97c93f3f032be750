use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use proptest::prelude::*;

use procorder::algos::{AlgorithmSpec, Bfs, Direction, PageRank, Php, Sssp};
use procorder::engine::{run_async, run_async_observed, run_sync, run_sync_visiting, EngineConfig, Mode};
use procorder::gograph::reorder;
use procorder::metric::{brute_force_best_order, evaluate_m};
use procorder::{GoGraphConfig, Graph, Ordering};

fn dijkstra(g: &Graph, s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.n()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    // weights are small integers, so scaled integer keys are exact
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d as f64 > dist[u] {
            continue;
        }
        for (v, w) in g.out_edges(u) {
            let nd = dist[u] + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd as u64, v)));
            }
        }
    }
    dist
}

fn bfs_levels(g: &Graph, s: usize) -> Vec<f64> {
    let mut level = vec![f64::INFINITY; g.n()];
    level[s] = 0.0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in g.out_neighbors(u) {
            if level[v].is_infinite() {
                level[v] = level[u] + 1.0;
                q.push_back(v);
            }
        }
    }
    level
}

/// Random multigraph with self-loops and integer weights in 1..=9.
fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1u32..10), 0..=max_m).prop_map(move |edges| {
            let edges: Vec<_> = edges.into_iter().map(|(u, v, w)| (u, v, w as f64)).collect();
            Graph::from_weighted_edges(n, &edges)
        })
    })
}

fn arb_graph_with_order(max_n: usize, max_m: usize) -> impl Strategy<Value = (Graph, Ordering)> {
    arb_graph(max_n, max_m).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|(g, seq)| (g, Ordering::from_seq(seq).unwrap()))
    })
}

fn cfg(mode: Mode) -> EngineConfig {
    EngineConfig {
        mode,
        ..EngineConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reorder_keeps_half_of_the_edges(g in arb_graph(40, 160), hub_fraction in 0.0f64..0.3, cap in 1usize..12) {
        let config = GoGraphConfig { hub_fraction, max_part_size: cap, audit: true };
        let r = reorder(&g, &config).unwrap();
        let m = evaluate_m(&g, &r.order).unwrap();
        prop_assert!(2 * m.m_value >= m.edges_considered);
        prop_assert_eq!(r.half_bound_violations(), 0);
        prop_assert_eq!(r.report.total.positive, m.m_value);
    }

    #[test]
    fn reorder_never_beats_the_optimum(g in arb_graph(7, 20)) {
        let ours = evaluate_m(&g, &procorder::gograph_order(&g, &GoGraphConfig::default()).unwrap()).unwrap();
        let (_, best) = brute_force_best_order(&g).unwrap();
        prop_assert!(ours.m_value <= best);
        prop_assert!(2 * ours.m_value >= ours.edges_considered);
    }

    #[test]
    fn sync_ignores_visit_order((g, visit) in arb_graph_with_order(20, 60)) {
        for spec in [&Sssp::new(0) as &dyn AlgorithmSpec, &PageRank::new(0.85).unwrap(), &Php::new(0, 0.85).unwrap()] {
            let a = run_sync(&g, spec, &cfg(Mode::Sync)).unwrap();
            let b = run_sync_visiting(&g, spec, &cfg(Mode::Sync), &visit, &mut |_, _| {}).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn async_paths_match_oracles((g, order) in arb_graph_with_order(25, 80)) {
        let sssp = run_async(&g, &order, &Sssp::new(0), &cfg(Mode::Async)).unwrap();
        prop_assert!(sssp.converged);
        prop_assert_eq!(&sssp.final_states, &dijkstra(&g, 0));
        let bfs = run_async(&g, &order, &Bfs::new(0), &cfg(Mode::Async)).unwrap();
        prop_assert_eq!(&bfs.final_states, &bfs_levels(&g, 0));
        prop_assert_eq!(sssp.total_sweeps, sssp.changing_sweeps + 1);
    }

    #[test]
    fn sum_criterion_modes_agree((g, order) in arb_graph_with_order(25, 80)) {
        for spec in [&PageRank::new(0.85).unwrap() as &dyn AlgorithmSpec, &Php::new(0, 0.85).unwrap()] {
            let s = run_sync(&g, spec, &cfg(Mode::Sync)).unwrap();
            let a = run_async(&g, &order, spec, &cfg(Mode::Async)).unwrap();
            prop_assert!(s.converged && a.converged);
            let gap = s.final_states.iter().zip(&a.final_states).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            prop_assert!(gap <= 1e-5, "L-inf gap {}", gap);
        }
    }

    #[test]
    fn async_trajectories_are_monotone((g, order) in arb_graph_with_order(25, 80)) {
        let specs: [&dyn AlgorithmSpec; 4] = [&Sssp::new(0), &Bfs::new(0), &PageRank::new(0.85).unwrap(), &Php::new(0, 0.85).unwrap()];
        for spec in specs {
            let mut prev = spec.init(&g);
            let dir = spec.direction();
            let mut ok = true;
            run_async_observed(&g, &order, spec, &cfg(Mode::Async), &mut |_, x| {
                for (p, c) in prev.iter().zip(x) {
                    ok &= match dir {
                        Direction::NonIncreasing => c <= p,
                        Direction::NonDecreasing => c >= p,
                    };
                }
                prev.copy_from_slice(x);
            })
            .unwrap();
            prop_assert!(ok, "{} not monotone", spec.name());
        }
    }
}

/// States after the first async sweep.
fn first_sweep(g: &Graph, order: &Ordering) -> Vec<f64> {
    let mut out = Vec::new();
    let one = EngineConfig {
        max_sweeps: 1,
        ..cfg(Mode::Async)
    };
    run_async_observed(g, order, &Sssp::new(0), &one, &mut |_, x| out = x.to_vec()).unwrap();
    out
}

#[test]
fn extra_positive_edge_never_hurts_first_sweep() {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut instances = 0;
    while instances < 300 {
        let n = rng.gen_range(2..=8);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.3) {
                    edges.push((u, v, rng.gen_range(1..10) as f64));
                }
            }
        }
        let g = Graph::from_weighted_edges(n, &edges);
        let has = |u: usize, v: usize| edges.iter().any(|&(a, b, _)| a == u && b == v);
        let mut seq: Vec<usize> = (0..n).collect();
        seq.shuffle(&mut rng);
        let base = Ordering::from_seq(seq.clone()).unwrap();
        let before = first_sweep(&g, &base);
        let mut any = false;
        for i in 0..n - 1 {
            let (a, b) = (seq[i], seq[i + 1]);
            // swapping makes b -> a positive; a -> b must not exist
            if !has(b, a) || has(a, b) {
                continue;
            }
            let mut swapped = seq.clone();
            swapped.swap(i, i + 1);
            let o2 = Ordering::from_seq(swapped).unwrap();
            assert_eq!(
                evaluate_m(&g, &o2).unwrap().m_value,
                evaluate_m(&g, &base).unwrap().m_value + 1
            );
            let after = first_sweep(&g, &o2);
            for v in 0..n {
                assert!(
                    after[v] <= before[v],
                    "vertex {v}: {} > {} on {edges:?}, {seq:?} swap {i}",
                    after[v],
                    before[v]
                );
            }
            checked += 1;
            any = true;
        }
        instances += usize::from(any);
    }
    assert!(checked >= 300);
}
