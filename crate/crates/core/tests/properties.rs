mod common;

use proptest::prelude::*;
use switchquest::formulas::{log_prime, pyramid_lower, pyramid_upper, s_of_l};
use switchquest::game::{flow, is_determined, possible_sinks, run_match};
use switchquest::generators::{gen_gpy_complete, gen_pyramid, gen_tree, random_cyclic, random_dag};
use switchquest::reduce::{
    longest_generalized_path_len, longest_path_len, reachability_preserved_check, reduce_multi, reduce_simple,
};
use switchquest::solver::{solve_exact, SolverConfig};
use switchquest::strategies::{
    AlgorithmA, FixedAssignment, GpyLeftCommitting, LayeredComplete, LongestPathCases, Questioner,
    TreeLevels, TreeMinSubtree,
};
use switchquest::{Goal, Graph, Knowledge, SwitchAssignment};

fn solve(g: &Graph, k: usize, goal: Goal) -> usize {
    solve_exact(g, k, goal, &SolverConfig::default()).unwrap().value
}

fn small_dag() -> impl Strategy<Value = Graph> {
    (3usize..=8, 2usize..=3, 1usize..=2, any::<bool>(), any::<u64>())
        .prop_map(|(n, max, min, multi, seed)| random_dag(n, max, min.min(max), multi, seed).unwrap())
}

/// A random full assignment of `g` as out-edge positions.
fn assignment(g: &Graph, picks: &[usize]) -> SwitchAssignment {
    let positions: Vec<usize> =
        (0..g.vertex_count()).map(|v| picks[v % picks.len()] % g.out_degree(v).max(1)).collect();
    SwitchAssignment::from_positions(g, &positions).unwrap()
}

/// Knowledge holding the assignment's switches on the vertices selected by `mask`.
fn partial(g: &Graph, a: &SwitchAssignment, mask: &[bool]) -> Knowledge {
    let mut know = Knowledge::new(g);
    for v in 0..g.vertex_count() {
        if mask[v % mask.len()] && !g.is_sink(v) {
            know.reveal(g, v, a.get(v).unwrap()).unwrap();
        }
    }
    know
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reductions_leave_no_forced_vertices(g in small_dag()) {
        for r in [reduce_simple(&g).unwrap(), reduce_multi(&g)] {
            prop_assert!((0..r.graph.vertex_count()).all(|v| r.graph.is_sink(v) || r.graph.out_degree(v) >= 2));
            prop_assert!(r.graph.is_acyclic());
            prop_assert!(reachability_preserved_check(&g, &r));
        }
    }

    #[test]
    fn solver_matches_brute_force(g in small_dag(), k in 1usize..=2) {
        prop_assume!(g.askable().len() <= 6);
        for goal in [Goal::Sink, Goal::Path] {
            prop_assert_eq!(solve(&g, k, goal), common::brute_value(&g, k, goal));
        }
    }

    #[test]
    fn value_properties_hold(g in small_dag()) {
        let ks = 1..=g.askable().len().clamp(1, 4);
        let sink: Vec<usize> = ks.clone().map(|k| solve(&g, k, Goal::Sink)).collect();
        let path: Vec<usize> = ks.map(|k| solve(&g, k, Goal::Path)).collect();
        for vals in [&sink, &path] {
            prop_assert!(vals.windows(2).all(|w| w[1] <= w[0]));
            for m in 1..=vals.len() {
                for k in m..=vals.len() {
                    prop_assert!(vals[m - 1] <= k.div_ceil(m) * vals[k - 1]);
                }
            }
        }
        prop_assert!(sink.iter().zip(&path).all(|(s, p)| s <= p));
    }

    #[test]
    fn reduction_keeps_values(g in small_dag(), k in 1usize..=3) {
        let simple = reduce_simple(&g).unwrap().graph;
        let multi = reduce_multi(&g).graph;
        prop_assert_eq!(solve(&g, k, Goal::Sink), solve(&simple, k, Goal::Sink));
        prop_assert_eq!(solve(&g, k, Goal::Path), solve(&multi, k, Goal::Path));
    }

    #[test]
    fn solver_settings_do_not_change_values(g in small_dag(), k in 1usize..=3) {
        let base = solve_exact(&g, k, Goal::Sink, &SolverConfig::default()).unwrap();
        let par = solve_exact(&g, k, Goal::Sink, &SolverConfig { parallel: true, symmetry_reduction: true, ..Default::default() }).unwrap();
        prop_assert_eq!(base.value, par.value);
        prop_assert_eq!(base.optimal_first_moves, par.optimal_first_moves);
    }

    #[test]
    fn flow_and_sinks_respect_more_knowledge(
        g in small_dag(),
        picks in prop::collection::vec(0usize..3, 1..8),
        small in prop::collection::vec(any::<bool>(), 1..8),
        extra in prop::collection::vec(any::<bool>(), 1..8),
    ) {
        let a = assignment(&g, &picks);
        let less = partial(&g, &a, &small);
        let both: Vec<bool> = (0..g.vertex_count()).map(|v| small[v % small.len()] || extra[v % extra.len()]).collect();
        let more = partial(&g, &a, &both);
        let (f1, f2) = (flow(&g, &less), flow(&g, &more));
        prop_assert_eq!(&f2.vertices[..f1.vertices.len()], &f1.vertices[..]);
        let (s1, s2) = (possible_sinks(&g, &less), possible_sinks(&g, &more));
        prop_assert!(s2.iter().all(|s| s1.contains(s)));
        for know in [&less, &more] {
            prop_assert!(!is_determined(&g, know, Goal::Path) || is_determined(&g, know, Goal::Sink));
        }
    }

    #[test]
    fn matches_replay_from_their_revealed_assignment(g in small_dag()) {
        prop_assume!(!g.askable().is_empty());
        let g = reduce_simple(&g).unwrap().graph;
        let mut adv = LongestPathCases::default();
        let first = run_match(&g, 1, &mut AlgorithmA, &mut adv, Goal::Sink).unwrap();
        let mut choice: Vec<_> = first.knowledge.choices().to_vec();
        for (v, c) in choice.iter_mut().enumerate() {
            if c.is_none() && !g.is_sink(v) {
                *c = Some(g.out_edges(v)[0]);
            }
        }
        let fixed = SwitchAssignment::partial(choice);
        let again = run_match(&g, 1, &mut AlgorithmA, &mut FixedAssignment::new(fixed), Goal::Sink).unwrap();
        prop_assert_eq!(first.to_json(&g), again.to_json(&g));
    }

    #[test]
    fn longest_path_adversary_shrinks_by_at_most_one(g in small_dag()) {
        let g = reduce_simple(&g).unwrap().graph;
        prop_assume!(!g.askable().is_empty());
        let mut adv = LongestPathCases::default();
        let r = run_match(&g, 1, &mut AlgorithmA, &mut adv, Goal::Sink).unwrap();
        prop_assert!(adv.length_log().iter().all(|&(b, a)| a <= b && b - a <= 1));
        prop_assert_eq!(r.rounds, longest_path_len(&g).unwrap());
    }

    #[test]
    fn algorithm_a_stays_within_longest_path(g in small_dag(), k in 1usize..=3) {
        let wc = switchquest::game::worst_case_rounds(&g, k, &AlgorithmA, Goal::Path).unwrap();
        prop_assert!(wc <= longest_path_len(&g).unwrap());
    }

    #[test]
    fn snapshots_play_like_the_original(n in 2usize..=6, picks in prop::collection::vec(0usize..2, 1..6)) {
        let g = gen_pyramid(n).unwrap();
        let a = assignment(&g, &picks);
        let mut q = switchquest::strategies::PyramidK2::default();
        q.prepare(&g, 2).unwrap();
        let mut know = Knowledge::new(&g);
        let first = q.ask(&g, 2, &know).unwrap();
        for &v in &first {
            know.reveal(&g, v, a.get(v).unwrap()).unwrap();
        }
        let mut copy = q.snapshot();
        prop_assert_eq!(q.ask(&g, 2, &know).unwrap(), copy.ask(&g, 2, &know).unwrap());
    }

    #[test]
    fn cyclic_path_search_equals_generalized_path(n in 3usize..=7, seed in any::<u64>()) {
        let g = random_cyclic(n, 3, 2, seed).unwrap();
        let lg = longest_generalized_path_len(&g).unwrap();
        prop_assert!(lg >= 1);
        prop_assert_eq!(solve(&g, 1, Goal::Path), lg);
    }
}

#[test]
fn log_prime_brackets_its_argument() {
    for d in 2..=5usize {
        for k in 1..=200usize {
            let i = log_prime(d, k).unwrap() as u32;
            let level_sum = |j: u32| (d.pow(j) - 1) / (d - 1);
            assert!(level_sum(i) <= k && k < level_sum(i + 1), "d={d} k={k}");
        }
    }
}

#[test]
fn pyramid_bounds_meet_for_small_l() {
    for n in 1..=100 {
        for l in 1..=5 {
            let (lo, hi) = (pyramid_lower(n, s_of_l(l).unwrap()).unwrap(), pyramid_upper(n, l).unwrap());
            assert!(lo <= hi, "n={n} l={l}");
            if l <= 2 {
                assert_eq!(lo, hi, "n={n} l={l}");
            }
        }
    }
}

#[test]
fn tree_min_subtree_puts_few_asked_vertices_on_the_final_path() {
    for (d, n) in [(2, 4), (3, 3)] {
        let g = gen_tree(d, n).unwrap();
        for k in 1..=9 {
            let r = run_match(&g, k, &mut TreeLevels, &mut TreeMinSubtree::default(), Goal::Path).unwrap();
            let switchquest::game::Outcome::Path(path) = &r.outcome else { panic!("path goal") };
            let bound = log_prime(d, k).unwrap();
            for round in &r.transcript {
                let on = round.questions.iter().filter(|v| path.contains(v)).count();
                assert!(on <= bound, "T_{d}({n}) k={k}: {on} > {bound}");
            }
        }
    }
}

#[test]
fn left_committing_answers_one_flow_end_per_round() {
    for (d, n) in [(2, 5), (3, 4)] {
        let g = gen_gpy_complete(d, n).unwrap();
        for k in 1..=6 {
            let mut adv = GpyLeftCommitting::default();
            run_match(&g, k, &mut LayeredComplete::default(), &mut adv, Goal::Sink).unwrap();
            assert!(adv.endpoint_answers_per_round().iter().all(|&c| c <= 1));
            let mut adv = GpyLeftCommitting::default();
            run_match(&g, k, &mut AlgorithmA, &mut adv, Goal::Sink).unwrap();
            assert!(adv.endpoint_answers_per_round().iter().all(|&c| c <= 1));
        }
    }
}
