//! Checks of exact values, bounds and strategy duels, grouped into suites.
//!
//! Every check compares an expected integer (from a formula, a reduction or
//! a longest path) with a computed one. Instances are independent and run on
//! the rayon pool; results keep instance order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::formulas::{gpy_lower, pyramid_lower, pyramid_upper, ratio_bound, s_of_l, tree_rounds};
use crate::game::{best_response_rounds, run_match, worst_case_rounds, Goal};
use crate::generators::{gen_gpy_complete, gen_hl, gen_pyramid, gen_tree, gen_tree_remark, random_cyclic, random_dag};
use crate::graph::Graph;
use crate::reduce::{
    longest_generalized_path_len, longest_path_len, reachability_preserved_check, reduce_multi, reduce_random_order,
    reduce_simple, MergeMode, ReductionResult,
};
use crate::solver::{solve_exact, SolverConfig};
use crate::strategies::{
    Adversary, GpyLeftCommitting, PyramidK2, PyramidRecursive, PyramidShorterSide, Questioner, TreeLevels,
    TreeMinSubtree,
};

pub const DEFAULT_SEED: u64 = 1;

pub const SUITE_NAMES: &[&str] =
    &["thm3", "thm4", "cor_reductions", "tree", "pyramid", "gpy", "hl", "ratios", "monotonicity", "remark_tree"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Small,
    Full,
}

impl Budget {
    fn time_limit(self) -> Duration {
        match self {
            Budget::Small => Duration::from_secs(60),
            Budget::Full => Duration::from_secs(1800),
        }
    }

    fn pick<T>(self, small: T, full: T) -> T {
        match self {
            Budget::Small => small,
            Budget::Full => full,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.pick("small", "full"))
    }
}

impl FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "small" => Ok(Budget::Small),
            "full" => Ok(Budget::Full),
            _ => Err(format!("unknown budget `{s}`; expected small or full")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display, pass: bool) -> Check {
        Check { name: name.into(), expected: expected.to_string(), actual: actual.to_string(), pass }
    }

    fn eq(name: impl Into<String>, expected: usize, actual: usize) -> Check {
        Check::new(name, expected, actual, expected == actual)
    }

    fn at_most(name: impl Into<String>, bound: usize, actual: usize) -> Check {
        Check::new(name, format!("<= {bound}"), actual, actual <= bound)
    }

    fn at_least(name: impl Into<String>, bound: usize, actual: usize) -> Check {
        Check::new(name, format!(">= {bound}"), actual, actual >= bound)
    }

    fn error(name: impl Into<String>, err: impl fmt::Display) -> Check {
        Check::new(name, "a value", format!("error: {err}"), false)
    }
}

/// Turns a fallible check into a failed one on error.
fn attempt(name: &str, f: impl FnOnce() -> Result<Check, String>) -> Check {
    f().unwrap_or_else(|e| Check::error(name, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub budget: Budget,
    /// False when instances were skipped after the time limit.
    pub complete: bool,
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
    /// Empirical observations without pass/fail meaning.
    pub findings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).unwrap();
        s.push('\n');
        s
    }
}

/// Which value properties to check over the cached solver values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Properties {
    Monotonicity,
    Ratios,
    All,
}

type ValueKey = (String, Goal, usize);

pub struct Verifier {
    seed: u64,
    budget: Budget,
    deadline: Instant,
    skipped: AtomicBool,
    values: Mutex<BTreeMap<ValueKey, usize>>,
    findings: Mutex<Vec<String>>,
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

impl Verifier {
    pub fn new(seed: u64, budget: Budget) -> Self {
        Verifier {
            seed,
            budget,
            deadline: Instant::now() + budget.time_limit(),
            skipped: AtomicBool::new(false),
            values: Mutex::new(BTreeMap::new()),
            findings: Mutex::new(Vec::new()),
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// False once any instance was skipped for time.
    pub fn complete(&self) -> bool {
        !self.skipped.load(Ordering::Relaxed)
    }

    pub fn findings(&self) -> Vec<String> {
        self.findings.lock().unwrap().clone()
    }

    fn note(&self, s: String) {
        self.findings.lock().unwrap().push(s);
    }

    /// Seed of the `i`-th random instance of a check family.
    fn instance_seed(&self, family: u64, i: usize) -> u64 {
        let mut x = self.seed ^ family.rotate_left(32) ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^ (x >> 31)
    }

    /// Runs `f` on each item in parallel, skipping items once the time limit passes.
    fn each<T: Sync>(&self, items: Vec<T>, f: impl Fn(&T) -> Vec<Check> + Sync) -> Vec<Check> {
        items
            .par_iter()
            .map(|item| {
                if Instant::now() > self.deadline {
                    self.skipped.store(true, Ordering::Relaxed);
                    Vec::new()
                } else {
                    f(item)
                }
            })
            .flatten()
            .collect()
    }

    /// Solver value, recorded for the property checks.
    pub fn solve(&self, g: &Graph, k: usize, goal: Goal) -> Result<usize, String> {
        let key = (g.name().to_string(), goal, k);
        if let Some(&v) = self.values.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = solve_exact(g, k, goal, &SolverConfig::default()).map_err(err)?.value;
        self.values.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// One-question sink search on random simple DAGs without out-degree-1
    /// vertices equals the longest path length.
    pub fn longest_path_equivalence(&self) -> Vec<Check> {
        let (count, max_n) = self.budget.pick((20, 8), (50, 9));
        self.each((0..count).collect(), |&i| {
            let n = 3 + i % (max_n - 2);
            let seed = self.instance_seed(1, i);
            vec![attempt(&format!("random simple dag #{i}"), || {
                let g = random_dag(n, 3, 2, false, seed).map_err(err)?;
                let l = longest_path_len(&g).map_err(err)?;
                Ok(Check::eq(format!("sink search k=1 on {}", g.name()), l, self.solve(&g, 1, Goal::Sink)?))
            })]
        })
    }

    /// With out-degree-1 vertices allowed, sink search equals the longest path
    /// of the simple reduction.
    pub fn reduced_longest_path(&self) -> Vec<Check> {
        let (count, max_n) = self.budget.pick((20, 8), (50, 10));
        self.each((0..count).collect(), |&i| {
            let n = 3 + i % (max_n - 2);
            let seed = self.instance_seed(2, i);
            vec![attempt(&format!("random dag #{i}"), || {
                let g = random_dag(n, 3, 1, false, seed).map_err(err)?;
                let l = longest_path_len(&reduce_simple(&g).map_err(err)?.graph).map_err(err)?;
                Ok(Check::eq(format!("sink search k=1 on {}", g.name()), l, self.solve(&g, 1, Goal::Sink)?))
            })]
        })
    }

    /// On multigraphs, path search equals the longest path of the multigraph
    /// reduction.
    pub fn multigraph_path_search(&self) -> Vec<Check> {
        let (count, max_n) = self.budget.pick((20, 8), (50, 10));
        self.each((0..count).collect(), |&i| {
            let n = 3 + i % (max_n - 2);
            let seed = self.instance_seed(3, i);
            vec![attempt(&format!("random multigraph #{i}"), || {
                let g = random_dag(n, 3, 1, true, seed).map_err(err)?;
                let l = longest_path_len(&reduce_multi(&g).graph).map_err(err)?;
                Ok(Check::eq(format!("path search k=1 on {}", g.name()), l, self.solve(&g, 1, Goal::Path)?))
            })]
        })
    }

    fn tree_grid(&self) -> Vec<(usize, usize, usize, Goal)> {
        let mut grid = Vec::new();
        for (d, max_n, max_k) in [(2, 3, 7), (3, 2, 4)] {
            for n in 0..=max_n {
                for k in 1..=max_k {
                    for goal in [Goal::Sink, Goal::Path] {
                        grid.push((d, n, k, goal));
                    }
                }
            }
        }
        grid
    }

    /// Exact values on complete trees.
    pub fn tree_values(&self) -> Vec<Check> {
        self.each(self.tree_grid(), |&(d, n, k, goal)| {
            let name = format!("T_{d}({n}) k={k} {goal}");
            vec![attempt(&name, || {
                let g = gen_tree(d, n).map_err(err)?;
                Ok(Check::eq(&name, tree_rounds(d, n, k).map_err(err)?, self.solve(&g, k, goal)?))
            })]
        })
    }

    /// Exact values on pyramids for up to three questions per round, and
    /// equality of sink and path search there.
    pub fn pyramid_values(&self) -> Vec<Check> {
        let max_n = self.budget.pick(3, 4);
        let cases: Vec<(usize, usize)> = (1..=max_n).flat_map(|n| (1..=3).map(move |k| (n, k))).collect();
        let checks = self.each(cases, |&(n, k)| {
            let expected = match k {
                1 => n,
                2 => (2 * n).div_ceil(3),
                _ => n.div_ceil(2),
            };
            let g = match gen_pyramid(n) {
                Ok(g) => g,
                Err(e) => return vec![Check::error(format!("Py({n})"), e)],
            };
            let mut out = Vec::new();
            let mut got = BTreeMap::new();
            for goal in [Goal::Sink, Goal::Path] {
                let name = format!("Py({n}) k={k} {goal}");
                out.push(attempt(&name, || {
                    let v = self.solve(&g, k, goal)?;
                    got.insert(goal, v);
                    Ok(Check::eq(&name, expected, v))
                }));
            }
            if let (Some(&s), Some(&p)) = (got.get(&Goal::Sink), got.get(&Goal::Path)) {
                out.push(Check::eq(format!("Py({n}) k={k} sink equals path"), p, s));
            }
            out
        });
        let equal = checks.iter().filter(|c| c.name.ends_with("sink equals path")).collect::<Vec<_>>();
        self.note(format!(
            "sink and path search agree on {}/{} pyramid instances",
            equal.iter().filter(|c| c.pass).count(),
            equal.len()
        ));
        checks
    }

    fn best_response(&self, g: &Graph, k: usize, a: &dyn Adversary, goal: Goal) -> Result<usize, String> {
        best_response_rounds(g, k, a, goal).map_err(err)
    }

    /// Optimal play against the shorter-side adversary needs at least the
    /// pyramid lower bound.
    pub fn pyramid_adversary_bound(&self) -> Vec<Check> {
        let (max_n, max_k) = self.budget.pick((4, 3), (5, 4));
        let cases: Vec<(usize, usize)> = (1..=max_n).flat_map(|n| (1..=max_k).map(move |k| (n, k))).collect();
        self.each(cases, |&(n, k)| {
            let name = format!("shorter side on Py({n}) k={k}");
            vec![attempt(&name, || {
                let g = gen_pyramid(n).map_err(err)?;
                let got = self.best_response(&g, k, &PyramidShorterSide::default(), Goal::Sink)?;
                Ok(Check::at_least(&name, pyramid_lower(n, k).map_err(err)?, got))
            })]
        })
    }

    /// Optimal play against the left-committing adversary needs at least the
    /// generalized pyramid lower bound.
    pub fn gpy_adversary_bound(&self) -> Vec<Check> {
        let (max_n, max_k) = self.budget.pick((3, 4), (4, 5));
        let mut cases = Vec::new();
        for d in 2..=3 {
            for n in 1..=max_n {
                for k in 1..=max_k {
                    cases.push((d, n, k));
                }
            }
        }
        self.each(cases, |&(d, n, k)| {
            let name = format!("left committing on GPy_{d}({n}) k={k}");
            vec![attempt(&name, || {
                let g = gen_gpy_complete(d, n).map_err(err)?;
                let got = self.best_response(&g, k, &GpyLeftCommitting::default(), Goal::Sink)?;
                Ok(Check::at_least(&name, gpy_lower(d, n, k).map_err(err)?, got))
            })]
        })
    }

    /// Optimal play against the min-subtree adversary needs at least the tree
    /// value.
    pub fn tree_adversary_bound(&self) -> Vec<Check> {
        self.each(self.tree_grid(), |&(d, n, k, goal)| {
            let name = format!("min subtree on T_{d}({n}) k={k} {goal}");
            vec![attempt(&name, || {
                let g = gen_tree(d, n).map_err(err)?;
                let got = self.best_response(&g, k, &TreeMinSubtree::default(), goal)?;
                Ok(Check::at_least(&name, tree_rounds(d, n, k).map_err(err)?, got))
            })]
        })
    }

    fn duel(g: &Graph, k: usize, q: &mut dyn Questioner, a: &mut dyn Adversary) -> Result<usize, String> {
        run_match(g, k, q, a, Goal::Sink).map(|r| r.rounds).map_err(err)
    }

    /// The two-question pyramid algorithm against the shorter-side adversary
    /// takes exactly `ceil(2n/3)` rounds.
    pub fn pyramid_k2_duel(&self) -> Vec<Check> {
        let max_n = self.budget.pick(15, 30);
        self.each((1..=max_n).collect(), |&n| {
            let name = format!("pyramid_k2 vs shorter side on Py({n})");
            vec![attempt(&name, || {
                let g = gen_pyramid(n).map_err(err)?;
                let got = Self::duel(&g, 2, &mut PyramidK2::default(), &mut PyramidShorterSide::default())?;
                Ok(Check::eq(&name, (2 * n).div_ceil(3), got))
            })]
        })
    }

    /// Level-by-level tree search against the min-subtree adversary takes
    /// exactly the tree value.
    pub fn tree_levels_duel(&self) -> Vec<Check> {
        let max_n = self.budget.pick(6, 10);
        let cases: Vec<(usize, usize)> = (1..=max_n).flat_map(|n| [1, 3, 7].map(|k| (n, k))).collect();
        self.each(cases, |&(n, k)| {
            let name = format!("tree_levels vs min subtree on T_2({n}) k={k}");
            vec![attempt(&name, || {
                let g = gen_tree(2, n).map_err(err)?;
                let got = Self::duel(&g, k, &mut TreeLevels, &mut TreeMinSubtree::default())?;
                Ok(Check::eq(&name, tree_rounds(2, n, k).map_err(err)?, got))
            })]
        })
    }

    /// The recursive pyramid algorithm with `s_l` questions per round needs
    /// at most `ceil(n/l)` rounds against both pyramid adversaries.
    pub fn pyramid_recursive_duel(&self) -> Vec<Check> {
        let max_n = self.budget.pick(12, 20);
        let mut cases = Vec::new();
        for l in 1..=3 {
            for n in 1..=max_n {
                for adv in ["shorter side", "left committing"] {
                    cases.push((l, n, adv));
                }
            }
        }
        let checks = self.each(cases, |&(l, n, adv)| {
            let name = format!("pyramid_recursive l={l} vs {adv} on Py({n})");
            vec![attempt(&name, || {
                let g = gen_pyramid(n).map_err(err)?;
                let k = s_of_l(l).map_err(err)?;
                let mut q = PyramidRecursive::new(l);
                let got = if adv == "shorter side" {
                    Self::duel(&g, k, &mut q, &mut PyramidShorterSide::default())?
                } else {
                    Self::duel(&g, k, &mut q, &mut GpyLeftCommitting::default())?
                };
                Ok(Check::at_most(&name, pyramid_upper(n, l).map_err(err)?, got))
            })]
        });
        let l3: Vec<&Check> = checks.iter().filter(|c| c.name.contains("l=3")).collect();
        self.note(format!(
            "six questions per round finish pyramids within ceil(n/3) rounds in {}/{} duels",
            l3.iter().filter(|c| c.pass).count(),
            l3.len()
        ));
        checks
    }

    /// One question per round costs `k * l` rounds on `H_l`, `k` questions cost `l`.
    pub fn hl_extremes(&self) -> Vec<Check> {
        self.each(vec![(2, 1), (2, 2), (3, 1)], |&(k, l)| {
            let g = match gen_hl(k, l) {
                Ok(g) => g,
                Err(e) => return vec![Check::error(format!("H({k},{l})"), e)],
            };
            vec![
                attempt(&format!("H({k},{l}) k=1"), || {
                    Ok(Check::eq(format!("H({k},{l}) k=1"), k * l, self.solve(&g, 1, Goal::Sink)?))
                }),
                attempt(&format!("H({k},{l}) k={k}"), || {
                    Ok(Check::eq(format!("H({k},{l}) k={k}"), l, self.solve(&g, k, Goal::Sink)?))
                }),
            ]
        })
    }

    /// Solves `g` for `k = 1..=k_max` and every supported goal, so the
    /// property checks can use the values.
    pub fn record_values(&self, g: &Graph, k_max: usize) -> Result<(), String> {
        let goals: &[Goal] = if g.is_acyclic() { &[Goal::Sink, Goal::Path] } else { &[Goal::Path] };
        for &goal in goals {
            for k in 1..=k_max {
                self.solve(g, k, goal)?;
            }
        }
        Ok(())
    }

    /// Populates the value cache with a fixed instance mix.
    pub fn sample_values(&self) -> Vec<Check> {
        let max_n = self.budget.pick(3, 4);
        let mut graphs: Vec<(String, Result<Graph, String>)> = Vec::new();
        for n in 1..=max_n {
            graphs.push((format!("Py({n})"), gen_pyramid(n).map_err(err)));
        }
        for n in 1..=3 {
            graphs.push((format!("T_2({n})"), gen_tree(2, n).map_err(err)));
        }
        for (k, l) in [(2, 1), (2, 2), (3, 1)] {
            graphs.push((format!("H({k},{l})"), gen_hl(k, l).map_err(err)));
        }
        for i in 0..self.budget.pick(4, 10) {
            graphs.push((format!("random dag #{i}"), random_dag(7, 3, 1, i % 2 == 1, self.instance_seed(9, i)).map_err(err)));
        }
        self.each(graphs, |(name, g)| match g.as_ref().map_err(|e| e.clone()).and_then(|g| self.record_values(g, 4)) {
            Ok(()) => Vec::new(),
            Err(e) => vec![Check::error(format!("values of {name}"), e)],
        })
    }

    /// Monotonicity in `k`, sink search not above path search, and the
    /// `ceil(k/m)` ratio bound, over every value solved so far.
    pub fn value_properties(&self, which: Properties) -> Vec<Check> {
        let values = self.values.lock().unwrap().clone();
        let mut by_graph: BTreeMap<&str, BTreeMap<(Goal, usize), usize>> = BTreeMap::new();
        for ((name, goal, k), v) in &values {
            by_graph.entry(name).or_default().insert((*goal, *k), *v);
        }
        let monotone = which != Properties::Ratios;
        let ratios = which != Properties::Monotonicity;
        let mut out = Vec::new();
        for (name, vals) in by_graph {
            let mut pairs = 0;
            let mut bad = Vec::new();
            for (&(goal, k), &v) in &vals {
                if monotone {
                    if let Some(&next) = vals.get(&(goal, k + 1)) {
                        pairs += 1;
                        if next > v {
                            bad.push(format!("{goal} k={} is {next} > {v} at k={k}", k + 1));
                        }
                    }
                    if goal == Goal::Sink {
                        if let Some(&p) = vals.get(&(Goal::Path, k)) {
                            pairs += 1;
                            if v > p {
                                bad.push(format!("k={k}: sink {v} > path {p}"));
                            }
                        }
                    }
                }
                if ratios {
                    for (&(g2, k2), &v2) in vals.range((goal, k + 1)..=(goal, usize::MAX)) {
                        debug_assert_eq!(g2, goal);
                        pairs += 1;
                        let factor = ratio_bound(k, k2).expect("k <= k2");
                        if v > factor * v2 {
                            bad.push(format!("{goal}: value {v} at k={k} exceeds {factor} * {v2} at k={k2}"));
                        }
                    }
                }
            }
            if pairs > 0 {
                let label = match which {
                    Properties::Monotonicity => "monotonicity",
                    Properties::Ratios => "ratio bound",
                    Properties::All => "monotonicity and ratio bound",
                };
                let actual = if bad.is_empty() { format!("{pairs} comparisons hold") } else { bad.join("; ") };
                out.push(Check::new(format!("{label} on {name}"), "all comparisons hold", actual, bad.is_empty()));
            }
        }
        out
    }

    /// Random merge orders give the same reduced graph, and reductions keep
    /// reachability between surviving vertices.
    pub fn reduction_order_independence(&self) -> Vec<Check> {
        let (graphs, orders) = self.budget.pick((10, 10), (20, 20));
        self.each((0..graphs).collect(), |&i| {
            let multi = i % 2 == 1;
            let n = 4 + i % 7;
            let seed = self.instance_seed(10, i);
            let g = match random_dag(n, 3, 1, multi, seed) {
                Ok(g) => g,
                Err(e) => return vec![Check::error(format!("random graph #{i}"), e)],
            };
            let (mode, base) = if multi {
                (MergeMode::Multi, Ok(reduce_multi(&g)))
            } else {
                (MergeMode::Simple, reduce_simple(&g).map_err(err))
            };
            let base = match base {
                Ok(b) => b,
                Err(e) => return vec![Check::error(format!("reduce {}", g.name()), e)],
            };
            let shape = |r: &ReductionResult| {
                let mut ids: Vec<String> = r.graph.vertices().iter().map(|v| v.id.clone()).collect();
                ids.sort();
                (r.graph.ordered_canonical_form(), ids)
            };
            let want = shape(&base);
            let mut same = 0;
            let mut reach = usize::from(reachability_preserved_check(&g, &base));
            for j in 0..orders {
                match reduce_random_order(&g, mode, self.instance_seed(11, i * orders + j)) {
                    Ok(r) => {
                        same += usize::from(shape(&r) == want);
                        reach += usize::from(reachability_preserved_check(&g, &r));
                    }
                    Err(e) => return vec![Check::error(format!("random merge order on {}", g.name()), e)],
                }
            }
            vec![
                Check::eq(format!("merge orders agree on {}", g.name()), orders, same),
                Check::eq(format!("reachability preserved on {}", g.name()), orders + 1, reach),
            ]
        })
    }

    /// Optimal play on the remark tree beats level-by-level search.
    pub fn greedy_tree_gap(&self) -> Vec<Check> {
        let name = "tree_remark(3) k=2 path: optimal below tree_levels worst case";
        vec![attempt(name, || {
            let g = gen_tree_remark(3).map_err(err)?;
            let opt = self.solve(&g, 2, Goal::Path)?;
            let greedy = worst_case_rounds(&g, 2, &TreeLevels, Goal::Path).map_err(err)?;
            Ok(Check::new(name, format!("< {greedy}"), opt, opt < greedy))
        })]
    }

    /// On cyclic multigraphs, path search equals the longest generalized path.
    pub fn cyclic_path_search(&self) -> Vec<Check> {
        let (count, max_n) = self.budget.pick((10, 7), (20, 8));
        self.each((0..count).collect(), |&i| {
            let n = 3 + i % (max_n - 2);
            let seed = self.instance_seed(12, i);
            vec![attempt(&format!("random cyclic multigraph #{i}"), || {
                let g = random_cyclic(n, 3, 2, seed).map_err(err)?;
                let l = longest_generalized_path_len(&g).map_err(err)?;
                Ok(Check::eq(format!("path search k=1 on {}", g.name()), l, self.solve(&g, 1, Goal::Path)?))
            })]
        })
    }

    pub fn report(&self, suite: &str, checks: Vec<Check>) -> Report {
        let failed = checks.iter().filter(|c| !c.pass).count();
        let complete = self.complete();
        Report {
            suite: suite.to_string(),
            seed: self.seed,
            budget: self.budget,
            complete,
            passed: complete && failed == 0,
            total: checks.len(),
            failed,
            checks,
            findings: self.findings(),
        }
    }
}

/// Runs a named suite.
pub fn run_suite(name: &str, seed: u64, budget: Budget) -> Result<Report, String> {
    let v = Verifier::new(seed, budget);
    let checks = match name {
        "thm3" => v.longest_path_equivalence(),
        "cor_reductions" => [v.reduced_longest_path(), v.reduction_order_independence()].concat(),
        "thm4" => [v.multigraph_path_search(), v.cyclic_path_search()].concat(),
        "tree" => [v.tree_values(), v.tree_adversary_bound(), v.tree_levels_duel()].concat(),
        "pyramid" => [
            v.pyramid_values(),
            v.pyramid_adversary_bound(),
            v.pyramid_k2_duel(),
            v.pyramid_recursive_duel(),
        ]
        .concat(),
        "gpy" => v.gpy_adversary_bound(),
        "hl" => v.hl_extremes(),
        "remark_tree" => v.greedy_tree_gap(),
        "ratios" => [v.sample_values(), v.value_properties(Properties::Ratios)].concat(),
        "monotonicity" => [v.sample_values(), v.value_properties(Properties::Monotonicity)].concat(),
        _ => return Err(format!("unknown suite `{name}`; known: {}", SUITE_NAMES.join(", "))),
    };
    Ok(v.report(name, checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn one_vertex_graph_passes_properties_vacuously() {
        let mut b = GraphBuilder::new("point");
        b.vertex("s", None, &[]);
        let g = b.build().unwrap();
        let v = Verifier::new(DEFAULT_SEED, Budget::Small);
        v.record_values(&g, 3).unwrap();
        let checks = v.value_properties(Properties::Ratios);
        assert!(checks.iter().all(|c| c.pass));
        assert!(v.report("ratios", checks).passed);
    }

    #[test]
    fn property_check_flags_violations() {
        let v = Verifier::new(DEFAULT_SEED, Budget::Small);
        {
            let mut values = v.values.lock().unwrap();
            values.insert(("x".into(), Goal::Sink, 1), 1);
            values.insert(("x".into(), Goal::Sink, 2), 2);
            values.insert(("x".into(), Goal::Path, 1), 0);
        }
        let checks = v.value_properties(Properties::Monotonicity);
        assert_eq!(checks.len(), 1);
        assert!(!checks[0].pass);
        assert!(checks[0].actual.contains("sink 1 > path 0"));
    }

    #[test]
    fn pyramid_suite_includes_the_four_level_value() {
        let v = Verifier::new(DEFAULT_SEED, Budget::Full);
        let checks = v.pyramid_values();
        let c = checks.iter().find(|c| c.name == "Py(4) k=2 path").unwrap();
        assert_eq!((c.expected.as_str(), c.actual.as_str(), c.pass), ("3", "3", true));
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_suite("hl", 7, Budget::Small).unwrap();
        let b = run_suite("hl", 7, Budget::Small).unwrap();
        assert_eq!(a.checks, b.checks);
        assert!(a.passed);
        assert!(run_suite("nope", 0, Budget::Small).is_err());
    }

    #[test]
    fn budget_names_round_trip() {
        for b in [Budget::Small, Budget::Full] {
            assert_eq!(b.to_string().parse::<Budget>().unwrap(), b);
        }
        assert!("medium".parse::<Budget>().is_err());
    }
}
