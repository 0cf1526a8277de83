//! Exact `si_k` / `pa_k` by memoized minimax over knowledge states.
//!
//! `wins(state, d)` asks whether the questioner can determine the goal within
//! `d` rounds. The value is the least `d` that wins, found by deepening. Memo
//! entries store the largest failing and smallest winning depth per state.
//!
//! A state is keyed by the flow frontier and the switches reachable from it,
//! since nothing else can affect the rest of the game. Below the root only
//! question sets of the largest possible size over reachable hidden vertices
//! are tried: extra answers never hurt the questioner.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use dashmap::DashMap;
use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::game::{
    answer_combinations, flow, is_determined, pruned_reach, relevant_unknown, GameError, Goal, Knowledge,
};
use crate::graph::{Graph, VertexIx};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_askable: usize,
    pub symmetry_reduction: bool,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_askable: 16, symmetry_reduction: false, parallel: false }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolveStats {
    pub states: u64,
    pub memo_hits: u64,
    pub ms: u64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub value: usize,
    /// Every root question set of size at most `k` that achieves `value`.
    pub optimal_first_moves: Vec<Vec<VertexIx>>,
    pub stats: SolveStats,
}

#[derive(Serialize)]
struct SolveDoc<'a> {
    value: usize,
    optimal_first_moves: Vec<Vec<&'a str>>,
    stats: &'a SolveStats,
}

impl SolveResult {
    pub fn to_json(&self, g: &Graph) -> String {
        let doc = SolveDoc {
            value: self.value,
            optimal_first_moves: self.optimal_first_moves.iter().map(|m| m.iter().map(|&v| g.id(v)).collect()).collect(),
            stats: &self.stats,
        };
        let mut s = serde_json::to_string_pretty(&doc).unwrap();
        s.push('\n');
        s
    }
}

#[derive(Default, Clone, Copy)]
struct Bounds {
    failed: usize,
    won: Option<usize>,
}

/// Vertex and edge-position permutation of a graph automorphism.
struct Mirror {
    vertex: Vec<VertexIx>,
    position: Vec<Vec<usize>>,
}

impl Mirror {
    /// Left-right reflection of a pyramid, if the tags describe one and the
    /// reflection maps edges onto edges.
    fn pyramid(g: &Graph) -> Option<Mirror> {
        let mut at = std::collections::HashMap::new();
        for v in 0..g.vertex_count() {
            at.insert((g.tag_usize(v, "i")?, g.tag_usize(v, "j")?), v);
        }
        let vertex: Vec<VertexIx> = (0..g.vertex_count())
            .map(|v| {
                let (i, j) = (g.tag_usize(v, "i").unwrap(), g.tag_usize(v, "j").unwrap());
                at.get(&(i, (i + 1).checked_sub(j)?)).copied()
            })
            .collect::<Option<_>>()?;
        let mut position = Vec::with_capacity(g.vertex_count());
        for v in 0..g.vertex_count() {
            let (mine, theirs) = (g.out_edges(v), g.out_edges(vertex[v]));
            if mine.len() != theirs.len() {
                return None;
            }
            let perm: Vec<usize> = mine
                .iter()
                .map(|&e| theirs.iter().position(|&f| g.head(f) == vertex[g.head(e)]))
                .collect::<Option<_>>()?;
            position.push(perm);
        }
        Some(Mirror { vertex, position })
    }
}

struct Solver<'g> {
    g: &'g Graph,
    k: usize,
    goal: Goal,
    cyclic: bool,
    mirror: Option<Mirror>,
    memo: DashMap<Vec<u8>, Bounds>,
    states: AtomicU64,
    hits: AtomicU64,
}

const HIDDEN: u8 = u8::MAX;
const IRRELEVANT: u8 = u8::MAX - 1;

impl Solver<'_> {
    fn encode(&self, know: &Knowledge, reach: Option<&[bool]>, frontier: VertexIx, map: Option<&Mirror>) -> Vec<u8> {
        let g = self.g;
        let n = g.vertex_count();
        let mut key = vec![IRRELEVANT; n + 4];
        for v in 0..n {
            if reach.is_some_and(|r| !r[v]) {
                continue;
            }
            let (slot, val) = match map {
                None => (v, know.get(v).map_or(HIDDEN, |e| g.edge_position(e) as u8)),
                Some(m) => (m.vertex[v], know.get(v).map_or(HIDDEN, |e| m.position[v][g.edge_position(e)] as u8)),
            };
            key[slot] = val;
        }
        let f = map.map_or(frontier, |m| m.vertex[frontier]);
        key[n..].copy_from_slice(&(f as u32).to_le_bytes());
        key
    }

    fn key(&self, know: &Knowledge) -> Vec<u8> {
        if self.cyclic {
            return self.encode(know, None, 0, None);
        }
        let f = flow(self.g, know).last();
        let reach = pruned_reach(self.g, know, f);
        let plain = self.encode(know, Some(&reach), f, None);
        match &self.mirror {
            Some(m) => plain.min(self.encode(know, Some(&reach), f, Some(m))),
            None => plain,
        }
    }

    /// Hidden askable vertices whose switch can still matter.
    fn candidates(&self, know: &Knowledge) -> Vec<VertexIx> {
        if self.cyclic {
            know.unknown_askable(self.g)
        } else {
            relevant_unknown(self.g, know)
        }
    }

    fn set_wins(&self, know: &Knowledge, set: &[VertexIx], d: usize) -> bool {
        let hidden: Vec<VertexIx> = set.iter().copied().filter(|&v| !know.is_known(v)).collect();
        answer_combinations(self.g, &hidden).into_iter().all(|combo| {
            let mut child = know.clone();
            for (&v, e) in hidden.iter().zip(combo) {
                child.set_unchecked(v, e);
            }
            self.wins(&child, d - 1)
        })
    }

    fn wins(&self, know: &Knowledge, d: usize) -> bool {
        if is_determined(self.g, know, self.goal) {
            return true;
        }
        if d == 0 {
            return false;
        }
        let key = self.key(know);
        if let Some(b) = self.memo.get(&key) {
            if b.failed >= d {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return false;
            }
            if b.won.is_some_and(|w| w <= d) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return true;
            }
        }
        self.states.fetch_add(1, Ordering::Relaxed);
        let cand = self.candidates(know);
        let size = self.k.min(cand.len());
        let won = size > 0 && cand.into_iter().combinations(size).any(|set| self.set_wins(know, &set, d));
        let mut b = self.memo.entry(key).or_default();
        if won {
            b.won = Some(b.won.map_or(d, |w| w.min(d)));
        } else {
            b.failed = b.failed.max(d);
        }
        won
    }

    fn root_sets(&self, know: &Knowledge) -> Vec<Vec<VertexIx>> {
        let cand = know.unknown_askable(self.g);
        (1..=self.k.min(cand.len())).flat_map(|s| cand.iter().copied().combinations(s)).collect()
    }
}

/// Optimal number of rounds with `k` questions per round.
pub fn solve_exact(g: &Graph, k: usize, goal: Goal, cfg: &SolverConfig) -> Result<SolveResult, GameError> {
    solve_from(g, k, goal, cfg, &Knowledge::new(g))
}

/// Optimal number of further rounds from the knowledge state `start`.
pub fn solve_from(
    g: &Graph,
    k: usize,
    goal: Goal,
    cfg: &SolverConfig,
    start: &Knowledge,
) -> Result<SolveResult, GameError> {
    let started = Instant::now();
    if k == 0 {
        return Err(GameError::Unsupported("k must be at least 1".into()));
    }
    let cyclic = !g.is_acyclic();
    if cyclic && goal == Goal::Sink {
        return Err(GameError::Unsupported("sink search on cyclic graphs".into()));
    }
    let askable = g.askable().len();
    if askable > cfg.max_askable {
        return Err(GameError::CapExceeded { askable, cap: cfg.max_askable });
    }
    let solver = Solver {
        g,
        k,
        goal,
        cyclic,
        mirror: if cfg.symmetry_reduction && !cyclic { Mirror::pyramid(g) } else { None },
        memo: DashMap::new(),
        states: AtomicU64::new(0),
        hits: AtomicU64::new(0),
    };
    let finish = |value, moves| SolveResult {
        value,
        optimal_first_moves: moves,
        stats: SolveStats {
            states: solver.states.load(Ordering::Relaxed),
            memo_hits: solver.hits.load(Ordering::Relaxed),
            ms: started.elapsed().as_millis() as u64,
        },
    };
    if is_determined(g, start, goal) {
        return Ok(finish(0, Vec::new()));
    }
    let sets = solver.root_sets(start);
    let set_wins = |set: &Vec<VertexIx>, d: usize| solver.set_wins(start, set, d);
    // Asking every hidden askable vertex each round needs at most this many rounds.
    let limit = askable.max(1);
    let mut value = None;
    for d in 1..=limit {
        let any = if cfg.parallel { sets.par_iter().any(|s| set_wins(s, d)) } else { sets.iter().any(|s| set_wins(s, d)) };
        if any {
            value = Some(d);
            break;
        }
    }
    let value = value.expect("asking every askable vertex eventually determines the flow");
    let moves: Vec<Vec<VertexIx>> = if cfg.parallel {
        sets.par_iter().filter(|s| set_wins(s, value)).cloned().collect()
    } else {
        sets.iter().filter(|s| set_wins(s, value)).cloned().collect()
    };
    Ok(finish(value, moves))
}

/// Values for `k = 1 ..= k_max`.
pub fn solve_curve(
    g: &Graph,
    k_max: usize,
    goal: Goal,
    cfg: &SolverConfig,
) -> Result<Vec<(usize, usize)>, GameError> {
    (1..=k_max).map(|k| solve_exact(g, k, goal, cfg).map(|r| (k, r.value))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_hl, gen_pyramid, gen_tree};
    use crate::graph::GraphBuilder;

    fn value(g: &Graph, k: usize, goal: Goal) -> usize {
        solve_exact(g, k, goal, &SolverConfig::default()).unwrap().value
    }

    #[test]
    fn small_known_values() {
        assert_eq!(value(&gen_pyramid(2).unwrap(), 1, Goal::Sink), 2);
        assert_eq!(value(&gen_pyramid(4).unwrap(), 2, Goal::Path), 3);
        assert_eq!(value(&gen_tree(3, 2).unwrap(), 4, Goal::Path), 1);
        assert_eq!(value(&gen_hl(2, 1).unwrap(), 1, Goal::Sink), 2);
        assert_eq!(value(&gen_hl(2, 1).unwrap(), 2, Goal::Sink), 1);
    }

    #[test]
    fn one_sink_graph_needs_no_questions() {
        let mut b = GraphBuilder::new("diamond");
        let s = b.vertex("s", None, &[]);
        let a = b.vertex("a", None, &[]);
        let c = b.vertex("b", None, &[]);
        let t = b.vertex("t", None, &[]);
        b.edge(s, a);
        b.edge(s, c);
        b.edge(a, t);
        b.edge(c, t);
        let g = b.build().unwrap();
        let r = solve_exact(&g, 1, Goal::Sink, &SolverConfig::default()).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.optimal_first_moves.is_empty());
        assert_eq!(value(&g, 1, Goal::Path), 1);
    }

    #[test]
    fn first_moves_are_exhaustive() {
        let g = gen_pyramid(2).unwrap();
        let r = solve_exact(&g, 3, Goal::Path, &SolverConfig::default()).unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.optimal_first_moves, vec![vec![0, 1, 2]]);
        let r = solve_exact(&g, 1, Goal::Path, &SolverConfig::default()).unwrap();
        assert_eq!((r.value, r.optimal_first_moves), (2, vec![vec![0]]));
    }

    #[test]
    fn settings_do_not_change_values() {
        let g = gen_pyramid(4).unwrap();
        let variants = [
            SolverConfig { parallel: true, ..Default::default() },
            SolverConfig { symmetry_reduction: true, ..Default::default() },
            SolverConfig { symmetry_reduction: true, parallel: true, ..Default::default() },
        ];
        for k in 1..=3 {
            for goal in [Goal::Sink, Goal::Path] {
                let base = solve_exact(&g, k, goal, &SolverConfig::default()).unwrap();
                for cfg in &variants {
                    let r = solve_exact(&g, k, goal, cfg).unwrap();
                    assert_eq!(r.value, base.value);
                    assert_eq!(r.optimal_first_moves, base.optimal_first_moves);
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = gen_pyramid(6).unwrap();
        let err = solve_exact(&g, 1, Goal::Sink, &SolverConfig::default()).unwrap_err();
        assert_eq!(err, GameError::CapExceeded { askable: 21, cap: 16 });
    }

    #[test]
    fn pyramid_mirror_is_an_automorphism() {
        let g = gen_pyramid(3).unwrap();
        let m = Mirror::pyramid(&g).unwrap();
        assert_eq!(g.id(m.vertex[g.vertex_ix("v3_1").unwrap()]), "v3_3");
        assert!(Mirror::pyramid(&gen_tree(2, 2).unwrap()).is_none());
    }

    #[test]
    fn curve_is_non_increasing() {
        let c = solve_curve(&gen_pyramid(3).unwrap(), 6, Goal::Sink, &SolverConfig::default()).unwrap();
        assert_eq!(c[0], (1, 3));
        assert_eq!(c[1], (2, 2));
        assert_eq!(c[2], (3, 2));
        assert_eq!(c[5], (6, 1));
        assert!(c.windows(2).all(|w| w[1].1 <= w[0].1));
        let h = gen_hl(2, 2).unwrap();
        assert_eq!(solve_curve(&h, 2, Goal::Sink, &SolverConfig::default()).unwrap(), vec![(1, 4), (2, 2)]);
    }

    #[test]
    fn asking_everything_takes_one_round() {
        for g in [gen_pyramid(3).unwrap(), gen_tree(2, 2).unwrap(), gen_hl(3, 1).unwrap()] {
            let k = g.askable().len();
            for goal in [Goal::Sink, Goal::Path] {
                assert_eq!(value(&g, k, goal), 1, "{}", g.name());
            }
        }
    }
}
