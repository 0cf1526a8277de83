//! Exhaustive evaluation of one strategy against all opponents: the worst
//! case of a questioner over every switch assignment, and the best response
//! of any questioner to a fixed adversary.

use std::collections::HashMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::runner::{apply_response, check_questions};
use super::{answer_combinations, flow, is_determined, pruned_reach, relevant_unknown, GameError, Goal, Knowledge};
use crate::graph::{Graph, SwitchAssignment, VertexIx};
use super::run_match;
use crate::strategies::{Adversary, FixedAssignment, FollowFlow, Questioner};

/// Askable-vertex cap for exhaustive worst-case enumeration.
pub const DEFAULT_WORST_CASE_CAP: usize = 22;

#[derive(Debug, Clone)]
pub struct WorstCaseConfig {
    pub cap: usize,
    /// Sample this many seeded assignments instead of enumerating when over the cap.
    pub sample: Option<(usize, u64)>,
}

impl Default for WorstCaseConfig {
    fn default() -> Self {
        WorstCaseConfig { cap: DEFAULT_WORST_CASE_CAP, sample: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstCase {
    pub rounds: usize,
    /// False when the value comes from sampling and is only a lower estimate.
    pub exhaustive: bool,
}

pub fn worst_case_rounds(g: &Graph, k: usize, q: &dyn Questioner, goal: Goal) -> Result<usize, GameError> {
    worst_case_rounds_with(g, k, q, goal, &WorstCaseConfig::default()).map(|w| w.rounds)
}

/// Maximum rounds `q` needs over all switch assignments.
///
/// A deterministic questioner's play only depends on the answers it has seen,
/// so enumerating the answer tree of its actual questions covers every
/// assignment exactly once per distinct transcript.
pub fn worst_case_rounds_with(
    g: &Graph,
    k: usize,
    q: &dyn Questioner,
    goal: Goal,
    cfg: &WorstCaseConfig,
) -> Result<WorstCase, GameError> {
    if k == 0 {
        return Err(GameError::Unsupported("k must be at least 1".into()));
    }
    if goal == Goal::Sink && !g.is_acyclic() {
        return Err(GameError::Unsupported("sink search on cyclic graphs".into()));
    }
    let askable = g.askable().len();
    if askable > cfg.cap {
        let Some((count, seed)) = cfg.sample else {
            return Err(GameError::CapExceeded { askable, cap: cfg.cap });
        };
        return sample_worst_case(g, k, q, goal, count, seed);
    }
    let mut root = q.snapshot();
    root.prepare(g, k)?;
    let rounds = worst_dfs(g, k, goal, root, Knowledge::new(g), 0, askable + 1)?;
    Ok(WorstCase { rounds, exhaustive: true })
}

fn worst_dfs(
    g: &Graph,
    k: usize,
    goal: Goal,
    mut q: Box<dyn Questioner>,
    know: Knowledge,
    depth: usize,
    limit: usize,
) -> Result<usize, GameError> {
    if is_determined(g, &know, goal) {
        return Ok(depth);
    }
    if depth == limit {
        return Err(GameError::RoundLimit(limit));
    }
    let qs = q.ask(g, k, &know)?;
    check_questions(g, k, &qs)?;
    if qs.is_empty() {
        return Err(GameError::NoQuestions(q.name()));
    }
    let hidden: Vec<VertexIx> = qs.iter().copied().filter(|&v| !know.is_known(v)).collect();
    let mut worst = 0;
    for combo in answer_combinations(g, &hidden) {
        let mut child = know.clone();
        for (&v, e) in hidden.iter().zip(combo) {
            child.set_unchecked(v, e);
        }
        worst = worst.max(worst_dfs(g, k, goal, q.snapshot(), child, depth + 1, limit)?);
    }
    Ok(worst)
}

fn sample_worst_case(
    g: &Graph,
    k: usize,
    q: &dyn Questioner,
    goal: Goal,
    count: usize,
    seed: u64,
) -> Result<WorstCase, GameError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0;
    for _ in 0..count {
        let positions: Vec<usize> =
            (0..g.vertex_count()).map(|v| if g.is_sink(v) { 0 } else { rng.gen_range(0..g.out_degree(v)) }).collect();
        let assignment = SwitchAssignment::from_positions(g, &positions).expect("positions are in range");
        let mut adv = FixedAssignment::new(assignment);
        let r = run_match(g, k, q.snapshot().as_mut(), &mut adv, goal)?;
        worst = worst.max(r.rounds);
    }
    Ok(WorstCase { rounds: worst, exhaustive: false })
}

#[derive(Debug, Clone)]
pub struct BestResponseConfig {
    pub max_askable: usize,
}

impl Default for BestResponseConfig {
    fn default() -> Self {
        BestResponseConfig { max_askable: 16 }
    }
}

pub fn best_response_rounds(g: &Graph, k: usize, a: &dyn Adversary, goal: Goal) -> Result<usize, GameError> {
    best_response_rounds_with(g, k, a, goal, &BestResponseConfig::default())
}

/// Fewest rounds any questioner needs against the deterministic adversary `a`.
pub fn best_response_rounds_with(
    g: &Graph,
    k: usize,
    a: &dyn Adversary,
    goal: Goal,
    cfg: &BestResponseConfig,
) -> Result<usize, GameError> {
    if k == 0 {
        return Err(GameError::Unsupported("k must be at least 1".into()));
    }
    if goal == Goal::Sink && !g.is_acyclic() {
        return Err(GameError::Unsupported("sink search on cyclic graphs".into()));
    }
    let askable = g.askable().len();
    if askable > cfg.max_askable {
        return Err(GameError::CapExceeded { askable, cap: cfg.max_askable });
    }
    let mut adv = a.snapshot();
    adv.prepare(g, k)?;
    let know = Knowledge::new(g);
    if is_determined(g, &know, goal) {
        return Ok(0);
    }
    let upper = run_match(g, k, &mut FollowFlow, adv.snapshot().as_mut(), goal)?.rounds;
    let mut search = BestResponse { g, k, goal, memo: HashMap::new() };
    for d in 1..upper {
        if search.can_force(&know, adv.as_ref(), d)? {
            return Ok(d);
        }
    }
    Ok(upper)
}

#[derive(Default, Clone, Copy)]
struct Bounds {
    /// Largest depth known to be insufficient.
    failed: usize,
    /// Smallest depth known to suffice.
    won: Option<usize>,
}

struct BestResponse<'g> {
    g: &'g Graph,
    k: usize,
    goal: Goal,
    memo: HashMap<(u64, Vec<u8>), Bounds>,
}

impl BestResponse<'_> {
    fn key(&self, know: &Knowledge, project: bool) -> Vec<u8> {
        let g = self.g;
        let encode = |v: VertexIx| know.get(v).map_or(u8::MAX, |e| g.edge_position(e) as u8);
        if !project {
            return (0..g.vertex_count()).map(encode).collect();
        }
        let f = flow(g, know);
        let reach = pruned_reach(g, know, f.last());
        let mut key: Vec<u8> = (0..g.vertex_count()).map(|v| if reach[v] { encode(v) } else { u8::MAX - 1 }).collect();
        key.extend_from_slice(&(f.last() as u32).to_le_bytes());
        key
    }

    /// Whether some questioner determines the goal within `d` more rounds.
    fn can_force(&mut self, know: &Knowledge, adv: &dyn Adversary, d: usize) -> Result<bool, GameError> {
        let project = adv.relevant_only();
        let key = adv.memo_key().map(|m| (m, self.key(know, project)));
        if let Some(b) = key.as_ref().and_then(|k| self.memo.get(k)) {
            if b.failed >= d {
                return Ok(false);
            }
            if b.won.is_some_and(|w| w <= d) {
                return Ok(true);
            }
        }
        let candidates = if project { relevant_unknown(self.g, know) } else { know.unknown_askable(self.g) };
        let mut won = false;
        'sizes: for size in (1..=self.k.min(candidates.len())).rev() {
            for set in candidates.iter().copied().combinations(size) {
                let mut a2 = adv.snapshot();
                let resp = a2.respond(self.g, know, &set)?;
                let mut child = know.clone();
                apply_response(self.g, &mut child, &set, &resp)?;
                if is_determined(self.g, &child, self.goal) || (d > 1 && self.can_force(&child, a2.as_ref(), d - 1)?) {
                    won = true;
                    break 'sizes;
                }
            }
        }
        if let Some(key) = key {
            let b = self.memo.entry(key).or_default();
            if won {
                b.won = Some(b.won.map_or(d, |w| w.min(d)));
            } else {
                b.failed = b.failed.max(d);
            }
        }
        Ok(won)
    }
}
