//! Questioner algorithms and adversary strategies behind uniform,
//! deterministic, snapshot-able interfaces, plus a name registry.

mod adversaries;
mod longest_path;
mod questioners;

use std::collections::HashMap;

use crate::game::{GameError, Knowledge};
use crate::graph::{EdgeIx, Graph, VertexIx};

pub use adversaries::{AllLeft, FixedAssignment, GpyLeftCommitting, PyramidShorterSide, TreeMinSubtree};
pub use longest_path::{LongestPathCases, PathEdge};
pub use questioners::{
    AlgorithmA, AlgorithmB, FollowFlow, LayeredComplete, PyramidK2, PyramidRecursive, TreeLevels,
};

/// Chooses the questions of each round.
pub trait Questioner: Send {
    fn name(&self) -> String;

    /// Checks preconditions and resets per-match state.
    fn prepare(&mut self, _g: &Graph, _k: usize) -> Result<(), GameError> {
        Ok(())
    }

    /// Questions for the next round; empty only when nothing is left to ask.
    fn ask(&mut self, g: &Graph, k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError>;

    fn snapshot(&self) -> Box<dyn Questioner>;
}

/// Answers of one round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdversaryResponse {
    /// One entry per asked vertex, in answering order.
    pub answers: Vec<(VertexIx, EdgeIx)>,
    /// Extra switches the adversary commits to.
    pub volunteered: Vec<(VertexIx, EdgeIx)>,
}

/// Chooses switch values as questions arrive.
pub trait Adversary: Send {
    fn name(&self) -> String;

    fn prepare(&mut self, _g: &Graph, _k: usize) -> Result<(), GameError> {
        Ok(())
    }

    fn respond(&mut self, g: &Graph, know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError>;

    fn snapshot(&self) -> Box<dyn Adversary>;

    /// Identifies behavior-relevant internal state when answers depend only on
    /// that state and the knowledge. `None` disables memoization.
    fn memo_key(&self) -> Option<u64> {
        None
    }

    /// True when answers depend only on the flow frontier and the knowledge
    /// reachable from it, so questions elsewhere are wasted.
    fn relevant_only(&self) -> bool {
        false
    }
}

pub const QUESTIONER_NAMES: &[&str] = &[
    "follow_flow",
    "algorithm_a",
    "algorithm_b",
    "tree_levels",
    "pyramid_recursive:l=<l>",
    "pyramid_k2",
    "layered_complete",
];

pub const ADVERSARY_NAMES: &[&str] = &[
    "all_left",
    "thm3_longest_path",
    "thm4_path_edge",
    "tree_min_subtree",
    "pyramid_shorter_side",
    "gpy_left_committing",
];

fn split_params(spec: &str) -> Result<(&str, HashMap<&str, &str>), String> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = HashMap::new();
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("parameter `{part}` in `{spec}` is not key=value"))?;
        params.insert(k.trim(), v.trim());
    }
    Ok((name, params))
}

fn no_params(spec: &str, params: &HashMap<&str, &str>) -> Result<(), String> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(format!("strategy `{spec}` takes no parameters"))
    }
}

/// Builds a questioner from a registry name such as `pyramid_recursive:l=2`.
pub fn questioner_by_name(spec: &str) -> Result<Box<dyn Questioner>, String> {
    let (name, params) = split_params(spec)?;
    let q: Box<dyn Questioner> = match name {
        "pyramid_recursive" => {
            let l = params.get("l").ok_or("pyramid_recursive needs a parameter, e.g. pyramid_recursive:l=2")?;
            let l: usize = l.parse().map_err(|_| format!("l must be a positive integer, got `{l}`"))?;
            if l == 0 || params.len() != 1 {
                return Err("pyramid_recursive takes exactly one parameter l >= 1".into());
            }
            return Ok(Box::new(PyramidRecursive::new(l)));
        }
        "follow_flow" => Box::new(FollowFlow),
        "algorithm_a" => Box::new(AlgorithmA),
        "algorithm_b" => Box::new(AlgorithmB),
        "tree_levels" => Box::new(TreeLevels),
        "pyramid_k2" => Box::new(PyramidK2::default()),
        "layered_complete" => Box::new(LayeredComplete::default()),
        _ => return Err(format!("unknown questioner `{name}`; known: {}", QUESTIONER_NAMES.join(", "))),
    };
    no_params(spec, &params)?;
    Ok(q)
}

/// Builds an adversary from a registry name.
pub fn adversary_by_name(spec: &str) -> Result<Box<dyn Adversary>, String> {
    let (name, params) = split_params(spec)?;
    let a: Box<dyn Adversary> = match name {
        "all_left" => Box::new(AllLeft),
        "thm3_longest_path" => Box::new(LongestPathCases::default()),
        "thm4_path_edge" => Box::new(PathEdge::default()),
        "tree_min_subtree" => Box::new(TreeMinSubtree::default()),
        "pyramid_shorter_side" => Box::new(PyramidShorterSide::default()),
        "gpy_left_committing" => Box::new(GpyLeftCommitting::default()),
        _ => return Err(format!("unknown adversary `{name}`; known: {}", ADVERSARY_NAMES.join(", "))),
    };
    no_params(spec, &params)?;
    Ok(a)
}

/// Coordinates of a pyramid graph, read from the `i`/`j` vertex tags and
/// checked against the out-lists.
#[derive(Debug, Clone, Default)]
pub(crate) struct PyramidIndex {
    pub n: usize,
    pub coord: Vec<(usize, usize)>,
    at: HashMap<(usize, usize), VertexIx>,
}

impl PyramidIndex {
    pub fn build(g: &Graph, strategy: &str) -> Result<Self, GameError> {
        let fail = |why: String| GameError::precondition(strategy, format!("not a pyramid graph: {why}"));
        let mut coord = Vec::with_capacity(g.vertex_count());
        let mut at = HashMap::new();
        for v in 0..g.vertex_count() {
            let (Some(i), Some(j)) = (g.tag_usize(v, "i"), g.tag_usize(v, "j")) else {
                return Err(fail(format!("vertex `{}` lacks i/j tags", g.id(v))));
            };
            if j < 1 || j > i || at.insert((i, j), v).is_some() {
                return Err(fail(format!("bad coordinates ({i},{j}) on `{}`", g.id(v))));
            }
            coord.push((i, j));
        }
        let n = coord.iter().map(|c| c.0).max().unwrap_or(1) - 1;
        if n < 1 || g.vertex_count() != (n + 1) * (n + 2) / 2 || coord[g.source()] != (1, 1) {
            return Err(fail("wrong vertex count or source".into()));
        }
        let idx = PyramidIndex { n, coord, at };
        for v in 0..g.vertex_count() {
            let (i, j) = idx.coord[v];
            let expect: Vec<VertexIx> =
                if i == n + 1 { Vec::new() } else { vec![idx.at[&(i + 1, j)], idx.at[&(i + 1, j + 1)]] };
            if g.successors(v).collect::<Vec<_>>() != expect {
                return Err(fail(format!("out-list of `{}` is not [left, right]", g.id(v))));
            }
        }
        Ok(idx)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<VertexIx> {
        self.at.get(&(i, j)).copied()
    }
}

/// Level structure of a layered graph: every edge goes down exactly one level.
#[derive(Debug, Clone, Default)]
pub(crate) struct Layers {
    pub level_of: Vec<usize>,
    /// `rows[l]` holds the vertices on level `l + 1` in index order.
    pub rows: Vec<Vec<VertexIx>>,
}

impl Layers {
    pub fn build(g: &Graph, strategy: &str) -> Result<Self, GameError> {
        let fail = |why: String| GameError::precondition(strategy, format!("not a layered graph: {why}"));
        let level_of = g.levels().ok_or_else(|| fail("graph has a cycle".into()))?;
        for e in g.edges() {
            if level_of[e.to] != level_of[e.from] + 1 {
                return Err(fail(format!("edge `{}` does not step one level", e.id)));
            }
        }
        let depth = level_of.iter().copied().max().unwrap_or(1);
        let mut rows = vec![Vec::new(); depth];
        for (v, &l) in level_of.iter().enumerate() {
            if l == 0 {
                return Err(fail(format!("vertex `{}` has level 0", g.id(v))));
            }
            rows[l - 1].push(v);
        }
        Ok(Layers { level_of, rows })
    }

    pub fn row(&self, level: usize) -> &[VertexIx] {
        self.rows.get(level.wrapping_sub(1)).map_or(&[], |r| r.as_slice())
    }
}

/// The known edge for an already-revealed vertex.
pub(crate) fn known_answer(know: &Knowledge, v: VertexIx) -> Option<(VertexIx, EdgeIx)> {
    know.get(v).map(|e| (v, e))
}
