//! Knowledge states, the flow they determine, and the determination predicates.

mod eval;
mod runner;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeIx, Graph, SwitchAssignment, VertexIx};

pub use eval::{
    best_response_rounds, best_response_rounds_with, worst_case_rounds, worst_case_rounds_with, BestResponseConfig,
    WorstCase, WorstCaseConfig, DEFAULT_WORST_CASE_CAP,
};
pub use runner::{run_match, run_match_from, MatchResult, Outcome, RoundRecord, DEFAULT_ROUND_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("protocol violation: `{0}` is a sink and cannot be asked")]
    AskedSink(String),
    #[error("protocol violation: `{0}` has out-degree 1; its switch is already known")]
    AskedForced(String),
    #[error("protocol violation: vertex index {0} does not exist")]
    AskedUnknownVertex(usize),
    #[error("protocol violation: `{0}` asked twice in one round")]
    DuplicateQuestion(String),
    #[error("protocol violation: {asked} questions exceed the per-round budget {k}")]
    TooManyQuestions { asked: usize, k: usize },
    #[error("protocol violation: questioner `{0}` asked nothing before the goal was determined")]
    NoQuestions(String),
    #[error("protocol violation: no answer given for `{0}`")]
    MissingAnswer(String),
    #[error("protocol violation: `{0}` answered more than once")]
    DuplicateAnswer(String),
    #[error("protocol violation: `{0}` answered but not asked")]
    UnaskedAnswer(String),
    #[error("protocol violation: edge `{edge}` does not leave `{vertex}`")]
    ForeignEdge { vertex: String, edge: String },
    #[error("protocol violation: answer for `{vertex}` contradicts the known switch `{known}`")]
    Contradiction { vertex: String, known: String },
    #[error("match exceeded {0} rounds")]
    RoundLimit(usize),
    #[error("strategy `{strategy}` cannot play here: {reason}")]
    Precondition { strategy: String, reason: String },
    #[error("{askable} askable vertices exceed the cap of {cap}")]
    CapExceeded { askable: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl GameError {
    pub fn precondition(strategy: &str, reason: impl Into<String>) -> Self {
        GameError::Precondition { strategy: strategy.to_string(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    Sink,
    Path,
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Goal::Sink => "sink",
            Goal::Path => "path",
        })
    }
}

impl FromStr for Goal {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sink" => Ok(Goal::Sink),
            "path" => Ok(Goal::Path),
            _ => Err(format!("unknown goal `{s}` (expected sink or path)")),
        }
    }
}

/// Revealed switches. Out-degree-1 vertices are known from the start.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Knowledge {
    choice: Vec<Option<EdgeIx>>,
}

impl Knowledge {
    pub fn new(g: &Graph) -> Self {
        let choice = (0..g.vertex_count()).map(|v| (g.out_degree(v) == 1).then(|| g.out_edges(v)[0])).collect();
        Knowledge { choice }
    }

    /// Knowledge of every switch in `a`, plus forced switches.
    pub fn from_assignment(g: &Graph, a: &SwitchAssignment) -> Self {
        let mut k = Knowledge::new(g);
        for v in 0..g.vertex_count() {
            if k.choice[v].is_none() {
                k.choice[v] = a.get(v);
            }
        }
        k
    }

    pub fn get(&self, v: VertexIx) -> Option<EdgeIx> {
        self.choice[v]
    }

    pub fn is_known(&self, v: VertexIx) -> bool {
        self.choice[v].is_some()
    }

    pub fn choices(&self) -> &[Option<EdgeIx>] {
        &self.choice
    }

    /// Records `v -> e`. Returns whether the entry is new.
    pub fn reveal(&mut self, g: &Graph, v: VertexIx, e: EdgeIx) -> Result<bool, GameError> {
        if e >= g.edge_count() || g.tail(e) != v {
            let edge = if e < g.edge_count() { g.edge_id(e).to_string() } else { format!("#{e}") };
            return Err(GameError::ForeignEdge { vertex: g.id(v).to_string(), edge });
        }
        match self.choice[v] {
            Some(known) if known == e => Ok(false),
            Some(known) => Err(GameError::Contradiction { vertex: g.id(v).to_string(), known: g.edge_id(known).to_string() }),
            None => {
                self.choice[v] = Some(e);
                Ok(true)
            }
        }
    }

    /// Sets an entry without checks; callers guarantee `e` leaves `v`.
    pub(crate) fn set_unchecked(&mut self, v: VertexIx, e: EdgeIx) {
        self.choice[v] = Some(e);
    }

    pub fn known_count(&self) -> usize {
        self.choice.iter().filter(|c| c.is_some()).count()
    }

    /// Askable vertices whose switch is still hidden.
    pub fn unknown_askable(&self, g: &Graph) -> Vec<VertexIx> {
        (0..g.vertex_count()).filter(|&v| g.out_degree(v) >= 2 && self.choice[v].is_none()).collect()
    }

    /// Knowledge with the listed vertices forgotten (forced switches stay).
    pub fn without(&self, g: &Graph, vs: &[VertexIx]) -> Knowledge {
        let mut k = self.clone();
        for &v in vs {
            if g.out_degree(v) >= 2 {
                k.choice[v] = None;
            }
        }
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowEnd {
    /// Reached a sink.
    Sink,
    /// Stopped at a vertex with a hidden switch.
    Frontier,
    /// Followed a known edge back onto the path.
    Cycle,
}

/// Maximal flow prefix determined by the knowledge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub vertices: Vec<VertexIx>,
    /// Edges between consecutive vertices, plus the closing edge for a cycle.
    pub edges: Vec<EdgeIx>,
    pub end: FlowEnd,
}

impl Flow {
    /// Last vertex of the path (the frontier when the flow is open).
    pub fn last(&self) -> VertexIx {
        *self.vertices.last().unwrap()
    }
}

pub fn flow(g: &Graph, know: &Knowledge) -> Flow {
    let mut on = vec![false; g.vertex_count()];
    let mut v = g.source();
    let mut f = Flow { vertices: vec![v], edges: Vec::new(), end: FlowEnd::Frontier };
    on[v] = true;
    loop {
        if g.is_sink(v) {
            f.end = FlowEnd::Sink;
            return f;
        }
        let Some(e) = know.get(v) else { return f };
        f.edges.push(e);
        v = g.head(e);
        if on[v] {
            f.end = FlowEnd::Cycle;
            return f;
        }
        on[v] = true;
        f.vertices.push(v);
    }
}

/// Vertices reachable from `from` when every known vertex keeps only its
/// known edge.
pub fn pruned_reach(g: &Graph, know: &Knowledge, from: VertexIx) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        let mut push = |w: VertexIx| {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        };
        match know.get(v) {
            Some(e) => push(g.head(e)),
            None => g.successors(v).for_each(&mut push),
        }
    }
    seen
}

/// Sinks the flow can still end in.
pub fn possible_sinks(g: &Graph, know: &Knowledge) -> Vec<VertexIx> {
    let f = flow(g, know);
    match f.end {
        FlowEnd::Sink => vec![f.last()],
        FlowEnd::Cycle => Vec::new(),
        FlowEnd::Frontier => {
            let reach = pruned_reach(g, know, f.last());
            (0..g.vertex_count()).filter(|&v| reach[v] && g.is_sink(v)).collect()
        }
    }
}

pub fn is_determined(g: &Graph, know: &Knowledge, goal: Goal) -> bool {
    match goal {
        Goal::Path => flow(g, know).end != FlowEnd::Frontier,
        Goal::Sink => possible_sinks(g, know).len() == 1,
    }
}

/// Hidden askable vertices the flow can still pass through.
pub fn relevant_unknown(g: &Graph, know: &Knowledge) -> Vec<VertexIx> {
    let f = flow(g, know);
    if f.end != FlowEnd::Frontier {
        return Vec::new();
    }
    let reach = pruned_reach(g, know, f.last());
    (0..g.vertex_count()).filter(|&v| reach[v] && g.out_degree(v) >= 2 && !know.is_known(v)).collect()
}

/// Every combination of out-edges for `vs`, in mixed-radix order with the
/// last vertex varying fastest.
pub(crate) fn answer_combinations(g: &Graph, vs: &[VertexIx]) -> Vec<Vec<EdgeIx>> {
    let mut out = vec![Vec::with_capacity(vs.len())];
    for &v in vs {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                g.out_edges(v).iter().map(move |&e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_pyramid, gen_tree};

    fn ids(g: &Graph, vs: &[VertexIx]) -> Vec<String> {
        vs.iter().map(|&v| g.id(v).to_string()).collect()
    }

    fn py2_with(choices: &[(&str, usize)]) -> (Graph, Knowledge) {
        let g = gen_pyramid(2).unwrap();
        let mut k = Knowledge::new(&g);
        for (id, pos) in choices {
            let v = g.vertex_ix(id).unwrap();
            k.reveal(&g, v, g.out_edges(v)[*pos]).unwrap();
        }
        (g, k)
    }

    #[test]
    fn flow_follows_known_switches() {
        let g = gen_pyramid(2).unwrap();
        let all = Knowledge::from_assignment(&g, &SwitchAssignment::all_left(&g));
        let f = flow(&g, &all);
        assert_eq!(ids(&g, &f.vertices), vec!["v1_1", "v2_1", "v3_1"]);
        assert_eq!(f.end, FlowEnd::Sink);

        let empty = Knowledge::new(&g);
        let f = flow(&g, &empty);
        assert_eq!(ids(&g, &f.vertices), vec!["v1_1"]);
        assert!(f.edges.is_empty());

        let (g, k) = py2_with(&[("v1_1", 1)]);
        assert_eq!(g.id(flow(&g, &k).last()), "v2_2");
        assert_eq!(flow(&g, &k).end, FlowEnd::Frontier);
    }

    #[test]
    fn possible_sink_sets() {
        let (g, k) = py2_with(&[]);
        assert_eq!(ids(&g, &possible_sinks(&g, &k)), vec!["v3_1", "v3_2", "v3_3"]);
        let (g, k) = py2_with(&[("v1_1", 0)]);
        assert_eq!(ids(&g, &possible_sinks(&g, &k)), vec!["v3_1", "v3_2"]);
        let (g, k) = py2_with(&[("v1_1", 0), ("v2_1", 0), ("v2_2", 0)]);
        assert_eq!(ids(&g, &possible_sinks(&g, &k)), vec!["v3_1"]);
    }

    #[test]
    fn determination() {
        let (g, k) = py2_with(&[("v1_1", 0), ("v2_1", 0)]);
        assert!(is_determined(&g, &k, Goal::Path));
        let (g, k) = py2_with(&[("v1_1", 0)]);
        assert!(!is_determined(&g, &k, Goal::Sink));

        let mut b = crate::graph::GraphBuilder::new("one-sink");
        let s = b.vertex("s", None, &[]);
        let a = b.vertex("a", None, &[]);
        let c = b.vertex("b", None, &[]);
        let t = b.vertex("t", None, &[]);
        b.edge(s, a);
        b.edge(s, c);
        b.edge(a, t);
        b.edge(c, t);
        let d = b.build().unwrap();
        assert!(is_determined(&d, &Knowledge::new(&d), Goal::Sink));
        assert!(!is_determined(&d, &Knowledge::new(&d), Goal::Path));
    }

    #[test]
    fn forced_switches_are_preloaded() {
        let mut b = crate::graph::GraphBuilder::new("chain");
        let s = b.vertex("s", None, &[]);
        let a = b.vertex("a", None, &[]);
        let t = b.vertex("t", None, &[]);
        let u = b.vertex("u", None, &[]);
        b.edge(s, a);
        b.edge(a, t);
        b.edge(a, u);
        let g = b.build().unwrap();
        let k = Knowledge::new(&g);
        assert!(k.is_known(s));
        assert_eq!(g.id(flow(&g, &k).last()), "a");
        assert_eq!(k.unknown_askable(&g), vec![a]);
    }

    #[test]
    fn reveal_rejects_contradictions() {
        let g = gen_tree(2, 1).unwrap();
        let mut k = Knowledge::new(&g);
        assert!(k.reveal(&g, 0, g.out_edges(0)[0]).unwrap());
        assert!(!k.reveal(&g, 0, g.out_edges(0)[0]).unwrap());
        assert!(matches!(k.reveal(&g, 0, g.out_edges(0)[1]), Err(GameError::Contradiction { .. })));
        assert!(matches!(k.reveal(&g, 1, 0), Err(GameError::ForeignEdge { .. })));
    }

    #[test]
    fn relevant_vertices_shrink_with_knowledge() {
        let (g, k) = py2_with(&[]);
        assert_eq!(relevant_unknown(&g, &k).len(), 3);
        let (g, k) = py2_with(&[("v1_1", 1)]);
        assert_eq!(ids(&g, &relevant_unknown(&g, &k)), vec!["v2_2"]);
    }
}
