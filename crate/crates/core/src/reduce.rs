//! Vertex merging, out-degree-1 reductions, answer application, and longest
//! (generalized) path lengths.
//!
//! Two merge flavours exist. Simple merging collapses parallel edges created by
//! the contraction; multigraph merging keeps them. Reductions repeatedly merge
//! an out-degree-1 vertex into its out-neighbor until every non-sink has
//! out-degree at least 2. Merged vertices are named by joining the sorted
//! constituent ids with `+`.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{natural_cmp, EdgeIx, Graph, GraphBuilder, GraphDoc, VertexIx};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("merge set is empty")]
    EmptySet,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("new vertex id `{0}` collides with an existing vertex")]
    IdCollision(String),
    #[error("graph contains a directed cycle; use the generalized path length")]
    Cyclic,
    #[error("vertex `{0}` is a sink and has no switch")]
    SinkAnswer(String),
    #[error("edge `{edge}` does not leave vertex `{vertex}`")]
    ForeignEdge { vertex: String, edge: String },
    #[error("graph has {vertices} vertices, above the exhaustive-search cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MergeMode {
    Simple,
    Multi,
}

/// A transformed graph plus the total map from input vertices to output vertices.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub graph: Graph,
    image: Vec<VertexIx>,
}

#[derive(Serialize)]
struct ReductionDoc {
    graph: GraphDoc,
    map: BTreeMap<String, String>,
}

impl ReductionResult {
    fn identity(g: &Graph) -> Self {
        ReductionResult { graph: g.clone(), image: (0..g.vertex_count()).collect() }
    }

    /// Image of an input vertex index.
    pub fn image(&self, v: VertexIx) -> VertexIx {
        self.image[v]
    }

    pub fn image_slice(&self) -> &[VertexIx] {
        &self.image
    }

    /// Input vertex count.
    pub fn domain_len(&self) -> usize {
        self.image.len()
    }

    /// Map keyed by input id, given the input graph.
    pub fn map(&self, input: &Graph) -> BTreeMap<String, String> {
        (0..input.vertex_count())
            .map(|v| (input.id(v).to_string(), self.graph.id(self.image[v]).to_string()))
            .collect()
    }

    /// Input vertices mapped onto output vertex `w`.
    pub fn preimage(&self, w: VertexIx) -> Vec<VertexIx> {
        (0..self.image.len()).filter(|&v| self.image[v] == w).collect()
    }

    pub fn to_json(&self, input: &Graph) -> String {
        let doc = ReductionDoc { graph: self.graph.to_doc(), map: self.map(input) };
        let mut s = serde_json::to_string_pretty(&doc).unwrap();
        s.push('\n');
        s
    }

    /// Composes `self` (input -> mid) with `next` (mid -> out).
    fn then(self, next: ReductionResult) -> ReductionResult {
        let image = self.image.iter().map(|&v| next.image[v]).collect();
        ReductionResult { graph: next.graph, image }
    }
}

struct MergeSpec<'a> {
    members: &'a [bool],
    new_id: String,
    mode: MergeMode,
    /// Keep edges internal to the merge set as self-loops (cyclic multigraph reductions).
    keep_internal: bool,
    consumed: Option<EdgeIx>,
}

fn merge_core(g: &Graph, spec: &MergeSpec) -> ReductionResult {
    let n = g.vertex_count();
    let anchor = (0..n).find(|&v| spec.members[v]).expect("merge set is non-empty");
    let mut b = GraphBuilder::new(g.name());
    b.multigraph(g.is_multigraph() && spec.mode == MergeMode::Multi)
        .allow_cycles(g.allows_cycles());
    let mut image = vec![usize::MAX; n];
    let mut merged = usize::MAX;
    for v in 0..n {
        if spec.members[v] {
            if v == anchor {
                merged = b.vertex(&spec.new_id, None, &[]);
            }
            continue;
        }
        let vx = g.vertex(v);
        image[v] = b.try_vertex(&vx.id, vx.level, vx.tags.clone()).expect("ids stay unique");
    }
    for v in 0..n {
        if spec.members[v] {
            image[v] = merged;
        }
    }
    let mut seen_pairs = HashSet::new();
    for (ix, e) in g.edges().iter().enumerate() {
        let (a, c) = (image[e.from], image[e.to]);
        let internal = spec.members[e.from] && spec.members[e.to];
        if internal && (!spec.keep_internal || Some(ix) == spec.consumed) {
            continue;
        }
        if spec.mode == MergeMode::Simple && !seen_pairs.insert((a, c)) {
            continue;
        }
        b.try_edge_with_id(&e.id, a, c).expect("edge ids stay unique");
    }
    b.source(image[g.source()]);
    ReductionResult { graph: b.build().expect("merge keeps at least one vertex"), image }
}

fn member_mask(g: &Graph, ids: &[&str]) -> Result<Vec<bool>, ReduceError> {
    if ids.is_empty() {
        return Err(ReduceError::EmptySet);
    }
    let mut mask = vec![false; g.vertex_count()];
    for id in ids {
        let v = g.vertex_ix(id).ok_or_else(|| ReduceError::UnknownVertex(id.to_string()))?;
        mask[v] = true;
    }
    Ok(mask)
}

fn public_merge(g: &Graph, ids: &[&str], new_id: &str, mode: MergeMode) -> Result<ReductionResult, ReduceError> {
    let mask = member_mask(g, ids)?;
    if let Some(v) = g.vertex_ix(new_id) {
        if !mask[v] {
            return Err(ReduceError::IdCollision(new_id.to_string()));
        }
    }
    let spec = MergeSpec { members: &mask, new_id: new_id.to_string(), mode, keep_internal: false, consumed: None };
    Ok(merge_core(g, &spec))
}

/// Replaces the vertex set `ids` by one vertex `new_id`; parallel edges that
/// arise are collapsed and edges inside the set are dropped.
pub fn merge_set_simple(g: &Graph, ids: &[&str], new_id: &str) -> Result<ReductionResult, ReduceError> {
    public_merge(g, ids, new_id, MergeMode::Simple)
}

/// Like [`merge_set_simple`] but parallel edges are kept with their own ids.
pub fn merge_set_multi(g: &Graph, ids: &[&str], new_id: &str) -> Result<ReductionResult, ReduceError> {
    public_merge(g, ids, new_id, MergeMode::Multi)
}

fn combined_name(g: &Graph, members: &[VertexIx]) -> String {
    let mut parts: Vec<&str> = members.iter().flat_map(|&v| g.id(v).split('+')).collect();
    parts.sort_by(|a, b| natural_cmp(a, b));
    parts.join("+")
}

/// Merges the tail of `e` into its head, consuming `e`.
fn merge_along(g: &Graph, e: EdgeIx, mode: MergeMode) -> ReductionResult {
    let (x, y) = (g.tail(e), g.head(e));
    let mut mask = vec![false; g.vertex_count()];
    mask[x] = true;
    mask[y] = true;
    let spec = MergeSpec {
        members: &mask,
        new_id: combined_name(g, &[x, y]),
        mode,
        keep_internal: mode == MergeMode::Multi && g.allows_cycles(),
        consumed: Some(e),
    };
    merge_core(g, &spec)
}

/// Out-degree-1 vertices whose edge is not a self-loop.
fn mergeable(g: &Graph) -> Vec<EdgeIx> {
    (0..g.vertex_count())
        .filter(|&v| g.out_degree(v) == 1)
        .map(|v| g.out_edges(v)[0])
        .filter(|&e| g.tail(e) != g.head(e))
        .collect()
}

fn collapse_parallel(g: &Graph) -> ReductionResult {
    let mut b = GraphBuilder::new(g.name());
    b.allow_cycles(g.allows_cycles());
    for v in g.vertices() {
        b.try_vertex(&v.id, v.level, v.tags.clone()).unwrap();
    }
    let mut seen = HashSet::new();
    for e in g.edges() {
        if seen.insert((e.from, e.to)) {
            b.try_edge_with_id(&e.id, e.from, e.to).unwrap();
        }
    }
    b.source(g.source());
    ReductionResult { graph: b.build().unwrap(), image: (0..g.vertex_count()).collect() }
}

fn reduce_with(g: &Graph, mode: MergeMode, mut pick: impl FnMut(&[EdgeIx]) -> EdgeIx) -> ReductionResult {
    let mut acc = if mode == MergeMode::Simple && g.is_multigraph() {
        collapse_parallel(g)
    } else {
        ReductionResult::identity(g)
    };
    loop {
        let candidates = mergeable(&acc.graph);
        if candidates.is_empty() {
            return acc;
        }
        let e = pick(&candidates);
        let step = merge_along(&acc.graph, e, mode);
        acc = acc.then(step);
    }
}

/// `G'`: merge out-degree-1 vertices into their out-neighbors while possible,
/// collapsing parallel edges.
pub fn reduce_simple(g: &Graph) -> Result<ReductionResult, ReduceError> {
    if !g.is_acyclic() {
        return Err(ReduceError::Cyclic);
    }
    Ok(reduce_with(g, MergeMode::Simple, |c| c[0]))
}

/// `G''`: as [`reduce_simple`] but parallel edges survive. Accepts cyclic
/// graphs; a merge that closes a cycle leaves a self-loop.
pub fn reduce_multi(g: &Graph) -> ReductionResult {
    reduce_with(g, MergeMode::Multi, |c| c[0])
}

/// Reduction that processes out-degree-1 vertices in a seeded random order.
pub fn reduce_random_order(g: &Graph, mode: MergeMode, seed: u64) -> Result<ReductionResult, ReduceError> {
    if mode == MergeMode::Simple && !g.is_acyclic() {
        return Err(ReduceError::Cyclic);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(reduce_with(g, mode, |c| *c.choose(&mut rng).unwrap()))
}

fn check_answer(g: &Graph, x: VertexIx, e: EdgeIx) -> Result<(), ReduceError> {
    if g.is_sink(x) {
        return Err(ReduceError::SinkAnswer(g.id(x).to_string()));
    }
    if e >= g.edge_count() || g.tail(e) != x {
        let edge = if e < g.edge_count() { g.edge_id(e).to_string() } else { format!("#{e}") };
        return Err(ReduceError::ForeignEdge { vertex: g.id(x).to_string(), edge });
    }
    Ok(())
}

/// Copy of `g` where every vertex with a chosen edge keeps only that edge.
pub fn restrict_to_choices(g: &Graph, choice: &[Option<EdgeIx>]) -> Graph {
    let mut b = GraphBuilder::new(g.name());
    b.multigraph(g.is_multigraph()).allow_cycles(g.allows_cycles());
    for v in g.vertices() {
        b.try_vertex(&v.id, v.level, v.tags.clone()).unwrap();
    }
    for (ix, e) in g.edges().iter().enumerate() {
        if choice.get(e.from).copied().flatten().is_none_or(|c| c == ix) {
            b.try_edge_with_id(&e.id, e.from, e.to).unwrap();
        }
    }
    b.source(g.source());
    b.build().unwrap()
}

fn only_edge(g: &Graph, x: VertexIx, e: EdgeIx) -> (Graph, EdgeIx) {
    let mut choice = vec![None; g.vertex_count()];
    choice[x] = Some(e);
    let h = restrict_to_choices(g, &choice);
    let kept = h.out_edges(x)[0];
    (h, kept)
}

/// `G_xy'`: keep only `e` among the out-edges of `x`, merge `x` into the head
/// of `e`, and re-reduce in simple mode.
pub fn apply_answer_simple(g: &Graph, x: VertexIx, e: EdgeIx) -> Result<ReductionResult, ReduceError> {
    check_answer(g, x, e)?;
    let (h, _) = only_edge(g, x, e);
    reduce_simple(&h)
}

/// `G^xy`: keep only `e` among the out-edges of `x` and merge `x` with the
/// head of `e`, keeping parallel edges. On inputs whose non-sinks all have
/// out-degree at least 2 no further merging happens.
pub fn apply_answer_multi(g: &Graph, x: VertexIx, e: EdgeIx) -> Result<ReductionResult, ReduceError> {
    check_answer(g, x, e)?;
    let min_outdeg_two = g.askable().len() == (0..g.vertex_count()).filter(|&v| !g.is_sink(v)).count();
    let (h, kept) = only_edge(g, x, e);
    let merged = merge_along(&h, kept, MergeMode::Multi);
    let cascade = reduce_multi(&merged.graph);
    if min_outdeg_two {
        assert_eq!(
            cascade.graph.vertex_count(),
            merged.graph.vertex_count(),
            "answer on a min-out-degree-2 multigraph must not cascade"
        );
    }
    Ok(merged.then(cascade))
}

/// Longest path length from `from` to every vertex; `None` for unreachable.
fn longest_from(g: &Graph, from: VertexIx, order: &[VertexIx]) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[from] = Some(0);
    for &v in order {
        if let Some(d) = dist[v] {
            for w in g.successors(v) {
                if dist[w].is_none_or(|x| x < d + 1) {
                    dist[w] = Some(d + 1);
                }
            }
        }
    }
    dist
}

/// `l(G)`: edge count of the longest directed path, measured from the source.
pub fn longest_path_len(g: &Graph) -> Result<usize, ReduceError> {
    let order = g.topological_order().ok_or(ReduceError::Cyclic)?;
    Ok(longest_from(g, g.source(), &order).into_iter().flatten().max().unwrap_or(0))
}

/// Longest directed path anywhere in the graph, regardless of start vertex.
pub fn longest_path_len_global(g: &Graph) -> Result<usize, ReduceError> {
    let order = g.topological_order().ok_or(ReduceError::Cyclic)?;
    let mut down = vec![0usize; g.vertex_count()];
    for &v in order.iter().rev() {
        down[v] = g.successors(v).map(|w| down[w] + 1).max().unwrap_or(0);
    }
    Ok(down.into_iter().max().unwrap_or(0))
}

/// A path given as its vertex sequence and the edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSpec {
    pub vertices: Vec<VertexIx>,
    pub edges: Vec<EdgeIx>,
    /// For generalized paths: the edge from the last vertex back into the path.
    pub closing: Option<EdgeIx>,
}

impl PathSpec {
    pub fn len(&self) -> usize {
        self.edges.len() + usize::from(self.closing.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The path edge leaving `v`, if `v` is on the path and not its end
    /// (or the closing edge for the end vertex).
    pub fn edge_at(&self, v: VertexIx) -> Option<EdgeIx> {
        let i = self.vertices.iter().position(|&x| x == v)?;
        self.edges.get(i).copied().or(if i + 1 == self.vertices.len() { self.closing } else { None })
    }
}

/// Among maximum-length paths from the source, the one whose vertex-id
/// sequence is least in natural order. Parallel edges resolve to the first.
pub fn lex_least_longest_path(g: &Graph) -> Result<PathSpec, ReduceError> {
    let order = g.topological_order().ok_or(ReduceError::Cyclic)?;
    let mut down = vec![0usize; g.vertex_count()];
    for &v in order.iter().rev() {
        down[v] = g.successors(v).map(|w| down[w] + 1).max().unwrap_or(0);
    }
    let mut v = g.source();
    let mut path = PathSpec { vertices: vec![v], edges: Vec::new(), closing: None };
    while down[v] > 0 {
        let e = g
            .out_edges(v)
            .iter()
            .copied()
            .filter(|&e| down[g.head(e)] + 1 == down[v])
            .min_by(|&a, &b| natural_cmp(g.id(g.head(a)), g.id(g.head(b))).then(a.cmp(&b)))
            .unwrap();
        v = g.head(e);
        path.edges.push(e);
        path.vertices.push(v);
    }
    Ok(path)
}

/// Default vertex cap for the exhaustive generalized-path search.
pub const GENERALIZED_PATH_CAP: usize = 20;

/// `l'(G)`: longest simple path from the source, optionally closed by one
/// edge from its last vertex back onto the path (self-loops count).
pub fn longest_generalized_path_len(g: &Graph) -> Result<usize, ReduceError> {
    longest_generalized_path(g, GENERALIZED_PATH_CAP).map(|p| p.len())
}

/// Exhaustive search for a longest generalized path; the first maximum found
/// in out-list DFS order is returned.
pub fn longest_generalized_path(g: &Graph, cap: usize) -> Result<PathSpec, ReduceError> {
    if g.vertex_count() > cap {
        return Err(ReduceError::TooLarge { vertices: g.vertex_count(), cap });
    }
    struct Dfs<'g> {
        g: &'g Graph,
        on_path: Vec<bool>,
        verts: Vec<VertexIx>,
        edges: Vec<EdgeIx>,
        best: Option<PathSpec>,
    }
    impl Dfs<'_> {
        fn visit(&mut self, v: VertexIx) {
            let closing = self.g.out_edges(v).iter().copied().find(|&e| self.on_path[self.g.head(e)]);
            let len = self.edges.len() + usize::from(closing.is_some());
            if self.best.as_ref().is_none_or(|b| len > b.len()) {
                self.best = Some(PathSpec { vertices: self.verts.clone(), edges: self.edges.clone(), closing });
            }
            for &e in self.g.out_edges(v) {
                let w = self.g.head(e);
                if self.on_path[w] {
                    continue;
                }
                self.on_path[w] = true;
                self.verts.push(w);
                self.edges.push(e);
                self.visit(w);
                self.edges.pop();
                self.verts.pop();
                self.on_path[w] = false;
            }
        }
    }
    let s = g.source();
    let mut dfs = Dfs { g, on_path: vec![false; g.vertex_count()], verts: vec![s], edges: Vec::new(), best: None };
    dfs.on_path[s] = true;
    dfs.visit(s);
    Ok(dfs.best.unwrap())
}

/// Checks that whenever `y` is reachable from `x` in `g`, the image of `y` is
/// reachable from the image of `x` in the reduced graph.
pub fn reachability_preserved_check(g: &Graph, r: &ReductionResult) -> bool {
    let h = &r.graph;
    let image_reach: Vec<Vec<bool>> = (0..h.vertex_count()).map(|w| h.reachable_from(w)).collect();
    (0..g.vertex_count()).all(|x| {
        let reach = g.reachable_from(x);
        (0..g.vertex_count()).filter(|&y| reach[y]).all(|y| image_reach[r.image(x)][r.image(y)])
    })
}
