//! Single-source directed (multi)graphs with ordered out-edge lists.
//!
//! Vertices and edges carry stable text ids for interchange, and are addressed
//! internally by dense indices ([`VertexIx`], [`EdgeIx`]). The out-list of a
//! vertex is the order in which its edges appear in the edge array; position 0
//! is the "left" edge.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex index into [`Graph::vertices`].
pub type VertexIx = usize;
/// Dense edge index into [`Graph::edges`].
pub type EdgeIx = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("{field}: unknown vertex `{id}`")]
    UnknownVertex { field: String, id: String },
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub level: Option<u32>,
    pub tags: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: VertexIx,
    pub to: VertexIx,
}

/// An immutable single-source directed (multi)graph.
#[derive(Debug, Clone)]
pub struct Graph {
    name: String,
    multigraph: bool,
    allow_cycles: bool,
    source: VertexIx,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeIx>>,
    inc: Vec<Vec<EdgeIx>>,
    edge_pos: Vec<usize>,
    index: HashMap<String, VertexIx>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.multigraph == other.multigraph
            && self.allow_cycles == other.allow_cycles
            && self.source == other.source
            && self.vertices == other.vertices
            && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    pub fn allows_cycles(&self) -> bool {
        self.allow_cycles
    }

    pub fn source(&self) -> VertexIx {
        self.source
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: VertexIx) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: EdgeIx) -> &Edge {
        &self.edges[e]
    }

    pub fn id(&self, v: VertexIx) -> &str {
        &self.vertices[v].id
    }

    pub fn edge_id(&self, e: EdgeIx) -> &str {
        &self.edges[e].id
    }

    pub fn vertex_ix(&self, id: &str) -> Option<VertexIx> {
        self.index.get(id).copied()
    }

    pub fn edge_ix(&self, id: &str) -> Option<EdgeIx> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Out-edges of `v`, left first.
    pub fn out_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: VertexIx) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: VertexIx) -> usize {
        self.inc[v].len()
    }

    pub fn is_sink(&self, v: VertexIx) -> bool {
        self.out[v].is_empty()
    }

    /// Position of `e` within the out-list of its tail.
    pub fn edge_position(&self, e: EdgeIx) -> usize {
        self.edge_pos[e]
    }

    pub fn head(&self, e: EdgeIx) -> VertexIx {
        self.edges[e].to
    }

    pub fn tail(&self, e: EdgeIx) -> VertexIx {
        self.edges[e].from
    }

    /// Out-neighbors in out-list order (repeats for parallel edges).
    pub fn successors(&self, v: VertexIx) -> impl Iterator<Item = VertexIx> + '_ {
        self.out[v].iter().map(move |&e| self.edges[e].to)
    }

    pub fn sinks(&self) -> Vec<VertexIx> {
        (0..self.vertex_count()).filter(|&v| self.is_sink(v)).collect()
    }

    /// Vertices whose switch is not forced: non-sinks with out-degree at least 2.
    pub fn askable(&self) -> Vec<VertexIx> {
        (0..self.vertex_count()).filter(|&v| self.out_degree(v) >= 2).collect()
    }

    pub fn tag(&self, v: VertexIx, key: &str) -> Option<&str> {
        self.vertices[v].tags.get(key).map(String::as_str)
    }

    pub fn tag_usize(&self, v: VertexIx, key: &str) -> Option<usize> {
        self.tag(v, key).and_then(|s| s.parse().ok())
    }

    /// Topological order, or `None` if the edge relation has a cycle.
    pub fn topological_order(&self) -> Option<Vec<VertexIx>> {
        let n = self.vertex_count();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_degree(v)).collect();
        let mut stack: Vec<VertexIx> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for w in self.successors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Vertices reachable from `from` (including itself), as a membership mask.
    pub fn reachable_from(&self, from: VertexIx) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Depth of each vertex: the longest edge distance from the source on an
    /// acyclic graph, or `None` if cyclic.
    pub fn depths(&self) -> Option<Vec<usize>> {
        let order = self.topological_order()?;
        let mut depth = vec![0usize; self.vertex_count()];
        for &v in &order {
            for w in self.successors(v) {
                depth[w] = depth[w].max(depth[v] + 1);
            }
        }
        Some(depth)
    }

    /// The stored level of each vertex, falling back to `depth + 1`.
    pub fn levels(&self) -> Option<Vec<usize>> {
        if self.vertices.iter().all(|v| v.level.is_some()) {
            return Some(self.vertices.iter().map(|v| v.level.unwrap() as usize).collect());
        }
        self.depths().map(|d| d.into_iter().map(|x| x + 1).collect())
    }

    pub fn is_tree(&self) -> bool {
        self.is_acyclic()
            && (0..self.vertex_count())
                .all(|v| if v == self.source { self.in_degree(v) == 0 } else { self.in_degree(v) == 1 })
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            name: self.name.clone(),
            multigraph: self.multigraph,
            allow_cycles: self.allow_cycles,
            source: self.vertices[self.source].id.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), level: v.level, tags: v.tags.clone() })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: self.vertices[e.from].id.clone(),
                    to: self.vertices[e.to].id.clone(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::new(&doc.name);
        b.multigraph(doc.multigraph).allow_cycles(doc.allow_cycles);
        for v in &doc.vertices {
            b.try_vertex(&v.id, v.level, v.tags.clone())?;
        }
        for (i, e) in doc.edges.iter().enumerate() {
            let from = b.lookup(&e.from).ok_or_else(|| GraphError::UnknownVertex {
                field: format!("edges[{i}].from"),
                id: e.from.clone(),
            })?;
            let to = b.lookup(&e.to).ok_or_else(|| GraphError::UnknownVertex {
                field: format!("edges[{i}].to"),
                id: e.to.clone(),
            })?;
            b.try_edge_with_id(&e.id, from, to)?;
        }
        let source = b.lookup(&doc.source).ok_or_else(|| GraphError::UnknownVertex {
            field: "source".into(),
            id: doc.source.clone(),
        })?;
        b.source(source);
        b.build()
    }

    pub fn to_json(&self) -> String {
        self.to_doc().to_json()
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        Graph::from_doc(&GraphDoc::from_json(text)?)
    }

    /// Graphviz rendering. Edges are emitted grouped by tail in out-list
    /// order and carry their position as `taillabel`/`pos_index`.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph {} {{", dot_quote(&self.name));
        let _ = writeln!(s, "  ordering=out;");
        for v in &self.vertices {
            match v.level {
                Some(l) => {
                    let _ = writeln!(s, "  {} [level={}];", dot_quote(&v.id), l);
                }
                None => {
                    let _ = writeln!(s, "  {};", dot_quote(&v.id));
                }
            }
        }
        for v in 0..self.vertex_count() {
            for (pos, &e) in self.out[v].iter().enumerate() {
                let edge = &self.edges[e];
                let _ = writeln!(
                    s,
                    "  {} -> {} [id={}, pos_index={}, taillabel=\"{}\"];",
                    dot_quote(&self.vertices[edge.from].id),
                    dot_quote(&self.vertices[edge.to].id),
                    dot_quote(&edge.id),
                    pos,
                    pos
                );
            }
        }
        s.push_str("}\n");
        s
    }

    /// Adjacency in a canonical numbering: breadth-first from the source,
    /// visiting out-lists in order. Two single-source graphs whose vertices are
    /// all reachable get equal forms iff they are isomorphic by a map that
    /// preserves out-list order.
    pub fn ordered_canonical_form(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut order = vec![self.source];
        label[self.source] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in self.successors(v) {
                if label[w] == usize::MAX {
                    label[w] = order.len();
                    order.push(w);
                }
            }
        }
        order
            .iter()
            .map(|&v| self.successors(v).map(|w| label[w]).collect())
            .collect()
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Incremental graph construction. Edge ids default to `e0`, `e1`, ...
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    name: String,
    multigraph: bool,
    allow_cycles: bool,
    source: Option<VertexIx>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<String, VertexIx>,
    edge_ids: HashSet<String>,
}

impl GraphBuilder {
    pub fn new(name: &str) -> Self {
        GraphBuilder {
            name: name.to_string(),
            multigraph: false,
            allow_cycles: false,
            source: None,
            vertices: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            edge_ids: HashSet::new(),
        }
    }

    pub fn multigraph(&mut self, yes: bool) -> &mut Self {
        self.multigraph = yes;
        self
    }

    pub fn allow_cycles(&mut self, yes: bool) -> &mut Self {
        self.allow_cycles = yes;
        self
    }

    pub fn source(&mut self, v: VertexIx) -> &mut Self {
        self.source = Some(v);
        self
    }

    pub fn lookup(&self, id: &str) -> Option<VertexIx> {
        self.index.get(id).copied()
    }

    pub fn try_vertex(
        &mut self,
        id: &str,
        level: Option<u32>,
        tags: BTreeMap<String, String>,
    ) -> Result<VertexIx, GraphError> {
        if self.index.contains_key(id) {
            return Err(GraphError::DuplicateVertex(id.to_string()));
        }
        let ix = self.vertices.len();
        self.vertices.push(Vertex { id: id.to_string(), level, tags });
        self.index.insert(id.to_string(), ix);
        Ok(ix)
    }

    /// Adds a vertex; panics on a duplicate id (generator use).
    pub fn vertex(&mut self, id: &str, level: Option<u32>, tags: &[(&str, String)]) -> VertexIx {
        let tags = tags.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        self.try_vertex(id, level, tags).expect("generator produced a duplicate vertex id")
    }

    pub fn try_edge_with_id(&mut self, id: &str, from: VertexIx, to: VertexIx) -> Result<EdgeIx, GraphError> {
        if !self.edge_ids.insert(id.to_string()) {
            return Err(GraphError::DuplicateEdge(id.to_string()));
        }
        self.edges.push(Edge { id: id.to_string(), from, to });
        Ok(self.edges.len() - 1)
    }

    pub fn edge(&mut self, from: VertexIx, to: VertexIx) -> EdgeIx {
        let mut n = self.edges.len();
        let mut id = format!("e{n}");
        while self.edge_ids.contains(&id) {
            n += 1;
            id = format!("e{n}");
        }
        self.try_edge_with_id(&id, from, to).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Finalizes the graph. The source defaults to the first vertex.
    pub fn build(self) -> Result<Graph, GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = self.vertices.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut edge_pos = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            edge_pos.push(out[e.from].len());
            out[e.from].push(i);
            inc[e.to].push(i);
        }
        Ok(Graph {
            name: self.name,
            multigraph: self.multigraph,
            allow_cycles: self.allow_cycles,
            source: self.source.unwrap_or(0),
            vertices: self.vertices,
            edges: self.edges,
            out,
            inc,
            edge_pos,
            index: self.index,
        })
    }
}

/// Canonical JSON interchange form of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub name: String,
    pub multigraph: bool,
    pub allow_cycles: bool,
    pub source: String,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
}

impl GraphDoc {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<GraphDoc, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))
    }
}

/// Checks every graph invariant on a raw document, including the ones a
/// built [`Graph`] cannot violate (unknown endpoints, duplicate ids).
pub fn validate_doc(doc: &GraphDoc) -> Vec<String> {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for v in &doc.vertices {
        if !seen.insert(v.id.as_str()) {
            violations.push(format!("duplicate vertex id: {}", v.id));
        }
    }
    let mut edge_ids = HashSet::new();
    for (i, e) in doc.edges.iter().enumerate() {
        if !edge_ids.insert(e.id.as_str()) {
            violations.push(format!("duplicate edge id: {}", e.id));
        }
        for (field, end) in [("from", &e.from), ("to", &e.to)] {
            if !seen.contains(end.as_str()) {
                violations.push(format!("unknown endpoint: edges[{i}].{field} = {end} (edge {})", e.id));
            }
        }
    }
    if !seen.contains(doc.source.as_str()) {
        violations.push(format!("unknown source: {}", doc.source));
    }
    if !violations.is_empty() {
        return violations;
    }
    match Graph::from_doc(doc) {
        Ok(g) => validate(&g),
        Err(e) => vec![e.to_string()],
    }
}

/// Lists every violated graph invariant; empty iff the graph is valid.
pub fn validate(g: &Graph) -> Vec<String> {
    let mut violations = Vec::new();
    let n = g.vertex_count();
    let roots: Vec<&str> = (0..n).filter(|&v| g.in_degree(v) == 0).map(|v| g.id(v)).collect();
    if roots.len() > 1 {
        violations.push(format!("multiple sources: {}", roots.join(", ")));
    }
    if g.in_degree(g.source()) != 0 {
        violations.push(format!("declared source {} has in-degree {}", g.id(g.source()), g.in_degree(g.source())));
    }
    if roots.is_empty() {
        violations.push("no vertex with in-degree 0".to_string());
    }
    if !g.allows_cycles() && !g.is_acyclic() {
        let on_cycle: Vec<&str> = cycle_vertices(g).into_iter().map(|v| g.id(v)).collect();
        violations.push(format!("cycle detected: {}", on_cycle.join(", ")));
    }
    if !g.is_multigraph() {
        let mut pairs = HashSet::new();
        for e in g.edges() {
            if !pairs.insert((e.from, e.to)) {
                violations.push(format!("parallel edge in simple graph: {} ({} -> {})", e.id, g.id(e.from), g.id(e.to)));
            }
        }
    }
    let reach = g.reachable_from(g.source());
    let unreachable: Vec<&str> = (0..n).filter(|&v| !reach[v]).map(|v| g.id(v)).collect();
    if !unreachable.is_empty() {
        violations.push(format!("unreachable from source: {}", unreachable.join(", ")));
    }
    for e in g.edges() {
        if let (Some(a), Some(b)) = (g.vertex(e.from).level, g.vertex(e.to).level) {
            if b != a + 1 {
                violations.push(format!("level jump on edge {}: {} -> {}", e.id, a, b));
            }
        }
    }
    violations
}

/// Vertices that lie on some directed cycle (those left after peeling
/// in-degree-0 and out-degree-0 vertices).
fn cycle_vertices(g: &Graph) -> Vec<VertexIx> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let indeg = g.in_edges(v).iter().filter(|&&e| alive[g.tail(e)]).count();
            let outdeg = g.out_edges(v).iter().filter(|&&e| alive[g.head(e)]).count();
            if indeg == 0 || outdeg == 0 {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// The hidden switch setting: one chosen out-edge per non-sink vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchAssignment {
    choice: Vec<Option<EdgeIx>>,
}

impl SwitchAssignment {
    /// Builds an assignment from per-vertex out-list positions.
    pub fn from_positions(g: &Graph, positions: &[usize]) -> Result<Self, GraphError> {
        if positions.len() != g.vertex_count() {
            return Err(GraphError::Invalid("one position per vertex required".into()));
        }
        let mut choice = vec![None; g.vertex_count()];
        for v in 0..g.vertex_count() {
            if g.is_sink(v) {
                continue;
            }
            let e = g.out_edges(v).get(positions[v]).copied().ok_or_else(|| {
                GraphError::Invalid(format!("position {} out of range at {}", positions[v], g.id(v)))
            })?;
            choice[v] = Some(e);
        }
        Ok(SwitchAssignment { choice })
    }

    pub fn all_left(g: &Graph) -> Self {
        SwitchAssignment { choice: (0..g.vertex_count()).map(|v| g.out_edges(v).first().copied()).collect() }
    }

    /// A possibly partial assignment; used to feed scripted adversaries.
    pub fn partial(choice: Vec<Option<EdgeIx>>) -> Self {
        SwitchAssignment { choice }
    }

    pub fn get(&self, v: VertexIx) -> Option<EdgeIx> {
        self.choice.get(v).copied().flatten()
    }

    /// Totality and membership check.
    pub fn check(&self, g: &Graph) -> Vec<String> {
        let mut problems = Vec::new();
        for v in 0..g.vertex_count() {
            match self.get(v) {
                None if !g.is_sink(v) => problems.push(format!("no switch for {}", g.id(v))),
                Some(e) if g.tail(e) != v => {
                    problems.push(format!("edge {} is not an out-edge of {}", g.edge_id(e), g.id(v)))
                }
                _ => {}
            }
        }
        problems
    }

    /// JSON object `{vertex_id: edge_id}`, sorted by vertex id.
    pub fn to_json(&self, g: &Graph) -> String {
        let map: BTreeMap<&str, &str> = (0..g.vertex_count())
            .filter_map(|v| self.get(v).map(|e| (g.id(v), g.edge_id(e))))
            .collect();
        serde_json::to_string_pretty(&map).unwrap()
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<Self, GraphError> {
        let map: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        let mut choice = vec![None; g.vertex_count()];
        for (vid, eid) in map {
            let v = g
                .vertex_ix(&vid)
                .ok_or_else(|| GraphError::UnknownVertex { field: "assignment".into(), id: vid.clone() })?;
            let e = g.edge_ix(&eid).ok_or(GraphError::UnknownEdge(eid))?;
            choice[v] = Some(e);
        }
        Ok(SwitchAssignment { choice })
    }
}

/// Natural ordering of ids: digit runs compare numerically, so `x2 < x10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ai, mut bi) = (a.char_indices().peekable(), b.char_indices().peekable());
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((i, ca)), Some((j, cb))) => {
                if ca.is_ascii_digit() && cb.is_ascii_digit() {
                    let ea = a[i..].find(|c: char| !c.is_ascii_digit()).map_or(a.len(), |x| i + x);
                    let eb = b[j..].find(|c: char| !c.is_ascii_digit()).map_or(b.len(), |x| j + x);
                    let (na, nb) = (a[i..ea].trim_start_matches('0'), b[j..eb].trim_start_matches('0'));
                    let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    while ai.peek().is_some_and(|&(k, _)| k < ea) {
                        ai.next();
                    }
                    while bi.peek().is_some_and(|&(k, _)| k < eb) {
                        bi.next();
                    }
                } else {
                    if ca != cb {
                        return ca.cmp(&cb);
                    }
                    ai.next();
                    bi.next();
                }
            }
        }
    }
}
