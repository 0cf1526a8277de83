use std::collections::VecDeque;

use super::{Layers, PyramidIndex, Questioner};
use crate::game::{flow, FlowEnd, GameError, Knowledge};
use crate::graph::{natural_cmp, Graph, VertexIx};

fn frontier(g: &Graph, know: &Knowledge) -> Option<VertexIx> {
    let f = flow(g, know);
    (f.end == FlowEnd::Frontier).then(|| f.last())
}

fn hidden_askable(g: &Graph, know: &Knowledge, v: VertexIx) -> bool {
    g.out_degree(v) >= 2 && !know.is_known(v)
}

/// Breadth-first distance classes from `from`, following only known edges out
/// of known vertices.
fn distance_classes(g: &Graph, know: &Knowledge, from: VertexIx) -> Vec<Vec<VertexIx>> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut classes: Vec<Vec<VertexIx>> = Vec::new();
    let mut queue = VecDeque::from([from]);
    dist[from] = 0;
    while let Some(v) = queue.pop_front() {
        if classes.len() <= dist[v] {
            classes.push(Vec::new());
        }
        classes[dist[v]].push(v);
        let next: Vec<VertexIx> = match know.get(v) {
            Some(e) => vec![g.head(e)],
            None => g.successors(v).collect(),
        };
        for w in next {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    classes
}

/// Asks the current frontier only.
#[derive(Debug, Clone, Copy, Default)]
pub struct FollowFlow;

impl Questioner for FollowFlow {
    fn name(&self) -> String {
        "follow_flow".into()
    }

    fn ask(&mut self, g: &Graph, _k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError> {
        Ok(frontier(g, know).into_iter().collect())
    }

    fn snapshot(&self) -> Box<dyn Questioner> {
        Box::new(*self)
    }
}

/// Asks whole distance classes below the frontier while they fit, filling a
/// partial class in natural id order.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlgorithmA;

impl Questioner for AlgorithmA {
    fn name(&self) -> String {
        "algorithm_a".into()
    }

    fn ask(&mut self, g: &Graph, k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError> {
        let Some(f) = frontier(g, know) else { return Ok(Vec::new()) };
        let mut qs = Vec::new();
        for class in distance_classes(g, know, f) {
            let mut hidden: Vec<VertexIx> = class.into_iter().filter(|&v| hidden_askable(g, know, v)).collect();
            if qs.len() + hidden.len() <= k {
                qs.extend(hidden);
                continue;
            }
            hidden.sort_by(|&a, &b| natural_cmp(g.id(a), g.id(b)));
            let room = k - qs.len();
            qs.extend(hidden.into_iter().take(room));
            break;
        }
        Ok(qs)
    }

    fn snapshot(&self) -> Box<dyn Questioner> {
        Box::new(*self)
    }
}

/// Asks the next `k` hidden spine vertices from the frontier on; off the
/// spine it asks the frontier.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlgorithmB;

impl Questioner for AlgorithmB {
    fn name(&self) -> String {
        "algorithm_b".into()
    }

    fn prepare(&mut self, g: &Graph, _k: usize) -> Result<(), GameError> {
        if g.tag_usize(g.source(), "spine").is_none() {
            return Err(GameError::precondition("algorithm_b", "source carries no spine tag"));
        }
        Ok(())
    }

    fn ask(&mut self, g: &Graph, k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError> {
        let Some(f) = frontier(g, know) else { return Ok(Vec::new()) };
        let Some(start) = g.tag_usize(f, "spine") else { return Ok(vec![f]) };
        let mut spine: Vec<(usize, VertexIx)> = (0..g.vertex_count())
            .filter_map(|v| g.tag_usize(v, "spine").map(|i| (i, v)))
            .filter(|&(i, v)| i >= start && hidden_askable(g, know, v))
            .collect();
        spine.sort_unstable();
        Ok(spine.into_iter().take(k).map(|(_, v)| v).collect())
    }

    fn snapshot(&self) -> Box<dyn Questioner> {
        Box::new(*self)
    }
}

/// On a rooted tree, asks as many complete top levels of the frontier's
/// subtree as fit in `k`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TreeLevels;

impl Questioner for TreeLevels {
    fn name(&self) -> String {
        "tree_levels".into()
    }

    fn prepare(&mut self, g: &Graph, _k: usize) -> Result<(), GameError> {
        if !g.is_tree() {
            return Err(GameError::precondition("tree_levels", "graph is not a rooted tree"));
        }
        Ok(())
    }

    fn ask(&mut self, g: &Graph, k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError> {
        let Some(f) = frontier(g, know) else { return Ok(Vec::new()) };
        let mut qs = Vec::new();
        for class in distance_classes(g, know, f) {
            let hidden: Vec<VertexIx> = class.into_iter().filter(|&v| hidden_askable(g, know, v)).collect();
            if qs.len() + hidden.len() > k {
                break;
            }
            qs.extend(hidden);
        }
        Ok(qs)
    }

    fn snapshot(&self) -> Box<dyn Questioner> {
        Box::new(*self)
    }
}

/// On a pyramid, asks the top `l` levels of the sub-pyramid at the frontier.
#[derive(Debug, Clone)]
pub struct PyramidRecursive {
    l: usize,
    idx: PyramidIndex,
}

impl PyramidRecursive {
    pub fn new(l: usize) -> Self {
        PyramidRecursive { l, idx: PyramidIndex::default() }
    }
}

impl Questioner for PyramidRecursive {
    fn name(&self) -> String {
        format!("pyramid_recursive:l={}", self.l)
    }

    fn prepare(&mut self, g: &Graph, k: usize) -> Result<(), GameError> {
        let need = self.l * (self.l + 1) / 2;
        if k < need {
            return Err(GameError::precondition(&self.name(), format!("needs k >= {need}, got {k}")));
        }
        self.idx = PyramidIndex::build(g, &self.name())?;
        Ok(())
    }

    fn ask(&mut self, g: &Graph, _k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError> {
        let Some(f) = frontier(g, know) else { return Ok(Vec::new()) };
        let (i, j) = self.idx.coord[f];
        let mut qs = Vec::new();
        for a in 0..self.l.min(self.idx.n + 1 - i) {
            for b in 0..=a {
                let v = self.idx.get(i + a, j + b).unwrap();
                if hidden_askable(g, know, v) {
                    qs.push(v);
                }
            }
        }
        Ok(qs)
    }

    fn snapshot(&self) -> Box<dyn Questioner> {
        Box::new(self.clone())
    }
}

/// Two questions per round on a pyramid, three levels per two rounds: first
/// the root `r` and its middle grandchild, then the revealed child of `r` and
/// that child's outer child. Near the bottom it follows the flow.
#[derive(Debug, Clone, Default)]
pub struct PyramidK2 {
    idx: PyramidIndex,
    pending_root: Option<VertexIx>,
}

impl Questioner for PyramidK2 {
    fn name(&self) -> String {
        "pyramid_k2".into()
    }

    fn prepare(&mut self, g: &Graph, k: usize) -> Result<(), GameError> {
        if k != 2 {
            return Err(GameError::precondition("pyramid_k2", format!("needs k = 2, got {k}")));
        }
        self.idx = PyramidIndex::build(g, "pyramid_k2")?;
        self.pending_root = None;
        Ok(())
    }

    fn ask(&mut self, g: &Graph, _k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError> {
        let Some(f) = frontier(g, know) else { return Ok(Vec::new()) };
        let (i, j) = self.idx.coord[f];
        let keep = |vs: [VertexIx; 2]| vs.into_iter().filter(|&v| hidden_askable(g, know, v)).collect();
        if let Some(r) = self.pending_root.take() {
            let (ri, rj) = self.idx.coord[r];
            if know.is_known(r) && i == ri + 1 && i < self.idx.n + 1 {
                let outer = if j == rj { self.idx.get(ri + 2, rj) } else { self.idx.get(ri + 2, rj + 2) };
                return Ok(keep([f, outer.unwrap()]));
            }
        }
        if self.idx.n + 1 - i < 3 {
            return Ok(vec![f]);
        }
        self.pending_root = Some(f);
        Ok(keep([f, self.idx.get(i + 2, j + 1).unwrap()]))
    }

    fn snapshot(&self) -> Box<dyn Questioner> {
        Box::new(self.clone())
    }
}

/// On a layered graph, asks the frontier plus as many complete following
/// levels as fit in `k`.
#[derive(Debug, Clone, Default)]
pub struct LayeredComplete {
    layers: Layers,
}

impl Questioner for LayeredComplete {
    fn name(&self) -> String {
        "layered_complete".into()
    }

    fn prepare(&mut self, g: &Graph, _k: usize) -> Result<(), GameError> {
        self.layers = Layers::build(g, "layered_complete")?;
        Ok(())
    }

    fn ask(&mut self, g: &Graph, k: usize, know: &Knowledge) -> Result<Vec<VertexIx>, GameError> {
        let Some(f) = frontier(g, know) else { return Ok(Vec::new()) };
        let mut qs = vec![f];
        for level in self.layers.level_of[f] + 1.. {
            let row: Vec<VertexIx> =
                self.layers.row(level).iter().copied().filter(|&v| hidden_askable(g, know, v)).collect();
            if row.is_empty() || qs.len() + row.len() > k {
                break;
            }
            qs.extend(row);
        }
        Ok(qs)
    }

    fn snapshot(&self) -> Box<dyn Questioner> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_alg_b_example, gen_gpy_complete, gen_pyramid, gen_tree};

    fn ids(g: &Graph, vs: &[VertexIx]) -> Vec<String> {
        let mut out: Vec<String> = vs.iter().map(|&v| g.id(v).to_string()).collect();
        out.sort();
        out
    }

    fn reveal(g: &Graph, know: &mut Knowledge, id: &str, pos: usize) {
        let v = g.vertex_ix(id).unwrap();
        know.reveal(g, v, g.out_edges(v)[pos]).unwrap();
    }

    fn first_round(q: &mut dyn Questioner, g: &Graph, k: usize) -> Vec<String> {
        q.prepare(g, k).unwrap();
        let qs = q.ask(g, k, &Knowledge::new(g)).unwrap();
        ids(g, &qs)
    }

    #[test]
    fn algorithm_a_first_rounds() {
        let py = gen_pyramid(3).unwrap();
        assert_eq!(first_round(&mut AlgorithmA, &py, 3), vec!["v1_1", "v2_1", "v2_2"]);
        let b = gen_alg_b_example(2, 1).unwrap();
        assert_eq!(first_round(&mut AlgorithmA, &b, 2), vec!["a1_1", "x1"]);
    }

    #[test]
    fn algorithm_b_walks_the_spine() {
        let g = gen_alg_b_example(2, 2).unwrap();
        assert_eq!(first_round(&mut AlgorithmB, &g, 2), vec!["x1", "x2"]);
        let mut know = Knowledge::new(&g);
        reveal(&g, &mut know, "x1", 1);
        reveal(&g, &mut know, "x2", 0);
        let f = flow(&g, &know).last();
        assert!(g.tag(f, "spine").is_none());
        assert_eq!(AlgorithmB.ask(&g, 2, &know).unwrap(), vec![f]);
        assert!(AlgorithmB.prepare(&gen_tree(2, 2).unwrap(), 2).is_err());
    }

    #[test]
    fn tree_levels_fills_whole_levels() {
        let t = gen_tree(2, 4).unwrap();
        assert_eq!(first_round(&mut TreeLevels, &t, 3), vec!["n1_1", "n2_1", "n2_2"]);
        assert_eq!(first_round(&mut TreeLevels, &t, 6).len(), 3);
        assert_eq!(first_round(&mut TreeLevels, &gen_tree(3, 2).unwrap(), 4).len(), 4);
        assert!(TreeLevels.prepare(&gen_pyramid(2).unwrap(), 1).is_err());
    }

    #[test]
    fn pyramid_recursive_asks_sub_pyramid() {
        let g = gen_pyramid(4).unwrap();
        let mut q = PyramidRecursive::new(2);
        assert_eq!(first_round(&mut q, &g, 3), vec!["v1_1", "v2_1", "v2_2"]);
        let mut know = Knowledge::new(&g);
        reveal(&g, &mut know, "v1_1", 1);
        reveal(&g, &mut know, "v2_2", 0);
        assert_eq!(ids(&g, &q.ask(&g, 3, &know).unwrap()), vec!["v3_2", "v4_2", "v4_3"]);
        assert!(PyramidRecursive::new(2).prepare(&g, 2).is_err());
    }

    #[test]
    fn pyramid_k2_pattern() {
        let g = gen_pyramid(3).unwrap();
        let mut q = PyramidK2::default();
        assert_eq!(first_round(&mut q, &g, 2), vec!["v1_1", "v3_2"]);
        let mut know = Knowledge::new(&g);
        reveal(&g, &mut know, "v1_1", 0);
        reveal(&g, &mut know, "v3_2", 0);
        assert_eq!(ids(&g, &q.ask(&g, 2, &know).unwrap()), vec!["v2_1", "v3_1"]);

        let mut q = PyramidK2::default();
        first_round(&mut q, &g, 2);
        let mut know = Knowledge::new(&g);
        reveal(&g, &mut know, "v1_1", 1);
        reveal(&g, &mut know, "v3_2", 0);
        assert_eq!(ids(&g, &q.ask(&g, 2, &know).unwrap()), vec!["v2_2", "v3_3"]);

        assert_eq!(first_round(&mut PyramidK2::default(), &gen_pyramid(1).unwrap(), 2), vec!["v1_1"]);
        assert!(PyramidK2::default().prepare(&g, 3).is_err());
    }

    #[test]
    fn layered_complete_adds_whole_levels() {
        let g = gen_gpy_complete(2, 4).unwrap();
        assert_eq!(first_round(&mut LayeredComplete::default(), &g, 3), vec!["g1_1", "g2_1", "g2_2"]);
        assert_eq!(first_round(&mut LayeredComplete::default(), &g, 1), vec!["g1_1"]);
        let g3 = gen_gpy_complete(3, 3).unwrap();
        assert_eq!(first_round(&mut LayeredComplete::default(), &g3, 4).len(), 4);
    }

    #[test]
    fn follow_flow_stops_when_determined() {
        let g = gen_tree(2, 1).unwrap();
        let mut know = Knowledge::new(&g);
        assert_eq!(FollowFlow.ask(&g, 1, &know).unwrap(), vec![0]);
        know.reveal(&g, 0, g.out_edges(0)[0]).unwrap();
        assert!(FollowFlow.ask(&g, 1, &know).unwrap().is_empty());
    }
}
