use super::{known_answer, Adversary, AdversaryResponse, Layers, PyramidIndex};
use crate::game::{flow, FlowEnd, GameError, Knowledge};
use crate::graph::{EdgeIx, Graph, SwitchAssignment, VertexIx};

/// Vertex the flow stops at, if it is still open.
fn endpoint(g: &Graph, know: &Knowledge) -> Option<VertexIx> {
    let f = flow(g, know);
    (f.end == FlowEnd::Frontier).then(|| f.last())
}

/// Asked vertices ordered by decreasing level, stable within a level.
fn deepest_first(asked: &[VertexIx], level_of: &[usize]) -> Vec<VertexIx> {
    let mut order = asked.to_vec();
    order.sort_by_key(|&v| std::cmp::Reverse(level_of[v]));
    order
}

/// Answers the first out-edge everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllLeft;

impl Adversary for AllLeft {
    fn name(&self) -> String {
        "all_left".into()
    }

    fn respond(&mut self, g: &Graph, know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError> {
        let answers = asked.iter().map(|&v| known_answer(know, v).unwrap_or((v, g.out_edges(v)[0]))).collect();
        Ok(AdversaryResponse { answers, volunteered: Vec::new() })
    }

    fn snapshot(&self) -> Box<dyn Adversary> {
        Box::new(*self)
    }

    fn memo_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// Answers from a fixed switch assignment. Vertices missing from a partial
/// assignment go unanswered, which the match runner reports.
#[derive(Debug, Clone)]
pub struct FixedAssignment {
    assignment: SwitchAssignment,
}

impl FixedAssignment {
    pub fn new(assignment: SwitchAssignment) -> Self {
        FixedAssignment { assignment }
    }
}

impl Adversary for FixedAssignment {
    fn name(&self) -> String {
        "fixed".into()
    }

    fn respond(&mut self, _g: &Graph, _know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError> {
        let answers = asked.iter().filter_map(|&v| self.assignment.get(v).map(|e| (v, e))).collect();
        Ok(AdversaryResponse { answers, volunteered: Vec::new() })
    }

    fn snapshot(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }

    fn memo_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// On a rooted tree, sends each asked vertex toward the child whose subtree
/// holds the fewest vertices asked in the same round (leftmost on ties).
#[derive(Debug, Clone, Default)]
pub struct TreeMinSubtree {
    /// Preorder entry time and subtree end per vertex.
    span: Vec<(usize, usize)>,
}

impl Adversary for TreeMinSubtree {
    fn name(&self) -> String {
        "tree_min_subtree".into()
    }

    fn prepare(&mut self, g: &Graph, _k: usize) -> Result<(), GameError> {
        if !g.is_tree() {
            return Err(GameError::precondition("tree_min_subtree", "graph is not a rooted tree"));
        }
        self.span = vec![(0, 0); g.vertex_count()];
        let mut clock = 0;
        let mut stack = vec![(g.source(), false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                self.span[v].1 = clock;
                continue;
            }
            self.span[v].0 = clock;
            clock += 1;
            stack.push((v, true));
            for w in g.successors(v).collect::<Vec<_>>().into_iter().rev() {
                stack.push((w, false));
            }
        }
        Ok(())
    }

    fn respond(&mut self, g: &Graph, know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError> {
        let inside = |c: VertexIx| {
            let (lo, hi) = self.span[c];
            asked.iter().filter(|&&u| (lo..hi).contains(&self.span[u].0)).count()
        };
        let answers = asked
            .iter()
            .map(|&v| {
                known_answer(know, v).unwrap_or_else(|| {
                    let e = *g.out_edges(v).iter().min_by_key(|&&e| inside(g.head(e))).unwrap();
                    (v, e)
                })
            })
            .collect();
        Ok(AdversaryResponse { answers, volunteered: Vec::new() })
    }

    fn snapshot(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }

    fn memo_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// Length of the path from `v` along known switches.
fn known_run(g: &Graph, know: &Knowledge, mut v: VertexIx) -> usize {
    let mut len = 0;
    while let Some(e) = know.get(v) {
        v = g.head(e);
        len += 1;
        if len > g.vertex_count() {
            break;
        }
    }
    len
}

/// On a pyramid, answers deepest questions first. Vertices off the flow end
/// go left; the flow end goes toward the child with the shorter known
/// continuation, left on ties.
#[derive(Debug, Clone, Default)]
pub struct PyramidShorterSide {
    idx: PyramidIndex,
}

impl Adversary for PyramidShorterSide {
    fn name(&self) -> String {
        "pyramid_shorter_side".into()
    }

    fn prepare(&mut self, g: &Graph, _k: usize) -> Result<(), GameError> {
        self.idx = PyramidIndex::build(g, "pyramid_shorter_side")?;
        Ok(())
    }

    fn respond(&mut self, g: &Graph, know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError> {
        let levels: Vec<usize> = self.idx.coord.iter().map(|c| c.0).collect();
        let mut work = know.clone();
        let mut answers = Vec::with_capacity(asked.len());
        for v in deepest_first(asked, &levels) {
            let e = match work.get(v) {
                Some(e) => e,
                None => {
                    let out = g.out_edges(v);
                    if endpoint(g, &work) == Some(v) {
                        let l_u = known_run(g, &work, g.head(out[0]));
                        let l_w = known_run(g, &work, g.head(out[1]));
                        if l_w < l_u {
                            out[1]
                        } else {
                            out[0]
                        }
                    } else {
                        out[0]
                    }
                }
            };
            work.set_unchecked(v, e);
            answers.push((v, e));
        }
        Ok(AdversaryResponse { answers, volunteered: Vec::new() })
    }

    fn snapshot(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }

    fn memo_key(&self) -> Option<u64> {
        Some(0)
    }

    fn relevant_only(&self) -> bool {
        true
    }
}

/// On a generalized pyramid (layered, out-degree `d`, first edges forming
/// level-to-level matchings), answers deepest questions first with the
/// matching edge. Once `d` states on a level are known it commits the whole
/// level to the matching edge. The flow end is sent so that the flow lands on
/// a still hidden vertex of the first level not fully known.
#[derive(Debug, Clone, Default)]
pub struct GpyLeftCommitting {
    layers: Layers,
    d: usize,
    endpoint_answers: Vec<usize>,
}

impl GpyLeftCommitting {
    /// Number of flow-end answers given in each round so far.
    pub fn endpoint_answers_per_round(&self) -> &[usize] {
        &self.endpoint_answers
    }

    /// Where the flow reaches `level` starting with edge `e`, following known
    /// switches. `None` if it stops earlier.
    fn landing(&self, g: &Graph, know: &Knowledge, e: EdgeIx, level: usize) -> Option<VertexIx> {
        let mut v = g.head(e);
        while self.layers.level_of[v] < level {
            v = g.head(know.get(v)?);
        }
        Some(v)
    }
}

impl Adversary for GpyLeftCommitting {
    fn name(&self) -> String {
        "gpy_left_committing".into()
    }

    fn prepare(&mut self, g: &Graph, _k: usize) -> Result<(), GameError> {
        let name = "gpy_left_committing";
        let layers = Layers::build(g, name)?;
        let d = g.out_degree(g.source());
        if d < 2 {
            return Err(GameError::precondition(name, "source out-degree is below 2"));
        }
        let depth = layers.rows.len();
        for (l, row) in layers.rows.iter().enumerate() {
            let last = l + 1 == depth;
            let mut firsts = Vec::new();
            for &v in row {
                if last != g.is_sink(v) || (!last && g.out_degree(v) != d) {
                    return Err(GameError::precondition(name, format!("vertex `{}` breaks the uniform out-degree", g.id(v))));
                }
                if !last {
                    firsts.push(g.head(g.out_edges(v)[0]));
                }
            }
            firsts.sort_unstable();
            if firsts.windows(2).any(|w| w[0] == w[1]) {
                return Err(GameError::precondition(name, format!("first edges out of level {} are not a matching", l + 1)));
            }
        }
        self.layers = layers;
        self.d = d;
        self.endpoint_answers.clear();
        Ok(())
    }

    fn respond(&mut self, g: &Graph, know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError> {
        let mut work = know.clone();
        let mut resp = AdversaryResponse::default();
        let mut endpoints = 0;
        let depth = self.layers.rows.len();
        for v in deepest_first(asked, &self.layers.level_of) {
            if let Some(e) = work.get(v) {
                resp.answers.push((v, e));
                continue;
            }
            let level = self.layers.level_of[v];
            let row = self.layers.row(level);
            let left = g.out_edges(v)[0];
            if endpoint(g, &work) != Some(v) {
                let others_known = row.iter().filter(|&&u| u != v && work.is_known(u)).count();
                work.set_unchecked(v, left);
                resp.answers.push((v, left));
                if others_known + 1 >= self.d {
                    for &u in row {
                        if !work.is_known(u) {
                            let e = g.out_edges(u)[0];
                            work.set_unchecked(u, e);
                            resp.volunteered.push((u, e));
                        }
                    }
                }
                continue;
            }
            endpoints += 1;
            let target = (level + 1..depth).find(|&j| self.layers.row(j).iter().any(|&u| !work.is_known(u)));
            let e = match target {
                None => left,
                Some(j) => {
                    let lands: Vec<Option<VertexIx>> =
                        g.out_edges(v).iter().map(|&e| self.landing(g, &work, e, j)).collect();
                    let mut distinct: Vec<VertexIx> = lands.iter().flatten().copied().collect();
                    distinct.sort_unstable();
                    distinct.dedup();
                    assert_eq!(distinct.len(), lands.len(), "flow-end candidates on level {j} must be distinct");
                    let pick = lands.iter().position(|l| l.is_some_and(|u| !work.is_known(u))).unwrap_or_else(|| {
                        panic!("no hidden landing vertex on level {j} for `{}`", g.id(v))
                    });
                    g.out_edges(v)[pick]
                }
            };
            work.set_unchecked(v, e);
            resp.answers.push((v, e));
        }
        self.endpoint_answers.push(endpoints);
        Ok(resp)
    }

    fn snapshot(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }

    fn memo_key(&self) -> Option<u64> {
        Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_gpy_complete, gen_gpy_grid, gen_hl, gen_pyramid, gen_tree};

    fn answer_ids(g: &Graph, resp: &AdversaryResponse) -> Vec<(String, String)> {
        resp.answers.iter().map(|&(v, e)| (g.id(v).to_string(), g.id(g.head(e)).to_string())).collect()
    }

    fn ixs(g: &Graph, ids: &[&str]) -> Vec<VertexIx> {
        ids.iter().map(|id| g.vertex_ix(id).unwrap()).collect()
    }

    #[test]
    fn tree_min_subtree_avoids_asked_subtrees() {
        let g = gen_tree(2, 2).unwrap();
        let mut a = TreeMinSubtree::default();
        a.prepare(&g, 3).unwrap();
        let know = Knowledge::new(&g);
        let r = a.respond(&g, &know, &ixs(&g, &["n1_1"])).unwrap();
        assert_eq!(answer_ids(&g, &r), vec![("n1_1".into(), "n2_1".into())]);
        let r = a.respond(&g, &know, &ixs(&g, &["n1_1", "n2_1"])).unwrap();
        assert_eq!(answer_ids(&g, &r)[0], ("n1_1".into(), "n2_2".into()));
        assert!(a.prepare(&gen_pyramid(2).unwrap(), 1).is_err());
    }

    #[test]
    fn shorter_side_worked_example() {
        let g = gen_pyramid(3).unwrap();
        let mut a = PyramidShorterSide::default();
        a.prepare(&g, 2).unwrap();
        let r = a.respond(&g, &Knowledge::new(&g), &ixs(&g, &["v1_1", "v2_1"])).unwrap();
        assert_eq!(
            answer_ids(&g, &r),
            vec![("v2_1".into(), "v3_1".into()), ("v1_1".into(), "v2_2".into())]
        );
        let r = a.respond(&g, &Knowledge::new(&g), &ixs(&g, &["v2_1", "v3_3"])).unwrap();
        assert!(r.answers.iter().all(|&(v, e)| g.out_edges(v)[0] == e));
    }

    #[test]
    fn gpy_commits_full_levels() {
        let g = gen_gpy_complete(2, 3).unwrap();
        let mut a = GpyLeftCommitting::default();
        a.prepare(&g, 3).unwrap();
        let r = a.respond(&g, &Knowledge::new(&g), &ixs(&g, &["g2_1"])).unwrap();
        assert!(r.volunteered.is_empty());
        let mut know = Knowledge::new(&g);
        know.reveal(&g, r.answers[0].0, r.answers[0].1).unwrap();
        let r = a.respond(&g, &know, &ixs(&g, &["g2_2"])).unwrap();
        assert!(r.volunteered.is_empty(), "level already complete after this answer");

        let py = gen_pyramid(3).unwrap();
        let mut a = GpyLeftCommitting::default();
        a.prepare(&py, 2).unwrap();
        let r = a.respond(&py, &Knowledge::new(&py), &ixs(&py, &["v3_1", "v3_2"])).unwrap();
        assert_eq!(r.volunteered.len(), 1);
        assert_eq!(py.id(r.volunteered[0].0), "v3_3");
    }

    #[test]
    fn gpy_flow_end_avoids_asked_vertices() {
        let g = gen_gpy_complete(2, 3).unwrap();
        let mut a = GpyLeftCommitting::default();
        a.prepare(&g, 2).unwrap();
        let r = a.respond(&g, &Knowledge::new(&g), &ixs(&g, &["g1_1", "g2_1"])).unwrap();
        assert_eq!(answer_ids(&g, &r)[1], ("g1_1".into(), "g2_2".into()));
        assert_eq!(a.endpoint_answers_per_round(), &[1]);
    }

    #[test]
    fn gpy_accepts_pyramids_and_grids() {
        let mut a = GpyLeftCommitting::default();
        a.prepare(&gen_pyramid(4).unwrap(), 2).unwrap();
        a.prepare(&gen_gpy_grid(3, 3).unwrap(), 2).unwrap();
        a.prepare(&gen_tree(2, 2).unwrap(), 2).unwrap();
        assert!(a.prepare(&gen_hl(2, 1).unwrap(), 2).is_err());
    }

    #[test]
    fn all_left_repeats_known_answers() {
        let g = gen_pyramid(2).unwrap();
        let mut know = Knowledge::new(&g);
        know.reveal(&g, 0, g.out_edges(0)[1]).unwrap();
        let r = AllLeft.respond(&g, &know, &[0]).unwrap();
        assert_eq!(r.answers, vec![(0, g.out_edges(0)[1])]);
    }
}
