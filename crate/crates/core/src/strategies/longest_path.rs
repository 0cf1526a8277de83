//! Adversaries that keep the flow on a longest path.

use super::{known_answer, Adversary, AdversaryResponse};
use crate::game::{GameError, Knowledge};
use crate::graph::{EdgeIx, Graph, VertexIx};
use crate::reduce::{
    lex_least_longest_path, longest_generalized_path, longest_path_len, reduce_simple, restrict_to_choices,
    PathSpec, ReduceError, ReductionResult, GENERALIZED_PATH_CAP,
};

fn reduce_err(e: ReduceError) -> GameError {
    GameError::Unsupported(e.to_string())
}

fn require_min_out_degree_two(g: &Graph, name: &str) -> Result<(), GameError> {
    match (0..g.vertex_count()).find(|&v| g.out_degree(v) == 1) {
        Some(v) => Err(GameError::precondition(name, format!("`{}` has out-degree 1", g.id(v)))),
        None => Ok(()),
    }
}

/// Sink-search adversary for one question per round on simple DAGs without
/// out-degree-1 vertices.
///
/// Each answer looks at the reduced residual graph `W` and its
/// lexicographically least longest path `x_1 .. x_m`:
/// * `x = x_i` with a shortcut `x_{i-1} -> x_{i+1}`: answer away from `x_{i+1}`;
/// * `x = x_i` otherwise: answer along the path;
/// * `x` off the path: answer an off-path out-neighbor, else the last path
///   vertex among its out-neighbors.
///
/// When `x` is already merged with other vertices in `W`, the answer is the
/// first edge keeping the residual longest path longest.
#[derive(Debug, Clone, Default)]
pub struct LongestPathCases {
    log: Vec<(usize, usize)>,
}

impl LongestPathCases {
    /// Residual longest-path length before and after each answer.
    pub fn length_log(&self) -> &[(usize, usize)] {
        &self.log
    }

    fn residual(g: &Graph, know: &Knowledge) -> Result<ReductionResult, GameError> {
        reduce_simple(&restrict_to_choices(g, know.choices())).map_err(reduce_err)
    }

    fn residual_len_after(g: &Graph, know: &Knowledge, x: VertexIx, e: EdgeIx) -> Result<usize, GameError> {
        let mut k2 = know.clone();
        k2.set_unchecked(x, e);
        longest_path_len(&Self::residual(g, &k2)?.graph).map_err(reduce_err)
    }

    fn choose(&self, g: &Graph, know: &Knowledge, x: VertexIx) -> Result<(EdgeIx, usize), GameError> {
        let w = Self::residual(g, know)?;
        let p = lex_least_longest_path(&w.graph).map_err(reduce_err)?;
        let before = p.edges.len();
        let mx = w.image(x);
        let img = |e: EdgeIx| w.image(g.head(e));
        let out = g.out_edges(x);
        if w.preimage(mx).len() == 1 && !w.graph.is_sink(mx) {
            let e = match p.vertices.iter().position(|&u| u == mx) {
                Some(i) => {
                    let next = p.vertices[i + 1];
                    let shortcut = i >= 1 && w.graph.successors(p.vertices[i - 1]).any(|u| u == next);
                    if shortcut {
                        *out.iter().find(|&&e| img(e) != next).expect("reduced vertex has two out-neighbors")
                    } else {
                        *out.iter().find(|&&e| img(e) == next).expect("path edge comes from x")
                    }
                }
                None => match out.iter().find(|&&e| !p.vertices.contains(&img(e))) {
                    Some(&e) => e,
                    None => *out
                        .iter()
                        .max_by_key(|&&e| p.vertices.iter().position(|&u| u == img(e)))
                        .unwrap(),
                },
            };
            return Ok((e, before));
        }
        let mut best = (out[0], 0);
        for (i, &e) in out.iter().enumerate() {
            let l = Self::residual_len_after(g, know, x, e)?;
            if i == 0 || l > best.1 {
                best = (e, l);
            }
        }
        Ok((best.0, before))
    }
}

impl Adversary for LongestPathCases {
    fn name(&self) -> String {
        "thm3_longest_path".into()
    }

    fn prepare(&mut self, g: &Graph, k: usize) -> Result<(), GameError> {
        let name = "thm3_longest_path";
        if k != 1 {
            return Err(GameError::precondition(name, format!("answers one question per round, got k = {k}")));
        }
        if !g.is_acyclic() {
            return Err(GameError::precondition(name, "graph has a cycle"));
        }
        let mut pairs: Vec<(VertexIx, VertexIx)> = g.edges().iter().map(|e| (e.from, e.to)).collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            return Err(GameError::precondition(name, "graph has parallel edges"));
        }
        require_min_out_degree_two(g, name)?;
        self.log.clear();
        Ok(())
    }

    fn respond(&mut self, g: &Graph, know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError> {
        let mut work = know.clone();
        let mut answers = Vec::with_capacity(asked.len());
        for &x in asked {
            if let Some(a) = known_answer(&work, x) {
                answers.push(a);
                continue;
            }
            let (e, before) = self.choose(g, &work, x)?;
            work.set_unchecked(x, e);
            let after = longest_path_len(&Self::residual(g, &work)?.graph).map_err(reduce_err)?;
            self.log.push((before, after));
            answers.push((x, e));
        }
        Ok(AdversaryResponse { answers, volunteered: Vec::new() })
    }

    fn snapshot(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }

    fn memo_key(&self) -> Option<u64> {
        Some(0)
    }
}

/// Path-search adversary: fixes a longest path (generalized path on cyclic
/// graphs) at the start, answers path vertices along it and everything else
/// with the first edge.
#[derive(Debug, Clone, Default)]
pub struct PathEdge {
    path: Option<PathSpec>,
}

impl PathEdge {
    pub fn path(&self) -> Option<&PathSpec> {
        self.path.as_ref()
    }
}

impl Adversary for PathEdge {
    fn name(&self) -> String {
        "thm4_path_edge".into()
    }

    fn prepare(&mut self, g: &Graph, _k: usize) -> Result<(), GameError> {
        require_min_out_degree_two(g, "thm4_path_edge")?;
        let path = if g.is_acyclic() {
            lex_least_longest_path(g)
        } else {
            longest_generalized_path(g, GENERALIZED_PATH_CAP)
        };
        self.path = Some(path.map_err(reduce_err)?);
        Ok(())
    }

    fn respond(&mut self, g: &Graph, know: &Knowledge, asked: &[VertexIx]) -> Result<AdversaryResponse, GameError> {
        let path = self.path.as_ref().expect("prepare runs before respond");
        let answers = asked
            .iter()
            .map(|&v| known_answer(know, v).unwrap_or_else(|| (v, path.edge_at(v).unwrap_or(g.out_edges(v)[0]))))
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run_match, Goal};
    use crate::generators::{gen_hl, gen_pyramid, random_dag};
    use crate::strategies::{AlgorithmA, FollowFlow};

    #[test]
    fn pyramid_forces_two_single_questions() {
        let g = gen_pyramid(2).unwrap();
        let mut a = LongestPathCases::default();
        let r = run_match(&g, 1, &mut FollowFlow, &mut a, Goal::Sink).unwrap();
        assert_eq!(r.rounds, 2);
        assert!(a.length_log().iter().all(|&(b, a)| b - a <= 1));
    }

    #[test]
    fn rejects_k_above_one_and_bad_graphs() {
        let g = gen_pyramid(2).unwrap();
        assert!(LongestPathCases::default().prepare(&g, 2).is_err());
        let mut b = crate::graph::GraphBuilder::new("chain");
        let s = b.vertex("s", None, &[]);
        let t = b.vertex("t", None, &[]);
        b.edge(s, t);
        assert!(LongestPathCases::default().prepare(&b.build().unwrap(), 1).is_err());
    }

    #[test]
    fn residual_path_shrinks_by_at_most_one() {
        let mut checked = 0;
        for seed in 0..30 {
            let g = random_dag(8, 3, 2, false, seed).unwrap();
            let mut a = LongestPathCases::default();
            run_match(&g, 1, &mut AlgorithmA, &mut a, Goal::Sink).unwrap();
            for &(before, after) in a.length_log() {
                assert!(after <= before && before - after <= 1, "seed {seed}: {before} -> {after}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn path_edge_keeps_the_flow_on_the_spine() {
        let g = gen_hl(2, 2).unwrap();
        let mut a = PathEdge::default();
        let r = run_match(&g, 1, &mut FollowFlow, &mut a, Goal::Path).unwrap();
        assert_eq!(r.rounds, 4);
    }
}
