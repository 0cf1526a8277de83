//! Naive reference implementations used as test oracles.

#![allow(dead_code)]

use std::collections::HashMap;

use switchquest::{Goal, Graph};

/// Switch positions: `None` for hidden, `Some(i)` for the `i`-th out-edge.
pub type State = Vec<Option<usize>>;

/// Where the walk goes under a full assignment: the edges taken, then the
/// final vertex, which is a sink or the first repeated vertex.
fn walk(g: &Graph, full: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.vertex_count()];
    let mut v = g.source();
    let mut out = Vec::new();
    seen[v] = true;
    while !g.is_sink(v) {
        let e = g.out_edges(v)[full[v]];
        out.push(e);
        v = g.head(e);
        if seen[v] {
            break;
        }
        seen[v] = true;
    }
    out.push(v);
    out
}

pub struct Oracle<'g> {
    g: &'g Graph,
    k: usize,
    goal: Goal,
    /// Every full assignment with its outcome.
    worlds: Vec<(Vec<usize>, Vec<usize>)>,
    memo: HashMap<State, usize>,
}

impl<'g> Oracle<'g> {
    pub fn new(g: &'g Graph, k: usize, goal: Goal) -> Self {
        let mut fulls = vec![Vec::new()];
        for v in 0..g.vertex_count() {
            let d = g.out_degree(v).max(1);
            fulls = fulls
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (0..d).map(move |i| {
                        let mut p = p.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        let worlds = fulls
            .into_iter()
            .map(|f| {
                let mut o = walk(g, &f);
                if goal == Goal::Sink {
                    o = vec![*o.last().unwrap()];
                }
                (f, o)
            })
            .collect();
        Oracle { g, k, goal, worlds, memo: HashMap::new() }
    }

    pub fn initial(&self) -> State {
        (0..self.g.vertex_count()).map(|v| (self.g.out_degree(v) == 1).then_some(0)).collect()
    }

    fn determined(&self, s: &State) -> bool {
        let mut outcomes = self
            .worlds
            .iter()
            .filter(|(f, _)| s.iter().zip(f).all(|(k, &x)| k.is_none_or(|k| k == x)))
            .map(|(_, o)| o);
        let first = outcomes.next().unwrap();
        outcomes.all(|o| o == first)
    }

    /// Minimax rounds from `s`, trying every question set of size 1..=k.
    pub fn value(&mut self, s: &State) -> usize {
        if let Some(&v) = self.memo.get(s) {
            return v;
        }
        let v = if self.determined(s) {
            0
        } else {
            let hidden: Vec<usize> =
                (0..self.g.vertex_count()).filter(|&v| s[v].is_none() && !self.g.is_sink(v)).collect();
            let mut best = usize::MAX;
            for size in 1..=self.k.min(hidden.len()) {
                for set in subsets(&hidden, size) {
                    let mut worst = 0;
                    for answer in self.answers(&set) {
                        let mut child = s.clone();
                        for (&v, i) in set.iter().zip(answer) {
                            child[v] = Some(i);
                        }
                        worst = worst.max(self.value(&child));
                        if worst >= best {
                            break;
                        }
                    }
                    best = best.min(1 + worst);
                }
            }
            best
        };
        self.memo.insert(s.clone(), v);
        v
    }

    fn answers(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &v in set {
            out = out
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (0..self.g.out_degree(v)).map(move |i| {
                        let mut p = p.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

pub fn brute_value(g: &Graph, k: usize, goal: Goal) -> usize {
    let mut o = Oracle::new(g, k, goal);
    let s = o.initial();
    o.value(&s)
}
