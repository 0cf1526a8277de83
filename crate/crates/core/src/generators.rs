//! Parameterized graph families and seeded random instances.
//!
//! Ids are deterministic and human readable. Every layered family records a
//! `level` on each vertex (source on level 1).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder, GraphError, VertexIx};

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidParameter(msg.into())
}

/// Complete `d`-ary tree on `n + 1` levels.
pub fn gen_tree(d: usize, n: usize) -> Result<Graph, GraphError> {
    if d < 2 {
        return Err(invalid(format!("tree arity must be at least 2, got {d}")));
    }
    let mut b = GraphBuilder::new(&format!("T_{d}({n})"));
    let mut prev = vec![b.vertex("n1_1", Some(1), &[])];
    for level in 2..=n + 1 {
        let mut cur = Vec::with_capacity(prev.len() * d);
        for &p in &prev {
            for _ in 0..d {
                let id = format!("n{}_{}", level, cur.len() + 1);
                let v = b.vertex(&id, Some(level as u32), &[]);
                b.edge(p, v);
                cur.push(v);
            }
        }
        prev = cur;
    }
    b.build()
}

/// Pyramid graph on `n + 1` levels: `v{i}_{j}` has left child `v{i+1}_{j}`
/// and right child `v{i+1}_{j+1}`.
///
/// Holds `(n+1)(n+2)/2` vertices, `n(n+1)/2` of which are non-sinks.
pub fn gen_pyramid(n: usize) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(invalid("pyramid needs n >= 1"));
    }
    let mut b = GraphBuilder::new(&format!("Py({n})"));
    let mut ix = vec![Vec::new(); n + 2];
    for i in 1..=n + 1 {
        for j in 1..=i {
            let v = b.vertex(
                &pyramid_id(i, j),
                Some(i as u32),
                &[("family", "pyramid".to_string()), ("i", i.to_string()), ("j", j.to_string())],
            );
            ix[i].push(v);
        }
    }
    for i in 1..=n {
        for j in 1..=i {
            b.edge(ix[i][j - 1], ix[i + 1][j - 1]);
            b.edge(ix[i][j - 1], ix[i + 1][j]);
        }
    }
    b.build()
}

pub fn pyramid_id(i: usize, j: usize) -> String {
    format!("v{i}_{j}")
}

/// Vertex count of `Py(n)` on all `n + 1` levels.
pub fn pyramid_vertex_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Number of non-sink vertices of `Py(n)`.
pub fn pyramid_internal_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Generalized pyramid with exactly `d` vertices on every non-first level and
/// complete connections between consecutive levels. The matching edge
/// (vertex `j` to vertex `j`, the source to vertex 1) comes first.
pub fn gen_gpy_complete(d: usize, n: usize) -> Result<Graph, GraphError> {
    if d < 2 || n < 1 {
        return Err(invalid(format!("gpy_complete needs d >= 2 and n >= 1, got d={d}, n={n}")));
    }
    let mut b = GraphBuilder::new(&format!("GPy_complete_{d}({n})"));
    let src = b.vertex("g1_1", Some(1), &[("family", "gpy".to_string())]);
    let mut levels: Vec<Vec<VertexIx>> = vec![vec![src]];
    for level in 2..=n + 1 {
        let row = (1..=d)
            .map(|j| b.vertex(&format!("g{level}_{j}"), Some(level as u32), &[("family", "gpy".to_string())]))
            .collect();
        levels.push(row);
    }
    for w in levels.windows(2) {
        let (upper, lower) = (&w[0], &w[1]);
        for (j, &u) in upper.iter().enumerate() {
            b.edge(u, lower[j]);
            for (t, &x) in lower.iter().enumerate() {
                if t != j {
                    b.edge(u, x);
                }
            }
        }
    }
    b.build()
}

/// `d`-dimensional pyramid: lattice points with coordinate sum at most `n`,
/// edges add one unit to one coordinate, out-lists ordered by coordinate.
pub fn gen_gpy_grid(d: usize, n: usize) -> Result<Graph, GraphError> {
    if d < 2 || n < 1 {
        return Err(invalid(format!("gpy_grid needs d >= 2 and n >= 1, got d={d}, n={n}")));
    }
    let mut b = GraphBuilder::new(&format!("GPy_grid_{d}({n})"));
    let mut points: Vec<Vec<usize>> = Vec::new();
    for sum in 0..=n {
        let mut level_points = compositions(sum, d);
        level_points.sort_by(|a, b| b.cmp(a));
        points.extend(level_points);
    }
    let mut ix = std::collections::HashMap::new();
    for p in &points {
        let sum: usize = p.iter().sum();
        let id = format!("p{}", p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("_"));
        let v = b.vertex(&id, Some(sum as u32 + 1), &[("family", "gpy".to_string())]);
        ix.insert(p.clone(), v);
    }
    for p in &points {
        if p.iter().sum::<usize>() == n {
            continue;
        }
        for c in 0..d {
            let mut q = p.clone();
            q[c] += 1;
            b.edge(ix[p], ix[&q]);
        }
    }
    b.build()
}

fn compositions(sum: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![sum]];
    }
    let mut out = Vec::new();
    for first in 0..=sum {
        for mut rest in compositions(sum - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `H_l`: spine `x1 .. x{kl+1}`, each `x_i` with `i <= kl` also pointing to a
/// private sink `s_i`. The spine edge is first in each out-list.
pub fn gen_hl(k: usize, l: usize) -> Result<Graph, GraphError> {
    if k < 1 || l < 1 {
        return Err(invalid(format!("H_l needs k, l >= 1, got k={k}, l={l}")));
    }
    let len = k * l;
    let mut b = GraphBuilder::new(&format!("H_{l}(k={k})"));
    let spine: Vec<VertexIx> = (1..=len + 1)
        .map(|i| b.vertex(&format!("x{i}"), Some(i as u32), &[("spine", i.to_string())]))
        .collect();
    for i in 1..=len {
        let s = b.vertex(&format!("s{i}"), Some(i as u32 + 1), &[]);
        b.edge(spine[i - 1], spine[i]);
        b.edge(spine[i - 1], s);
    }
    b.build()
}

/// Example graph for the spine-walking algorithm: spine `x1 .. x{kl+1}`,
/// `x_i` (`i < kl`) gets `k - 1` children `a{i}_{j}` each with two sink
/// children, and `x{kl}` gets `k - 1` sink children.
pub fn gen_alg_b_example(k: usize, l: usize) -> Result<Graph, GraphError> {
    if k < 2 || l < 1 {
        return Err(invalid(format!("algB example needs k >= 2, l >= 1, got k={k}, l={l}")));
    }
    let len = k * l;
    let mut b = GraphBuilder::new(&format!("AlgB_example(k={k},l={l})"));
    let spine: Vec<VertexIx> = (1..=len + 1)
        .map(|i| b.vertex(&format!("x{i}"), Some(i as u32), &[("spine", i.to_string())]))
        .collect();
    for i in 1..=len {
        b.edge(spine[i - 1], spine[i]);
        for j in 1..k {
            let a = b.vertex(&format!("a{i}_{j}"), Some(i as u32 + 1), &[]);
            b.edge(spine[i - 1], a);
            if i < len {
                for t in 1..=2 {
                    let leaf = b.vertex(&format!("a{i}_{j}_{t}"), Some(i as u32 + 2), &[]);
                    b.edge(a, leaf);
                }
            }
        }
    }
    b.build()
}

/// A path `p1 .. pn` with one extra sink child `q_i` at each `p_i` (`i < n`),
/// ending in a complete binary tree of `n` levels rooted at `p_n`.
pub fn gen_tree_remark(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(invalid(format!("tree_remark needs n >= 2, got {n}")));
    }
    let mut b = GraphBuilder::new(&format!("TreeRemark({n})"));
    let path: Vec<VertexIx> =
        (1..=n).map(|i| b.vertex(&format!("p{i}"), Some(i as u32), &[("spine", i.to_string())])).collect();
    for i in 1..n {
        let q = b.vertex(&format!("q{i}"), Some(i as u32 + 1), &[]);
        b.edge(path[i - 1], path[i]);
        b.edge(path[i - 1], q);
    }
    let mut prev = vec![path[n - 1]];
    for depth in 2..=n {
        let level = (n - 1 + depth) as u32;
        let mut cur = Vec::new();
        for &p in &prev {
            for _ in 0..2 {
                let v = b.vertex(&format!("b{}_{}", depth, cur.len() + 1), Some(level), &[]);
                b.edge(p, v);
                cur.push(v);
            }
        }
        prev = cur;
    }
    b.build()
}

/// `k`-ary tree of `l` levels whose nodes are copies of `H_1`. The last spine
/// vertex of a non-leaf copy points to the first spine vertex of each child
/// copy; per-vertex sink children stay sinks.
pub fn gen_tree_of_h(k: usize, l: usize) -> Result<Graph, GraphError> {
    if k < 2 || l < 1 {
        return Err(invalid(format!("tree_of_h needs k >= 2, l >= 1, got k={k}, l={l}")));
    }
    let mut b = GraphBuilder::new(&format!("TreeOfH(k={k},l={l})"));
    // (label, first spine vertex, last spine vertex, tree depth)
    let mut frontier: Vec<(String, VertexIx, VertexIx)> = Vec::new();
    let root = h1_copy(&mut b, "h", k, 0);
    frontier.push(("h".to_string(), root.0, root.1));
    for depth in 1..l {
        let mut next = Vec::new();
        for (label, _, last) in &frontier {
            for c in 0..k {
                let child_label = format!("{label}.{c}");
                let (first, child_last) = h1_copy(&mut b, &child_label, k, depth * (k + 1));
                b.edge(*last, first);
                next.push((child_label, first, child_last));
            }
        }
        frontier = next;
    }
    b.build()
}

fn h1_copy(b: &mut GraphBuilder, label: &str, k: usize, level_offset: usize) -> (VertexIx, VertexIx) {
    let spine: Vec<VertexIx> = (1..=k + 1)
        .map(|i| {
            b.vertex(
                &format!("{label}_x{i}"),
                Some((level_offset + i) as u32),
                &[("copy", label.to_string()), ("spine", i.to_string())],
            )
        })
        .collect();
    for i in 1..=k {
        let s = b.vertex(&format!("{label}_s{i}"), Some((level_offset + i + 1) as u32), &[("copy", label.to_string())]);
        b.edge(spine[i - 1], spine[i]);
        b.edge(spine[i - 1], s);
    }
    (spine[0], spine[k])
}

/// Seeded random single-source DAG on `n_vertices` vertices. Every non-sink
/// has out-degree within `[min_outdeg, max_outdeg]`.
pub fn random_dag(
    n_vertices: usize,
    max_outdeg: usize,
    min_outdeg: usize,
    multigraph: bool,
    seed: u64,
) -> Result<Graph, GraphError> {
    random_graph(n_vertices, max_outdeg, min_outdeg, multigraph, false, seed)
}

/// Seeded random single-source multigraph containing at least one directed
/// cycle (self-loops allowed). Every non-sink has out-degree within
/// `[min_outdeg, max_outdeg]`.
pub fn random_cyclic(n_vertices: usize, max_outdeg: usize, min_outdeg: usize, seed: u64) -> Result<Graph, GraphError> {
    if n_vertices < 2 {
        return Err(invalid("a cyclic single-source graph needs at least 2 vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let g = random_graph(n_vertices, max_outdeg, min_outdeg, true, true, rng.gen())?;
        if !g.is_acyclic() {
            return Ok(g);
        }
    }
    Err(invalid("could not produce a cyclic instance"))
}

fn random_graph(
    n: usize,
    max_outdeg: usize,
    min_outdeg: usize,
    multigraph: bool,
    cyclic: bool,
    seed: u64,
) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(invalid("random graph needs at least one vertex"));
    }
    if max_outdeg < 2 || min_outdeg > max_outdeg {
        return Err(invalid(format!("infeasible degree bounds [{min_outdeg}, {max_outdeg}]")));
    }
    let min_outdeg = min_outdeg.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = if cyclic { "cyclic" } else { "dag" };
    let name = format!("random_{kind}(n={n},deg={min_outdeg}..{max_outdeg},multi={multigraph},seed={seed})");
    let mut b = GraphBuilder::new(&name);
    b.multigraph(multigraph).allow_cycles(cyclic);
    let ids: Vec<VertexIx> = (0..n).map(|i| b.vertex(&format!("r{i}"), None, &[])).collect();
    if n == 1 {
        return b.build();
    }
    // Targets a vertex may point to: later vertices for a DAG, anything but the
    // source for cyclic graphs.
    let targets = |v: usize| -> Vec<usize> { if cyclic { (1..n).collect() } else { (v + 1..n).collect() } };
    let can_host = |v: usize| multigraph || targets(v).len() >= min_outdeg;

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for j in 1..n {
        let parents: Vec<usize> = (0..j).filter(|&p| adj[p].len() < max_outdeg && can_host(p)).collect();
        let &p = parents.choose(&mut rng).ok_or_else(|| {
            invalid(format!("infeasible degree constraints for n={n}, deg={min_outdeg}..{max_outdeg}"))
        })?;
        adj[p].push(j);
    }
    for v in 0..n {
        if adj[v].is_empty() {
            continue;
        }
        let lo = min_outdeg.max(adj[v].len());
        let want = rng.gen_range(lo..=max_outdeg);
        let pool = targets(v);
        while adj[v].len() < want {
            let free: Vec<usize> =
                if multigraph { pool.clone() } else { pool.iter().copied().filter(|t| !adj[v].contains(t)).collect() };
            match free.choose(&mut rng) {
                Some(&t) => adj[v].push(t),
                None => break,
            }
        }
        if adj[v].len() < min_outdeg {
            return Err(invalid(format!("vertex r{v} cannot reach out-degree {min_outdeg}")));
        }
        adj[v].shuffle(&mut rng);
    }
    for v in 0..n {
        for &t in &adj[v] {
            b.edge(ids[v], ids[t]);
        }
    }
    b.build()
}
