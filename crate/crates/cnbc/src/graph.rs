//! Simple undirected graphs: the core type, generators, and binary operations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Default cap on the order of any constructed graph.
pub const DEFAULT_VERTEX_BUDGET: usize = 1_000_000;

/// Maximum graph order permitted for generators and products.
///
/// Reads `CNBC_VERTEX_BUDGET` from the environment, falling back to
/// [`DEFAULT_VERTEX_BUDGET`]. Guards against accidental blow-ups such as
/// lexicographic towers.
pub fn vertex_budget() -> usize {
    std::env::var("CNBC_VERTEX_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_VERTEX_BUDGET)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("construction needs order at least {needed}, got {got}")]
    OrderTooSmall { needed: usize, got: usize },
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("dimension must be at least 1")]
    DimensionTooSmall,
    #[error("vertex budget exceeded: requested {requested}, budget {budget}")]
    BudgetExceeded { requested: u128, budget: usize },
}

/// An immutable simple undirected graph with vertex ids `0..order`.
///
/// Adjacency lists are sorted and deduplicated; loops are rejected at
/// construction. Vertices may carry an optional integer-tuple label, used by
/// the Hamming and product constructions to remember structured identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    size: usize,
    labels: Option<Vec<Vec<usize>>>,
}

impl Graph {
    /// The empty graph on `order` vertices.
    pub fn empty(order: usize) -> Graph {
        Graph {
            adjacency: vec![Vec::new(); order],
            size: 0,
            labels: None,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse (set
    /// semantics); loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(order: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); order];
        let mut size = 0;
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            for w in [u, v] {
                if w >= order {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order });
                }
            }
            if sets[u].insert(v) {
                sets[v].insert(u);
                size += 1;
            }
        }
        Ok(Graph {
            adjacency: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            size,
            labels: None,
        })
    }

    /// Attaches one integer-tuple label per vertex.
    pub fn with_labels(mut self, labels: Vec<Vec<usize>>) -> Graph {
        assert_eq!(labels.len(), self.order(), "one label per vertex");
        self.labels = Some(labels);
        self
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Sorted open neighborhood of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Iterates edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Label of `v`, if the graph carries labels.
    pub fn label(&self, v: usize) -> Option<&[usize]> {
        self.labels.as_ref().map(|l| l[v].as_slice())
    }

    /// `Some(r)` when every vertex has degree `r`.
    pub fn is_regular(&self) -> Option<usize> {
        let r = self.degree(0.min(self.order().saturating_sub(1)));
        if self.order() == 0 {
            return Some(0);
        }
        self.vertices().all(|v| self.degree(v) == r).then_some(r)
    }

    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// The complement graph: `uv` is an edge iff `u != v` and `uv` is not an
    /// edge here. Labels are dropped.
    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            for v in 0..n {
                if u != v && !self.has_edge(u, v) {
                    adjacency[u].push(v);
                }
            }
        }
        let size = adjacency.iter().map(|a| a.len()).sum::<usize>() / 2;
        Graph {
            adjacency,
            size,
            labels: None,
        }
    }

    /// Induced subgraph on `vs`, relabeling `vs[i]` to `i`.
    pub fn induced(&self, vs: &[usize]) -> Result<Graph, GraphError> {
        let order = self.order();
        let mut position = vec![usize::MAX; order];
        for (i, &v) in vs.iter().enumerate() {
            if v >= order {
                return Err(GraphError::VertexOutOfRange { vertex: v, order });
            }
            position[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vs.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = position[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vs.len(), edges)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// True when both graphs have the same order and identical adjacency,
    /// ignoring labels.
    pub fn same_adjacency(&self, other: &Graph) -> bool {
        self.adjacency == other.adjacency
    }
}

fn check_budget(requested: u128) -> Result<usize, GraphError> {
    let budget = vertex_budget();
    if requested > budget as u128 {
        return Err(GraphError::BudgetExceeded { requested, budget });
    }
    Ok(requested as usize)
}

/// The complete graph `K_n`.
pub fn complete_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::OrderTooSmall { needed: 1, got: n });
    }
    check_budget(n as u128)?;
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges)
}

/// The cycle `C_n`, `n >= 3`.
pub fn cycle_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::OrderTooSmall { needed: 3, got: n });
    }
    check_budget(n as u128)?;
    Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
}

/// The path `P_n`, `n >= 1`.
pub fn path_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::OrderTooSmall { needed: 1, got: n });
    }
    check_budget(n as u128)?;
    Graph::from_edges(n, (1..n).map(|u| (u - 1, u)))
}

/// The complete bipartite graph `K_{a,b}` with the left part first.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    check_budget(a as u128 + b as u128)?;
    let edges = (0..a).flat_map(move |u| (0..b).map(move |v| (u, a + v)));
    Graph::from_edges(a + b, edges)
}

/// The Hamming graph `H(d, k)`: vertices are the `d`-tuples over `{0..k-1}`,
/// adjacent iff they differ in exactly one coordinate. The tuple of each
/// vertex is retained as its label; ids enumerate tuples with the first
/// coordinate most significant. The result is `d(k-1)`-regular.
pub fn hamming_graph(d: usize, k: usize) -> Result<Graph, GraphError> {
    if d < 1 {
        return Err(GraphError::DimensionTooSmall);
    }
    if k < 2 {
        return Err(GraphError::AlphabetTooSmall(k));
    }
    let order = check_budget(
        (k as u128)
            .checked_pow(d as u32)
            .ok_or(GraphError::BudgetExceeded {
                requested: u128::MAX,
                budget: vertex_budget(),
            })?,
    )?;
    let mut labels = vec![vec![0usize; d]];
    labels.reserve(order);
    for id in 1..order {
        let mut tuple = vec![0usize; d];
        let mut rest = id;
        for i in (0..d).rev() {
            tuple[i] = rest % k;
            rest /= k;
        }
        labels.push(tuple);
    }
    // Weight of coordinate i in the id encoding.
    let mut weight = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        weight[i] = weight[i + 1] * k;
    }
    let mut edges = Vec::new();
    for id in 0..order {
        for i in 0..d {
            let digit = labels[id][i];
            for other in digit + 1..k {
                edges.push((id, id + (other - digit) * weight[i]));
            }
        }
    }
    Ok(Graph::from_edges(order, edges)?.with_labels(labels))
}

/// Bijection between pairs `(g, h)` over `0..left_size × 0..right_size` and
/// flat ids `g * right_size + h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexPairIndex {
    left_size: usize,
    right_size: usize,
}

impl VertexPairIndex {
    pub fn new(left_size: usize, right_size: usize) -> VertexPairIndex {
        VertexPairIndex {
            left_size,
            right_size,
        }
    }

    pub fn len(&self) -> usize {
        self.left_size * self.right_size
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flatten(&self, g: usize, h: usize) -> usize {
        debug_assert!(g < self.left_size && h < self.right_size);
        g * self.right_size + h
    }

    pub fn unflatten(&self, id: usize) -> (usize, usize) {
        debug_assert!(id < self.len());
        (id / self.right_size, id % self.right_size)
    }
}

/// The binary graph operations this crate builds colorings on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Cartesian,
    Strong,
    Direct,
    Lexicographic,
    Join,
    DisjointUnion,
}

impl ProductKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProductKind::Cartesian => "cartesian",
            ProductKind::Strong => "strong",
            ProductKind::Direct => "direct",
            ProductKind::Lexicographic => "lexicographic",
            ProductKind::Join => "join",
            ProductKind::DisjointUnion => "disjoint_union",
        }
    }
}

impl std::str::FromStr for ProductKind {
    type Err = String;

    fn from_str(s: &str) -> Result<ProductKind, String> {
        match s {
            "cartesian" => Ok(ProductKind::Cartesian),
            "strong" => Ok(ProductKind::Strong),
            "direct" => Ok(ProductKind::Direct),
            "lexicographic" => Ok(ProductKind::Lexicographic),
            "join" => Ok(ProductKind::Join),
            "disjoint_union" => Ok(ProductKind::DisjointUnion),
            other => Err(format!("unknown product kind `{other}`")),
        }
    }
}

/// Builds the named binary operation of `g` and `h`.
///
/// The four vertex-pair products flatten `(g, h)` row-major (left index
/// major) and record the pair as the label of each product vertex. Join and
/// disjoint union place the left graph first and offset the right ids;
/// labels are dropped for those two.
pub fn build_product(kind: ProductKind, g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    match kind {
        ProductKind::Join | ProductKind::DisjointUnion => {
            let n = check_budget(g.order() as u128 + h.order() as u128)?;
            let off = g.order();
            let mut edges: Vec<(usize, usize)> = g.edges().collect();
            edges.extend(h.edges().map(|(u, v)| (u + off, v + off)));
            if kind == ProductKind::Join {
                edges.extend((0..off).flat_map(|u| (off..n).map(move |v| (u, v))));
            }
            Graph::from_edges(n, edges)
        }
        _ => {
            let index = VertexPairIndex::new(g.order(), h.order());
            let n = check_budget(g.order() as u128 * h.order() as u128)?;
            let mut edges = Vec::new();
            let pair_edges = |edges: &mut Vec<(usize, usize)>, cartesian: bool, direct: bool| {
                if cartesian {
                    for gv in g.vertices() {
                        for (hu, hv) in h.edges() {
                            edges.push((index.flatten(gv, hu), index.flatten(gv, hv)));
                        }
                    }
                    for hv in h.vertices() {
                        for (gu, gv) in g.edges() {
                            edges.push((index.flatten(gu, hv), index.flatten(gv, hv)));
                        }
                    }
                }
                if direct {
                    for (gu, gv) in g.edges() {
                        for (hu, hv) in h.edges() {
                            edges.push((index.flatten(gu, hu), index.flatten(gv, hv)));
                            edges.push((index.flatten(gu, hv), index.flatten(gv, hu)));
                        }
                    }
                }
            };
            match kind {
                ProductKind::Cartesian => pair_edges(&mut edges, true, false),
                ProductKind::Direct => pair_edges(&mut edges, false, true),
                ProductKind::Strong => pair_edges(&mut edges, true, true),
                ProductKind::Lexicographic => {
                    for (gu, gv) in g.edges() {
                        for hu in h.vertices() {
                            for hv in h.vertices() {
                                edges.push((index.flatten(gu, hu), index.flatten(gv, hv)));
                            }
                        }
                    }
                    for gv in g.vertices() {
                        for (hu, hv) in h.edges() {
                            edges.push((index.flatten(gv, hu), index.flatten(gv, hv)));
                        }
                    }
                }
                _ => unreachable!(),
            }
            let labels = (0..n).map(|id| {
                let (a, b) = index.unflatten(id);
                vec![a, b]
            });
            Ok(Graph::from_edges(n, edges)?.with_labels(labels.collect()))
        }
    }
}
