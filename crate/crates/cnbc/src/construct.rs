//! Constructions that produce a graph together with a certified balanced
//! coloring: complete graphs, Hamming graphs (two independent routes), the
//! class-skewing vertex addition, and the universal supergraph embedding.
//!
//! Every [`ColoredGraph`] built here re-runs the verifier before it is
//! returned; a construction that does not certify is a bug, not a value.

use serde::{Deserialize, Serialize};

use crate::coloring::{verify_cnbc, Coloring, ColoringError, Violation};
use crate::graph::{
    build_product, complete_graph, hamming_graph, Graph, GraphError, ProductKind,
};

#[derive(Debug, thiserror::Error)]
pub enum ConstructError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("K_{n} has a balanced {k}-coloring only when {k} divides {n}")]
    IndivisibleOrder { n: usize, k: usize },
    #[error("H(d,k) has a balanced k-coloring only when d ≡ 1 (mod k); got d = {d}, k = {k}")]
    DimensionNotCongruent { d: usize, k: usize },
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("input coloring does not balance the host graph (vertex {0})")]
    HostNotBalanced(usize),
    #[error("construction `{provenance}` failed verification at vertex {} — this is a bug", violation.vertex)]
    VerificationFailed {
        provenance: String,
        violation: Violation,
    },
}

/// A graph bundled with a coloring that the verifier has certified, plus the
/// name and parameters of the construction that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredGraph {
    pub graph: Graph,
    pub coloring: Coloring,
    pub provenance: String,
}

impl ColoredGraph {
    /// Certifies `coloring` against `graph` and bundles them. The closed
    /// neighborhoods must balance; otherwise this returns
    /// [`ConstructError::VerificationFailed`].
    pub fn certify(
        graph: Graph,
        coloring: Coloring,
        provenance: impl Into<String>,
    ) -> Result<ColoredGraph, ConstructError> {
        let provenance = provenance.into();
        match verify_cnbc(&graph, &coloring)? {
            crate::coloring::BalanceVerdict::Balanced => Ok(ColoredGraph {
                graph,
                coloring,
                provenance,
            }),
            crate::coloring::BalanceVerdict::Unbalanced(violation) => {
                Err(ConstructError::VerificationFailed {
                    provenance,
                    violation,
                })
            }
        }
    }

    pub fn k(&self) -> usize {
        self.coloring.k()
    }
}

/// `K_n` with the round-robin `k`-coloring. Valid exactly when `k | n`.
pub fn color_complete(n: usize, k: usize) -> Result<ColoredGraph, ConstructError> {
    if k < 2 {
        return Err(ColoringError::TooFewColors(k).into());
    }
    if n % k != 0 {
        return Err(ConstructError::IndivisibleOrder { n, k });
    }
    let graph = complete_graph(n)?;
    let coloring = Coloring::new(k, (0..n).map(|v| v % k + 1).collect())?;
    ColoredGraph::certify(graph, coloring, format!("complete(n={n}, k={k})"))
}

fn require_dimension(d: usize, k: usize) -> Result<(), ConstructError> {
    if k < 2 {
        return Err(ColoringError::TooFewColors(k).into());
    }
    if d < 1 || d % k != 1 % k {
        return Err(ConstructError::DimensionNotCongruent { d, k });
    }
    Ok(())
}

/// Colors `H(d, k)` by the recursive cyclic-shift scheme, for `d ≡ 1 (mod k)`.
///
/// The coloring of the length-`m` suffix blocks is grown `k` coordinates at
/// a time. One round prepends `k - 1` coordinates whose sub-blocks take
/// successive cyclic shifts of the previous scheme (the block with digit `a`
/// is shifted by `a`), then one coordinate whose sub-blocks all repeat the
/// finished scheme unchanged. Starting from a rainbow on the last
/// coordinate, `(d - 1) / k` rounds color the whole vertex set.
pub fn color_hamming(d: usize, k: usize) -> Result<ColoredGraph, ConstructError> {
    require_dimension(d, k)?;
    let graph = hamming_graph(d, k)?;

    // colors of the suffix blocks, indexed by the suffix value
    let mut scheme: Vec<usize> = (1..=k).collect();
    let mut len = 1;
    while len < d {
        for level in 0..k {
            let copy_level = level == k - 1;
            let mut next = Vec::with_capacity(scheme.len() * k);
            for digit in 0..k {
                let shift = if copy_level { 0 } else { digit };
                next.extend(scheme.iter().map(|&c| (c - 1 + shift) % k + 1));
            }
            scheme = next;
            len += 1;
        }
    }
    let coloring = Coloring::new(k, scheme)?;
    ColoredGraph::certify(graph, coloring, format!("hamming(d={d}, k={k})"))
}

/// Independent closed-form coloring of `H(d, k)` for `d = kn + 1`: with
/// tuple entries in `{0..k-1}`, color by the sum of the last `n(k-1) + 1`
/// coordinates, modulo `k`, plus one.
///
/// Why this balances: flipping a summed coordinate to each of its `k - 1`
/// other values changes the sum by every nonzero residue exactly once, so
/// each summed coordinate contributes one neighbor of every non-own color.
/// Flipping any of the `n` unsummed coordinates never changes the sum, so
/// those contribute `k - 1` own-color neighbors each. Every closed
/// neighborhood therefore holds `n(k-1) + 1` vertices of each color.
pub fn color_hamming_closed_form(d: usize, k: usize) -> Result<ColoredGraph, ConstructError> {
    require_dimension(d, k)?;
    let graph = hamming_graph(d, k)?;
    let rounds = (d - 1) / k;
    let summed_from = d - (rounds * (k - 1) + 1);
    let colors: Vec<usize> = graph
        .vertices()
        .map(|v| {
            let tuple = graph.label(v).expect("hamming graphs carry tuple labels");
            tuple[summed_from..].iter().sum::<usize>() % k + 1
        })
        .collect();
    let coloring = Coloring::new(k, colors)?;
    ColoredGraph::certify(
        graph,
        coloring,
        format!("hamming_closed_form(d={d}, k={k})"),
    )
}

/// Attaches the class-skewing gadget at vertex `z` of a certified host.
///
/// The gadget adds `3k - 2` vertices: `u_1..u_k` all adjacent to `z` with
/// `u_1..u_{k-1}` forming a clique, and two further (k-1)-cliques hanging
/// off `u_k`. Gadget colors follow the defining pattern after a cyclic
/// relabeling that sends color `k` to z's actual color, so the host coloring
/// is never touched. The result gains one vertex of z's color and three of
/// every other color.
pub fn vertex_addition_3km2(host: &ColoredGraph, z: usize) -> Result<ColoredGraph, ConstructError> {
    let g = &host.graph;
    let k = host.k();
    if z >= g.order() {
        return Err(ConstructError::VertexOutOfRange {
            vertex: z,
            order: g.order(),
        });
    }
    let z_color = host.coloring.color(z);
    // pattern color i → ((i - 1 + z_color) mod k) + 1 maps k to z_color
    let relabel = |i: usize| (i - 1 + z_color) % k + 1;

    let n = g.order();
    let u = |i: usize| n + i - 1; // u_1..u_k
    let v_a = |i: usize| n + k + i - 1; // v_1..v_{k-1}
    let v_b = |i: usize| n + k + (k - 1) + i - 1; // v'_1..v'_{k-1}

    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for i in 1..=k {
        edges.push((z, u(i)));
    }
    for i in 1..=k.saturating_sub(1) {
        for j in i + 1..=k - 1 {
            edges.push((u(i), u(j)));
        }
    }
    for i in 1..=k - 1 {
        edges.push((u(k), v_a(i)));
        edges.push((u(k), v_b(i)));
        for j in i + 1..=k - 1 {
            edges.push((v_a(i), v_a(j)));
            edges.push((v_b(i), v_b(j)));
        }
    }
    let graph = Graph::from_edges(n + 3 * k - 2, edges)?;

    let mut colors = host.coloring.colors().to_vec();
    colors.extend((1..=k).map(relabel)); // u_i takes pattern color i
    for _ in 0..2 {
        colors.extend((1..=k - 1).map(relabel)); // both hanging cliques
    }
    let coloring = Coloring::new(k, colors)?;
    ColoredGraph::certify(
        graph,
        coloring,
        format!("vertex_addition(host={}, z={z})", host.provenance),
    )
}

/// The standard order-(4k-2) example: the class-skewing addition applied to
/// a rainbow `K_k` at its color-`k` vertex.
pub fn build_hk(k: usize) -> Result<ColoredGraph, ConstructError> {
    let base = color_complete(k, k)?;
    let mut out = vertex_addition_3km2(&base, k - 1)?;
    out.provenance = format!("hk(k={k})");
    Ok(out)
}

/// A certified host graph containing `G` as an induced subgraph, plus the
/// embedding map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupergraphEmbedding {
    pub colored: ColoredGraph,
    /// `embedding[v]` is the host id of original vertex `v`; the induced
    /// subgraph on these ids, in this order, is exactly `G`.
    pub embedding: Vec<usize>,
}

/// Embeds any graph into a balanced-colorable host on `k|V|` vertices.
///
/// Builds `k` layers of `G`. Edges: each layer carries a copy of `G`, every
/// pair of layers carries all cross edges over `E(G)`, and the `k` copies of
/// each vertex form a clique. Layer `j` is colored `j` throughout. The edge
/// set coincides with the lexicographic product of `G` with a `k`-clique;
/// the crate's tests hold the two routes equal.
pub fn supergraph_embed(g: &Graph, k: usize) -> Result<SupergraphEmbedding, ConstructError> {
    if k < 2 {
        return Err(ColoringError::TooFewColors(k).into());
    }
    let n = g.order();
    let id = |v: usize, layer: usize| v * k + layer;
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        for p in 0..k {
            edges.push((id(u, p), id(v, p))); // within-layer copy of G
            for q in 0..k {
                if p != q {
                    edges.push((id(u, p), id(v, q))); // cross-layer over E(G)
                }
            }
        }
    }
    for v in g.vertices() {
        for p in 0..k {
            for q in p + 1..k {
                edges.push((id(v, p), id(v, q))); // column clique
            }
        }
    }
    let graph = Graph::from_edges(n * k, edges)?;
    let coloring = Coloring::new(k, (0..n * k).map(|w| w % k + 1).collect())?;
    let colored = ColoredGraph::certify(
        graph,
        coloring,
        format!("supergraph_embed(order={n}, k={k})"),
    )?;
    Ok(SupergraphEmbedding {
        colored,
        embedding: (0..n).map(|v| id(v, 0)).collect(),
    })
}

/// One host layer as a graph operation: `G` composed lexicographically with
/// a `k`-clique. Used to cross-check [`supergraph_embed`].
pub fn lexicographic_with_clique(g: &Graph, k: usize) -> Result<Graph, ConstructError> {
    Ok(build_product(
        ProductKind::Lexicographic,
        g,
        &complete_graph(k)?,
    )?)
}
