//! Coloring-transfer operators: given colorings satisfying each operator's
//! hypotheses, build the guaranteed coloring of the derived graph.
//!
//! Every operator machine-checks its hypotheses, then re-verifies its output
//! instead of trusting the construction — a mechanized check of the
//! underlying statement at whatever scale it is invoked.

use serde::{Deserialize, Serialize};

use crate::coloring::{verify_cnbc, verify_nbc, BalanceVerdict, Coloring, ColoringError};
use crate::construct::{ColoredGraph, ConstructError};
use crate::graph::{build_product, complete_graph, Graph, GraphError, ProductKind, VertexPairIndex};

#[derive(Debug, thiserror::Error)]
pub enum TransferError {
    #[error("input coloring does not balance closed neighborhoods (vertex {0})")]
    NotCnbc(usize),
    #[error("input coloring does not balance open neighborhoods (vertex {0})")]
    NotNbc(usize),
    #[error("hypothesis requires equal class sizes, got {0:?}")]
    NotEquitable(Vec<usize>),
    #[error("color counts differ: {left} vs {right}")]
    ColorCountMismatch { left: usize, right: usize },
    #[error("{p} does not divide {k} (or is below 2)")]
    NotADivisor { p: usize, k: usize },
    #[error("the degree obstruction only applies for k >= 3 (k = 2 admits counterexamples)")]
    ObstructionNeedsKAtLeast3,
    #[error("vertex {vertex} of {side} has degree {degree}, need ≡ -1 (mod {k})")]
    DegreeHypothesis {
        side: &'static str,
        vertex: usize,
        degree: usize,
        k: usize,
    },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

fn require_cnbc(g: &Graph, c: &Coloring) -> Result<(), TransferError> {
    match verify_cnbc(g, c)? {
        BalanceVerdict::Balanced => Ok(()),
        BalanceVerdict::Unbalanced(v) => Err(TransferError::NotCnbc(v.vertex)),
    }
}

fn require_nbc(g: &Graph, c: &Coloring) -> Result<(), TransferError> {
    match verify_nbc(g, c)? {
        BalanceVerdict::Balanced => Ok(()),
        BalanceVerdict::Unbalanced(v) => Err(TransferError::NotNbc(v.vertex)),
    }
}

fn require_equitable(c: &Coloring) -> Result<(), TransferError> {
    if c.is_equitable() {
        Ok(())
    } else {
        Err(TransferError::NotEquitable(c.class_sizes()))
    }
}

fn require_same_k(a: &Coloring, b: &Coloring) -> Result<(), TransferError> {
    if a.k() == b.k() {
        Ok(())
    } else {
        Err(TransferError::ColorCountMismatch {
            left: a.k(),
            right: b.k(),
        })
    }
}

/// Merges a balanced `k`-coloring down to `p` colors for any divisor
/// `p | k`, `p >= 2`: color `i` becomes `((i - 1) mod p) + 1`. Each new
/// color absorbs exactly `k / p` old ones, so balance survives.
pub fn reduce_colors(g: &Graph, c: &Coloring, p: usize) -> Result<Coloring, TransferError> {
    if p < 2 || c.k() % p != 0 {
        return Err(TransferError::NotADivisor { p, k: c.k() });
    }
    require_cnbc(g, c)?;
    let reduced = Coloring::new(p, c.colors().iter().map(|&i| (i - 1) % p + 1).collect())?;
    require_cnbc(g, &reduced)?;
    Ok(reduced)
}

/// Both sides of the open/closed duality, evaluated on the same equitable
/// coloring: the verdicts always agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementDuality {
    pub complement: Graph,
    pub nbc_on_original: BalanceVerdict,
    pub cnbc_on_complement: BalanceVerdict,
}

impl ComplementDuality {
    /// True when the two verifier runs returned the same verdict.
    pub fn holds(&self) -> bool {
        self.nbc_on_original.is_balanced() == self.cnbc_on_complement.is_balanced()
    }

    /// The shared verdict.
    pub fn balanced(&self) -> bool {
        self.nbc_on_original.is_balanced()
    }
}

/// Runs both verifiers of the duality: an equitable coloring balances open
/// neighborhoods of `G` iff it balances closed neighborhoods of the
/// complement. Requires equal class sizes — the duality genuinely fails
/// without them.
pub fn complement_transfer(g: &Graph, c: &Coloring) -> Result<ComplementDuality, TransferError> {
    require_equitable(c)?;
    let complement = g.complement();
    let nbc_on_original = verify_nbc(g, c)?;
    let cnbc_on_complement = verify_cnbc(&complement, c)?;
    Ok(ComplementDuality {
        complement,
        nbc_on_original,
        cnbc_on_complement,
    })
}

/// Colors the strong product of a certified graph with an arbitrary graph by
/// copying the base coloring onto every fiber.
pub fn strong_product_transfer(
    base: &ColoredGraph,
    other: &Graph,
) -> Result<ColoredGraph, TransferError> {
    require_cnbc(&base.graph, &base.coloring)?;
    let product = build_product(ProductKind::Strong, &base.graph, other)?;
    let idx = VertexPairIndex::new(base.graph.order(), other.order());
    let colors = (0..product.order())
        .map(|id| base.coloring.color(idx.unflatten(id).0))
        .collect();
    let coloring = Coloring::new(base.k(), colors)?;
    Ok(ColoredGraph::certify(
        product,
        coloring,
        format!("strong_product({})", base.provenance),
    )?)
}

/// A graph and a coloring certified against open neighborhoods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NbcColored {
    pub graph: Graph,
    pub coloring: Coloring,
}

/// Crosses a certified graph with an edge (prism construction) and projects
/// the coloring; the result balances open neighborhoods. The extra neighbor
/// of each vertex is its same-colored copy, which the closed-to-open shift
/// absorbs exactly.
pub fn cartesian_k2_transfer(base: &ColoredGraph) -> Result<NbcColored, TransferError> {
    require_cnbc(&base.graph, &base.coloring)?;
    let k2 = complete_graph(2)?;
    let graph = build_product(ProductKind::Cartesian, &base.graph, &k2)?;
    let idx = VertexPairIndex::new(base.graph.order(), 2);
    let colors = (0..graph.order())
        .map(|id| base.coloring.color(idx.unflatten(id).0))
        .collect();
    let coloring = Coloring::new(base.k(), colors)?;
    require_nbc(&graph, &coloring)?;
    Ok(NbcColored { graph, coloring })
}

/// Colors the box product of a closed-balanced graph with an open-balanced
/// graph by the cyclic color sum `((c_G(g) + c_H(h) - 1) mod k) + 1`.
pub fn cartesian_mixed_transfer(
    base: &ColoredGraph,
    other: &Graph,
    other_coloring: &Coloring,
) -> Result<ColoredGraph, TransferError> {
    require_same_k(&base.coloring, other_coloring)?;
    require_cnbc(&base.graph, &base.coloring)?;
    require_nbc(other, other_coloring)?;
    let k = base.k();
    let product = build_product(ProductKind::Cartesian, &base.graph, other)?;
    let idx = VertexPairIndex::new(base.graph.order(), other.order());
    let colors = (0..product.order())
        .map(|id| {
            let (g, h) = idx.unflatten(id);
            (base.coloring.color(g) + other_coloring.color(h) - 1) % k + 1
        })
        .collect();
    let coloring = Coloring::new(k, colors)?;
    Ok(ColoredGraph::certify(
        product,
        coloring,
        format!("cartesian_mixed({})", base.provenance),
    )?)
}

/// Substitutes a certified, equitable graph into every vertex of `left`
/// (lexicographic composition), coloring each copy identically. Equitability
/// is necessary: with skewed classes the composed degrees already have the
/// wrong residue.
pub fn lexicographic_transfer(
    left: &Graph,
    base: &ColoredGraph,
) -> Result<ColoredGraph, TransferError> {
    require_cnbc(&base.graph, &base.coloring)?;
    require_equitable(&base.coloring)?;
    let product = build_product(ProductKind::Lexicographic, left, &base.graph)?;
    let idx = VertexPairIndex::new(left.order(), base.graph.order());
    let colors = (0..product.order())
        .map(|id| base.coloring.color(idx.unflatten(id).1))
        .collect();
    let coloring = Coloring::new(base.k(), colors)?;
    Ok(ColoredGraph::certify(
        product,
        coloring,
        format!("lexicographic(order={}, {})", left.order(), base.provenance),
    )?)
}

/// Joins two certified graphs with equitable classes and the same color
/// count, keeping both colorings side by side. Equitability is necessary:
/// the join adds a full copy of the other side to every closed neighborhood.
pub fn join_transfer(
    left: &ColoredGraph,
    right: &ColoredGraph,
) -> Result<ColoredGraph, TransferError> {
    require_same_k(&left.coloring, &right.coloring)?;
    require_cnbc(&left.graph, &left.coloring)?;
    require_cnbc(&right.graph, &right.coloring)?;
    require_equitable(&left.coloring)?;
    require_equitable(&right.coloring)?;
    let graph = build_product(ProductKind::Join, &left.graph, &right.graph)?;
    let mut colors = left.coloring.colors().to_vec();
    colors.extend_from_slice(right.coloring.colors());
    let coloring = Coloring::new(left.k(), colors)?;
    Ok(ColoredGraph::certify(
        graph,
        coloring,
        format!("join({}, {})", left.provenance, right.provenance),
    )?)
}

/// Colors the bipartite double cover (direct product with an edge) by
/// projection. Each vertex of the cover sees exactly the closed neighborhood
/// colors of its base vertex.
pub fn direct_k2_transfer(base: &ColoredGraph) -> Result<ColoredGraph, TransferError> {
    require_cnbc(&base.graph, &base.coloring)?;
    let k2 = complete_graph(2)?;
    let product = build_product(ProductKind::Direct, &base.graph, &k2)?;
    let idx = VertexPairIndex::new(base.graph.order(), 2);
    let colors = (0..product.order())
        .map(|id| base.coloring.color(idx.unflatten(id).0))
        .collect();
    let coloring = Coloring::new(base.k(), colors)?;
    Ok(ColoredGraph::certify(
        product,
        coloring,
        format!("direct_k2({})", base.provenance),
    )?)
}

/// Proof record that a direct product of two degree-eligible graphs cannot
/// balance for `k >= 3`: every product degree lands on the residue `1`,
/// while balance demands `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectProductObstruction {
    pub k: usize,
    pub product_order: usize,
    /// Residue mod `k` shared by every degree of the product (always 1).
    pub product_degree_residue: usize,
    /// Residue mod `k` a balanced coloring would require (always `k - 1`).
    pub required_residue: usize,
}

/// Certifies that `G × H` has no balanced `k`-coloring when every degree of
/// both factors is `≡ -1 (mod k)` and `k >= 3`. For `k = 2` the residues
/// coincide and the argument collapses (a pair of edges is the standard
/// counterexample), so that case is rejected.
pub fn direct_product_obstruction(
    g: &Graph,
    h: &Graph,
    k: usize,
) -> Result<DirectProductObstruction, TransferError> {
    if k < 3 {
        return Err(TransferError::ObstructionNeedsKAtLeast3);
    }
    for (side, graph) in [("left factor", g), ("right factor", h)] {
        for vertex in graph.vertices() {
            let degree = graph.degree(vertex);
            if (degree + 1) % k != 0 {
                return Err(TransferError::DegreeHypothesis {
                    side,
                    vertex,
                    degree,
                    k,
                });
            }
        }
    }
    let product = build_product(ProductKind::Direct, g, h)?;
    for v in product.vertices() {
        debug_assert_eq!(product.degree(v) % k, 1 % k);
    }
    Ok(DirectProductObstruction {
        k,
        product_order: product.order(),
        product_degree_residue: 1,
        required_residue: k - 1,
    })
}

/// One transfer invocation with its inputs, ready to dispatch. The CLI and
/// scripted experiments build these from files.
#[derive(Debug, Clone)]
pub enum TransferRequest {
    ReduceColors {
        graph: Graph,
        coloring: Coloring,
        target_colors: usize,
    },
    Complement {
        graph: Graph,
        coloring: Coloring,
    },
    StrongProduct {
        base: ColoredGraph,
        other: Graph,
    },
    CartesianK2 {
        base: ColoredGraph,
    },
    CartesianMixed {
        base: ColoredGraph,
        other: Graph,
        other_coloring: Coloring,
    },
    Lexicographic {
        left: Graph,
        base: ColoredGraph,
    },
    Join {
        left: ColoredGraph,
        right: ColoredGraph,
    },
    DirectK2 {
        base: ColoredGraph,
    },
    DirectObstruction {
        left: Graph,
        right: Graph,
        k: usize,
    },
}

/// What a transfer produced.
#[derive(Debug, Clone)]
pub enum TransferOutcome {
    Cnbc(ColoredGraph),
    Nbc(NbcColored),
    Duality(ComplementDuality),
    Reduced { graph: Graph, coloring: Coloring },
    Obstruction(DirectProductObstruction),
}

impl TransferRequest {
    pub fn apply(self) -> Result<TransferOutcome, TransferError> {
        match self {
            TransferRequest::ReduceColors {
                graph,
                coloring,
                target_colors,
            } => {
                let reduced = reduce_colors(&graph, &coloring, target_colors)?;
                Ok(TransferOutcome::Reduced {
                    graph,
                    coloring: reduced,
                })
            }
            TransferRequest::Complement { graph, coloring } => Ok(TransferOutcome::Duality(
                complement_transfer(&graph, &coloring)?,
            )),
            TransferRequest::StrongProduct { base, other } => Ok(TransferOutcome::Cnbc(
                strong_product_transfer(&base, &other)?,
            )),
            TransferRequest::CartesianK2 { base } => {
                Ok(TransferOutcome::Nbc(cartesian_k2_transfer(&base)?))
            }
            TransferRequest::CartesianMixed {
                base,
                other,
                other_coloring,
            } => Ok(TransferOutcome::Cnbc(cartesian_mixed_transfer(
                &base,
                &other,
                &other_coloring,
            )?)),
            TransferRequest::Lexicographic { left, base } => {
                Ok(TransferOutcome::Cnbc(lexicographic_transfer(&left, &base)?))
            }
            TransferRequest::Join { left, right } => {
                Ok(TransferOutcome::Cnbc(join_transfer(&left, &right)?))
            }
            TransferRequest::DirectK2 { base } => {
                Ok(TransferOutcome::Cnbc(direct_k2_transfer(&base)?))
            }
            TransferRequest::DirectObstruction { left, right, k } => Ok(
                TransferOutcome::Obstruction(direct_product_obstruction(&left, &right, k)?),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_hk, color_complete, color_hamming, supergraph_embed};
    use crate::diagnostics::check_degree_cnbc;
    use crate::graph::{cycle_graph, path_graph};

    fn coloring(k: usize, colors: &[usize]) -> Coloring {
        Coloring::new(k, colors.to_vec()).unwrap()
    }

    #[test]
    fn reduce_colors_examples() {
        let k4 = color_complete(4, 4).unwrap();
        let reduced = reduce_colors(&k4.graph, &k4.coloring, 2).unwrap();
        assert_eq!(reduced.colors(), &[1, 2, 1, 2]);

        let k12 = color_complete(12, 6).unwrap();
        for p in [2, 3] {
            let r = reduce_colors(&k12.graph, &k12.coloring, p).unwrap();
            assert_eq!(r.k(), p);
        }

        assert!(matches!(
            reduce_colors(&k4.graph, &k4.coloring, 3),
            Err(TransferError::NotADivisor { p: 3, k: 4 })
        ));
    }

    #[test]
    fn reduce_colors_composes() {
        let k12 = color_complete(12, 12).unwrap();
        for (p, q) in [(6, 3), (6, 2), (4, 2)] {
            let two_step = reduce_colors(
                &k12.graph,
                &reduce_colors(&k12.graph, &k12.coloring, p).unwrap(),
                q,
            )
            .unwrap();
            let one_step = reduce_colors(&k12.graph, &k12.coloring, q).unwrap();
            assert_eq!(two_step, one_step);
        }
    }

    #[test]
    fn complement_duality_examples() {
        let c4 = cycle_graph(4).unwrap();
        let d = complement_transfer(&c4, &coloring(2, &[1, 1, 2, 2])).unwrap();
        assert!(d.holds());
        assert!(d.balanced());
        // complement of C_4 is a pair of disjoint edges
        assert_eq!(d.complement.size(), 2);

        let empty = Graph::empty(4);
        let d = complement_transfer(&empty, &coloring(2, &[1, 2, 1, 2])).unwrap();
        assert!(d.holds() && d.balanced());

        assert!(matches!(
            complement_transfer(&c4, &coloring(2, &[1, 1, 1, 2])),
            Err(TransferError::NotEquitable(_))
        ));
    }

    #[test]
    fn strong_product_examples() {
        let k2 = color_complete(2, 2).unwrap();
        let p3 = path_graph(3).unwrap();
        let out = strong_product_transfer(&k2, &p3).unwrap();
        assert_eq!(out.graph.order(), 6);

        // a single-vertex second factor leaves the coloring unchanged
        let single = Graph::empty(1);
        let out = strong_product_transfer(&k2, &single).unwrap();
        assert_eq!(out.coloring.colors(), k2.coloring.colors());

        let k6 = color_complete(6, 2).unwrap();
        let c4 = cycle_graph(4).unwrap();
        strong_product_transfer(&k6, &c4).unwrap();
    }

    #[test]
    fn cartesian_k2_examples() {
        let k2 = color_complete(2, 2).unwrap();
        let out = cartesian_k2_transfer(&k2).unwrap();
        assert_eq!(out.graph.order(), 4);
        assert_eq!(out.coloring.colors(), &[1, 1, 2, 2]);

        let k6 = color_complete(6, 2).unwrap();
        cartesian_k2_transfer(&k6).unwrap();
        let k3 = color_complete(3, 3).unwrap();
        cartesian_k2_transfer(&k3).unwrap();
    }

    #[test]
    fn cartesian_mixed_examples() {
        let k2 = color_complete(2, 2).unwrap();
        let c4 = cycle_graph(4).unwrap();
        let out = cartesian_mixed_transfer(&k2, &c4, &coloring(2, &[1, 1, 2, 2])).unwrap();
        assert_eq!(out.graph.order(), 8);

        // an edgeless second factor: each copy is a cyclic shift of the base
        let empty = Graph::empty(2);
        let out = cartesian_mixed_transfer(&k2, &empty, &coloring(2, &[1, 1])).unwrap();
        assert_eq!(out.graph.size(), 2);

        // the repeating pattern on C_9 is not open-balanced (degree 2, k=3),
        // so the hypothesis gate fires
        let k3 = color_complete(3, 3).unwrap();
        let c9 = cycle_graph(9).unwrap();
        let pattern: Vec<usize> = (0..9).map(|v| v % 3 + 1).collect();
        assert!(matches!(
            cartesian_mixed_transfer(&k3, &c9, &coloring(3, &pattern)),
            Err(TransferError::NotNbc(_))
        ));

        let nbc_k2 = cartesian_k2_transfer(&k3).unwrap();
        cartesian_mixed_transfer(&k3, &nbc_k2.graph, &nbc_k2.coloring).unwrap();
    }

    #[test]
    fn cartesian_mixed_rejects_k_mismatch() {
        let k2 = color_complete(2, 2).unwrap();
        let empty = Graph::empty(2);
        assert!(matches!(
            cartesian_mixed_transfer(&k2, &empty, &coloring(3, &[1, 1])),
            Err(TransferError::ColorCountMismatch { .. })
        ));
    }

    #[test]
    fn lexicographic_examples() {
        let p3 = path_graph(3).unwrap();
        let k2 = color_complete(2, 2).unwrap();
        let out = lexicographic_transfer(&p3, &k2).unwrap();
        assert_eq!(out.graph.order(), 6);

        // substituting a rainbow clique reproduces the supergraph embedding
        let c5 = cycle_graph(5).unwrap();
        let k3 = color_complete(3, 3).unwrap();
        let out = lexicographic_transfer(&c5, &k3).unwrap();
        let em = supergraph_embed(&c5, 3).unwrap();
        assert!(out.graph.same_adjacency(&em.colored.graph));
        assert_eq!(out.coloring, em.colored.coloring);
    }

    #[test]
    fn lexicographic_gate_rejects_skewed_classes() {
        let k3 = complete_graph(3).unwrap();
        let h3 = build_hk(3).unwrap();
        assert!(matches!(
            lexicographic_transfer(&k3, &h3),
            Err(TransferError::NotEquitable(_))
        ));
        // and the composed graph independently has the wrong degrees
        let product = build_product(ProductKind::Lexicographic, &k3, &h3.graph).unwrap();
        assert!(check_degree_cnbc(&product, 3).is_err());
    }

    #[test]
    fn join_examples() {
        let k2 = color_complete(2, 2).unwrap();
        let out = join_transfer(&k2, &k2).unwrap();
        assert!(out.graph.same_adjacency(&complete_graph(4).unwrap()));
        assert_eq!(out.coloring.colors(), &[1, 2, 1, 2]);

        let k3 = color_complete(3, 3).unwrap();
        let out = join_transfer(&k3, &k3).unwrap();
        assert!(out.graph.same_adjacency(&complete_graph(6).unwrap()));

        let cube = color_hamming(3, 2).unwrap();
        let k6 = color_complete(6, 2).unwrap();
        join_transfer(&cube, &k6).unwrap();
    }

    #[test]
    fn join_gate_rejects_skewed_classes() {
        let k3 = color_complete(3, 3).unwrap();
        let h3 = build_hk(3).unwrap();
        assert!(matches!(
            join_transfer(&k3, &h3),
            Err(TransferError::NotEquitable(_))
        ));
        let joined = build_product(ProductKind::Join, &k3.graph, &h3.graph).unwrap();
        assert!(check_degree_cnbc(&joined, 3).is_err());
    }

    #[test]
    fn direct_k2_examples() {
        let k2 = color_complete(2, 2).unwrap();
        let out = direct_k2_transfer(&k2).unwrap();
        // the double cover of an edge is a pair of edges, each rainbow
        assert_eq!(out.graph.size(), 2);
        assert!(!out.graph.is_connected());

        let k6 = color_complete(6, 2).unwrap();
        assert_eq!(direct_k2_transfer(&k6).unwrap().graph.order(), 12);
        let k3 = color_complete(3, 3).unwrap();
        direct_k2_transfer(&k3).unwrap();
    }

    #[test]
    fn obstruction_examples() {
        let k4 = complete_graph(4).unwrap();
        // degrees 3 ≢ 2 (mod 3): hypothesis gate
        assert!(matches!(
            direct_product_obstruction(&k4, &k4, 3),
            Err(TransferError::DegreeHypothesis { .. })
        ));

        let k3 = complete_graph(3).unwrap();
        let record = direct_product_obstruction(&k3, &k3, 3).unwrap();
        assert_eq!(record.product_degree_residue, 1);
        assert_eq!(record.required_residue, 2);
        // independent confirmation on the actual product
        let product = build_product(ProductKind::Direct, &k3, &k3).unwrap();
        assert!(check_degree_cnbc(&product, 3).is_err());

        let k6 = complete_graph(6).unwrap();
        let record = direct_product_obstruction(&k6, &k6, 3).unwrap();
        assert_eq!(record.product_order, 36);

        assert!(matches!(
            direct_product_obstruction(&k3, &k3, 2),
            Err(TransferError::ObstructionNeedsKAtLeast3)
        ));
    }

    #[test]
    fn request_dispatch_round_trip() {
        let k2 = color_complete(2, 2).unwrap();
        let outcome = TransferRequest::CartesianK2 { base: k2 }.apply().unwrap();
        assert!(matches!(outcome, TransferOutcome::Nbc(_)));
    }
}
