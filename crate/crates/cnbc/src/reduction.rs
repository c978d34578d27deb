//! Polynomial-time reduction from proper k-coloring to balanced
//! closed-neighborhood k-coloring (`k >= 3`), with the forward coloring lift
//! and the backward extraction.
//!
//! The expansion attaches two gadget families to the input graph. Each edge
//! gains a (k-2)-clique joined to both endpoints, turning the edge into a
//! k-clique whose interior vertices see exactly that clique as their closed
//! neighborhood — forcing a rainbow, hence distinct endpoint colors. Each
//! vertex `v` gains `d(v) - 1` padding gadgets (two k-cliques sharing a
//! central vertex, the central vertex joined to `v` by a single edge), which
//! top up v's own-color count to `d(v)` without disturbing anything else.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::coloring::{verify_cnbc, Coloring, ColoringError};
use crate::graph::{Graph, GraphError};
use crate::solver::{solve, BalanceMode, SolveError, SolveOptions, SolveStatus};

#[derive(Debug, thiserror::Error)]
pub enum ReductionError {
    #[error("the reduction is defined for k >= 3, got {0}")]
    KTooSmall(usize),
    #[error("vertex {0} is isolated; drop isolated vertices first (they are properly colorable but never balanceable)")]
    IsolatedVertex(usize),
    #[error("input coloring is not proper: edge {u}-{v} has color {color} on both ends")]
    NotProper { u: usize, v: usize, color: usize },
    #[error("input coloring does not balance the expanded graph (vertex {0})")]
    NotCnbc(usize),
    #[error("certificate does not match the graph: {0}")]
    CertificateMismatch(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Two k-cliques sharing one central vertex; order `2k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddingGadget {
    pub central: usize,
    pub clique_a: Vec<usize>,
    pub clique_b: Vec<usize>,
}

/// The `k - 2` interior vertices attached to one original edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClique {
    pub endpoints: (usize, usize),
    pub members: Vec<usize>,
}

/// Block map from an original graph to its gadget expansion. Blocks are
/// pairwise disjoint and cover the expanded vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub k: usize,
    /// Host ids of the original vertices (the identity embedding).
    pub original: Vec<usize>,
    /// One entry per original edge, in sorted edge order.
    pub edge_cliques: Vec<EdgeClique>,
    /// `padding[v]` holds the `d(v) - 1` gadgets attached to vertex `v`.
    pub padding: Vec<Vec<PaddingGadget>>,
}

impl ReductionCertificate {
    /// `|V| + (k-2)|E| + (2k-1) Σ_v (d(v) - 1)`.
    pub fn expected_order(&self) -> usize {
        let n = self.original.len();
        let m = self.edge_cliques.len();
        let gadgets: usize = self.padding.iter().map(|p| p.len()).sum();
        n + (self.k - 2) * m + (2 * self.k - 1) * gadgets
    }

    /// Every k-clique whose rainbow is forced: each edge clique together
    /// with its endpoints, and both cliques of every padding gadget.
    pub fn rainbow_cliques(&self) -> Vec<Vec<usize>> {
        let mut cliques = Vec::new();
        for ec in &self.edge_cliques {
            let mut clique = vec![ec.endpoints.0, ec.endpoints.1];
            clique.extend_from_slice(&ec.members);
            cliques.push(clique);
        }
        for gadgets in &self.padding {
            for gadget in gadgets {
                for half in [&gadget.clique_a, &gadget.clique_b] {
                    let mut clique = vec![gadget.central];
                    clique.extend_from_slice(half);
                    cliques.push(clique);
                }
            }
        }
        cliques
    }

    /// Checks block disjointness, coverage, and the size formula against
    /// the expanded graph.
    pub fn validate(&self, expanded: &Graph) -> Result<(), ReductionError> {
        let mismatch = |msg: String| Err(ReductionError::CertificateMismatch(msg));
        if expanded.order() != self.expected_order() {
            return mismatch(format!(
                "expanded order {} != size formula {}",
                expanded.order(),
                self.expected_order()
            ));
        }
        let mut seen = vec![false; expanded.order()];
        let mut claim = |v: usize| -> Result<(), ReductionError> {
            if v >= seen.len() {
                return Err(ReductionError::CertificateMismatch(format!(
                    "block vertex {v} out of range"
                )));
            }
            if seen[v] {
                return Err(ReductionError::CertificateMismatch(format!(
                    "vertex {v} claimed by two blocks"
                )));
            }
            seen[v] = true;
            Ok(())
        };
        for &v in &self.original {
            claim(v)?;
        }
        for ec in &self.edge_cliques {
            if ec.members.len() != self.k - 2 {
                return mismatch(format!(
                    "edge clique on {:?} has {} members",
                    ec.endpoints,
                    ec.members.len()
                ));
            }
            for &v in &ec.members {
                claim(v)?;
            }
        }
        for gadgets in &self.padding {
            for gadget in gadgets {
                claim(gadget.central)?;
                if gadget.clique_a.len() != self.k - 1 || gadget.clique_b.len() != self.k - 1 {
                    return mismatch("padding gadget has wrong clique sizes".into());
                }
                for half in [&gadget.clique_a, &gadget.clique_b] {
                    for &v in half {
                        claim(v)?;
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return mismatch(format!("vertex {v} not covered by any block"));
        }
        Ok(())
    }
}

/// Expands `(G, k)` into the equivalent balanced-coloring instance.
///
/// Every vertex of the result has degree `≡ -1 (mod k)`; original vertices
/// end with degree `d(v)·k - 1`. Requires `k >= 3` and minimum degree 1.
pub fn build_reduction(
    g: &Graph,
    k: usize,
) -> Result<(Graph, ReductionCertificate), ReductionError> {
    if k < 3 {
        return Err(ReductionError::KTooSmall(k));
    }
    if let Some(v) = g.vertices().find(|&v| g.degree(v) == 0) {
        return Err(ReductionError::IsolatedVertex(v));
    }
    let n = g.order();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let mut next = n;
    let fresh = |count: usize, next: &mut usize| -> Vec<usize> {
        let ids: Vec<usize> = (*next..*next + count).collect();
        *next += count;
        ids
    };

    let mut edge_cliques = Vec::new();
    for (u, v) in g.edges() {
        let members = fresh(k - 2, &mut next);
        for (i, &a) in members.iter().enumerate() {
            edges.push((u, a));
            edges.push((v, a));
            for &b in &members[i + 1..] {
                edges.push((a, b));
            }
        }
        edge_cliques.push(EdgeClique {
            endpoints: (u, v),
            members,
        });
    }

    let mut padding = Vec::with_capacity(n);
    for v in g.vertices() {
        let mut gadgets = Vec::with_capacity(g.degree(v) - 1);
        for _ in 0..g.degree(v) - 1 {
            let central = fresh(1, &mut next)[0];
            let clique_a = fresh(k - 1, &mut next);
            let clique_b = fresh(k - 1, &mut next);
            edges.push((v, central));
            for half in [&clique_a, &clique_b] {
                for (i, &a) in half.iter().enumerate() {
                    edges.push((central, a));
                    for &b in &half[i + 1..] {
                        edges.push((a, b));
                    }
                }
            }
            gadgets.push(PaddingGadget {
                central,
                clique_a,
                clique_b,
            });
        }
        padding.push(gadgets);
    }

    let expanded = Graph::from_edges(next, edges)?;
    let certificate = ReductionCertificate {
        k,
        original: (0..n).collect(),
        edge_cliques,
        padding,
    };
    certificate.validate(&expanded)?;
    debug_assert!(expanded
        .vertices()
        .all(|v| (expanded.degree(v) + 1) % k == 0));
    Ok((expanded, certificate))
}

fn require_proper(g: &Graph, c: &Coloring) -> Result<(), ReductionError> {
    if c.len() != g.order() {
        return Err(ColoringError::SizeMismatch {
            coloring: c.len(),
            graph: g.order(),
        }
        .into());
    }
    for (u, v) in g.edges() {
        if c.color(u) == c.color(v) {
            return Err(ReductionError::NotProper {
                u,
                v,
                color: c.color(u),
            });
        }
    }
    Ok(())
}

/// Lifts a proper k-coloring of the original graph to a balanced coloring
/// of the expansion: originals keep their colors, each edge clique takes the
/// `k - 2` missing colors, each padding gadget centers on its host's color
/// and completes both cliques to rainbows.
pub fn lift_coloring(
    g: &Graph,
    expanded: &Graph,
    certificate: &ReductionCertificate,
    proper: &Coloring,
) -> Result<Coloring, ReductionError> {
    require_proper(g, proper)?;
    let k = certificate.k;
    let mut colors = vec![0usize; expanded.order()];
    for (&host, v) in certificate.original.iter().zip(0..) {
        colors[host] = proper.color(v);
    }
    for ec in &certificate.edge_cliques {
        let (cu, cv) = (proper.color(ec.endpoints.0), proper.color(ec.endpoints.1));
        let missing = (1..=k).filter(|&c| c != cu && c != cv);
        for (&vertex, color) in ec.members.iter().zip(missing) {
            colors[vertex] = color;
        }
    }
    for (v, gadgets) in certificate.padding.iter().enumerate() {
        let own = proper.color(v);
        for gadget in gadgets {
            colors[gadget.central] = own;
            for half in [&gadget.clique_a, &gadget.clique_b] {
                let rest = (1..=k).filter(|&c| c != own);
                for (&vertex, color) in half.iter().zip(rest) {
                    colors[vertex] = color;
                }
            }
        }
    }
    let lifted = Coloring::new(k, colors)?;
    match verify_cnbc(expanded, &lifted)? {
        crate::coloring::BalanceVerdict::Balanced => Ok(lifted),
        crate::coloring::BalanceVerdict::Unbalanced(v) => Err(ReductionError::NotCnbc(v.vertex)),
    }
}

/// Restricts a balanced coloring of the expansion to the original vertices;
/// the result is a proper k-coloring (the edge cliques force distinct
/// endpoint colors). Rejects inputs the verifier does not certify.
pub fn extract_coloring(
    g: &Graph,
    expanded: &Graph,
    certificate: &ReductionCertificate,
    balanced: &Coloring,
) -> Result<Coloring, ReductionError> {
    match verify_cnbc(expanded, balanced)? {
        crate::coloring::BalanceVerdict::Balanced => {}
        crate::coloring::BalanceVerdict::Unbalanced(v) => {
            return Err(ReductionError::NotCnbc(v.vertex))
        }
    }
    let restricted = Coloring::new(
        certificate.k,
        certificate
            .original
            .iter()
            .map(|&host| balanced.color(host))
            .collect(),
    )?;
    require_proper(g, &restricted)?;
    Ok(restricted)
}

/// Plain backtracking test for a proper k-coloring; the oracle side of the
/// equivalence check.
pub fn proper_colorable(g: &Graph, k: usize) -> bool {
    fn rec(g: &Graph, k: usize, colors: &mut Vec<usize>, v: usize) -> bool {
        if v == g.order() {
            return true;
        }
        // first vertex needs only one color tried: color names are symmetric
        let limit = if v == 0 { 1 } else { k };
        for c in 1..=limit {
            if g.neighbors(v).iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                if rec(g, k, colors, v + 1) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }
    rec(g, k, &mut vec![0; g.order()], 0)
}

/// How the two sides of an equivalence run relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    Disagree,
    /// The balanced-coloring side timed out; nothing is contradicted.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub proper_colorable: bool,
    pub balanced_status: SolveStatus,
    pub agreement: Agreement,
    pub expanded_order: usize,
}

/// Compares proper k-colorability of `g` against the solver's verdict on
/// the expansion, with every certificate clique registered for rainbow
/// propagation (negative instances are impractical without it). A timeout
/// is recorded, not failed. When the solver finds a balanced coloring, its
/// extraction is checked to be proper — so a satisfiable answer on a
/// non-colorable input can never slip through as agreement.
pub fn equivalence_check(
    g: &Graph,
    k: usize,
    time_limit: Duration,
) -> Result<EquivalenceReport, ReductionError> {
    let (expanded, certificate) = build_reduction(g, k)?;
    let proper = proper_colorable(g, k);
    let opts = SolveOptions::new(k)
        .with_time_limit(time_limit)
        .with_cliques(certificate.rainbow_cliques());
    debug_assert!(matches!(opts.mode, BalanceMode::Cnbc));
    let result = solve(&expanded, &opts)?;
    let agreement = match &result.status {
        SolveStatus::Satisfiable(c) => {
            extract_coloring(g, &expanded, &certificate, c)?;
            if proper {
                Agreement::Agree
            } else {
                Agreement::Disagree
            }
        }
        SolveStatus::Unsatisfiable => {
            if proper {
                Agreement::Disagree
            } else {
                Agreement::Agree
            }
        }
        SolveStatus::Timeout => Agreement::Unresolved,
    };
    Ok(EquivalenceReport {
        proper_colorable: proper,
        balanced_status: result.status,
        agreement,
        expanded_order: expanded.order(),
    })
}
