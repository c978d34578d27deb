//! Vertex colorings and the closed/open neighborhood balance verifiers.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("need at least 2 colors, got {0}")]
    TooFewColors(usize),
    #[error("vertex {vertex} has color {color}, outside 1..={k}")]
    ColorOutOfRange { vertex: usize, color: usize, k: usize },
    #[error("coloring covers {coloring} vertices but the graph has {graph}")]
    SizeMismatch { coloring: usize, graph: usize },
}

/// A total assignment of colors `1..=k` to vertices `0..len`.
///
/// Color classes may be empty; the verifiers, not the type, decide whether a
/// coloring balances a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    k: usize,
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(k: usize, colors: Vec<usize>) -> Result<Coloring, ColoringError> {
        if k < 2 {
            return Err(ColoringError::TooFewColors(k));
        }
        for (vertex, &color) in colors.iter().enumerate() {
            if color < 1 || color > k {
                return Err(ColoringError::ColorOutOfRange { vertex, color, k });
            }
        }
        Ok(Coloring { k, colors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Color of vertex `v`, in `1..=k`.
    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Sizes of the color classes `V_1..V_k` (index 0 is color 1).
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.colors {
            sizes[c - 1] += 1;
        }
        sizes
    }

    /// Vertices of the class of `color`.
    pub fn class(&self, color: usize) -> Vec<usize> {
        self.colors
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == color)
            .map(|(v, _)| v)
            .collect()
    }

    /// True when all class sizes are equal.
    pub fn is_equitable(&self) -> bool {
        let sizes = self.class_sizes();
        sizes.iter().all(|&s| s == sizes[0])
    }

    /// Renames colors by adding `t` cyclically: `i` becomes
    /// `((i - 1 + t) mod k) + 1`. A shift by `k` is the identity.
    pub fn cyclic_shift(&self, t: usize) -> Coloring {
        let k = self.k;
        Coloring {
            k,
            colors: self.colors.iter().map(|&c| (c - 1 + t) % k + 1).collect(),
        }
    }

    /// Applies a color permutation given as `perm[i-1]` = new name of `i`.
    pub fn permute(&self, perm: &[usize]) -> Result<Coloring, ColoringError> {
        assert_eq!(perm.len(), self.k, "permutation must cover all colors");
        Coloring::new(self.k, self.colors.iter().map(|&c| perm[c - 1]).collect())
    }
}

/// The lowest-id vertex whose neighborhood fails to balance, with its full
/// per-color count vector (index 0 is color 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: usize,
    pub counts: Vec<usize>,
}

/// Outcome of a balance verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "balanced", content = "witness")]
pub enum BalanceVerdict {
    #[serde(rename = "true")]
    Balanced,
    #[serde(rename = "false")]
    Unbalanced(Violation),
}

impl BalanceVerdict {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceVerdict::Balanced)
    }

    pub fn witness(&self) -> Option<&Violation> {
        match self {
            BalanceVerdict::Balanced => None,
            BalanceVerdict::Unbalanced(v) => Some(v),
        }
    }
}

fn check_sizes(g: &Graph, c: &Coloring) -> Result<(), ColoringError> {
    if c.len() != g.order() {
        return Err(ColoringError::SizeMismatch {
            coloring: c.len(),
            graph: g.order(),
        });
    }
    Ok(())
}

fn verify_balance(g: &Graph, c: &Coloring, closed: bool) -> Result<BalanceVerdict, ColoringError> {
    check_sizes(g, c)?;
    let k = c.k();
    for v in g.vertices() {
        let mut counts = vec![0usize; k];
        if closed {
            counts[c.color(v) - 1] += 1;
        }
        for &u in g.neighbors(v) {
            counts[c.color(u) - 1] += 1;
        }
        if counts.iter().any(|&n| n != counts[0]) {
            return Ok(BalanceVerdict::Unbalanced(Violation { vertex: v, counts }));
        }
    }
    Ok(BalanceVerdict::Balanced)
}

/// Checks that every closed neighborhood `N[v]` contains equally many
/// vertices of each of the `k` colors. On failure, reports the lowest-id
/// offending vertex and its count vector.
pub fn verify_cnbc(g: &Graph, c: &Coloring) -> Result<BalanceVerdict, ColoringError> {
    verify_balance(g, c, true)
}

/// The open-neighborhood analogue: every `N(v)` is equally colored.
pub fn verify_nbc(g: &Graph, c: &Coloring) -> Result<BalanceVerdict, ColoringError> {
    verify_balance(g, c, false)
}

/// Class sizes and the edge counts between and inside color classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStats {
    pub k: usize,
    pub sizes: Vec<usize>,
    /// `edge_counts[i][j]` is `|E(V_{i+1}, V_{j+1})|`; the diagonal counts
    /// intra-class edges once each. Symmetric.
    pub edge_counts: Vec<Vec<usize>>,
}

impl ClassStats {
    /// `|E(V_i, V_j)|` with 1-based colors.
    pub fn edges_between(&self, i: usize, j: usize) -> usize {
        self.edge_counts[i - 1][j - 1]
    }

    /// Sum of all `|E(V_i, V_j)|` over `i <= j`; equals the graph size.
    pub fn total_edges(&self) -> usize {
        let mut total = 0;
        for i in 0..self.k {
            for j in i..self.k {
                total += self.edge_counts[i][j];
            }
        }
        total
    }
}

/// Exact per-class statistics by a single pass over the edges.
pub fn class_stats(g: &Graph, c: &Coloring) -> Result<ClassStats, ColoringError> {
    check_sizes(g, c)?;
    let k = c.k();
    let mut edge_counts = vec![vec![0usize; k]; k];
    for (u, v) in g.edges() {
        let (a, b) = (c.color(u) - 1, c.color(v) - 1);
        edge_counts[a][b] += 1;
        if a != b {
            edge_counts[b][a] += 1;
        }
    }
    Ok(ClassStats {
        k,
        sizes: c.class_sizes(),
        edge_counts,
    })
}
