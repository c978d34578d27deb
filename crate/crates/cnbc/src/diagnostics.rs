//! Necessary-condition checks and counting-identity validators.
//!
//! Each check is a one-way filter: a failure proves no balanced coloring can
//! exist, a pass proves nothing. [`preflight`] bundles the k-parameterized
//! checks into a single report; the solver runs the same bundle before
//! searching. All identity arithmetic is exact integer arithmetic — the
//! formulas contain halves, so every identity is checked in cleared form.

use serde::{Deserialize, Serialize};

use crate::coloring::{class_stats, verify_cnbc, Coloring, ColoringError, Violation};
use crate::graph::Graph;

#[derive(Debug, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("coloring does not balance the graph (vertex {0} fails); this check requires a balanced input")]
    NotBalanced(usize),
    #[error("graph is not regular (degrees {min}..{max})")]
    NotRegular { min: usize, max: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// A vertex whose degree has the wrong residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWitness {
    pub vertex: usize,
    pub degree: usize,
}

/// Passes iff every degree is congruent to `k - 1` modulo `k` — the residue
/// forced on every vertex of a graph with a balanced closed-neighborhood
/// `k`-coloring (|N[v]| must be a multiple of `k`).
pub fn check_degree_cnbc(g: &Graph, k: usize) -> Result<(), DegreeWitness> {
    assert!(k >= 2);
    for vertex in g.vertices() {
        let degree = g.degree(vertex);
        if (degree + 1) % k != 0 {
            return Err(DegreeWitness { vertex, degree });
        }
    }
    Ok(())
}

/// Open-neighborhood analogue: every degree must be a multiple of `k`.
pub fn check_degree_nbc(g: &Graph, k: usize) -> Result<(), DegreeWitness> {
    assert!(k >= 2);
    for vertex in g.vertices() {
        let degree = g.degree(vertex);
        if degree % k != 0 {
            return Err(DegreeWitness { vertex, degree });
        }
    }
    Ok(())
}

/// Partitions the vertices into classes with identical open neighborhoods
/// (false twins). Classes are sorted by their minimum member.
///
/// In any balanced closed-neighborhood coloring, twins share a color: the
/// counts over N(u) determine a vertex's own color once N(u) = N(v).
pub fn twin_partition(g: &Graph) -> Vec<Vec<usize>> {
    let mut classes: std::collections::HashMap<&[usize], Vec<usize>> =
        std::collections::HashMap::new();
    for v in g.vertices() {
        classes.entry(g.neighbors(v)).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort_by_key(|class| class[0]);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderWitness {
    pub order: usize,
    pub k: usize,
}

/// A graph with a balanced `k`-coloring and no isolated vertices has at
/// least `k` vertices.
pub fn check_order(g: &Graph, k: usize) -> Result<(), OrderWitness> {
    if g.order() >= k {
        Ok(())
    } else {
        Err(OrderWitness {
            order: g.order(),
            k,
        })
    }
}

/// Outcome of the counting-identity validation on a balanced coloring.
///
/// For every pair of distinct classes the cross-edge count must equal
/// `(2|E| + |V|) / k²`, and for every class the intra count must equal
/// `(2|E| + |V|) / (2k²) - |V_i| / 2`; equal-sized classes must have equal
/// intra counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingCheck {
    pub cross_pass: bool,
    pub intra_pass: bool,
    pub equal_class_pass: bool,
}

impl CountingCheck {
    pub fn all_pass(&self) -> bool {
        self.cross_pass && self.intra_pass && self.equal_class_pass
    }
}

fn require_cnbc(g: &Graph, c: &Coloring) -> Result<(), DiagnosticsError> {
    match verify_cnbc(g, c)? {
        crate::coloring::BalanceVerdict::Balanced => Ok(()),
        crate::coloring::BalanceVerdict::Unbalanced(Violation { vertex, .. }) => {
            Err(DiagnosticsError::NotBalanced(vertex))
        }
    }
}

/// Validates the counting identities on a balanced coloring; calling it on
/// an unbalanced coloring is a contract violation, not a failed check.
pub fn check_counting(g: &Graph, c: &Coloring) -> Result<CountingCheck, DiagnosticsError> {
    require_cnbc(g, c)?;
    let stats = class_stats(g, c)?;
    let k = c.k();
    let total = 2 * g.size() + g.order();
    let mut cross_pass = true;
    let mut intra_pass = true;
    let mut equal_class_pass = true;
    for i in 1..=k {
        // cleared form of intra = total/(2k²) - |V_i|/2
        if 2 * k * k * stats.edges_between(i, i) + k * k * stats.sizes[i - 1] != total {
            intra_pass = false;
        }
        for j in i + 1..=k {
            if k * k * stats.edges_between(i, j) != total {
                cross_pass = false;
            }
            if stats.sizes[i - 1] == stats.sizes[j - 1]
                && stats.edges_between(i, i) != stats.edges_between(j, j)
            {
                equal_class_pass = false;
            }
        }
    }
    Ok(CountingCheck {
        cross_pass,
        intra_pass,
        equal_class_pass,
    })
}

/// Counting identities specialized to `r`-regular graphs: every class has
/// `|V|/k` vertices, cross counts equal `(r+1)|V|/k²`, intra counts equal
/// `(r+1-k)|V|/(2k²)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularCountingCheck {
    pub sizes_pass: bool,
    pub cross_pass: bool,
    pub intra_pass: bool,
}

impl RegularCountingCheck {
    pub fn all_pass(&self) -> bool {
        self.sizes_pass && self.cross_pass && self.intra_pass
    }
}

fn require_regular(g: &Graph) -> Result<usize, DiagnosticsError> {
    g.is_regular().ok_or(DiagnosticsError::NotRegular {
        min: g.min_degree(),
        max: g.max_degree(),
    })
}

pub fn check_regular_counting(
    g: &Graph,
    c: &Coloring,
) -> Result<RegularCountingCheck, DiagnosticsError> {
    let r = require_regular(g)?;
    require_cnbc(g, c)?;
    let stats = class_stats(g, c)?;
    let k = c.k();
    let n = g.order();
    let mut sizes_pass = true;
    let mut cross_pass = true;
    let mut intra_pass = true;
    for i in 1..=k {
        if k * stats.sizes[i - 1] != n {
            sizes_pass = false;
        }
        // cleared form of intra = (r+1-k)|V|/(2k²)
        if 2 * k * k * stats.edges_between(i, i) + k * n != (r + 1) * n {
            intra_pass = false;
        }
        for j in i + 1..=k {
            if k * k * stats.edges_between(i, j) != (r + 1) * n {
                cross_pass = false;
            }
        }
    }
    Ok(RegularCountingCheck {
        sizes_pass,
        cross_pass,
        intra_pass,
    })
}

/// For an `r`-regular graph, a balanced `k`-coloring forces the intra count
/// `(r+1-k)|V|/(2k²)` to be an integer, so `k²` must divide `|V|` or
/// `r ≡ k-1 (mod k²)`.
pub fn check_regular_divisibility(g: &Graph, k: usize) -> Result<Result<(), usize>, DiagnosticsError> {
    let r = require_regular(g)?;
    let kk = k * k;
    if g.order() % kk == 0 || r % kk == k - 1 {
        Ok(Ok(()))
    } else {
        Ok(Err(r))
    }
}

/// The cross-edge count `(2|E| + |V|) / k²` must be an integer.
pub fn check_global_divisibility(g: &Graph, k: usize) -> Result<(), usize> {
    let total = 2 * g.size() + g.order();
    if total % (k * k) == 0 {
        Ok(())
    } else {
        Err(total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Verdict of a preflight run: a failed necessary condition is a proof of
/// impossibility, a clean run proves nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreflightVerdict {
    DefinitelyNotCnbc,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub k: usize,
    pub checks: Vec<CheckRecord>,
    pub verdict: PreflightVerdict,
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        self.verdict == PreflightVerdict::Unknown
    }

    /// The first failed check, if any.
    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl std::fmt::Display for DiagnosticsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "preflight for k = {}", self.k)?;
        for check in &self.checks {
            let status = if check.passed { "pass" } else { "FAIL" };
            match &check.detail {
                Some(d) => writeln!(f, "  [{status}] {}: {d}", check.name)?,
                None => writeln!(f, "  [{status}] {}", check.name)?,
            }
        }
        write!(
            f,
            "verdict: {}",
            match self.verdict {
                PreflightVerdict::DefinitelyNotCnbc => "definitely not balanceable",
                PreflightVerdict::Unknown => "unknown (all necessary conditions hold)",
            }
        )
    }
}

/// Selects which preflight checks run; all are on by default. Used for
/// ablation experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreflightOptions {
    pub degree: bool,
    pub order: bool,
    pub global_divisibility: bool,
    pub regular_divisibility: bool,
}

impl Default for PreflightOptions {
    fn default() -> Self {
        PreflightOptions {
            degree: true,
            order: true,
            global_divisibility: true,
            regular_divisibility: true,
        }
    }
}

/// Runs every k-parameterized necessary condition and aggregates the
/// outcome. The regular-divisibility check only applies (and only appears in
/// the report) when the graph is regular.
pub fn preflight(g: &Graph, k: usize) -> DiagnosticsReport {
    preflight_with(g, k, PreflightOptions::default())
}

pub fn preflight_with(g: &Graph, k: usize, opts: PreflightOptions) -> DiagnosticsReport {
    assert!(k >= 2);
    let mut checks = Vec::new();
    if opts.degree {
        let (passed, detail) = match check_degree_cnbc(g, k) {
            Ok(()) => (true, format!("every degree is {} mod {k}", k - 1)),
            Err(w) => (
                false,
                format!(
                    "vertex {} has degree {}, need degree {} mod {k}",
                    w.vertex,
                    w.degree,
                    k - 1
                ),
            ),
        };
        checks.push(CheckRecord {
            name: "degree".into(),
            passed,
            detail: Some(detail),
        });
    }
    if opts.order {
        let (passed, detail) = match check_order(g, k) {
            Ok(()) => (true, format!("order {} >= {k}", g.order())),
            Err(w) => (false, format!("order {} < {k}", w.order)),
        };
        checks.push(CheckRecord {
            name: "order".into(),
            passed,
            detail: Some(detail),
        });
    }
    if opts.global_divisibility {
        let (passed, detail) = match check_global_divisibility(g, k) {
            Ok(()) => (true, format!("{}² divides 2|E| + |V|", k)),
            Err(total) => (
                false,
                format!("2|E| + |V| = {total} is not divisible by {}", k * k),
            ),
        };
        checks.push(CheckRecord {
            name: "global_divisibility".into(),
            passed,
            detail: Some(detail),
        });
    }
    if opts.regular_divisibility {
        if let Ok(result) = check_regular_divisibility(g, k) {
            let (passed, detail) = match result {
                Ok(()) => (true, "regular-graph divisibility holds".to_string()),
                Err(r) => (
                    false,
                    format!(
                        "{}-regular on {} vertices: {}² divides neither |V| nor r-(k-1)",
                        r,
                        g.order(),
                        k
                    ),
                ),
            };
            checks.push(CheckRecord {
                name: "regular_divisibility".into(),
                passed,
                detail: Some(detail),
            });
        }
    }
    let verdict = if checks.iter().all(|c| c.passed) {
        PreflightVerdict::Unknown
    } else {
        PreflightVerdict::DefinitelyNotCnbc
    };
    DiagnosticsReport { k, checks, verdict }
}
