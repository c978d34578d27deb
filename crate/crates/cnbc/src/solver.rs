//! Exact decision and search for balanced colorings: a pruned backtracking
//! solver, a plain enumeration oracle, and a cross-validation harness that
//! holds the two in agreement.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::coloring::{verify_cnbc, verify_nbc, Coloring};
use crate::diagnostics::{check_degree_nbc, preflight, twin_partition};
use crate::graph::Graph;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("need at least 2 colors, got {0}")]
    TooFewColors(usize),
    #[error("enumeration budget exceeded: {k}^{n} > {budget}")]
    EnumerationBudget { k: usize, n: usize, budget: u64 },
    #[error("invalid registered clique: {0}")]
    InvalidClique(String),
    #[error("vertex order must be a permutation of the vertices")]
    InvalidVertexOrder,
}

/// Which neighborhoods the balance constraint ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceMode {
    /// Closed neighborhoods `N[v]`.
    Cnbc,
    /// Open neighborhoods `N(v)`.
    Nbc,
}

/// Toggles for the individual pruning rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Propagation {
    /// Prune as soon as a color count exceeds its per-neighborhood quota.
    pub count_bounds: bool,
    /// Assign classes of vertices with identical open neighborhoods
    /// atomically (closed mode only; open-balanced colorings may split
    /// twins).
    pub twin_merge: bool,
    /// Enforce pairwise-distinct colors inside registered k-cliques.
    pub clique_rainbow: bool,
}

impl Default for Propagation {
    fn default() -> Self {
        Propagation {
            count_bounds: true,
            twin_merge: true,
            clique_rainbow: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexOrder {
    /// Highest degree first, ties by id. High-degree vertices constrain the
    /// most neighborhoods.
    DegreeDesc,
    Input,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub mode: BalanceMode,
    pub k: usize,
    /// Restrict branching so the first occurrences of colors along the
    /// vertex order appear in increasing name order. Color names are
    /// interchangeable, so no satisfiable instance is lost.
    pub symmetry_breaking: bool,
    pub propagation: Propagation,
    pub time_limit: Duration,
    pub vertex_order: VertexOrder,
    /// Custom order overriding `vertex_order` when set; must be a
    /// permutation of the vertices.
    pub custom_order: Option<Vec<usize>>,
    /// k-cliques registered for the rainbow rule. Each must contain a
    /// vertex whose closed neighborhood is exactly the clique, which forces
    /// pairwise-distinct colors in any balanced coloring.
    pub cliques: Vec<Vec<usize>>,
}

impl SolveOptions {
    pub fn new(k: usize) -> SolveOptions {
        SolveOptions {
            mode: BalanceMode::Cnbc,
            k,
            symmetry_breaking: true,
            propagation: Propagation::default(),
            time_limit: Duration::from_secs(60),
            vertex_order: VertexOrder::DegreeDesc,
            custom_order: None,
            cliques: Vec::new(),
        }
    }

    pub fn nbc(mut self) -> SolveOptions {
        self.mode = BalanceMode::Nbc;
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> SolveOptions {
        self.time_limit = limit;
        self
    }

    pub fn with_cliques(mut self, cliques: Vec<Vec<usize>>) -> SolveOptions {
        self.cliques = cliques;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Satisfiable(Coloring),
    Unsatisfiable,
    Timeout,
}

impl SolveStatus {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, SolveStatus::Satisfiable(_))
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        match self {
            SolveStatus::Satisfiable(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Decision nodes expanded.
    pub nodes: u64,
    pub max_depth: usize,
    pub wall: Duration,
    /// Set when a necessary-condition pre-pass already settled the instance.
    pub preflight_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub stats: SearchStats,
}

struct Searcher<'a> {
    g: &'a Graph,
    k: usize,
    mode: BalanceMode,
    opts: &'a SolveOptions,
    order: Vec<usize>,
    /// Quota per vertex: |scope(v)| / k.
    target: Vec<usize>,
    colors: Vec<usize>, // 0 = unassigned
    counts: Vec<Vec<usize>>,
    twin_class: Vec<usize>,
    twin_members: Vec<Vec<usize>>,
    clique_membership: Vec<Vec<usize>>,
    cliques: Vec<Vec<usize>>,
    used_colors: usize,
    color_use: Vec<u64>, // how many assigned vertices carry each color
    nodes: u64,
    max_depth: usize,
    deadline: Instant,
    timed_out: bool,
}

impl<'a> Searcher<'a> {
    /// Vertices whose balance counter includes `w`.
    fn affected(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        let own = matches!(self.mode, BalanceMode::Cnbc).then_some(w);
        self.g.neighbors(w).iter().copied().chain(own)
    }

    /// Applies the assignment in full (so [`Self::unassign`] is always its
    /// exact inverse) and reports whether any pruning rule fired.
    fn assign(&mut self, w: usize, color: usize) -> bool {
        self.colors[w] = color;
        self.color_use[color - 1] += 1;
        if self.color_use[color - 1] == 1 {
            self.used_colors += 1;
        }
        let mut ok = true;
        if self.opts.propagation.clique_rainbow {
            for &ci in &self.clique_membership[w] {
                for &other in &self.cliques[ci] {
                    if other != w && self.colors[other] == color {
                        ok = false;
                    }
                }
            }
        }
        let affected: Vec<usize> = self.affected(w).collect();
        for u in affected {
            self.counts[u][color - 1] += 1;
            if self.opts.propagation.count_bounds && self.counts[u][color - 1] > self.target[u] {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&mut self, w: usize) {
        let color = self.colors[w];
        let affected: Vec<usize> = self.affected(w).collect();
        for u in affected {
            self.counts[u][color - 1] -= 1;
        }
        self.color_use[color - 1] -= 1;
        if self.color_use[color - 1] == 0 {
            self.used_colors -= 1;
        }
        self.colors[w] = 0;
    }

    /// Assigns the whole twin class of `v` (or just `v` when merging is
    /// off). Returns the vertices assigned on success, or unwinds and
    /// returns None on a violated bound.
    fn assign_group(&mut self, v: usize, color: usize) -> Option<Vec<usize>> {
        let members: Vec<usize> = if self.opts.propagation.twin_merge
            && matches!(self.mode, BalanceMode::Cnbc)
        {
            self.twin_members[self.twin_class[v]].clone()
        } else {
            vec![v]
        };
        for (i, &w) in members.iter().enumerate() {
            debug_assert_eq!(self.colors[w], 0, "twin groups assign atomically");
            if !self.assign(w, color) {
                for &done in &members[..=i] {
                    self.unassign(done);
                }
                return None;
            }
        }
        Some(members)
    }

    fn dfs(&mut self, pos: usize) -> bool {
        if self.timed_out {
            return false;
        }
        let n = self.g.order();
        let mut pos = pos;
        while pos < n && self.colors[self.order[pos]] != 0 {
            pos += 1;
        }
        if pos == n {
            if self.opts.propagation.count_bounds {
                return true;
            }
            // without count bounds nothing pruned along the way, so check
            // the completed assignment directly
            return self.full_assignment_balances();
        }
        self.nodes += 1;
        self.max_depth = self.max_depth.max(pos + 1);
        if self.nodes % 1024 == 0 && Instant::now() >= self.deadline {
            self.timed_out = true;
            return false;
        }
        let v = self.order[pos];
        let max_color = if self.opts.symmetry_breaking {
            (self.used_colors + 1).min(self.k)
        } else {
            self.k
        };
        for color in 1..=max_color {
            if let Some(members) = self.assign_group(v, color) {
                if self.dfs(pos + 1) {
                    return true;
                }
                for &w in members.iter().rev() {
                    self.unassign(w);
                }
            }
            if self.timed_out {
                return false;
            }
        }
        false
    }

    fn full_assignment_balances(&self) -> bool {
        self.counts
            .iter()
            .all(|row| row.iter().all(|&c| c == row[0]))
    }
}

fn validate_cliques(g: &Graph, k: usize, cliques: &[Vec<usize>]) -> Result<(), SolveError> {
    for clique in cliques {
        if clique.len() != k {
            return Err(SolveError::InvalidClique(format!(
                "size {} != k = {k}",
                clique.len()
            )));
        }
        for (i, &u) in clique.iter().enumerate() {
            if u >= g.order() {
                return Err(SolveError::InvalidClique(format!("vertex {u} out of range")));
            }
            for &v in &clique[i + 1..] {
                if !g.has_edge(u, v) {
                    return Err(SolveError::InvalidClique(format!("{u} and {v} not adjacent")));
                }
            }
        }
        // the rainbow rule is only forced when some member's closed
        // neighborhood is exactly the clique
        let anchored = clique.iter().any(|&u| {
            g.degree(u) == k - 1 && {
                let mut sorted: Vec<usize> = clique.iter().copied().filter(|&w| w != u).collect();
                sorted.sort_unstable();
                g.neighbors(u) == sorted.as_slice()
            }
        });
        if !anchored {
            return Err(SolveError::InvalidClique(
                "no member has the clique as its exact closed neighborhood".into(),
            ));
        }
    }
    Ok(())
}

/// Complete backtracking decision procedure.
///
/// A mode-appropriate necessary-condition pre-pass runs first; when it
/// fails, the instance is settled without expanding a single node. The
/// search then branches over the configured vertex order with the enabled
/// pruning rules. A returned satisfiable coloring has always been re-checked
/// by the verifier. Timeout is a first-class result, never an error.
pub fn solve(g: &Graph, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let k = opts.k;
    if k < 2 {
        return Err(SolveError::TooFewColors(k));
    }
    if opts.propagation.clique_rainbow {
        validate_cliques(g, k, &opts.cliques)?;
    }

    let preflight_failure = match opts.mode {
        BalanceMode::Cnbc => {
            let report = preflight(g, k);
            report
                .first_failure()
                .map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()))
        }
        BalanceMode::Nbc => check_degree_nbc(g, k).err().map(|w| {
            format!(
                "degree: vertex {} has degree {}, need a multiple of {k}",
                w.vertex, w.degree
            )
        }),
    };
    if let Some(reason) = preflight_failure {
        return Ok(SolveResult {
            status: SolveStatus::Unsatisfiable,
            stats: SearchStats {
                nodes: 0,
                max_depth: 0,
                wall: start.elapsed(),
                preflight_failure: Some(reason),
            },
        });
    }
    // quotas must be integral; the pre-pass above already guarantees this
    let target: Vec<usize> = g
        .vertices()
        .map(|v| match opts.mode {
            BalanceMode::Cnbc => (g.degree(v) + 1) / k,
            BalanceMode::Nbc => g.degree(v) / k,
        })
        .collect();

    let order: Vec<usize> = match &opts.custom_order {
        Some(custom) => {
            let mut seen = vec![false; g.order()];
            if custom.len() != g.order() {
                return Err(SolveError::InvalidVertexOrder);
            }
            for &v in custom {
                if v >= g.order() || seen[v] {
                    return Err(SolveError::InvalidVertexOrder);
                }
                seen[v] = true;
            }
            custom.clone()
        }
        None => match opts.vertex_order {
            VertexOrder::Input => g.vertices().collect(),
            VertexOrder::DegreeDesc => {
                let mut vs: Vec<usize> = g.vertices().collect();
                vs.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
                vs
            }
        },
    };

    let (twin_class, twin_members) = {
        let classes = twin_partition(g);
        let mut class_of = vec![0usize; g.order()];
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                class_of[v] = i;
            }
        }
        (class_of, classes)
    };

    let mut clique_membership = vec![Vec::new(); g.order()];
    for (ci, clique) in opts.cliques.iter().enumerate() {
        for &v in clique {
            clique_membership[v].push(ci);
        }
    }

    let mut searcher = Searcher {
        g,
        k,
        mode: opts.mode,
        opts,
        order,
        target,
        colors: vec![0; g.order()],
        counts: vec![vec![0; k]; g.order()],
        twin_class,
        twin_members,
        clique_membership,
        cliques: opts.cliques.clone(),
        used_colors: 0,
        color_use: vec![0; k],
        nodes: 0,
        max_depth: 0,
        deadline: start + opts.time_limit,
        timed_out: false,
    };

    let found = searcher.dfs(0);
    let stats = SearchStats {
        nodes: searcher.nodes,
        max_depth: searcher.max_depth,
        wall: start.elapsed(),
        preflight_failure: None,
    };
    let status = if found {
        let coloring =
            Coloring::new(k, searcher.colors.clone()).expect("search assigns only colors 1..=k");
        let verdict = match opts.mode {
            BalanceMode::Cnbc => verify_cnbc(g, &coloring),
            BalanceMode::Nbc => verify_nbc(g, &coloring),
        }
        .expect("coloring covers the graph");
        assert!(
            verdict.is_balanced(),
            "internal error: search produced an unbalanced coloring"
        );
        SolveStatus::Satisfiable(coloring)
    } else if searcher.timed_out {
        SolveStatus::Timeout
    } else {
        SolveStatus::Unsatisfiable
    };
    Ok(SolveResult { status, stats })
}

/// Default cap for [`brute_force`]: `k^|V|` assignments.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

fn enumeration_budget() -> u64 {
    std::env::var("CNBC_ENUM_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_BUDGET)
}

/// Exhaustive oracle: every satisfying coloring, by plain enumeration in
/// vertex-id order. A vertex's balance is tested as soon as the last member
/// of its neighborhood receives a color, which rejects most prefixes early
/// without changing the enumerated set.
///
/// Deliberately shares no machinery with [`solve`]; the two are
/// cross-validated against each other.
pub fn brute_force(g: &Graph, k: usize, mode: BalanceMode) -> Result<Vec<Coloring>, SolveError> {
    if k < 2 {
        return Err(SolveError::TooFewColors(k));
    }
    let n = g.order();
    let budget = enumeration_budget();
    let total = (k as u64).checked_pow(n as u32);
    if total.is_none() || total.unwrap() > budget {
        return Err(SolveError::EnumerationBudget { k, n, budget });
    }

    // last_assigned[v]: enumeration depth at which scope(v) is complete
    let last_assigned: Vec<usize> = g
        .vertices()
        .map(|v| match mode {
            BalanceMode::Cnbc => g.neighbors(v).iter().copied().chain([v]).max().unwrap(),
            BalanceMode::Nbc => g.neighbors(v).iter().copied().max().unwrap_or(0),
        })
        .collect();
    let mut ready_at: Vec<Vec<usize>> = vec![Vec::new(); n.max(1)];
    for v in g.vertices() {
        ready_at[last_assigned[v]].push(v);
    }

    let balanced_at = |colors: &[usize], v: usize| {
        let mut counts = vec![0usize; k];
        if matches!(mode, BalanceMode::Cnbc) {
            counts[colors[v] - 1] += 1;
        }
        for &u in g.neighbors(v) {
            counts[colors[u] - 1] += 1;
        }
        counts.iter().all(|&c| c == counts[0])
    };

    let mut found = Vec::new();
    let mut colors = vec![0usize; n];
    // isolated vertices in open mode have empty scopes, always balanced
    let trivially_ok =
        |v: usize| matches!(mode, BalanceMode::Nbc) && g.degree(v) == 0;

    fn recurse(
        depth: usize,
        n: usize,
        k: usize,
        colors: &mut Vec<usize>,
        ready_at: &[Vec<usize>],
        balanced_at: &dyn Fn(&[usize], usize) -> bool,
        trivially_ok: &dyn Fn(usize) -> bool,
        found: &mut Vec<Vec<usize>>,
    ) {
        if depth == n {
            found.push(colors.clone());
            return;
        }
        for color in 1..=k {
            colors[depth] = color;
            let ok = ready_at[depth]
                .iter()
                .all(|&v| trivially_ok(v) || balanced_at(colors, v));
            if ok {
                recurse(
                    depth + 1,
                    n,
                    k,
                    colors,
                    ready_at,
                    balanced_at,
                    trivially_ok,
                    found,
                );
            }
        }
        colors[depth] = 0;
    }

    let mut raw = Vec::new();
    if n == 0 {
        raw.push(Vec::new());
    } else {
        recurse(
            0,
            n,
            k,
            &mut colors,
            &ready_at,
            &balanced_at,
            &trivially_ok,
            &mut raw,
        );
    }
    for assignment in raw {
        found.push(Coloring::new(k, assignment).expect("enumeration stays in 1..=k"));
    }
    Ok(found)
}

/// Result of holding [`solve`] and [`brute_force`] to agreement over a
/// corpus.
#[derive(Debug, Clone, Default)]
pub struct CrossValidationReport {
    pub cases: usize,
    pub satisfiable: usize,
    /// Indices of corpus graphs where the two engines disagreed.
    pub disagreements: Vec<usize>,
}

impl CrossValidationReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs both engines on every graph and compares satisfiability. Panics if
/// a solver-found coloring fails verification (the solver asserts this
/// itself); disagreements are collected, not panicked, so a failing corpus
/// can be reported whole.
pub fn cross_validate(
    corpus: &[Graph],
    k: usize,
    mode: BalanceMode,
) -> Result<CrossValidationReport, SolveError> {
    let mut report = CrossValidationReport::default();
    for (i, g) in corpus.iter().enumerate() {
        let oracle_sat = !brute_force(g, k, mode)?.is_empty();
        let mut opts = SolveOptions::new(k);
        opts.mode = mode;
        let result = solve(g, &opts)?;
        let solver_sat = match result.status {
            SolveStatus::Satisfiable(_) => true,
            SolveStatus::Unsatisfiable => false,
            SolveStatus::Timeout => {
                report.disagreements.push(i);
                continue;
            }
        };
        report.cases += 1;
        if oracle_sat {
            report.satisfiable += 1;
        }
        if oracle_sat != solver_sat {
            report.disagreements.push(i);
        }
    }
    Ok(report)
}
