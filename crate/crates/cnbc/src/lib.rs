//! Balanced-neighborhood graph colorings: a vertex k-coloring balances a
//! graph when every closed neighborhood contains equally many vertices of
//! each color (the open-neighborhood variant is also supported).
//!
//! The crate provides:
//!
//! - [`graph`]: the immutable simple-graph type, generators (complete,
//!   cycle, path, Hamming, complete bipartite), binary operations
//!   (products, join, complement), and file formats;
//! - [`coloring`]: colorings, the two balance verifiers, class statistics,
//!   and cyclic shifts;
//! - [`diagnostics`]: necessary-condition checks and exact counting
//!   identities, bundled into a preflight report;
//! - [`construct`]: certified constructions — complete graphs, Hamming
//!   graphs by two independent routes, the class-skewing vertex addition,
//!   and the universal supergraph embedding;
//! - [`transfer`]: operators carrying balanced colorings across graph
//!   operations, with machine-checked hypotheses;
//! - [`solver`]: an exact backtracking decision procedure and a brute-force
//!   oracle;
//! - [`reduction`]: the gadget expansion relating proper coloring to
//!   balanced coloring, with coloring lift and extraction.
//!
//! A narrative guide with runnable examples lives in the `book/` directory
//! of the repository; its code blocks compile and run as part of this
//! crate's doctests.

#![forbid(unsafe_code)]

pub mod coloring;
pub mod construct;
pub mod diagnostics;
pub mod graph;
pub mod io;
pub mod reduction;
pub mod solver;
pub mod transfer;

pub use coloring::{class_stats, verify_cnbc, verify_nbc, BalanceVerdict, Coloring, Violation};
pub use construct::{
    build_hk, color_complete, color_hamming, color_hamming_closed_form, supergraph_embed,
    vertex_addition_3km2, ColoredGraph,
};
pub use diagnostics::{preflight, DiagnosticsReport, PreflightVerdict};
pub use graph::{
    build_product, complete_bipartite, complete_graph, cycle_graph, hamming_graph, path_graph,
    Graph, ProductKind,
};
pub use reduction::{build_reduction, equivalence_check, extract_coloring, lift_coloring};
pub use solver::{brute_force, cross_validate, solve, BalanceMode, SolveOptions, SolveStatus};

// The guide chapters double as doctests so the book can never drift from
// the API. Only rustdoc sees these items.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Graphs, "../../../book/src/graphs.md");
    chapter!(Balance, "../../../book/src/balance.md");
    chapter!(NecessaryConditions, "../../../book/src/necessary-conditions.md");
    chapter!(Constructions, "../../../book/src/constructions.md");
    chapter!(Transfers, "../../../book/src/transfers.md");
    chapter!(Search, "../../../book/src/search.md");
    chapter!(Hardness, "../../../book/src/hardness.md");
}
