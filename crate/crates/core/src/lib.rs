//! Modular decomposition of simple undirected graphs and cograph editing by
//! module merging.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: dense bitset graphs, vertex sets, and normalized edit sets;
//! - [`mod_decomp`]: modules, the maximal modular partition, quotients, and
//!   the modular decomposition tree;
//! - [`cograph`]: recognition, cotrees, witnesses, and vertex triples;
//! - [`merge`]: the module-merge calculus — merge edit sets, the σ
//!   decomposition of an editing result, and pairwise merge sequences;
//! - [`editing`]: brute-force, exact, greedy, randomized-greedy, and
//!   random-pair cograph editing, plus result verification;
//! - [`io`]: text formats, the planted-instance generator, and the
//!   benchmark harness.

pub mod cograph;
pub mod editing;
pub mod graph;
pub mod io;
pub mod merge;
pub mod mod_decomp;

pub use cograph::{cotree, cotree_to_graph, displays, find_p4, is_cograph, triple_set, Cotree, CographError, Triple};
pub use editing::{
    brute_force_all_optimal_edits, brute_force_optimal_edit, exact_edit, heuristic_edit,
    heuristic_edit_randomized, random_pair_edit, verify_edit_result, EditError, EditResult,
    Method, TieBreak, VerifyReport,
};
pub use graph::{EditSet, Graph, GraphError, VertexSet};
pub use io::{
    generate_perturbed_cograph, parse_bench_config, parse_edit_set, parse_graph, parse_mdtree,
    parse_trace, run_benchmark, serialize_edit_set, serialize_graph, serialize_mdtree,
    serialize_trace, BenchConfig, BenchError, BenchRecord, BenchSummary, GenError, ParseError,
};
pub use merge::{
    check_module_preserving, merge_edit_set, pairwise_merge_sequence, sigma_decomposition,
    validate_merge, MergeError, MergeSpec, MergeStep, MergeTrace, SigmaPart,
};
pub use mod_decomp::{
    enumerate_all_modules, is_module, maximal_modular_partition, modular_decomposition_tree,
    quotient, MDNode, MDTree, ModDecompError, ModularPartition, ModuleKind,
};
