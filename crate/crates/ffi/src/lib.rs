//! C ABI for the cgedit library.
//!
//! Graphs are opaque handles created from edge lists; every fallible call
//! returns a status code and writes results through out-parameters. All
//! returned buffers are owned by the library and must be released with the
//! matching `cgedit_*_free` function. Handles are not thread-safe; confine
//! each handle to one thread or guard it externally.

use std::os::raw::c_int;
use std::ptr;

use cgedit::editing::{
    brute_force_optimal_edit, exact_edit, heuristic_edit, heuristic_edit_randomized,
    random_pair_edit, TieBreak,
};
use cgedit::io::serialize_mdtree;
use cgedit::{find_p4, modular_decomposition_tree, EditSet, Graph};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CgeditStatus {
    /// The call succeeded.
    Ok = 0,
    /// A pointer argument was null.
    NullArgument = 1,
    /// An edge endpoint was out of range or a self-loop.
    InvalidEdge = 2,
    /// The graph was empty or otherwise outside a method's bounds.
    Unsupported = 3,
    /// An internal invariant failed while editing.
    EditFailed = 4,
}

/// An opaque simple undirected graph.
pub struct CgeditGraph {
    inner: Graph,
}

/// Editing methods selectable through the C ABI.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CgeditMethod {
    BruteForce = 0,
    Exact = 1,
    Greedy = 2,
    GreedyRand = 3,
    RandomPair = 4,
}

/// An edit set as a flat pair array: entries `2i` and `2i + 1` are the
/// endpoints of the i-th flipped pair, sorted. Free with
/// `cgedit_edits_free`.
#[repr(C)]
pub struct CgeditEdits {
    pub pairs: *mut u32,
    pub len: usize,
}

/// Creates a graph on `n` vertices from `m` edges given as a flat
/// `[u0, v0, u1, v1, ...]` array. On success writes the handle to `out`.
///
/// # Safety
/// `edges` must point to `2 * m` readable `u32`s (or be null when `m` is 0)
/// and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cgedit_graph_new(
    n: usize,
    edges: *const u32,
    m: usize,
    out: *mut *mut CgeditGraph,
) -> CgeditStatus {
    if out.is_null() || (edges.is_null() && m > 0) {
        return CgeditStatus::NullArgument;
    }
    if n == 0 {
        return CgeditStatus::Unsupported;
    }
    let mut pairs = Vec::with_capacity(m);
    for i in 0..m {
        pairs.push((*edges.add(2 * i), *edges.add(2 * i + 1)));
    }
    let g = match Graph::from_edges(n, &pairs) {
        Ok(g) => g,
        Err(_) => return CgeditStatus::InvalidEdge,
    };
    *out = Box::into_raw(Box::new(CgeditGraph { inner: g }));
    CgeditStatus::Ok
}

/// Releases a graph handle. Null is a no-op.
///
/// # Safety
/// `g` must be a handle from `cgedit_graph_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cgedit_graph_free(g: *mut CgeditGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes 1 to `out` if the graph is a cograph, else 0 and, when `witness`
/// is non-null, the four vertices of an induced P4 (path order).
///
/// # Safety
/// `g` must be a live handle; `out` must be valid; `witness`, if non-null,
/// must point to four writable `u32`s.
#[no_mangle]
pub unsafe extern "C" fn cgedit_is_cograph(
    g: *const CgeditGraph,
    out: *mut c_int,
    witness: *mut u32,
) -> CgeditStatus {
    if g.is_null() || out.is_null() {
        return CgeditStatus::NullArgument;
    }
    match find_p4(&(*g).inner) {
        None => *out = 1,
        Some((a, b, c, d)) => {
            *out = 0;
            if !witness.is_null() {
                for (i, x) in [a, b, c, d].into_iter().enumerate() {
                    *witness.add(i) = x;
                }
            }
        }
    }
    CgeditStatus::Ok
}

/// Serializes the modular decomposition tree as a NUL-terminated string in
/// the `S(...)` / `P(...)` / `PR(...)` format. Free with
/// `cgedit_string_free`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cgedit_mdtree_string(
    g: *const CgeditGraph,
    out: *mut *mut std::os::raw::c_char,
) -> CgeditStatus {
    if g.is_null() || out.is_null() {
        return CgeditStatus::NullArgument;
    }
    let tree = match modular_decomposition_tree(&(*g).inner) {
        Ok(t) => t,
        Err(_) => return CgeditStatus::Unsupported,
    };
    let s = std::ffi::CString::new(serialize_mdtree(&tree.root)).unwrap();
    *out = s.into_raw();
    CgeditStatus::Ok
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cgedit_string_free(s: *mut std::os::raw::c_char) {
    if !s.is_null() {
        drop(std::ffi::CString::from_raw(s));
    }
}

fn edits_to_c(edits: &EditSet) -> CgeditEdits {
    let mut flat = Vec::with_capacity(edits.len() * 2);
    for &(u, v) in edits.iter() {
        flat.push(u);
        flat.push(v);
    }
    let len = edits.len();
    let mut boxed = flat.into_boxed_slice();
    let pairs = boxed.as_mut_ptr();
    std::mem::forget(boxed);
    CgeditEdits { pairs, len }
}

/// Computes a cograph edit set with the chosen method; `seed` feeds the
/// randomized methods and is ignored otherwise. On success writes the pair
/// array to `out` and the cost to `cost`.
///
/// # Safety
/// `g` must be a live handle; `out` and `cost` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cgedit_edit(
    g: *const CgeditGraph,
    method: CgeditMethod,
    seed: u64,
    out: *mut CgeditEdits,
    cost: *mut usize,
) -> CgeditStatus {
    if g.is_null() || out.is_null() || cost.is_null() {
        return CgeditStatus::NullArgument;
    }
    let graph = &(*g).inner;
    let result = match method {
        CgeditMethod::BruteForce => brute_force_optimal_edit(graph),
        CgeditMethod::Exact => exact_edit(graph),
        CgeditMethod::Greedy => heuristic_edit(graph, TieBreak::Deterministic),
        CgeditMethod::GreedyRand => heuristic_edit_randomized(graph, seed),
        CgeditMethod::RandomPair => random_pair_edit(graph, seed),
    };
    match result {
        Ok(r) => {
            *out = edits_to_c(&r.edits);
            *cost = r.cost;
            CgeditStatus::Ok
        }
        Err(cgedit::EditError::BoundExceeded { .. })
        | Err(cgedit::EditError::ChildBoundExceeded { .. }) => CgeditStatus::Unsupported,
        Err(_) => CgeditStatus::EditFailed,
    }
}

/// Releases an edit-set buffer. A null or empty buffer is a no-op.
///
/// # Safety
/// `e`, if non-null, must hold a buffer returned by `cgedit_edit` that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn cgedit_edits_free(e: *mut CgeditEdits) {
    if e.is_null() || (*e).pairs.is_null() {
        return;
    }
    let len = (*e).len * 2;
    drop(Box::from_raw(ptr::slice_from_raw_parts_mut((*e).pairs, len)));
    (*e).pairs = ptr::null_mut();
    (*e).len = 0;
}
