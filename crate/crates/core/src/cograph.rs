//! Cograph recognition, cotrees, induced-P4 search, and the adjacency triple
//! set.
//!
//! Cographs are exactly the P4-free graphs; equivalently, the graphs whose
//! modular decomposition tree has no prime node. That tree is the *cotree*,
//! and it reconstructs the graph through the lca rule: `xy` is an edge iff
//! the least common ancestor of the two leaves is series-labeled.
//!
//! The recognizers here are intentionally independent of each other — the
//! O(n⁴) scan [`find_p4`], the recursive complement-connectivity test
//! [`is_cograph`], and the decomposition-tree path in [`cotree`] — so each
//! can serve as a witness for the others in tests.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::mod_decomp::{modular_decomposition_tree, MDNode, MDTree, ModuleKind};

/// Errors raised by cotree construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CographError {
    /// The graph contains an induced P4 (the witness path `a-b-c-d`).
    #[error("not a cograph: induced P4 on {0}-{1}-{2}-{3}")]
    NotACograph(u32, u32, u32, u32),
    /// A tree that violates the cotree shape invariants.
    #[error("malformed cotree: {0}")]
    MalformedTree(String),
}

/// Finds an induced path `a-b-c-d` (edges ab, bc, cd; non-edges ac, ad, bd),
/// or `None` iff the graph is P4-free. The witness is oriented so that the
/// smaller of the two endpoint ids comes first.
pub fn find_p4(g: &Graph) -> Option<(u32, u32, u32, u32)> {
    let n = g.vertex_count() as u32;
    for b in 0..n {
        for c in 0..n {
            if b == c || !g.has_edge(b, c) {
                continue;
            }
            for a in 0..n {
                if a == b || a == c || !g.has_edge(a, b) || g.has_edge(a, c) {
                    continue;
                }
                for d in 0..n {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    if g.has_edge(c, d) && !g.has_edge(b, d) && !g.has_edge(a, d) {
                        return Some(if a < d { (a, b, c, d) } else { (d, c, b, a) });
                    }
                }
            }
        }
    }
    None
}

/// True iff `g` is a cograph, by the complement-reducibility recursion:
/// every cograph on ≥2 vertices is disconnected or co-disconnected.
pub fn is_cograph(g: &Graph) -> bool {
    if g.vertex_count() <= 1 {
        return true;
    }
    let comps = g.connected_components();
    let parts = if comps.len() > 1 {
        comps
    } else {
        let co = g.complement().connected_components();
        if co.len() <= 1 {
            return false;
        }
        co
    };
    parts.iter().all(|p| {
        let (sub, _) = g.induced_subgraph(p).expect("component within graph");
        is_cograph(&sub)
    })
}

/// The cotree of a cograph: a modular decomposition tree whose inner labels
/// are only Parallel/Series, with alternation along every root-leaf path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cotree {
    tree: MDTree,
}

impl Cotree {
    /// Wraps a decomposition tree after validating the cotree shape:
    /// dense leaf ids, children partitioning each node, Leaf exactly on
    /// singletons, no Prime label, and no equal-labeled parent/child pair.
    pub fn from_node(root: MDNode) -> Result<Cotree, CographError> {
        let n = root.vertices.len();
        if root.vertices != VertexSet::full(n) {
            return Err(CographError::MalformedTree(
                "root must cover vertex ids 0..n".into(),
            ));
        }
        validate_node(&root, None)?;
        Ok(Cotree { tree: MDTree { root } })
    }

    pub fn tree(&self) -> &MDTree {
        &self.tree
    }

    pub fn root(&self) -> &MDNode {
        &self.tree.root
    }
}

fn validate_node(node: &MDNode, parent_kind: Option<ModuleKind>) -> Result<(), CographError> {
    match node.kind {
        ModuleKind::Prime => {
            return Err(CographError::MalformedTree("prime label in cotree".into()))
        }
        ModuleKind::Leaf => {
            if node.vertices.len() != 1 || !node.children.is_empty() {
                return Err(CographError::MalformedTree("leaf must be a childless singleton".into()));
            }
            return Ok(());
        }
        kind => {
            if parent_kind == Some(kind) {
                return Err(CographError::MalformedTree(
                    "equal-labeled parent and child".into(),
                ));
            }
        }
    }
    if node.children.len() < 2 {
        return Err(CographError::MalformedTree("inner node with <2 children".into()));
    }
    let mut count = 0;
    for c in &node.children {
        if !c.vertices.is_subset(&node.vertices) {
            return Err(CographError::MalformedTree("child escapes parent".into()));
        }
        count += c.vertices.len();
        validate_node(c, Some(node.kind))?;
    }
    for (i, a) in node.children.iter().enumerate() {
        for b in &node.children[i + 1..] {
            if !a.vertices.is_disjoint(&b.vertices) {
                return Err(CographError::MalformedTree("children overlap".into()));
            }
        }
    }
    if count != node.vertices.len() {
        return Err(CographError::MalformedTree("children do not cover parent".into()));
    }
    Ok(())
}

/// Builds the cotree of `g`, or returns a witness P4 if `g` is not a
/// cograph.
pub fn cotree(g: &Graph) -> Result<Cotree, CographError> {
    let tree = modular_decomposition_tree(g)
        .map_err(|e| CographError::MalformedTree(e.to_string()))?;
    if !tree.prime_nodes_bottom_up().is_empty() {
        let (a, b, c, d) = find_p4(g).expect("prime node implies an induced P4");
        return Err(CographError::NotACograph(a, b, c, d));
    }
    Ok(Cotree { tree })
}

/// Reconstructs the graph from a cotree by the lca rule: an edge for every
/// vertex pair whose least common ancestor is series-labeled.
pub fn cotree_to_graph(t: &Cotree) -> Graph {
    let n = t.root().vertices.len();
    let mut g = Graph::new(n);
    add_series_edges(t.root(), &mut g);
    g
}

fn add_series_edges(node: &MDNode, g: &mut Graph) {
    if node.kind == ModuleKind::Series {
        for (i, a) in node.children.iter().enumerate() {
            for b in &node.children[i + 1..] {
                for &u in a.vertices.iter() {
                    for &v in b.vertices.iter() {
                        g.set_edge(u, v, true);
                    }
                }
            }
        }
    }
    for c in &node.children {
        add_series_edges(c, g);
    }
}

/// A rooted triple `xy|z`: the constraint that lca(x,y) lies strictly below
/// lca(x,z) = lca(y,z). Stored with `x < y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Triple {
    pub fn new(x: u32, y: u32, z: u32) -> Triple {
        assert!(x != y && x != z && y != z, "triple members must be distinct");
        Triple { x: x.min(y), y: x.max(y), z }
    }
}

/// The adjacency triple set R(g): `xy|z` whenever `xz, yz ∈ E` and
/// `xy ∉ E`, or `xz, yz ∉ E` and `xy ∈ E`.
pub fn triple_set(g: &Graph) -> BTreeSet<Triple> {
    let n = g.vertex_count() as u32;
    let mut out = BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let (xz, yz, xy) = (g.has_edge(x, z), g.has_edge(y, z), g.has_edge(x, y));
                if (xz && yz && !xy) || (!xz && !yz && xy) {
                    out.insert(Triple::new(x, y, z));
                }
            }
        }
    }
    out
}

/// Whether the cotree displays the triple: lca(x,y) is a strict descendant
/// of lca(x,z), and lca(x,z) = lca(y,z).
pub fn displays(t: &Cotree, r: &Triple) -> bool {
    let lca = |a: u32, b: u32| {
        t.tree()
            .minimal_containing_node(&VertexSet::from_vec(vec![a, b]))
            .expect("triple members must be leaves of the cotree")
    };
    let xy = lca(r.x, r.y);
    let xz = lca(r.x, r.z);
    let yz = lca(r.y, r.z);
    xz.vertices == yz.vertices
        && xy.vertices.is_subset(&xz.vertices)
        && xy.vertices.len() < xz.vertices.len()
}
