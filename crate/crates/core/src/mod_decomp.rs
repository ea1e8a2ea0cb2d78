//! Modules, strong modules, maximal modular partitions, quotient graphs, and
//! the modular decomposition tree.
//!
//! A vertex set M is a *module* if every member has the same neighborhood
//! outside M. A module is *strong* if it overlaps no other module. The
//! decomposition tree is built recursively: split into connected components
//! (parallel), co-components (series), or — when both the graph and its
//! complement are connected — the maximal modular partition of a prime node.
//!
//! `enumerate_all_modules` is a brute-force, definition-level enumerator kept
//! deliberately independent of the tree construction; the test suites use it
//! as the ground truth the fast paths are checked against.

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

/// Errors raised by decomposition operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModDecompError {
    #[error("the empty set is not a module candidate")]
    EmptySet,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {n} vertices, above the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("maximal modular partition requires at least 2 vertices")]
    SingleVertex,
    #[error("decomposition requires at least 1 vertex")]
    EmptyGraph,
    #[error("block {0:?} is not a module")]
    NotAModule(VertexSet),
    #[error("blocks {0:?} and {1:?} intersect")]
    OverlappingBlocks(VertexSet, VertexSet),
}

/// True iff all members of `m` have identical neighborhoods outside `m`.
pub fn is_module(g: &Graph, m: &VertexSet) -> Result<bool, ModDecompError> {
    if m.is_empty() {
        return Err(ModDecompError::EmptySet);
    }
    if let Some(&v) = m.iter().find(|&&v| v as usize >= g.vertex_count()) {
        return Err(GraphError::VertexOutOfRange(v, g.vertex_count()).into());
    }
    let mask = m.to_mask(g.words_per_row());
    Ok(is_module_mask(g, &mask))
}

/// Mask-level module test: outside-neighborhood rows must coincide.
pub(crate) fn is_module_mask(g: &Graph, mask: &[u64]) -> bool {
    let words = g.words_per_row();
    let mut first: Option<Vec<u64>> = None;
    for wi in 0..words {
        let mut bits = mask[wi];
        while bits != 0 {
            let v = (wi * 64) as u32 + bits.trailing_zeros();
            bits &= bits - 1;
            let outside: Vec<u64> =
                g.row(v).iter().zip(mask).map(|(r, m)| r & !m).collect();
            match &first {
                None => first = Some(outside),
                Some(f) => {
                    if *f != outside {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Default vertex-count bound for the brute-force enumerator.
pub const ENUMERATION_BOUND: usize = 16;

/// All modules of `g` (including the trivial ones), by exhaustive subset
/// scan. Desk-scale oracle; refuses graphs above `bound`
/// (default [`ENUMERATION_BOUND`]).
pub fn enumerate_all_modules(
    g: &Graph,
    bound: Option<usize>,
) -> Result<Vec<VertexSet>, ModDecompError> {
    let n = g.vertex_count();
    let bound = bound.unwrap_or(ENUMERATION_BOUND);
    if n > bound || n > 63 {
        return Err(ModDecompError::BoundExceeded { n, bound: bound.min(63) });
    }
    let mut out = Vec::new();
    for subset in 1u64..1 << n {
        if is_module_mask(g, &[subset]) {
            out.push(VertexSet::from_mask(&[subset]));
        }
    }
    Ok(out)
}

/// The strong modules of `g` by brute force: modules overlapping no other
/// module. Oracle counterpart of [`MDTree::strong_modules`].
pub fn brute_force_strong_modules(
    g: &Graph,
    bound: Option<usize>,
) -> Result<Vec<VertexSet>, ModDecompError> {
    let all = enumerate_all_modules(g, bound)?;
    Ok(all
        .iter()
        .filter(|m| all.iter().all(|other| !m.overlaps(other)))
        .cloned()
        .collect())
}

/// A list of disjoint modules covering the vertex set of a reference graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPartition {
    pub blocks: Vec<VertexSet>,
}

impl ModularPartition {
    pub fn new(blocks: Vec<VertexSet>) -> Self {
        ModularPartition { blocks }
    }
}

/// The maximal modular partition P_max(g): the partition of V into the
/// maximal proper strong modules.
pub fn maximal_modular_partition(g: &Graph) -> Result<ModularPartition, ModDecompError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(ModDecompError::SingleVertex);
    }
    let comps = g.connected_components();
    if comps.len() > 1 {
        return Ok(ModularPartition::new(comps));
    }
    let co_comps = g.complement().connected_components();
    if co_comps.len() > 1 {
        return Ok(ModularPartition::new(co_comps));
    }
    Ok(ModularPartition::new(prime_case_partition(g)))
}

/// P_max of a connected, co-connected graph.
///
/// For each pivot v, partition refinement of {{v}, V∖{v}} to a fixpoint
/// (every vertex splits every block it is *outside* of) yields exactly the
/// maximal v-avoiding modules. In a connected and co-connected graph the
/// proper modules containing a fixed vertex x are closed under union and
/// never union to V, so the union of all refinement blocks containing x —
/// over all pivots — is the unique maximal proper (strong) module around x.
fn prime_case_partition(g: &Graph) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let words = g.words_per_row();
    let mut acc: Vec<Vec<u64>> = vec![vec![0u64; words]; n];
    let full = VertexSet::full(n).to_mask(words);
    for pivot in 0..n as u32 {
        let mut pivot_mask = vec![0u64; words];
        pivot_mask[pivot as usize / 64] |= 1 << (pivot % 64);
        let rest: Vec<u64> = full.iter().zip(&pivot_mask).map(|(f, p)| f & !p).collect();
        let mut blocks = vec![pivot_mask, rest];
        // Refine to a fixpoint: a block may only be split by vertices
        // outside it, and splits can unlock further splitters.
        loop {
            let mut changed = false;
            for w in 0..n as u32 {
                let wi = w as usize / 64;
                let wb = 1u64 << (w % 64);
                let row = g.row(w);
                let mut i = 0;
                while i < blocks.len() {
                    if blocks[i][wi] & wb != 0 {
                        i += 1;
                        continue;
                    }
                    let inside: Vec<u64> =
                        blocks[i].iter().zip(row).map(|(b, r)| b & r).collect();
                    if inside.iter().all(|&x| x == 0)
                        || inside.iter().zip(&blocks[i]).all(|(x, b)| x == b)
                    {
                        i += 1;
                        continue;
                    }
                    let outside: Vec<u64> =
                        blocks[i].iter().zip(row).map(|(b, r)| b & !r).collect();
                    blocks[i] = inside;
                    blocks.push(outside);
                    changed = true;
                    i += 1;
                }
            }
            if !changed {
                break;
            }
        }
        for block in &blocks {
            for wi in 0..words {
                let mut bits = block[wi];
                while bits != 0 {
                    let v = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for k in 0..words {
                        acc[v][k] |= block[k];
                    }
                }
            }
        }
    }
    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut seen = vec![false; n];
    for v in 0..n {
        if !seen[v] {
            let block = VertexSet::from_mask(&acc[v]);
            for &u in block.iter() {
                seen[u as usize] = true;
            }
            blocks.push(block);
        }
    }
    blocks.sort_by_key(|b| b.min_id());
    blocks
}

/// The quotient graph g/p, one vertex per block, plus the block list in
/// vertex order. Blocks must be disjoint modules; they need not cover V.
pub fn quotient(
    g: &Graph,
    p: &ModularPartition,
) -> Result<(Graph, Vec<VertexSet>), ModDecompError> {
    for (i, b) in p.blocks.iter().enumerate() {
        if !is_module(g, b)? {
            return Err(ModDecompError::NotAModule(b.clone()));
        }
        for other in &p.blocks[i + 1..] {
            if !b.is_disjoint(other) {
                return Err(ModDecompError::OverlappingBlocks(b.clone(), other.clone()));
            }
        }
    }
    let mut q = Graph::new(p.blocks.len());
    for i in 0..p.blocks.len() {
        for j in i + 1..p.blocks.len() {
            // Disjoint modules are either fully adjacent or fully
            // non-adjacent, so one representative pair decides.
            if g.has_edge(p.blocks[i].min_id(), p.blocks[j].min_id()) {
                q.set_edge(i as u32, j as u32, true);
            }
        }
    }
    Ok((q, p.blocks.clone()))
}

/// Label of a decomposition tree node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// The induced subgraph is disconnected; children are its components.
    Parallel,
    /// The complement is disconnected; children are the co-components.
    Series,
    /// Both connected; the quotient over the children has only trivial
    /// modules.
    Prime,
    /// A single vertex.
    Leaf,
}

/// One node of the decomposition tree: a strong module with its label and
/// children (ordered by smallest vertex id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MDNode {
    pub vertices: VertexSet,
    pub kind: ModuleKind,
    pub children: Vec<MDNode>,
}

/// The modular decomposition tree: the hierarchy of all strong modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MDTree {
    pub root: MDNode,
}

impl MDNode {
    /// Pre-order iteration over this subtree.
    pub fn nodes(&self) -> Vec<&MDNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children.iter());
        }
        out
    }

    fn post_order<'a>(&'a self, out: &mut Vec<&'a MDNode>) {
        for c in &self.children {
            c.post_order(out);
        }
        out.push(self);
    }
}

impl MDTree {
    /// Vertex sets of all tree nodes — exactly the strong modules.
    pub fn strong_modules(&self) -> Vec<VertexSet> {
        self.root.nodes().iter().map(|n| n.vertices.clone()).collect()
    }

    /// Prime-labeled nodes with every descendant before its ancestors.
    pub fn prime_nodes_bottom_up(&self) -> Vec<&MDNode> {
        let mut post = Vec::new();
        self.root.post_order(&mut post);
        post.into_iter().filter(|n| n.kind == ModuleKind::Prime).collect()
    }

    /// The inclusion-minimal node whose vertex set contains `s`.
    pub fn minimal_containing_node(&self, s: &VertexSet) -> Option<&MDNode> {
        if !s.is_subset(&self.root.vertices) || s.is_empty() {
            return None;
        }
        let mut node = &self.root;
        'descend: loop {
            for c in &node.children {
                if s.is_subset(&c.vertices) {
                    node = c;
                    continue 'descend;
                }
            }
            return Some(node);
        }
    }
}

/// Builds the modular decomposition tree of `g`.
pub fn modular_decomposition_tree(g: &Graph) -> Result<MDTree, ModDecompError> {
    if g.vertex_count() == 0 {
        return Err(ModDecompError::EmptyGraph);
    }
    Ok(MDTree { root: build_node(g, &VertexSet::full(g.vertex_count())) })
}

fn build_node(g: &Graph, set: &VertexSet) -> MDNode {
    if set.len() == 1 {
        return MDNode { vertices: set.clone(), kind: ModuleKind::Leaf, children: Vec::new() };
    }
    let (sub, map) = g.induced_subgraph(set).expect("set within graph");
    let to_global = |local: &VertexSet| -> VertexSet {
        local.iter().map(|&v| map[v as usize]).collect()
    };
    let comps = sub.connected_components();
    let (kind, blocks) = if comps.len() > 1 {
        (ModuleKind::Parallel, comps)
    } else {
        let co = sub.complement().connected_components();
        if co.len() > 1 {
            (ModuleKind::Series, co)
        } else {
            (ModuleKind::Prime, prime_case_partition(&sub))
        }
    };
    let mut children: Vec<MDNode> =
        blocks.iter().map(|b| build_node(g, &to_global(b))).collect();
    children.sort_by_key(|c| c.vertices.min_id());
    MDNode { vertices: set.clone(), kind, children }
}
