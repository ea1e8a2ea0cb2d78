//! Simple finite undirected loop-free graphs on dense vertex ids `0..n`,
//! together with the elementary constructions everything else builds on:
//! complement, induced subgraphs, disjoint union / join, and
//! symmetric-difference editing.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Errors raised by graph construction and editing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    /// A vertex id at or above the graph's vertex count.
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(u32, usize),
    /// A pair with both endpoints equal.
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(u32),
}

/// An undirected graph without loops or parallel edges.
///
/// The adjacency relation is stored as a symmetric bit matrix, so edge tests
/// and flips are O(1) and whole-row set operations work a word at a time.
/// Graphs are value-like: every editing operation returns a new graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words] }
    }

    /// Builds a graph from an edge list. Duplicate edges are tolerated;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    fn check_pair(&self, u: u32, v: u32) -> Result<(), GraphError> {
        if u as usize >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v as usize >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        let total: u32 = self.bits.iter().map(|w| w.count_ones()).sum();
        total as usize / 2
    }

    /// Whether `u` and `v` are adjacent. Never true for `u == v`.
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        debug_assert!((u as usize) < self.n && (v as usize) < self.n);
        let row = u as usize * self.words;
        self.bits[row + v as usize / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn set_edge(&mut self, u: u32, v: u32, present: bool) {
        debug_assert!(u != v);
        let (iu, iv) = (u as usize, v as usize);
        let set = |bits: &mut Vec<u64>, r: usize, c: usize, words: usize| {
            let idx = r * words + c / 64;
            if present {
                bits[idx] |= 1 << (c % 64);
            } else {
                bits[idx] &= !(1 << (c % 64));
            }
        };
        set(&mut self.bits, iu, iv, self.words);
        set(&mut self.bits, iv, iu, self.words);
    }

    pub(crate) fn flip_edge(&mut self, u: u32, v: u32) {
        let present = self.has_edge(u, v);
        self.set_edge(u, v, !present);
    }

    /// The neighbor row of `v` as a bit mask (`words` 64-bit words).
    pub(crate) fn row(&self, v: u32) -> &[u64] {
        let start = v as usize * self.words;
        &self.bits[start..start + self.words]
    }

    pub(crate) fn words_per_row(&self) -> usize {
        self.words
    }

    /// All edges as normalized pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n as u32 {
            for v in u + 1..self.n as u32 {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The complement graph: same vertices, every non-loop pair flipped.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n as u32 {
            for v in u + 1..self.n as u32 {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v, true);
                }
            }
        }
        g
    }

    /// The subgraph induced by `s`, plus the map from new ids to old ids
    /// (new vertex `i` corresponds to `mapping[i]` in `self`).
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<u32>), GraphError> {
        if let Some(&v) = s.iter().find(|&&v| v as usize >= self.n) {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        let mapping: Vec<u32> = s.iter().copied().collect();
        let mut g = Graph::new(mapping.len());
        for (i, &u) in mapping.iter().enumerate() {
            for (j, &v) in mapping.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i as u32, j as u32, true);
                }
            }
        }
        Ok((g, mapping))
    }

    /// Partition of the vertex set into connected components, ordered by
    /// smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n as u32 {
            if seen[start as usize] {
                continue;
            }
            let mut stack = vec![start];
            seen[start as usize] = true;
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(u);
                for v in 0..self.n as u32 {
                    if !seen[v as usize] && self.has_edge(u, v) {
                        seen[v as usize] = true;
                        stack.push(v);
                    }
                }
            }
            comps.push(VertexSet::from_vec(members));
        }
        comps
    }

    /// `self △ f`: flips exactly the pairs in `f`.
    pub fn apply_edits(&self, f: &EditSet) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        for &(u, v) in f.iter() {
            g.check_pair(u, v)?;
            g.flip_edge(u, v);
        }
        Ok(g)
    }

    /// Side-by-side copy of both graphs; `other`'s vertex `v` becomes
    /// `self.vertex_count() + v`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n as u32;
        let mut g = Graph::new(self.n + other.n);
        for (u, v) in self.edges() {
            g.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + off, v + off, true);
        }
        g
    }

    /// Disjoint union plus all cross edges.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        for u in 0..self.n as u32 {
            for v in 0..other.n as u32 {
                g.set_edge(u, self.n as u32 + v, true);
            }
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A set of vertices, stored as a sorted, deduplicated id list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    /// The empty set.
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// A single-vertex set.
    pub fn singleton(v: u32) -> Self {
        VertexSet(vec![v])
    }

    /// The full vertex set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n as u32).collect())
    }

    /// Builds a set from arbitrary ids (sorted and deduplicated).
    pub fn from_vec(mut v: Vec<u32>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Smallest member; panics on the empty set. (Named to avoid the
    /// by-value `Ord::min`, which method resolution would prefer.)
    pub fn min_id(&self) -> u32 {
        self.0[0]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        VertexSet::from_vec(v)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    /// True iff the sets intersect but neither contains the other.
    pub fn overlaps(&self, other: &VertexSet) -> bool {
        !self.intersection(other).is_empty()
            && !self.is_subset(other)
            && !other.is_subset(self)
    }

    /// The set as a bit mask with `words` 64-bit words.
    pub(crate) fn to_mask(&self, words: usize) -> Vec<u64> {
        let mut mask = vec![0u64; words];
        for &v in &self.0 {
            mask[v as usize / 64] |= 1 << (v % 64);
        }
        mask
    }

    pub(crate) fn from_mask(mask: &[u64]) -> VertexSet {
        let mut v = Vec::new();
        for (i, &w) in mask.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros();
                v.push(i as u32 * 64 + b);
                w &= w - 1;
            }
        }
        VertexSet(v)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        VertexSet::from_vec(iter.into_iter().collect())
    }
}

/// A set of unordered, distinct vertex pairs, interpreted as edge flips:
/// `G △ F` toggles exactly the pairs in `F`.
///
/// Pairs are stored normalized (`u < v`), so iteration order is canonical.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EditSet(BTreeSet<(u32, u32)>);

impl EditSet {
    pub fn new() -> Self {
        EditSet(BTreeSet::new())
    }

    /// Builds an edit set from pairs, normalizing endpoint order.
    /// Pairs with equal endpoints are rejected.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Result<Self, GraphError> {
        let mut set = EditSet::new();
        for (u, v) in pairs {
            set.insert(u, v)?;
        }
        Ok(set)
    }

    /// Inserts a pair (normalized). Errors on `u == v`.
    pub fn insert(&mut self, u: u32, v: u32) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(self.0.insert((u.min(v), u.max(v))))
    }

    /// Flips membership of a pair: inserts if absent, removes if present.
    /// Accumulating edits this way gives symmetric-difference semantics.
    pub fn toggle(&mut self, u: u32, v: u32) {
        debug_assert!(u != v);
        let p = (u.min(v), u.max(v));
        if !self.0.insert(p) {
            self.0.remove(&p);
        }
    }

    pub fn contains(&self, u: u32, v: u32) -> bool {
        self.0.contains(&(u.min(v), u.max(v)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u32, u32)> {
        self.0.iter()
    }

    pub fn union(&self, other: &EditSet) -> EditSet {
        EditSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &EditSet) -> EditSet {
        EditSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn symmetric_difference(&self, other: &EditSet) -> EditSet {
        EditSet(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &EditSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &EditSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Debug for EditSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<(u32, u32)> for EditSet {
    /// Collects normalized pairs; panics on self-pairs (use `from_pairs` for
    /// fallible construction from external data).
    fn from_iter<T: IntoIterator<Item = (u32, u32)>>(iter: T) -> Self {
        EditSet::from_pairs(iter).expect("self-pair in edit set")
    }
}
