//! The module-merge calculus: validating merges, extracting merge edits,
//! decomposing a module-preserving edit set into ordered σ slices, and
//! replaying it as a sequence of pairwise module merges with full audit
//! data.
//!
//! Throughout, `g` is the input graph, `f` an edit set, and `h = g △ f`.
//! A *merge* turns modules M₁..M_k of `g` into a single module
//! M = ⋃Mᵢ of `h` that was not a module of `g`. When `f` preserves every
//! module of `g` and `h` is a cograph, the new strong modules of `h` can be
//! realized one pairwise merge at a time, each step spending a disjoint
//! slice θ of `f` inside one prime node of `g`'s decomposition tree.

use thiserror::Error;

use crate::cograph::{find_p4, is_cograph};
use crate::graph::{EditSet, Graph, GraphError, VertexSet};
use crate::mod_decomp::{
    enumerate_all_modules, is_module, maximal_modular_partition, modular_decomposition_tree,
    ModDecompError, ModuleKind, ENUMERATION_BOUND,
};

/// Errors raised by merge validation and decomposition.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MergeError {
    #[error("graphs live on different vertex universes ({0} vs {1} vertices)")]
    UniverseMismatch(usize, usize),
    #[error("invalid merge spec: {0}")]
    InvalidSpec(String),
    #[error("edit set is not module-preserving: module {witness:?} of g is not a module of h")]
    NotModulePreserving { witness: VertexSet },
    #[error("edited graph is not a cograph: induced P4 on {0}-{1}-{2}-{3}")]
    NotACograph(u32, u32, u32, u32),
    #[error("{0:?} is not a strong module of h")]
    NotAStrongModule(VertexSet),
    #[error("{0:?} is already a module of g")]
    AlreadyAModule(VertexSet),
    #[error("internal: minimal strong module containing {0:?} is not prime")]
    NoPrimeHost(VertexSet),
    #[error("edit set flagged optimal but merges leave residual edits {residual:?}")]
    ResidualEdits { residual: EditSet },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    ModDecomp(#[from] ModDecompError),
}

/// A k-ary merge: disjoint parts M₁..M_k and their union, the target
/// module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeSpec {
    pub parts: Vec<VertexSet>,
    pub target: VertexSet,
}

impl MergeSpec {
    /// Builds a spec from ≥2 nonempty pairwise disjoint parts; the target is
    /// their union.
    pub fn new(parts: Vec<VertexSet>) -> Result<MergeSpec, MergeError> {
        if parts.len() < 2 {
            return Err(MergeError::InvalidSpec("need at least 2 parts".into()));
        }
        if parts.iter().any(VertexSet::is_empty) {
            return Err(MergeError::InvalidSpec("empty part".into()));
        }
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(MergeError::InvalidSpec(format!(
                        "parts {a:?} and {b:?} intersect"
                    )));
                }
            }
        }
        let target = parts.iter().fold(VertexSet::new(), |acc, p| acc.union(p));
        Ok(MergeSpec { parts, target })
    }
}

/// One pairwise merge: `left ⊞ right → result` realized by the edits
/// `theta`, all of which cross the result's boundary inside `host_prime`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeStep {
    pub left: VertexSet,
    pub right: VertexSet,
    pub result: VertexSet,
    pub theta: EditSet,
    pub host_prime: VertexSet,
}

/// An ordered sequence of pairwise merges decomposing an edit set.
///
/// The θ slices are pairwise disjoint and their union together with
/// `residual` equals the decomposed edit set; for optimal edit sets the
/// residual is empty. `intermediates[l]` is the graph after the first `l`
/// steps, so `intermediates[0]` is the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeTrace {
    pub steps: Vec<MergeStep>,
    pub intermediates: Option<Vec<Graph>>,
    pub residual: EditSet,
}

impl MergeTrace {
    /// Union of all step θ sets.
    pub fn theta_union(&self) -> EditSet {
        self.steps
            .iter()
            .fold(EditSet::new(), |acc, s| acc.union(&s.theta))
    }
}

/// True iff every part of `spec` and the target are modules of `h` while
/// the target is *not* a module of `g` — the definition of a valid merge.
pub fn validate_merge(g: &Graph, h: &Graph, spec: &MergeSpec) -> Result<bool, MergeError> {
    if g.vertex_count() != h.vertex_count() {
        return Err(MergeError::UniverseMismatch(g.vertex_count(), h.vertex_count()));
    }
    for p in &spec.parts {
        if !is_module(h, p)? {
            return Ok(false);
        }
    }
    Ok(is_module(h, &spec.target)? && !is_module(g, &spec.target)?)
}

/// The module merge edits of `f` for a target inside a host subgraph:
/// exactly the pairs of `f` with one endpoint in `target` and the other in
/// `h_sub_vertices ∖ target`.
pub fn merge_edit_set(f: &EditSet, h_sub_vertices: &VertexSet, target: &VertexSet) -> EditSet {
    debug_assert!(target.is_subset(h_sub_vertices));
    f.iter()
        .filter(|&&(u, v)| {
            let (cu, cv) = (target.contains(u), target.contains(v));
            (cu != cv)
                && h_sub_vertices.contains(u)
                && h_sub_vertices.contains(v)
        })
        .copied()
        .collect()
}

/// Checks that every module of `g` is still a module of `g △ f`; on
/// failure the witness is a broken module.
///
/// At desk scale this compares against the brute-force module enumerator;
/// above the enumeration bound it checks all strong modules plus every
/// pairwise union of children of non-prime tree nodes, which is complete:
/// any module is a tree node or a union of children of one non-prime node,
/// and a union is a module of `h` as soon as all its pairwise sub-unions
/// and parts are.
pub fn check_module_preserving(
    g: &Graph,
    f: &EditSet,
) -> Result<(bool, Option<VertexSet>), MergeError> {
    let h = g.apply_edits(f)?;
    if g.vertex_count() <= ENUMERATION_BOUND {
        for m in enumerate_all_modules(g, None)? {
            if !is_module(&h, &m)? {
                return Ok((false, Some(m)));
            }
        }
        return Ok((true, None));
    }
    let t = modular_decomposition_tree(g)?;
    for node in t.root.nodes() {
        if !is_module(&h, &node.vertices)? {
            return Ok((false, Some(node.vertices.clone())));
        }
        if matches!(node.kind, ModuleKind::Parallel | ModuleKind::Series) {
            for (i, a) in node.children.iter().enumerate() {
                for b in &node.children[i + 1..] {
                    let u = a.vertices.union(&b.vertices);
                    if !is_module(&h, &u)? {
                        return Ok((false, Some(u)));
                    }
                }
            }
        }
    }
    Ok((true, None))
}

/// One slice of a σ decomposition: a new strong module of `h`, its hosting
/// prime node in `g`'s tree, and the slice of `f` it accounts for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPart {
    pub m_star: VertexSet,
    pub host_prime: VertexSet,
    pub sigma: EditSet,
}

/// Decomposes a module-preserving edit set: lists the strong modules of
/// `h = g △ f` that are not modules of `g` (ordered by size, then smallest
/// vertex id) with their hosting prime nodes and the disjoint σ slices
/// σᵢ = F_{M*ᵢ} ∖ ⋃_{j<i} F_{M*ⱼ}.
pub fn sigma_decomposition(g: &Graph, f: &EditSet) -> Result<Vec<SigmaPart>, MergeError> {
    let (new_modules, _h) = new_strong_modules(g, f)?;
    let tg = modular_decomposition_tree(g)?;
    let mut used = EditSet::new();
    let mut parts = Vec::new();
    for m_star in new_modules {
        let host_prime = prime_host(&tg, &m_star)?;
        let f_m = merge_edit_set(f, &host_prime, &m_star);
        let sigma = f_m.difference(&used);
        used = used.union(&f_m);
        parts.push(SigmaPart { m_star, host_prime, sigma });
    }
    Ok(parts)
}

/// Strong modules of `h = g △ f` that are not modules of `g`, ordered by
/// (size, smallest id), after validating the module-preserving and cograph
/// preconditions. Also returns `h`.
fn new_strong_modules(g: &Graph, f: &EditSet) -> Result<(Vec<VertexSet>, Graph), MergeError> {
    let (ok, witness) = check_module_preserving(g, f)?;
    if !ok {
        return Err(MergeError::NotModulePreserving { witness: witness.unwrap() });
    }
    let h = g.apply_edits(f)?;
    if !is_cograph(&h) {
        let (a, b, c, d) = find_p4(&h).expect("non-cograph has an induced P4");
        return Err(MergeError::NotACograph(a, b, c, d));
    }
    let th = modular_decomposition_tree(&h)?;
    let mut new_modules: Vec<VertexSet> = th
        .strong_modules()
        .into_iter()
        .filter(|m| !is_module(g, m).expect("strong modules are nonempty and in range"))
        .collect();
    new_modules.sort_by_key(|m| (m.len(), m.min_id()));
    Ok((new_modules, h))
}

/// The inclusion-minimal prime node of `g`'s tree containing `m`. For a
/// module-preserving edit set, every new strong module of `h` has one.
fn prime_host(
    tg: &crate::mod_decomp::MDTree,
    m: &VertexSet,
) -> Result<VertexSet, MergeError> {
    let node = tg
        .minimal_containing_node(m)
        .ok_or_else(|| MergeError::NoPrimeHost(m.clone()))?;
    if node.kind != ModuleKind::Prime {
        return Err(MergeError::NoPrimeHost(m.clone()));
    }
    Ok(node.vertices.clone())
}

/// The merge partition X(M*): the maximal elements of
/// P_max(h[m_star]) ∪ C(m_star), where C(m_star) are the children of
/// m_star's hosting prime node of `g` that lie inside m_star. Blocks are
/// ordered by smallest vertex id and partition m_star.
pub fn x_partition(
    g: &Graph,
    h: &Graph,
    m_star: &VertexSet,
) -> Result<Vec<VertexSet>, MergeError> {
    if g.vertex_count() != h.vertex_count() {
        return Err(MergeError::UniverseMismatch(g.vertex_count(), h.vertex_count()));
    }
    let th = modular_decomposition_tree(h)?;
    if !th.strong_modules().contains(m_star) {
        return Err(MergeError::NotAStrongModule(m_star.clone()));
    }
    if is_module(g, m_star)? {
        return Err(MergeError::AlreadyAModule(m_star.clone()));
    }
    let tg = modular_decomposition_tree(g)?;
    let host = tg
        .minimal_containing_node(m_star)
        .ok_or_else(|| MergeError::NoPrimeHost(m_star.clone()))?;
    let mut candidates: Vec<VertexSet> = host
        .children
        .iter()
        .filter(|c| c.vertices.is_subset(m_star))
        .map(|c| c.vertices.clone())
        .collect();
    let (h_sub, map) = h.induced_subgraph(m_star)?;
    for block in maximal_modular_partition(&h_sub)?.blocks {
        candidates.push(block.iter().map(|&v| map[v as usize]).collect());
    }
    let mut maximal: Vec<VertexSet> = candidates
        .iter()
        .filter(|b| {
            !candidates
                .iter()
                .any(|other| b.is_subset(other) && other.len() > b.len())
        })
        .cloned()
        .collect();
    maximal.sort_by_key(VertexSet::min_id);
    maximal.dedup();
    Ok(maximal)
}

/// Replays a module-preserving edit set as a sequence of pairwise merges.
///
/// For each new strong module M* (in σ order) the X(M*) blocks are merged
/// in by prefixes; a step's θ is empty when the prefix is already a module
/// of the current graph and otherwise spends the not-yet-used merge edits
/// of the prefix. When `optimal` is set, the θ slices are required to cover
/// `f` exactly (which the theory guarantees for optimal module-preserving
/// edit sets); otherwise leftover edits are reported in
/// [`MergeTrace::residual`].
pub fn pairwise_merge_sequence(
    g: &Graph,
    f: &EditSet,
    optimal: bool,
) -> Result<MergeTrace, MergeError> {
    let (new_modules, h) = new_strong_modules(g, f)?;
    let tg = modular_decomposition_tree(g)?;
    let mut current = g.clone();
    let mut intermediates = vec![g.clone()];
    let mut steps = Vec::new();
    let mut used = EditSet::new();
    for m_star in &new_modules {
        let host = prime_host(&tg, m_star)?;
        let blocks = x_partition(g, &h, m_star)?;
        let mut prefix = blocks[0].clone();
        for block in &blocks[1..] {
            let result = prefix.union(block);
            let theta = if is_module(&current, &result)? {
                EditSet::new()
            } else {
                merge_edit_set(f, &host, &result).difference(&used)
            };
            current = current.apply_edits(&theta)?;
            used = used.union(&theta);
            steps.push(MergeStep {
                left: prefix,
                right: block.clone(),
                result: result.clone(),
                theta,
                host_prime: host.clone(),
            });
            intermediates.push(current.clone());
            prefix = result;
        }
    }
    let residual = f.difference(&used);
    if optimal && !residual.is_empty() {
        return Err(MergeError::ResidualEdits { residual });
    }
    Ok(MergeTrace { steps, intermediates: Some(intermediates), residual })
}

#[cfg(test)]
mod test {
    use super::*;

    fn vs(v: &[u32]) -> VertexSet {
        VertexSet::from_vec(v.to_vec())
    }

    fn es(pairs: &[(u32, u32)]) -> EditSet {
        EditSet::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn p4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    /// A P4 on {0..3} that is itself a module (complete to 4), sitting in a
    /// prime path quotient Q-4-5-6.
    fn nested_prime() -> Graph {
        Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (0, 4), (1, 4), (2, 4), (3, 4), (4, 5), (5, 6)],
        )
        .unwrap()
    }

    #[test]
    fn validate_merge_examples() {
        let g = p4();
        let h = g.apply_edits(&es(&[(1, 2)])).unwrap();
        let spec = MergeSpec::new(vec![vs(&[0]), vs(&[1])]).unwrap();
        assert!(validate_merge(&g, &h, &spec).unwrap());

        // Target already a module of g: condition (iii) fails.
        let same = MergeSpec::new(vec![vs(&[0]), vs(&[1])]).unwrap();
        assert!(!validate_merge(&h, &h, &same).unwrap());

        // A part that is not a module of h: condition (i) fails.
        let bad = MergeSpec::new(vec![vs(&[1, 2]), vs(&[0])]).unwrap();
        assert!(!validate_merge(&g, &h, &bad).unwrap());
    }

    #[test]
    fn validate_merge_is_order_invariant() {
        let g = p4();
        let h = g.apply_edits(&es(&[(1, 2)])).unwrap();
        let a = MergeSpec::new(vec![vs(&[0]), vs(&[1])]).unwrap();
        let b = MergeSpec::new(vec![vs(&[1]), vs(&[0])]).unwrap();
        assert_eq!(validate_merge(&g, &h, &a).unwrap(), validate_merge(&g, &h, &b).unwrap());
    }

    #[test]
    fn merge_is_not_associative() {
        // {0}⊞{1}⊞{2} is a valid ternary merge while {0,1} is not even a
        // module of h, so the binary prefix merge is invalid.
        let g = Graph::from_edges(4, &[(0, 3)]).unwrap();
        let h = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let ternary = MergeSpec::new(vec![vs(&[0]), vs(&[1]), vs(&[2])]).unwrap();
        assert!(validate_merge(&g, &h, &ternary).unwrap());
        let binary = MergeSpec::new(vec![vs(&[0]), vs(&[1])]).unwrap();
        assert!(!validate_merge(&g, &h, &binary).unwrap());
    }

    #[test]
    fn validate_merge_rejects_universe_mismatch() {
        let spec = MergeSpec::new(vec![vs(&[0]), vs(&[1])]).unwrap();
        assert!(matches!(
            validate_merge(&p4(), &Graph::new(3), &spec),
            Err(MergeError::UniverseMismatch(4, 3))
        ));
    }

    #[test]
    fn merge_edit_set_examples() {
        let f = es(&[(1, 2), (5, 6)]);
        // Host covers everything; only {1,2} crosses the {0,1} boundary.
        assert_eq!(merge_edit_set(&f, &VertexSet::full(8), &vs(&[0, 1])), es(&[(1, 2)]));
        // Target equal to the host leaves no outside.
        assert_eq!(merge_edit_set(&f, &vs(&[0, 1]), &vs(&[0, 1])), EditSet::new());
        // Nothing crossing the boundary.
        assert_eq!(merge_edit_set(&f, &VertexSet::full(8), &vs(&[3, 4])), EditSet::new());
    }

    #[test]
    fn check_module_preserving_examples() {
        assert_eq!(check_module_preserving(&p4(), &es(&[(1, 2)])).unwrap(), (true, None));
        let two_k2 = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let (ok, witness) = check_module_preserving(&two_k2, &es(&[(0, 2)])).unwrap();
        assert!(!ok);
        assert_eq!(witness, Some(vs(&[0, 1])));
        assert_eq!(check_module_preserving(&p4(), &EditSet::new()).unwrap(), (true, None));
    }

    #[test]
    fn check_module_preserving_above_enumeration_bound() {
        // 20 vertices: 10 disjoint edges; flipping one cross pair breaks the
        // K2 module containing the touched endpoint.
        let edges: Vec<(u32, u32)> = (0..10).map(|i| (2 * i, 2 * i + 1)).collect();
        let g = Graph::from_edges(20, &edges).unwrap();
        let (ok, witness) = check_module_preserving(&g, &es(&[(0, 2)])).unwrap();
        assert!(!ok);
        assert!(witness.is_some());
        assert_eq!(check_module_preserving(&g, &EditSet::new()).unwrap(), (true, None));
    }

    #[test]
    fn sigma_decomposition_on_p4() {
        let g = p4();
        let parts = sigma_decomposition(&g, &es(&[(1, 2)])).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].m_star, vs(&[0, 1]));
        assert_eq!(parts[0].sigma, es(&[(1, 2)]));
        assert_eq!(parts[1].m_star, vs(&[2, 3]));
        assert!(parts[1].sigma.is_empty());
        let total: usize = parts.iter().map(|p| p.sigma.len()).sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn sigma_decomposition_trivial_and_errors() {
        let cograph = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(sigma_decomposition(&cograph, &EditSet::new()).unwrap().is_empty());
        assert!(matches!(
            sigma_decomposition(&cograph, &es(&[(0, 2)])),
            Err(MergeError::NotModulePreserving { .. })
        ));
        // Module-preserving but h is not a cograph: edit C5 into a house
        // shape that still has a P4.
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert!(matches!(
            sigma_decomposition(&c5, &es(&[(0, 2)])),
            Err(MergeError::NotACograph(..)) | Err(MergeError::NotModulePreserving { .. })
        ));
    }

    #[test]
    fn sigma_decomposition_on_nested_prime() {
        let g = nested_prime();
        let f = es(&[(0, 3), (4, 5)]);
        let parts = sigma_decomposition(&g, &f).unwrap();
        let m_stars: Vec<_> = parts.iter().map(|p| p.m_star.clone()).collect();
        assert_eq!(m_stars, vec![vs(&[0, 2]), vs(&[1, 3]), vs(&[5, 6]), vs(&[0, 1, 2, 3, 4])]);
        assert_eq!(parts[0].host_prime, vs(&[0, 1, 2, 3]));
        assert_eq!(parts[0].sigma, es(&[(0, 3)]));
        assert!(parts[1].sigma.is_empty());
        assert_eq!(parts[2].sigma, es(&[(4, 5)]));
        assert!(parts[3].sigma.is_empty());
        let total: usize = parts.iter().map(|p| p.sigma.len()).sum();
        assert_eq!(total, f.len());
    }

    #[test]
    fn x_partition_on_p4() {
        let g = p4();
        let h = g.apply_edits(&es(&[(1, 2)])).unwrap();
        assert_eq!(x_partition(&g, &h, &vs(&[0, 1])).unwrap(), vec![vs(&[0]), vs(&[1])]);
    }

    #[test]
    fn x_partition_returns_contributing_children() {
        // In the nested-prime instance the prime module {0,1,2,3} of g stays
        // a (non-strong) module of h, so the X blocks of M* = {0,1,2,3,4}
        // are exactly the contributing children of the root.
        let g = nested_prime();
        let h = g.apply_edits(&es(&[(0, 3), (4, 5)])).unwrap();
        assert_eq!(
            x_partition(&g, &h, &vs(&[0, 1, 2, 3, 4])).unwrap(),
            vec![vs(&[0, 1, 2, 3]), vs(&[4])]
        );
    }

    #[test]
    fn x_partition_checks_preconditions() {
        let g = p4();
        let h = g.apply_edits(&es(&[(1, 2)])).unwrap();
        assert!(matches!(
            x_partition(&g, &h, &vs(&[0, 2])),
            Err(MergeError::NotAStrongModule(_))
        ));
        assert!(matches!(
            x_partition(&g, &h, &vs(&[0])),
            Err(MergeError::AlreadyAModule(_))
        ));
    }

    #[test]
    fn pairwise_merge_sequence_on_p4() {
        let g = p4();
        let f = es(&[(1, 2)]);
        let trace = pairwise_merge_sequence(&g, &f, true).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].left, vs(&[0]));
        assert_eq!(trace.steps[0].right, vs(&[1]));
        assert_eq!(trace.steps[0].theta, f);
        assert!(trace.steps[1].theta.is_empty());
        assert!(trace.residual.is_empty());
        let last = trace.intermediates.as_ref().unwrap().last().unwrap();
        assert_eq!(*last, g.apply_edits(&f).unwrap());
    }

    #[test]
    fn pairwise_merge_sequence_empty() {
        let cograph = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let trace = pairwise_merge_sequence(&cograph, &EditSet::new(), true).unwrap();
        assert!(trace.steps.is_empty());
        assert!(trace.residual.is_empty());
    }

    #[test]
    fn pairwise_merge_sequence_has_free_steps() {
        // Two paid steps of one edit each; the big module then comes for
        // free because its merge edits were already spent.
        let g = nested_prime();
        let f = es(&[(0, 3), (4, 5)]);
        let trace = pairwise_merge_sequence(&g, &f, true).unwrap();
        let paid: Vec<usize> =
            trace.steps.iter().map(|s| s.theta.len()).filter(|&l| l > 0).collect();
        assert_eq!(paid, vec![1, 1]);
        assert!(trace.steps.last().unwrap().theta.is_empty());
        assert_eq!(trace.theta_union(), f);
        // Each nonempty step is a valid pairwise merge between its
        // surrounding intermediates.
        let inters = trace.intermediates.as_ref().unwrap();
        for (l, step) in trace.steps.iter().enumerate() {
            if step.theta.is_empty() {
                continue;
            }
            let spec = MergeSpec::new(vec![step.left.clone(), step.right.clone()]).unwrap();
            assert!(validate_merge(&inters[l], &inters[l + 1], &spec).unwrap());
        }
        assert_eq!(*inters.last().unwrap(), g.apply_edits(&f).unwrap());
    }
}
