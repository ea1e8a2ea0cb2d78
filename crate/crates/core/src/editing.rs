//! Cograph editing solvers.
//!
//! * [`brute_force_optimal_edit`] — iterative-deepening search used as the
//!   ground-truth oracle at desk scale, optionally enumerating all optima.
//! * [`exact_edit`] — optimal editing by solving, per prime node of the
//!   decomposition tree (bottom-up), weighted cograph editing on the prime
//!   quotient with flip weight |Mᵢ|·|Mⱼ|. Module-preserving optimal edit
//!   sets flip entire child-pair bicliques inside prime nodes, and prime
//!   nodes can be edited independently, so this is exact.
//! * [`heuristic_edit`] — the O(n³) greedy pairwise-merge heuristic driven
//!   by the A/B bookkeeping matrices, with deterministic or seeded
//!   tie-breaking.
//! * [`heuristic_edit_randomized`] — pair selection with probability
//!   inversely correlated with A_ij·|Mⱼ|, side choice with probability
//!   |Mᵢ|/(|Mᵢ|+|Mⱼ|).
//! * [`random_pair_edit`] — uniformly random pair selection, tracking flips
//!   on the quotient during the loop and materializing vertex-level edits
//!   once at the end.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cograph::{find_p4, is_cograph};
use crate::graph::{EditSet, Graph, GraphError, VertexSet};
use crate::merge::{
    check_module_preserving, pairwise_merge_sequence, validate_merge, MergeError, MergeSpec,
    MergeTrace,
};
use crate::mod_decomp::{
    modular_decomposition_tree, MDTree, ModDecompError,
};

/// Which solver produced an [`EditResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Exact,
    Greedy,
    GreedyRand,
    RandomPair,
}

impl Method {
    /// Stable names used on the CLI and in benchmark CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Method::BruteForce => "bruteforce",
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::GreedyRand => "greedy-rand",
            Method::RandomPair => "random-pair",
        }
    }
}

/// Vertex bound for the single-optimum brute-force search.
pub const BRUTE_FORCE_BOUND: usize = 8;
/// Vertex bound for all-optima enumeration.
pub const ALL_OPTIMA_BOUND: usize = 6;
/// Bound on the child count of a prime node in the exact solver.
pub const EXACT_CHILD_BOUND: usize = 16;

/// Errors raised by the solvers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EditError {
    #[error("graph has {n} vertices, above the solver bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("prime node has {children} children, above the exact-search bound {bound}")]
    ChildBoundExceeded { children: usize, bound: usize },
    #[error("quotient graph is not prime")]
    QuotientNotPrime,
    #[error("flip weights must be positive")]
    NonPositiveWeight,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    ModDecomp(#[from] ModDecompError),
    #[error(transparent)]
    Merge(#[from] MergeError),
}

/// The outcome of an editing run.
#[derive(Clone, Debug)]
pub struct EditResult {
    pub edits: EditSet,
    pub result_graph: Graph,
    pub cost: usize,
    pub method: Method,
    pub trace: Option<MergeTrace>,
}

fn result_from_edits(
    g: &Graph,
    edits: EditSet,
    method: Method,
    trace: Option<MergeTrace>,
) -> Result<EditResult, EditError> {
    let result_graph = g.apply_edits(&edits)?;
    let cost = edits.len();
    Ok(EditResult { edits, result_graph, cost, method, trace })
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

fn pair_index(n: usize, u: u32, v: u32) -> usize {
    let (a, b) = (u.min(v) as usize, u.max(v) as usize);
    a * n + b
}

struct BruteSearch {
    n: usize,
    budget: usize,
    committed: Vec<(u32, u32)>,
    forbidden: Vec<bool>, // indexed by pair_index
    solutions: Vec<EditSet>,
    collect_all: bool,
}

impl BruteSearch {
    /// Branches on the six pairs of an induced P4: any edit set destroying
    /// the P4 must flip one of them. Child i commits pair i and forbids
    /// pairs 0..i, which partitions the solution space — so with
    /// `collect_all` every optimum is produced exactly once.
    fn dfs(&mut self, g: &mut Graph) -> bool {
        let p4 = find_p4(g);
        let Some((a, b, c, d)) = p4 else {
            self.solutions
                .push(self.committed.iter().copied().collect());
            return true;
        };
        if self.budget == 0 {
            return false;
        }
        let pairs =
            [(a, b), (b, c), (c, d), (a, c), (a, d), (b, d)];
        let mut newly_forbidden = Vec::new();
        let mut found = false;
        for (u, v) in pairs {
            let idx = pair_index(self.n, u, v);
            if self.forbidden[idx] {
                continue;
            }
            g.flip_edge(u, v);
            self.committed.push((u, v));
            self.forbidden[idx] = true; // no re-flip inside the subtree
            self.budget -= 1;
            let hit = self.dfs(g);
            self.budget += 1;
            self.committed.pop();
            g.flip_edge(u, v);
            if hit {
                found = true;
                if !self.collect_all {
                    self.forbidden[idx] = false;
                    break;
                }
            }
            // Leave the pair forbidden for the remaining siblings.
            newly_forbidden.push(idx);
        }
        for idx in newly_forbidden {
            self.forbidden[idx] = false;
        }
        found
    }
}

fn brute_force_search(g: &Graph, collect_all: bool) -> Vec<EditSet> {
    let n = g.vertex_count();
    let max_budget = n * (n.max(1) - 1) / 2;
    for budget in 0..=max_budget {
        let mut search = BruteSearch {
            n,
            budget,
            committed: Vec::new(),
            forbidden: vec![false; n * n],
            solutions: Vec::new(),
            collect_all,
        };
        let mut work = g.clone();
        if search.dfs(&mut work) {
            // At the first feasible budget every leaf uses exactly that many
            // flips (a smaller leaf would have been found one level earlier).
            debug_assert!(search.solutions.iter().all(|s| s.len() == budget));
            return search.solutions;
        }
    }
    unreachable!("every graph can be edited into a cograph")
}

/// Minimum-cardinality edit set by exhaustive iterative-deepening search.
/// The desk-scale oracle; bounded by [`BRUTE_FORCE_BOUND`] vertices.
pub fn brute_force_optimal_edit(g: &Graph) -> Result<EditResult, EditError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_BOUND {
        return Err(EditError::BoundExceeded { n, bound: BRUTE_FORCE_BOUND });
    }
    let edits = brute_force_search(g, false).remove(0);
    result_from_edits(g, edits, Method::BruteForce, None)
}

/// Every minimum-cardinality edit set; bounded by [`ALL_OPTIMA_BOUND`]
/// vertices.
pub fn brute_force_all_optimal_edits(g: &Graph) -> Result<Vec<EditSet>, EditError> {
    let n = g.vertex_count();
    if n > ALL_OPTIMA_BOUND {
        return Err(EditError::BoundExceeded { n, bound: ALL_OPTIMA_BOUND });
    }
    Ok(brute_force_search(g, true))
}

// ---------------------------------------------------------------------------
// Exact editing via weighted quotient search
// ---------------------------------------------------------------------------

struct WeightedSearch<'a> {
    n: usize,
    weights: &'a [Vec<u64>],
    forbidden: Vec<bool>,
    committed: Vec<(u32, u32)>,
    committed_weight: u64,
    best_weight: u64,
    best: Option<EditSet>,
}

impl WeightedSearch<'_> {
    fn dfs(&mut self, g: &mut Graph) {
        if self.committed_weight >= self.best_weight {
            return;
        }
        let Some((a, b, c, d)) = find_p4(g) else {
            self.best_weight = self.committed_weight;
            self.best = Some(self.committed.iter().copied().collect());
            return;
        };
        let mut pairs = [(a, b), (b, c), (c, d), (a, c), (a, d), (b, d)];
        // Cheap flips first so a good bound is found early.
        pairs.sort_by_key(|&(u, v)| (self.weights[u as usize][v as usize], u, v));
        let mut newly_forbidden = Vec::new();
        for (u, v) in pairs {
            let idx = pair_index(self.n, u, v);
            if self.forbidden[idx] {
                continue;
            }
            let w = self.weights[u as usize][v as usize];
            g.flip_edge(u, v);
            self.committed.push((u, v));
            self.forbidden[idx] = true;
            self.committed_weight += w;
            self.dfs(g);
            self.committed_weight -= w;
            self.committed.pop();
            g.flip_edge(u, v);
            newly_forbidden.push(idx);
        }
        for idx in newly_forbidden {
            self.forbidden[idx] = false;
        }
    }
}

/// Minimum-total-weight flip set making a prime graph `q` a cograph, by
/// branch-and-bound over induced P4s. `weights[u][v]` must be positive and
/// symmetric.
pub fn weighted_quotient_cograph_edit(
    q: &Graph,
    weights: &[Vec<u64>],
) -> Result<EditSet, EditError> {
    let n = q.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            if weights[u][v] == 0 {
                return Err(EditError::NonPositiveWeight);
            }
        }
    }
    if !quotient_is_prime(q)? {
        return Err(EditError::QuotientNotPrime);
    }
    let mut search = WeightedSearch {
        n,
        weights,
        forbidden: vec![false; n * n],
        committed: Vec::new(),
        committed_weight: 0,
        best_weight: u64::MAX,
        best: None,
    };
    let mut work = q.clone();
    search.dfs(&mut work);
    Ok(search.best.expect("search space contains the all-pairs flip"))
}

fn quotient_is_prime(q: &Graph) -> Result<bool, EditError> {
    let n = q.vertex_count();
    if n < 4 {
        return Ok(false);
    }
    if q.connected_components().len() > 1
        || q.complement().connected_components().len() > 1
    {
        return Ok(false);
    }
    Ok(crate::mod_decomp::maximal_modular_partition(q)?
        .blocks
        .iter()
        .all(|b| b.len() == 1))
}

/// Optimal cograph editing: solves weighted quotient editing on every prime
/// node bottom-up and expands the chosen quotient flips to full child-pair
/// bicliques. Returns a pairwise merge trace as audit data.
pub fn exact_edit(g: &Graph) -> Result<EditResult, EditError> {
    exact_edit_with_bound(g, EXACT_CHILD_BOUND)
}

/// [`exact_edit`] with an explicit per-prime-node child-count bound.
pub fn exact_edit_with_bound(g: &Graph, child_bound: usize) -> Result<EditResult, EditError> {
    if g.vertex_count() == 0 {
        return result_from_edits(g, EditSet::new(), Method::Exact, None);
    }
    let tree = modular_decomposition_tree(g)?;
    let mut edits = EditSet::new();
    for node in tree.prime_nodes_bottom_up() {
        let blocks: Vec<&VertexSet> = node.children.iter().map(|c| &c.vertices).collect();
        let k = blocks.len();
        if k > child_bound {
            return Err(EditError::ChildBoundExceeded { children: k, bound: child_bound });
        }
        // Cross-child adjacency is untouched by edits inside descendants,
        // so the quotient can be read off the original graph.
        let mut q = Graph::new(k);
        for i in 0..k {
            for j in i + 1..k {
                if g.has_edge(blocks[i].min_id(), blocks[j].min_id()) {
                    q.set_edge(i as u32, j as u32, true);
                }
            }
        }
        let mut weights = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    weights[i][j] = blocks[i].len() as u64 * blocks[j].len() as u64;
                }
            }
        }
        let flips = weighted_quotient_cograph_edit(&q, &weights)?;
        for &(i, j) in flips.iter() {
            for &x in blocks[i as usize].iter() {
                for &y in blocks[j as usize].iter() {
                    let fresh = edits.insert(x, y)?;
                    debug_assert!(fresh, "prime nodes contribute disjoint pair sets");
                }
            }
        }
    }
    let trace = pairwise_merge_sequence(g, &edits, true)?;
    result_from_edits(g, edits, Method::Exact, Some(trace))
}

// ---------------------------------------------------------------------------
// Greedy heuristic and randomized variants
// ---------------------------------------------------------------------------

/// Tie-breaking policy for the greedy heuristic.
#[derive(Clone, Debug)]
pub enum TieBreak {
    /// Lexicographically smallest (min id of Mᵢ, min id of Mⱼ) among the
    /// minimizing pairs.
    Deterministic,
    /// Uniform choice among the minimizing pairs, from a seeded generator.
    Seeded(u64),
}

enum Mode {
    Greedy,
    GreedySeeded(ChaCha8Rng),
    Randomized(ChaCha8Rng),
}

/// State handed to observers after every merge step of the heuristic:
/// the current working graph, the still-active blocks of the prime node
/// being processed, and the incrementally maintained A matrix over those
/// blocks (same order).
pub struct HeuristicSnapshot<'a> {
    pub graph: &'a Graph,
    pub blocks: Vec<VertexSet>,
    pub a: Vec<Vec<u64>>,
}

/// The greedy pairwise-module-merge heuristic. Processes prime nodes
/// bottom-up; within a node repeatedly merges the pair minimizing
/// A_ij·|Mⱼ| (|Mᵢ| ≥ |Mⱼ|, smaller min id playing Mᵢ on equal sizes),
/// adjusting Mⱼ's out-neighborhood to Mᵢ's.
pub fn heuristic_edit(g: &Graph, tie_break: TieBreak) -> Result<EditResult, EditError> {
    heuristic_edit_observed(g, tie_break, |_| {})
}

/// [`heuristic_edit`] with a pre-built decomposition tree, so the editing
/// phase can be timed separately from the decomposition.
pub fn heuristic_edit_with_tree(
    g: &Graph,
    tree: &MDTree,
    tie_break: TieBreak,
) -> Result<EditResult, EditError> {
    let mut mode = match tie_break {
        TieBreak::Deterministic => Mode::Greedy,
        TieBreak::Seeded(s) => Mode::GreedySeeded(ChaCha8Rng::seed_from_u64(s)),
    };
    let edits = heuristic_run(g, tree, &mut mode, &mut |_| {})?;
    result_from_edits(g, edits, Method::Greedy, None)
}

/// [`heuristic_edit`] invoking `observer` after every merge step.
pub fn heuristic_edit_observed(
    g: &Graph,
    tie_break: TieBreak,
    mut observer: impl FnMut(&HeuristicSnapshot),
) -> Result<EditResult, EditError> {
    if g.vertex_count() == 0 {
        return result_from_edits(g, EditSet::new(), Method::Greedy, None);
    }
    let tree = modular_decomposition_tree(g)?;
    let mut mode = match tie_break {
        TieBreak::Deterministic => Mode::Greedy,
        TieBreak::Seeded(s) => Mode::GreedySeeded(ChaCha8Rng::seed_from_u64(s)),
    };
    let edits = heuristic_run(g, &tree, &mut mode, &mut observer)?;
    result_from_edits(g, edits, Method::Greedy, None)
}

/// Randomized variant: pairs are sampled with probability inversely
/// correlated with A_ij·|Mⱼ| (weight 1/(1+A_ij·|Mⱼ|)) and the side whose
/// neighborhood is kept is Mᵢ with probability |Mᵢ|/(|Mᵢ|+|Mⱼ|).
/// Deterministic per seed.
pub fn heuristic_edit_randomized(g: &Graph, seed: u64) -> Result<EditResult, EditError> {
    if g.vertex_count() == 0 {
        return result_from_edits(g, EditSet::new(), Method::GreedyRand, None);
    }
    let tree = modular_decomposition_tree(g)?;
    let mut mode = Mode::Randomized(ChaCha8Rng::seed_from_u64(seed));
    let edits = heuristic_run(g, &tree, &mut mode, &mut |_| {})?;
    result_from_edits(g, edits, Method::GreedyRand, None)
}

fn heuristic_run(
    g: &Graph,
    tree: &MDTree,
    mode: &mut Mode,
    observer: &mut dyn FnMut(&HeuristicSnapshot),
) -> Result<EditSet, EditError> {
    let mut gstar = g.clone();
    let mut edits = EditSet::new();
    for node in tree.prime_nodes_bottom_up() {
        let children: Vec<VertexSet> =
            node.children.iter().map(|c| c.vertices.clone()).collect();
        process_prime_node(&mut gstar, &mut edits, &children, mode, observer);
    }
    Ok(edits)
}

fn process_prime_node(
    gstar: &mut Graph,
    edits: &mut EditSet,
    children: &[VertexSet],
    mode: &mut Mode,
    observer: &mut dyn FnMut(&HeuristicSnapshot),
) {
    let k = children.len();
    let mut blocks: Vec<VertexSet> = children.to_vec();
    let reps: Vec<u32> = blocks.iter().map(VertexSet::min_id).collect();
    let mut sizes: Vec<u64> = blocks.iter().map(|b| b.len() as u64).collect();
    let mut alive = vec![true; k];
    let mut alive_count = k;

    let bidx = |i: usize, j: usize, kk: usize| (i * k + j) * k + kk;
    let mut b = vec![false; k * k * k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for kk in 0..k {
                if kk != i && kk != j {
                    b[bidx(i, j, kk)] = gstar.has_edge(reps[i], reps[kk])
                        != gstar.has_edge(reps[j], reps[kk]);
                }
            }
        }
    }
    let mut a = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let s: u64 = (0..k)
                .filter(|&kk| kk != i && kk != j && b[bidx(i, j, kk)])
                .map(|kk| sizes[kk])
                .sum();
            a[i][j] = s;
            a[j][i] = s;
        }
    }

    while alive_count > 1 {
        // Role-assigned candidates: Mᵢ is the larger block (smaller min id
        // on equal sizes).
        let assign = |p: usize, q: usize| -> (usize, usize) {
            if sizes[p] > sizes[q]
                || (sizes[p] == sizes[q] && blocks[p].min_id() < blocks[q].min_id())
            {
                (p, q)
            } else {
                (q, p)
            }
        };
        let live: Vec<usize> = (0..k).filter(|&i| alive[i]).collect();
        let (i, j, kept) = match mode {
            Mode::Greedy | Mode::GreedySeeded(_) => {
                let mut best: Option<(u64, u32, u32, usize, usize)> = None;
                let mut minimizers: Vec<(usize, usize)> = Vec::new();
                for (pi, &p) in live.iter().enumerate() {
                    for &q in &live[pi + 1..] {
                        let (i, j) = assign(p, q);
                        let score = a[i][j] * sizes[j];
                        let key = (score, blocks[i].min_id(), blocks[j].min_id(), i, j);
                        match &best {
                            Some(cur) if cur.0 < score => {}
                            Some(cur) if cur.0 == score => {
                                minimizers.push((i, j));
                                if key < *cur {
                                    best = Some(key);
                                }
                            }
                            _ => {
                                minimizers.clear();
                                minimizers.push((i, j));
                                best = Some(key);
                            }
                        }
                    }
                }
                let (i, j) = match mode {
                    Mode::Greedy => {
                        let b = best.unwrap();
                        (b.3, b.4)
                    }
                    Mode::GreedySeeded(rng) => {
                        minimizers[rng.gen_range(0..minimizers.len())]
                    }
                    Mode::Randomized(_) => unreachable!(),
                };
                (i, j, i)
            }
            Mode::Randomized(rng) => {
                let mut cands: Vec<(usize, usize, f64)> = Vec::new();
                let mut total = 0.0;
                for (pi, &p) in live.iter().enumerate() {
                    for &q in &live[pi + 1..] {
                        let (i, j) = assign(p, q);
                        let w = 1.0 / (1.0 + (a[i][j] * sizes[j]) as f64);
                        total += w;
                        cands.push((i, j, w));
                    }
                }
                let mut target = rng.gen::<f64>() * total;
                let mut chosen = cands.len() - 1;
                for (ci, c) in cands.iter().enumerate() {
                    if target < c.2 {
                        chosen = ci;
                        break;
                    }
                    target -= c.2;
                }
                let (i, j, _) = cands[chosen];
                let kept = if (rng.gen_range(0..sizes[i] + sizes[j])) < sizes[i] {
                    i
                } else {
                    j
                };
                (i, j, kept)
            }
        };
        let adjusted = if kept == i { j } else { i };

        // θ: re-point the adjusted block's out-neighborhood at every block
        // the pair disagrees on.
        for &kk in &live {
            if kk == i || kk == j || !b[bidx(i, j, kk)] {
                continue;
            }
            for &x in blocks[adjusted].iter() {
                for &y in blocks[kk].iter() {
                    edits.toggle(x, y);
                    gstar.flip_edge(x, y);
                }
            }
        }

        // Incremental A updates, using the pre-merge B entries.
        for &kk in &live {
            if kk == i || kk == j {
                continue;
            }
            let v = a[kept][kk] - sizes[adjusted] * b[bidx(kept, kk, adjusted)] as u64;
            a[kept][kk] = v;
            a[kk][kept] = v;
        }
        for (pi, &p) in live.iter().enumerate() {
            if p == i || p == j {
                continue;
            }
            for &q in &live[pi + 1..] {
                if q == i || q == j {
                    continue;
                }
                let v = a[p][q] + sizes[adjusted] * b[bidx(p, q, kept)] as u64
                    - sizes[adjusted] * b[bidx(p, q, adjusted)] as u64;
                a[p][q] = v;
                a[q][p] = v;
            }
        }

        // Merge into the kept index; its representative's neighborhood now
        // describes the whole merged block.
        blocks[kept] = blocks[kept].union(&blocks[adjusted]);
        sizes[kept] += sizes[adjusted];
        alive[adjusted] = false;
        alive_count -= 1;

        // Refresh B entries involving the merged block from the working
        // graph. (With the merge stored at the kept index this recomputes
        // the values already present; kept for clarity and so the scratch
        // invariant below is meaningful.)
        for &p in &live {
            if p == kept || !alive[p] {
                continue;
            }
            for &q in &live {
                if q == kept || q == p || !alive[q] {
                    continue;
                }
                let v = gstar.has_edge(reps[kept], reps[q]) != gstar.has_edge(reps[p], reps[q]);
                b[bidx(kept, p, q)] = v;
                b[bidx(p, kept, q)] = v;
                b[bidx(p, q, kept)] =
                    gstar.has_edge(reps[p], reps[kept]) != gstar.has_edge(reps[q], reps[kept]);
            }
        }

        let live_now: Vec<usize> = (0..k).filter(|&x| alive[x]).collect();
        let snapshot = HeuristicSnapshot {
            graph: gstar,
            blocks: live_now.iter().map(|&x| blocks[x].clone()).collect(),
            a: live_now
                .iter()
                .map(|&x| live_now.iter().map(|&y| a[x][y]).collect())
                .collect(),
        };
        observer(&snapshot);
    }
}

// ---------------------------------------------------------------------------
// Random-pair variant
// ---------------------------------------------------------------------------

/// The O(n²)-accounting variant: merges uniformly random block pairs,
/// tracking flips on the quotient graph during the loop; the vertex-level
/// edit set is materialized in a single post-processing pass.
pub fn random_pair_edit(g: &Graph, seed: u64) -> Result<EditResult, EditError> {
    if g.vertex_count() == 0 {
        return result_from_edits(g, EditSet::new(), Method::RandomPair, None);
    }
    let tree = modular_decomposition_tree(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edits = EditSet::new();
    // Flip records: (members of the adjusted block, members of the witness
    // block) captured at flip time.
    let mut flips: Vec<(std::rc::Rc<Vec<u32>>, std::rc::Rc<Vec<u32>>)> = Vec::new();
    for node in tree.prime_nodes_bottom_up() {
        let k = node.children.len();
        let mut blocks: Vec<std::rc::Rc<Vec<u32>>> = node
            .children
            .iter()
            .map(|c| std::rc::Rc::new(c.vertices.iter().copied().collect::<Vec<u32>>()))
            .collect();
        // Cross-child adjacency from the original graph is valid: deeper
        // edits stay inside single children.
        let mut qadj = vec![vec![false; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let e = g.has_edge(blocks[i][0], blocks[j][0]);
                qadj[i][j] = e;
                qadj[j][i] = e;
            }
        }
        let mut live: Vec<usize> = (0..k).collect();
        while live.len() > 1 {
            let pa = rng.gen_range(0..live.len());
            let pb = {
                let r = rng.gen_range(0..live.len() - 1);
                if r >= pa {
                    r + 1
                } else {
                    r
                }
            };
            let (p, q) = (live[pa], live[pb]);
            // Same role convention as the greedy heuristic: the larger
            // block (smaller leading id on ties) keeps its neighborhood.
            let (i, j) = if blocks[p].len() > blocks[q].len()
                || (blocks[p].len() == blocks[q].len() && blocks[p][0] < blocks[q][0])
            {
                (p, q)
            } else {
                (q, p)
            };
            for &kk in &live {
                if kk == i || kk == j || qadj[j][kk] == qadj[i][kk] {
                    continue;
                }
                flips.push((blocks[j].clone(), blocks[kk].clone()));
                qadj[j][kk] = qadj[i][kk];
                qadj[kk][j] = qadj[i][kk];
            }
            let merged: Vec<u32> = blocks[i].iter().chain(blocks[j].iter()).copied().collect();
            blocks[i] = std::rc::Rc::new(merged);
            live.retain(|&x| x != j);
        }
    }
    // Single post-processing pass: expand quotient flips to vertex pairs.
    // Toggling keeps symmetric-difference semantics when a pair is flipped
    // by more than one record.
    for (a, b) in flips {
        for &x in a.iter() {
            for &y in b.iter() {
                edits.toggle(x, y);
            }
        }
    }
    result_from_edits(g, edits, Method::RandomPair, None)
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Outcome of checking an [`EditResult`] against its input graph.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    /// result_graph equals input △ edits.
    pub graph_matches: bool,
    /// The result graph is a cograph.
    pub cograph: bool,
    /// Witness P4 in the result graph, if any.
    pub p4_witness: Option<(u32, u32, u32, u32)>,
    /// cost equals |edits|.
    pub cost_matches: bool,
    /// Every module of the input survives in the result.
    pub module_preserving: bool,
    /// A broken module, if any.
    pub broken_module: Option<VertexSet>,
    /// Trace replay validity (None when the result carries no trace).
    pub trace_valid: Option<bool>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.graph_matches
            && self.cograph
            && self.cost_matches
            && self.module_preserving
            && self.trace_valid.unwrap_or(true)
    }
}

/// Checks cograph-ness, edit accounting, module preservation, and — when a
/// trace is attached — that the trace replays the edit set step by step
/// with disjoint θ slices and valid pairwise merges.
pub fn verify_edit_result(g: &Graph, r: &EditResult) -> Result<VerifyReport, EditError> {
    let recomputed = g.apply_edits(&r.edits)?;
    let graph_matches = recomputed == r.result_graph;
    let p4_witness = find_p4(&r.result_graph);
    let cograph = p4_witness.is_none();
    let cost_matches = r.cost == r.edits.len();
    let (module_preserving, broken_module) = check_module_preserving(g, &r.edits)?;
    let trace_valid = match &r.trace {
        None => None,
        Some(trace) => Some(trace_is_valid(g, &r.edits, trace)?),
    };
    Ok(VerifyReport {
        graph_matches,
        cograph,
        p4_witness,
        cost_matches,
        module_preserving,
        broken_module,
        trace_valid,
    })
}

fn trace_is_valid(g: &Graph, f: &EditSet, trace: &MergeTrace) -> Result<bool, EditError> {
    let mut used = EditSet::new();
    let mut current = g.clone();
    for step in &trace.steps {
        if !used.is_disjoint(&step.theta) {
            return Ok(false);
        }
        if step.left.union(&step.right) != step.result {
            return Ok(false);
        }
        let next = current.apply_edits(&step.theta)?;
        if !step.theta.is_empty() {
            let spec = match MergeSpec::new(vec![step.left.clone(), step.right.clone()]) {
                Ok(s) => s,
                Err(_) => return Ok(false),
            };
            match validate_merge(&current, &next, &spec) {
                Ok(true) => {}
                Ok(false) => return Ok(false),
                Err(MergeError::UniverseMismatch(..)) => return Ok(false),
                Err(e) => return Err(e.into()),
            }
        }
        used = used.union(&step.theta);
        current = next;
    }
    if used.union(&trace.residual) != *f || !used.is_disjoint(&trace.residual) {
        return Ok(false);
    }
    current = current.apply_edits(&trace.residual)?;
    Ok(current == g.apply_edits(f)? && is_cograph(&current))
}
