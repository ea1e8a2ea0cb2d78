//! Text serialization for graphs, decomposition trees, edit sets, and merge
//! traces, plus the perturbed-cograph instance generator and the benchmark
//! harness.
//!
//! All formats are line-oriented plain text: small instances diff cleanly
//! against oracle outputs. A graph document is a header `n m` followed by
//! one `u v` line per edge; `#` starts a comment line. Trees use nested
//! parentheses with labels `S`/`P`/`PR` and leaves as vertex ids. Edit sets
//! are one `u v` pair per line, sorted.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cograph::{cotree_to_graph, Cotree, CographError};
use crate::editing::{
    brute_force_optimal_edit, exact_edit, heuristic_edit, heuristic_edit_randomized,
    random_pair_edit, EditError, EditResult, Method, TieBreak, BRUTE_FORCE_BOUND,
};
use crate::graph::{EditSet, Graph, VertexSet};
use crate::merge::{MergeStep, MergeTrace};
use crate::mod_decomp::{MDNode, ModuleKind};

/// A text-format error with the 1-based line it occurred on.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

// ---------------------------------------------------------------------------
// Graph documents
// ---------------------------------------------------------------------------

/// Parses a graph document: header `n m`, then `m` edge lines `u v`.
/// Comment (`#`) and blank lines are skipped. Rejects n = 0, malformed
/// headers, out-of-range endpoints, self-loops, duplicate edges, and edge
/// count mismatches, each with its line number.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(hline, "malformed header: expected `n m`"))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(hline, "malformed header: expected `n m`"))?;
    if it.next().is_some() {
        return Err(err(hline, "malformed header: trailing tokens"));
    }
    if n == 0 {
        return Err(err(hline, "graph must have at least one vertex"));
    }
    let mut g = Graph::new(n);
    let mut count = 0;
    for (lno, line) in lines {
        let mut it = line.split_whitespace();
        let parse_endpoint = |t: Option<&str>| -> Result<u32, ParseError> {
            t.and_then(|t| t.parse().ok())
                .ok_or_else(|| err(lno, "malformed edge line: expected `u v`"))
        };
        let u = parse_endpoint(it.next())?;
        let v = parse_endpoint(it.next())?;
        if it.next().is_some() {
            return Err(err(lno, "malformed edge line: trailing tokens"));
        }
        if u as usize >= n || v as usize >= n {
            return Err(err(lno, format!("endpoint out of range (n = {n})")));
        }
        if u == v {
            return Err(err(lno, format!("self-loop on vertex {u}")));
        }
        if g.has_edge(u, v) {
            return Err(err(lno, format!("duplicate edge {u} {v}")));
        }
        g.set_edge(u, v, true);
        count += 1;
    }
    if count != m {
        return Err(err(1, format!("header announces {m} edges, found {count}")));
    }
    Ok(g)
}

/// Serializes a graph as a document with lexicographically sorted edges.
pub fn serialize_graph(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.vertex_count(), edges.len());
    for (u, v) in edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

// ---------------------------------------------------------------------------
// Decomposition trees
// ---------------------------------------------------------------------------

/// Serializes a decomposition tree node: leaves as ids, inner nodes as
/// `S(..)`, `P(..)`, or `PR(..)` with children in stored (min-id) order.
pub fn serialize_mdtree(node: &MDNode) -> String {
    let mut out = String::new();
    write_node(node, &mut out);
    out
}

fn write_node(node: &MDNode, out: &mut String) {
    match node.kind {
        ModuleKind::Leaf => {
            write!(out, "{}", node.vertices.min_id()).unwrap();
        }
        kind => {
            out.push_str(match kind {
                ModuleKind::Series => "S",
                ModuleKind::Parallel => "P",
                ModuleKind::Prime => "PR",
                ModuleKind::Leaf => unreachable!(),
            });
            out.push('(');
            for (i, c) in node.children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_node(c, out);
            }
            out.push(')');
        }
    }
}

/// Parses the nested-parentheses tree format back into a node.
pub fn parse_mdtree(text: &str) -> Result<MDNode, ParseError> {
    let bytes: Vec<char> = text.trim().chars().collect();
    let mut pos = 0;
    let node = parse_node(&bytes, &mut pos)?;
    if pos != bytes.len() {
        return Err(err(1, format!("trailing input at offset {pos}")));
    }
    Ok(node)
}

fn parse_node(s: &[char], pos: &mut usize) -> Result<MDNode, ParseError> {
    let bad = |pos: usize, what: &str| err(1, format!("offset {pos}: {what}"));
    match s.get(*pos) {
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while s.get(*pos).is_some_and(char::is_ascii_digit) {
                *pos += 1;
            }
            let id: u32 = s[start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| bad(start, "leaf id too large"))?;
            Ok(MDNode {
                vertices: VertexSet::singleton(id),
                kind: ModuleKind::Leaf,
                children: Vec::new(),
            })
        }
        Some('S') | Some('P') => {
            let kind = if s[*pos] == 'S' {
                *pos += 1;
                ModuleKind::Series
            } else if s.get(*pos + 1) == Some(&'R') {
                *pos += 2;
                ModuleKind::Prime
            } else {
                *pos += 1;
                ModuleKind::Parallel
            };
            if s.get(*pos) != Some(&'(') {
                return Err(bad(*pos, "expected `(`"));
            }
            *pos += 1;
            let mut children = vec![parse_node(s, pos)?];
            while s.get(*pos) == Some(&',') {
                *pos += 1;
                children.push(parse_node(s, pos)?);
            }
            if s.get(*pos) != Some(&')') {
                return Err(bad(*pos, "expected `,` or `)`"));
            }
            *pos += 1;
            if children.len() < 2 {
                return Err(bad(*pos, "inner node needs at least 2 children"));
            }
            let vertices = children
                .iter()
                .fold(VertexSet::new(), |acc, c| acc.union(&c.vertices));
            Ok(MDNode { vertices, kind, children })
        }
        _ => Err(bad(*pos, "expected a leaf id or a label S/P/PR")),
    }
}

// ---------------------------------------------------------------------------
// Edit sets and merge traces
// ---------------------------------------------------------------------------

/// One `u v` pair per line, in normalized sorted order; the empty string is
/// the empty set.
pub fn serialize_edit_set(f: &EditSet) -> String {
    let mut out = String::new();
    for &(u, v) in f.iter() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Parses an edit-set document; rejects self-pairs and duplicates with line
/// numbers.
pub fn parse_edit_set(text: &str) -> Result<EditSet, ParseError> {
    let mut f = EditSet::new();
    for (i, line) in text.lines().enumerate() {
        let lno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse_endpoint = |t: Option<&str>| -> Result<u32, ParseError> {
            t.and_then(|t| t.parse().ok())
                .ok_or_else(|| err(lno, "malformed pair line: expected `u v`"))
        };
        let u = parse_endpoint(it.next())?;
        let v = parse_endpoint(it.next())?;
        if it.next().is_some() {
            return Err(err(lno, "malformed pair line: trailing tokens"));
        }
        if u == v {
            return Err(err(lno, format!("self-pair on vertex {u}")));
        }
        if !f.insert(u, v).unwrap() {
            return Err(err(lno, format!("duplicate pair {u} {v}")));
        }
    }
    Ok(f)
}

fn fmt_vertex_set(s: &VertexSet) -> String {
    s.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_pairs(f: &EditSet) -> String {
    f.iter()
        .map(|&(u, v)| format!("{u}:{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Serializes a merge trace as one `step` record per line plus a final
/// `residual` line. Intermediate graphs are not serialized; they are
/// recoverable by replaying the θ slices.
pub fn serialize_trace(trace: &MergeTrace) -> String {
    let mut out = String::new();
    for s in &trace.steps {
        writeln!(
            out,
            "step left={} right={} result={} host={} theta={}",
            fmt_vertex_set(&s.left),
            fmt_vertex_set(&s.right),
            fmt_vertex_set(&s.result),
            fmt_vertex_set(&s.host_prime),
            fmt_pairs(&s.theta),
        )
        .unwrap();
    }
    writeln!(out, "residual={}", fmt_pairs(&trace.residual)).unwrap();
    out
}

fn parse_id_list(lno: usize, text: &str) -> Result<VertexSet, ParseError> {
    if text.is_empty() {
        return Ok(VertexSet::new());
    }
    text.split(',')
        .map(|t| t.parse().map_err(|_| err(lno, format!("bad vertex id `{t}`"))))
        .collect::<Result<Vec<u32>, _>>()
        .map(VertexSet::from_vec)
}

fn parse_pair_list(lno: usize, text: &str) -> Result<EditSet, ParseError> {
    let mut f = EditSet::new();
    if text.is_empty() {
        return Ok(f);
    }
    for t in text.split(',') {
        let (u, v) = t
            .split_once(':')
            .ok_or_else(|| err(lno, format!("bad pair `{t}`")))?;
        let u: u32 = u.parse().map_err(|_| err(lno, format!("bad pair `{t}`")))?;
        let v: u32 = v.parse().map_err(|_| err(lno, format!("bad pair `{t}`")))?;
        if u == v {
            return Err(err(lno, format!("self-pair `{t}`")));
        }
        f.insert(u, v).unwrap();
    }
    Ok(f)
}

/// Parses a serialized merge trace (without intermediate graphs).
pub fn parse_trace(text: &str) -> Result<MergeTrace, ParseError> {
    let mut steps = Vec::new();
    let mut residual = None;
    for (i, line) in text.lines().enumerate() {
        let lno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("residual=") {
            if residual.is_some() {
                return Err(err(lno, "duplicate residual line"));
            }
            residual = Some(parse_pair_list(lno, rest)?);
            continue;
        }
        let rest = line
            .strip_prefix("step ")
            .ok_or_else(|| err(lno, "expected `step` or `residual=` line"))?;
        let mut left = None;
        let mut right = None;
        let mut result = None;
        let mut host = None;
        let mut theta = None;
        for field in rest.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(lno, format!("bad field `{field}`")))?;
            match key {
                "left" => left = Some(parse_id_list(lno, value)?),
                "right" => right = Some(parse_id_list(lno, value)?),
                "result" => result = Some(parse_id_list(lno, value)?),
                "host" => host = Some(parse_id_list(lno, value)?),
                "theta" => theta = Some(parse_pair_list(lno, value)?),
                _ => return Err(err(lno, format!("unknown field `{key}`"))),
            }
        }
        let missing = || err(lno, "step line missing a field");
        steps.push(MergeStep {
            left: left.ok_or_else(missing)?,
            right: right.ok_or_else(missing)?,
            result: result.ok_or_else(missing)?,
            theta: theta.ok_or_else(missing)?,
            host_prime: host.ok_or_else(missing)?,
        });
    }
    Ok(MergeTrace {
        steps,
        intermediates: None,
        residual: residual.ok_or_else(|| err(1, "missing residual line"))?,
    })
}

// ---------------------------------------------------------------------------
// Instance generator
// ---------------------------------------------------------------------------

/// Errors raised by the instance generator.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("need at least one vertex")]
    ZeroVertices,
    #[error("k = {k} exceeds the {max} vertex pairs available")]
    KOutOfRange { k: usize, max: usize },
}

/// Generates a random cograph on `n` vertices (uniform recursive split with
/// random arity and alternating labels) and perturbs it with `k` distinct
/// uniformly random pair flips. Returns the perturbed graph, the planted
/// cotree, and the applied flips. Fully determined by `seed`.
pub fn generate_perturbed_cograph(
    n: usize,
    k: usize,
    seed: u64,
) -> Result<(Graph, Cotree, EditSet), GenError> {
    if n == 0 {
        return Err(GenError::ZeroVertices);
    }
    let max = n * (n - 1) / 2;
    if k > max {
        return Err(GenError::KOutOfRange { k, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<u32> = (0..n as u32).collect();
    ids.shuffle(&mut rng);
    let root_kind = if rng.gen::<bool>() { ModuleKind::Series } else { ModuleKind::Parallel };
    let root = build_random_cotree(&ids, root_kind, &mut rng);
    let cotree = Cotree::from_node(root).expect("generated tree is a valid cotree");
    let base = cotree_to_graph(&cotree);

    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(max);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            pairs.push((u, v));
        }
    }
    let (chosen, _) = pairs.partial_shuffle(&mut rng, k);
    let flips: EditSet = chosen.iter().copied().collect();
    let perturbed = base.apply_edits(&flips).expect("flips are in range");
    Ok((perturbed, cotree, flips))
}

fn build_random_cotree(ids: &[u32], kind: ModuleKind, rng: &mut ChaCha8Rng) -> MDNode {
    if ids.len() == 1 {
        return MDNode {
            vertices: VertexSet::singleton(ids[0]),
            kind: ModuleKind::Leaf,
            children: Vec::new(),
        };
    }
    let arity = rng.gen_range(2..=ids.len());
    // A uniformly random composition of |ids| into `arity` positive parts.
    let mut cuts: Vec<usize> = (1..ids.len()).collect();
    let (chosen, _) = cuts.partial_shuffle(rng, arity - 1);
    let mut cuts: Vec<usize> = chosen.to_vec();
    cuts.sort_unstable();
    cuts.push(ids.len());
    let child_kind = match kind {
        ModuleKind::Series => ModuleKind::Parallel,
        _ => ModuleKind::Series,
    };
    let mut children = Vec::with_capacity(arity);
    let mut start = 0;
    for cut in cuts {
        children.push(build_random_cotree(&ids[start..cut], child_kind, rng));
        start = cut;
    }
    children.sort_by_key(|c| c.vertices.min_id());
    let vertices = children
        .iter()
        .fold(VertexSet::new(), |acc, c| acc.union(&c.vertices));
    MDNode { vertices, kind, children }
}

// ---------------------------------------------------------------------------
// Benchmark harness
// ---------------------------------------------------------------------------

/// Benchmark configuration, parsed from a key-value text file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub seed: u64,
}

/// Errors raised by the benchmark harness.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Edit(#[from] EditError),
    #[error(transparent)]
    Cograph(#[from] CographError),
    #[error("csv output failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses a config of the form:
///
/// ```text
/// n = 50, 100
/// k = 10
/// methods = greedy, random-pair
/// reps = 3
/// seed = 7
/// ```
///
/// `reps` defaults to 1, `seed` to 0, `methods` to greedy. Rejects the
/// brute-force method above its size bound and k values exceeding the pair
/// count of the smallest n.
pub fn parse_bench_config(text: &str) -> Result<BenchConfig, ParseError> {
    let mut ns = Vec::new();
    let mut ks = vec![0];
    let mut methods = vec![Method::Greedy];
    let mut reps = 1usize;
    let mut seed = 0u64;
    for (i, line) in text.lines().enumerate() {
        let lno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lno, "expected `key = value`"))?;
        let values: Vec<&str> = value.split(',').map(str::trim).collect();
        let parse_usizes = |vs: &[&str]| -> Result<Vec<usize>, ParseError> {
            vs.iter()
                .map(|t| t.parse().map_err(|_| err(lno, format!("bad number `{t}`"))))
                .collect()
        };
        match key.trim() {
            "n" => ns = parse_usizes(&values)?,
            "k" => ks = parse_usizes(&values)?,
            "reps" => reps = parse_usizes(&values)?[0],
            "seed" => {
                seed = values[0]
                    .parse()
                    .map_err(|_| err(lno, format!("bad seed `{}`", values[0])))?
            }
            "methods" => {
                methods = values
                    .iter()
                    .map(|t| match *t {
                        "bruteforce" => Ok(Method::BruteForce),
                        "exact" => Ok(Method::Exact),
                        "greedy" => Ok(Method::Greedy),
                        "greedy-rand" => Ok(Method::GreedyRand),
                        "random-pair" => Ok(Method::RandomPair),
                        other => Err(err(lno, format!("unknown method `{other}`"))),
                    })
                    .collect::<Result<_, _>>()?
            }
            other => return Err(err(lno, format!("unknown key `{other}`"))),
        }
    }
    if ns.is_empty() {
        return Err(err(1, "config must list at least one n"));
    }
    if reps == 0 {
        return Err(err(1, "reps must be positive"));
    }
    if methods.contains(&Method::BruteForce) {
        if let Some(&n) = ns.iter().find(|&&n| n > BRUTE_FORCE_BOUND) {
            return Err(err(
                1,
                format!("bruteforce cannot run at n = {n} (bound {BRUTE_FORCE_BOUND})"),
            ));
        }
    }
    for &n in &ns {
        if n == 0 {
            return Err(err(1, "n must be positive"));
        }
        let max = n * (n - 1) / 2;
        if let Some(&k) = ks.iter().find(|&&k| k > max) {
            return Err(err(1, format!("k = {k} exceeds the {max} pairs at n = {n}")));
        }
    }
    Ok(BenchConfig { ns, ks, methods, reps, seed })
}

/// One benchmark measurement.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub cost: usize,
    pub runtime_ms: f64,
    pub recovered_exact: bool,
}

/// The fixed CSV header; fields are never reordered.
pub const BENCH_CSV_HEADER: &str = "instance,n,k,method,cost,runtime_ms,recovered_exact";

/// Mean cost per method over a benchmark run.
#[derive(Clone, Debug)]
pub struct BenchSummary {
    pub mean_cost: Vec<(Method, f64)>,
}

/// Runs the benchmark: for every (n, k, repetition) a fresh planted
/// instance, timed once per method. Records stream to `out` as CSV rows in
/// a stable order; `recovered_exact` flags results identical to the planted
/// cograph.
pub fn run_benchmark(
    config: &BenchConfig,
    out: &mut dyn std::io::Write,
) -> Result<(Vec<BenchRecord>, BenchSummary), BenchError> {
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    let mut records = Vec::new();
    let mut instance_index = 0u64;
    for &n in &config.ns {
        for &k in &config.ks {
            for rep in 0..config.reps {
                let instance_seed = config
                    .seed
                    .wrapping_add(instance_index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                instance_index += 1;
                let (g, planted, _) = generate_perturbed_cograph(n, k, instance_seed)?;
                let planted_graph = cotree_to_graph(&planted);
                let instance = format!("n{n}-k{k}-r{rep}");
                for &method in &config.methods {
                    let start = Instant::now();
                    let result: EditResult = match method {
                        Method::BruteForce => brute_force_optimal_edit(&g)?,
                        Method::Exact => exact_edit(&g)?,
                        Method::Greedy => heuristic_edit(&g, TieBreak::Deterministic)?,
                        Method::GreedyRand => heuristic_edit_randomized(&g, instance_seed)?,
                        Method::RandomPair => random_pair_edit(&g, instance_seed)?,
                    };
                    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                    let record = BenchRecord {
                        instance: instance.clone(),
                        n,
                        k,
                        method,
                        cost: result.cost,
                        runtime_ms,
                        recovered_exact: result.result_graph == planted_graph,
                    };
                    writeln!(
                        out,
                        "{},{},{},{},{},{:.3},{}",
                        record.instance,
                        record.n,
                        record.k,
                        record.method.name(),
                        record.cost,
                        record.runtime_ms,
                        record.recovered_exact
                    )?;
                    records.push(record);
                }
            }
        }
    }
    let mut mean_cost = Vec::new();
    for &method in &config.methods {
        let costs: Vec<usize> = records
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.cost)
            .collect();
        if !costs.is_empty() {
            let mean = costs.iter().sum::<usize>() as f64 / costs.len() as f64;
            mean_cost.push((method, mean));
        }
    }
    Ok((records, BenchSummary { mean_cost }))
}
