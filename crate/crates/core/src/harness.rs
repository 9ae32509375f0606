//! Theorem-verification suites and the conjecture search over exhaustive,
//! file-provided and seeded random graph families.

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructors::{
    add_whisker, block_bar, glue_relabeled, paper_corpus, star_product, whiskered_star_product,
    CORPUS_NAMES,
};
use crate::cutsets::Budget;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::io::{encode_graph6, parse_graph6};
use crate::iso::{canonical_code, canonical_graph, is_isomorphic, CanonicalCode};
use crate::properties::{AccessibilityCertificate, Checker, SuTrace};

/// Largest order the in-repo generator accepts.
pub const MAX_GENERATED_N: usize = 8;

/// Per-graph time budget when nothing else is configured.
pub const DEFAULT_BUDGET_SECS: f64 = 5.0;

/// Environment variable overriding the per-graph budget, in seconds.
pub const BUDGET_ENV: &str = "BEI_BUDGET_SECS";

/// All graphs on exactly `n` vertices up to isomorphism, each relabeled to
/// its canonical form on `1..=n` and listed in canonical-code order.
///
/// Built by adding a vertex with every possible neighborhood to each graph
/// one size down and discarding repeats by canonical code. Every graph on
/// `n` vertices minus its last vertex is some graph one size down, so
/// nothing is missed.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_GENERATED_N {
        return Err(Error::InvalidArgument(format!(
            "the generator stops at {MAX_GENERATED_N} vertices; use a graph6 file"
        )));
    }
    let mut level = vec![Graph::empty(0)];
    for k in 0..n {
        let k = k as Vertex;
        let grown: Vec<(CanonicalCode, Graph)> = level
            .par_iter()
            .flat_map_iter(|g| {
                let edges = g.edges();
                (0u64..1 << k).map(move |mask| {
                    let mut es = edges.clone();
                    es.extend(
                        (0..k)
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| (i + 1, k + 1)),
                    );
                    let h = Graph::new(1..=k + 1, es).unwrap();
                    (canonical_code(&h), h)
                })
            })
            .collect();
        let mut seen = HashSet::new();
        let mut next: Vec<(CanonicalCode, Graph)> = grown
            .into_iter()
            .filter(|(c, _)| seen.insert(c.clone()))
            .collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| canonical_graph(&g)).collect();
    }
    Ok(level)
}

/// Connected graphs on exactly `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    Ok(all_graphs(n)?
        .into_iter()
        .filter(Graph::is_connected)
        .collect())
}

/// Vertex connectivity: the fewest vertices whose removal disconnects the
/// graph or leaves one vertex. `K_n` gives `n - 1`.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.n();
    if n <= 1 || !g.is_connected() {
        return 0;
    }
    if g.is_complete() {
        return n - 1;
    }
    let vs = g.vertices();
    for k in 1..n - 1 {
        let mut found = false;
        for_each_subset(n, k, |idx| {
            if found {
                return;
            }
            let s: Vec<Vertex> = idx.iter().map(|&i| vs[i]).collect();
            if !g.delete(&s).unwrap().is_connected() {
                found = true;
            }
        });
        if found {
            return k;
        }
    }
    n - 1
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum FamilySource {
    /// Connected graphs on `1..=max_n` vertices from the in-repo generator.
    ExhaustiveConnected {
        max_n: usize,
    },
    Graph6File {
        path: PathBuf,
    },
    RandomBlockTrees {
        count: usize,
        max_n: usize,
        seed: u64,
    },
    /// `whiskered_star_product(r, r, r)` for `r = 2..=r_max`.
    StarFamily {
        r_max: u32,
    },
    Corpus,
    Explicit {
        graphs: Vec<Graph>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFilters {
    #[serde(default)]
    pub connected_only: bool,
    pub min_n: Option<usize>,
    pub max_n: Option<usize>,
    pub min_blocks: Option<usize>,
    pub max_blocks: Option<usize>,
}

impl FamilyFilters {
    pub fn accepts(&self, g: &Graph) -> bool {
        if self.connected_only && !g.is_connected() {
            return false;
        }
        if self.min_n.is_some_and(|k| g.n() < k) || self.max_n.is_some_and(|k| g.n() > k) {
            return false;
        }
        if self.min_blocks.is_some() || self.max_blocks.is_some() {
            let b = g.blocks().blocks.len();
            if self.min_blocks.is_some_and(|k| b < k) || self.max_blocks.is_some_and(|k| b > k) {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub source: FamilySource,
    #[serde(default)]
    pub filters: FamilyFilters,
}

impl FamilySpec {
    pub fn new(source: FamilySource) -> FamilySpec {
        FamilySpec {
            source,
            filters: FamilyFilters::default(),
        }
    }

    pub fn exhaustive_connected(max_n: usize) -> FamilySpec {
        FamilySpec::new(FamilySource::ExhaustiveConnected { max_n })
    }

    pub fn random_block_trees(count: usize, max_n: usize, seed: u64) -> FamilySpec {
        FamilySpec::new(FamilySource::RandomBlockTrees { count, max_n, seed })
    }

    pub fn corpus() -> FamilySpec {
        FamilySpec::new(FamilySource::Corpus)
    }

    pub fn graph6_file(path: impl Into<PathBuf>) -> FamilySpec {
        FamilySpec::new(FamilySource::Graph6File { path: path.into() })
    }

    pub fn with_filters(mut self, filters: FamilyFilters) -> FamilySpec {
        self.filters = filters;
        self
    }

    /// The members, in a fixed order determined by the family description alone.
    pub fn materialize(&self) -> Result<Vec<Graph>> {
        let graphs = match &self.source {
            FamilySource::ExhaustiveConnected { max_n } => {
                let mut out = Vec::new();
                for n in 1..=*max_n {
                    out.extend(connected_graphs(n)?);
                }
                out
            }
            FamilySource::Graph6File { path } => parse_graph6(&std::fs::read_to_string(path)?)?,
            FamilySource::RandomBlockTrees { count, max_n, seed } => {
                generate_block_trees(*count, *max_n, *seed)
            }
            FamilySource::StarFamily { r_max } => (2..=*r_max)
                .map(|r| whiskered_star_product(r, r, r))
                .collect::<Result<_>>()?,
            FamilySource::Corpus => {
                let c = paper_corpus();
                CORPUS_NAMES.iter().map(|k| c[k].clone()).collect()
            }
            FamilySource::Explicit { graphs } => graphs.clone(),
        };
        Ok(graphs
            .into_iter()
            .filter(|g| self.filters.accepts(g))
            .collect())
    }
}

/// Small 2-connected pieces used by [`generate_block_trees`].
fn block_shapes() -> Vec<Graph> {
    vec![
        Graph::complete(2),
        Graph::complete(3),
        Graph::complete(4),
        Graph::complete(5),
        Graph::cycle(4),
        star_product(3, 2, 2).unwrap(),
        star_product(3, 3, 2).unwrap(),
        star_product(3, 3, 3).unwrap(),
    ]
}

/// Random connected graphs whose block graph is a tree, assembled from
/// cliques `K_2..K_5`, `C_4` and small star-product cores. Each new block is
/// glued at a vertex that so far lies in a single block. Deterministic in
/// `seed`; every output has at most `max_n` vertices.
pub fn generate_block_trees(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = block_shapes();
    let mut out = Vec::with_capacity(count);
    if max_n == 0 {
        return out;
    }
    for _ in 0..count {
        let target = rng.gen_range(1..=max_n);
        let fitting: Vec<&Graph> = shapes.iter().filter(|s| s.n() <= target).collect();
        let mut g = match fitting.choose(&mut rng) {
            Some(s) => (*s).clone(),
            None => Graph::empty(1),
        };
        // Vertices still inside exactly one block.
        let mut open: Vec<Vertex> = g.vertices().to_vec();
        loop {
            let room = target - g.n();
            let fitting: Vec<&Graph> = shapes.iter().filter(|s| s.n() - 1 <= room).collect();
            if fitting.is_empty() || open.is_empty() || rng.gen_bool(0.15) {
                break;
            }
            let shape = fitting.choose(&mut rng).unwrap();
            let at_pos = rng.gen_range(0..open.len());
            let at = open.swap_remove(at_pos);
            let pivot = shape.vertices()[rng.gen_range(0..shape.n())];
            let (h, map) = glue_relabeled(&g, at, shape, pivot).unwrap();
            open.extend(map.iter().filter(|(&k, _)| k != pivot).map(|(_, &v)| v));
            g = h;
        }
        out.push(g);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accessibility: Option<AccessibilityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_unmixedness: Option<SuTrace>,
}

/// A graph where a checked statement failed, or a conjecture candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub graph: Graph,
    pub graph6: String,
    pub expected: String,
    pub got: String,
    pub certificates: Certificates,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub graph: Graph,
    pub reason: String,
    /// Skipped for running out of time or enumeration budget, rather than
    /// for failing a hypothesis.
    #[serde(default)]
    pub budget: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub examined: usize,
    pub skipped: Vec<Skip>,
    pub violations: Vec<Violation>,
    /// Accessible graphs that are not strongly unmixed. Only the conjecture
    /// search fills this; a non-empty list is a discovery, not a defect.
    pub candidates: Vec<Violation>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn budget_skips(&self) -> usize {
        self.skipped.iter().filter(|s| s.budget).count()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub per_graph: Duration,
    pub cutset_budget: Budget,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            per_graph: Duration::from_secs_f64(DEFAULT_BUDGET_SECS),
            cutset_budget: Budget::default(),
        }
    }
}

impl SuiteOptions {
    /// Defaults, with the per-graph budget taken from `BEI_BUDGET_SECS` when
    /// it holds a positive number.
    pub fn from_env() -> SuiteOptions {
        let mut o = SuiteOptions::default();
        if let Some(s) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|s| *s > 0.0)
        {
            o.per_graph = Duration::from_secs_f64(s);
        }
        o
    }

    pub fn with_secs(mut self, secs: f64) -> SuiteOptions {
        self.per_graph = Duration::from_secs_f64(secs);
        self
    }
}

#[derive(Default)]
struct Outcome {
    violations: Vec<Violation>,
    candidates: Vec<Violation>,
    skip: Option<String>,
    budget_skip: bool,
}

fn violation(g: &Graph, expected: &str, got: &str, certificates: Certificates) -> Violation {
    Violation {
        graph: g.clone(),
        graph6: encode_graph6(&g.compact()),
        expected: expected.into(),
        got: got.into(),
        certificates,
    }
}

fn certs(c: &mut Checker, g: &Graph) -> Result<Certificates> {
    Ok(Certificates {
        accessibility: Some(c.accessible(g)?),
        strong_unmixedness: Some(SuTrace::from_node(&c.strongly_unmixed(g)?)),
    })
}

/// Checks strong unmixedness implies accessibility for `g`.
fn chain(c: &mut Checker, g: &Graph, out: &mut Vec<Violation>) -> Result<(bool, bool)> {
    let acc = c.is_accessible(g)?;
    let su = c.is_strongly_unmixed(g)?;
    if su && !acc {
        out.push(violation(
            g,
            "strongly unmixed implies accessible",
            "strongly unmixed but not accessible",
            certs(c, g)?,
        ));
    }
    Ok((acc, su))
}

fn sort_key(g: &Graph) -> (CanonicalCode, Vec<Vertex>, Vec<(Vertex, Vertex)>) {
    (canonical_code(g), g.vertices().to_vec(), g.edges())
}

/// Runs `check` on every item in parallel, one checker per worker, with a
/// fresh deadline per item. Budget errors become skips; any other error
/// aborts the suite. Results are merged in canonical-key order.
fn run_suite<T: Sync>(
    suite: &str,
    items: &[T],
    opts: &SuiteOptions,
    graph_of: impl Fn(&T) -> Graph + Sync,
    check: impl Fn(&mut Checker, &T) -> Result<Outcome> + Sync,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let results: Vec<Result<Outcome>> = items
        .par_iter()
        .map_init(
            || Checker::new(opts.cutset_budget),
            |c, item| {
                c.set_deadline(Some(Instant::now() + opts.per_graph));
                match check(c, item) {
                    Err(e) if e.is_budget() || matches!(e, Error::Timeout) => Ok(Outcome {
                        skip: Some(e.to_string()),
                        budget_skip: true,
                        ..Outcome::default()
                    }),
                    r => r,
                }
            },
        )
        .collect();
    let mut report = SuiteReport {
        suite: suite.into(),
        examined: 0,
        skipped: Vec::new(),
        violations: Vec::new(),
        candidates: Vec::new(),
        elapsed_ms: 0,
    };
    for (item, r) in items.iter().zip(results) {
        let o = r?;
        match o.skip {
            Some(reason) => report.skipped.push(Skip {
                graph: graph_of(item),
                reason,
                budget: o.budget_skip,
            }),
            None => report.examined += 1,
        }
        report.violations.extend(o.violations);
        report.candidates.extend(o.candidates);
    }
    report.skipped.sort_by_cached_key(|s| sort_key(&s.graph));
    report.violations.sort_by_cached_key(|v| sort_key(&v.graph));
    report.candidates.sort_by_cached_key(|v| sort_key(&v.graph));
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// For every graph: strongly unmixed exactly when unmixed with every `B̄`
/// strongly unmixed, and accessible exactly when unmixed with every `B̄`
/// accessible.
pub fn verify_block_theorem(family: &FamilySpec, opts: &SuiteOptions) -> Result<SuiteReport> {
    let graphs = family.materialize()?;
    run_suite("block_theorem", &graphs, opts, Graph::clone, |c, g| {
        let mut o = Outcome::default();
        let (acc, su) = chain(c, g, &mut o.violations)?;
        let (unmixed, _) = c.unmixed(g)?;
        let mut all_acc = true;
        let mut all_su = true;
        for b in g.blocks().blocks {
            let bar = block_bar(g, &b)?;
            let (a, s) = chain(c, &bar, &mut o.violations)?;
            all_acc &= a;
            all_su &= s;
        }
        let want_su = unmixed && all_su;
        let want_acc = unmixed && all_acc;
        if su != want_su {
            o.violations.push(violation(
                g,
                &format!("strongly unmixed = {want_su} (unmixed and every block closure)"),
                &format!("strongly unmixed = {su}"),
                certs(c, g)?,
            ));
        }
        if acc != want_acc {
            o.violations.push(violation(
                g,
                &format!("accessible = {want_acc} (unmixed and every block closure)"),
                &format!("accessible = {acc}"),
                certs(c, g)?,
            ));
        }
        Ok(o)
    })
}

/// Triples checked for strong unmixedness of the whiskered star product
/// unless others are given.
pub const DEFAULT_STAR_TRIPLES: &[(u32, u32, u32)] = &[(3, 2, 2), (4, 3, 3), (5, 3, 3)];

/// `whiskered_star_product(r, r, r)` is accessible and strongly unmixed for
/// `r = 2..=r_max`, and the whiskered `K_m ⋆_r K_n` is strongly unmixed for
/// each extra triple.
pub fn verify_star_theorem(
    r_max: u32,
    triples: &[(u32, u32, u32)],
    opts: &SuiteOptions,
) -> Result<SuiteReport> {
    if r_max < 2 {
        return Err(Error::InvalidArgument("r_max must be at least 2".into()));
    }
    let mut items: Vec<(u32, u32, u32, bool)> = (2..=r_max).map(|r| (r, r, r, true)).collect();
    items.extend(triples.iter().map(|&(m, n, r)| (m, n, r, false)));
    let graphs = items
        .iter()
        .map(|&(m, n, r, _)| whiskered_star_product(m, n, r))
        .collect::<Result<Vec<_>>>()?;
    let work: Vec<(&Graph, bool)> = graphs.iter().zip(items.iter().map(|i| i.3)).collect();
    run_suite(
        "star_theorem",
        &work,
        opts,
        |w| w.0.clone(),
        |c, &(g, square)| {
            let mut o = Outcome::default();
            let (acc, su) = chain(c, g, &mut o.violations)?;
            if !su || (square && !acc) {
                let expected = if square {
                    "accessible and strongly unmixed"
                } else {
                    "strongly unmixed"
                };
                o.violations.push(violation(
                    g,
                    expected,
                    &format!("accessible = {acc}, strongly unmixed = {su}"),
                    certs(c, g)?,
                ));
            }
            Ok(o)
        },
    )
}

/// Non-complete `r`-regular graphs of vertex connectivity at least `r`.
pub fn regular_candidates(graphs: &[Graph], r: usize) -> Vec<Graph> {
    graphs
        .iter()
        .filter(|b| {
            b.n() > 0
                && !b.is_complete()
                && b.vertices().iter().all(|&v| b.degree(v).unwrap() == r)
                && vertex_connectivity(b) >= r
        })
        .cloned()
        .collect()
}

/// For each non-complete `r`-regular `r`-connected `B` in the family, every
/// placement `W ⊆ V(B)` of whiskers is tried. An accessible result that is
/// not the whiskered `K_r ⋆ K_r` is a violation, and so is an inaccessible
/// whiskered `K_r ⋆ K_r`.
pub fn verify_regular_classification(
    family: &FamilySpec,
    r: usize,
    opts: &SuiteOptions,
) -> Result<SuiteReport> {
    if r < 2 {
        return Err(Error::InvalidArgument("r must be at least 2".into()));
    }
    let target = whiskered_star_product(r as u32, r as u32, r as u32)?;
    let core = star_product(r as u32, r as u32, r as u32)?;
    let graphs = regular_candidates(&family.materialize()?, r);
    run_suite(
        "regular_classification",
        &graphs,
        opts,
        Graph::clone,
        |c, b| {
            let mut o = Outcome::default();
            let is_core = is_isomorphic(b, &core);
            let vs = b.vertices();
            for mask in 0u64..1 << vs.len() {
                let mut g = b.clone();
                for (i, &v) in vs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        g = add_whisker(&g, v)?;
                    }
                }
                let (acc, _) = chain(c, &g, &mut o.violations)?;
                if acc && !is_isomorphic(&g, &target) {
                    o.violations.push(violation(
                        &g,
                        "accessible only for the whiskered K_r * K_r",
                        "accessible",
                        certs(c, &g)?,
                    ));
                }
            }
            if is_core && !c.is_accessible(&target)? {
                o.violations.push(violation(
                    &target,
                    "accessible",
                    "not accessible",
                    certs(c, &target)?,
                ));
            }
            Ok(o)
        },
    )
}

/// Reports accessible graphs that are not strongly unmixed as candidates,
/// and strongly unmixed graphs that are not accessible as violations.
pub fn search_conjecture(family: &FamilySpec, opts: &SuiteOptions) -> Result<SuiteReport> {
    let graphs = family.materialize()?;
    run_suite("conjecture", &graphs, opts, Graph::clone, |c, g| {
        let mut o = Outcome::default();
        let (acc, su) = chain(c, g, &mut o.violations)?;
        if acc && !su {
            o.candidates.push(violation(
                g,
                "accessible implies strongly unmixed",
                "accessible but not strongly unmixed",
                certs(c, g)?,
            ));
        }
        Ok(o)
    })
}

/// `G` and `H` with the cut vertices at which they are split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingPair {
    pub g: Graph,
    pub v: Vertex,
    pub h: Graph,
    pub w: Vertex,
}

impl GluingPair {
    /// Splits `g` and `h` at the neighbors of the given leaves, so that the
    /// leaf is one side of the split.
    pub fn at_leaves(g: Graph, leaf_g: Vertex, h: Graph, leaf_h: Vertex) -> Result<GluingPair> {
        let hub = |x: &Graph, l: Vertex| -> Result<Vertex> {
            match x.neighbors(l)?.as_slice() {
                [u] => Ok(*u),
                _ => Err(Error::InvalidArgument(format!("{l} is not a leaf"))),
            }
        };
        Ok(GluingPair {
            v: hub(&g, leaf_g)?,
            w: hub(&h, leaf_h)?,
            g,
            h,
        })
    }
}

/// Every side `G[V(G_i) ∪ {v}]` of every split of `g` at `v`: a nonempty
/// proper union of components of `g \ v`, plus `v`.
fn sides(g: &Graph, v: Vertex) -> Result<Vec<Graph>> {
    let comps = g.delete(&[v])?.connected_components();
    let k = comps.len();
    let mut out = Vec::new();
    for mask in 1u64..(1 << k) - 1 {
        let mut s: Vec<Vertex> = vec![v];
        for (i, c) in comps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.extend(c);
            }
        }
        s.sort_unstable();
        out.push(g.induced(&s)?);
    }
    Ok(out)
}

/// All `F_ij`: a side of `g` at `v` glued to a side of `h` at `w`. The
/// merged vertex keeps the label `v`; the rest of `h` moves above `max(g)`.
pub fn gluing_products(g: &Graph, v: Vertex, h: &Graph, w: Vertex) -> Result<Vec<Graph>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for gi in sides(g, v)? {
        for hj in sides(h, w)? {
            let (f, _) = glue_relabeled(&gi, v, &hj, w)?;
            if seen.insert((f.vertices().to_vec(), f.edges())) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Hypotheses of the gluing theorem that fail for `p`; empty when it
/// applies.
pub fn gluing_hypothesis_failures(c: &mut Checker, p: &GluingPair) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for (name, x, at) in [("G", &p.g, p.v), ("H", &p.h, p.w)] {
        if !x.is_connected() {
            bad.push(format!("{name} is not connected"));
            continue;
        }
        if x.cut_vertices().binary_search(&at).is_err() {
            bad.push(format!("{at} is not a cut vertex of {name}"));
            continue;
        }
        if !c.unmixed(x)?.0 {
            bad.push(format!("J_{name} is not unmixed"));
        }
        if !c.unmixed(&x.delete(&[at])?)?.0 {
            bad.push(format!("J_{{{name} \\ {at}}} is not unmixed"));
        }
    }
    Ok(bad)
}

/// For every pair meeting the hypotheses and every `F_ij`: accessible when
/// `G` and `H` are, strongly unmixed when `G` and `H` are. Pairs failing the
/// hypotheses are skipped with the reasons.
pub fn verify_gluing_theorem(pairs: &[GluingPair], opts: &SuiteOptions) -> Result<SuiteReport> {
    let key = |p: &GluingPair| p.g.union(&p.h.relabel(&shift(&p.h, &p.g)).unwrap());
    run_suite("gluing_theorem", pairs, opts, key, |c, p| {
        let mut o = Outcome::default();
        let bad = gluing_hypothesis_failures(c, p)?;
        if !bad.is_empty() {
            o.skip = Some(format!("hypotheses fail: {}", bad.join("; ")));
            return Ok(o);
        }
        let (ga, gs) = chain(c, &p.g, &mut o.violations)?;
        let (ha, hs) = chain(c, &p.h, &mut o.violations)?;
        for f in gluing_products(&p.g, p.v, &p.h, p.w)? {
            let (fa, fs) = chain(c, &f, &mut o.violations)?;
            if ga && ha && !fa {
                o.violations
                    .push(violation(&f, "accessible", "not accessible", certs(c, &f)?));
            }
            if gs && hs && !fs {
                o.violations.push(violation(
                    &f,
                    "strongly unmixed",
                    "not strongly unmixed",
                    certs(c, &f)?,
                ));
            }
        }
        Ok(o)
    })
}

/// Moves `h` above the labels of `g`; only used to key skipped pairs.
fn shift(h: &Graph, g: &Graph) -> std::collections::BTreeMap<Vertex, Vertex> {
    let base = g.max_label().unwrap_or(0);
    h.vertices().iter().map(|&u| (u, u + base)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::corpus_graph;

    #[test]
    fn generator_counts() {
        let all: Vec<usize> = (0..=6).map(|n| all_graphs(n).unwrap().len()).collect();
        assert_eq!(all, vec![1, 1, 2, 4, 11, 34, 156]);
        let conn: Vec<usize> = (1..=6)
            .map(|n| connected_graphs(n).unwrap().len())
            .collect();
        assert_eq!(conn, vec![1, 1, 2, 6, 21, 112]);
        assert!(all_graphs(9).is_err());
    }

    #[test]
    fn connectivity() {
        assert_eq!(vertex_connectivity(&Graph::complete(4)), 3);
        assert_eq!(vertex_connectivity(&Graph::path(4)), 1);
        assert_eq!(vertex_connectivity(&Graph::cycle(6)), 2);
        assert_eq!(vertex_connectivity(&star_product(3, 3, 3).unwrap()), 3);
        assert_eq!(vertex_connectivity(&Graph::empty(2)), 0);
    }

    #[test]
    fn block_trees_are_deterministic_trees() {
        let a = generate_block_trees(30, 12, 7);
        assert_eq!(a, generate_block_trees(30, 12, 7));
        assert_ne!(a, generate_block_trees(30, 12, 8));
        for g in &a {
            assert!(g.n() <= 12 && g.is_connected());
            // The block graph is a tree when every cut vertex lies in
            // exactly two blocks.
            let d = g.blocks();
            for &v in &d.cut_vertices {
                let k = d.blocks.iter().filter(|b| b.contains(&v)).count();
                assert_eq!(k, 2, "{g:?}");
            }
            let bg = &d.block_graph;
            assert!(bg.is_connected() && bg.m() + 1 == bg.n());
        }
    }

    #[test]
    fn gluing_products_for_figures() {
        let g = corpus_graph("fig1a_G").unwrap();
        let h = corpus_graph("fig1b_H").unwrap();
        let f = corpus_graph("fig2b_F").unwrap();
        let p = GluingPair::at_leaves(g, 9, h, 6).unwrap();
        assert_eq!((p.v, p.w), (3, 4));
        let fs = gluing_products(&p.g, p.v, &p.h, p.w).unwrap();
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().any(|x| is_isomorphic(x, &f)));
    }

    #[test]
    fn small_suites() {
        let opts = SuiteOptions::default();
        let r = verify_block_theorem(&FamilySpec::corpus(), &opts).unwrap();
        assert!(r.passed() && r.examined == 7, "{r:?}");
        let r = search_conjecture(&FamilySpec::exhaustive_connected(5), &opts).unwrap();
        assert!(r.passed() && r.candidates.is_empty());
        assert_eq!(r.examined, 1 + 1 + 2 + 6 + 21);
        let r = verify_star_theorem(3, DEFAULT_STAR_TRIPLES, &opts).unwrap();
        assert!(r.passed() && r.examined == 5);
    }

    #[test]
    fn triangle_whisker_gluing() {
        let t = add_whisker(&Graph::complete(3), 1).unwrap();
        let p = GluingPair::at_leaves(t.clone(), 4, t, 4).unwrap();
        let r = verify_gluing_theorem(&[p], &SuiteOptions::default()).unwrap();
        assert!(
            r.passed() && r.examined == 1 && r.skipped.is_empty(),
            "{r:?}"
        );
    }
}
