//! Labeled simple graphs and their structural primitives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type Vertex = u32;

/// An immutable labeled simple graph.
///
/// Labels are arbitrary integers and survive deletion and clique-closing, so
/// derived graphs always talk about the vertices of the graph they came from.
/// Internally each vertex has a position in `0..n` following label order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct Graph {
    labels: Vec<Vertex>,
    nbrs: Vec<Vec<usize>>,
    adj: Vec<BitSet>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            vertices: g.labels.clone(),
            edges: g.edges(),
        }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.vertices, r.edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(V={:?}, E=[", self.labels)?;
        for (k, (u, v)) in self.edges().into_iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathSearch {
    Found(Vec<Vertex>),
    None,
    /// The node budget ran out before the search finished.
    Unknown,
}

pub const DEFAULT_PATH_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Each block sorted; blocks sorted lexicographically.
    pub blocks: Vec<Vec<Vertex>>,
    pub cut_vertices: Vec<Vertex>,
    /// Vertex `i` stands for `blocks[i]`; blocks sharing a vertex are adjacent.
    pub block_graph: Graph,
}

impl Graph {
    /// Builds a graph from a vertex list and an edge list. Edge endpoints are
    /// added as vertices; repeated edges collapse.
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Graph> {
        let mut vs: BTreeSet<Vertex> = vertices.into_iter().collect();
        let mut es = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            vs.insert(u);
            vs.insert(v);
            es.insert((u.min(v), u.max(v)));
        }
        let labels: Vec<Vertex> = vs.into_iter().collect();
        let n = labels.len();
        let mut nbrs = vec![Vec::new(); n];
        let mut adj = vec![BitSet::new(n); n];
        for (u, v) in es {
            let i = labels.binary_search(&u).unwrap();
            let j = labels.binary_search(&v).unwrap();
            nbrs[i].push(j);
            nbrs[j].push(i);
            adj[i].insert(j);
            adj[j].insert(i);
        }
        for l in &mut nbrs {
            l.sort_unstable();
        }
        Ok(Graph { labels, nbrs, adj })
    }

    pub fn from_edges(edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        Graph::new([], edges.iter().copied())
    }

    /// Complete graph on labels `1..=n`.
    pub fn complete(n: u32) -> Graph {
        let mut es = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                es.push((i, j));
            }
        }
        Graph::new(1..=n, es).unwrap()
    }

    /// Path `1-2-...-n`.
    pub fn path(n: u32) -> Graph {
        Graph::new(1..=n, (1..n).map(|i| (i, i + 1))).unwrap()
    }

    /// Cycle `1-2-...-n-1`, `n >= 3`.
    pub fn cycle(n: u32) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::new(1..=n, (1..=n).map(|i| (i, i % n + 1))).unwrap()
    }

    /// Edgeless graph on `1..=n`.
    pub fn empty(n: u32) -> Graph {
        Graph::new(1..=n, []).unwrap()
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.labels
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m());
        for (i, l) in self.nbrs.iter().enumerate() {
            for &j in l {
                if i < j {
                    out.push((self.labels[i], self.labels[j]));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.labels.binary_search(&v).is_ok()
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.labels.binary_search(&v).ok()
    }

    pub(crate) fn idx(&self, v: Vertex) -> Result<usize> {
        self.index_of(v).ok_or(Error::UnknownVertex(v))
    }

    pub fn label(&self, i: usize) -> Vertex {
        self.labels[i]
    }

    pub fn max_label(&self) -> Option<Vertex> {
        self.labels.last().copied()
    }

    /// Neighbor positions of position `i`, ascending.
    pub fn nbr_indices(&self, i: usize) -> &[usize] {
        &self.nbrs[i]
    }

    pub fn adj_bits(&self, i: usize) -> &BitSet {
        &self.adj[i]
    }

    /// Single-word adjacency masks, available when `n <= 64`.
    pub fn adj_words(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.nbrs
                .iter()
                .map(|l| l.iter().fold(0u64, |m, &j| m | (1 << j)))
                .collect(),
        )
    }

    pub fn neighbors(&self, v: Vertex) -> Result<Vec<Vertex>> {
        let i = self.idx(v)?;
        Ok(self.nbrs[i].iter().map(|&j| self.labels[j]).collect())
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        Ok(self.nbrs[self.idx(v)?].len())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adj[i].contains(j),
            _ => false,
        }
    }

    pub(crate) fn set_of(&self, s: &[Vertex]) -> Result<BitSet> {
        let mut b = BitSet::new(self.n());
        for &v in s {
            b.insert(self.idx(v)?);
        }
        Ok(b)
    }

    pub(crate) fn labels_of(&self, b: &BitSet) -> Vec<Vertex> {
        b.iter().map(|i| self.labels[i]).collect()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.nbrs.iter().all(|l| l.len() + 1 == n)
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Components of the graph restricted to positions in `alive`, each as a
    /// position set, ordered by smallest position.
    pub(crate) fn components_within(&self, alive: &BitSet) -> Vec<BitSet> {
        let n = self.n();
        let mut seen = BitSet::new(n);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in alive.iter() {
            if seen.contains(s) {
                continue;
            }
            let mut comp = BitSet::new(n);
            seen.insert(s);
            comp.insert(s);
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.nbrs[u] {
                    if alive.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest label.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        self.components_within(&BitSet::full(self.n()))
            .iter()
            .map(|c| self.labels_of(c))
            .collect()
    }

    pub fn component_count(&self) -> usize {
        self.components_within(&BitSet::full(self.n())).len()
    }

    /// Articulation points, ascending.
    pub fn cut_vertices(&self) -> Vec<Vertex> {
        self.blocks().cut_vertices
    }

    /// Block decomposition via an iterative Tarjan traversal. Isolated
    /// vertices become singleton blocks and bridges become two-vertex blocks.
    pub fn blocks(&self) -> BlockDecomposition {
        let n = self.n();
        const UNSEEN: usize = usize::MAX;
        let mut disc = vec![UNSEEN; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut edge_stack: Vec<(usize, usize)> = Vec::new();
        let mut time = 0;

        for root in 0..n {
            if disc[root] != UNSEEN {
                continue;
            }
            if self.nbrs[root].is_empty() {
                disc[root] = time;
                time += 1;
                blocks.push(vec![root]);
                continue;
            }
            let mut root_children = 0;
            // frame: (vertex, parent, next neighbor slot)
            let mut frames: Vec<(usize, usize, usize)> = vec![(root, UNSEEN, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (u, parent, ref mut slot)) = frames.last_mut() {
                if *slot < self.nbrs[u].len() {
                    let w = self.nbrs[u][*slot];
                    *slot += 1;
                    if disc[w] == UNSEEN {
                        edge_stack.push((u, w));
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if u == root {
                            root_children += 1;
                        }
                        frames.push((w, u, 0));
                    } else if w != parent && disc[w] < disc[u] {
                        edge_stack.push((u, w));
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    frames.pop();
                    if parent == UNSEEN {
                        continue;
                    }
                    low[parent] = low[parent].min(low[u]);
                    if low[u] >= disc[parent] {
                        if parent != root {
                            is_cut[parent] = true;
                        }
                        let mut members = BTreeSet::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            members.insert(a);
                            members.insert(b);
                            if (a, b) == (parent, u) {
                                break;
                            }
                        }
                        blocks.push(members.into_iter().collect());
                    }
                }
            }
            if root_children >= 2 {
                is_cut[root] = true;
            }
        }

        let mut labeled: Vec<Vec<Vertex>> = blocks
            .iter()
            .map(|b| b.iter().map(|&i| self.labels[i]).collect())
            .collect();
        labeled.sort();
        let cut_vertices: Vec<Vertex> = (0..n)
            .filter(|&i| is_cut[i])
            .map(|i| self.labels[i])
            .collect();
        let mut bg_edges = Vec::new();
        for a in 0..labeled.len() {
            for b in a + 1..labeled.len() {
                if labeled[a]
                    .iter()
                    .any(|v| labeled[b].binary_search(v).is_ok())
                {
                    bg_edges.push((a as Vertex, b as Vertex));
                }
            }
        }
        let block_graph = Graph::new(0..labeled.len() as Vertex, bg_edges).unwrap();
        BlockDecomposition {
            blocks: labeled,
            cut_vertices,
            block_graph,
        }
    }

    /// True iff the closed neighborhood of `v` is a clique.
    pub fn is_free_vertex(&self, v: Vertex) -> Result<bool> {
        let i = self.idx(v)?;
        Ok(self.is_free_at(i))
    }

    pub(crate) fn is_free_at(&self, i: usize) -> bool {
        let nb = &self.nbrs[i];
        nb.iter().enumerate().all(|(k, &a)| {
            let mut need = BitSet::new(self.n());
            for &b in &nb[k + 1..] {
                need.insert(b);
            }
            need.is_subset(&self.adj[a])
        })
    }

    pub fn free_vertices(&self) -> Vec<Vertex> {
        (0..self.n())
            .filter(|&i| self.is_free_at(i))
            .map(|i| self.labels[i])
            .collect()
    }

    /// `G_v`: the graph with all edges among the neighbors of `v` added.
    pub fn clique_close(&self, v: Vertex) -> Result<Graph> {
        let i = self.idx(v)?;
        let nb = &self.nbrs[i];
        let mut es = self.edges();
        for (k, &a) in nb.iter().enumerate() {
            for &b in &nb[k + 1..] {
                es.push((self.labels[a], self.labels[b]));
            }
        }
        Graph::new(self.labels.iter().copied(), es)
    }

    /// The subgraph induced on `s`, keeping original labels.
    pub fn induced(&self, s: &[Vertex]) -> Result<Graph> {
        let keep = self.set_of(s)?;
        Ok(self.induced_bits(&keep))
    }

    pub(crate) fn induced_bits(&self, keep: &BitSet) -> Graph {
        let vs = self.labels_of(keep);
        let mut es = Vec::new();
        for i in keep.iter() {
            for &j in &self.nbrs[i] {
                if i < j && keep.contains(j) {
                    es.push((self.labels[i], self.labels[j]));
                }
            }
        }
        Graph::new(vs, es).unwrap()
    }

    /// `G \ s`.
    pub fn delete(&self, s: &[Vertex]) -> Result<Graph> {
        let mut keep = BitSet::full(self.n());
        keep.difference_with(&self.set_of(s)?);
        Ok(self.induced_bits(&keep))
    }

    /// Union of two graphs on possibly overlapping label sets.
    pub fn union(&self, other: &Graph) -> Graph {
        let vs = self.labels.iter().chain(other.labels.iter()).copied();
        let es = self.edges().into_iter().chain(other.edges());
        Graph::new(vs, es).unwrap()
    }

    /// Renames vertices through `map`; unmapped labels stay. The map must be
    /// injective on the vertex set.
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Result<Graph> {
        let f = |v: Vertex| *map.get(&v).unwrap_or(&v);
        let vs: BTreeSet<Vertex> = self.labels.iter().map(|&v| f(v)).collect();
        if vs.len() != self.n() {
            return Err(Error::InvalidArgument("relabeling is not injective".into()));
        }
        Graph::new(vs, self.edges().into_iter().map(|(u, v)| (f(u), f(v))))
    }

    /// Relabels vertices to `1..=n` preserving order.
    pub fn compact(&self) -> Graph {
        let map = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as Vertex + 1))
            .collect();
        self.relabel(&map).unwrap()
    }

    /// Chordality via maximum cardinality search and a perfect elimination
    /// ordering check.
    pub fn is_chordal(&self) -> bool {
        let n = self.n();
        let mut weight = vec![0usize; n];
        let mut numbered = vec![false; n];
        let mut order = Vec::with_capacity(n); // visit order; reversed is a PEO
        for _ in 0..n {
            let u = (0..n)
                .filter(|&i| !numbered[i])
                .max_by_key(|&i| (weight[i], std::cmp::Reverse(i)))
                .unwrap();
            numbered[u] = true;
            order.push(u);
            for &w in &self.nbrs[u] {
                if !numbered[w] {
                    weight[w] += 1;
                }
            }
        }
        let mut pos = vec![0; n];
        for (k, &u) in order.iter().enumerate() {
            pos[u] = k;
        }
        // For each u, its earlier-visited neighbors must form a clique; it
        // suffices that they all neighbor the latest of them.
        for &u in &order {
            let earlier: Vec<usize> = self.nbrs[u]
                .iter()
                .copied()
                .filter(|&w| pos[w] < pos[u])
                .collect();
            if let Some(&p) = earlier.iter().max_by_key(|&&w| pos[w]) {
                if earlier.iter().any(|&w| w != p && !self.adj[p].contains(w)) {
                    return false;
                }
            }
        }
        true
    }

    /// `Some(true/false)` when the search finishes within the default budget.
    pub fn has_hamiltonian_path(&self) -> Option<bool> {
        match self.hamiltonian_path(DEFAULT_PATH_BUDGET) {
            PathSearch::Found(_) => Some(true),
            PathSearch::None => Some(false),
            PathSearch::Unknown => None,
        }
    }

    /// Backtracking search for a spanning path with at most `budget`
    /// extension steps.
    pub fn hamiltonian_path(&self, budget: u64) -> PathSearch {
        let n = self.n();
        if n == 0 {
            return PathSearch::Found(Vec::new());
        }
        if !self.is_connected() {
            return PathSearch::None;
        }
        let leaves: Vec<usize> = (0..n).filter(|&i| self.nbrs[i].len() == 1).collect();
        if leaves.len() > 2 {
            return PathSearch::None;
        }
        let starts: Vec<usize> = if leaves.is_empty() {
            (0..n).collect()
        } else {
            vec![leaves[0]]
        };
        let mut steps = 0u64;
        for s in starts {
            let mut path = vec![s];
            let mut visited = BitSet::new(n);
            visited.insert(s);
            match self.extend_path(&mut path, &mut visited, &mut steps, budget) {
                Some(true) => {
                    return PathSearch::Found(path.iter().map(|&i| self.labels[i]).collect())
                }
                Some(false) => {}
                None => return PathSearch::Unknown,
            }
        }
        PathSearch::None
    }

    fn extend_path(
        &self,
        path: &mut Vec<usize>,
        visited: &mut BitSet,
        steps: &mut u64,
        budget: u64,
    ) -> Option<bool> {
        let n = self.n();
        if path.len() == n {
            return Some(true);
        }
        *steps += 1;
        if *steps > budget {
            return None;
        }
        let u = *path.last().unwrap();
        // The unvisited vertices plus the tip must stay connected, and at most
        // one unvisited vertex may have a single remaining way in.
        let mut alive = BitSet::full(n);
        alive.difference_with(visited);
        alive.insert(u);
        if self.components_within(&alive).len() != 1 {
            return Some(false);
        }
        let mut dead_ends = 0;
        for w in alive.iter() {
            if w == u {
                continue;
            }
            let mut deg = self.adj[w].clone();
            deg.intersect_with(&alive);
            if deg.len() <= 1 {
                dead_ends += 1;
            }
        }
        if dead_ends > 1 {
            return Some(false);
        }
        let mut cand: Vec<usize> = self.nbrs[u]
            .iter()
            .copied()
            .filter(|&w| !visited.contains(w))
            .collect();
        // Low-degree-first tends to close off forced moves early.
        cand.sort_by_key(|&w| {
            let mut d = self.adj[w].clone();
            d.difference_with(visited);
            d.len()
        });
        for w in cand {
            path.push(w);
            visited.insert(w);
            match self.extend_path(path, visited, steps, budget) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            path.pop();
            visited.remove(w);
        }
        Some(false)
    }

    /// If some cut vertex `v` splits the graph into exactly two sides in each
    /// of which `v` is free, returns the two sides (both containing `v`).
    /// Cut vertices are tried in ascending order. Disconnected input yields
    /// `None`.
    pub fn split_decomposable(&self) -> Option<(Graph, Graph)> {
        if !self.is_connected() {
            return None;
        }
        for v in self.cut_vertices() {
            let i = self.index_of(v).unwrap();
            let mut alive = BitSet::full(self.n());
            alive.remove(i);
            let comps = self.components_within(&alive);
            if comps.len() != 2 {
                continue;
            }
            let sides: Vec<Graph> = comps
                .into_iter()
                .map(|mut c| {
                    c.insert(i);
                    self.induced_bits(&c)
                })
                .collect();
            if sides.iter().all(|s| s.is_free_vertex(v).unwrap()) {
                let mut it = sides.into_iter();
                return Some((it.next().unwrap(), it.next().unwrap()));
            }
        }
        None
    }
}
