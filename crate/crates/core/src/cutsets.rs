//! Cutset enumeration, component counts and the combinatorial primary
//! decomposition.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub const DEFAULT_MAX_NONFREE: usize = 24;

/// Resource limits for exponential enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Largest number of non-free vertices whose subsets are enumerated.
    pub max_nonfree: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nonfree: DEFAULT_MAX_NONFREE,
            deadline: None,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_nonfree: 63,
            deadline: None,
        }
    }

    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutSet {
    pub members: Vec<Vertex>,
    pub component_count: usize,
}

/// The family of all cutsets of a graph, sorted by size and then
/// lexicographically.
#[derive(Clone, Debug, Serialize)]
pub struct CutSetFamily {
    #[serde(skip)]
    graph: Graph,
    cutsets: Vec<CutSet>,
    #[serde(skip)]
    index: HashSet<Vec<Vertex>>,
}

impl CutSetFamily {
    /// Builds a family from member sets, recomputing component counts on `g`.
    pub fn from_member_sets(
        g: &Graph,
        sets: impl IntoIterator<Item = Vec<Vertex>>,
    ) -> Result<CutSetFamily> {
        let mut cutsets = Vec::new();
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            let c = component_count(g, &s)?;
            cutsets.push(CutSet {
                members: s,
                component_count: c,
            });
        }
        Ok(Self::from_cutsets(g.clone(), cutsets))
    }

    fn from_cutsets(graph: Graph, mut cutsets: Vec<CutSet>) -> CutSetFamily {
        cutsets.sort_by(|a, b| (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members)));
        cutsets.dedup_by(|a, b| a.members == b.members);
        let index = cutsets.iter().map(|c| c.members.clone()).collect();
        CutSetFamily {
            graph,
            cutsets,
            index,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cutsets(&self) -> &[CutSet] {
        &self.cutsets
    }

    pub fn len(&self) -> usize {
        self.cutsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cutsets.is_empty()
    }

    /// Membership test; `members` must be sorted.
    pub fn contains(&self, members: &[Vertex]) -> bool {
        self.index.contains(members)
    }

    pub fn member_sets(&self) -> BTreeSet<Vec<Vertex>> {
        self.index.iter().cloned().collect()
    }

    /// Number of cutsets of each size, index = size.
    pub fn size_histogram(&self) -> Vec<usize> {
        let top = self.cutsets.last().map_or(0, |c| c.members.len());
        let mut h = vec![0; top + 1];
        for c in &self.cutsets {
            h[c.members.len()] += 1;
        }
        h
    }
}

/// `c_G(T)`: number of connected components of `G \ T`.
pub fn component_count(g: &Graph, t: &[Vertex]) -> Result<usize> {
    let mut alive = BitSet::full(g.n());
    alive.difference_with(&g.set_of(t)?);
    Ok(g.components_within(&alive).len())
}

/// Cutset test: every member has neighbors in at least two components of
/// `G \ T`.
pub fn is_cutset(g: &Graph, t: &[Vertex]) -> Result<bool> {
    let tb = g.set_of(t)?;
    let mut alive = BitSet::full(g.n());
    alive.difference_with(&tb);
    let comps = g.components_within(&alive);
    let ok = tb.iter().all(|i| {
        comps
            .iter()
            .filter(|c| c.intersects(g.adj_bits(i)))
            .take(2)
            .count()
            == 2
    });
    Ok(ok)
}

pub fn enumerate_cutsets(g: &Graph) -> Result<CutSetFamily> {
    enumerate_cutsets_with(g, &Budget::default())
}

/// Enumerates every cutset. Connected components are handled separately and
/// combined, and within a component only subsets of non-free vertices are
/// visited.
pub fn enumerate_cutsets_with(g: &Graph, budget: &Budget) -> Result<CutSetFamily> {
    let comps = g.connected_components();
    if comps.len() <= 1 {
        let found = enumerate_connected(g, budget)?;
        return Ok(CutSetFamily::from_cutsets(g.clone(), found));
    }
    // Each component's family is independent; the union over components of
    // one cutset from each gives the whole family.
    let mut acc: Vec<CutSet> = vec![CutSet {
        members: Vec::new(),
        component_count: 0,
    }];
    for comp in comps {
        let h = g.induced(&comp)?;
        let part = enumerate_connected(&h, budget)?;
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for a in &acc {
            for p in &part {
                let mut members = a.members.clone();
                members.extend_from_slice(&p.members);
                next.push(CutSet {
                    members,
                    component_count: a.component_count + p.component_count,
                });
            }
        }
        acc = next;
        budget.check()?;
    }
    for c in &mut acc {
        c.members.sort_unstable();
    }
    Ok(CutSetFamily::from_cutsets(g.clone(), acc))
}

fn nonfree_positions(g: &Graph, budget: &Budget) -> Result<Vec<usize>> {
    let nonfree: Vec<usize> = (0..g.n()).filter(|&i| !g.is_free_at(i)).collect();
    if nonfree.len() > budget.max_nonfree {
        return Err(Error::BudgetExceeded {
            nonfree: nonfree.len(),
            limit: budget.max_nonfree,
            candidates: 1u128 << nonfree.len().min(127),
        });
    }
    Ok(nonfree)
}

// Subsets of the candidate space handed to one worker at a time.
const CHUNK_BITS: usize = 12;

fn enumerate_connected(g: &Graph, budget: &Budget) -> Result<Vec<CutSet>> {
    let nonfree = nonfree_positions(g, budget)?;
    let k = nonfree.len();
    let total: u64 = 1 << k;
    let chunk = 1u64 << CHUNK_BITS.min(k);
    let nchunks = total / chunk;
    let run = |c: u64| -> Result<Vec<CutSet>> {
        budget.check()?;
        let lo = c * chunk;
        match g.adj_words() {
            Some(adj) => Ok(scan_words(g, &adj, &nonfree, lo, lo + chunk)),
            None => Ok(scan_bits(g, &nonfree, lo, lo + chunk)),
        }
    };
    let parts: Vec<Vec<CutSet>> = if nchunks > 1 {
        (0..nchunks)
            .into_par_iter()
            .map(run)
            .collect::<Result<_>>()?
    } else {
        (0..nchunks).map(run).collect::<Result<_>>()?
    };
    Ok(parts.into_iter().flatten().collect())
}

#[inline]
fn spread(mask: u64, positions: &[usize]) -> u64 {
    let mut t = 0u64;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        t |= 1 << positions[b];
    }
    t
}

/// Components of `alive` as word masks written into `out`; returns the count.
#[inline]
pub(crate) fn word_components(adj: &[u64], alive: u64, out: &mut Vec<u64>) -> usize {
    out.clear();
    let mut rem = alive;
    while rem != 0 {
        let seed = rem & rem.wrapping_neg();
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let mut grow = 0u64;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                grow |= adj[i];
            }
            grow &= rem & !comp;
            comp |= grow;
            frontier = grow;
        }
        rem &= !comp;
        out.push(comp);
    }
    out.len()
}

fn scan_words(g: &Graph, adj: &[u64], nonfree: &[usize], lo: u64, hi: u64) -> Vec<CutSet> {
    let n = g.n();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    let mut comps = Vec::with_capacity(n);
    'mask: for mask in lo..hi {
        let t = spread(mask, nonfree);
        let alive = full & !t;
        // Cheap necessary condition: two surviving neighbors per member.
        let mut m = t;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            if (adj[i] & alive).count_ones() < 2 {
                continue 'mask;
            }
        }
        let c = word_components(adj, alive, &mut comps);
        let mut m = t;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let nb = adj[i] & alive;
            if comps.iter().filter(|&&cm| cm & nb != 0).take(2).count() < 2 {
                continue 'mask;
            }
        }
        let mut members = Vec::with_capacity(t.count_ones() as usize);
        let mut m = t;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            members.push(g.label(i));
        }
        out.push(CutSet {
            members,
            component_count: c,
        });
    }
    out
}

fn scan_bits(g: &Graph, nonfree: &[usize], lo: u64, hi: u64) -> Vec<CutSet> {
    let n = g.n();
    let mut out = Vec::new();
    'mask: for mask in lo..hi {
        let mut t = BitSet::new(n);
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            t.insert(nonfree[b]);
        }
        let mut alive = BitSet::full(n);
        alive.difference_with(&t);
        for i in t.iter() {
            let mut nb = g.adj_bits(i).clone();
            nb.intersect_with(&alive);
            if nb.len() < 2 {
                continue 'mask;
            }
        }
        let comps = g.components_within(&alive);
        for i in t.iter() {
            let hits = comps
                .iter()
                .filter(|c| c.intersects(g.adj_bits(i)))
                .take(2)
                .count();
            if hits < 2 {
                continue 'mask;
            }
        }
        out.push(CutSet {
            members: g.labels_of(&t),
            component_count: comps.len(),
        });
    }
    out
}

/// Combinatorial description of the minimal prime `P_T(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeComponent {
    pub killed: Vec<Vertex>,
    pub clique_supports: Vec<Vec<Vertex>>,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub components: Vec<PrimeComponent>,
    pub min_height: usize,
    pub max_height: usize,
    pub unmixed: bool,
    pub witness: Option<CutSet>,
}

pub fn prime_component(g: &Graph, t: &[Vertex]) -> Result<PrimeComponent> {
    let mut killed = t.to_vec();
    killed.sort_unstable();
    let supports = g.delete(&killed)?.connected_components();
    let height = g.n() + killed.len() - supports.len();
    Ok(PrimeComponent {
        killed,
        clique_supports: supports,
        height,
    })
}

/// First cutset (in family order) with `c(T) != |T| + c`.
pub fn unmixed_witness(family: &CutSetFamily) -> Option<CutSet> {
    let c = family.graph.component_count();
    family
        .cutsets
        .iter()
        .find(|s| s.component_count != s.members.len() + c)
        .cloned()
}

pub fn decompose(family: &CutSetFamily) -> Result<DecompositionReport> {
    let g = &family.graph;
    let components = family
        .cutsets
        .iter()
        .map(|s| prime_component(g, &s.members))
        .collect::<Result<Vec<_>>>()?;
    let min_height = components.iter().map(|p| p.height).min().unwrap_or(0);
    let max_height = components.iter().map(|p| p.height).max().unwrap_or(0);
    let witness = unmixed_witness(family);
    Ok(DecompositionReport {
        components,
        min_height,
        max_height,
        unmixed: witness.is_none(),
        witness,
    })
}

pub fn primary_decomposition(g: &Graph) -> Result<DecompositionReport> {
    decompose(&enumerate_cutsets(g)?)
}

pub fn is_unmixed(g: &Graph) -> Result<(bool, Option<CutSet>)> {
    let w = unmixed_witness(&enumerate_cutsets(g)?);
    Ok((w.is_none(), w))
}

fn union_sorted(a: &[Vertex], b: &[Vertex], extra: Option<Vertex>) -> Vec<Vertex> {
    let mut s: Vec<Vertex> = a.iter().chain(b).copied().chain(extra).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Cutsets of `g1 ∪ g2` glued at the single shared vertex `v`, assembled
/// from the families of the two sides and of the sides minus `v`:
///
/// * `S1 ∪ S2` with `Si` a cutset of `gi` avoiding `v`;
/// * `T1 ∪ S2` with `v ∈ S2` a cutset of `g2` and `T1` a cutset of `g1 \ v`
///   (and symmetrically);
/// * `T1 ∪ T2 ∪ {v}` with `Ti` a cutset of `gi \ v` not containing all
///   neighbors of `v` in `gi`.
pub fn cutsets_of_glued(g1: &Graph, g2: &Graph, v: Vertex) -> Result<CutSetFamily> {
    cutsets_of_glued_with(g1, g2, v, &Budget::default())
}

pub fn cutsets_of_glued_with(
    g1: &Graph,
    g2: &Graph,
    v: Vertex,
    budget: &Budget,
) -> Result<CutSetFamily> {
    let shared: Vec<Vertex> = g1
        .vertices()
        .iter()
        .copied()
        .filter(|&u| g2.contains(u))
        .collect();
    if shared != [v] {
        return Err(Error::Precondition(format!(
            "glued graphs must share exactly vertex {v}, they share {shared:?}"
        )));
    }
    let f1 = enumerate_cutsets_with(g1, budget)?;
    let f2 = enumerate_cutsets_with(g2, budget)?;
    let h1 = enumerate_cutsets_with(&g1.delete(&[v])?, budget)?;
    let h2 = enumerate_cutsets_with(&g2.delete(&[v])?, budget)?;
    let n1 = g1.neighbors(v)?;
    let n2 = g2.neighbors(v)?;
    let has = |s: &CutSet| s.members.binary_search(&v).is_ok();

    let mut sets: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    for s1 in f1.cutsets.iter().filter(|s| !has(s)) {
        for s2 in f2.cutsets.iter().filter(|s| !has(s)) {
            sets.insert(union_sorted(&s1.members, &s2.members, None));
        }
    }
    for s2 in f2.cutsets.iter().filter(|s| has(s)) {
        for t1 in &h1.cutsets {
            sets.insert(union_sorted(&t1.members, &s2.members, None));
        }
    }
    for s1 in f1.cutsets.iter().filter(|s| has(s)) {
        for t2 in &h2.cutsets {
            sets.insert(union_sorted(&s1.members, &t2.members, None));
        }
    }
    let covers = |t: &CutSet, nb: &[Vertex]| nb.iter().all(|u| t.members.binary_search(u).is_ok());
    for t1 in h1.cutsets.iter().filter(|t| !covers(t, &n1)) {
        for t2 in h2.cutsets.iter().filter(|t| !covers(t, &n2)) {
            sets.insert(union_sorted(&t1.members, &t2.members, Some(v)));
        }
        budget.check()?;
    }
    CutSetFamily::from_member_sets(&g1.union(g2), sets)
}

/// Cutsets of `G_v` from those of `G`: exactly the ones avoiding `v`, with
/// component counts taken in `G_v`.
pub fn cutsets_after_clique_close(family: &CutSetFamily, v: Vertex) -> Result<CutSetFamily> {
    let gv = family.graph.clique_close(v)?;
    CutSetFamily::from_member_sets(
        &gv,
        family
            .cutsets
            .iter()
            .filter(|s| s.members.binary_search(&v).is_err())
            .map(|s| s.members.clone()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(f: &CutSetFamily) -> Vec<Vec<Vertex>> {
        f.cutsets().iter().map(|c| c.members.clone()).collect()
    }

    fn fig3() -> Graph {
        Graph::from_edges(&[
            (1, 2),
            (1, 5),
            (1, 4),
            (1, 8),
            (2, 3),
            (2, 4),
            (2, 7),
            (2, 9),
            (3, 5),
            (3, 6),
            (3, 7),
            (3, 10),
            (4, 5),
            (5, 7),
            (6, 7),
        ])
        .unwrap()
    }

    /// Brute force over all subsets with the literal definition.
    fn brute(g: &Graph) -> Vec<Vec<Vertex>> {
        let vs = g.vertices().to_vec();
        let mut out = Vec::new();
        for mask in 0u32..(1 << vs.len()) {
            let t: Vec<Vertex> = (0..vs.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| vs[i])
                .collect();
            let ok = t.iter().all(|&x| {
                let rest: Vec<Vertex> = t.iter().copied().filter(|&y| y != x).collect();
                let h = g.delete(&rest).unwrap();
                h.cut_vertices().contains(&x)
            });
            if ok {
                out.push(t);
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    #[test]
    fn is_cutset_examples() {
        let c4 = Graph::cycle(4);
        assert!(is_cutset(&c4, &[]).unwrap());
        assert!(is_cutset(&c4, &[1, 3]).unwrap());
        assert!(!is_cutset(&c4, &[1]).unwrap());
        assert!(is_cutset(&fig3(), &[1, 3, 4, 7]).unwrap());
        assert!(is_cutset(&c4, &[9]).is_err());
    }

    #[test]
    fn small_families() {
        assert_eq!(
            sets(&enumerate_cutsets(&Graph::complete(5)).unwrap()),
            vec![Vec::<Vertex>::new()]
        );
        assert_eq!(
            sets(&enumerate_cutsets(&Graph::path(3)).unwrap()),
            vec![vec![], vec![2u32]]
        );
        let c4 = enumerate_cutsets(&Graph::cycle(4)).unwrap();
        assert_eq!(sets(&c4), vec![vec![], vec![1, 3], vec![2, 4]]);
        assert_eq!(c4.cutsets()[1].component_count, 2);
    }

    #[test]
    fn fig3_family_matches_brute_force() {
        let f = enumerate_cutsets(&fig3()).unwrap();
        assert_eq!(f.len(), 17);
        assert_eq!(sets(&f), brute(&fig3()));
    }

    #[test]
    fn disconnected_combines_components() {
        let g = Graph::new([9], [(1, 2), (2, 3), (4, 5), (5, 6)]).unwrap();
        let f = enumerate_cutsets(&g).unwrap();
        assert_eq!(sets(&f), vec![vec![], vec![2], vec![5], vec![2, 5]]);
        assert_eq!(f.cutsets()[3].component_count, 5);
        assert_eq!(sets(&f), brute(&g));
    }

    #[test]
    fn decomposition_of_triangle() {
        let r = primary_decomposition(&Graph::complete(3)).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].clique_supports, vec![vec![1, 2, 3]]);
        assert_eq!(r.components[0].height, 2);
        assert!(r.unmixed);
    }

    #[test]
    fn c4_is_mixed() {
        let (u, w) = is_unmixed(&Graph::cycle(4)).unwrap();
        assert!(!u);
        let w = w.unwrap();
        assert_eq!(w.members, vec![1, 3]);
        assert_eq!(w.component_count, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Budget {
            max_nonfree: 3,
            deadline: None,
        };
        match enumerate_cutsets_with(&Graph::cycle(6), &tight) {
            Err(Error::BudgetExceeded {
                nonfree,
                candidates,
                ..
            }) => {
                assert_eq!(nonfree, 6);
                assert_eq!(candidates, 64);
            }
            other => panic!("{other:?}"),
        }
        let past = Budget::default().with_deadline(Instant::now());
        assert_eq!(
            enumerate_cutsets_with(&Graph::cycle(6), &past).unwrap_err(),
            Error::Timeout
        );
    }

    #[test]
    fn glued_triangles() {
        let a = Graph::complete(3);
        let b = Graph::from_edges(&[(3, 4), (4, 5), (3, 5)]).unwrap();
        let f = cutsets_of_glued(&a, &b, 3).unwrap();
        assert_eq!(sets(&f), vec![vec![], vec![3]]);
        assert!(cutsets_of_glued(&a, &a, 3).is_err());
    }

    #[test]
    fn glued_whisker_matches_direct() {
        let w = Graph::from_edges(&[(1, 11)]).unwrap();
        let f = cutsets_of_glued(&fig3(), &w, 1).unwrap();
        let direct = enumerate_cutsets(&fig3().union(&w)).unwrap();
        assert_eq!(f.member_sets(), direct.member_sets());
    }

    #[test]
    fn clique_close_filter() {
        let f = enumerate_cutsets(&fig3()).unwrap();
        let g1 = cutsets_after_clique_close(&f, 1).unwrap();
        assert_eq!(g1.len(), 8);
        let direct = enumerate_cutsets(&fig3().clique_close(1).unwrap()).unwrap();
        assert_eq!(g1.member_sets(), direct.member_sets());
        let c4 = enumerate_cutsets(&Graph::cycle(4)).unwrap();
        let closed = cutsets_after_clique_close(&c4, 1).unwrap();
        assert_eq!(sets(&closed), vec![vec![], vec![2, 4]]);
    }

    #[test]
    fn wide_graph_uses_general_path() {
        // 70-vertex path: only the interior vertices are non-free, so keep
        // the budget small by making most of it a clique fan.
        let mut es: Vec<(Vertex, Vertex)> = Vec::new();
        for i in 1..=66 {
            for j in i + 1..=66 {
                es.push((i, j));
            }
        }
        es.extend([(66, 67), (67, 68), (68, 69), (69, 70)]);
        let g = Graph::from_edges(&es).unwrap();
        let f = enumerate_cutsets(&g).unwrap();
        let small = Graph::from_edges(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        // Same shape as a 6-path with 1 blown up into a clique.
        assert_eq!(f.len(), enumerate_cutsets(&small).unwrap().len());
    }
}
