//! Canonical forms and isomorphism testing for small graphs.
//!
//! Individualization-refinement without automorphism pruning: refine to an
//! equitable coloring, split the first non-singleton cell on each of its
//! members, and keep the lexicographically least adjacency code among the
//! discrete leaves. Plenty for the graph sizes the harness works with.

use crate::graph::{Graph, Vertex};

/// Label-independent code of a graph: vertex count plus the upper-triangle
/// adjacency bits under the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    pub n: usize,
    pub bits: Vec<u64>,
}

fn refine(g: &Graph, colors: &mut Vec<usize>) {
    let n = g.n();
    loop {
        let mut sig: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|i| {
                let mut nc: Vec<usize> = g.nbr_indices(i).iter().map(|&j| colors[j]).collect();
                nc.sort_unstable();
                (colors[i], nc, i)
            })
            .collect();
        sig.sort();
        let mut next = vec![0; n];
        let mut c = 0;
        for k in 0..n {
            if k > 0 && (sig[k].0 != sig[k - 1].0 || sig[k].1 != sig[k - 1].1) {
                c += 1;
            }
            next[sig[k].2] = c;
        }
        let before = colors.iter().max().map_or(0, |m| m + 1);
        *colors = next;
        if c + 1 == before || n == 0 {
            return;
        }
    }
}

fn code_for(g: &Graph, colors: &[usize]) -> Vec<u64> {
    let n = g.n();
    let mut order = vec![0; n];
    for (i, &c) in colors.iter().enumerate() {
        order[c] = i;
    }
    let total = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u64; total.div_ceil(64)];
    let mut k = 0;
    for b in 1..n {
        for a in 0..b {
            if g.adj_bits(order[a]).contains(order[b]) {
                bits[k >> 6] |= 1 << (63 - (k & 63));
            }
            k += 1;
        }
    }
    bits
}

fn search(g: &Graph, colors: Vec<usize>, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    let n = g.n();
    let ncolors = colors.iter().max().map_or(0, |m| m + 1);
    if ncolors == n {
        let code = code_for(g, &colors);
        if best.as_ref().map_or(true, |(b, _)| code < *b) {
            *best = Some((code, colors));
        }
        return;
    }
    // First color class with more than one member.
    let mut count = vec![0; ncolors];
    for &c in &colors {
        count[c] += 1;
    }
    let target = (0..ncolors).find(|&c| count[c] > 1).unwrap();
    for v in (0..n).filter(|&i| colors[i] == target) {
        // Individualize v: it stays at `target`, the rest of the cell moves up.
        let mut next: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c > target || (c == target && i != v) {
                    c + 1
                } else {
                    c
                }
            })
            .collect();
        refine(g, &mut next);
        search(g, next, best);
    }
}

/// Canonical code plus a canonical vertex order (labels, position `k` holds
/// the vertex placed `k`-th).
pub fn canonical_form(g: &Graph) -> (CanonicalCode, Vec<Vertex>) {
    let n = g.n();
    // Seed with degrees so the first refinement round is cheap and the
    // initial coloring is label-independent.
    let mut degs: Vec<usize> = (0..n).map(|i| g.nbr_indices(i).len()).collect();
    let mut sorted = degs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    for d in &mut degs {
        *d = sorted.binary_search(d).unwrap();
    }
    refine(g, &mut degs);
    let mut best = None;
    search(g, degs, &mut best);
    let (bits, colors) = best.unwrap_or((Vec::new(), Vec::new()));
    let mut order = vec![0; n];
    for (i, &c) in colors.iter().enumerate() {
        order[c] = g.label(i);
    }
    (CanonicalCode { n, bits }, order)
}

pub fn canonical_code(g: &Graph) -> CanonicalCode {
    canonical_form(g).0
}

/// The graph relabeled `1..=n` in canonical order.
pub fn canonical_graph(g: &Graph) -> Graph {
    let (_, order) = canonical_form(g);
    let map = order
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k as Vertex + 1))
        .collect();
    g.relabel(&map).unwrap().compact()
}

fn degree_sequence(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.n()).map(|i| g.nbr_indices(i).len()).collect();
    d.sort_unstable();
    d
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.m() == b.m()
        && degree_sequence(a) == degree_sequence(b)
        && canonical_code(a) == canonical_code(b)
}
