//! Literal-definition oracles shared by the integration tests. Nothing here
//! calls the production cutset, unmixedness or strong-unmixedness code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use binedge::{Graph, Vertex};
use rand::Rng;

/// Adjacency masks over positions `0..n` (`n <= 32`).
pub struct Small {
    pub labels: Vec<Vertex>,
    pub adj: Vec<u32>,
}

impl Small {
    pub fn new(g: &Graph) -> Small {
        let labels = g.vertices().to_vec();
        assert!(labels.len() <= 32);
        let pos = |v: Vertex| labels.iter().position(|&u| u == v).unwrap();
        let mut adj = vec![0u32; labels.len()];
        for (u, v) in g.edges() {
            let (a, b) = (pos(u), pos(v));
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Small { labels, adj }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn full(&self) -> u32 {
        if self.n() == 32 {
            u32::MAX
        } else {
            (1u32 << self.n()) - 1
        }
    }

    pub fn mask_of(&self, t: &[Vertex]) -> u32 {
        t.iter()
            .map(|v| 1u32 << self.labels.iter().position(|u| u == v).unwrap())
            .fold(0, |a, b| a | b)
    }

    pub fn labels_of(&self, m: u32) -> Vec<Vertex> {
        (0..self.n())
            .filter(|i| m >> i & 1 == 1)
            .map(|i| self.labels[i])
            .collect()
    }

    /// Components of the subgraph induced on `alive`, by flood fill.
    pub fn components(&self, alive: u32) -> Vec<u32> {
        let mut left = alive;
        let mut out = Vec::new();
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            loop {
                let mut grow = comp;
                let mut bits = comp;
                while bits != 0 {
                    let i = bits.trailing_zeros();
                    bits &= bits - 1;
                    grow |= self.adj[i as usize] & alive;
                }
                if grow == comp {
                    break;
                }
                comp = grow;
            }
            out.push(comp);
            left &= !comp;
        }
        out
    }

    pub fn c(&self, removed: u32) -> usize {
        self.components(self.full() & !removed).len()
    }

    /// The defining condition: putting back any single member lowers the
    /// number of components.
    pub fn is_cutset(&self, t: u32) -> bool {
        let ct = self.c(t);
        let mut bits = t;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            bits &= bits - 1;
            if self.c(t & !b) >= ct {
                return false;
            }
        }
        true
    }

    pub fn cutsets(&self) -> Vec<u32> {
        (0..=self.full()).filter(|&t| self.is_cutset(t)).collect()
    }

    pub fn cutset_labels(&self) -> BTreeSet<Vec<Vertex>> {
        self.cutsets()
            .into_iter()
            .map(|t| self.labels_of(t))
            .collect()
    }

    pub fn unmixed(&self) -> bool {
        let c0 = self.c(0);
        self.cutsets()
            .into_iter()
            .all(|t| self.c(t) == t.count_ones() as usize + c0)
    }

    /// Unmixed, and every nonempty cutset loses some member and stays a
    /// cutset.
    pub fn accessible(&self) -> bool {
        if !self.unmixed() {
            return false;
        }
        let family: BTreeSet<u32> = self.cutsets().into_iter().collect();
        family
            .iter()
            .filter(|&&t| t != 0)
            .all(|&t| (0..self.n()).any(|i| t >> i & 1 == 1 && family.contains(&(t & !(1 << i)))))
    }

    pub fn cut_vertices(&self) -> Vec<usize> {
        let c0 = self.c(0);
        (0..self.n()).filter(|&i| self.c(1 << i) > c0).collect()
    }

    pub fn components_complete(&self) -> bool {
        self.components(self.full()).into_iter().all(|comp| {
            (0..self.n())
                .filter(|i| comp >> i & 1 == 1)
                .all(|i| (self.adj[i] | 1 << i) & comp == comp)
        })
    }
}

fn key(g: &Graph) -> (Vec<Vertex>, Vec<(Vertex, Vertex)>) {
    (g.vertices().to_vec(), g.edges())
}

/// `G \ v`, built from the edge list.
pub fn minus(g: &Graph, v: Vertex) -> Graph {
    Graph::new(
        g.vertices().iter().copied().filter(|&u| u != v),
        g.edges().into_iter().filter(|&(a, b)| a != v && b != v),
    )
    .unwrap()
}

/// `G_v`: the neighbors of `v` made into a clique.
pub fn close(g: &Graph, v: Vertex) -> Graph {
    let nb: Vec<Vertex> = g
        .edges()
        .into_iter()
        .filter_map(|(a, b)| match (a == v, b == v) {
            (true, _) => Some(b),
            (_, true) => Some(a),
            _ => None,
        })
        .collect();
    let mut es = g.edges();
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            es.push((a, b));
        }
    }
    Graph::new(g.vertices().iter().copied(), es).unwrap()
}

/// Strong unmixedness exactly as defined: components complete, or unmixed
/// with a cut vertex `v` such that `G \ v`, `G_v` and `G_v \ v` are all
/// strongly unmixed. No per-component split.
pub struct LiteralSu {
    memo: HashMap<(Vec<Vertex>, Vec<(Vertex, Vertex)>), bool>,
}

impl LiteralSu {
    pub fn new() -> LiteralSu {
        LiteralSu {
            memo: HashMap::new(),
        }
    }

    pub fn check(&mut self, g: &Graph) -> bool {
        let k = key(g);
        if let Some(&b) = self.memo.get(&k) {
            return b;
        }
        let s = Small::new(g);
        let out = if s.components_complete() {
            true
        } else if !s.unmixed() {
            false
        } else {
            s.cut_vertices().into_iter().any(|i| {
                let v = s.labels[i];
                let gv = close(g, v);
                self.check(&minus(g, v)) && self.check(&gv) && self.check(&minus(&gv, v))
            })
        };
        self.memo.insert(k, out);
        out
    }
}

/// Erdős–Rényi graph on `1..=n`.
pub fn random_graph(rng: &mut impl Rng, n: u32, p: f64) -> Graph {
    let mut es = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(p) {
                es.push((a, b));
            }
        }
    }
    Graph::new(1..=n, es).unwrap()
}

/// Graph on `1..=n` from a bit per unordered pair in column order.
pub fn graph_from_bits(n: u32, bits: &[bool]) -> Graph {
    let mut es = Vec::new();
    let mut k = 0;
    for b in 2..=n {
        for a in 1..b {
            if bits[k] {
                es.push((a, b));
            }
            k += 1;
        }
    }
    Graph::new(1..=n, es).unwrap()
}
