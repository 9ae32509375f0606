//! Whiskers, blocks with whiskers, star products, gluings, and the fixed
//! corpus of example graphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

fn fresh_label(g: &Graph) -> Vertex {
    g.max_label().map_or(1, |m| m + 1)
}

/// Attaches a pendant vertex labeled `max + 1` at `v`.
pub fn add_whisker(g: &Graph, v: Vertex) -> Result<Graph> {
    g.idx(v)?;
    let f = fresh_label(g);
    Graph::new(
        g.vertices().iter().copied().chain([f]),
        g.edges().into_iter().chain([(v, f)]),
    )
}

/// Vertices of the branch hanging off `block` at `v`: the component of `v`
/// once the rest of the block is removed.
pub fn branch_at(g: &Graph, block: &[Vertex], v: Vertex) -> Result<Vec<Vertex>> {
    let rest: Vec<Vertex> = block.iter().copied().filter(|&u| u != v).collect();
    let h = g.delete(&rest)?;
    Ok(h.connected_components()
        .into_iter()
        .find(|c| c.binary_search(&v).is_ok())
        .unwrap())
}

/// `B̄^W`: the block `block` of `g`, with the branch at each cut vertex in `w`
/// replaced by a single whisker and the branches at the remaining cut
/// vertices of the block kept whole. Whisker labels are `max(g) + 1, ...`
/// assigned in ascending order of `w`.
pub fn block_with_whiskers(g: &Graph, block: &[Vertex], w: &[Vertex]) -> Result<Graph> {
    let mut b = block.to_vec();
    b.sort_unstable();
    b.dedup();
    let dec = g.blocks();
    if !dec.blocks.contains(&b) {
        return Err(Error::InvalidArgument(format!("{b:?} is not a block")));
    }
    let cuts: Vec<Vertex> = b
        .iter()
        .copied()
        .filter(|v| dec.cut_vertices.binary_search(v).is_ok())
        .collect();
    let mut ws = w.to_vec();
    ws.sort_unstable();
    ws.dedup();
    if let Some(bad) = ws.iter().find(|v| !cuts.contains(v)) {
        return Err(Error::InvalidArgument(format!(
            "{bad} is not a cut vertex inside the block"
        )));
    }
    let mut keep: BTreeSet<Vertex> = b.iter().copied().collect();
    for &v in cuts.iter().filter(|v| !ws.contains(v)) {
        keep.extend(branch_at(g, &b, v)?);
    }
    let keep: Vec<Vertex> = keep.into_iter().collect();
    let base = g.induced(&keep)?;
    let mut next = fresh_label(g);
    let mut vs = base.vertices().to_vec();
    let mut es = base.edges();
    for &v in &ws {
        vs.push(next);
        es.push((v, next));
        next += 1;
    }
    Graph::new(vs, es)
}

/// `B̄`: whiskers at every cut vertex of `g` lying in the block.
pub fn block_bar(g: &Graph, block: &[Vertex]) -> Result<Graph> {
    let cuts = g.cut_vertices();
    let w: Vec<Vertex> = block
        .iter()
        .copied()
        .filter(|v| cuts.binary_search(v).is_ok())
        .collect();
    block_with_whiskers(g, block, &w)
}

fn check_star(m: u32, n: u32, r: u32) -> Result<()> {
    if r < 1 || r > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "star product needs 1 <= r <= min(m, n), got m={m} n={n} r={r}"
        )));
    }
    Ok(())
}

/// `K_m ⋆_r K_n` with `x_i = i` and `y_i = m + i`.
pub fn star_product(m: u32, n: u32, r: u32) -> Result<Graph> {
    check_star(m, n, r)?;
    let mut es = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            es.push((i, j));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            es.push((m + i, m + j));
        }
    }
    for i in 1..=r {
        es.push((i, m + i));
    }
    Graph::new(1..=m + n, es)
}

/// The star product with whiskers at `x_2..x_r` then `y_2..y_r`; index 1
/// gets none.
pub fn whiskered_star_product(m: u32, n: u32, r: u32) -> Result<Graph> {
    let mut g = star_product(m, n, r)?;
    for i in 2..=r {
        g = add_whisker(&g, i)?;
    }
    for i in 2..=r {
        g = add_whisker(&g, m + i)?;
    }
    Ok(g)
}

/// Identifies `w` of `g2` with `v` of `g1`; the merged vertex keeps the
/// label `v`. All other labels must already be disjoint.
pub fn glue(g1: &Graph, v: Vertex, g2: &Graph, w: Vertex) -> Result<Graph> {
    g1.idx(v)?;
    g2.idx(w)?;
    let h = if v == w {
        g2.clone()
    } else {
        g2.relabel(&BTreeMap::from([(w, v)]))?
    };
    if let Some(&c) = h.vertices().iter().find(|&&u| u != v && g1.contains(u)) {
        return Err(Error::Precondition(format!(
            "label {c} occurs in both graphs"
        )));
    }
    Ok(g1.union(&h))
}

/// Like [`glue`], but first moves every vertex of `g2` other than `w` to
/// fresh labels above `max(g1)`, in ascending order. Returns the glued graph
/// and the label map applied to `g2`.
pub fn glue_relabeled(
    g1: &Graph,
    v: Vertex,
    g2: &Graph,
    w: Vertex,
) -> Result<(Graph, BTreeMap<Vertex, Vertex>)> {
    g1.idx(v)?;
    g2.idx(w)?;
    let mut next = fresh_label(g1);
    let mut map = BTreeMap::new();
    for &u in g2.vertices() {
        if u == w {
            map.insert(u, v);
        } else {
            map.insert(u, next);
            next += 1;
        }
    }
    let h = g2.relabel(&map)?;
    Ok((g1.union(&h), map))
}

/// Declarative description of a build; replaying it is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionRecipe {
    Corpus {
        name: String,
    },
    Explicit {
        graph: Graph,
    },
    Whisker {
        base: Box<ConstructionRecipe>,
        at: Vertex,
    },
    BlockWhiskers {
        base: Box<ConstructionRecipe>,
        block: Vec<Vertex>,
        whiskers: Vec<Vertex>,
    },
    Star {
        m: u32,
        n: u32,
        r: u32,
    },
    WhiskeredStar {
        m: u32,
        n: u32,
        r: u32,
    },
    Glue {
        left: Box<ConstructionRecipe>,
        v: Vertex,
        right: Box<ConstructionRecipe>,
        w: Vertex,
        #[serde(default)]
        relabel: bool,
    },
    Delete {
        base: Box<ConstructionRecipe>,
        vertices: Vec<Vertex>,
    },
}

impl ConstructionRecipe {
    pub fn build(&self) -> Result<Graph> {
        use ConstructionRecipe::*;
        match self {
            Corpus { name } => corpus_graph(name)
                .ok_or_else(|| Error::InvalidArgument(format!("no corpus graph named {name}"))),
            Explicit { graph } => Ok(graph.clone()),
            Whisker { base, at } => add_whisker(&base.build()?, *at),
            BlockWhiskers {
                base,
                block,
                whiskers,
            } => block_with_whiskers(&base.build()?, block, whiskers),
            Star { m, n, r } => star_product(*m, *n, *r),
            WhiskeredStar { m, n, r } => whiskered_star_product(*m, *n, *r),
            Glue {
                left,
                v,
                right,
                w,
                relabel,
            } => {
                let (a, b) = (left.build()?, right.build()?);
                if *relabel {
                    Ok(glue_relabeled(&a, *v, &b, *w)?.0)
                } else {
                    glue(&a, *v, &b, *w)
                }
            }
            Delete { base, vertices } => base.build()?.delete(vertices),
        }
    }
}

pub const FIG1A_G: &[(Vertex, Vertex)] = &[
    (1, 3),
    (1, 4),
    (1, 7),
    (2, 3),
    (2, 4),
    (2, 6),
    (2, 8),
    (3, 5),
    (3, 6),
    (3, 9),
    (4, 5),
    (5, 6),
];

pub const FIG1B_H: &[(Vertex, Vertex)] = &[(1, 2), (1, 4), (2, 3), (3, 4), (3, 5), (4, 6)];

pub const FIG2A_L: &[(Vertex, Vertex)] = &[
    (1, 7),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (2, 6),
    (2, 8),
    (3, 5),
    (3, 6),
    (3, 9),
    (4, 5),
    (5, 6),
    (7, 10),
    (10, 11),
    (1, 11),
    (11, 12),
];

pub const FIG2B_F: &[(Vertex, Vertex)] = &[
    (1, 7),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (2, 6),
    (2, 8),
    (3, 5),
    (3, 6),
    (3, 9),
    (4, 5),
    (5, 6),
    (9, 10),
    (10, 11),
    (3, 11),
    (9, 12),
];

pub const FIG3: &[(Vertex, Vertex)] = &[
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
];

pub const FIG4: &[(Vertex, Vertex)] = &[
    (1, 2),
    (1, 3),
    (1, 7),
    (1, 4),
    (2, 3),
    (2, 9),
    (2, 5),
    (3, 6),
    (4, 5),
    (4, 6),
    (5, 6),
    (5, 10),
    (4, 8),
];

pub const FIG5: &[(Vertex, Vertex)] = &[
    (1, 2),
    (2, 3),
    (2, 5),
    (3, 4),
    (4, 5),
    (5, 6),
    (5, 7),
    (5, 10),
    (6, 10),
    (6, 7),
    (7, 9),
    (7, 13),
    (8, 9),
    (8, 13),
    (9, 10),
    (9, 13),
    (10, 11),
    (10, 12),
    (10, 13),
    (11, 12),
    (13, 14),
    (13, 17),
    (14, 15),
    (15, 17),
    (13, 16),
    (14, 16),
    (17, 18),
    (17, 20),
    (17, 21),
    (18, 19),
    (18, 21),
    (18, 23),
    (19, 20),
    (19, 22),
    (19, 24),
    (20, 22),
    (20, 25),
    (21, 22),
];

pub const CORPUS_NAMES: &[&str] = &[
    "fig1a_G", "fig1b_H", "fig2a_L", "fig2b_F", "fig3", "fig4", "fig5",
];

pub fn corpus_graph(name: &str) -> Option<Graph> {
    let edges = match name {
        "fig1a_G" => FIG1A_G,
        "fig1b_H" => FIG1B_H,
        "fig2a_L" => FIG2A_L,
        "fig2b_F" => FIG2B_F,
        "fig3" => FIG3,
        "fig4" => FIG4,
        "fig5" => FIG5,
        _ => return None,
    };
    Some(Graph::from_edges(edges).unwrap())
}

/// The example graphs by name.
pub fn paper_corpus() -> BTreeMap<&'static str, Graph> {
    CORPUS_NAMES
        .iter()
        .map(|&n| (n, corpus_graph(n).unwrap()))
        .collect()
}
