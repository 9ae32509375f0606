use std::collections::BTreeMap;
use std::path::PathBuf;

use binedge::constructors::{
    block_bar, block_with_whiskers, corpus_graph, glue, glue_relabeled, paper_corpus, star_product,
    whiskered_star_product, ConstructionRecipe, CORPUS_NAMES,
};
use binedge::io::parse_edge_list;
use binedge::iso::is_isomorphic;
use binedge::Graph;
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data/v1")
        .join(name)
}

#[test]
fn fixture_files_match_the_corpus() {
    for name in CORPUS_NAMES {
        let text = std::fs::read_to_string(data(&format!("{name}.edges"))).unwrap();
        let doc = parse_edge_list(&text).unwrap();
        assert!(doc.warnings.is_empty(), "{name}");
        assert_eq!(doc.graph, corpus_graph(name).unwrap(), "{name}");
    }
}

#[test]
fn fig5_blocks() {
    let g = corpus_graph("fig5").unwrap();
    let d = g.blocks();
    assert_eq!(d.blocks.len(), 9);
    let big: Vec<_> = d.blocks.iter().filter(|b| b.len() > 2).collect();
    assert_eq!(big.len(), 5);
    // The closure of the block holding 5..10 and 13 is the fig3 graph.
    let b3 = block_bar(&g, &[5, 6, 7, 8, 9, 10, 13]).unwrap();
    assert!(is_isomorphic(&b3, &corpus_graph("fig3").unwrap()));
}

proptest! {
    #[test]
    fn star_product_commutes_up_to_swapping_sides(m in 1u32..6, n in 1u32..6, r in 1u32..6) {
        prop_assume!(r <= m.min(n));
        let a = star_product(m, n, r).unwrap();
        let b = star_product(n, m, r).unwrap();
        let swap: BTreeMap<u32, u32> = (1..=m).map(|i| (i, n + i))
            .chain((1..=n).map(|i| (m + i, i))).collect();
        prop_assert_eq!(a.relabel(&swap).unwrap(), b);
    }

    #[test]
    fn whiskered_star_shape(m in 2u32..6, n in 2u32..6, r in 2u32..6) {
        prop_assume!(r <= m.min(n));
        let g = whiskered_star_product(m, n, r).unwrap();
        prop_assert_eq!(g.n() as u32, m + n + 2 * (r - 1));
        let cuts = g.cut_vertices();
        for f in m + n + 1..=g.n() as u32 {
            prop_assert!(g.is_free_vertex(f).unwrap());
            prop_assert_eq!(g.degree(f).unwrap(), 1);
        }
        for i in 2..=r {
            prop_assert!(cuts.contains(&i) && cuts.contains(&(m + i)));
        }
        prop_assert!(!cuts.contains(&1) && !cuts.contains(&(m + 1)));
    }

    #[test]
    fn glue_is_associative_up_to_relabeling(a in 2u32..5, b in 2u32..5, c in 2u32..5, i in 0u32..4, j in 0u32..4) {
        let ga = Graph::complete(a);
        let gb = Graph::cycle(b.max(3));
        let gc = Graph::path(c);
        let va = 1 + i % a;
        let (vb1, vb2) = (1, 2);
        let vc = 1 + j % c;
        let (left, mb) = glue_relabeled(&ga, va, &gb, vb1).unwrap();
        let (left, _) = glue_relabeled(&left, mb[&vb2], &gc, vc).unwrap();
        let (bc, _) = glue_relabeled(&gb, vb2, &gc, vc).unwrap();
        let (right, _) = glue_relabeled(&ga, va, &bc, vb1).unwrap();
        prop_assert!(is_isomorphic(&left, &right));
    }
}

#[test]
fn all_whiskers_keep_the_block() {
    for (name, g) in paper_corpus() {
        let d = g.blocks();
        for b in &d.blocks {
            let bar = block_bar(&g, b).unwrap();
            assert_eq!(bar.induced(b).unwrap(), g.induced(b).unwrap(), "{name}");
            assert!(bar.blocks().blocks.contains(b), "{name} {b:?}");
            let inner: Vec<u32> = b
                .iter()
                .copied()
                .filter(|v| d.cut_vertices.contains(v))
                .collect();
            assert_eq!(bar.n(), b.len() + inner.len(), "{name} {b:?}");
        }
    }
}

#[test]
fn partial_whiskers_keep_other_branches() {
    let g = corpus_graph("fig5").unwrap();
    let b = [5, 6, 7, 8, 9, 10, 13];
    let h = block_with_whiskers(&g, &b, &[5]).unwrap();
    // 10 and 13 keep their branches, 5 gets one whisker.
    assert!(h.contains(11) && h.contains(17) && !h.contains(2));
    assert_eq!(h.n(), g.n() - 4 + 1);
    assert!(block_with_whiskers(&g, &b, &[6]).is_err());
}

#[test]
fn glue_rejects_shared_labels() {
    let a = Graph::path(3);
    assert!(glue(&a, 1, &a, 3).is_err());
    let b = Graph::from_edges(&[(10, 11)]).unwrap();
    assert_eq!(
        glue(&a, 3, &b, 10).unwrap().edges(),
        vec![(1, 2), (2, 3), (3, 11)]
    );
}

#[test]
fn recipes_replay_and_round_trip() {
    let r = ConstructionRecipe::Glue {
        left: Box::new(ConstructionRecipe::Star { m: 3, n: 3, r: 3 }),
        v: 2,
        right: Box::new(ConstructionRecipe::Corpus {
            name: "fig1b_H".into(),
        }),
        w: 4,
        relabel: true,
    };
    let json = serde_json::to_string(&r).unwrap();
    let back: ConstructionRecipe = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.build().unwrap(), r.build().unwrap());
    assert_eq!(r.build().unwrap().n(), 6 + 5);
}
