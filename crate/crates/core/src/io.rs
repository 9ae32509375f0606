//! Edge-list and graph6 formats, and the analysis report.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::cutsets::{CutSet, DecompositionReport};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::properties::{AccessibilityCertificate, BlockClass, Checker, CmVerdict, SuTrace};

/// A parsed edge list plus any non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct EdgeListDocument {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

/// Parses the edge-list format: one `u v` edge per line, a lone `v` for an
/// isolated vertex, an optional `n N` header declaring vertices `1..=N`, and
/// `#` comments. Labels are positive integers.
pub fn parse_edge_list(text: &str) -> Result<EdgeListDocument> {
    let mut vertices = Vec::new();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut warnings = Vec::new();
    let mut declared: Option<Vertex> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let err = |message: String| Error::Parse { line, message };
        let label = |t: &str| -> Result<Vertex> {
            match t.parse::<Vertex>() {
                Ok(0) => Err(err("vertex labels must be positive".into())),
                Ok(v) if declared.is_some_and(|c| v > c) => Err(err(format!(
                    "label {v} exceeds declared vertex count {}",
                    declared.unwrap()
                ))),
                Ok(v) => Ok(v),
                Err(_) => Err(err(format!("expected a vertex label, found {t:?}"))),
            }
        };
        match toks.as_slice() {
            ["n", count] => {
                if declared.is_some() || !vertices.is_empty() || !edges.is_empty() {
                    return Err(err("the `n` header must come first".into()));
                }
                let c: Vertex = count
                    .parse()
                    .map_err(|_| err(format!("bad vertex count {count:?}")))?;
                declared = Some(c);
                vertices.extend(1..=c);
            }
            [v] => vertices.push(label(v)?),
            [a, b] => {
                let (u, v) = (label(a)?, label(b)?);
                if u == v {
                    return Err(err(format!("self-loop at vertex {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    warnings.push(format!("line {line}: duplicate edge {u} {v} ignored"));
                    continue;
                }
                edges.push((u, v));
            }
            _ => return Err(err(format!("expected `u v`, found {body:?}"))),
        }
    }
    Ok(EdgeListDocument {
        graph: Graph::new(vertices, edges)?,
        warnings,
    })
}

/// Serializes to the edge-list format: isolated vertices first, then edges
/// in sorted order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for &v in g.vertices() {
        if g.degree(v).unwrap() == 0 {
            writeln!(out, "{v}").unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

const G6_HEADER: &str = ">>graph6<<";

fn g6_err(msg: impl Into<String>) -> Error {
    Error::Graph6(msg.into())
}

/// Decodes one graph6 record to a graph on labels `1..=n`.
pub fn decode_graph6(record: &str) -> Result<Graph> {
    let rec = record.trim_end_matches(['\r', '\n']);
    let rec = rec.strip_prefix(G6_HEADER).unwrap_or(rec);
    let bytes = rec.as_bytes();
    for &b in bytes {
        if !(63..=126).contains(&b) {
            return Err(g6_err(format!("byte {b} outside 63..=126")));
        }
    }
    let (n, body) = match bytes {
        [] => return Err(g6_err("empty record")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(g6_err("truncated size field"));
            }
            let n = rest[..6]
                .iter()
                .fold(0u64, |acc, &b| (acc << 6) | (b - 63) as u64);
            (n as usize, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(g6_err("truncated size field"));
            }
            let n = rest[..3]
                .iter()
                .fold(0u64, |acc, &b| (acc << 6) | (b - 63) as u64);
            (n as usize, &rest[3..])
        }
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if body.len() < need {
        return Err(g6_err(format!(
            "truncated record: {n} vertices need {need} data bytes, found {}",
            body.len()
        )));
    }
    if body.len() > need {
        return Err(g6_err("trailing bytes after record"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                edges.push((i as Vertex + 1, j as Vertex + 1));
            }
            k += 1;
        }
    }
    Graph::new(1..=n as Vertex, edges)
}

/// Decodes every record of a graph6 file. An optional header may precede
/// the first record; blank lines are skipped.
pub fn parse_graph6(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && l.trim() != G6_HEADER)
        .map(|(k, l)| {
            decode_graph6(l.trim()).map_err(|e| Error::Parse {
                line: k + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Encodes with vertices taken in label order.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for s in [12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    }
    let mut cur = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if g.adj_bits(i).contains(j) {
                cur |= 1 << (5 - k % 6);
            }
            k += 1;
            if k % 6 == 0 {
                out.push(cur + 63);
                cur = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push(cur + 63);
    }
    String::from_utf8(out).unwrap()
}

/// Predicates `analyze` can be asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop {
    Unmixed,
    Accessible,
    StronglyUnmixed,
    RCut(usize),
    Cm,
}

impl std::str::FromStr for Prop {
    type Err = Error;
    fn from_str(s: &str) -> Result<Prop> {
        let s = s.trim();
        Ok(match s {
            "unmixed" => Prop::Unmixed,
            "accessible" => Prop::Accessible,
            "su" | "strongly_unmixed" => Prop::StronglyUnmixed,
            "cm" => Prop::Cm,
            _ => match s.strip_prefix("rcut=") {
                Some(r) => Prop::RCut(
                    r.parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad r in {s:?}")))?,
                ),
                None => return Err(Error::InvalidArgument(format!("unknown property {s:?}"))),
            },
        })
    }
}

pub fn parse_props(list: &str) -> Result<Vec<Prop>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Families larger than this are summarized unless full output is forced.
pub const CUTSET_LIST_LIMIT: usize = 10_000;

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub props: Vec<Prop>,
    pub force_cutsets: bool,
    pub timing: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            props: vec![
                Prop::Unmixed,
                Prop::Accessible,
                Prop::StronglyUnmixed,
                Prop::Cm,
            ],
            force_cutsets: false,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub components: usize,
    pub cut_vertices: Vec<Vertex>,
    pub blocks: Vec<Vec<Vertex>>,
    pub free_vertices: Vec<Vertex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutsetSection {
    pub count: usize,
    /// Number of cutsets of each size, starting at size 0.
    pub by_size: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<CutSet>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnmixedSection {
    pub value: bool,
    pub witness: Option<CutSet>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuSection {
    pub value: bool,
    pub trace: SuTrace,
}

#[derive(Clone, Debug, Serialize)]
pub struct RCutSection {
    pub r: usize,
    pub r_cut_connected: bool,
    pub strongly_r_cut_connected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockClassEntry {
    pub block: Vec<Vertex>,
    #[serde(flatten)]
    pub class: BlockClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub graph: GraphSummary,
    pub cutsets: CutsetSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unmixed: Option<UnmixedSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accessible: Option<AccessibilityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strongly_unmixed: Option<SuSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub r_cut: Vec<RCutSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_classes: Option<Vec<BlockClassEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cm: Option<CmVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

pub fn analyze(g: &Graph, opts: &AnalyzeOptions, checker: &mut Checker) -> Result<AnalysisReport> {
    let start = Instant::now();
    let dec = g.blocks();
    let fam = checker.family(g)?;
    let list = opts.force_cutsets || fam.len() <= CUTSET_LIST_LIMIT;
    let mut report = AnalysisReport {
        graph: GraphSummary {
            n: g.n(),
            m: g.m(),
            components: g.component_count(),
            cut_vertices: dec.cut_vertices.clone(),
            blocks: dec.blocks.clone(),
            free_vertices: g.free_vertices(),
        },
        cutsets: CutsetSection {
            count: fam.len(),
            by_size: fam.size_histogram(),
            sets: list.then(|| fam.cutsets().to_vec()),
        },
        unmixed: None,
        accessible: None,
        strongly_unmixed: None,
        r_cut: Vec::new(),
        block_classes: None,
        cm: None,
        elapsed_ms: None,
    };
    for p in &opts.props {
        match *p {
            Prop::Unmixed => {
                let (value, witness) = checker.unmixed(g)?;
                report.unmixed = Some(UnmixedSection { value, witness });
            }
            Prop::Accessible => report.accessible = Some(checker.accessible(g)?),
            Prop::StronglyUnmixed => {
                let node = checker.strongly_unmixed(g)?;
                report.strongly_unmixed = Some(SuSection {
                    value: node.verdict,
                    trace: SuTrace::from_node(&node),
                });
            }
            Prop::RCut(r) => report.r_cut.push(RCutSection {
                r,
                r_cut_connected: crate::properties::is_r_cut_connected(g, r)?,
                strongly_r_cut_connected: checker.strongly_r_cut_connected(g, r)?,
            }),
            Prop::Cm => {
                let mut classes = Vec::new();
                for b in &dec.blocks {
                    classes.push(BlockClassEntry {
                        block: b.clone(),
                        class: checker.classify_block(g, b)?,
                    });
                }
                report.block_classes = Some(classes);
                report.cm = Some(checker.cm_verdict(g)?);
            }
        }
    }
    if opts.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn set_str(s: &[Vertex]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Human-readable rendering of an analysis report.
pub fn render_report(r: &AnalysisReport) -> String {
    let mut o = String::new();
    let g = &r.graph;
    writeln!(
        o,
        "vertices: {}  edges: {}  components: {}",
        g.n, g.m, g.components
    )
    .unwrap();
    writeln!(o, "cut vertices: {}", set_str(&g.cut_vertices)).unwrap();
    let blocks: Vec<String> = g.blocks.iter().map(|b| set_str(b)).collect();
    writeln!(o, "blocks: {}", blocks.join(" ")).unwrap();
    writeln!(
        o,
        "cutsets: {} (by size {:?})",
        r.cutsets.count, r.cutsets.by_size
    )
    .unwrap();
    if let Some(sets) = &r.cutsets.sets {
        for c in sets {
            writeln!(o, "  {}  c={}", set_str(&c.members), c.component_count).unwrap();
        }
    }
    if let Some(u) = &r.unmixed {
        match &u.witness {
            None => writeln!(o, "unmixed: true").unwrap(),
            Some(w) => writeln!(
                o,
                "unmixed: false  witness {} with {} components",
                set_str(&w.members),
                w.component_count
            )
            .unwrap(),
        }
    }
    if let Some(a) = &r.accessible {
        writeln!(o, "accessible: {}", a.verdict).unwrap();
        for b in &a.blocked {
            writeln!(o, "  no removable member in {}", set_str(b)).unwrap();
        }
    }
    if let Some(s) = &r.strongly_unmixed {
        writeln!(
            o,
            "strongly unmixed: {}  ({} trace nodes)",
            s.value,
            s.trace.nodes.len()
        )
        .unwrap();
    }
    for rc in &r.r_cut {
        writeln!(
            o,
            "{}-cut-connected: {}  strongly: {}",
            rc.r, rc.r_cut_connected, rc.strongly_r_cut_connected
        )
        .unwrap();
    }
    if let Some(bc) = &r.block_classes {
        for e in bc {
            writeln!(o, "block {}: {:?}", set_str(&e.block), e.class).unwrap();
        }
    }
    if let Some(cm) = &r.cm {
        writeln!(o, "cohen-macaulay: {:?}", cm.status).unwrap();
    }
    if let Some(ms) = r.elapsed_ms {
        writeln!(o, "elapsed: {ms} ms").unwrap();
    }
    o
}

/// Table of minimal primes: members of T, c(T), height.
pub fn render_decomposition(d: &DecompositionReport) -> String {
    let mut o = String::new();
    writeln!(o, "{:<24} {:>5} {:>7}", "T", "c(T)", "height").unwrap();
    for p in &d.components {
        writeln!(
            o,
            "{:<24} {:>5} {:>7}",
            set_str(&p.killed),
            p.clique_supports.len(),
            p.height
        )
        .unwrap();
    }
    writeln!(
        o,
        "heights {}..{}  unmixed: {}",
        d.min_height, d.max_height, d.unmixed
    )
    .unwrap();
    if let Some(w) = &d.witness {
        writeln!(
            o,
            "witness {} with {} components",
            set_str(&w.members),
            w.component_count
        )
        .unwrap();
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_basics() {
        let d = parse_edge_list("1 2\n2 3").unwrap();
        assert_eq!(d.graph, Graph::path(3));
        let d = parse_edge_list("# c\nn 4\n1 2 # tail\n\n2 1\n").unwrap();
        assert_eq!(d.graph.vertices(), &[1, 2, 3, 4]);
        assert_eq!(d.warnings.len(), 1);
        assert_eq!(parse_edge_list("5\n1 2").unwrap().graph.n(), 3);
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        match parse_edge_list("1 2\n1 1\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_edge_list("1 2\nx 3\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_edge_list("1 2 3").is_err());
        assert!(parse_edge_list("0 1").is_err());
        assert!(parse_edge_list("n 3\n1 4").is_err());
        assert!(parse_edge_list("1 2\nn 3").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::new([7, 9], [(3, 1), (2, 3)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "7\n9\n1 3\n2 3\n");
        assert_eq!(parse_edge_list(&text).unwrap().graph, g);
    }

    #[test]
    fn graph6_small() {
        assert_eq!(decode_graph6("@").unwrap(), Graph::empty(1));
        assert_eq!(decode_graph6("A_").unwrap(), Graph::path(2));
        assert_eq!(decode_graph6("A?").unwrap(), Graph::empty(2));
        assert_eq!(encode_graph6(&Graph::path(2)), "A_");
        // Five vertices; bit order (0,1),(0,2),(1,2),(0,3),(1,3),(2,3),...
        let g = decode_graph6("D?{").unwrap();
        assert_eq!(g.edges(), vec![(1, 5), (2, 5), (3, 5), (4, 5)]);
        assert_eq!(encode_graph6(&g), "D?{");
        assert_eq!(decode_graph6(">>graph6<<A_").unwrap(), Graph::path(2));
    }

    #[test]
    fn graph6_errors() {
        assert!(decode_graph6("").is_err());
        assert!(decode_graph6("D?").is_err());
        assert!(decode_graph6("A_?").is_err());
        assert!(decode_graph6("A\x20").is_err());
        assert!(decode_graph6("~??").is_err());
    }

    #[test]
    fn graph6_large_size_field() {
        let n = 100u32;
        let g = Graph::new(1..=n, (1..n).map(|i| (i, i + 1))).unwrap();
        let s = encode_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(decode_graph6(&s).unwrap(), g);
    }

    #[test]
    fn props_parse() {
        assert_eq!(
            parse_props("unmixed,su,rcut=3,cm").unwrap(),
            vec![
                Prop::Unmixed,
                Prop::StronglyUnmixed,
                Prop::RCut(3),
                Prop::Cm
            ]
        );
        assert!(parse_props("bogus").is_err());
    }
}
