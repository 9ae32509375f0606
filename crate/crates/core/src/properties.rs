//! Graded predicates with certificates: unmixed, accessible, strongly
//! unmixed, r-cut-connected, plus block classification and the tri-state
//! Cohen-Macaulay verdict.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructors::{block_bar, star_product};
use crate::cutsets::{
    component_count, cutsets_after_clique_close, enumerate_cutsets_with, is_cutset,
    unmixed_witness, Budget, CutSet, CutSetFamily,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, PathSearch, Vertex, DEFAULT_PATH_BUDGET};
use crate::iso::is_isomorphic;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessStep {
    pub cutset: Vec<Vertex>,
    pub removed: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessibilityCertificate {
    pub verdict: bool,
    pub unmixed: bool,
    pub unmixed_witness: Option<CutSet>,
    /// For each nonempty cutset with a removable member, the smallest one.
    pub steps: Vec<AccessStep>,
    /// Nonempty cutsets none of whose members can be removed.
    pub blocked: Vec<Vec<Vertex>>,
}

/// Which derived graph of a cut-vertex step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derived {
    /// `G \ v`
    Deleted,
    /// `G_v`
    Closed,
    /// `G_v \ v`
    ClosedDeleted,
}

pub fn derive(g: &Graph, v: Vertex, which: Derived) -> Result<Graph> {
    match which {
        Derived::Deleted => g.delete(&[v]),
        Derived::Closed => g.clique_close(v),
        Derived::ClosedDeleted => g.clique_close(v)?.delete(&[v]),
    }
}

#[derive(Debug)]
pub struct SuNode {
    pub graph: Graph,
    pub verdict: bool,
    pub kind: SuKind,
}

#[derive(Debug)]
pub struct SuAttempt {
    pub v: Vertex,
    pub failed: Derived,
    pub node: Arc<SuNode>,
}

#[derive(Debug)]
pub enum SuKind {
    AllComplete,
    /// Disconnected graph decided one component at a time. When false, the
    /// last child is the failing component.
    Components(Vec<Arc<SuNode>>),
    CutVertex {
        v: Vertex,
        deleted: Arc<SuNode>,
        closed: Arc<SuNode>,
        closed_deleted: Arc<SuNode>,
    },
    NotUnmixed(CutSet),
    /// Unmixed, but every cut vertex (ascending) has a failing child.
    NoCutVertex(Vec<SuAttempt>),
}

/// Flattened, serializable form of a strong-unmixedness derivation. Children
/// always precede their parents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuTrace {
    pub root: usize,
    pub nodes: Vec<SuRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuRecord {
    pub graph: Graph,
    pub verdict: bool,
    #[serde(flatten)]
    pub kind: SuRecordKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SuRecordKind {
    AllComplete,
    Components {
        children: Vec<usize>,
    },
    CutVertex {
        v: Vertex,
        deleted: usize,
        closed: usize,
        closed_deleted: usize,
    },
    NotUnmixed {
        witness: CutSet,
    },
    NoCutVertex {
        attempts: Vec<AttemptRecord>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub v: Vertex,
    pub failed: Derived,
    pub node: usize,
}

impl SuTrace {
    pub fn from_node(root: &Arc<SuNode>) -> SuTrace {
        let mut ids: HashMap<*const SuNode, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let root = flatten(root, &mut ids, &mut nodes);
        SuTrace { root, nodes }
    }

    pub fn verdict(&self) -> bool {
        self.nodes[self.root].verdict
    }
}

fn flatten(
    node: &Arc<SuNode>,
    ids: &mut HashMap<*const SuNode, usize>,
    nodes: &mut Vec<SuRecord>,
) -> usize {
    if let Some(&id) = ids.get(&Arc::as_ptr(node)) {
        return id;
    }
    let kind = match &node.kind {
        SuKind::AllComplete => SuRecordKind::AllComplete,
        SuKind::Components(cs) => SuRecordKind::Components {
            children: cs.iter().map(|c| flatten(c, ids, nodes)).collect(),
        },
        SuKind::CutVertex {
            v,
            deleted,
            closed,
            closed_deleted,
        } => SuRecordKind::CutVertex {
            v: *v,
            deleted: flatten(deleted, ids, nodes),
            closed: flatten(closed, ids, nodes),
            closed_deleted: flatten(closed_deleted, ids, nodes),
        },
        SuKind::NotUnmixed(w) => SuRecordKind::NotUnmixed { witness: w.clone() },
        SuKind::NoCutVertex(attempts) => SuRecordKind::NoCutVertex {
            attempts: attempts
                .iter()
                .map(|a| AttemptRecord {
                    v: a.v,
                    failed: a.failed,
                    node: flatten(&a.node, ids, nodes),
                })
                .collect(),
        },
    };
    nodes.push(SuRecord {
        graph: node.graph.clone(),
        verdict: node.verdict,
        kind,
    });
    let id = nodes.len() - 1;
    ids.insert(Arc::as_ptr(node), id);
    id
}

/// Block classes for which every block being in one of them makes
/// accessibility, Cohen-Macaulayness and strong unmixedness coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum BlockClass {
    Chordal,
    StarProduct {
        m: u32,
        n: u32,
        r: u32,
    },
    /// `B̄` strongly 3-cut-connected and the block holds at most three cut
    /// vertices of the graph.
    StronglyThreeCutConnected,
    /// `B̄` has a Hamiltonian path.
    Traceable,
    Unrecognized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CmStatus {
    Cm,
    NotCm,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CmReason {
    /// Accessibility, a necessary condition, fails because unmixedness does.
    NotUnmixed {
        witness: CutSet,
    },
    /// Accessibility fails at these cutsets.
    NotAccessible {
        blocked: Vec<Vec<Vertex>>,
    },
    /// Strong unmixedness is sufficient.
    StronglyUnmixed,
    StronglyUnmixedFails,
    /// Every block is in one of the listed classes and every `B̄` is
    /// accessible.
    BlockClasses {
        blocks: Vec<(Vec<Vertex>, BlockClass)>,
    },
    UnclassifiedBlock {
        block: Vec<Vertex>,
    },
    BarNotAccessible {
        block: Vec<Vertex>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmVerdict {
    pub status: CmStatus,
    pub reasons: Vec<CmReason>,
}

/// Stateful evaluator holding memo tables keyed on labeled graphs. One per
/// worker; tables are never shared.
pub struct Checker {
    budget: Budget,
    memoize: bool,
    families: HashMap<Graph, Arc<CutSetFamily>>,
    su: HashMap<Graph, Arc<SuNode>>,
    strong_rcc: HashMap<(Graph, usize), bool>,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new(Budget::default())
    }
}

impl Checker {
    pub fn new(budget: Budget) -> Checker {
        Checker {
            budget,
            memoize: true,
            families: HashMap::new(),
            su: HashMap::new(),
            strong_rcc: HashMap::new(),
        }
    }

    /// A checker that recomputes everything; used to confirm memoization does
    /// not change verdicts.
    pub fn without_memo(budget: Budget) -> Checker {
        Checker {
            memoize: false,
            ..Checker::new(budget)
        }
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.budget.deadline = deadline;
    }

    pub fn clear(&mut self) {
        self.families.clear();
        self.su.clear();
        self.strong_rcc.clear();
    }

    pub fn family(&mut self, g: &Graph) -> Result<Arc<CutSetFamily>> {
        if let Some(f) = self.families.get(g) {
            return Ok(f.clone());
        }
        let f = Arc::new(enumerate_cutsets_with(g, &self.budget)?);
        if self.memoize {
            self.families.insert(g.clone(), f.clone());
        }
        Ok(f)
    }

    pub fn unmixed(&mut self, g: &Graph) -> Result<(bool, Option<CutSet>)> {
        let w = unmixed_witness(&*self.family(g)?);
        Ok((w.is_none(), w))
    }

    pub fn accessible(&mut self, g: &Graph) -> Result<AccessibilityCertificate> {
        let fam = self.family(g)?;
        Ok(accessibility_of(&fam))
    }

    pub fn is_accessible(&mut self, g: &Graph) -> Result<bool> {
        Ok(self.accessible(g)?.verdict)
    }

    pub fn strongly_unmixed(&mut self, g: &Graph) -> Result<Arc<SuNode>> {
        if let Some(n) = self.su.get(g) {
            return Ok(n.clone());
        }
        self.budget.check()?;
        let node = Arc::new(self.su_uncached(g)?);
        if self.memoize {
            self.su.insert(g.clone(), node.clone());
        }
        Ok(node)
    }

    pub fn is_strongly_unmixed(&mut self, g: &Graph) -> Result<bool> {
        Ok(self.strongly_unmixed(g)?.verdict)
    }

    fn su_uncached(&mut self, g: &Graph) -> Result<SuNode> {
        let comps = g.connected_components();
        let leaf = |verdict, kind| SuNode {
            graph: g.clone(),
            verdict,
            kind,
        };
        let mut all_complete = true;
        for c in &comps {
            if !g.induced(c)?.is_complete() {
                all_complete = false;
                break;
            }
        }
        if all_complete {
            return Ok(leaf(true, SuKind::AllComplete));
        }
        if comps.len() > 1 {
            let mut children = Vec::new();
            let mut verdict = true;
            for c in &comps {
                let child = self.strongly_unmixed(&g.induced(c)?)?;
                let ok = child.verdict;
                children.push(child);
                if !ok {
                    verdict = false;
                    break;
                }
            }
            return Ok(leaf(verdict, SuKind::Components(children)));
        }
        let fam = self.family(g)?;
        if let Some(w) = unmixed_witness(&fam) {
            return Ok(leaf(false, SuKind::NotUnmixed(w)));
        }
        let mut attempts = Vec::new();
        for v in g.cut_vertices() {
            if self.memoize {
                // The closed graph's family is a filter of this one.
                let closed = g.clique_close(v)?;
                if !self.families.contains_key(&closed) {
                    let f = cutsets_after_clique_close(&fam, v)?;
                    self.families.insert(closed, Arc::new(f));
                }
            }
            let mut kids = Vec::with_capacity(3);
            let mut failed = None;
            for which in [Derived::Deleted, Derived::Closed, Derived::ClosedDeleted] {
                let child = self.strongly_unmixed(&derive(g, v, which)?)?;
                if !child.verdict {
                    failed = Some((which, child));
                    break;
                }
                kids.push(child);
            }
            match failed {
                Some((which, node)) => attempts.push(SuAttempt {
                    v,
                    failed: which,
                    node,
                }),
                None => {
                    let mut it = kids.into_iter();
                    return Ok(leaf(
                        true,
                        SuKind::CutVertex {
                            v,
                            deleted: it.next().unwrap(),
                            closed: it.next().unwrap(),
                            closed_deleted: it.next().unwrap(),
                        },
                    ));
                }
            }
        }
        Ok(leaf(false, SuKind::NoCutVertex(attempts)))
    }

    pub fn strongly_r_cut_connected(&mut self, g: &Graph, r: usize) -> Result<bool> {
        check_r(r)?;
        let key = (g.clone(), r);
        if let Some(&b) = self.strong_rcc.get(&key) {
            return Ok(b);
        }
        self.budget.check()?;
        let mut ok = is_r_cut_connected(g, r)?;
        if ok {
            for v in g.cut_vertices() {
                if !self.strongly_r_cut_connected(&g.delete(&[v])?, r)? {
                    ok = false;
                    break;
                }
            }
        }
        if self.memoize {
            self.strong_rcc.insert(key, ok);
        }
        Ok(ok)
    }

    /// First matching class, tried cheapest first: chordal, star product,
    /// strongly 3-cut-connected, traceable.
    pub fn classify_block(&mut self, g: &Graph, block: &[Vertex]) -> Result<BlockClass> {
        let b = g.induced(block)?;
        if b.is_chordal() {
            return Ok(BlockClass::Chordal);
        }
        if let Some((m, n, r)) = match_star_product(&b) {
            return Ok(BlockClass::StarProduct { m, n, r });
        }
        let bar = block_bar(g, block)?;
        let cuts = g.cut_vertices();
        let inside = block
            .iter()
            .filter(|v| cuts.binary_search(v).is_ok())
            .count();
        if inside <= 3 && self.strongly_r_cut_connected(&bar, 3)? {
            return Ok(BlockClass::StronglyThreeCutConnected);
        }
        if let PathSearch::Found(_) = bar.hamiltonian_path(DEFAULT_PATH_BUDGET) {
            return Ok(BlockClass::Traceable);
        }
        Ok(BlockClass::Unrecognized)
    }

    /// NOT_CM only when accessibility fails; CM only when strong unmixedness
    /// holds, or when the graph is unmixed, every block is classified and
    /// every `B̄` is accessible. Accessibility alone never yields CM.
    pub fn cm_verdict(&mut self, g: &Graph) -> Result<CmVerdict> {
        let acc = self.accessible(g)?;
        if !acc.verdict {
            let reason = match acc.unmixed_witness {
                Some(w) => CmReason::NotUnmixed { witness: w },
                None => CmReason::NotAccessible {
                    blocked: acc.blocked,
                },
            };
            return Ok(CmVerdict {
                status: CmStatus::NotCm,
                reasons: vec![reason],
            });
        }
        if self.is_strongly_unmixed(g)? {
            return Ok(CmVerdict {
                status: CmStatus::Cm,
                reasons: vec![CmReason::StronglyUnmixed],
            });
        }
        let mut reasons = vec![CmReason::StronglyUnmixedFails];
        let mut classes = Vec::new();
        for b in g.blocks().blocks {
            let class = self.classify_block(g, &b)?;
            if class == BlockClass::Unrecognized {
                reasons.push(CmReason::UnclassifiedBlock { block: b });
                return Ok(CmVerdict {
                    status: CmStatus::Unknown,
                    reasons,
                });
            }
            if !self.is_accessible(&block_bar(g, &b)?)? {
                reasons.push(CmReason::BarNotAccessible { block: b });
                return Ok(CmVerdict {
                    status: CmStatus::Unknown,
                    reasons,
                });
            }
            classes.push((b, class));
        }
        reasons.push(CmReason::BlockClasses { blocks: classes });
        Ok(CmVerdict {
            status: CmStatus::Cm,
            reasons,
        })
    }
}

fn accessibility_of(fam: &CutSetFamily) -> AccessibilityCertificate {
    let witness = unmixed_witness(fam);
    let mut steps = Vec::new();
    let mut blocked = Vec::new();
    for c in fam.cutsets().iter().filter(|c| !c.members.is_empty()) {
        let mut rest = Vec::with_capacity(c.members.len() - 1);
        let removable = c.members.iter().copied().find(|&t| {
            rest.clear();
            rest.extend(c.members.iter().copied().filter(|&u| u != t));
            fam.contains(&rest)
        });
        match removable {
            Some(t) => steps.push(AccessStep {
                cutset: c.members.clone(),
                removed: t,
            }),
            None => blocked.push(c.members.clone()),
        }
    }
    AccessibilityCertificate {
        verdict: witness.is_none() && blocked.is_empty(),
        unmixed: witness.is_none(),
        unmixed_witness: witness,
        steps,
        blocked,
    }
}

fn check_r(r: usize) -> Result<()> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    Ok(())
}

/// No cut vertex, or after deleting any cut vertex every component has at
/// most `r` cut vertices of its own. Disconnected graphs are judged per
/// component.
pub fn is_r_cut_connected(g: &Graph, r: usize) -> Result<bool> {
    check_r(r)?;
    for comp in g.connected_components() {
        let h = g.induced(&comp)?;
        for v in h.cut_vertices() {
            for part in h.delete(&[v])?.connected_components() {
                if h.induced(&part)?.cut_vertices().len() > r {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn is_strongly_r_cut_connected(g: &Graph, r: usize) -> Result<bool> {
    Checker::default().strongly_r_cut_connected(g, r)
}

/// Finds `(m, n, r)` with `m >= n` such that `b ≅ K_m ⋆_r K_n`.
pub fn match_star_product(b: &Graph) -> Option<(u32, u32, u32)> {
    let total = b.n() as u32;
    let edges = b.m() as u32;
    for n in 1..=total / 2 {
        let m = total - n;
        for r in 1..=n {
            if m * (m - 1) / 2 + n * (n - 1) / 2 + r != edges {
                continue;
            }
            if is_isomorphic(b, &star_product(m, n, r).unwrap()) {
                return Some((m, n, r));
            }
        }
    }
    None
}

pub fn is_unmixed(g: &Graph) -> Result<(bool, Option<CutSet>)> {
    Checker::default().unmixed(g)
}

pub fn is_accessible(g: &Graph) -> Result<(bool, AccessibilityCertificate)> {
    let c = Checker::default().accessible(g)?;
    Ok((c.verdict, c))
}

pub fn is_strongly_unmixed(g: &Graph) -> Result<(bool, SuTrace)> {
    let node = Checker::default().strongly_unmixed(g)?;
    Ok((node.verdict, SuTrace::from_node(&node)))
}

pub fn classify_block(g: &Graph, block: &[Vertex]) -> Result<BlockClass> {
    Checker::default().classify_block(g, block)
}

pub fn cm_verdict(g: &Graph) -> Result<CmVerdict> {
    Checker::default().cm_verdict(g)
}

/// Re-derives an accessibility certificate from scratch and checks every
/// claim in it.
pub fn verify_accessibility(g: &Graph, cert: &AccessibilityCertificate) -> Result<bool> {
    let fam = enumerate_cutsets_with(g, &Budget::default())?;
    let mut seen = 0;
    for s in &cert.steps {
        if !fam.contains(&s.cutset) || s.cutset.binary_search(&s.removed).is_err() {
            return Ok(false);
        }
        let rest: Vec<Vertex> = s
            .cutset
            .iter()
            .copied()
            .filter(|&u| u != s.removed)
            .collect();
        if !fam.contains(&rest) {
            return Ok(false);
        }
        seen += 1;
    }
    for b in &cert.blocked {
        if !fam.contains(b) {
            return Ok(false);
        }
        for &t in b {
            let rest: Vec<Vertex> = b.iter().copied().filter(|&u| u != t).collect();
            if fam.contains(&rest) {
                return Ok(false);
            }
        }
        seen += 1;
    }
    if seen != fam.len() - 1 {
        return Ok(false);
    }
    let c = g.component_count();
    let unmixed = match &cert.unmixed_witness {
        Some(w) => {
            if !is_cutset(g, &w.members)?
                || component_count(g, &w.members)? != w.component_count
                || w.component_count == w.members.len() + c
            {
                return Ok(false);
            }
            false
        }
        None => unmixed_witness(&fam).is_none(),
    };
    if !unmixed && cert.unmixed_witness.is_none() {
        return Ok(false);
    }
    Ok(cert.unmixed == unmixed && cert.verdict == (unmixed && cert.blocked.is_empty()))
}

/// Checks every node of a trace independently: derived graphs are rebuilt,
/// leaf conditions re-evaluated without memoization, and each verdict must
/// follow from its children. Returns whether the whole trace is valid.
pub fn verify_su_trace(trace: &SuTrace) -> Result<bool> {
    for (id, rec) in trace.nodes.iter().enumerate() {
        let child = |k: usize| -> Option<&SuRecord> { (k < id).then(|| &trace.nodes[k]) };
        let g = &rec.graph;
        let ok = match &rec.kind {
            SuRecordKind::AllComplete => {
                let mut all = true;
                for c in g.connected_components() {
                    all &= g.induced(&c)?.is_complete();
                }
                rec.verdict && all
            }
            SuRecordKind::Components { children } => {
                let comps = g.connected_components();
                let mut kids = Vec::new();
                for &k in children {
                    match child(k) {
                        Some(c) => kids.push(c),
                        None => return Ok(false),
                    }
                }
                let mut parts = Vec::new();
                for c in &comps {
                    parts.push(g.induced(c)?);
                }
                let each_is_component = kids.iter().all(|k| parts.contains(&k.graph));
                let verdicts_ok = if rec.verdict {
                    kids.len() == parts.len() && kids.iter().all(|k| k.verdict)
                } else {
                    kids.last().is_some_and(|k| !k.verdict)
                };
                comps.len() > 1 && each_is_component && verdicts_ok
            }
            SuRecordKind::CutVertex {
                v,
                deleted,
                closed,
                closed_deleted,
            } => {
                let fam = enumerate_cutsets_with(g, &Budget::default())?;
                let mut ok = rec.verdict
                    && g.is_connected()
                    && g.cut_vertices().contains(v)
                    && unmixed_witness(&fam).is_none();
                for (k, which) in [
                    (*deleted, Derived::Deleted),
                    (*closed, Derived::Closed),
                    (*closed_deleted, Derived::ClosedDeleted),
                ] {
                    ok &= match child(k) {
                        Some(c) => c.verdict && c.graph == derive(g, *v, which)?,
                        None => false,
                    };
                }
                ok
            }
            SuRecordKind::NotUnmixed { witness } => {
                !rec.verdict
                    && is_cutset(g, &witness.members)?
                    && component_count(g, &witness.members)? == witness.component_count
                    && witness.component_count != witness.members.len() + g.component_count()
            }
            SuRecordKind::NoCutVertex { attempts } => {
                let fam = enumerate_cutsets_with(g, &Budget::default())?;
                let cuts = g.cut_vertices();
                let mut ok = !rec.verdict
                    && g.is_connected()
                    && !g.is_complete()
                    && unmixed_witness(&fam).is_none()
                    && attempts.iter().map(|a| a.v).collect::<Vec<_>>() == cuts;
                for a in attempts {
                    ok &= match child(a.node) {
                        Some(c) => !c.verdict && c.graph == derive(g, a.v, a.failed)?,
                        None => false,
                    };
                }
                ok
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(trace.root < trace.nodes.len())
}
