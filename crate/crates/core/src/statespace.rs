//! Reachability trees, coverability graphs and bounded enumeration.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::net::{FiringWord, Marking, Net, TransitionId};
use crate::omega::{OmegaNat, OmegaVector};

/// Vertex cap for coverability construction. Construction always terminates on
/// p/t-nets; hitting the cap means the graph is too large to be useful.
pub const DEFAULT_COVERABILITY_CAP: usize = 1_000_000;

fn check_root(net: &Net, root: &OmegaVector) -> Result<()> {
    net.check_marking(&vec![0; root.dim()])?;
    if root.has_omega() {
        net.require_pure("firing from an ω-marking")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub marking: OmegaVector,
    pub depth: usize,
    /// Parent node and the transition fired from it.
    pub parent: Option<(usize, TransitionId)>,
}

/// The first `k` levels of the reachability tree rooted at some marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachTree {
    nodes: Vec<TreeNode>,
    depth: usize,
}

impl ReachTree {
    pub fn root(&self) -> &OmegaVector {
        &self.nodes[0].marking
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(parent, transition, child)` triples in node order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, TransitionId, usize)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.parent.map(|(p, t)| (p, t, i)))
    }

    /// Word labelling the path from the root to `node`.
    pub fn path_to(&self, node: usize) -> FiringWord {
        let mut out = Vec::new();
        let mut cur = node;
        while let Some((p, t)) = self.nodes[cur].parent {
            out.push(t);
            cur = p;
        }
        out.reverse();
        FiringWord::new(out)
    }

    pub fn to_dot(&self, net: &Net) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}-tree\" {{", escape(net.name()));
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", n.marking.to_plain());
        }
        for (p, t, c) in self.edges() {
            let _ = writeln!(s, "  n{p} -> n{c} [label=\"{}\"];", escape(net.transition_name(t)));
        }
        s.push_str("}\n");
        s
    }
}

/// Complete tree of all firing sequences of length at most `k` from `root`.
pub fn build_k_component(net: &Net, root: &OmegaVector, k: usize) -> Result<ReachTree> {
    check_root(net, root)?;
    let mut nodes = vec![TreeNode {
        marking: root.clone(),
        depth: 0,
        parent: None,
    }];
    let mut next = 0;
    while next < nodes.len() {
        if nodes[next].depth < k {
            let m = nodes[next].marking.clone();
            for t in net.transition_ids() {
                if net.enabled_omega(&m, t) {
                    nodes.push(TreeNode {
                        marking: net.fire_omega(&m, t),
                        depth: nodes[next].depth + 1,
                        parent: Some((next, t)),
                    });
                }
            }
        }
        next += 1;
    }
    Ok(ReachTree { nodes, depth: k })
}

/// Depth (1-based) of the shallowest `b`-labelled edge in the reachability tree
/// rooted at `root`, exploring at most `max_depth` levels of edges.
///
/// Distinct markings are expanded once: a marking met again deeper in the tree
/// has a subtree already explored at a shallower level.
pub fn shallowest_occurrence(
    net: &Net,
    root: &OmegaVector,
    b: TransitionId,
    max_depth: usize,
) -> Result<Option<usize>> {
    check_root(net, root)?;
    net.check_transition(b)?;
    let mut seen: HashSet<OmegaVector> = HashSet::from([root.clone()]);
    let mut frontier = vec![root.clone()];
    for depth in 0..max_depth {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for m in &frontier {
            for t in net.transition_ids() {
                if !net.enabled_omega(m, t) {
                    continue;
                }
                if t == b {
                    return Ok(Some(depth + 1));
                }
                let succ = net.fire_omega(m, t);
                if seen.insert(succ.clone()) {
                    next.push(succ);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Whether some edge of the depth-`k` component is labelled `b`.
pub fn occurs_within(net: &Net, root: &OmegaVector, b: TransitionId, k: usize) -> Result<bool> {
    Ok(shallowest_occurrence(net, root, b, k)?.is_some())
}

/// Breadth-first closure of the initial marking, storing at most `budget`
/// distinct markings.
#[derive(Debug, Clone)]
pub struct Exploration {
    markings: Vec<Marking>,
    parent: Vec<Option<(usize, TransitionId)>>,
    index: HashMap<Marking, usize>,
    complete: bool,
}

impl Exploration {
    pub fn run(net: &Net, budget: usize) -> Exploration {
        Self::run_from(net, net.initial().clone(), budget)
    }

    pub fn run_from(net: &Net, root: Marking, budget: usize) -> Exploration {
        let mut ex = Exploration {
            markings: Vec::new(),
            parent: Vec::new(),
            index: HashMap::new(),
            complete: true,
        };
        if budget == 0 {
            ex.complete = false;
            return ex;
        }
        ex.index.insert(root.clone(), 0);
        ex.markings.push(root);
        ex.parent.push(None);
        let mut next = 0;
        'outer: while next < ex.markings.len() {
            let m = ex.markings[next].clone();
            for t in net.transition_ids() {
                if !net.enabled_raw(&m, t) {
                    continue;
                }
                let succ = net.fire_raw(&m, t);
                if ex.index.contains_key(&succ) {
                    continue;
                }
                if ex.markings.len() == budget {
                    ex.complete = false;
                    break 'outer;
                }
                ex.index.insert(succ.clone(), ex.markings.len());
                ex.markings.push(succ);
                ex.parent.push(Some((next, t)));
            }
            next += 1;
        }
        ex
    }

    /// Markings in breadth-first order.
    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.markings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markings.is_empty()
    }

    pub fn position(&self, m: &Marking) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Shortest word reaching the `i`-th marking.
    pub fn word_to(&self, i: usize) -> FiringWord {
        let mut out = Vec::new();
        let mut cur = i;
        while let Some((p, t)) = self.parent[cur] {
            out.push(t);
            cur = p;
        }
        out.reverse();
        FiringWord::new(out)
    }
}

/// Result of [`enumerate_reachable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachableSet {
    pub markings: Vec<Marking>,
    pub complete: bool,
}

pub fn enumerate_reachable(net: &Net, budget: usize) -> ReachableSet {
    let ex = Exploration::run(net, budget);
    ReachableSet {
        complete: ex.complete,
        markings: ex.markings,
    }
}

/// Finite graph of ω-markings covering the reachable markings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverabilityGraph {
    vertices: Vec<OmegaVector>,
    edges: Vec<(usize, TransitionId, usize)>,
}

impl CoverabilityGraph {
    /// Vertex 0 is the root.
    pub fn vertices(&self) -> &[OmegaVector] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, TransitionId, usize)] {
        &self.edges
    }

    pub fn root(&self) -> &OmegaVector {
        &self.vertices[0]
    }

    pub fn vertex(&self, label: &OmegaVector) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn covers(&self, target: &[u32]) -> bool {
        self.vertices.iter().any(|v| v.covers(target))
    }

    pub fn is_bounded(&self) -> bool {
        self.vertices.iter().all(OmegaVector::is_finite)
    }

    pub fn to_dot(&self, net: &Net) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(net.name()));
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", v.to_plain());
        }
        for &(src, t, dst) in &self.edges {
            let _ = writeln!(s, "  n{src} -> n{dst} [label=\"{}\"];", escape(net.transition_name(t)));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Colour {
    Yellow,
    Blue,
    Grey,
    Merged,
}

struct GraphBuilder<'n> {
    net: &'n Net,
    labels: Vec<OmegaVector>,
    colour: Vec<Colour>,
    succ: Vec<Vec<(TransitionId, usize)>>,
    pred: Vec<Vec<usize>>,
    index: HashMap<OmegaVector, usize>,
    cap: usize,
}

impl GraphBuilder<'_> {
    fn add_vertex(&mut self, label: OmegaVector, colour: Colour) -> Result<usize> {
        if self.labels.len() >= self.cap {
            return Err(Error::IterationCap {
                what: "building the coverability graph",
                cap: self.cap,
            });
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.colour.push(colour);
        self.succ.push(Vec::new());
        self.pred.push(Vec::new());
        Ok(id)
    }

    fn add_edge(&mut self, src: usize, t: TransitionId, dst: usize) {
        if !self.succ[src].contains(&(t, dst)) {
            self.succ[src].push((t, dst));
        }
        if !self.pred[dst].contains(&src) {
            self.pred[dst].push(src);
        }
    }

    /// Step 1: draw every arc out of a blue vertex, then turn it grey.
    fn expand(&mut self, v: usize, yellow: &mut VecDeque<usize>) -> Result<()> {
        let label = self.labels[v].clone();
        for t in self.net.transition_ids() {
            if !self.net.enabled_omega(&label, t) {
                continue;
            }
            let next = self.net.fire_omega(&label, t);
            let dst = match self.index.get(&next) {
                Some(&existing) => existing,
                None => {
                    let id = self.add_vertex(next, Colour::Yellow)?;
                    yellow.push_back(id);
                    id
                }
            };
            self.add_edge(v, t, dst);
        }
        self.colour[v] = Colour::Grey;
        Ok(())
    }

    /// Vertices lying on some path from the root to `v`, i.e. those that reach `v`.
    fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.labels.len()];
        let mut stack = vec![v];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            for &p in &self.pred[x] {
                if !seen[p] && p != v {
                    seen[p] = true;
                    out.push(p);
                    stack.push(p);
                }
            }
        }
        out
    }

    /// Step 2: promote to ω every coordinate that strictly exceeds a dominated
    /// ancestor, then turn the vertex blue (or merge it into an equal label).
    fn check(&mut self, v: usize, blue: &mut VecDeque<usize>) {
        let ancestors = self.ancestors(v);
        let mut label = self.labels[v].clone();
        loop {
            let mut changed = false;
            for &a in &ancestors {
                let anc = &self.labels[a];
                if anc.le(&label) && *anc != label {
                    for i in 0..label.dim() {
                        if !label[i].is_omega() && anc[i] < label[i] {
                            label.set(i, OmegaNat::Omega);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        if label == self.labels[v] {
            self.colour[v] = Colour::Blue;
            blue.push_back(v);
            return;
        }
        self.index.remove(&self.labels[v]);
        match self.index.get(&label).copied() {
            Some(existing) => {
                // yellow vertices have no outgoing arcs; only incoming ones move
                for p in std::mem::take(&mut self.pred[v]) {
                    for arc in self.succ[p].iter_mut() {
                        if arc.1 == v {
                            arc.1 = existing;
                        }
                    }
                    let mut seen = HashSet::new();
                    self.succ[p].retain(|arc| seen.insert(*arc));
                    if !self.pred[existing].contains(&p) {
                        self.pred[existing].push(p);
                    }
                }
                self.colour[v] = Colour::Merged;
            }
            None => {
                self.index.insert(label.clone(), v);
                self.labels[v] = label;
                self.colour[v] = Colour::Blue;
                blue.push_back(v);
            }
        }
    }

    fn finish(self) -> CoverabilityGraph {
        let mut renumber = vec![usize::MAX; self.labels.len()];
        let mut vertices = Vec::new();
        for (i, label) in self.labels.iter().enumerate() {
            if self.colour[i] != Colour::Merged {
                renumber[i] = vertices.len();
                vertices.push(label.clone());
            }
        }
        let mut edges = Vec::new();
        for (src, arcs) in self.succ.iter().enumerate() {
            if self.colour[src] == Colour::Merged {
                continue;
            }
            for &(t, dst) in arcs {
                edges.push((renumber[src], t, renumber[dst]));
            }
        }
        CoverabilityGraph { vertices, edges }
    }
}

pub fn build_coverability_graph(net: &Net, m0: &Marking) -> Result<CoverabilityGraph> {
    build_coverability_graph_from(net, &m0.to_omega(), DEFAULT_COVERABILITY_CAP)
}

/// Coverability graph rooted at an arbitrary ω-marking, with a vertex cap.
pub fn build_coverability_graph_from(net: &Net, root: &OmegaVector, cap: usize) -> Result<CoverabilityGraph> {
    net.require_pure("coverability graphs need monotonicity")?;
    net.check_marking(&vec![0; root.dim()])?;
    let mut b = GraphBuilder {
        net,
        labels: Vec::new(),
        colour: Vec::new(),
        succ: Vec::new(),
        pred: Vec::new(),
        index: HashMap::new(),
        cap,
    };
    let root = b.add_vertex(root.clone(), Colour::Blue)?;
    let mut blue = VecDeque::from([root]);
    let mut yellow = VecDeque::new();
    while let Some(v) = blue.pop_front() {
        b.expand(v, &mut yellow)?;
        while let Some(y) = yellow.pop_front() {
            if b.colour[y] == Colour::Yellow {
                b.check(y, &mut blue);
            }
        }
    }
    Ok(b.finish())
}

pub fn is_coverable(net: &Net, m0: &Marking, target: &Marking) -> Result<bool> {
    net.check_marking(target)?;
    Ok(build_coverability_graph(net, m0)?.covers(target))
}

/// Whether `t` can still fire from `m`, i.e. `•t` is coverable from `m`.
pub fn is_live_from(net: &Net, m: &Marking, t: TransitionId) -> Result<bool> {
    is_live_from_omega(net, &m.to_omega(), t)
}

/// Liveness at an ω-marking: `t` is live at some finite marking below `v`.
pub fn is_live_from_omega(net: &Net, v: &OmegaVector, t: TransitionId) -> Result<bool> {
    net.check_transition(t)?;
    if net.enabled_omega(v, t) {
        return Ok(true);
    }
    let g = build_coverability_graph_from(net, v, DEFAULT_COVERABILITY_CAP)?;
    Ok(g.covers(net.pre(t)))
}

pub fn is_bounded(net: &Net) -> Result<bool> {
    Ok(build_coverability_graph(net, net.initial())?.is_bounded())
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
