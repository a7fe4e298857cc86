//! Digraph and bipartite encodings plus the combinatorial kernels.
//!
//! `SystemDigraph` numbers its vertices as states `0..n`, inputs `n..n+q`
//! and outputs `n+q..n+q+m`. `BipartiteGraph` built from a system uses left
//! vertices `x^l` (`0..n`) then `u` (`n..n+q`), and right vertices `x^r`
//! (`0..n`) then `y` (`n..n+m`).

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{SparsityPattern, StructuredSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    State(usize),
    Input(usize),
    Output(usize),
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Vertex::State(i) => write!(f, "x{}", i + 1),
            Vertex::Input(j) => write!(f, "u{}", j + 1),
            Vertex::Output(k) => write!(f, "y{}", k + 1),
        }
    }
}

/// Directed graph `G(V, E)` of a structured system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDigraph {
    n: usize,
    q: usize,
    m: usize,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl SystemDigraph {
    pub fn from_system(sys: &StructuredSystem) -> Self {
        let (n, q, m) = (sys.n(), sys.q(), sys.m());
        let mut g = SystemDigraph::empty(n, q, m);
        for (i, j) in sys.a().iter() {
            g.add_edge(j, i);
        }
        for (i, j) in sys.b().iter() {
            g.add_edge(n + j, i);
        }
        for (i, j) in sys.c().iter() {
            g.add_edge(j, n + q + i);
        }
        for (i, j) in sys.d().iter() {
            g.add_edge(n + j, n + q + i);
        }
        g.finish();
        g
    }

    /// Graph of `(A, C)` with no inputs.
    pub fn from_state_matrix(a: &SparsityPattern, c: &SparsityPattern) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n || c.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{} and C has {} columns",
                n,
                a.cols(),
                c.cols()
            )));
        }
        let mut g = SystemDigraph::empty(n, 0, c.rows());
        for (i, j) in a.iter() {
            g.add_edge(j, i);
        }
        for (i, j) in c.iter() {
            g.add_edge(j, n + i);
        }
        g.finish();
        Ok(g)
    }

    fn empty(n: usize, q: usize, m: usize) -> Self {
        let v = n + q + m;
        SystemDigraph {
            n,
            q,
            m,
            succ: vec![Vec::new(); v],
            pred: vec![Vec::new(); v],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
        self.pred[to].push(from);
    }

    fn finish(&mut self) {
        for list in self.succ.iter_mut().chain(self.pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn vertex(&self, v: usize) -> Vertex {
        if v < self.n {
            Vertex::State(v)
        } else if v < self.n + self.q {
            Vertex::Input(v - self.n)
        } else {
            Vertex::Output(v - self.n - self.q)
        }
    }

    pub fn id(&self, v: Vertex) -> usize {
        match v {
            Vertex::State(i) => i,
            Vertex::Input(j) => self.n + j,
            Vertex::Output(k) => self.n + self.q + k,
        }
    }

    pub fn states(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn inputs(&self) -> Vec<usize> {
        (self.n..self.n + self.q).collect()
    }

    pub fn outputs(&self) -> Vec<usize> {
        (self.n + self.q..self.vertex_count()).collect()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn label(&self, v: usize) -> String {
        self.vertex(v).to_string()
    }

    /// Vertices reachable from `sources` (sources included).
    pub fn reachable_from(&self, sources: &[usize]) -> Vec<bool> {
        bfs(&self.succ, sources)
    }

    /// Vertices with a path into `targets` (targets included).
    pub fn reaching(&self, targets: &[usize]) -> Vec<bool> {
        bfs(&self.pred, targets)
    }
}

fn bfs(adj: &[Vec<usize>], sources: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Strongly connected components of a vertex subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Components ordered by their smallest vertex; vertices sorted.
    pub components: Vec<Vec<usize>>,
    /// Component of each vertex, `None` outside the chosen subset.
    pub component_of: Vec<Option<usize>>,
    /// Condensation DAG successors.
    pub successors: Vec<Vec<usize>>,
    pub sink: Vec<bool>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.sink[c]).collect()
    }
}

/// SCCs of `g` restricted to `vertices`, with the condensation DAG.
pub fn scc_decompose(g: &SystemDigraph, vertices: &[usize]) -> SccDecomposition {
    let mut active = vec![false; g.vertex_count()];
    for &v in vertices {
        active[v] = true;
    }
    scc_of(&g.succ, &active)
}

/// SCCs of the subgraph of `adj` induced by `active`.
pub(crate) fn scc_of(adj: &[Vec<usize>], active: &[bool]) -> SccDecomposition {
    let (raw, count) = tarjan(adj, active);
    let mut first = vec![usize::MAX; count];
    for (v, &c) in raw.iter().enumerate() {
        if c != usize::MAX && first[c] == usize::MAX {
            first[c] = v;
        }
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&c| first[c]);
    let mut rename = vec![0; count];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new;
    }
    let mut components = vec![Vec::new(); count];
    let mut component_of = vec![None; adj.len()];
    for (v, &c) in raw.iter().enumerate() {
        if c != usize::MAX {
            components[rename[c]].push(v);
            component_of[v] = Some(rename[c]);
        }
    }
    let mut succ_sets = vec![BTreeSet::new(); count];
    for (v, list) in adj.iter().enumerate() {
        let Some(cv) = component_of[v] else { continue };
        for &w in list {
            if let Some(cw) = component_of[w] {
                if cv != cw {
                    succ_sets[cv].insert(cw);
                }
            }
        }
    }
    let successors: Vec<Vec<usize>> = succ_sets.into_iter().map(|s| s.into_iter().collect()).collect();
    let sink = successors.iter().map(Vec::is_empty).collect();
    SccDecomposition {
        components,
        component_of,
        successors,
        sink,
    }
}

/// Iterative Tarjan. Returns the raw component id per vertex (`usize::MAX`
/// for inactive vertices) and the number of components.
fn tarjan(adj: &[Vec<usize>], active: &[bool]) -> (Vec<usize>, usize) {
    const NONE: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![NONE; n];
    let mut next = 0;
    let mut count = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !active[root] || index[root] != NONE {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));

        while let Some(&(v, i)) = call.last() {
            if i < adj[v].len() {
                call.last_mut().unwrap().1 += 1;
                let w = adj[v][i];
                if !active[w] {
                    continue;
                }
                if index[w] == NONE {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = count;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
    }
    (comp, count)
}

/// How vertex labels are rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Left `x^l, u`, right `x^r, y`.
    System { n: usize, q: usize, m: usize },
    /// Left = columns, right = rows of a plain matrix.
    Matrix,
}

const STRUCTURAL: u8 = 1;
const S_EDGE: u8 = 2;

/// An edge of a bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteEdge {
    pub left: usize,
    pub right: usize,
    /// Present as a structural (zero/free pattern) edge.
    pub structural: bool,
    /// An s-edge `(x_i^l, x_i^r)`.
    pub s_edge: bool,
}

/// Bipartite graph with per-edge s-flags. Parallel edges are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    layout: Layout,
    right_count: usize,
    adj: Vec<Vec<(usize, u8)>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteGraph {
            layout: Layout::Matrix,
            right_count: right,
            adj: vec![Vec::new(); left],
        }
    }

    /// Column-to-row graph of a pattern: an edge `(c, r)` per nonzero `(r, c)`.
    pub fn from_pattern(p: &SparsityPattern) -> Self {
        let mut g = BipartiteGraph::new(p.cols(), p.rows());
        for (r, c) in p.iter() {
            g.add_edge(c, r);
        }
        g
    }

    /// `B(A,B,C)`, or `B'(A,B,C)` when `with_s_edges`. `D` edges `u -> y`
    /// are included when present.
    pub fn from_system(sys: &StructuredSystem, with_s_edges: bool) -> Self {
        let (n, q, m) = (sys.n(), sys.q(), sys.m());
        let mut g = BipartiteGraph {
            layout: Layout::System { n, q, m },
            right_count: n + m,
            adj: vec![Vec::new(); n + q],
        };
        for (i, j) in sys.a().iter() {
            g.add_edge(j, i);
        }
        for (i, j) in sys.b().iter() {
            g.add_edge(n + j, i);
        }
        for (i, j) in sys.c().iter() {
            g.add_edge(j, n + i);
        }
        for (i, j) in sys.d().iter() {
            g.add_edge(n + j, n + i);
        }
        if with_s_edges {
            for i in 0..n {
                g.add_s_edge(i, i);
            }
        }
        g
    }

    pub fn add_edge(&mut self, left: usize, right: usize) {
        self.add_flags(left, right, STRUCTURAL);
    }

    pub fn add_s_edge(&mut self, left: usize, right: usize) {
        self.add_flags(left, right, S_EDGE);
    }

    fn add_flags(&mut self, left: usize, right: usize, flags: u8) {
        assert!(left < self.adj.len() && right < self.right_count, "edge endpoint out of range");
        let list = &mut self.adj[left];
        match list.binary_search_by_key(&right, |&(r, _)| r) {
            Ok(pos) => list[pos].1 |= flags,
            Err(pos) => list.insert(pos, (right, flags)),
        }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn left_count(&self) -> usize {
        self.adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    /// Right neighbours of `left`, ascending.
    pub fn neighbours(&self, left: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[left].iter().map(|&(r, _)| r)
    }

    pub fn edge(&self, left: usize, right: usize) -> Option<BipartiteEdge> {
        let list = &self.adj[left];
        list.binary_search_by_key(&right, |&(r, _)| r).ok().map(|pos| BipartiteEdge {
            left,
            right,
            structural: list[pos].1 & STRUCTURAL != 0,
            s_edge: list[pos].1 & S_EDGE != 0,
        })
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        self.edge(left, right).is_some()
    }

    pub fn edges(&self) -> impl Iterator<Item = BipartiteEdge> + '_ {
        self.adj.iter().enumerate().flat_map(|(l, list)| {
            list.iter().map(move |&(r, f)| BipartiteEdge {
                left: l,
                right: r,
                structural: f & STRUCTURAL != 0,
                s_edge: f & S_EDGE != 0,
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn left_label(&self, l: usize) -> String {
        match self.layout {
            Layout::System { n, .. } if l < n => format!("x{}^l", l + 1),
            Layout::System { n, .. } => format!("u{}", l - n + 1),
            Layout::Matrix => format!("c{}", l + 1),
        }
    }

    pub fn right_label(&self, r: usize) -> String {
        match self.layout {
            Layout::System { n, .. } if r < n => format!("x{}^r", r + 1),
            Layout::System { n, .. } => format!("y{}", r - n + 1),
            Layout::Matrix => format!("r{}", r + 1),
        }
    }

    /// State index of a left vertex, if it is some `x_i^l`.
    pub fn left_state(&self, l: usize) -> Option<usize> {
        match self.layout {
            Layout::System { n, .. } if l < n => Some(l),
            _ => None,
        }
    }
}

/// A set of vertex-disjoint edges of a bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    pub fn empty(left: usize, right: usize) -> Self {
        Matching {
            left: vec![None; left],
            right: vec![None; right],
            size: 0,
        }
    }

    /// Validates that `pairs` are disjoint edges of `g`.
    pub fn from_pairs(g: &BipartiteGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(g.left_count(), g.right_count());
        for &(l, r) in pairs {
            if l >= g.left_count() || r >= g.right_count() || !g.has_edge(l, r) {
                return Err(Error::Precondition(format!("({l}, {r}) is not an edge")));
            }
            if m.left[l].is_some() || m.right[r].is_some() {
                return Err(Error::Precondition(format!("({l}, {r}) shares a vertex")));
            }
            m.left[l] = Some(r);
            m.right[r] = Some(l);
            m.size += 1;
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn left_partner(&self, l: usize) -> Option<usize> {
        self.left[l]
    }

    pub fn right_partner(&self, r: usize) -> Option<usize> {
        self.right[r]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect()
    }

    pub fn unmatched_left(&self) -> Vec<usize> {
        (0..self.left.len()).filter(|&l| self.left[l].is_none()).collect()
    }

    pub fn unmatched_right(&self) -> Vec<usize> {
        (0..self.right.len()).filter(|&r| self.right[r].is_none()).collect()
    }

    pub fn matched_left(&self) -> Vec<usize> {
        (0..self.left.len()).filter(|&l| self.left[l].is_some()).collect()
    }

    pub fn matched_right(&self) -> Vec<usize> {
        (0..self.right.len()).filter(|&r| self.right[r].is_some()).collect()
    }

    pub fn is_left_perfect(&self) -> bool {
        self.size == self.left.len()
    }

    pub fn is_right_perfect(&self) -> bool {
        self.size == self.right.len()
    }
}

struct Augmenter {
    stamp_left: Vec<u32>,
    stamp_right: Vec<u32>,
    stamp: u32,
    stack: Vec<(usize, usize)>,
}

impl Augmenter {
    fn new(g: &BipartiteGraph) -> Self {
        Augmenter {
            stamp_left: vec![0; g.left_count()],
            stamp_right: vec![0; g.right_count()],
            stamp: 0,
            stack: Vec::new(),
        }
    }

    /// Depth-first search for an augmenting path from the free vertex `start`,
    /// scanning neighbours in ascending order.
    fn augment(&mut self, g: &BipartiteGraph, m: &mut Matching, start: usize) -> bool {
        self.stamp += 1;
        let stamp = self.stamp;
        self.stamp_left[start] = stamp;
        self.stack.clear();
        self.stack.push((start, 0));
        while let Some(&(l, i)) = self.stack.last() {
            if i >= g.adj[l].len() {
                self.stack.pop();
                continue;
            }
            self.stack.last_mut().unwrap().1 += 1;
            let r = g.adj[l][i].0;
            if self.stamp_right[r] == stamp {
                continue;
            }
            self.stamp_right[r] = stamp;
            match m.right[r] {
                None => {
                    for &(fl, fi) in &self.stack {
                        let fr = g.adj[fl][fi - 1].0;
                        m.left[fl] = Some(fr);
                        m.right[fr] = Some(fl);
                    }
                    m.size += 1;
                    return true;
                }
                Some(next) => {
                    if self.stamp_left[next] != stamp {
                        self.stamp_left[next] = stamp;
                        self.stack.push((next, 0));
                    }
                }
            }
        }
        false
    }
}

/// Maximum matching saturating every vertex of `must_match`.
///
/// The must-match vertices are augmented first in ascending order, then the
/// remaining left vertices, so matched vertices never become unmatched.
pub fn max_matching(g: &BipartiteGraph, must_match: &[usize]) -> Result<Matching> {
    let mut m = Matching::empty(g.left_count(), g.right_count());
    let mut aug = Augmenter::new(g);
    let mut must: Vec<usize> = must_match.to_vec();
    must.sort_unstable();
    must.dedup();
    let mut is_must = vec![false; g.left_count()];
    for &l in &must {
        if l >= g.left_count() {
            return Err(Error::BadIndex {
                index: l + 1,
                reason: "not a left vertex",
            });
        }
        is_must[l] = true;
        if !aug.augment(g, &mut m, l) {
            let stamp = aug.stamp;
            let violator = (0..g.left_count())
                .filter(|&v| aug.stamp_left[v] == stamp)
                .map(|v| g.left_label(v))
                .collect();
            let neighbours = aug.stamp_right.iter().filter(|&&s| s == stamp).count();
            return Err(Error::Unsaturable { violator, neighbours });
        }
    }
    for (l, &must) in is_must.iter().enumerate() {
        if !must {
            aug.augment(g, &mut m, l);
        }
    }
    Ok(m)
}

/// θ(V1, V2): maximum number of vertex-disjoint edges from `v1` to `v2`.
pub fn theta(g: &SystemDigraph, v1: &[usize], v2: &[usize]) -> usize {
    let mut pos2 = vec![usize::MAX; g.vertex_count()];
    for (k, &v) in v2.iter().enumerate() {
        pos2[v] = k;
    }
    let mut b = BipartiteGraph::new(v1.len(), v2.len());
    for (k, &u) in v1.iter().enumerate() {
        for &w in g.successors(u) {
            if pos2[w] != usize::MAX {
                b.add_edge(k, pos2[w]);
            }
        }
    }
    max_matching(&b, &[]).map(|m| m.size()).unwrap_or(0)
}

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u8,
}

/// Unit-capacity flow network with vertex splitting.
#[derive(Debug, Clone)]
struct SplitNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
}

impl SplitNetwork {
    /// `v_in = 2v`, `v_out = 2v + 1`; deleted vertices get no internal arc.
    fn build(g: &SystemDigraph, v1: &[usize], v2: &[usize], deleted: Option<usize>) -> Self {
        let nv = g.vertex_count();
        let source = 2 * nv;
        let sink = 2 * nv + 1;
        let mut net = SplitNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); 2 * nv + 2],
            source,
            sink,
        };
        for v in 0..nv {
            if Some(v) != deleted {
                net.add_arc(2 * v, 2 * v + 1);
            }
        }
        for (u, w) in g.edges() {
            net.add_arc(2 * u + 1, 2 * w);
        }
        for &v in unique(v1).iter() {
            net.add_arc(source, 2 * v);
        }
        for &v in unique(v2).iter() {
            net.add_arc(2 * v + 1, sink);
        }
        net
    }

    fn add_arc(&mut self, from: usize, to: usize) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap: 1 });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    /// One breadth-first augmentation.
    fn augment(&mut self) -> bool {
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::new();
        seen[self.source] = true;
        queue.push_back(self.source);
        while let Some(v) = queue.pop_front() {
            if v == self.sink {
                break;
            }
            for &a in &self.adj[v] {
                let to = self.arcs[a].to;
                if self.arcs[a].cap > 0 && !seen[to] {
                    seen[to] = true;
                    parent[to] = a;
                    queue.push_back(to);
                }
            }
        }
        if !seen[self.sink] {
            return false;
        }
        let mut v = self.sink;
        while v != self.source {
            let a = parent[v];
            self.arcs[a].cap -= 1;
            self.arcs[a ^ 1].cap += 1;
            v = self.arcs[a ^ 1].to;
        }
        true
    }

    fn max_flow(&mut self) -> usize {
        let mut flow = 0;
        while self.augment() {
            flow += 1;
        }
        flow
    }

    /// Vertices whose internal arc carries flow.
    fn used_vertices(&self, nv: usize) -> Vec<usize> {
        (0..nv)
            .filter(|&v| {
                self.adj[2 * v]
                    .iter()
                    .any(|&a| a % 2 == 0 && self.arcs[a].to == 2 * v + 1 && self.arcs[a].cap == 0)
            })
            .collect()
    }

    /// Decomposes the current flow into vertex paths.
    fn paths(&self) -> Vec<Vec<usize>> {
        let mut used = vec![0u8; self.arcs.len()];
        for a in (0..self.arcs.len()).step_by(2) {
            if self.arcs[a].cap == 0 {
                used[a] = 1;
            }
        }
        let mut out = Vec::new();
        while let Some(first) = self.adj[self.source]
            .iter()
            .copied()
            .find(|&a| a % 2 == 0 && used[a] == 1)
        {
            used[first] = 0;
            let mut node = self.arcs[first].to;
            let mut path = Vec::new();
            while node != self.sink {
                if node.is_multiple_of(2) {
                    path.push(node / 2);
                }
                let next = self.adj[node]
                    .iter()
                    .copied()
                    .find(|&a| a % 2 == 0 && used[a] == 1)
                    .expect("flow conservation");
                used[next] = 0;
                node = self.arcs[next].to;
            }
            out.push(path);
        }
        out
    }
}

fn unique(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// ρ(V1, V2): maximum number of vertex-disjoint paths from `v1` to `v2`.
///
/// A vertex in both sets is a path of length zero. Paths may pass through
/// other vertices of `v1` or `v2`.
pub fn rho(g: &SystemDigraph, v1: &[usize], v2: &[usize]) -> usize {
    SplitNetwork::build(g, v1, v2, None).max_flow()
}

/// ρ(V1, V2) in `g` with vertex `deleted` removed.
pub fn rho_without(g: &SystemDigraph, v1: &[usize], v2: &[usize], deleted: usize) -> usize {
    SplitNetwork::build(g, v1, v2, Some(deleted)).max_flow()
}

/// One maximum `v1`-`v2` linking as vertex sequences.
pub fn max_linking(g: &SystemDigraph, v1: &[usize], v2: &[usize]) -> Vec<Vec<usize>> {
    let mut net = SplitNetwork::build(g, v1, v2, None);
    net.max_flow();
    net.paths()
}

/// V_ess(V1, V2): vertices whose deletion lowers ρ(V1, V2), ascending.
///
/// Only vertices on one maximum linking can be essential, so only those are
/// re-tested.
pub fn v_ess(g: &SystemDigraph, v1: &[usize], v2: &[usize]) -> Vec<usize> {
    let mut net = SplitNetwork::build(g, v1, v2, None);
    let base = net.max_flow();
    if base == 0 {
        return Vec::new();
    }
    net.used_vertices(g.vertex_count())
        .into_iter()
        .filter(|&v| rho_without(g, v1, v2, v) < base)
        .collect()
}

/// Δ0 = {x : ρ(U ∪ {x}, Y) = ρ(U, Y)}, ascending state indices.
pub fn delta0(g: &SystemDigraph) -> Vec<usize> {
    let mut net = SplitNetwork::build(g, &g.inputs(), &g.outputs(), None);
    net.max_flow();
    (0..g.n())
        .filter(|&x| {
            let mut trial = net.clone();
            trial.add_arc(trial.source, 2 * x);
            !trial.augment()
        })
        .collect()
}

/// States and inputs with a directed path to some output, ascending.
pub fn y_reached(g: &SystemDigraph) -> Vec<usize> {
    let reach = g.reaching(&g.outputs());
    (0..g.n() + g.q()).filter(|&v| reach[v]).collect()
}
