//! Dulmage-Mendelsohn decomposition with s-edge bookkeeping.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{max_matching, scc_of, BipartiteGraph, Matching};

/// Where a vertex ended up in the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Horizontal,
    Middle(usize),
    Vertical,
}

/// A consistent square component `B_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmComponent {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub has_s_edge: bool,
}

/// `D(B)`: `V_0`, the ordered middle components and `V_∞`.
///
/// Middle components are indexed consistently with `≺`: if `B_b ≺ B_a`
/// then `b < a`.
#[derive(Debug, Clone)]
pub struct DmDecomposition {
    pub v0_left: Vec<usize>,
    pub v0_right: Vec<usize>,
    pub vinf_left: Vec<usize>,
    pub vinf_right: Vec<usize>,
    pub components: Vec<DmComponent>,
    pub left_part: Vec<Part>,
    pub right_part: Vec<Part>,
    /// `below[a]` lists the components `b` with `B_b ≺ B_a` directly.
    pub below: Vec<Vec<usize>>,
    pub matching: Matching,
    left_states: Vec<Option<usize>>,
}

/// Decomposes `g` using the deterministic maximum matching.
pub fn dm_decompose(g: &BipartiteGraph) -> DmDecomposition {
    let m = max_matching(g, &[]).expect("no must-match vertices");
    build(g, m)
}

/// Decomposes `g` using a caller-provided maximum matching.
pub fn dm_decompose_with(g: &BipartiteGraph, m: Matching) -> Result<DmDecomposition> {
    let best = max_matching(g, &[]).expect("no must-match vertices");
    if m.size() != best.size() {
        return Err(Error::Precondition(format!(
            "matching of size {} is not maximum ({})",
            m.size(),
            best.size()
        )));
    }
    for (l, r) in m.pairs() {
        if !g.has_edge(l, r) {
            return Err(Error::Precondition(format!("({l}, {r}) is not an edge")));
        }
    }
    Ok(build(g, m))
}

fn build(g: &BipartiteGraph, m: Matching) -> DmDecomposition {
    let nl = g.left_count();
    let nr = g.right_count();
    // auxiliary graph: left l -> right r for every edge, right r -> left l for matched pairs
    let total = nl + nr;
    let mut fwd = vec![Vec::new(); total];
    let mut rev = vec![Vec::new(); total];
    for e in g.edges() {
        fwd[e.left].push(nl + e.right);
        rev[nl + e.right].push(e.left);
    }
    for (l, r) in m.pairs() {
        fwd[nl + r].push(l);
        rev[l].push(nl + r);
    }

    let start0: Vec<usize> = m.unmatched_left();
    let start_inf: Vec<usize> = m.unmatched_right().into_iter().map(|r| nl + r).collect();
    let in0 = reach(&fwd, &start0);
    let in_inf = reach(&rev, &start_inf);

    let active: Vec<bool> = (0..total).map(|v| !in0[v] && !in_inf[v]).collect();
    let scc = scc_of(&fwd, &active);
    let k = scc.len();

    // index by Kahn order: a component is ready once every component it reaches is placed
    let key: Vec<usize> = scc
        .components
        .iter()
        .map(|vs| vs.iter().filter(|&&v| v >= nl).map(|&v| v - nl).min().unwrap_or(usize::MAX))
        .collect();
    let mut pending: Vec<usize> = scc.successors.iter().map(Vec::len).collect();
    let mut preds = vec![Vec::new(); k];
    for (a, list) in scc.successors.iter().enumerate() {
        for &b in list {
            preds[b].push(a);
        }
    }
    let mut ready: BTreeSet<(usize, usize)> = (0..k).filter(|&c| pending[c] == 0).map(|c| (key[c], c)).collect();
    let mut new_index = vec![usize::MAX; k];
    let mut next = 0;
    while let Some(&(kc, c)) = ready.iter().next() {
        ready.remove(&(kc, c));
        new_index[c] = next;
        next += 1;
        for &a in &preds[c] {
            pending[a] -= 1;
            if pending[a] == 0 {
                ready.insert((key[a], a));
            }
        }
    }

    let mut components = vec![
        DmComponent {
            left: Vec::new(),
            right: Vec::new(),
            has_s_edge: false,
        };
        k
    ];
    let mut left_part = vec![Part::Horizontal; nl];
    let mut right_part = vec![Part::Horizontal; nr];
    for v in 0..total {
        let part = if in0[v] {
            Part::Horizontal
        } else if in_inf[v] {
            Part::Vertical
        } else {
            Part::Middle(new_index[scc.component_of[v].expect("active vertex")])
        };
        if v < nl {
            left_part[v] = part;
        } else {
            right_part[v - nl] = part;
        }
        if let Part::Middle(i) = part {
            if v < nl {
                components[i].left.push(v);
            } else {
                components[i].right.push(v - nl);
            }
        }
    }
    for e in g.edges() {
        if e.s_edge {
            if let (Part::Middle(a), Part::Middle(b)) = (left_part[e.left], right_part[e.right]) {
                if a == b {
                    components[a].has_s_edge = true;
                }
            }
        }
    }
    let mut below = vec![Vec::new(); k];
    for (a, list) in scc.successors.iter().enumerate() {
        let mut v: Vec<usize> = list.iter().map(|&b| new_index[b]).collect();
        v.sort_unstable();
        below[new_index[a]] = v;
    }

    let pick = |flags: &[bool], lo: usize, hi: usize| -> Vec<usize> { (lo..hi).filter(|&v| flags[v]).map(|v| v - lo).collect() };
    DmDecomposition {
        v0_left: pick(&in0, 0, nl),
        v0_right: pick(&in0, nl, total),
        vinf_left: pick(&in_inf, 0, nl),
        vinf_right: pick(&in_inf, nl, total),
        components,
        left_part,
        right_part,
        below,
        matching: m,
        left_states: (0..nl).map(|l| g.left_state(l)).collect(),
    }
}

fn reach(adj: &[Vec<usize>], sources: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

impl DmDecomposition {
    /// Number of middle components `k`.
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn has_horizontal(&self) -> bool {
        !self.v0_left.is_empty() || !self.v0_right.is_empty()
    }

    pub fn has_vertical(&self) -> bool {
        !self.vinf_left.is_empty() || !self.vinf_right.is_empty()
    }

    /// Components `b` with `B_b ≺ B_a`, i.e. reachable from `B_a`, ascending.
    pub fn downstream(&self, a: usize) -> Vec<usize> {
        let mut seen = vec![false; self.k()];
        let mut stack = self.below[a].clone();
        while let Some(b) = stack.pop() {
            if !std::mem::replace(&mut seen[b], true) {
                stack.extend(self.below[b].iter().copied());
            }
        }
        (0..self.k()).filter(|&b| seen[b]).collect()
    }

    /// `B_b ≺ B_a`.
    pub fn precedes(&self, b: usize, a: usize) -> bool {
        self.downstream(a).contains(&b)
    }

    /// Middle components holding an s-edge, ascending.
    pub fn s_edge_components(&self) -> Vec<usize> {
        (0..self.k()).filter(|&i| self.components[i].has_s_edge).collect()
    }

    /// `R_i`: states whose left copy lies in `B_i` or a component below it.
    pub fn r_set(&self, i: usize) -> Vec<usize> {
        let mut comps = self.downstream(i);
        comps.push(i);
        let mut out: Vec<usize> = comps
            .iter()
            .flat_map(|&c| self.components[c].left.iter())
            .filter_map(|&l| self.left_states[l])
            .collect();
        out.sort_unstable();
        out
    }
}

/// s-edge components of a `B'`-style decomposition with their `R_i` sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SEdgeReport {
    /// 0-based middle-component indices.
    pub flagged: Vec<usize>,
    /// `R_i` for each flagged component, same order.
    pub r_sets: Vec<Vec<usize>>,
}

impl SEdgeReport {
    pub fn f_count(&self) -> usize {
        self.flagged.len()
    }
}

pub fn s_edge_report(d: &DmDecomposition) -> SEdgeReport {
    let flagged = d.s_edge_components();
    let r_sets = flagged.iter().map(|&i| d.r_set(i)).collect();
    SEdgeReport { flagged, r_sets }
}

#[derive(Debug, Serialize)]
struct ComponentJson {
    index: usize,
    left: Vec<String>,
    right: Vec<String>,
    has_s_edge: bool,
    below: Vec<usize>,
}

/// JSON rendering with 1-based component indices and vertex labels.
pub fn decomposition_to_json(g: &BipartiteGraph, d: &DmDecomposition) -> serde_json::Value {
    let left = |v: &[usize]| v.iter().map(|&l| g.left_label(l)).collect::<Vec<_>>();
    let right = |v: &[usize]| v.iter().map(|&r| g.right_label(r)).collect::<Vec<_>>();
    let comps: Vec<ComponentJson> = d
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| ComponentJson {
            index: i + 1,
            left: left(&c.left),
            right: right(&c.right),
            has_s_edge: c.has_s_edge,
            below: d.below[i].iter().map(|b| b + 1).collect(),
        })
        .collect();
    serde_json::json!({
        "matching_size": d.matching.size(),
        "v0": {"left": left(&d.v0_left), "right": right(&d.v0_right)},
        "vinf": {"left": left(&d.vinf_left), "right": right(&d.vinf_right)},
        "components": comps,
        "s_edge_components": d.s_edge_components().iter().map(|i| i + 1).collect::<Vec<_>>(),
    })
}
