//! GSIO and structural observability verdicts.
//!
//! Two independent structural routes are provided: one through the DM
//! decomposition of the bipartite encodings, one through linkings on the
//! digraph. Both always evaluate every sub-condition.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::dm::dm_decompose;
use crate::graph::{delta0, max_matching, theta, v_ess, y_reached, BipartiteGraph, SystemDigraph};
use crate::model::{one_based, SparsityPattern, StructuredSystem};

/// Conditions of the DM route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmConditions {
    /// `D(B(A,B,C))` has no horizontal part.
    pub cond1: bool,
    /// No middle component of `D(B'(A,B,C))` contains an s-edge.
    pub cond2: bool,
    /// Left vertices of `B(A,B,C)` in `V_0` (labels).
    pub horizontal: Vec<String>,
    /// 0-based indices of the s-edge components of `D(B'(A,B,C))`.
    pub s_edge_components: Vec<usize>,
    pub component_count: usize,
}

/// Conditions of the digraph route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphConditions {
    /// θ(X∪U, X∪Y) = n+q.
    pub cond1: bool,
    /// Every state is Y-reached.
    pub cond2: bool,
    /// Δ0 ⊆ V_ess(U, Y).
    pub cond3: bool,
    pub theta: usize,
    pub unreached_states: Vec<usize>,
    /// Reported separately; not part of `cond2`.
    pub unreached_inputs: Vec<usize>,
    pub delta0: Vec<usize>,
    /// States in V_ess(U, Y).
    pub v_ess_states: Vec<usize>,
    /// Δ0 minus V_ess.
    pub offending: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsioVerdict {
    pub overall: bool,
    pub dm: Option<DmConditions>,
    pub digraph: Option<DigraphConditions>,
}

impl GsioVerdict {
    /// True when both routes ran and disagree.
    pub fn routes_disagree(&self) -> bool {
        match (&self.dm, &self.digraph) {
            (Some(d), Some(g)) => (d.cond1 && d.cond2) != (g.cond1 && g.cond2 && g.cond3),
            _ => false,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut out = json!({ "overall": self.overall });
        if let Some(d) = &self.dm {
            out["dm"] = json!({
                "overall": d.cond1 && d.cond2,
                "cond1_no_horizontal": d.cond1,
                "cond2_no_s_edge_components": d.cond2,
                "horizontal_left": d.horizontal,
                "s_edge_components": d.s_edge_components.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "component_count": d.component_count,
            });
        }
        if let Some(g) = &self.digraph {
            out["digraph"] = json!({
                "overall": g.cond1 && g.cond2 && g.cond3,
                "cond1_theta": g.cond1,
                "cond2_y_reached": g.cond2,
                "cond3_delta0_in_v_ess": g.cond3,
                "theta": g.theta,
                "unreached_states": one_based(g.unreached_states.iter().copied()),
                "unreached_inputs": one_based(g.unreached_inputs.iter().copied()),
                "delta0": one_based(g.delta0.iter().copied()),
                "v_ess_states": one_based(g.v_ess_states.iter().copied()),
                "offending": one_based(g.offending.iter().copied()),
            });
        }
        if self.dm.is_some() && self.digraph.is_some() {
            out["routes_agree"] = json!(!self.routes_disagree());
        }
        out
    }
}

pub fn dm_conditions(sys: &StructuredSystem) -> DmConditions {
    let b = BipartiteGraph::from_system(sys, false);
    let d = dm_decompose(&b);
    let horizontal = d.v0_left.iter().map(|&l| b.left_label(l)).collect();
    let b_prime = BipartiteGraph::from_system(sys, true);
    let dp = dm_decompose(&b_prime);
    let s_edge_components = dp.s_edge_components();
    DmConditions {
        cond1: !d.has_horizontal(),
        cond2: s_edge_components.is_empty(),
        horizontal,
        s_edge_components,
        component_count: dp.k(),
    }
}

pub fn digraph_conditions(sys: &StructuredSystem) -> DigraphConditions {
    let g = SystemDigraph::from_system(sys);
    let (n, q) = (sys.n(), sys.q());
    let mut v1 = g.states();
    v1.extend(g.inputs());
    let mut v2 = g.states();
    v2.extend(g.outputs());
    let th = theta(&g, &v1, &v2);
    let reached = y_reached(&g);
    let mut is_reached = vec![false; n + q];
    for v in reached {
        is_reached[v] = true;
    }
    let unreached_states: Vec<usize> = (0..n).filter(|&i| !is_reached[i]).collect();
    let unreached_inputs: Vec<usize> = (0..q).filter(|&j| !is_reached[n + j]).collect();
    let d0 = delta0(&g);
    let ess: Vec<usize> = v_ess(&g, &g.inputs(), &g.outputs()).into_iter().filter(|&v| v < n).collect();
    let offending: Vec<usize> = d0.iter().copied().filter(|x| ess.binary_search(x).is_err()).collect();
    DigraphConditions {
        cond1: th == n + q,
        cond2: unreached_states.is_empty(),
        cond3: offending.is_empty(),
        theta: th,
        unreached_states,
        unreached_inputs,
        delta0: d0,
        v_ess_states: ess,
        offending,
    }
}

pub fn check_gsio_dm(sys: &StructuredSystem) -> GsioVerdict {
    let d = dm_conditions(sys);
    GsioVerdict {
        overall: d.cond1 && d.cond2,
        dm: Some(d),
        digraph: None,
    }
}

pub fn check_gsio_digraph(sys: &StructuredSystem) -> GsioVerdict {
    let g = digraph_conditions(sys);
    GsioVerdict {
        overall: g.cond1 && g.cond2 && g.cond3,
        dm: None,
        digraph: Some(g),
    }
}

/// Runs both routes. `overall` is their conjunction; see
/// [`GsioVerdict::routes_disagree`].
pub fn check_gsio_both(sys: &StructuredSystem) -> GsioVerdict {
    let d = dm_conditions(sys);
    let g = digraph_conditions(sys);
    GsioVerdict {
        overall: d.cond1 && d.cond2 && g.cond1 && g.cond2 && g.cond3,
        dm: Some(d),
        digraph: Some(g),
    }
}

/// Boolean GSIO test through the DM route, stopping early.
pub fn is_gsio(sys: &StructuredSystem) -> bool {
    let b = BipartiteGraph::from_system(sys, false);
    let m = max_matching(&b, &[]).expect("no must-match vertices");
    if !m.is_left_perfect() {
        return false;
    }
    let b_prime = BipartiteGraph::from_system(sys, true);
    dm_decompose(&b_prime).components.iter().all(|c| !c.has_s_edge)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructObsVerdict {
    pub overall: bool,
    pub theta: usize,
    pub unreached: Vec<usize>,
}

/// Structural observability of `(A, C)`: θ(X, X∪Y) = n and every state is Y-reached.
pub fn check_struct_obs(a: &SparsityPattern, c: &SparsityPattern) -> crate::Result<StructObsVerdict> {
    let g = SystemDigraph::from_state_matrix(a, c)?;
    let n = a.rows();
    let mut v2 = g.states();
    v2.extend(g.outputs());
    let th = theta(&g, &g.states(), &v2);
    let reach = g.reaching(&g.outputs());
    let unreached: Vec<usize> = (0..n).filter(|&i| !reach[i]).collect();
    Ok(StructObsVerdict {
        overall: th == n && unreached.is_empty(),
        theta: th,
        unreached,
    })
}

/// Generic rank: the term rank of the pattern.
pub fn generic_rank(m: &SparsityPattern) -> usize {
    max_matching(&BipartiteGraph::from_pattern(m), &[])
        .expect("no must-match vertices")
        .size()
}

/// Largest numerical rank over `trials` random realizations with free
/// entries drawn uniformly from `[1, 2]`. Singular values above `tolerance`
/// count towards the rank.
pub fn numeric_rank_oracle(m: &SparsityPattern, seed: u64, trials: usize, tolerance: f64) -> usize {
    assert!(trials >= 1, "at least one trial");
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials {
        let mut mat = DMatrix::<f64>::zeros(m.rows(), m.cols());
        for (r, c) in m.iter() {
            mat[(r, c)] = rng.random_range(1.0..=2.0);
        }
        let rank = mat.singular_values().iter().filter(|&&s| s > tolerance).count();
        best = best.max(rank);
    }
    best
}
