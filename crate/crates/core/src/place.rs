//! Sensor placement solvers.
//!
//! Solvers that take a [`StructuredSystem`] only look at `A` and `B` unless
//! stated otherwise; any outputs already present are ignored.

use serde_json::json;

use crate::dm::{dm_decompose, s_edge_report};
use crate::error::{Error, Result};
use crate::graph::{
    max_matching, rho, scc_decompose, v_ess, BipartiteGraph, SccDecomposition, SystemDigraph,
};
use crate::model::{one_based, Axis, PlacementResult, Sensor, SparsityPattern, Stage, StructuredSystem};
use crate::verify::{check_struct_obs, generic_rank, is_gsio};

/// Default number of candidate positions `exact_min` accepts.
pub const DEFAULT_EXACT_CAP: usize = 16;

fn require_full_input_rank(sys: &StructuredSystem) -> Result<()> {
    let rank = generic_rank(sys.b());
    if rank < sys.q() {
        return Err(Error::RankDeficientInputs { rank, q: sys.q() });
    }
    Ok(())
}

fn require_dedicated_inputs(sys: &StructuredSystem) -> Result<()> {
    if !sys.b().is_dedicated(Axis::Columns) {
        return Err(Error::Precondition("B is not a dedicated input matrix".into()));
    }
    Ok(())
}

/// Minimum placement making `B(A,B,C1)` left-perfect.
///
/// The sensors sit on the states left unmatched by the deterministic
/// input-saturating maximum matching of `B(A,B)`.
pub fn stage1_placement(sys: &StructuredSystem) -> Result<PlacementResult> {
    require_full_input_rank(sys)?;
    let ab = sys.without_outputs();
    let g = BipartiteGraph::from_system(&ab, false);
    let inputs: Vec<usize> = (sys.n()..sys.n() + sys.q()).collect();
    let m = max_matching(&g, &inputs)?;
    let states: Vec<usize> = m.unmatched_left().into_iter().filter(|&l| l < sys.n()).collect();
    PlacementResult::from_states(&states, Stage::Stage1)
}

/// Greedy completion of `sys` (with its current outputs) until no middle
/// component of `D(B'(A,B,C))` holds an s-edge.
///
/// Each round measures the unmeasured state lying in the most `R_i` sets of
/// the flagged components, lowest index on ties.
pub fn stage2_greedy(sys: &StructuredSystem) -> Result<PlacementResult> {
    let b = BipartiteGraph::from_system(sys, false);
    if !max_matching(&b, &[])?.is_left_perfect() {
        return Err(Error::Precondition("B(A,B,C) has no left-perfect matching".into()));
    }
    let mut current = sys.clone();
    let mut result = PlacementResult::default();
    loop {
        let report = s_edge_report(&dm_decompose(&BipartiteGraph::from_system(&current, true)));
        if report.f_count() == 0 {
            return Ok(result);
        }
        let measured = current.measured_states();
        let mut alpha = vec![0usize; sys.n()];
        for r in &report.r_sets {
            for &x in r {
                alpha[x] += 1;
            }
        }
        let best = (0..sys.n())
            .filter(|x| !measured.contains(x))
            .max_by_key(|&x| (alpha[x], std::cmp::Reverse(x)))
            .filter(|&x| alpha[x] > 0)
            .ok_or_else(|| Error::Infeasible("no unmeasured state resolves a flagged component".into()))?;
        result.push(Sensor::State(best), Stage::Stage2);
        current = current.with_state_sensors(&[best])?;
    }
}

/// Stage 1 followed by greedy stage 2.
pub fn two_stage(sys: &StructuredSystem) -> Result<PlacementResult> {
    let mut result = stage1_placement(sys)?;
    let with_c1 = sys.without_outputs().with_state_sensors(&result.measured_states())?;
    let stage2 = stage2_greedy(&with_c1)?;
    result.extend(&stage2);
    Ok(result)
}

/// Minimum dedicated placement by enumeration, using [`DEFAULT_EXACT_CAP`].
pub fn exact_min(sys: &StructuredSystem, allow_input: bool) -> Result<PlacementResult> {
    exact_min_with_cap(sys, allow_input, DEFAULT_EXACT_CAP)
}

/// Minimum dedicated placement by enumeration over candidate positions
/// (states, then inputs when `allow_input`), by cardinality and then
/// lexicographically.
pub fn exact_min_with_cap(sys: &StructuredSystem, allow_input: bool, cap: usize) -> Result<PlacementResult> {
    let (n, q) = (sys.n(), sys.q());
    let candidates = n + if allow_input { q } else { 0 };
    if candidates > cap {
        return Err(Error::CapExceeded { candidates, cap });
    }
    let ab = sys.without_outputs();
    let deficiency = {
        let g = BipartiteGraph::from_system(&ab, false);
        n + q - max_matching(&g, &[])?.size()
    };
    let mut chosen = Vec::new();
    for k in deficiency..=candidates {
        let found = for_each_combination(candidates, k, &mut chosen, &mut |set| {
            let states: Vec<usize> = set.iter().copied().filter(|&c| c < n).collect();
            let inputs: Vec<usize> = set.iter().copied().filter(|&c| c >= n).map(|c| c - n).collect();
            ab.with_sensors(&states, &inputs).map(|s| is_gsio(&s)).unwrap_or(false)
        });
        if found {
            let sensors = chosen
                .iter()
                .map(|&c| {
                    let s = if c < n { Sensor::State(c) } else { Sensor::Input(c - n) };
                    (s, Stage::Stage1)
                })
                .collect();
            return PlacementResult::new(sensors);
        }
    }
    Err(Error::Infeasible("no dedicated placement makes the system GSIO".into()))
}

/// Calls `test` on every `k`-subset of `0..n` in lexicographic order until it
/// returns true; the accepted subset is left in `out`.
pub(crate) fn for_each_combination(
    n: usize,
    k: usize,
    out: &mut Vec<usize>,
    test: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if test(&idx) {
            *out = idx;
            return true;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Pattern of `Â`: inputs adjoined as states `n..n+q`, every edge into an
/// input-driven state removed (self-loops included), input edges kept.
pub fn auxiliary_system(sys: &StructuredSystem) -> Result<SparsityPattern> {
    require_dedicated_inputs(sys)?;
    let (n, q) = (sys.n(), sys.q());
    let mut driven = vec![false; n];
    for (i, _) in sys.b().iter() {
        driven[i] = true;
    }
    let mut ahat = SparsityPattern::zeros(n + q, n + q);
    for (i, j) in sys.a().iter() {
        if !driven[i] {
            ahat.insert(i, j);
        }
    }
    for (i, k) in sys.b().iter() {
        ahat.insert(i, n + k);
    }
    Ok(ahat)
}

/// Minimum structural observability placement of an input-free pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinObsResult {
    pub h: usize,
    /// Measured states, ascending.
    pub witness: Vec<usize>,
    /// `n − m*`.
    pub deficiency: usize,
    /// Number of sink SCCs.
    pub beta: usize,
    /// Sink SCCs that can host a left-unmatched vertex simultaneously.
    pub alpha: usize,
}

impl MinObsResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "h": self.h,
            "witness": one_based(self.witness.iter().copied()),
            "deficiency": self.deficiency,
            "beta": self.beta,
            "alpha": self.alpha,
        })
    }
}

/// `H(Aobs)`: fewest dedicated sensors, drawn from `candidates` (all states
/// when `None`), making `Aobs` structurally observable.
///
/// Computed as `(n − m*) + (β − α)` through one maximum-weight matching on
/// the state bipartite graph extended by a virtual right vertex per sink SCC.
pub fn min_struct_obs(aobs: &SparsityPattern, candidates: Option<&[usize]>) -> Result<MinObsResult> {
    let n = aobs.rows();
    if aobs.cols() != n {
        return Err(Error::DimensionMismatch(format!("pattern is {}x{}, expected square", n, aobs.cols())));
    }
    let mut candidate = vec![candidates.is_none(); n];
    if let Some(list) = candidates {
        for &c in list {
            if c >= n {
                return Err(Error::BadIndex {
                    index: c + 1,
                    reason: "not a state index",
                });
            }
            candidate[c] = true;
        }
    }
    let g = SystemDigraph::from_state_matrix(aobs, &SparsityPattern::zeros(0, n))?;
    let scc = scc_decompose(&g, &g.states());
    let sinks = scc.sinks();
    let beta = sinks.len();

    let k = (n + 1) as i64;
    let forced_bonus = k * (n as i64 + 1);
    let cols = n + beta;
    let mut weight = vec![vec![0i64; cols]; n];
    for (i, j) in aobs.iter() {
        // edge x_j -> x_i: left x_j^l, right x_i^r
        weight[j][i] = if candidate[j] { k } else { k + forced_bonus };
    }
    for (t, &c) in sinks.iter().enumerate() {
        for &v in &scc.components[c] {
            if candidate[v] {
                weight[v][n + t] = 1;
            }
        }
    }
    let assign = max_weight_assignment(&weight);

    let mut matched_original = 0;
    let mut covered = vec![false; beta];
    let mut witness = Vec::new();
    for (l, &col) in assign.iter().enumerate() {
        let real = col.filter(|&c| weight[l][c] > 0);
        match real {
            Some(c) if c < n => matched_original += 1,
            other => {
                if !candidate[l] {
                    return Err(Error::Infeasible(format!(
                        "x{} cannot be matched and is not a candidate",
                        l + 1
                    )));
                }
                if let Some(c) = other {
                    covered[c - n] = true;
                }
                witness.push(l);
            }
        }
    }
    let alpha = covered.iter().filter(|&&c| c).count();
    for (t, &c) in sinks.iter().enumerate() {
        if !covered[t] {
            let pick = scc.components[c].iter().copied().find(|&v| candidate[v]).ok_or_else(|| {
                Error::Infeasible(format!(
                    "sink component containing x{} has no candidate state",
                    scc.components[c][0] + 1
                ))
            })?;
            witness.push(pick);
        }
    }
    witness.sort_unstable();
    let deficiency = n - matched_original;
    Ok(MinObsResult {
        h: deficiency + beta - alpha,
        witness,
        deficiency,
        beta,
        alpha,
    })
}

/// Maximum-weight assignment of rows to distinct columns (rows ≤ columns),
/// Hungarian method on negated weights. Zero-weight pairs mean "unassigned".
fn max_weight_assignment(weight: &[Vec<i64>]) -> Vec<Option<usize>> {
    let n = weight.len();
    if n == 0 {
        return Vec::new();
    }
    let mut m = weight[0].len();
    // pad so that every row can stay unassigned
    let pad = n.saturating_sub(m);
    m += pad;
    let cost = |i: usize, j: usize| -> i64 {
        if j < weight[i].len() {
            -weight[i][j]
        } else {
            0
        }
    };
    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let real_cols = m - pad;
    let mut out = vec![None; n];
    for j in 1..=m {
        if p[j] != 0 && j - 1 < real_cols {
            out[p[j] - 1] = Some(j - 1);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsVariant {
    /// Only states may be measured.
    Dedicated,
    /// States and inputs may be measured.
    DirectMeasure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsResult {
    pub variant: BoundsVariant,
    pub lower: usize,
    /// Analytic upper bound clamped to `n`.
    pub upper: usize,
    /// `H + q` before clamping.
    pub analytic_upper: usize,
    /// A feasible placement with at most `upper` sensors.
    pub witness: PlacementResult,
    pub h: MinObsResult,
}

impl BoundsResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "variant": match self.variant {
                BoundsVariant::Dedicated => "dedicated",
                BoundsVariant::DirectMeasure => "direct-measure",
            },
            "lower": self.lower,
            "upper": self.upper,
            "analytic_upper": self.analytic_upper,
            "witness_size": self.witness.total(),
            "witness": self.witness.to_json(),
            "h": self.h.to_json(),
        })
    }
}

fn input_driven_states(sys: &StructuredSystem) -> Vec<usize> {
    let mut v: Vec<usize> = sys.b().iter().map(|(i, _)| i).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `[H(Â), min(H(Â)+q, n)]` for placements measuring states only.
pub fn bounds_dedicated(sys: &StructuredSystem) -> Result<BoundsResult> {
    require_dedicated_inputs(sys)?;
    let (n, q) = (sys.n(), sys.q());
    let ahat = auxiliary_system(sys)?;
    let originals: Vec<usize> = (0..n).collect();
    let h = min_struct_obs(&ahat, Some(&originals))?;
    let upper = (h.h + q).min(n);

    let ab = sys.without_outputs();
    let feasible = |states: &[usize]| -> bool {
        states.len() <= upper && ab.with_state_sensors(states).map(|s| is_gsio(&s)).unwrap_or(false)
    };
    // sensors of H(Â) plus every input-driven state they leave unmeasured
    let mut union = h.witness.clone();
    for x in input_driven_states(sys) {
        if !union.contains(&x) {
            union.push(x);
        }
    }
    union.sort_unstable();
    let witness = if feasible(&union) {
        PlacementResult::new(
            union
                .iter()
                .map(|&x| {
                    let stage = if h.witness.contains(&x) { Stage::Stage1 } else { Stage::Extra };
                    (Sensor::State(x), stage)
                })
                .collect(),
        )?
    } else {
        let fallback = two_stage(sys)?;
        if fallback.total() > upper {
            return Err(Error::Infeasible(format!(
                "no witness within the upper bound {upper} was constructed"
            )));
        }
        fallback
    };
    Ok(BoundsResult {
        variant: BoundsVariant::Dedicated,
        lower: h.h,
        upper,
        analytic_upper: h.h + q,
        witness,
        h,
    })
}

/// `[H(A), min(H(A)+q, n)]` when inputs may be measured directly.
pub fn bounds_direct_measure(sys: &StructuredSystem) -> Result<BoundsResult> {
    require_dedicated_inputs(sys)?;
    let (n, q) = (sys.n(), sys.q());
    let h = min_struct_obs(sys.a(), None)?;
    let upper = (h.h + q).min(n);
    let ab = sys.without_outputs();
    let inputs: Vec<usize> = (0..q).collect();
    let mut sensors: Vec<(Sensor, Stage)> = h.witness.iter().map(|&x| (Sensor::State(x), Stage::Stage1)).collect();
    sensors.extend(inputs.iter().map(|&u| (Sensor::Input(u), Stage::Extra)));
    let mut witness = PlacementResult::new(sensors)?;
    let ok = witness.total() <= upper
        && ab
            .with_sensors(&witness.measured_states(), &witness.measured_inputs())
            .map(|s| is_gsio(&s))
            .unwrap_or(false);
    if !ok {
        let all: Vec<usize> = (0..n).collect();
        witness = PlacementResult::from_states(&all, Stage::Extra)?;
        if !ab.with_state_sensors(&all).map(|s| is_gsio(&s)).unwrap_or(false) {
            return Err(Error::Infeasible("measuring every state does not give GSIO".into()));
        }
    }
    Ok(BoundsResult {
        variant: BoundsVariant::DirectMeasure,
        lower: h.h,
        upper,
        analytic_upper: h.h + q,
        witness,
        h,
    })
}

/// Number of sink SCCs of `ahat` reachable from its input vertex, which is
/// taken to be the last vertex.
pub fn l_count(ahat: &SparsityPattern) -> usize {
    let size = ahat.rows();
    if size == 0 {
        return 0;
    }
    let (scc, reach) = sinks_and_reach(ahat, size - 1);
    scc.sinks().into_iter().filter(|&c| reach[scc.components[c][0]]).count()
}

fn sinks_and_reach(ahat: &SparsityPattern, source: usize) -> (SccDecomposition, Vec<bool>) {
    let g = SystemDigraph::from_state_matrix(ahat, &SparsityPattern::zeros(0, ahat.rows()))
        .expect("square pattern");
    let scc = scc_decompose(&g, &g.states());
    let reach = g.reachable_from(&[source]);
    (scc, reach)
}

fn check_selfloop_preconditions(sys: &StructuredSystem) -> Result<SparsityPattern> {
    if let Some(i) = (0..sys.n()).find(|&i| !sys.a().contains(i, i)) {
        return Err(Error::Precondition(format!("x{} has no self-loop", i + 1)));
    }
    if sys.q() != 1 {
        return Err(Error::Precondition(format!("expected exactly one input, found {}", sys.q())));
    }
    require_dedicated_inputs(sys)?;
    auxiliary_system(sys)
}

/// Polynomial-time optimum for self-loop systems with one dedicated input
/// whose auxiliary graph has more than one input-reachable sink SCC.
pub fn polycase_selfloop(sys: &StructuredSystem) -> Result<PlacementResult> {
    let ahat = check_selfloop_preconditions(sys)?;
    let l = l_count(&ahat);
    if l <= 1 {
        return Err(Error::Precondition(format!("L = {l}, expected more than one")));
    }
    let n = sys.n();
    let originals: Vec<usize> = (0..n).collect();
    let ymin = min_struct_obs(&ahat, Some(&originals))?.witness;
    let closed = sys.without_outputs().with_state_sensors(&ymin)?;
    let g = SystemDigraph::from_system(&closed);
    let base = rho(&g, &g.inputs(), &g.outputs());
    let ess = v_ess(&g, &g.inputs(), &g.outputs());
    let offending: Vec<usize> = (0..n)
        .filter(|x| ess.binary_search(x).is_err())
        .filter(|&x| {
            let mut v1 = g.inputs();
            v1.push(x);
            rho(&g, &v1, &g.outputs()) == base
        })
        .collect();
    let mut result = PlacementResult::from_states(&ymin, Stage::Stage1)?;
    if offending.is_empty() {
        return Ok(result);
    }
    let order = offending.iter().copied().chain((0..n).filter(|x| !ymin.contains(x)));
    for x in order {
        if ymin.contains(&x) {
            continue;
        }
        if is_gsio(&closed.with_state_sensors(&[x])?) {
            result.push(Sensor::State(x), Stage::Extra);
            return Ok(result);
        }
    }
    Err(Error::Infeasible("no single extra sensor completes the placement".into()))
}

/// The `L = 1` case: sensors on sink SCCs the input cannot reach, then the
/// smallest completion of at most two states.
pub fn polycase_fallback(sys: &StructuredSystem) -> Result<PlacementResult> {
    let ahat = check_selfloop_preconditions(sys)?;
    let l = l_count(&ahat);
    if l != 1 {
        return Err(Error::Precondition(format!("L = {l}, expected exactly one")));
    }
    let n = sys.n();
    let (scc, reach) = sinks_and_reach(&ahat, n);
    let y1: Vec<usize> = scc
        .sinks()
        .into_iter()
        .filter(|&c| !reach[scc.components[c][0]])
        .map(|c| scc.components[c][0])
        .collect();
    let base = sys.without_outputs().with_state_sensors(&y1)?;
    let free: Vec<usize> = (0..n).filter(|x| !y1.contains(x)).collect();
    for k in 0..=2 {
        let mut chosen = Vec::new();
        let found = for_each_combination(free.len(), k, &mut chosen, &mut |set| {
            let extra: Vec<usize> = set.iter().map(|&i| free[i]).collect();
            base.with_state_sensors(&extra).map(|s| is_gsio(&s)).unwrap_or(false)
        });
        if found {
            let mut result = PlacementResult::from_states(&y1, Stage::Stage1)?;
            for i in chosen {
                result.push(Sensor::State(free[i]), Stage::Stage2);
            }
            return Ok(result);
        }
    }
    Err(Error::Infeasible("no completion with at most two sensors".into()))
}

/// Dispatches to [`polycase_selfloop`] or [`polycase_fallback`] depending on L.
pub fn polycase(sys: &StructuredSystem) -> Result<PlacementResult> {
    let ahat = check_selfloop_preconditions(sys)?;
    if l_count(&ahat) > 1 {
        polycase_selfloop(sys)
    } else {
        polycase_fallback(sys)
    }
}

/// True when `states` make `(aobs, C)` structurally observable.
pub fn struct_obs_with(aobs: &SparsityPattern, states: &[usize]) -> bool {
    crate::model::build_output_pattern(states, aobs.rows())
        .and_then(|c| check_struct_obs(aobs, &c))
        .map(|v| v.overall)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_system;

    fn example1() -> StructuredSystem {
        parse_system(
            r#"{"n":5,"q":1,"m":1,
            "A":[[1,1],[2,1],[2,2],[3,4],[4,1],[4,2],[5,3],[5,4]],
            "B":[[1,1]],"C":[[1,5]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn example1_pipeline() {
        let sys = example1();
        assert_eq!(stage1_placement(&sys).unwrap().measured_states(), vec![4]);
        let p = two_stage(&sys).unwrap();
        assert_eq!(p.states_in(Stage::Stage1), vec![4]);
        assert_eq!(p.states_in(Stage::Stage2), vec![0]);
        assert_eq!(exact_min(&sys, false).unwrap().total(), 2);
    }

    #[test]
    fn example1_auxiliary_and_bounds() {
        let sys = example1();
        let ahat = auxiliary_system(&sys).unwrap();
        assert_eq!(ahat.rows(), 6);
        assert!(!ahat.contains(0, 0));
        assert!(ahat.contains(0, 5));
        let originals: Vec<usize> = (0..5).collect();
        let h = min_struct_obs(&ahat, Some(&originals)).unwrap();
        assert_eq!((h.h, h.deficiency, h.beta, h.alpha), (1, 1, 1, 1));
        assert_eq!(h.witness, vec![4]);
        let b = bounds_dedicated(&sys).unwrap();
        assert_eq!((b.lower, b.upper), (1, 2));
        let d = bounds_direct_measure(&sys).unwrap();
        assert_eq!((d.lower, d.upper), (1, 2));
    }

    #[test]
    fn isolated_vertices_need_one_sensor_each() {
        let h = min_struct_obs(&SparsityPattern::identity(4), None).unwrap();
        assert_eq!(h.h, 4);
        let h0 = min_struct_obs(&SparsityPattern::zeros(4, 4), None).unwrap();
        assert_eq!((h0.h, h0.deficiency, h0.beta, h0.alpha), (4, 4, 4, 4));
    }

    #[test]
    fn scalar_exact() {
        let sys = parse_system(r#"{"n":1,"q":1,"m":0,"A":[],"B":[[1,1]],"C":[]}"#).unwrap();
        assert_eq!(exact_min(&sys, false).unwrap().total(), 1);
        assert!(matches!(
            exact_min_with_cap(&sys, true, 1),
            Err(Error::CapExceeded { candidates: 2, cap: 1 })
        ));
    }

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut seen = Vec::new();
        let mut out = Vec::new();
        let found = for_each_combination(4, 2, &mut out, &mut |s| {
            seen.push(s.to_vec());
            false
        });
        assert!(!found);
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_combination(3, 0, &mut out, &mut |s| {
            assert!(s.is_empty());
            count += 1;
            false
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn l_count_examples() {
        // u -> x1, x1 -> x2, x1 -> x3, self-loops on x2, x3
        let sys = parse_system(
            r#"{"n":3,"q":1,"m":0,"A":[[1,1],[2,2],[3,3],[2,1],[3,1]],"B":[[1,1]],"C":[]}"#,
        )
        .unwrap();
        assert_eq!(l_count(&auxiliary_system(&sys).unwrap()), 2);
        let diag = parse_system(r#"{"n":3,"q":1,"m":0,"A":[[1,1],[2,2],[3,3]],"B":[[1,1]],"C":[]}"#).unwrap();
        assert_eq!(l_count(&auxiliary_system(&diag).unwrap()), 1);
    }

    #[test]
    fn polycase_branching() {
        let sys = parse_system(
            r#"{"n":3,"q":1,"m":0,"A":[[1,1],[2,2],[3,3],[2,1],[3,1]],"B":[[1,1]],"C":[]}"#,
        )
        .unwrap();
        let p = polycase_selfloop(&sys).unwrap();
        assert_eq!(p.measured_states(), vec![1, 2]);
        assert_eq!(p.total(), exact_min(&sys, false).unwrap().total());

        let diag = parse_system(r#"{"n":3,"q":1,"m":0,"A":[[1,1],[2,2],[3,3]],"B":[[1,1]],"C":[]}"#).unwrap();
        assert!(polycase_selfloop(&diag).is_err());
        let f = polycase_fallback(&diag).unwrap();
        assert_eq!(f.states_in(Stage::Stage1), vec![1, 2]);
        assert_eq!(f.total(), exact_min(&diag, false).unwrap().total());
    }

    #[test]
    fn polycase_preconditions_named() {
        let sys = parse_system(r#"{"n":2,"q":1,"m":0,"A":[[1,1]],"B":[[1,1]],"C":[]}"#).unwrap();
        match polycase(&sys) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("x2")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
