//! Instance factories: the set-cover reduction, random systems and set-cover
//! oracles.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{system_to_value, SparsityPattern, StructuredSystem};
use crate::place::for_each_combination;
use crate::verify::generic_rank;

/// Largest `q + p` accepted by [`setcover_exact`].
pub const SETCOVER_EXACT_CAP: usize = 20;

/// Set cover over `{1..p}` with subsets `S_1..S_q`; the singletons
/// `S_{q+1}..S_{q+p}` are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    p: usize,
    subsets: Vec<BTreeSet<usize>>,
}

#[derive(Deserialize)]
struct SetCoverDocument {
    p: usize,
    subsets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    /// Elements are 1-based.
    pub fn new(p: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        if p == 0 {
            return Err(Error::DimensionMismatch("universe must be nonempty".into()));
        }
        let mut sets = Vec::with_capacity(subsets.len());
        for (i, s) in subsets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Precondition(format!("subset {} is empty", i + 1)));
            }
            let mut set = BTreeSet::new();
            for &e in s {
                if e == 0 || e > p {
                    return Err(Error::BadIndex {
                        index: e,
                        reason: "outside the universe",
                    });
                }
                if !set.insert(e) {
                    return Err(Error::BadIndex {
                        index: e,
                        reason: "repeated within a subset",
                    });
                }
            }
            sets.push(set);
        }
        for e in 1..=p {
            if !sets.iter().any(|s| s.contains(&e)) {
                return Err(Error::Precondition(format!("element {e} is covered by no subset")));
            }
        }
        Ok(SetCoverInstance { p, subsets: sets })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: SetCoverDocument = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        SetCoverInstance::new(doc.p, doc.subsets)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of explicit subsets.
    pub fn q(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[BTreeSet<usize>] {
        &self.subsets
    }

    /// `S_{i+1}` of the extended family (`i` 0-based, singletons after `q`).
    pub fn extended(&self, i: usize) -> BTreeSet<usize> {
        if i < self.q() {
            self.subsets[i].clone()
        } else {
            BTreeSet::from([i - self.q() + 1])
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "p": self.p, "subsets": self.subsets })
    }
}

/// Entry roles of `M(s)` and `R(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Star,
    S,
}

/// Square pattern whose nonzeros are either free (`*`) or `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RolePattern {
    size: usize,
    entries: BTreeMap<(usize, usize), Role>,
}

impl RolePattern {
    fn new(size: usize) -> Self {
        RolePattern {
            size,
            entries: BTreeMap::new(),
        }
    }

    fn set(&mut self, r: usize, c: usize, role: Role) {
        self.entries.insert((r, c), role);
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// 0-based lookup.
    pub fn role(&self, r: usize, c: usize) -> Option<Role> {
        self.entries.get(&(r, c)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Role)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Rows rendered with `*`, `s` and `0`.
    pub fn rows(&self) -> Vec<String> {
        (0..self.size)
            .map(|r| {
                (0..self.size)
                    .map(|c| match self.role(r, c) {
                        Some(Role::Star) => '*',
                        Some(Role::S) => 's',
                        None => '0',
                    })
                    .collect()
            })
            .collect()
    }
}

/// The constructed system together with its bookkeeping.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub instance: SetCoverInstance,
    pub m: RolePattern,
    pub r: RolePattern,
    /// `column_position[c]` is the column of `R(s)` that column `c` of `M(s)` moves to.
    pub column_position: Vec<usize>,
    /// `(A, B, C1)`.
    pub system: StructuredSystem,
    /// Middle component (0-based) of `D(B'(A,B,C1))` standing for each
    /// extended subset `S_1..S_{q+p}`.
    pub subset_component: Vec<usize>,
    /// Middle component standing for each universe element.
    pub element_component: Vec<usize>,
    /// A state whose sensor realises each extended subset.
    pub subset_state: Vec<usize>,
}

impl ReductionOutput {
    pub fn c1(&self) -> &SparsityPattern {
        self.system.c()
    }

    /// The system document fields plus the reduction bookkeeping, 1-based.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = system_to_value(&self.system);
        v["reduction"] = json!({
            "instance": self.instance.to_json(),
            "m": self.m.rows(),
            "r": self.r.rows(),
            "c1_nnz": self.c1().nnz(),
            "subset_component": self.subset_component.iter().map(|c| c + 1).collect::<Vec<_>>(),
            "element_component": self.element_component.iter().map(|c| c + 1).collect::<Vec<_>>(),
            "subset_state": self.subset_state.iter().map(|c| c + 1).collect::<Vec<_>>(),
        });
        v
    }
}

/// Builds `M(s)`, permutes it to `R(s)` and splits off `(A, B, C1)`.
pub fn reduce_setcover(inst: &SetCoverInstance) -> Result<ReductionOutput> {
    let (p, q) = (inst.p(), inst.q());
    let size = 2 * p + 3 * q;
    let n = 2 * p + 2 * q;
    // construction in 1-based coordinates, stored 0-based
    let mut m = RolePattern::new(size);
    let mut put = |r: usize, c: usize, role: Role| m.set(r - 1, c - 1, role);
    for i in 1..=size {
        put(i, i, Role::Star);
    }
    for i in (2 * q + 1..2 * q + 2 * p).step_by(2) {
        put(i, i + 1, Role::S);
        put(i + 1, i, Role::S);
    }
    for i in 1..=q {
        put(i, i + q, Role::S);
        put(i + q, i + 2 * q + 2 * p, Role::S);
    }
    for (i, set) in inst.subsets().iter().enumerate() {
        for &j in set {
            put(i + 1 + q, 2 * j + 2 * q - 1, Role::Star);
        }
    }

    // the s in row r (r < n) sends its column to position r; remaining columns follow
    let mut column_position = vec![usize::MAX; size];
    for r in 0..n {
        let (&(_, c), _) = m
            .entries
            .range((r, 0)..(r + 1, 0))
            .find(|(_, &role)| role == Role::S)
            .expect("every leading row holds one s");
        column_position[c] = r;
    }
    let mut next = n;
    for pos in column_position.iter_mut() {
        if *pos == usize::MAX {
            *pos = next;
            next += 1;
        }
    }
    let mut r = RolePattern::new(size);
    for ((row, col), role) in m.entries() {
        r.set(row, column_position[col], role);
    }

    let mut a = SparsityPattern::zeros(n, n);
    let mut b = SparsityPattern::zeros(n, q);
    let mut c1 = SparsityPattern::zeros(q, n);
    for ((row, col), role) in r.entries() {
        match (row < n, col < n) {
            (true, true) => {
                if role == Role::Star {
                    a.insert(row, col);
                } else if row != col {
                    return Err(Error::Infeasible("s entry left off the diagonal".into()));
                }
            }
            (true, false) => b.insert(row, col - n),
            (false, true) => c1.insert(row - n, col),
            (false, false) => {}
        }
    }
    let system = StructuredSystem::new(a, b, c1, None)?;

    // diagonal blocks of M(s), in order, are the middle components
    let subset_component: Vec<usize> = (0..q + p).map(|i| i + q).collect();
    let element_component: Vec<usize> = (0..p).map(|j| 2 * q + j).collect();
    let mut subset_state: Vec<usize> = (0..q).collect();
    subset_state.extend((0..p).map(|j| 2 * q + 2 * j));

    Ok(ReductionOutput {
        instance: inst.clone(),
        m,
        r,
        column_position,
        system,
        subset_component,
        element_component,
        subset_state,
    })
}

/// Parameters of [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub q: usize,
    pub density: f64,
    pub dedicated_inputs: bool,
    pub self_loops: bool,
    pub seed: u64,
}

const MAX_INPUT_ATTEMPTS: usize = 10_000;

/// Random structured system without outputs with `grank(B) = q`.
pub fn gen_random(spec: &RandomSpec) -> Result<StructuredSystem> {
    let RandomSpec {
        n,
        q,
        density,
        dedicated_inputs,
        self_loops,
        seed,
    } = *spec;
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be at least 1".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Precondition(format!("density {density} is outside (0, 1]")));
    }
    if q > n {
        return Err(Error::Precondition(format!("q = {q} exceeds n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = SparsityPattern::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if (self_loops && i == j) || rng.random_bool(density) {
                a.insert(i, j);
            }
        }
    }
    let b = if dedicated_inputs {
        let picks = rand::seq::index::sample(&mut rng, n, q);
        let mut b = SparsityPattern::zeros(n, q);
        for (k, i) in picks.iter().enumerate() {
            b.insert(i, k);
        }
        b
    } else {
        let mut attempt = 0;
        loop {
            let mut b = SparsityPattern::zeros(n, q);
            for i in 0..n {
                for k in 0..q {
                    if rng.random_bool(density) {
                        b.insert(i, k);
                    }
                }
            }
            if generic_rank(&b) == q {
                break b;
            }
            attempt += 1;
            if attempt == MAX_INPUT_ATTEMPTS {
                return Err(Error::Infeasible(format!(
                    "no full-rank input matrix after {MAX_INPUT_ATTEMPTS} draws"
                )));
            }
        }
    };
    StructuredSystem::from_ab(a, b)
}

fn covers(inst: &SetCoverInstance, chosen: &[usize]) -> bool {
    let mut hit = vec![false; inst.p() + 1];
    for &i in chosen {
        for e in inst.extended(i) {
            hit[e] = true;
        }
    }
    hit[1..].iter().all(|&h| h)
}

/// Greedy cover over the extended family: largest number of newly covered
/// elements, lowest index on ties. Returns 0-based indices in pick order.
pub fn setcover_greedy(inst: &SetCoverInstance) -> Vec<usize> {
    let total = inst.q() + inst.p();
    let mut covered = BTreeSet::new();
    let mut picked = Vec::new();
    while covered.len() < inst.p() {
        let best = (0..total)
            .filter(|i| !picked.contains(i))
            .max_by_key(|&i| {
                let gain = inst.extended(i).difference(&covered).count();
                (gain, std::cmp::Reverse(i))
            })
            .expect("the singletons always cover");
        covered.extend(inst.extended(best));
        picked.push(best);
    }
    picked
}

/// Minimum cover over the extended family by enumeration. Returns 0-based
/// indices in ascending order.
pub fn setcover_exact(inst: &SetCoverInstance) -> Result<Vec<usize>> {
    let total = inst.q() + inst.p();
    if total > SETCOVER_EXACT_CAP {
        return Err(Error::CapExceeded {
            candidates: total,
            cap: SETCOVER_EXACT_CAP,
        });
    }
    let mut out = Vec::new();
    for k in 1..=total {
        if for_each_combination(total, k, &mut out, &mut |set| covers(inst, set)) {
            return Ok(out);
        }
    }
    unreachable!("the singletons always cover")
}
