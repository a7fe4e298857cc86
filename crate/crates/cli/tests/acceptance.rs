//! End-to-end acceptance run: one line per criterion, non-zero exit if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use gsio_core::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const M_PATTERN: [&str; 15] = [
    "*00s00000000000",
    "0*00s0000000000",
    "00*00s000000000",
    "000*00*0*000s00",
    "0000*000*0*00s0",
    "00000**000*000s",
    "000000*s0000000",
    "000000s*0000000",
    "00000000*s00000",
    "00000000s*00000",
    "0000000000*s000",
    "0000000000s*000",
    "000000000000*00",
    "0000000000000*0",
    "00000000000000*",
];

const R_PATTERN: [&str; 15] = [
    "s00000000000*00",
    "0s00000000000*0",
    "00s00000000000*",
    "*00s000*0*00000",
    "0*00s0000*0*000",
    "00*00s0*000*000",
    "000000s*0000000",
    "000000*s0000000",
    "00000000s*00000",
    "00000000*s00000",
    "0000000000s*000",
    "0000000000*s000",
    "000*00000000000",
    "0000*0000000000",
    "00000*000000000",
];

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    path.to_string_lossy().into_owned()
}

fn load(name: &str) -> StructuredSystem {
    parse_system(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn b_prime(sys: &StructuredSystem) -> DmDecomposition {
    dm_decompose(&BipartiteGraph::from_system(sys, true))
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(move |m| m.count_ones() as usize == k)
        .map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

/// Smallest dedicated placement, by enumeration checked through the digraph route.
fn oracle_min(sys: &StructuredSystem, allow_inputs: bool) -> usize {
    let open = sys.without_outputs();
    let (n, q) = (sys.n(), sys.q());
    let positions = if allow_inputs { n + q } else { n };
    (0..=positions)
        .find(|&k| {
            subsets(positions, k).any(|set| {
                let states: Vec<usize> = set.iter().copied().filter(|&i| i < n).collect();
                let inputs: Vec<usize> = set.iter().filter(|&&i| i >= n).map(|&i| i - n).collect();
                check_gsio_digraph(&open.with_sensors(&states, &inputs).unwrap()).overall
            })
        })
        .expect("measuring every position always suffices")
}

/// Smallest number of dedicated outputs making `a` structurally observable.
fn oracle_struct_obs(a: &SparsityPattern) -> usize {
    let n = a.rows();
    (0..=n)
        .find(|&k| {
            subsets(n, k).any(|states| {
                let c = build_output_pattern(&states, n).unwrap();
                check_struct_obs(a, &c).unwrap().overall
            })
        })
        .unwrap()
}

fn random_system(rng: &mut ChaCha8Rng, n_max: usize, q_max: usize, dedicated: bool, density: f64) -> StructuredSystem {
    let n = rng.random_range(1..=n_max);
    let q = rng.random_range(0..=q_max.min(n));
    gen_random(&RandomSpec {
        n,
        q,
        density,
        dedicated_inputs: dedicated,
        self_loops: false,
        seed: rng.random(),
    })
    .unwrap()
}

fn criterion_1() -> Outcome {
    let sys = load("example1.json");
    let d = b_prime(&sys);
    ensure!(d.k() == 4 && !d.has_horizontal() && !d.has_vertical(), "expected 4 middle components, got {}", d.k());
    ensure!(!d.components[0].has_s_edge, "B'_1 carries an s-edge");
    let v = check_gsio_both(&sys);
    ensure!(!v.overall && !v.routes_disagree(), "example 1 should not be GSIO");
    for x in [0, 1] {
        let fixed = check_gsio_both(&sys.with_state_sensors(&[x]).unwrap());
        ensure!(fixed.overall && !fixed.routes_disagree(), "sensor on x{} should suffice", x + 1);
    }
    let s1 = stage1_placement(&sys).map_err(|e| e.to_string())?;
    ensure!(s1.measured_states() == vec![4], "stage 1 = {:?}", s1.measured_states());
    let two = two_stage(&sys).map_err(|e| e.to_string())?.total();
    let exact = exact_min(&sys, false).map_err(|e| e.to_string())?.total();
    let oracle = oracle_min(&sys, false);
    ensure!(two == 2 && exact == 2 && oracle == 2, "two_stage {two}, exact {exact}, oracle {oracle}");
    Ok("4 components, flagged B'_2 B'_3, stage 1 {x5}, total 2".into())
}

fn criterion_2() -> Outcome {
    let inst = SetCoverInstance::parse(&std::fs::read_to_string(fixture("example2_setcover.json")).unwrap())
        .map_err(|e| e.to_string())?;
    let red = reduce_setcover(&inst).map_err(|e| e.to_string())?;
    ensure!(red.m.rows() == M_PATTERN, "M(s) differs");
    ensure!(red.r.rows() == R_PATTERN, "R(s) differs");
    let cover = setcover_exact(&inst).map_err(|e| e.to_string())?;
    // independent cover oracle over all subfamilies
    let family = inst.q() + inst.p();
    let best_cover = (0..=family)
        .find(|&k| {
            subsets(family, k).any(|s| {
                let covered: std::collections::BTreeSet<usize> = s.iter().flat_map(|&i| inst.extended(i)).collect();
                covered.len() == inst.p()
            })
        })
        .unwrap();
    ensure!(cover.len() == best_cover && best_cover == 2, "cover optimum {} vs oracle {best_cover}", cover.len());
    let ab = red.system.without_outputs();
    let exact = exact_min(&ab, false).map_err(|e| e.to_string())?.total();
    let c1 = red.c1().nnz();
    ensure!(exact == 5 && exact == best_cover + c1, "exact {exact}, cover {best_cover} + ||C1|| {c1}");
    Ok(format!("M(s) and R(s) bit-exact, exact_min 5 = {best_cover} + {c1}"))
}

fn criterion_3() -> Outcome {
    let sys = load("chained_cover.json");
    let s1 = stage1_placement(&sys).map_err(|e| e.to_string())?;
    ensure!(s1.measured_states() == vec![3, 7, 11, 15], "stage 1 = {:?}", s1.measured_states());
    let d = b_prime(&sys.with_state_sensors(&s1.measured_states()).unwrap());
    ensure!(d.s_edge_components() == vec![2, 6, 10, 14], "flagged {:?}", d.s_edge_components());
    let p = two_stage(&sys).map_err(|e| e.to_string())?;
    ensure!(p.total() == 6, "two_stage total {}", p.total());
    ensure!(check_gsio_digraph(&p.apply(&sys).unwrap()).overall, "placement not GSIO");
    Ok("stage 1 {x4,x8,x12,x16}, flagged B'_3 B'_7 B'_11 B'_15, total 6".into())
}

fn criterion_4() -> Outcome {
    let sys = load("selfloop_cascade.json");
    let p = polycase_selfloop(&sys).map_err(|e| e.to_string())?;
    ensure!(p.measured_states() == vec![2, 4], "polycase = {:?}", p.measured_states());
    let closed = p.apply(&sys).unwrap();
    let g = SystemDigraph::from_system(&closed);
    let ess: Vec<usize> = v_ess(&g, &g.inputs(), &g.outputs()).into_iter().filter(|&v| v < sys.n()).collect();
    let d0 = delta0(&g);
    ensure!(ess == vec![0, 1] && d0 == vec![0, 1], "V_ess∩X {ess:?}, Δ0 {d0:?}");
    ensure!(check_gsio_dm(&closed).overall && check_gsio_digraph(&closed).overall, "routes reject the placement");
    ensure!(oracle_min(&sys, false) == 2, "placement is not minimum");
    Ok("y1 on x3, y2 on x5; Δ0 = V_ess∩X = {x1,x2}".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let densities = [0.1, 0.25, 0.5];
    let mut gsio = 0;
    let total = 1200;
    for t in 0..total {
        let base = random_system(&mut rng, 10, 3, false, densities[t % 3]);
        let states: Vec<usize> = (0..base.n()).filter(|_| rng.random_bool(0.35)).collect();
        let inputs: Vec<usize> = (0..base.q()).filter(|_| rng.random_bool(0.1)).collect();
        let sys = base.with_sensors(&states, &inputs).unwrap();
        let (a, b) = (check_gsio_dm(&sys).overall, check_gsio_digraph(&sys).overall);
        ensure!(a == b, "disagreement on {}", serialize_system(&sys));
        gsio += usize::from(a);
    }
    Ok(format!("{total} systems, {gsio} GSIO, 0 disagreements"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let total = 220;
    for _ in 0..total {
        let density = [0.15, 0.3, 0.5][rng.random_range(0..3)];
        let sys = random_system(&mut rng, 8, 3, true, density);
        let (n, q) = (sys.n(), sys.q());
        let exact = oracle_min(&sys, false);
        let b = bounds_dedicated(&sys).map_err(|e| e.to_string())?;
        let h_hat = oracle_struct_obs(&auxiliary_system(&sys).unwrap());
        ensure!(b.lower == h_hat, "H(Â) {} vs oracle {h_hat}", b.lower);
        ensure!(h_hat <= exact && exact <= (h_hat + q).min(n), "{h_hat} <= {exact} <= min({h_hat}+{q}, {n})");
        ensure!(b.upper == (h_hat + q).min(n), "upper bound {}", b.upper);

        let direct = oracle_min(&sys, true);
        let h = oracle_struct_obs(sys.a());
        let d = bounds_direct_measure(&sys).map_err(|e| e.to_string())?;
        ensure!(d.lower == h, "H(A) {} vs oracle {h}", d.lower);
        ensure!(h <= direct && direct <= h + q, "{h} <= {direct} <= {h}+{q}");
    }
    Ok(format!("{total} systems, 0 violations"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let total = 250;
    for _ in 0..total {
        let n = rng.random_range(1..=8);
        let density = [0.1, 0.25, 0.45][rng.random_range(0..3)];
        let entries: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|_| rng.random_bool(density))
            .collect();
        let a = SparsityPattern::from_entries(n, n, entries).unwrap();
        let r = min_struct_obs(&a, None).map_err(|e| e.to_string())?;
        let oracle = oracle_struct_obs(&a);
        ensure!(r.h == oracle, "H = {} vs brute force {oracle} on {:?}", r.h, a.to_one_based());
        let c = build_output_pattern(&r.witness, n).unwrap();
        ensure!(r.witness.len() == r.h && check_struct_obs(&a, &c).unwrap().overall, "witness invalid");
    }
    Ok(format!("{total} patterns, 0 violations"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut multi, mut single) = (0, 0);
    while multi < 200 || single < 60 {
        let sys = gen_random(&RandomSpec {
            n: rng.random_range(1..=8),
            q: 1,
            density: [0.1, 0.2, 0.35][rng.random_range(0..3)],
            dedicated_inputs: true,
            self_loops: true,
            seed: rng.random(),
        })
        .unwrap();
        let l = l_count(&auxiliary_system(&sys).unwrap());
        if l > 1 && multi < 200 {
            multi += 1;
            let p = polycase_selfloop(&sys).map_err(|e| e.to_string())?;
            let exact = oracle_min(&sys, false);
            ensure!(p.total() == exact, "polycase {} vs exact {exact} on {}", p.total(), serialize_system(&sys));
            ensure!(check_gsio_digraph(&p.apply(&sys).unwrap()).overall, "polycase placement not GSIO");
        } else if l <= 1 && single < 60 {
            single += 1;
            let p = polycase(&sys).map_err(|e| e.to_string())?;
            let exact = oracle_min(&sys, false);
            ensure!(p.total() == exact, "fallback {} vs exact {exact} on {}", p.total(), serialize_system(&sys));
        }
    }
    Ok(format!("{multi} instances with L>1, {single} with L=1, 0 violations"))
}

fn shuffled_matching(rng: &mut ChaCha8Rng, g: &BipartiteGraph) -> Matching {
    let mut lperm: Vec<usize> = (0..g.left_count()).collect();
    let mut rperm: Vec<usize> = (0..g.right_count()).collect();
    lperm.shuffle(rng);
    rperm.shuffle(rng);
    let mut h = BipartiteGraph::new(g.left_count(), g.right_count());
    let mut edges: Vec<_> = g.edges().collect();
    edges.shuffle(rng);
    for e in edges {
        h.add_edge(lperm[e.left], rperm[e.right]);
    }
    let pairs: Vec<(usize, usize)> = max_matching(&h, &[])
        .unwrap()
        .pairs()
        .into_iter()
        .map(|(l, r)| {
            let l0 = lperm.iter().position(|&p| p == l).unwrap();
            let r0 = rperm.iter().position(|&p| p == r).unwrap();
            (l0, r0)
        })
        .collect();
    Matching::from_pairs(g, &pairs).unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let total = 120;
    let mut distinct_matchings = 0;
    for _ in 0..total {
        let (l, r) = (rng.random_range(1..=12), rng.random_range(1..=12));
        let density = [0.15, 0.3][rng.random_range(0..2)];
        let mut g = BipartiteGraph::new(l, r);
        for a in 0..l {
            for b in 0..r {
                if rng.random_bool(density) {
                    g.add_edge(a, b);
                }
            }
        }
        let reference = dm_decompose(&g);
        for _ in 0..10 {
            let m = shuffled_matching(&mut rng, &g);
            if m.pairs() != reference.matching.pairs() {
                distinct_matchings += 1;
            }
            let d = dm_decompose_with(&g, m).map_err(|e| e.to_string())?;
            ensure!(
                d.left_part == reference.left_part && d.right_part == reference.right_part,
                "partition changed under another maximum matching"
            );
        }
    }
    Ok(format!("{total} graphs x 10 matchings ({distinct_matchings} differing), 0 violations"))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("large.json");
    let path = path.to_string_lossy().into_owned();
    let generated = gsio_cli::run(["gsio", "gen", "--n", "1000", "--q", "5", "--density", "0.005", "--seed", "10"]);
    ensure!(generated.exit_code == 0, "gen failed: {}", generated.stderr);
    std::fs::write(&path, &generated.stdout).unwrap();
    let check = gsio_cli::run(["gsio", "check", path.as_str()]);
    ensure!(check.exit_code == 0, "check failed: {}", check.stderr);
    let place = gsio_cli::run(["gsio", "place", path.as_str()]);
    ensure!(place.exit_code == 0, "place failed: {}", place.stderr);
    let report: serde_json::Value = serde_json::from_str(&place.stdout).unwrap();
    let sys = parse_system(&generated.stdout).unwrap();
    let placement = two_stage(&sys).map_err(|e| e.to_string())?;
    ensure!(is_gsio(&placement.apply(&sys).unwrap()), "placement on the large system is not GSIO");
    Ok(format!("n=1000, q=5, {} edges, {} sensors", sys.a().nnz(), report["total"]))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Example 1 golden suite", criterion_1, Duration::from_secs(1)),
        ("Example 2 reduction suite", criterion_2, Duration::from_secs(10)),
        ("chained-cover two-stage placement", criterion_3, Duration::MAX),
        ("self-loop cascade placement", criterion_4, Duration::MAX),
        ("DM and digraph routes agree", criterion_5, Duration::from_secs(60)),
        ("bounds sandwich the optimum", criterion_6, Duration::MAX),
        ("min_struct_obs equals brute force", criterion_7, Duration::MAX),
        ("self-loop algorithm is optimal", criterion_8, Duration::MAX),
        ("DM partition is matching-invariant", criterion_9, Duration::MAX),
        ("scale smoke test", criterion_10, Duration::from_secs(120)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:.0?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
