#![allow(dead_code)]

use std::path::PathBuf;

use gsio_core::{parse_system, SetCoverInstance, SparsityPattern, StructuredSystem};

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn example1() -> StructuredSystem {
    parse_system(&fixture("example1.json")).unwrap()
}

pub fn example2() -> SetCoverInstance {
    SetCoverInstance::parse(&fixture("example2_setcover.json")).unwrap()
}

pub fn selfloop_cascade() -> StructuredSystem {
    parse_system(&fixture("selfloop_cascade.json")).unwrap()
}

pub fn chained_cover() -> StructuredSystem {
    parse_system(&fixture("chained_cover.json")).unwrap()
}

/// The parametrised family: `k` self-looped states feed a hub driven by the
/// only input; the hub feeds `x_{k+2}`, which also hears from `x_{k+3}`.
pub fn gap_family(k: usize) -> StructuredSystem {
    let n = k + 3;
    let hub = k;
    let (p, r) = (k + 1, k + 2);
    let mut a = Vec::new();
    for i in 0..k {
        a.push((i, i));
        a.push((hub, i));
    }
    a.push((p, hub));
    a.extend([(p, p), (r, r), (p, r)]);
    let a = SparsityPattern::from_entries(n, n, a).unwrap();
    let b = SparsityPattern::from_entries(n, 1, [(hub, 0)]).unwrap();
    StructuredSystem::from_ab(a, b).unwrap()
}

/// Size of the smallest dedicated placement of `sys` (states only).
pub fn brute_force_min(sys: &StructuredSystem) -> usize {
    gsio_core::exact_min(sys, false).unwrap().total()
}
