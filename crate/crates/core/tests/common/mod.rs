//! Shared helpers for the integration suites: a seeded RNG and random
//! multigraph generation. Deterministic per seed, so failures replay.
#![allow(dead_code)] // each test binary uses its own subset

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tuttekit::graph::MultiGraph;
use tuttekit::BigRational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected multigraph with at most `max_edges` edges: a uniform random
/// spanning tree skeleton plus extra edges, which may duplicate tree edges
/// (parallels) or close on one vertex (loops).
pub fn random_connected(rng: &mut impl Rng, max_edges: usize) -> MultiGraph {
    assert!(max_edges >= 1);
    let max_nv = (max_edges + 1).min(8) as u32;
    let nv = rng.gen_range(1..=max_nv);
    let mut edges = Vec::new();
    for v in 1..nv {
        edges.push((rng.gen_range(0..v), v));
    }
    let total = rng.gen_range(edges.len()..=max_edges);
    while edges.len() < total {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        edges.push((a, b));
    }
    MultiGraph::new(nv, edges).unwrap()
}

/// Small random rational with denominator in 1..=5.
pub fn random_rational(rng: &mut impl Rng, nonzero: bool) -> BigRational {
    loop {
        let numer = rng.gen_range(-6i64..=6);
        if nonzero && numer == 0 {
            continue;
        }
        let denom = rng.gen_range(1i64..=5);
        return BigRational::new(numer.into(), denom.into());
    }
}
