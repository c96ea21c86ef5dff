//! Slow, general-purpose reference algorithms.
//!
//! Everything here works on arbitrary multigraphs and is used to
//! cross-check the fast family-specific routes on small instances. Costs
//! are exponential (subset enumeration, deletion/contraction) or cubic
//! with big-integer entries (Kirchhoff counting), so every entry point is
//! budgeted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::graph::{Dsu, MultiGraph};
use crate::poly::{BiPoly, PolyVar, UniPoly};
use crate::{Error, Limits, Result};

/// Tutte polynomial by the spanning-subgraph expansion: summing
/// (x-1)^(rank deficit) (y-1)^(nullity) over all 2^E edge subsets.
/// Subsets are bucketed by (deficit, nullity) first so the polynomial
/// work is proportional to the number of distinct buckets, not 2^E.
pub fn tutte_subgraph_sum(g: &MultiGraph, limits: &Limits) -> Result<BiPoly> {
    let e = g.num_edges();
    if e > limits.subset_edge_cap {
        return Err(Error::TooManyEdges {
            edges: e,
            limit: limits.subset_edge_cap,
        });
    }
    let rank_g = g.metrics().rank;
    let mut buckets = vec![vec![0u64; e + 1]; rank_g as usize + 1];
    let mut dsu = Dsu::new(g.num_vertices());
    let edges = g.edges();
    for mask in 0u64..(1u64 << e) {
        dsu.reset();
        let mut size = 0u32;
        let mut rank = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            size += 1;
            let (u, v) = edges[i];
            if dsu.union(u, v) {
                rank += 1;
            }
        }
        buckets[(rank_g - rank) as usize][(size - rank) as usize] += 1;
    }
    let xm1 = BiPoly::from_terms([(1, 0, 1), (0, 0, -1)]);
    let ym1 = BiPoly::from_terms([(0, 1, 1), (0, 0, -1)]);
    let xp = powers(&xm1, rank_g);
    let yp = powers(&ym1, e as u32);
    let mut acc = BiPoly::zero();
    for (i, row) in buckets.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if count != 0 {
                acc = acc.add(&xp[i].mul(&yp[j]).mul_scalar(&BigInt::from(count)));
            }
        }
    }
    Ok(acc)
}

fn powers(base: &BiPoly, max: u32) -> Vec<BiPoly> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BiPoly::one());
    for _ in 0..max {
        let next = out.last().unwrap().mul(base);
        out.push(next);
    }
    out
}

/// Tutte polynomial by deletion/contraction on the first edge in list
/// order: a loop contributes a factor y, a bridge a factor x, and any
/// other edge splits the recursion into T(G-e) + T(G/e).
pub fn tutte_del_con(g: &MultiGraph, limits: &Limits) -> Result<BiPoly> {
    let e = g.num_edges();
    if e > limits.delcon_edge_cap {
        return Err(Error::TooManyEdges {
            edges: e,
            limit: limits.delcon_edge_cap,
        });
    }
    let mut nodes = 0u64;
    del_con(
        g.num_vertices(),
        g.edges().to_vec(),
        &mut nodes,
        limits.delcon_node_cap,
    )
}

fn del_con(nv: u32, edges: Vec<(u32, u32)>, nodes: &mut u64, cap: u64) -> Result<BiPoly> {
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::NodeBudgetExceeded { limit: cap });
    }
    let Some(&(u, v)) = edges.first() else {
        return Ok(BiPoly::one());
    };
    if u == v {
        return Ok(del_con(nv, edges[1..].to_vec(), nodes, cap)?.shift(0, 1));
    }
    if is_bridge(nv, &edges) {
        let (cv, ce) = contract_first(nv, &edges);
        return Ok(del_con(cv, ce, nodes, cap)?.shift(1, 0));
    }
    let deleted = del_con(nv, edges[1..].to_vec(), nodes, cap)?;
    let (cv, ce) = contract_first(nv, &edges);
    let contracted = del_con(cv, ce, nodes, cap)?;
    Ok(deleted.add(&contracted))
}

/// Whether the first edge disconnects its component when removed.
fn is_bridge(nv: u32, edges: &[(u32, u32)]) -> bool {
    let mut with = Dsu::new(nv);
    for &(a, b) in edges {
        with.union(a, b);
    }
    let mut without = Dsu::new(nv);
    for &(a, b) in &edges[1..] {
        without.union(a, b);
    }
    without.components() > with.components()
}

/// Contracts the first edge: its endpoints merge into the smaller id and
/// higher ids shift down. Parallel copies of the edge become loops.
fn contract_first(nv: u32, edges: &[(u32, u32)]) -> (u32, Vec<(u32, u32)>) {
    let (u, v) = edges[0];
    let keep = u.min(v);
    let gone = u.max(v);
    let map = |w: u32| {
        if w == gone {
            keep
        } else if w > gone {
            w - 1
        } else {
            w
        }
    };
    (
        nv - 1,
        edges[1..].iter().map(|&(a, b)| (map(a), map(b))).collect(),
    )
}

/// Spanning tree count by Kirchhoff's theorem: determinant of the reduced
/// Laplacian, computed fraction-free so every intermediate value is an
/// exact integer. Parallel edges enter with multiplicity; loops are
/// ignored. Requires a connected graph.
pub fn spanning_tree_count(g: &MultiGraph, limits: &Limits) -> Result<BigInt> {
    let v = g.num_vertices() as usize;
    if v > limits.matrix_vertex_cap {
        return Err(Error::MatrixTooLarge {
            vertices: v,
            limit: limits.matrix_vertex_cap,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if v <= 1 {
        return Ok(BigInt::one());
    }
    let n = v - 1;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for &(a, b) in g.edges() {
        if a == b {
            continue;
        }
        let (a, b) = (a as usize, b as usize);
        if a > 0 {
            m[a - 1][a - 1] += 1;
        }
        if b > 0 {
            m[b - 1][b - 1] += 1;
        }
        if a > 0 && b > 0 {
            m[a - 1][b - 1] -= 1;
            m[b - 1][a - 1] -= 1;
        }
    }
    Ok(bareiss_determinant(m))
}

/// Fraction-free Gaussian elimination; divisions are exact by construction.
pub(crate) fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = std::mem::take(&mut m[n - 1][n - 1]);
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Number of connected spanning subgraphs, by enumerating edge subsets and
/// keeping those whose edges alone connect every vertex.
pub fn cssg_count_brute(g: &MultiGraph, limits: &Limits) -> Result<BigInt> {
    let e = g.num_edges();
    if e > limits.subset_edge_cap {
        return Err(Error::TooManyEdges {
            edges: e,
            limit: limits.subset_edge_cap,
        });
    }
    let need = g.num_vertices().saturating_sub(1);
    let mut dsu = Dsu::new(g.num_vertices());
    let edges = g.edges();
    let mut count = 0u64;
    for mask in 0u64..(1u64 << e) {
        dsu.reset();
        let mut rank = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if dsu.union(edges[i].0, edges[i].1) {
                rank += 1;
            }
        }
        if rank == need {
            count += 1;
        }
    }
    Ok(BigInt::from(count))
}

/// All-terminal reliability polynomial in p: the probability that the
/// operational edges (each kept independently with probability p) span and
/// connect every vertex. Exact expansion over subset sizes.
pub fn reliability_brute(g: &MultiGraph, limits: &Limits) -> Result<UniPoly> {
    let e = g.num_edges();
    if e > limits.subset_edge_cap {
        return Err(Error::TooManyEdges {
            edges: e,
            limit: limits.subset_edge_cap,
        });
    }
    let need = g.num_vertices().saturating_sub(1);
    let mut by_size = vec![0u64; e + 1];
    let mut dsu = Dsu::new(g.num_vertices());
    let edges = g.edges();
    for mask in 0u64..(1u64 << e) {
        dsu.reset();
        let mut size = 0usize;
        let mut rank = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            size += 1;
            if dsu.union(edges[i].0, edges[i].1) {
                rank += 1;
            }
        }
        if rank == need {
            by_size[size] += 1;
        }
    }
    // q_pows[j] = (1-p)^j
    let one_minus_p = UniPoly::from_terms(
        PolyVar::P,
        [(0, BigRational::one()), (1, -BigRational::one())],
    );
    let mut q_pows = Vec::with_capacity(e + 1);
    q_pows.push(UniPoly::constant(PolyVar::P, BigRational::one()));
    for _ in 0..e {
        let next = q_pows.last().unwrap().mul(&one_minus_p);
        q_pows.push(next);
    }
    let mut acc = UniPoly::zero(PolyVar::P);
    for (size, &count) in by_size.iter().enumerate() {
        if count != 0 {
            let term = q_pows[e - size]
                .shift(size as u32)
                .scale(&BigRational::from(BigInt::from(count)));
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

/// Potts partition function by its subset expansion: the sum over edge
/// subsets A of q^(components of (V, A)) * v^|A|.
pub fn potts_sum_brute(
    g: &MultiGraph,
    q: &BigRational,
    v: &BigRational,
    limits: &Limits,
) -> Result<BigRational> {
    let e = g.num_edges();
    if e > limits.subset_edge_cap {
        return Err(Error::TooManyEdges {
            edges: e,
            limit: limits.subset_edge_cap,
        });
    }
    let nv = g.num_vertices() as usize;
    let mut buckets = vec![vec![0u64; e + 1]; nv + 1];
    let mut dsu = Dsu::new(g.num_vertices());
    let edges = g.edges();
    for mask in 0u64..(1u64 << e) {
        dsu.reset();
        let mut size = 0usize;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            size += 1;
            dsu.union(edges[i].0, edges[i].1);
        }
        buckets[dsu.components() as usize][size] += 1;
    }
    let mut acc = BigRational::zero();
    let mut q_pow = BigRational::one();
    for row in buckets.iter().skip(1) {
        q_pow *= q;
        let mut v_pow = BigRational::one();
        for (size, &count) in row.iter().enumerate() {
            if size > 0 {
                v_pow *= v;
            }
            if count != 0 {
                acc += &q_pow * &v_pow * BigRational::from(BigInt::from(count));
            }
        }
    }
    Ok(acc)
}

/// Proper coloring count by backtracking. Loops make the count zero;
/// parallel edges are harmless.
pub fn coloring_count_brute(g: &MultiGraph, colors: u32, limits: &Limits) -> Result<BigInt> {
    let e = g.num_edges();
    if e > limits.subset_edge_cap {
        return Err(Error::TooManyEdges {
            edges: e,
            limit: limits.subset_edge_cap,
        });
    }
    if g.edges().iter().any(|&(u, v)| u == v) {
        return Ok(BigInt::zero());
    }
    let nv = g.num_vertices() as usize;
    let mut adjacent = vec![vec![]; nv];
    for &(u, v) in g.edges() {
        adjacent[u as usize].push(v as usize);
        adjacent[v as usize].push(u as usize);
    }
    let mut assignment = vec![u32::MAX; nv];
    let mut count = BigInt::zero();
    color_rec(0, &adjacent, colors, &mut assignment, &mut count);
    Ok(count)
}

fn color_rec(
    v: usize,
    adjacent: &[Vec<usize>],
    colors: u32,
    assignment: &mut Vec<u32>,
    count: &mut BigInt,
) {
    if v == adjacent.len() {
        *count += 1;
        return;
    }
    'next_color: for c in 0..colors {
        for &w in &adjacent[v] {
            if assignment[w] == c {
                continue 'next_color;
            }
        }
        assignment[v] = c;
        color_rec(v + 1, adjacent, colors, assignment, count);
        assignment[v] = u32::MAX;
    }
}
