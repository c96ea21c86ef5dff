//! Multigraphs and deterministic generators for the three graph families.
//!
//! Graphs are vertex-count plus edge list. Loops and parallel edges are
//! allowed and meaningful (they change Tutte polynomials), and the edge
//! list order is part of the value: generators are fully deterministic so
//! results are reproducible byte for byte.

use serde_json::{json, Value};

use crate::{Error, Limits, Result};

/// Undirected multigraph on vertices `0..num_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    num_vertices: u32,
    edges: Vec<(u32, u32)>,
}

/// Connectivity summary: component count, rank, nullity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphMetrics {
    pub components: u32,
    /// num_vertices - components
    pub rank: u32,
    /// num_edges - rank
    pub nullity: u32,
}

impl MultiGraph {
    pub fn new(num_vertices: u32, edges: Vec<(u32, u32)>) -> Result<Self> {
        for &(u, v) in &edges {
            for id in [u, v] {
                if id >= num_vertices {
                    return Err(Error::InvalidVertex { id, num_vertices });
                }
            }
        }
        Ok(MultiGraph {
            num_vertices,
            edges,
        })
    }

    pub fn num_vertices(&self) -> u32 {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn metrics(&self) -> GraphMetrics {
        let mut dsu = Dsu::new(self.num_vertices);
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        let components = dsu.components();
        let rank = self.num_vertices - components;
        GraphMetrics {
            components,
            rank,
            nullity: self.edges.len() as u32 - rank,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.metrics().components <= 1
    }

    /// Glues `other` onto `self` by identifying `other`'s vertex `v` with
    /// `self`'s vertex `u`. Vertices of `other` keep their relative order
    /// in the fresh id range; edge lists are concatenated.
    pub fn one_point_join(&self, u: u32, other: &MultiGraph, v: u32) -> Result<MultiGraph> {
        if u >= self.num_vertices {
            return Err(Error::InvalidVertex {
                id: u,
                num_vertices: self.num_vertices,
            });
        }
        if v >= other.num_vertices {
            return Err(Error::InvalidVertex {
                id: v,
                num_vertices: other.num_vertices,
            });
        }
        let base = self.num_vertices;
        let map = |w: u32| {
            if w == v {
                u
            } else if w < v {
                base + w
            } else {
                base + w - 1
            }
        };
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (map(a), map(b))));
        Ok(MultiGraph {
            num_vertices: base + other.num_vertices - 1,
            edges,
        })
    }

    /// Edge-list text: header `V E`, one `u v` line per edge.
    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("{} {}\n", self.num_vertices, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num_vertices": self.num_vertices,
            "edges": self.edges.iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<MultiGraph> {
        let bad = |reason: String| Error::Parse {
            what: "graph JSON",
            reason,
        };
        let obj = v.as_object().ok_or_else(|| bad("not an object".into()))?;
        let nv = obj
            .get("num_vertices")
            .and_then(Value::as_u64)
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| bad("missing or invalid num_vertices".into()))?;
        let list = obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing edges array".into()))?;
        let mut edges = Vec::with_capacity(list.len());
        for e in list {
            let pair = e
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad(format!("edge {e} is not a [u, v] pair")))?;
            let ends: Vec<u32> = pair
                .iter()
                .filter_map(|x| x.as_u64().and_then(|n| u32::try_from(n).ok()))
                .collect();
            if ends.len() != 2 {
                return Err(bad(format!("edge {e} has non-integer endpoints")));
            }
            edges.push((ends[0], ends[1]));
        }
        MultiGraph::new(nv, edges)
    }
}

/// A multigraph with distinguished vertices, as produced by the Farey
/// generator: X and Y are the endpoints of the newest edge, Z (absent at
/// generation 0) is the vertex the two halves share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    pub graph: MultiGraph,
    pub mark_x: u32,
    pub mark_y: u32,
    pub mark_z: Option<u32>,
}

impl MarkedGraph {
    /// Edge-list text with a trailing `# marks X Y [Z]` comment.
    pub fn to_edge_list_text(&self) -> String {
        let mut s = self.graph.to_edge_list_text();
        match self.mark_z {
            Some(z) => s.push_str(&format!("# marks {} {} {}\n", self.mark_x, self.mark_y, z)),
            None => s.push_str(&format!("# marks {} {}\n", self.mark_x, self.mark_y)),
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.graph.to_json();
        let marks = match self.mark_z {
            Some(z) => json!({ "x": self.mark_x, "y": self.mark_y, "z": z }),
            None => json!({ "x": self.mark_x, "y": self.mark_y }),
        };
        v["marks"] = marks;
        v
    }

    pub fn from_json(v: &Value) -> Result<MarkedGraph> {
        let bad = |reason: &str| Error::Parse {
            what: "marked graph JSON",
            reason: reason.into(),
        };
        let graph = MultiGraph::from_json(v)?;
        let marks = v
            .get("marks")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing marks object"))?;
        let get = |key: &str| {
            marks
                .get(key)
                .and_then(Value::as_u64)
                .and_then(|n| u32::try_from(n).ok())
        };
        let mark_x = get("x").ok_or_else(|| bad("missing mark x"))?;
        let mark_y = get("y").ok_or_else(|| bad("missing mark y"))?;
        let mark_z = get("z");
        for mark in [Some(mark_x), Some(mark_y), mark_z].into_iter().flatten() {
            if mark >= graph.num_vertices() {
                return Err(Error::InvalidVertex {
                    id: mark,
                    num_vertices: graph.num_vertices(),
                });
            }
        }
        Ok(MarkedGraph {
            graph,
            mark_x,
            mark_y,
            mark_z,
        })
    }
}

/// Farey graph: generation 0 is a single edge; each step takes two copies
/// of the previous generation, identifies copy 2's X with copy 1's Y (that
/// shared vertex becomes Z), and adds one new edge between copy 1's X and
/// copy 2's Y, which become the new X and Y. 2^n + 1 vertices and
/// 2^(n+1) - 1 edges at generation n.
pub fn farey_graph(n: u32, limits: &Limits) -> Result<MarkedGraph> {
    if n > limits.graph_generation_cap {
        return Err(Error::GenerationCapExceeded {
            n,
            cap: limits.graph_generation_cap,
        });
    }
    check_vertex_cap((1u128 << n) + 1, limits)?;
    let mut g = MarkedGraph {
        graph: MultiGraph {
            num_vertices: 2,
            edges: vec![(0, 1)],
        },
        mark_x: 0,
        mark_y: 1,
        mark_z: None,
    };
    for _ in 0..n {
        g = farey_step(&g);
    }
    Ok(g)
}

fn farey_step(g: &MarkedGraph) -> MarkedGraph {
    let v1 = g.graph.num_vertices;
    let (hx, hy) = (g.mark_x, g.mark_y);
    // copy 2's vertex w lands on copy 1's Y if it is copy 2's X, otherwise
    // on a fresh id; relative order within copy 2 is preserved.
    let map2 = |w: u32| {
        if w == hx {
            hy
        } else if w < hx {
            v1 + w
        } else {
            v1 + w - 1
        }
    };
    let mut edges = g.graph.edges.clone();
    edges.extend(g.graph.edges.iter().map(|&(a, b)| (map2(a), map2(b))));
    let new_y = map2(hy);
    edges.push((hx, new_y));
    MarkedGraph {
        graph: MultiGraph {
            num_vertices: 2 * v1 - 1,
            edges,
        },
        mark_x: hx,
        mark_y: new_y,
        mark_z: Some(hy),
    }
}

/// Same family, built edge-first: each step attaches one new vertex across
/// every edge introduced by the previous step. Isomorphic to `farey_graph`
/// generation by generation, with a different vertex numbering.
pub fn farey_graph_alt(n: u32, limits: &Limits) -> Result<MultiGraph> {
    if n > limits.graph_generation_cap {
        return Err(Error::GenerationCapExceeded {
            n,
            cap: limits.graph_generation_cap,
        });
    }
    check_vertex_cap((1u128 << n) + 1, limits)?;
    let mut edges = vec![(0u32, 1u32)];
    let mut frontier = vec![(0u32, 1u32)];
    let mut next = 2u32;
    for _ in 0..n {
        let mut fresh = Vec::with_capacity(frontier.len() * 2);
        for &(u, v) in &frontier {
            let w = next;
            next += 1;
            edges.push((u, w));
            edges.push((v, w));
            fresh.push((u, w));
            fresh.push((v, w));
        }
        frontier = fresh;
    }
    Ok(MultiGraph {
        num_vertices: next,
        edges,
    })
}

/// Koch network: generation 0 is a triangle whose vertices are the three
/// hubs. Each step joins 3m+1 copies of the previous generation: one
/// central copy plus 3m peripheral copies, each peripheral copy glued by
/// its X hub onto a hub of the central copy, m copies per hub (first m on
/// X, next m on Y, last m on Z). The central copy's hubs remain the hubs.
/// 2(3m+1)^n + 1 vertices and 3(3m+1)^n edges.
pub fn koch_graph(m: u32, n: u32, limits: &Limits) -> Result<MultiGraph> {
    if m == 0 {
        return Err(Error::Parse {
            what: "koch parameter m",
            reason: "must be positive".into(),
        });
    }
    let copies = pow_saturating(3 * m as u128 + 1, n);
    check_vertex_cap(2u128.saturating_mul(copies).saturating_add(1), limits)?;
    let mut g = MultiGraph {
        num_vertices: 3,
        edges: vec![(0, 1), (1, 2), (0, 2)],
    };
    let hubs = (0u32, 1u32, 2u32);
    for _ in 0..n {
        g = koch_step(&g, hubs, m);
    }
    Ok(g)
}

fn koch_step(g: &MultiGraph, hubs: (u32, u32, u32), m: u32) -> MultiGraph {
    let v0 = g.num_vertices;
    let hx = hubs.0;
    let mut edges = g.edges.clone();
    let mut next = v0;
    for i in 0..3 * m {
        let attach = match i / m {
            0 => hubs.0,
            1 => hubs.1,
            _ => hubs.2,
        };
        let map = |w: u32| {
            if w == hx {
                attach
            } else if w < hx {
                next + w
            } else {
                next + w - 1
            }
        };
        edges.extend(g.edges.iter().map(|&(a, b)| (map(a), map(b))));
        next += v0 - 1;
    }
    MultiGraph {
        num_vertices: next,
        edges,
    }
}

/// Exponential triangle network: generation 0 is a triangle; each step
/// gives every existing vertex two children that form a triangle with it.
/// 3^(n+1) vertices and 3(3^(n+1) - 1)/2 edges.
pub fn exp_graph(n: u32, limits: &Limits) -> Result<MultiGraph> {
    check_vertex_cap(pow_saturating(3, n.saturating_add(1)), limits)?;
    let mut g = MultiGraph {
        num_vertices: 3,
        edges: vec![(0, 1), (1, 2), (0, 2)],
    };
    for _ in 0..n {
        let v0 = g.num_vertices;
        for v in 0..v0 {
            let a = v0 + 2 * v;
            let b = a + 1;
            g.edges.push((v, a));
            g.edges.push((v, b));
            g.edges.push((a, b));
        }
        g.num_vertices += 2 * v0;
    }
    Ok(g)
}

fn check_vertex_cap(vertices: u128, limits: &Limits) -> Result<()> {
    if vertices > limits.vertex_cap as u128 {
        Err(Error::VertexCapExceeded {
            vertices,
            cap: limits.vertex_cap,
        })
    } else {
        Ok(())
    }
}

fn pow_saturating(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Union-find with path halving, reusable across edge subsets.
pub(crate) struct Dsu {
    parent: Vec<u32>,
    merges: u32,
}

impl Dsu {
    pub fn new(n: u32) -> Self {
        Dsu {
            parent: (0..n).collect(),
            merges: 0,
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.merges = 0;
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// True when the edge actually merged two components.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb) as usize] = ra.min(rb);
        self.merges += 1;
        true
    }

    pub fn components(&self) -> u32 {
        self.parent.len() as u32 - self.merges
    }
}
