//! Minimum degree, the special set, vertex connectivity and diameter.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{domain, Result};
use crate::flow::{DisjointPaths, Target};
use crate::graph::{AttachmentGraph, SimpleGraphView, Vertex};

/// Largest `n` for which [`diameter`] runs BFS from every vertex.
pub const EXACT_DIAMETER_LIMIT: u32 = 10_000;
/// Number of highest-degree vertices used for the diameter upper bound.
pub const HUB_SOURCES: usize = 64;

/// `δ(G)`; 0 for a single vertex.
pub fn min_degree(sv: &SimpleGraphView) -> u32 {
    sv.vertices().map(|v| sv.degree(v)).min().unwrap_or(0)
}

/// Vertices with out-degree `k - 1` and in-degree 0, ascending.
pub fn special_set(g: &AttachmentGraph) -> Result<Vec<Vertex>> {
    if g.k() < 2 {
        return Err(domain(format!("special set needs k >= 2 (got {})", g.k())));
    }
    let (d_out, d_in) = g.out_in_degrees();
    Ok((1..=g.n()).filter(|&v| d_in[v as usize] == 0 && d_out[v as usize] == g.k() - 1).collect())
}

fn connectivity_at_least(sv: &SimpleGraphView, c: u32, paths: &mut DisjointPaths) -> bool {
    for i in 1..=c {
        for j in i + 1..=c {
            if !sv.has_edge(i, j) && paths.count(i, Target::Vertex(j), c) < c {
                return false;
            }
        }
    }
    (c + 1..=sv.n()).all(|j| paths.count(j, Target::Below(j), c) >= c)
}

/// Vertex connectivity `κ(G)`: the size of a smallest vertex set whose
/// removal disconnects the graph, or `n - 1` if no such set exists.
///
/// Uses Even's ordered test: `κ >= c` iff the first `c` vertices are
/// pairwise `c`-connected and every later vertex has a `c`-fan into the
/// vertices before it. Candidates `c = δ, δ - 1, ...` are tried in turn.
pub fn vertex_connectivity(sv: &SimpleGraphView) -> Result<u32> {
    let n = sv.n();
    if n < 2 {
        return Err(domain("vertex connectivity needs n >= 2"));
    }
    if !sv.is_connected() {
        return Ok(0);
    }
    let mut paths = DisjointPaths::new(sv);
    let delta = min_degree(sv);
    let kappa = (1..=delta).rev().find(|&c| connectivity_at_least(sv, c, &mut paths)).unwrap_or(0);
    Ok(kappa.min(n - 1))
}

/// Graph diameter, or an interval when only bounds were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Exact(u32),
    Infinite,
    /// `lower` is attained by some BFS; `upper` is `2 * min eccentricity`
    /// over the hub sources and present only when requested.
    Bounds { lower: u32, upper: Option<u32> },
}

impl Diameter {
    pub fn is_finite(&self) -> bool {
        !matches!(self, Diameter::Infinite)
    }

    pub fn lower(&self) -> Option<u32> {
        match *self {
            Diameter::Exact(d) => Some(d),
            Diameter::Bounds { lower, .. } => Some(lower),
            Diameter::Infinite => None,
        }
    }
}

impl Serialize for Diameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Diameter::Exact(d) => s.serialize_u32(d),
            Diameter::Infinite => s.serialize_str("inf"),
            Diameter::Bounds { lower, upper } => {
                let mut st = s.serialize_struct("Diameter", 2)?;
                st.serialize_field("lower", &lower)?;
                st.serialize_field("upper", &upper)?;
                st.end()
            }
        }
    }
}

fn eccentricity(sv: &SimpleGraphView, v: Vertex) -> (u32, Vertex) {
    let dist = sv.bfs(v);
    let mut best = (0, v);
    for (w, &d) in dist.iter().enumerate().skip(1) {
        if d > best.0 {
            best = (d, w as Vertex);
        }
    }
    best
}

/// Exact diameter for `n <= EXACT_DIAMETER_LIMIT`, bounds above that.
pub fn diameter(sv: &SimpleGraphView) -> Diameter {
    diameter_with(sv, false)
}

/// As [`diameter`]; for large graphs `with_upper` also runs BFS from the
/// `HUB_SOURCES` highest-degree vertices to produce an upper bound.
pub fn diameter_with(sv: &SimpleGraphView, with_upper: bool) -> Diameter {
    let n = sv.n();
    if !sv.is_connected() {
        return Diameter::Infinite;
    }
    if n <= EXACT_DIAMETER_LIMIT {
        return Diameter::Exact(sv.vertices().map(|v| eccentricity(sv, v).0).max().unwrap_or(0));
    }
    // Double sweep from the highest-degree vertex.
    let start = sv.vertices().max_by_key(|&v| (sv.degree(v), std::cmp::Reverse(v))).unwrap();
    let (_, far) = eccentricity(sv, start);
    let (mut lower, _) = eccentricity(sv, far);
    let upper = with_upper.then(|| {
        let mut order: Vec<Vertex> = sv.vertices().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(sv.degree(v)), v));
        let mut best = u32::MAX;
        for &v in order.iter().take(HUB_SOURCES) {
            let (e, _) = eccentricity(sv, v);
            lower = lower.max(e);
            best = best.min(2 * e);
        }
        best
    });
    Diameter::Bounds { lower, upper }
}

/// Which of the more expensive quantities to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StructureOptions {
    pub connectivity: bool,
    pub diameter: bool,
    pub diameter_upper: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StructureReport {
    pub n: u32,
    pub k: u32,
    pub edge_count: u64,
    pub min_degree: u32,
    pub max_degree: u32,
    /// Absent for `k = 1`.
    pub special_set: Option<Vec<Vertex>>,
    /// Absent when not requested or for `n = 1`.
    pub connectivity: Option<u32>,
    pub diameter: Option<Diameter>,
    pub is_connected: bool,
}

pub fn structure_report(g: &AttachmentGraph, opts: StructureOptions) -> StructureReport {
    let sv = g.simple_view();
    StructureReport {
        n: g.n(),
        k: g.k(),
        edge_count: sv.edge_count(),
        min_degree: min_degree(sv),
        max_degree: sv.max_degree(),
        special_set: special_set(g).ok(),
        connectivity: if opts.connectivity { vertex_connectivity(sv).ok() } else { None },
        diameter: (opts.diameter || opts.diameter_upper).then(|| diameter_with(sv, opts.diameter_upper)),
        is_connected: sv.is_connected(),
    }
}
