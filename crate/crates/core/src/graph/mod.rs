//! The uniform attachment multigraph and its simple undirected view.
//!
//! Vertices are labelled `1..=n`. Vertex `u >= 2` makes `k` independent
//! uniform selections from `1..u`; the raw selection lists are the ground
//! truth, and the simple graph (orientation dropped, repeats merged) is
//! derived from them on first use.

pub mod families;
mod text;

pub use text::{deserialize, serialize, ParseError};

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::rng::Rng;

/// Vertex label, `1..=n`.
pub type Vertex = u32;

/// A generated uniform attachment graph `G_{n,k}`.
#[derive(Debug)]
pub struct AttachmentGraph {
    n: u32,
    k: u32,
    seed: u64,
    /// Selections of vertex `u` live at `[(u - 2) * k, (u - 1) * k)`.
    selections: Vec<Vertex>,
    simple: OnceLock<SimpleGraphView>,
}

impl Clone for AttachmentGraph {
    fn clone(&self) -> Self {
        AttachmentGraph {
            n: self.n,
            k: self.k,
            seed: self.seed,
            selections: self.selections.clone(),
            simple: OnceLock::new(),
        }
    }
}

impl PartialEq for AttachmentGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.seed == other.seed
            && self.selections == other.selections
    }
}

impl Eq for AttachmentGraph {}

impl AttachmentGraph {
    /// Draw `G_{n,k}` from `seed`.
    pub fn generate(n: u32, k: u32, seed: u64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(domain(format!("generate needs n >= 1 and k >= 1 (got n={n}, k={k})")));
        }
        let mut rng = Rng::new(seed);
        let mut selections = Vec::with_capacity((n as usize - 1) * k as usize);
        for u in 2..=n {
            for _ in 0..k {
                selections.push(1 + rng.below(u - 1));
            }
        }
        Ok(AttachmentGraph { n, k, seed, selections, simple: OnceLock::new() })
    }

    /// Build a graph from explicit selection lists, one list per vertex `2..=n`.
    pub fn from_selections(n: u32, k: u32, seed: u64, lists: &[Vec<Vertex>]) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(domain("n and k must be positive"));
        }
        if lists.len() != n as usize - 1 {
            return Err(domain(format!("expected {} selection lists, got {}", n - 1, lists.len())));
        }
        let mut selections = Vec::with_capacity(lists.len() * k as usize);
        for (i, list) in lists.iter().enumerate() {
            let u = i as u32 + 2;
            if list.len() != k as usize {
                return Err(domain(format!("vertex {u} has {} selections, expected {k}", list.len())));
            }
            if let Some(&s) = list.iter().find(|&&s| s == 0 || s >= u) {
                return Err(domain(format!("selection {s} of vertex {u} outside [1, {}]", u - 1)));
            }
            selections.extend_from_slice(list);
        }
        Ok(AttachmentGraph { n, k, seed, selections, simple: OnceLock::new() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Selections of `u` in generation order; empty for vertex 1.
    pub fn selections_of(&self, u: Vertex) -> &[Vertex] {
        assert!(u >= 1 && u <= self.n, "vertex {u} out of range");
        if u == 1 {
            return &[];
        }
        let k = self.k as usize;
        let start = (u as usize - 2) * k;
        &self.selections[start..start + k]
    }

    /// Number of selections that repeat an earlier selection of the same vertex.
    pub fn duplicate_selections(&self) -> u64 {
        let mut dups = 0u64;
        let mut buf = Vec::with_capacity(self.k as usize);
        for u in 2..=self.n {
            buf.clear();
            buf.extend_from_slice(self.selections_of(u));
            buf.sort_unstable();
            dups += buf.windows(2).filter(|w| w[0] == w[1]).count() as u64;
        }
        dups
    }

    /// The deduplicated undirected graph, built once and cached.
    pub fn simple_view(&self) -> &SimpleGraphView {
        self.simple.get_or_init(|| SimpleGraphView::from_attachment(self))
    }

    /// Distinct out-degree and in-degree of every vertex, read straight from
    /// the selection lists. Index 0 is unused.
    pub fn out_in_degrees(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.n as usize;
        let mut d_out = vec![0u32; n + 1];
        let mut d_in = vec![0u32; n + 1];
        let mut buf = Vec::with_capacity(self.k as usize);
        for u in 2..=self.n {
            buf.clear();
            buf.extend_from_slice(self.selections_of(u));
            buf.sort_unstable();
            buf.dedup();
            d_out[u as usize] = buf.len() as u32;
            for &s in &buf {
                d_in[s as usize] += 1;
            }
        }
        (d_out, d_in)
    }

    /// One [`DegreeRecord`] per vertex, in vertex order.
    pub fn degree_records(&self) -> Vec<DegreeRecord> {
        let (d_out, d_in) = self.out_in_degrees();
        (1..=self.n)
            .map(|v| {
                let i = v as usize;
                DegreeRecord { vertex: v, d_out: d_out[i], d_in: d_in[i], degree: d_out[i] + d_in[i] }
            })
            .collect()
    }
}

/// Degrees of one vertex in the directed view (edges point to older vertices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeRecord {
    pub vertex: Vertex,
    pub d_out: u32,
    pub d_in: u32,
    pub degree: u32,
}

/// Simple undirected graph in compressed adjacency form.
///
/// Adjacency lists are sorted and duplicate-free. Slot 0 is a phantom vertex
/// with no neighbours so that lookups use the 1-based labels directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraphView {
    n: u32,
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    edge_count: u64,
}

impl SimpleGraphView {
    fn from_attachment(g: &AttachmentGraph) -> Self {
        let n = g.n as usize;
        let mut distinct: Vec<Vertex> = Vec::with_capacity(g.selections.len());
        let mut bounds = Vec::with_capacity(n + 1);
        bounds.push(0usize);
        bounds.push(0usize);
        let mut degree = vec![0usize; n + 2];
        for u in 2..=g.n {
            let start = distinct.len();
            distinct.extend_from_slice(g.selections_of(u));
            distinct[start..].sort_unstable();
            let mut w = start;
            for r in start..distinct.len() {
                if r == start || distinct[r] != distinct[w - 1] {
                    distinct[w] = distinct[r];
                    w += 1;
                }
            }
            distinct.truncate(w);
            degree[u as usize] += w - start;
            for &s in &distinct[start..] {
                degree[s as usize] += 1;
            }
            bounds.push(distinct.len());
        }
        let mut offsets = vec![0usize; n + 2];
        for v in 1..=n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0; offsets[n + 1]];
        // Vertex u's own (smaller) selections arrive first and in sorted
        // order; later vertices that chose u arrive in increasing order.
        for u in 2..=g.n {
            let ui = u as usize;
            for &s in &distinct[bounds[ui - 1]..bounds[ui]] {
                neighbors[fill[ui]] = s;
                fill[ui] += 1;
                neighbors[fill[s as usize]] = u;
                fill[s as usize] += 1;
            }
        }
        let edge_count = distinct.len() as u64;
        SimpleGraphView { n: g.n, offsets, neighbors, edge_count }
    }

    /// Build from an undirected edge list. Parallel edges are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); n as usize + 1];
        for (a, b) in edges {
            if a == b {
                return Err(domain(format!("self-loop at {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(domain(format!("edge ({a}, {b}) outside 1..={n}")));
            }
            lists[a as usize].push(b);
            lists[b as usize].push(a);
        }
        let mut offsets = vec![0usize; n as usize + 2];
        let mut neighbors = Vec::new();
        for v in 1..=n as usize {
            let l = &mut lists[v];
            l.sort_unstable();
            l.dedup();
            neighbors.extend_from_slice(l);
            offsets[v + 1] = neighbors.len();
        }
        let edge_count = neighbors.len() as u64 / 2;
        Ok(SimpleGraphView { n, offsets, neighbors, edge_count })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Sorted neighbours of `v`.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> u32 {
        let v = v as usize;
        (self.offsets[v + 1] - self.offsets[v]) as u32
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    /// Degree of every vertex; index 0 is unused and holds 0.
    pub fn degrees(&self) -> Vec<u32> {
        (0..=self.n).map(|v| if v == 0 { 0 } else { self.degree(v) }).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Undirected edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |a| self.neighbors(a).iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let dist = self.bfs(1);
        dist[1..].iter().all(|&d| d != u32::MAX)
    }

    /// Hop distances from `source`; `u32::MAX` marks unreachable vertices.
    pub fn bfs(&self, source: Vertex) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n as usize + 1];
        let mut queue = std::collections::VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for &w in self.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Induced subgraph on `keep` (ascending), relabelled `1..=keep.len()`.
    pub fn induced(&self, keep: &[Vertex]) -> SimpleGraphView {
        let mut label = vec![0u32; self.n as usize + 1];
        for (i, &v) in keep.iter().enumerate() {
            label[v as usize] = i as u32 + 1;
        }
        let edges = keep.iter().flat_map(|&a| {
            let label = &label;
            self.neighbors(a)
                .iter()
                .filter(move |&&b| b > a && label[b as usize] != 0)
                .map(move |&b| (label[a as usize], label[b as usize]))
        });
        SimpleGraphView::from_edges(keep.len() as u32, edges.collect::<Vec<_>>())
            .expect("induced subgraph of a valid graph is valid")
    }
}
