//! Small deterministic graphs used as fixtures and in the guide.

use super::{SimpleGraphView, Vertex};

fn build(n: u32, edges: Vec<(Vertex, Vertex)>) -> SimpleGraphView {
    SimpleGraphView::from_edges(n, edges).expect("family constructors emit valid edges")
}

pub fn path(n: u32) -> SimpleGraphView {
    build(n, (1..n).map(|v| (v, v + 1)).collect())
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: u32) -> SimpleGraphView {
    assert!(n >= 3);
    let mut e: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
    e.push((n, 1));
    build(n, e)
}

pub fn complete(n: u32) -> SimpleGraphView {
    build(n, (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect())
}

/// Star with centre 1 and `leaves` leaves.
pub fn star(leaves: u32) -> SimpleGraphView {
    build(leaves + 1, (2..=leaves + 1).map(|v| (1, v)).collect())
}

/// Complete bipartite graph with parts `1..=a` and `a+1..=a+b`.
pub fn complete_bipartite(a: u32, b: u32) -> SimpleGraphView {
    build(a + b, (1..=a).flat_map(|x| (a + 1..=a + b).map(move |y| (x, y))).collect())
}

/// Two copies of `K_m` joined by the single edge `(m, m + 1)`.
pub fn barbell(m: u32) -> SimpleGraphView {
    let mut e = Vec::new();
    for base in [0, m] {
        for a in 1..=m {
            for b in a + 1..=m {
                e.push((base + a, base + b));
            }
        }
    }
    e.push((m, m + 1));
    build(2 * m, e)
}

/// The `2 x m` grid: rungs `(i, i + m)` and two rails.
pub fn ladder(m: u32) -> SimpleGraphView {
    let mut e = Vec::new();
    for i in 1..=m {
        e.push((i, i + m));
        if i < m {
            e.push((i, i + 1));
            e.push((i + m, i + m + 1));
        }
    }
    build(2 * m, e)
}

/// `count` disjoint edges.
pub fn matching(count: u32) -> SimpleGraphView {
    build(2 * count, (0..count).map(|i| (2 * i + 1, 2 * i + 2)).collect())
}
