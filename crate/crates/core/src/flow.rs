//! Unit vertex-capacity augmenting paths on the split-vertex network of a
//! simple graph, without materialising the network.
//!
//! Vertex `v` becomes `in(v) -> out(v)` with capacity 1; every undirected
//! edge `{u, v}` becomes arcs `out(u) -> in(v)` and `out(v) -> in(u)` of
//! unbounded capacity. Flow is recorded per vertex: whether it carries a
//! path (`through`) and which vertex feeds it (`entered_from`, 0 for none).

use crate::graph::{SimpleGraphView, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Target {
    /// Paths end at this vertex, which has unbounded capacity.
    Vertex(Vertex),
    /// Paths end at distinct vertices below this label (a fan into the prefix).
    Below(Vertex),
}

#[inline]
fn in_node(v: Vertex) -> u32 {
    2 * v
}

#[inline]
fn out_node(v: Vertex) -> u32 {
    2 * v + 1
}

pub(crate) struct DisjointPaths<'a> {
    g: &'a SimpleGraphView,
    through: Vec<bool>,
    entered_from: Vec<Vertex>,
    touched: Vec<Vertex>,
    seen: Vec<u32>,
    epoch: u32,
    parent: Vec<u32>,
    stack: Vec<(u32, u32)>,
    path: Vec<u32>,
}

impl<'a> DisjointPaths<'a> {
    pub(crate) fn new(g: &'a SimpleGraphView) -> Self {
        let slots = g.n() as usize + 1;
        DisjointPaths {
            g,
            through: vec![false; slots],
            entered_from: vec![0; slots],
            touched: Vec::new(),
            seen: vec![0; 2 * slots],
            epoch: 0,
            parent: vec![0; 2 * slots],
            stack: Vec::new(),
            path: Vec::new(),
        }
    }

    /// Number of internally vertex-disjoint paths from `source` to `target`,
    /// stopping once `cap` have been found.
    pub(crate) fn count(&mut self, source: Vertex, target: Target, cap: u32) -> u32 {
        for &v in &self.touched {
            self.through[v as usize] = false;
            self.entered_from[v as usize] = 0;
        }
        self.touched.clear();
        let mut found = 0;
        while found < cap && self.augment(source, target) {
            found += 1;
        }
        found
    }

    fn is_goal(&self, node: u32, target: Target) -> bool {
        if node & 1 == 1 {
            return false;
        }
        let v = node / 2;
        match target {
            Target::Vertex(t) => v == t,
            Target::Below(limit) => v < limit && !self.through[v as usize],
        }
    }

    /// Depth-first search for one augmenting path; applies it if found.
    fn augment(&mut self, source: Vertex, target: Target) -> bool {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let start = out_node(source);
        self.seen[start as usize] = epoch;
        self.seen[in_node(source) as usize] = epoch;
        self.stack.clear();
        self.stack.push((start, 0));
        let mut goal = None;
        while let Some(&(node, cursor)) = self.stack.last() {
            let v = node / 2;
            let (next, cursor) = if node & 1 == 1 {
                let nbrs = self.g.neighbors(v);
                let c = cursor as usize;
                let next = if c < nbrs.len() {
                    Some(in_node(nbrs[c]))
                } else if c == nbrs.len() && self.through[v as usize] && v != source {
                    Some(in_node(v))
                } else {
                    None
                };
                (next, cursor + 1)
            } else if cursor == 0 && !self.through[v as usize] {
                (Some(out_node(v)), 1)
            } else if cursor <= 1 {
                let w = self.entered_from[v as usize];
                ((w != 0).then(|| out_node(w)), 2)
            } else {
                (None, 2)
            };
            let Some(w) = next else {
                self.stack.pop();
                continue;
            };
            self.stack.last_mut().unwrap().1 = cursor;
            if self.seen[w as usize] == epoch {
                continue;
            }
            self.seen[w as usize] = epoch;
            self.parent[w as usize] = node;
            if self.is_goal(w, target) {
                goal = Some(w);
                break;
            }
            self.stack.push((w, 0));
        }
        let Some(goal) = goal else { return false };

        self.path.clear();
        let mut node = goal;
        self.path.push(node);
        while node != start {
            node = self.parent[node as usize];
            self.path.push(node);
        }
        // `path` runs goal -> start; applying moves in this order lets a
        // cancellation at a vertex precede the new arrival there.
        if let Target::Below(_) = target {
            let v = goal / 2;
            self.through[v as usize] = true;
            self.touched.push(v);
        }
        for i in 0..self.path.len() - 1 {
            let (b, a) = (self.path[i], self.path[i + 1]);
            let (va, vb) = (a / 2, b / 2);
            match (a & 1, b & 1) {
                (1, 0) if va != vb => self.entered_from[vb as usize] = va,
                (0, 1) if va == vb => self.through[va as usize] = true,
                (1, 0) => self.through[va as usize] = false,
                _ => self.entered_from[va as usize] = 0,
            }
            self.touched.push(va);
            self.touched.push(vb);
        }
        true
    }
}
