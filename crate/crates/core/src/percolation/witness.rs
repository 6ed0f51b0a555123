//! Witness graphs: rooted certificates that a vertex was infected.
//!
//! A witness of depth `j` for `x` has layers `V_0, ..., V_j` with
//! `V_i ⊆ B_i` and `V_j = {x}`. Every vertex of `V_i`, `i >= 1`, has exactly
//! `r` children in earlier layers, at least one of them in `V_{i-1}`.
//! Edges point from parent to child, and the leaves lie in `V_0`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::PercolationTrace;
use crate::error::{Error, Result};
use crate::graph::{SimpleGraphView, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub root: Vertex,
    /// `V_0, ..., V_j`, each ascending.
    pub layers: Vec<Vec<Vertex>>,
    /// `[parent, child]` pairs, sorted.
    pub edges: Vec<[Vertex; 2]>,
}

impl WitnessCertificate {
    pub fn depth(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialises")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessVerdict {
    pub valid: bool,
    /// Identifier of the first violated clause.
    pub clause: Option<&'static str>,
    pub detail: Option<String>,
}

impl WitnessVerdict {
    fn ok() -> Self {
        WitnessVerdict { valid: true, clause: None, detail: None }
    }

    fn fail(clause: &'static str, detail: String) -> Self {
        WitnessVerdict { valid: false, clause: Some(clause), detail: Some(detail) }
    }
}

/// Backward closure of `x` through the recorded provenance.
pub fn extract_witness(trace: &PercolationTrace, sv: &SimpleGraphView, x: Vertex) -> Result<WitnessCertificate> {
    if x == 0 || x > sv.n() || trace.n() != sv.n() {
        return Err(crate::error::domain(format!("vertex {x} outside 1..={}", sv.n())));
    }
    let depth = match trace.round_of(x) {
        None => return Err(Error::NotInfected(x)),
        Some(0) => return Err(Error::InitiallyInfected(x)),
        Some(j) => j as usize,
    };
    let mut layers = vec![BTreeSet::new(); depth + 1];
    let mut edges = BTreeSet::new();
    let mut stack = vec![x];
    layers[depth].insert(x);
    while let Some(v) = stack.pop() {
        let Some(children) = trace.provenance(v) else { continue };
        for &c in children {
            edges.insert([v, c]);
            let layer = trace.round_of(c).expect("provenance vertices are infected") as usize;
            if layers[layer].insert(c) {
                stack.push(c);
            }
        }
    }
    Ok(WitnessCertificate {
        root: x,
        layers: layers.into_iter().map(|l| l.into_iter().collect()).collect(),
        edges: edges.into_iter().collect(),
    })
}

/// Checks a certificate against the graph and trace. Clauses are tested in
/// the order `(I) layers`, `edges exist`, `acyclic`, `edge orientation`,
/// `leaves⊆B_0`, `(II) child count`, `(II) parent in V_{i-1}`,
/// `leaf count`, `rooted`.
pub fn verify_witness(w: &WitnessCertificate, sv: &SimpleGraphView, trace: &PercolationTrace) -> WitnessVerdict {
    let n = sv.n();
    let r = trace.r() as usize;

    // (I): layers nest inside the rounds, V_j = {x}, no repeats.
    let mut layer_of: BTreeMap<Vertex, usize> = BTreeMap::new();
    if w.layers.is_empty() || w.layers.last().unwrap() != &vec![w.root] {
        return WitnessVerdict::fail("(I) layers", format!("last layer is not {{{}}}", w.root));
    }
    for (i, layer) in w.layers.iter().enumerate() {
        for &v in layer {
            if v == 0 || v > n || trace.n() != n {
                return WitnessVerdict::fail("(I) layers", format!("vertex {v} outside 1..={n}"));
            }
            if trace.round_of(v) != Some(i as u32) {
                return WitnessVerdict::fail("(I) layers", format!("vertex {v} in V_{i} but not in B_{i}"));
            }
            if layer_of.insert(v, i).is_some() {
                return WitnessVerdict::fail("(I) layers", format!("vertex {v} listed twice"));
            }
        }
    }

    let mut children: BTreeMap<Vertex, Vec<Vertex>> = layer_of.keys().map(|&v| (v, Vec::new())).collect();
    for &[a, b] in &w.edges {
        if !layer_of.contains_key(&a) || !layer_of.contains_key(&b) || !sv.has_edge(a, b) {
            return WitnessVerdict::fail("edges exist", format!("{a} -> {b} is not an edge among the layers"));
        }
        let list = children.get_mut(&a).unwrap();
        if list.contains(&b) {
            return WitnessVerdict::fail("edges exist", format!("{a} -> {b} listed twice"));
        }
        list.push(b);
    }

    if let Some(v) = find_cycle(&children) {
        return WitnessVerdict::fail("acyclic", format!("directed cycle through {v}"));
    }
    for &[a, b] in &w.edges {
        if layer_of[&a] <= layer_of[&b] {
            return WitnessVerdict::fail("edge orientation", format!("{a} -> {b} does not point to an earlier layer"));
        }
    }
    for (&v, c) in &children {
        if c.is_empty() && layer_of[&v] != 0 {
            return WitnessVerdict::fail("leaves⊆B_0", format!("leaf {v} lies in V_{}", layer_of[&v]));
        }
    }
    for (&v, c) in &children {
        let i = layer_of[&v];
        if i >= 1 && c.len() != r {
            return WitnessVerdict::fail("(II) child count", format!("{v} has {} children, need {r}", c.len()));
        }
    }
    for (&v, c) in &children {
        let i = layer_of[&v];
        if i >= 1 && !c.iter().any(|u| layer_of[u] == i - 1) {
            return WitnessVerdict::fail("(II) parent in V_{i-1}", format!("{v} has no child in V_{}", i - 1));
        }
    }
    let leaves = children.values().filter(|c| c.is_empty()).count();
    if leaves < r {
        return WitnessVerdict::fail("leaf count", format!("{leaves} leaves, need at least {r}"));
    }
    let mut reached = BTreeSet::from([w.root]);
    let mut stack = vec![w.root];
    while let Some(v) = stack.pop() {
        for &c in &children[&v] {
            if reached.insert(c) {
                stack.push(c);
            }
        }
    }
    if reached.len() != layer_of.len() {
        return WitnessVerdict::fail("rooted", format!("{} vertices unreachable from the root", layer_of.len() - reached.len()));
    }
    WitnessVerdict::ok()
}

fn find_cycle(children: &BTreeMap<Vertex, Vec<Vertex>>) -> Option<Vertex> {
    let mut indegree: BTreeMap<Vertex, usize> = children.keys().map(|&v| (v, 0)).collect();
    for c in children.values().flatten() {
        *indegree.get_mut(c).unwrap() += 1;
    }
    let mut ready: Vec<Vertex> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for c in &children[&v] {
            let d = indegree.get_mut(c).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push(*c);
            }
        }
    }
    (removed < children.len()).then(|| *indegree.iter().find(|(_, &d)| d > 0).unwrap().0)
}
