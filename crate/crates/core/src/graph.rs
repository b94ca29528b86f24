//! Explainer knowledge graphs: generators, overlap placement, connectivity.
//!
//! A graph holds the explainer's concepts, a designated target node to be
//! explained, and a hidden membership flag marking the overlap with the
//! explainee. The target is never in the overlap. Edges are undirected
//! and unweighted.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    target: usize,
    overlap: Vec<bool>,
}

/// Family of random graph generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Complete {
        n: usize,
    },
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    /// Watts-Strogatz ring lattice of even degree `k`, rewired with
    /// probability `beta` per lattice edge.
    SmallWorld {
        n: usize,
        k: usize,
        beta: f64,
    },
    /// Two disjoint components; the target always lives in component `a`.
    TwoComponent {
        a: Box<GraphSpec>,
        b: Box<GraphSpec>,
    },
}

impl GraphSpec {
    pub fn node_count(&self) -> usize {
        match self {
            GraphSpec::Complete { n }
            | GraphSpec::ErdosRenyi { n, .. }
            | GraphSpec::SmallWorld { n, .. } => *n,
            GraphSpec::TwoComponent { a, b } => a.node_count() + b.node_count(),
        }
    }

    /// True when the edge set does not depend on the seed (only target
    /// and overlap placement do). Lets replicated runs reuse one
    /// adjacency structure.
    pub fn edges_deterministic(&self) -> bool {
        match self {
            GraphSpec::Complete { .. } => true,
            GraphSpec::ErdosRenyi { .. } | GraphSpec::SmallWorld { .. } => false,
            GraphSpec::TwoComponent { a, b } => a.edges_deterministic() && b.edges_deterministic(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GraphSpec::Complete { n } => {
                if *n < 2 {
                    return Err(Error::InvalidArgument("complete graph needs n >= 2".into()));
                }
            }
            GraphSpec::ErdosRenyi { n, p } => {
                if *n < 2 {
                    return Err(Error::InvalidArgument("random graph needs n >= 2".into()));
                }
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidArgument(format!(
                        "edge probability must lie in [0, 1], got {p}"
                    )));
                }
            }
            GraphSpec::SmallWorld { n, k, beta } => {
                if *k == 0 || *k % 2 != 0 || *k >= *n {
                    return Err(Error::InvalidArgument(format!(
                        "ring degree must be even and < n, got k={k}, n={n}"
                    )));
                }
                if !(0.0..=1.0).contains(beta) {
                    return Err(Error::InvalidArgument(format!(
                        "rewire probability must lie in [0, 1], got {beta}"
                    )));
                }
            }
            GraphSpec::TwoComponent { a, b } => {
                if matches!(**a, GraphSpec::TwoComponent { .. })
                    || matches!(**b, GraphSpec::TwoComponent { .. })
                {
                    return Err(Error::InvalidArgument(
                        "two-component specs do not nest".into(),
                    ));
                }
                a.validate()?;
                b.validate()?;
            }
        }
        Ok(())
    }
}

/// Where the overlap set is allowed to sit relative to the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OverlapPlacement {
    UniformRandom,
    /// Only nodes at least `min_distance` hops from the target are eligible;
    /// unreachable nodes count as infinitely far.
    FarFromTarget { min_distance: usize },
    /// Only nodes outside the target's connected component are eligible.
    OtherComponent,
}

fn edges_from_spec(spec: &GraphSpec, rng: &mut ChaCha12Rng) -> Vec<(usize, usize)> {
    match spec {
        GraphSpec::Complete { n } => {
            let mut edges = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..*n {
                for v in (u + 1)..*n {
                    edges.push((u, v));
                }
            }
            edges
        }
        GraphSpec::ErdosRenyi { n, p } => {
            let mut edges = Vec::new();
            for u in 0..*n {
                for v in (u + 1)..*n {
                    if rng.gen::<f64>() < *p {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        GraphSpec::SmallWorld { n, k, beta } => {
            let mut has_edge = vec![vec![false; *n]; *n];
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for u in 0..*n {
                for j in 1..=(*k / 2) {
                    let v = (u + j) % *n;
                    let (a, b) = if u < v { (u, v) } else { (v, u) };
                    if !has_edge[a][b] {
                        has_edge[a][b] = true;
                        edges.push((a, b));
                    }
                }
            }
            // rewire the far endpoint of each lattice edge
            for idx in 0..edges.len() {
                if rng.gen::<f64>() < *beta {
                    let (u, v) = edges[idx];
                    let candidates: Vec<usize> = (0..*n)
                        .filter(|&w| {
                            let (a, b) = if u < w { (u, w) } else { (w, u) };
                            w != u && w != v && !has_edge[a][b]
                        })
                        .collect();
                    if let Some(&w) = candidates.as_slice().choose(rng) {
                        has_edge[u.min(v)][u.max(v)] = false;
                        has_edge[u.min(w)][u.max(w)] = true;
                        edges[idx] = (u.min(w), u.max(w));
                    }
                }
            }
            edges
        }
        GraphSpec::TwoComponent { a, b } => {
            let offset = a.node_count();
            let mut edges = edges_from_spec(a, rng);
            edges.extend(
                edges_from_spec(b, rng)
                    .into_iter()
                    .map(|(u, v)| (u + offset, v + offset)),
            );
            edges
        }
    }
}

/// Generates a graph from the spec with no overlap assigned yet.
/// Deterministic for a given seed; the target is drawn uniformly at
/// random (within component `a` for two-component specs).
pub fn generate(spec: &GraphSpec, seed: u64) -> Result<KnowledgeGraph> {
    spec.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = spec.node_count();
    let edges = edges_from_spec(spec, &mut rng);
    let target_range = match spec {
        GraphSpec::TwoComponent { a, .. } => a.node_count(),
        _ => n,
    };
    let target = rng.gen_range(0..target_range);
    KnowledgeGraph::from_parts(n, target, &[], &edges)
}

impl KnowledgeGraph {
    /// Assembles a graph from explicit parts, validating every invariant.
    pub fn from_parts(
        n: usize,
        target: usize,
        overlap_nodes: &[usize],
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("graph needs n >= 2".into()));
        }
        if target >= n {
            return Err(Error::InvalidArgument(format!(
                "target {target} out of range for {n} nodes"
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let mut overlap = vec![false; n];
        for &node in overlap_nodes {
            if node >= n {
                return Err(Error::InvalidArgument(format!(
                    "overlap node {node} out of range"
                )));
            }
            if node == target {
                return Err(Error::InvalidArgument(
                    "target cannot belong to the overlap set".into(),
                ));
            }
            overlap[node] = true;
        }
        Ok(Self {
            n,
            adj,
            target,
            overlap,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn in_overlap(&self, node: usize) -> bool {
        self.overlap[node]
    }

    pub fn overlap_count(&self) -> usize {
        self.overlap.iter().filter(|&&b| b).count()
    }

    pub fn overlap_nodes(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.overlap[v]).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as sorted (u, v) pairs with u < v.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|list| list.len() == self.n - 1)
    }

    /// BFS hop distance from `from` to every node; `None` for unreachable.
    pub fn bfs_distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Component label per node; two nodes share a label iff connected.
    /// Labels are assigned in ascending order of each component's lowest id.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut labels = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if labels[v] == usize::MAX {
                        labels[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        labels
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component_labels()[node]
    }

    /// Moves the target, clearing any overlap assignment.
    pub fn retarget(&mut self, target: usize) -> Result<()> {
        if target >= self.n {
            return Err(Error::InvalidArgument(format!(
                "target {target} out of range for {} nodes",
                self.n
            )));
        }
        self.target = target;
        self.overlap.fill(false);
        Ok(())
    }

    /// Flags exactly `n_k` non-target nodes as the overlap set, drawn per
    /// the placement rule. Deterministic per seed.
    pub fn assign_overlap(
        &mut self,
        n_k: usize,
        placement: &OverlapPlacement,
        seed: u64,
    ) -> Result<()> {
        if n_k == 0 || n_k > self.n - 1 {
            return Err(Error::InvalidArgument(format!(
                "overlap size must lie in 1..={}, got {n_k}",
                self.n - 1
            )));
        }
        let eligible: Vec<usize> = match placement {
            OverlapPlacement::UniformRandom => {
                (0..self.n).filter(|&v| v != self.target).collect()
            }
            OverlapPlacement::FarFromTarget { min_distance } => {
                let dist = self.bfs_distances(self.target);
                (0..self.n)
                    .filter(|&v| v != self.target)
                    .filter(|&v| dist[v].map_or(true, |d| d >= *min_distance))
                    .collect()
            }
            OverlapPlacement::OtherComponent => {
                let labels = self.component_labels();
                let target_label = labels[self.target];
                if labels.iter().all(|&l| l == target_label) {
                    return Err(Error::InfeasiblePlacement(
                        "graph has a single component; no other component exists".into(),
                    ));
                }
                (0..self.n).filter(|&v| labels[v] != target_label).collect()
            }
        };
        if eligible.len() < n_k {
            return Err(Error::InfeasiblePlacement(format!(
                "{} eligible nodes for an overlap of {n_k}",
                eligible.len()
            )));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let chosen: Vec<usize> = eligible
            .choose_multiple(&mut rng, n_k)
            .copied()
            .collect();
        self.overlap.fill(false);
        for v in chosen {
            self.overlap[v] = true;
        }
        Ok(())
    }

    /// Returns a copy with exactly `n_k` non-target nodes flagged as the
    /// overlap set, drawn per the placement rule. Deterministic per seed.
    pub fn place_overlap(
        &self,
        n_k: usize,
        placement: &OverlapPlacement,
        seed: u64,
    ) -> Result<KnowledgeGraph> {
        let mut out = self.clone();
        out.assign_overlap(n_k, placement, seed)?;
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "target": self.target,
            "overlap": self.overlap_nodes(),
            "edges": self.edges(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Form {
            n: usize,
            target: usize,
            overlap: Vec<usize>,
            edges: Vec<(usize, usize)>,
        }
        let form: Form = serde_json::from_value(value.clone())?;
        Self::from_parts(form.n, form.target, &form.overlap, &form.edges)
    }
}
