//! One explanation episode: local traversal from the target, membership
//! checks against the overlap set, belief updates on failure, and
//! termination by success, the stopping rule, or exhaustion.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::belief::{CostFunction, OverlapPrior, STOP_TIE_TOL};
use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    /// Uniform draw among all unvisited non-target nodes. Only valid on
    /// complete graphs, where it coincides with local search.
    UniformWithoutReplacement,
    /// Exhausts the nearest discovery layer (random order within a layer)
    /// before moving outward.
    BreadthFirst,
    /// Extends from the most recently visited node with unvisited
    /// neighbors, backtracking when stuck.
    DepthFirstBacktracking,
    /// Uniform draw among all unvisited neighbors of the visited set.
    RandomNeighbor,
}

impl SearchStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            SearchStrategy::UniformWithoutReplacement => "uniform_without_replacement",
            SearchStrategy::BreadthFirst => "breadth_first",
            SearchStrategy::DepthFirstBacktracking => "depth_first_backtracking",
            SearchStrategy::RandomNeighbor => "random_neighbor",
        }
    }
}

/// Benefit and cost parameters enabling the myopic stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoppingRule {
    pub benefit: f64,
    pub cost: CostFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Overlap node found on step `t`.
    Explained { t: usize },
    /// Stopping rule fired after `t` paid steps without success.
    Abandoned { t: usize },
    /// No reachable unvisited node remained after `t` paid steps.
    Exhausted { t: usize },
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Explained { .. } => "explained",
            Outcome::Abandoned { .. } => "abandoned",
            Outcome::Exhausted { .. } => "exhausted",
        }
    }

    /// Number of paid steps.
    pub fn t(&self) -> usize {
        match self {
            Outcome::Explained { t } | Outcome::Abandoned { t } | Outcome::Exhausted { t } => *t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub outcome: Outcome,
    /// Nodes in visit order, starting with the target at step 0.
    pub visited: Vec<usize>,
    pub explanatory_node: Option<usize>,
    /// Witness path from the explanatory node back to the target
    /// (empty unless explained).
    pub path: Vec<usize>,
    /// `B * 1{explained} - sum of c(j) over paid steps`.
    pub net_payoff: f64,
}

/// In-progress traversal; selects the next node to reveal per strategy.
pub struct Traversal<'g> {
    graph: &'g KnowledgeGraph,
    strategy: SearchStrategy,
    visited: Vec<bool>,
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    /// discovered = adjacent to a visited node but not yet visited
    discovered: Vec<bool>,
    frontier: Vec<usize>,
    dfs_stack: Vec<usize>,
}

impl<'g> Traversal<'g> {
    pub fn new(graph: &'g KnowledgeGraph, strategy: SearchStrategy) -> Result<Self> {
        if strategy == SearchStrategy::UniformWithoutReplacement && !graph.is_complete() {
            return Err(Error::InvalidArgument(
                "uniform sampling without replacement requires a complete graph".into(),
            ));
        }
        let n = graph.n();
        let mut tr = Self {
            graph,
            strategy,
            visited: vec![false; n],
            order: Vec::with_capacity(n),
            parent: vec![None; n],
            depth: vec![0; n],
            discovered: vec![false; n],
            frontier: Vec::new(),
            dfs_stack: Vec::new(),
        };
        tr.mark_visited(graph.target());
        tr.dfs_stack.push(graph.target());
        Ok(tr)
    }

    fn mark_visited(&mut self, node: usize) {
        self.visited[node] = true;
        self.order.push(node);
        for &v in self.graph.neighbors(node) {
            if !self.visited[v] && !self.discovered[v] {
                self.discovered[v] = true;
                self.depth[v] = self.depth[node] + 1;
                self.parent[v] = Some(node);
                self.frontier.push(v);
            }
        }
    }

    /// Selects, marks visited, and returns the next node, or `None` when
    /// no unvisited node is reachable from the visited set.
    pub fn next_candidate(&mut self, rng: &mut impl Rng) -> Option<usize> {
        let choice = match self.strategy {
            SearchStrategy::UniformWithoutReplacement => {
                let candidates: Vec<usize> =
                    (0..self.graph.n()).filter(|&v| !self.visited[v]).collect();
                candidates.as_slice().choose(rng).copied()
            }
            SearchStrategy::RandomNeighbor => {
                self.frontier.retain(|&v| !self.visited[v]);
                self.frontier.as_slice().choose(rng).copied()
            }
            SearchStrategy::BreadthFirst => {
                self.frontier.retain(|&v| !self.visited[v]);
                let min_depth = self.frontier.iter().map(|&v| self.depth[v]).min()?;
                let layer: Vec<usize> = self
                    .frontier
                    .iter()
                    .copied()
                    .filter(|&v| self.depth[v] == min_depth)
                    .collect();
                layer.as_slice().choose(rng).copied()
            }
            SearchStrategy::DepthFirstBacktracking => loop {
                let &top = self.dfs_stack.last()?;
                let unvisited: Vec<usize> = self
                    .graph
                    .neighbors(top)
                    .iter()
                    .copied()
                    .filter(|&v| !self.visited[v])
                    .collect();
                match unvisited.as_slice().choose(rng) {
                    Some(&v) => break Some(v),
                    None => {
                        self.dfs_stack.pop();
                    }
                }
            },
        };
        let node = choice?;
        if self.strategy == SearchStrategy::DepthFirstBacktracking {
            // the DFS parent is the stack top that proposed the node
            self.parent[node] = self.dfs_stack.last().copied();
            self.depth[node] = self.depth[self.parent[node].unwrap()] + 1;
            self.dfs_stack.push(node);
            self.visited[node] = true;
            self.order.push(node);
            for &v in self.graph.neighbors(node) {
                if !self.visited[v] && !self.discovered[v] {
                    self.discovered[v] = true;
                }
            }
        } else {
            self.mark_visited(node);
        }
        Some(node)
    }

    pub fn visited_order(&self) -> &[usize] {
        &self.order
    }

    /// Path from `node` back to the target along discovery parents.
    pub fn witness_path(&self, node: usize) -> Vec<usize> {
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path
    }
}

/// Runs one explanation episode. The target is revealed cost-free at step
/// 0; each later step pays `c(t)` and reveals one unvisited node adjacent
/// to the visited set. Deterministic for a given seed.
pub fn run_episode(
    graph: &KnowledgeGraph,
    prior: &OverlapPrior,
    strategy: SearchStrategy,
    stopping: Option<&StoppingRule>,
    seed: u64,
) -> Result<EpisodeResult> {
    let n_r = graph.n();
    if prior.max_support() > n_r - 1 {
        return Err(Error::InvalidArgument(
            "prior support exceeds the number of non-target nodes".into(),
        ));
    }
    if let Some(rule) = stopping {
        rule.cost.validate()?;
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut traversal = Traversal::new(graph, strategy)?;
    let mut belief = prior.clone();
    let mut paid_cost = 0.0;

    for t in 1..n_r {
        if let Some(rule) = stopping {
            // abandon only when the next draw is strictly not worth its
            // cost; on indifference the searcher still tries
            let eb = belief.expected_benefit(n_r - t, rule.benefit)?;
            if eb + STOP_TIE_TOL < rule.cost.at(t) {
                return Ok(EpisodeResult {
                    outcome: Outcome::Abandoned { t: t - 1 },
                    visited: traversal.order.clone(),
                    explanatory_node: None,
                    path: Vec::new(),
                    net_payoff: -paid_cost,
                });
            }
        }
        let node = match traversal.next_candidate(&mut rng) {
            Some(node) => node,
            None => {
                return Ok(EpisodeResult {
                    outcome: Outcome::Exhausted { t: t - 1 },
                    visited: traversal.order.clone(),
                    explanatory_node: None,
                    path: Vec::new(),
                    net_payoff: -paid_cost,
                });
            }
        };
        if let Some(rule) = stopping {
            paid_cost += rule.cost.at(t);
            if graph.in_overlap(node) {
                return Ok(EpisodeResult {
                    outcome: Outcome::Explained { t },
                    visited: traversal.order.clone(),
                    explanatory_node: Some(node),
                    path: traversal.witness_path(node),
                    net_payoff: rule.benefit - paid_cost,
                });
            }
            // the pool at draw t was (N_R - 1) - (t - 1) = N_R - t
            belief = belief.after_failure(n_r - t)?;
        } else if graph.in_overlap(node) {
            return Ok(EpisodeResult {
                outcome: Outcome::Explained { t },
                visited: traversal.order.clone(),
                explanatory_node: Some(node),
                path: traversal.witness_path(node),
                net_payoff: 0.0,
            });
        }
    }

    // all N_R - 1 non-target nodes were reachable and visited, none in K
    Ok(EpisodeResult {
        outcome: Outcome::Exhausted { t: n_r - 1 },
        visited: traversal.order.clone(),
        explanatory_node: None,
        path: Vec::new(),
        net_payoff: -paid_cost,
    })
}
