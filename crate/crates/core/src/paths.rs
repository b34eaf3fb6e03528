//! Cheapest source-to-sink paths with vertex costs.
//!
//! All searches are dynamic programs over the topological order. Among
//! equal-cost paths the one whose service-id sequence is lexicographically
//! smallest wins, so results are deterministic.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::Result;
use crate::model::{ChoreographyGraph, Coalition, GameInstance, PlayerId};
use crate::rational::{Cost, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub cost: Cost,
    /// Service ids from the first service after the source to the last one
    /// before the sink. `None` when `cost` is infinite.
    pub path: Option<Vec<String>>,
}

impl PathResult {
    pub fn none() -> Self {
        PathResult { cost: Cost::Infinite, path: None }
    }

    pub fn exists(&self) -> bool {
        self.path.is_some()
    }

    pub fn services(&self) -> &[String] {
        self.path.as_deref().unwrap_or(&[])
    }
}

/// Best suffix from each vertex to the sink: total cost and successor.
struct Suffixes {
    cost: Vec<Option<Rational>>,
    next: Vec<Option<usize>>,
}

impl Suffixes {
    fn compute<A, W>(graph: &ChoreographyGraph, allowed: A, weight: W) -> Self
    where
        A: Fn(usize) -> bool,
        W: Fn(usize) -> Rational,
    {
        let n = graph.vertex_count();
        let mut dp = Suffixes { cost: vec![None; n], next: vec![None; n] };
        for &v in graph.topological_order().iter().rev() {
            if !allowed(v) {
                continue;
            }
            let mut best: Option<(Rational, Option<usize>)> = graph.is_exit(v).then(|| (Rational::zero(), None));
            for u in graph.successors(v) {
                let Some(tail) = &dp.cost[u] else { continue };
                let better = match &best {
                    None => true,
                    Some((c, nxt)) => match tail.cmp(c) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => dp.cmp_chain(graph, Some(u), *nxt) == Ordering::Less,
                    },
                };
                if better {
                    best = Some((tail.clone(), Some(u)));
                }
            }
            if let Some((tail, nxt)) = best {
                dp.cost[v] = Some(tail + weight(v));
                dp.next[v] = nxt;
            }
        }
        dp
    }

    /// Lexicographic comparison of the id sequences starting at `a` and `b`
    /// (`None` is the sink, which sorts before any continuation).
    fn cmp_chain(&self, graph: &ChoreographyGraph, mut a: Option<usize>, mut b: Option<usize>) -> Ordering {
        loop {
            match (a, b) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => {
                    if x == y {
                        return Ordering::Equal;
                    }
                    match graph.vertex(x).id.cmp(&graph.vertex(y).id) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                    a = self.next[x];
                    b = self.next[y];
                }
            }
        }
    }

    fn chain(&self, graph: &ChoreographyGraph, start: usize) -> Vec<String> {
        let mut out = vec![graph.vertex(start).id.clone()];
        let mut cur = self.next[start];
        while let Some(v) = cur {
            out.push(graph.vertex(v).id.clone());
            cur = self.next[v];
        }
        out
    }

    /// Best path starting at one of `starts`.
    fn best_from(&self, graph: &ChoreographyGraph, starts: impl Iterator<Item = usize>) -> PathResult {
        let mut best: Option<usize> = None;
        for s in starts {
            let Some(c) = &self.cost[s] else { continue };
            let better = match best {
                None => true,
                Some(b) => {
                    let bc = self.cost[b].as_ref().expect("best has a cost");
                    match c.cmp(bc) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => self.cmp_chain(graph, Some(s), Some(b)) == Ordering::Less,
                    }
                }
            };
            if better {
                best = Some(s);
            }
        }
        match best {
            Some(s) => PathResult {
                cost: Cost::Finite(self.cost[s].clone().expect("best has a cost")),
                path: Some(self.chain(graph, s)),
            },
            None => PathResult::none(),
        }
    }
}

/// Cheapest path through services accepted by `allowed`, with per-service
/// weights given by `weight`.
pub fn cheapest_path<A, W>(graph: &ChoreographyGraph, allowed: A, weight: W) -> PathResult
where
    A: Fn(usize) -> bool,
    W: Fn(usize) -> Rational,
{
    let dp = Suffixes::compute(graph, &allowed, weight);
    dp.best_from(graph, graph.entries().iter().copied())
}

/// Cheapest path through allowed services that contains at least two services.
pub fn cheapest_multi_service_path<A>(graph: &ChoreographyGraph, allowed: A) -> PathResult
where
    A: Fn(usize) -> bool,
{
    let dp = Suffixes::compute(graph, &allowed, |v| graph.cost(v).clone());
    let mut best: Option<(Rational, usize, usize)> = None;
    for &s in graph.entries() {
        if !allowed(s) {
            continue;
        }
        for u in graph.successors(s) {
            let Some(tail) = &dp.cost[u] else { continue };
            let total = tail + graph.cost(s);
            let better = match &best {
                None => true,
                Some((c, bs, bu)) => match total.cmp(c) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => match graph.vertex(s).id.cmp(&graph.vertex(*bs).id) {
                        Ordering::Equal => dp.cmp_chain(graph, Some(u), Some(*bu)) == Ordering::Less,
                        other => other == Ordering::Less,
                    },
                },
            };
            if better {
                best = Some((total, s, u));
            }
        }
    }
    match best {
        Some((cost, s, u)) => {
            let mut path = vec![graph.vertex(s).id.clone()];
            path.extend(dp.chain(graph, u));
            PathResult { cost: Cost::Finite(cost), path: Some(path) }
        }
        None => PathResult::none(),
    }
}

impl ChoreographyGraph {
    pub fn shortest_path(&self) -> PathResult {
        cheapest_path(self, |_| true, |v| self.cost(v).clone())
    }

    /// Cheapest path using only services owned by coalition members.
    pub fn restricted_path(&self, coalition: &Coalition) -> PathResult {
        cheapest_path(self, |v| coalition.owns(self, v), |v| self.cost(v).clone())
    }

    /// Cheapest path touching no service owned by a coalition member.
    pub fn avoiding_path(&self, excluded: &Coalition) -> PathResult {
        cheapest_path(self, |v| !excluded.owns(self, v), |v| self.cost(v).clone())
    }

    /// Cheapest path that skips service `v`.
    pub fn vertex_avoiding_path(&self, v: usize) -> PathResult {
        cheapest_path(self, |u| u != v, |u| self.cost(u).clone())
    }

    /// Cheapest path cost passing through at least one service of `player`.
    pub fn player_path_cost(&self, player: usize) -> Cost {
        let (prefix, suffix) = self.through_costs();
        self.vertices_of(player)
            .filter_map(|w| match (&prefix[w], &suffix[w]) {
                (Some(p), Some(s)) => Some(p + s - self.cost(w)),
                _ => None,
            })
            .min()
            .map_or(Cost::Infinite, Cost::Finite)
    }

    /// For every service: cheapest cost from the source up to and including
    /// it, and from it (inclusive) down to the sink.
    pub(crate) fn through_costs(&self) -> (Vec<Option<Rational>>, Vec<Option<Rational>>) {
        let n = self.vertex_count();
        let suffix = Suffixes::compute(self, |_| true, |v| self.cost(v).clone()).cost;
        let mut prefix: Vec<Option<Rational>> = vec![None; n];
        for &v in self.topological_order() {
            let from_preds = self.predecessors(v).filter_map(|u| prefix[u].clone()).min();
            let head = if self.is_entry(v) { Some(Rational::zero()) } else { from_preds };
            prefix[v] = head.map(|h| h + self.cost(v));
        }
        (prefix, suffix)
    }
}

pub fn shortest_path(instance: &GameInstance) -> PathResult {
    instance.graph().shortest_path()
}

pub fn restricted_shortest_path(instance: &GameInstance, coalition: &Coalition) -> PathResult {
    instance.graph().restricted_path(coalition)
}

pub fn avoiding_shortest_path(instance: &GameInstance, excluded: &Coalition) -> PathResult {
    instance.graph().avoiding_path(excluded)
}

pub fn player_path_cost(instance: &GameInstance, player: &PlayerId) -> Result<Cost> {
    let index = instance.graph().player_index(player)?;
    Ok(instance.graph().player_path_cost(index))
}
