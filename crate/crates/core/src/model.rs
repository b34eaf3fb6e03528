//! Service graph, players, coalitions and game instances.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use petgraph::algo::toposort;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::Direction;
use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::rational::{exact_string, Rational};

/// Ids reserved for the synthetic source and sink vertices.
pub const SOURCE_ID: &str = "source";
pub const SINK_ID: &str = "sink";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub String);

impl PlayerId {
    pub fn new(id: impl Into<String>) -> Self {
        PlayerId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PlayerId {
    fn from(s: &str) -> Self {
        PlayerId(s.to_owned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServiceVertex {
    pub id: String,
    pub cost: Rational,
    pub owner: PlayerId,
}

impl ServiceVertex {
    pub fn new(id: impl Into<String>, cost: Rational, owner: impl Into<String>) -> Self {
        ServiceVertex { id: id.into(), cost, owner: PlayerId(owner.into()) }
    }
}

/// A validated service DAG.
///
/// Source and sink are implicit: every service without service predecessors
/// is an entry (reachable from the source) and every service without service
/// successors is an exit (leads to the sink). Both carry cost 0 and never
/// appear in returned paths.
#[derive(Clone, Debug)]
pub struct ChoreographyGraph {
    graph: DiGraph<ServiceVertex, ()>,
    topo: Vec<usize>,
    entries: Vec<usize>,
    exits: Vec<usize>,
    index: HashMap<String, usize>,
    players: Vec<PlayerId>,
    owner_of: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl ChoreographyGraph {
    pub fn new(vertices: Vec<ServiceVertex>, edges: Vec<(String, String)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(GameError::NoPathExists);
        }
        let mut graph = DiGraph::with_capacity(vertices.len(), edges.len());
        let mut index = HashMap::with_capacity(vertices.len());
        let mut players: Vec<PlayerId> = Vec::new();
        let mut player_index: HashMap<PlayerId, usize> = HashMap::new();
        let mut owner_of = Vec::with_capacity(vertices.len());
        for v in vertices {
            if v.id.is_empty() {
                return Err(GameError::MalformedDocument("empty service id".into()));
            }
            if v.id == SOURCE_ID || v.id == SINK_ID {
                return Err(GameError::MalformedDocument(format!("service id {:?} is reserved", v.id)));
            }
            if v.owner.0.is_empty() {
                return Err(GameError::MalformedDocument(format!("service {:?} has an empty owner", v.id)));
            }
            if v.cost.is_negative() {
                return Err(GameError::NegativeCost { id: v.id.clone(), field: "cost", value: exact_string(&v.cost) });
            }
            if index.contains_key(&v.id) {
                return Err(GameError::DuplicateVertexId(v.id));
            }
            let owner = *player_index.entry(v.owner.clone()).or_insert_with(|| {
                players.push(v.owner.clone());
                players.len() - 1
            });
            owner_of.push(owner);
            index.insert(v.id.clone(), graph.node_count());
            graph.add_node(v);
        }

        let mut seen = HashSet::new();
        let mut edge_list = Vec::with_capacity(edges.len());
        for (from, to) in edges {
            let lookup = |id: &str| {
                index.get(id).copied().ok_or_else(|| {
                    GameError::MalformedDocument(format!("edge endpoint {id:?} is not a declared service"))
                })
            };
            let (a, b) = (lookup(&from)?, lookup(&to)?);
            if seen.insert((a, b)) {
                graph.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
                edge_list.push((a, b));
            }
        }

        let topo = match toposort(&graph, None) {
            Ok(order) => order.into_iter().map(NodeIndex::index).collect(),
            Err(cycle) => return Err(GameError::CycleDetected(cycle_members(&graph, cycle.node_id()))),
        };

        let n = graph.node_count();
        let entries = (0..n)
            .filter(|&v| graph.neighbors_directed(NodeIndex::new(v), Direction::Incoming).next().is_none())
            .collect();
        let exits = (0..n)
            .filter(|&v| graph.neighbors_directed(NodeIndex::new(v), Direction::Outgoing).next().is_none())
            .collect();

        Ok(ChoreographyGraph { graph, topo, entries, exits, index, players, owner_of, edges: edge_list })
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn vertex(&self, v: usize) -> &ServiceVertex {
        &self.graph[NodeIndex::new(v)]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &ServiceVertex> {
        self.graph.node_weights()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn cost(&self, v: usize) -> &Rational {
        &self.vertex(v).cost
    }

    pub fn owner_index(&self, v: usize) -> usize {
        self.owner_of[v]
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn player_index(&self, player: &PlayerId) -> Result<usize> {
        self.players.iter().position(|p| p == player).ok_or_else(|| GameError::UnknownPlayer(player.0.clone()))
    }

    pub fn vertices_of(&self, player: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&v| self.owner_of[v] == player)
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors_directed(NodeIndex::new(v), Direction::Outgoing).map(NodeIndex::index)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors_directed(NodeIndex::new(v), Direction::Incoming).map(NodeIndex::index)
    }

    /// Services in topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Services fed directly by the source.
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Services feeding the sink directly.
    pub fn exits(&self) -> &[usize] {
        &self.exits
    }

    pub fn is_entry(&self, v: usize) -> bool {
        self.entries.binary_search(&v).is_ok()
    }

    pub fn is_exit(&self, v: usize) -> bool {
        self.exits.binary_search(&v).is_ok()
    }

    /// Service-level edges in declaration order, duplicates removed.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges.iter().map(|&(a, b)| (self.vertex(a).id.as_str(), self.vertex(b).id.as_str()))
    }

    /// Same topology and costs, with every service owned by a player named
    /// after the service itself.
    pub fn with_vertex_owners(&self) -> ChoreographyGraph {
        let vertices =
            self.vertices().map(|v| ServiceVertex::new(v.id.clone(), v.cost.clone(), v.id.clone())).collect();
        let edges = self.edges().map(|(a, b)| (a.to_owned(), b.to_owned())).collect();
        ChoreographyGraph::new(vertices, edges).expect("re-owning a valid graph keeps it valid")
    }

    /// Same topology and owners with one service's cost replaced.
    pub fn with_cost(&self, v: usize, cost: Rational) -> ChoreographyGraph {
        let mut copy = self.clone();
        copy.graph[NodeIndex::new(v)].cost = cost;
        copy
    }
}

fn cycle_members(graph: &DiGraph<ServiceVertex, ()>, start: NodeIndex) -> Vec<String> {
    // Every vertex that both reaches `start` and is reachable from it.
    let forward = reachable(graph, start, Direction::Outgoing);
    let backward = reachable(graph, start, Direction::Incoming);
    let mut ids: Vec<String> = forward.intersection(&backward).map(|&v| graph[v].id.clone()).collect();
    ids.sort();
    ids
}

fn reachable(graph: &DiGraph<ServiceVertex, ()>, start: NodeIndex, dir: Direction) -> HashSet<NodeIndex> {
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for u in graph.neighbors_directed(v, dir) {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen
}

/// A set of players, kept sorted by player index.
///
/// Coalitions order by cardinality first, then lexicographically on their
/// sorted member indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coalition(Vec<usize>);

impl Coalition {
    pub fn empty() -> Self {
        Coalition(Vec::new())
    }

    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Coalition(v)
    }

    pub fn grand(players: usize) -> Self {
        Coalition((0..players).collect())
    }

    pub fn singleton(player: usize) -> Self {
        Coalition(vec![player])
    }

    pub fn from_mask(mask: u64) -> Self {
        Coalition((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn from_ids(graph: &ChoreographyGraph, ids: &[&str]) -> Result<Self> {
        ids.iter().map(|id| graph.player_index(&PlayerId::from(*id))).collect::<Result<Vec<_>>>().map(Coalition::new)
    }

    pub fn contains(&self, player: usize) -> bool {
        self.0.binary_search(&player).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn with(&self, player: usize) -> Self {
        Coalition::new(self.0.iter().copied().chain([player]))
    }

    pub fn without(&self, player: usize) -> Self {
        Coalition(self.0.iter().copied().filter(|&p| p != player).collect())
    }

    pub fn complement(&self, players: usize) -> Self {
        Coalition((0..players).filter(|&p| !self.contains(p)).collect())
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.0.iter().all(|&p| other.contains(p))
    }

    pub fn ids<'g>(&self, graph: &'g ChoreographyGraph) -> Vec<&'g PlayerId> {
        self.0.iter().map(|&p| &graph.players()[p]).collect()
    }

    /// Whether service `v` belongs to one of the members.
    pub fn owns(&self, graph: &ChoreographyGraph, v: usize) -> bool {
        self.contains(graph.owner_index(v))
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// A service graph, the user's budget and optionally the providers'
/// announced per-service prices. Immutable once built.
#[derive(Clone, Debug)]
pub struct GameInstance {
    graph: Arc<ChoreographyGraph>,
    budget: Rational,
    prices: Option<Vec<Rational>>,
}

impl GameInstance {
    pub fn new(graph: ChoreographyGraph, budget: Rational) -> Result<Self> {
        Self::from_shared(Arc::new(graph), budget, None)
    }

    pub fn with_prices(graph: ChoreographyGraph, budget: Rational, prices: Vec<Rational>) -> Result<Self> {
        Self::from_shared(Arc::new(graph), budget, Some(prices))
    }

    fn from_shared(graph: Arc<ChoreographyGraph>, budget: Rational, prices: Option<Vec<Rational>>) -> Result<Self> {
        if budget.is_negative() {
            return Err(GameError::NegativeCost {
                id: "<budget>".into(),
                field: "budget",
                value: exact_string(&budget),
            });
        }
        if let Some(prices) = &prices {
            if prices.len() != graph.vertex_count() {
                return Err(GameError::MalformedDocument("announced prices must cover every service".into()));
            }
            for (v, price) in prices.iter().enumerate() {
                if price.is_negative() {
                    return Err(GameError::NegativeCost {
                        id: graph.vertex(v).id.clone(),
                        field: "price",
                        value: exact_string(price),
                    });
                }
            }
        }
        Ok(GameInstance { graph, budget, prices })
    }

    pub fn graph(&self) -> &ChoreographyGraph {
        &self.graph
    }

    pub fn budget(&self) -> &Rational {
        &self.budget
    }

    pub fn announced_prices(&self) -> Option<&[Rational]> {
        self.prices.as_deref()
    }

    pub fn players(&self) -> &[PlayerId] {
        self.graph.players()
    }

    pub fn player_count(&self) -> usize {
        self.graph.player_count()
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.player_count())
    }

    /// The same game at a different budget.
    pub fn with_budget(&self, budget: Rational) -> Result<Self> {
        Self::from_shared(Arc::clone(&self.graph), budget, self.prices.clone())
    }

    /// The same game with a replaced set of announced prices.
    pub fn with_announced_prices(&self, prices: Vec<Rational>) -> Result<Self> {
        Self::from_shared(Arc::clone(&self.graph), self.budget.clone(), Some(prices))
    }

    pub fn total_cost(&self) -> Rational {
        self.graph.vertices().fold(Rational::zero(), |acc, v| acc + &v.cost)
    }
}

impl PartialEq for GameInstance {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&*self.graph, &*other.graph);
        a.vertices().eq(b.vertices())
            && a.edges().collect::<HashSet<_>>() == b.edges().collect::<HashSet<_>>()
            && self.budget == other.budget
            && self.prices == other.prices
    }
}
