//! Seeded random layered service graphs.
//!
//! Services are spread over `layers` layers and edges only join consecutive
//! layers. Every service gets at least one predecessor (unless it sits in
//! the first layer) and one successor (unless it sits in the last), so each
//! source-to-sink path crosses every layer exactly once.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GameError, Result};
use crate::model::{ChoreographyGraph, GameInstance, ServiceVertex};
use crate::rational::Rational;
use crate::values::MAX_ENUMERATION_CAP;

/// Largest service count the generator accepts.
pub const MAX_GENERATED_SERVICES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub services: usize,
    pub layers: usize,
    pub min_cost: u32,
    pub max_cost: u32,
    /// Players per service, in `(0, 1]`; the player count is
    /// `ceil(services * ratio)`.
    pub players_per_service: f64,
    /// Probability of each optional edge between consecutive layers.
    pub edge_density: f64,
    /// Budget; defaults to the total cost of all services.
    pub budget: Option<Rational>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            seed: 0,
            services: 6,
            layers: 3,
            min_cost: 1,
            max_cost: 10,
            players_per_service: 0.5,
            edge_density: 0.3,
            budget: None,
        }
    }
}

impl GeneratorParams {
    pub fn player_count(&self) -> usize {
        ((self.services as f64 * self.players_per_service).ceil() as usize).max(1)
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(GameError::InvalidParameters(msg));
        if self.services == 0 || self.services > MAX_GENERATED_SERVICES {
            return fail(format!("services must be in 1..={MAX_GENERATED_SERVICES}, got {}", self.services));
        }
        if self.layers == 0 || self.layers > self.services {
            return fail(format!("layers must be in 1..={}, got {}", self.services, self.layers));
        }
        if self.min_cost > self.max_cost {
            return fail(format!("min_cost {} exceeds max_cost {}", self.min_cost, self.max_cost));
        }
        if !(self.players_per_service > 0.0 && self.players_per_service <= 1.0) {
            return fail(format!("players_per_service must be in (0, 1], got {}", self.players_per_service));
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return fail(format!("edge_density must be in [0, 1], got {}", self.edge_density));
        }
        if self.player_count() > MAX_ENUMERATION_CAP {
            return fail(format!("{} players exceeds the cap of {MAX_ENUMERATION_CAP}", self.player_count()));
        }
        if self.budget.as_ref().is_some_and(|b| b < &Rational::from_integer(0.into())) {
            return fail("budget must be non-negative".into());
        }
        Ok(())
    }
}

pub fn generate(params: &GeneratorParams) -> Result<GameInstance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.services;

    // Layer sizes: one service each, the rest scattered at random.
    let mut sizes = vec![1usize; params.layers];
    for _ in params.layers..n {
        sizes[rng.gen_range(0..params.layers)] += 1;
    }
    let mut layers: Vec<Vec<usize>> = Vec::with_capacity(params.layers);
    let mut next = 0;
    for size in sizes {
        layers.push((next..next + size).collect());
        next += size;
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for pair in layers.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        for &b in to {
            edges.push((from[rng.gen_range(0..from.len())], b));
        }
        for &a in from {
            if !edges.iter().any(|&(x, _)| x == a) {
                edges.push((a, to[rng.gen_range(0..to.len())]));
            }
        }
        for &a in from {
            for &b in to {
                if !edges.contains(&(a, b)) && rng.gen_bool(params.edge_density) {
                    edges.push((a, b));
                }
            }
        }
    }

    let players = params.player_count();
    let mut owners: Vec<usize> = (0..players).chain((players..n).map(|_| rng.gen_range(0..players))).collect();
    owners.shuffle(&mut rng);

    let vertices: Vec<ServiceVertex> = (0..n)
        .map(|v| {
            let cost = rng.gen_range(params.min_cost..=params.max_cost);
            ServiceVertex::new(format!("s{v}"), Rational::from_integer(cost.into()), format!("p{}", owners[v]))
        })
        .collect();
    let edges = edges.into_iter().map(|(a, b)| (format!("s{a}"), format!("s{b}"))).collect();
    let graph = ChoreographyGraph::new(vertices, edges)?;
    let budget = params.budget.clone().unwrap_or_else(|| graph.vertices().map(|v| &v.cost).sum());
    GameInstance::new(graph, budget)
}
