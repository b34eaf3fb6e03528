//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracles deliberately avoid the library's dynamic programs: paths are
//! enumerated by depth-first search and linear systems are solved by
//! Gaussian elimination.
#![allow(dead_code, clippy::needless_range_loop)]

use enactment_game::rational::{int, Cost, Rational};
use enactment_game::{
    generate, ChoreographyGraph, Coalition, GameInstance, GeneratorParams, Imputation, ServiceVertex,
};
use num_traits::{One, Signed, Zero};

pub const FIG2_SERVICES: [(&str, i64, &str); 5] = [
    ("alpha", 2, "Lambda"),
    ("lambda", 5, "Lambda"),
    ("delta", 8, "delta"),
    ("gamma", 4, "gamma"),
    ("beta", 15, "beta"),
];
pub const FIG2_EDGES: [(&str, &str); 4] =
    [("alpha", "gamma"), ("lambda", "beta"), ("delta", "gamma"), ("delta", "beta")];

pub fn graph(vs: &[(&str, i64, &str)], es: &[(&str, &str)]) -> ChoreographyGraph {
    ChoreographyGraph::new(
        vs.iter().map(|&(id, c, o)| ServiceVertex::new(id, int(c), o)).collect(),
        es.iter().map(|&(a, b)| (a.to_owned(), b.to_owned())).collect(),
    )
    .unwrap()
}

pub fn fig2_graph() -> ChoreographyGraph {
    graph(&FIG2_SERVICES, &FIG2_EDGES)
}

pub fn fig2() -> GameInstance {
    GameInstance::new(fig2_graph(), int(34)).unwrap()
}

pub fn fig2_at(budget: Rational) -> GameInstance {
    GameInstance::new(fig2_graph(), budget).unwrap()
}

pub fn coalition(instance: &GameInstance, ids: &[&str]) -> Coalition {
    Coalition::from_ids(instance.graph(), ids).unwrap()
}

pub fn player(instance: &GameInstance, id: &str) -> usize {
    instance.graph().player_index(&id.into()).unwrap()
}

/// Payoffs keyed by player id.
pub fn payoff(instance: &GameInstance, pairs: &[(&str, Rational)]) -> Imputation {
    Imputation::from_ids(instance.graph(), pairs.iter().map(|(id, v)| (*id, v.clone()))).unwrap()
}

/// Every source-to-sink path, as vertex index lists.
pub fn all_paths(g: &ChoreographyGraph) -> Vec<Vec<usize>> {
    fn walk(g: &ChoreographyGraph, v: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        prefix.push(v);
        if g.successors(v).next().is_none() {
            out.push(prefix.clone());
        }
        for u in g.successors(v) {
            walk(g, u, prefix, out);
        }
        prefix.pop();
    }
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        if g.predecessors(v).next().is_none() {
            walk(g, v, &mut Vec::new(), &mut out);
        }
    }
    out
}

pub fn path_cost(g: &ChoreographyGraph, path: &[usize]) -> Rational {
    path.iter().map(|&v| g.cost(v)).sum()
}

pub fn min_cost<'a>(g: &ChoreographyGraph, paths: impl Iterator<Item = &'a Vec<usize>>) -> Cost {
    paths.map(|p| path_cost(g, p)).min().map_or(Cost::Infinite, Cost::Finite)
}

fn owned_by(g: &ChoreographyGraph, c: &Coalition, v: usize) -> bool {
    c.contains(g.owner_index(v))
}

pub fn oracle_shortest(g: &ChoreographyGraph) -> Cost {
    min_cost(g, all_paths(g).iter())
}

pub fn oracle_restricted(g: &ChoreographyGraph, c: &Coalition) -> Cost {
    min_cost(g, all_paths(g).iter().filter(|p| p.iter().all(|&v| owned_by(g, c, v))))
}

pub fn oracle_avoiding(g: &ChoreographyGraph, c: &Coalition) -> Cost {
    min_cost(g, all_paths(g).iter().filter(|p| p.iter().all(|&v| !owned_by(g, c, v))))
}

pub fn oracle_through(g: &ChoreographyGraph, player: usize) -> Cost {
    min_cost(g, all_paths(g).iter().filter(|p| p.iter().any(|&v| g.owner_index(v) == player)))
}

/// Coalition value straight from the definition, over enumerated paths.
pub fn oracle_value(instance: &GameInstance, c: &Coalition) -> Rational {
    let g = instance.graph();
    let p = instance.budget();
    let paths = all_paths(g);
    let inside = min_cost(g, paths.iter().filter(|q| q.len() >= 2 && q.iter().all(|&v| owned_by(g, c, v))));
    let outside = min_cost(g, paths.iter().filter(|q| q.iter().all(|&v| !owned_by(g, c, v))));
    match inside {
        Cost::Finite(inside) if !c.is_empty() && outside >= inside && &inside <= p => {
            let capped = match outside {
                Cost::Finite(o) if &o < p => o,
                _ => p.clone(),
            };
            capped - inside
        }
        _ => Rational::zero(),
    }
}

/// Solves a square system exactly; `None` when singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for k in col..n {
                    let t = &f * &a[col][k];
                    a[r][k] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Vertices of `{x >= 0, sum x = v(S), x(X) >= v(X)}` by enumerating
/// every n-subset of constraints taken as equalities.
pub fn core_vertices(values: &dyn Fn(u64) -> Rational, n: usize) -> Vec<Vec<Rational>> {
    use itertools::Itertools;
    let grand = (1u64 << n) - 1;
    // Rows read `a . x >= b`; `feasible` also demands equality on the grand coalition.
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for mask in 1..=grand {
        rows.push((
            (0..n).map(|i| if mask >> i & 1 == 1 { Rational::one() } else { Rational::zero() }).collect(),
            values(mask),
        ));
    }
    for i in 0..n {
        rows.push((
            (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect(),
            Rational::zero(),
        ));
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|v| !v.is_negative())
            && x.iter().sum::<Rational>() == values(grand)
            && (1..=grand).all(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| &x[i]).sum::<Rational>() >= values(m))
    };
    let mut out = Vec::new();
    for subset in (0..rows.len()).combinations(n) {
        let a = subset.iter().map(|&r| rows[r].0.clone()).collect();
        let b = subset.iter().map(|&r| rows[r].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// A small random game from the library generator, with a budget drawn
/// between the cheapest path and the total cost.
pub fn random_game(seed: u64, services: usize, layers: usize, ratio: f64, max_cost: u32) -> GameInstance {
    use rand::{Rng, SeedableRng};
    let params = GeneratorParams {
        seed,
        services,
        layers,
        min_cost: 0,
        max_cost,
        players_per_service: ratio,
        edge_density: 0.35,
        budget: None,
    };
    let inst = generate(&params).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let sp = inst.graph().shortest_path().cost.finite().cloned().unwrap();
    let total = inst.total_cost();
    let span = (&total - &sp).to_integer().try_into().unwrap_or(0i64);
    let budget = &sp + int(rng.gen_range(0..=span.max(0)));
    inst.with_budget(budget).unwrap()
}
