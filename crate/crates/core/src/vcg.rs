//! VCG payments for lowest-cost routing with one agent per service.

use num_traits::Zero;

use crate::bargaining::graph_threshold;
use crate::error::{GameError, Result};
use crate::model::ChoreographyGraph;
use crate::paths::cheapest_path;
use crate::rational::{Cost, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcgReport {
    pub chosen_path: Vec<String>,
    /// One entry per service, in document order; zero off the chosen path.
    pub payments: Vec<(String, Rational)>,
    pub total_payment: Rational,
}

impl VcgReport {
    pub fn payment(&self, id: &str) -> Option<&Rational> {
        self.payments.iter().find(|(v, _)| v == id).map(|(_, p)| p)
    }
}

/// Pays each service `v` on the cheapest path
/// `d(G | c_v = inf) - d(G | c_v = 0)`.
pub fn vcg_payments(graph: &ChoreographyGraph) -> Result<VcgReport> {
    let chosen = graph.shortest_path();
    let chosen_path = chosen.path.expect("a valid graph has a path");
    let mut payments: Vec<(String, Rational)> = graph.vertices().map(|s| (s.id.clone(), Rational::zero())).collect();
    for id in &chosen_path {
        let v = graph.vertex_index(id).expect("path ids are graph ids");
        let Cost::Finite(without) = graph.vertex_avoiding_path(v).cost else {
            return Err(GameError::UnavoidableVertex(id.clone()));
        };
        let free = cheapest_path(graph, |_| true, |u| if u == v { Rational::zero() } else { graph.cost(u).clone() });
        let with_free = free.cost.finite().cloned().expect("the chosen path still exists");
        payments[v].1 = without - with_free;
    }
    let total_payment = payments.iter().map(|(_, p)| p).sum();
    Ok(VcgReport { chosen_path, payments, total_payment })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub vcg_total: Rational,
    pub minimal_stable_price: Rational,
    pub equal: bool,
}

/// Compares the VCG total with the stability threshold of the game in which
/// every service is its own player.
pub fn check_equivalence(graph: &ChoreographyGraph) -> Result<EquivalenceReport> {
    let vcg = vcg_payments(graph)?;
    let per_vertex = graph.with_vertex_owners();
    let minimal_stable_price = graph_threshold(&per_vertex)
        .threshold
        .finite()
        .cloned()
        .expect("threshold is finite once every path vertex is avoidable");
    let equal = vcg.total_payment == minimal_stable_price;
    Ok(EquivalenceReport { vcg_total: vcg.total_payment, minimal_stable_price, equal })
}
