//! The characteristic function of the pricing game.
//!
//! A coalition earns `min(p, c_out) - c_in`, where `c_in` is the cheapest
//! path of at least two services it can offer on its own and `c_out` the
//! cheapest path avoiding all of its services, provided it is not undercut
//! (`c_out >= c_in`) and stays within budget. Otherwise it earns nothing.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GameError, Result};
use crate::model::{Coalition, GameInstance};
use crate::paths::cheapest_multi_service_path;
use crate::rational::{Cost, Rational};

/// Default cap on players for full coalition enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;
/// Default cap on players for the objection/counter-objection oracle.
pub const DEFAULT_ORACLE_CAP: usize = 8;
/// Hard ceiling on enumeration regardless of configuration.
pub const MAX_ENUMERATION_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ValueReason {
    /// The members cannot form any complete path.
    NoInternalPath,
    /// The only complete paths the members can form have a single service.
    MonopolyPath,
    /// A path outside the coalition is at least as cheap.
    BeatenOutside,
    /// The internal path does not fit the budget.
    OverBudget,
    Wins,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionValue {
    pub value: Rational,
    pub winning_path: Option<Vec<String>>,
    pub reason: ValueReason,
    /// Cheapest internal path with at least two services.
    pub internal_cost: Cost,
    /// Cheapest path avoiding every member.
    pub outside_cost: Cost,
}

impl CoalitionValue {
    fn zero(reason: ValueReason, internal_cost: Cost, outside_cost: Cost) -> Self {
        CoalitionValue { value: Rational::zero(), winning_path: None, reason, internal_cost, outside_cost }
    }
}

pub fn coalition_value(instance: &GameInstance, coalition: &Coalition) -> CoalitionValue {
    let graph = instance.graph();
    let budget = instance.budget();
    if coalition.is_empty() {
        return CoalitionValue::zero(ValueReason::NoInternalPath, Cost::Infinite, graph.shortest_path().cost);
    }
    let internal = cheapest_multi_service_path(graph, |v| coalition.owns(graph, v));
    let outside = graph.avoiding_path(coalition).cost;
    let Cost::Finite(inside_cost) = &internal.cost else {
        let single = graph.entries().iter().any(|&v| graph.is_exit(v) && coalition.owns(graph, v));
        let reason = if single { ValueReason::MonopolyPath } else { ValueReason::NoInternalPath };
        return CoalitionValue::zero(reason, internal.cost, outside);
    };
    if outside < *inside_cost {
        return CoalitionValue::zero(ValueReason::BeatenOutside, internal.cost, outside);
    }
    if inside_cost > budget {
        return CoalitionValue::zero(ValueReason::OverBudget, internal.cost, outside);
    }
    let value = outside.capped(budget) - inside_cost;
    if value.is_zero() {
        let reason = if outside == *inside_cost { ValueReason::BeatenOutside } else { ValueReason::OverBudget };
        return CoalitionValue::zero(reason, internal.cost, outside);
    }
    debug_assert!(value.is_positive());
    CoalitionValue {
        value,
        winning_path: internal.path,
        reason: ValueReason::Wins,
        internal_cost: internal.cost,
        outside_cost: outside,
    }
}

/// `p - Cost_SP` when the cheapest path fits the budget, else 0.
pub fn grand_coalition_value(instance: &GameInstance) -> Rational {
    match instance.graph().shortest_path().cost {
        Cost::Finite(sp) if &sp <= instance.budget() => instance.budget() - sp,
        _ => Rational::zero(),
    }
}

/// The full characteristic function, indexed by coalition bitmask.
#[derive(Clone, Debug)]
pub struct ValueTable {
    players: usize,
    values: Vec<CoalitionValue>,
}

impl ValueTable {
    pub fn players(&self) -> usize {
        self.players
    }

    pub fn get(&self, coalition: &Coalition) -> &CoalitionValue {
        &self.values[coalition.mask() as usize]
    }

    pub fn value(&self, coalition: &Coalition) -> &Rational {
        &self.get(coalition).value
    }

    pub fn value_of_mask(&self, mask: u64) -> &Rational {
        &self.values[mask as usize].value
    }

    pub fn grand_value(&self) -> &Rational {
        self.value_of_mask((1u64 << self.players) - 1)
    }

    /// All coalitions in size-then-lexicographic order, with their values.
    pub fn iter(&self) -> impl Iterator<Item = (Coalition, &CoalitionValue)> + '_ {
        coalitions_in_order(self.players).map(move |c| {
            let v = &self.values[c.mask() as usize];
            (c, v)
        })
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Coalition, &CoalitionValue)> + '_ {
        self.iter().filter(|(_, v)| !v.value.is_zero())
    }
}

pub fn check_cap(players: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_ENUMERATION_CAP);
    if players > cap {
        return Err(GameError::TooManyPlayers { players, cap });
    }
    Ok(())
}

/// Evaluates every coalition. Fails with `TooManyPlayers` above `cap`.
pub fn enumerate_values(instance: &GameInstance, cap: usize) -> Result<ValueTable> {
    let n = instance.player_count();
    check_cap(n, cap)?;
    let values =
        (0..1u64 << n).into_par_iter().map(|mask| coalition_value(instance, &Coalition::from_mask(mask))).collect();
    Ok(ValueTable { players: n, values })
}

/// Every coalition over `players`, by cardinality then lexicographically.
pub fn coalitions_in_order(players: usize) -> impl Iterator<Item = Coalition> {
    use itertools::Itertools;
    (0..=players).flat_map(move |k| (0..players).combinations(k).map(Coalition::new))
}
