//! Stable revenue sharing for the grand coalition.
//!
//! Players whose cheapest through-path fits the budget form the active set
//! `A`. The closed-form candidate gives each paid player (active, with a
//! through-path strictly below the budget) `v(S)/|A| + c_j - sum(c_k)/|A|`
//! over the paid set, where `c_j = min(p, Cost^{-j})` is the capped cost of
//! the cheapest path avoiding `j`; everyone else gets 0.
//! The candidate is checked against an exact objection/counter-objection
//! oracle rather than trusted.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::core_set::Imputation;
use crate::error::{GameError, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::model::{ChoreographyGraph, Coalition, GameInstance, PlayerId};
use crate::rational::{Cost, Rational};
use crate::values::{coalitions_in_order, grand_coalition_value, ValueTable};

/// Per-player path costs shared by every analysis in this module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerCosts {
    /// Cost of the overall cheapest path.
    pub shortest: Rational,
    /// Cheapest path through at least one of the player's services.
    pub through: Vec<Cost>,
    /// Cheapest path avoiding all of the player's services.
    pub avoiding: Vec<Cost>,
}

impl PlayerCosts {
    pub fn compute(graph: &ChoreographyGraph) -> Self {
        let shortest = graph.shortest_path().cost.finite().cloned().expect("a valid graph has a path");
        let n = graph.player_count();
        let through = (0..n).map(|j| graph.player_path_cost(j)).collect();
        let avoiding = (0..n).map(|j| graph.avoiding_path(&Coalition::singleton(j)).cost).collect();
        PlayerCosts { shortest, through, avoiding }
    }

    pub fn active(&self, budget: &Rational) -> Coalition {
        Coalition::new((0..self.through.len()).filter(|&j| self.through[j] <= *budget))
    }

    /// Players on some cheapest path whose removal makes the cheapest path
    /// strictly more expensive.
    pub fn critical(&self) -> Coalition {
        Coalition::new(
            (0..self.through.len()).filter(|&j| self.through[j] == self.shortest && self.avoiding[j] > self.shortest),
        )
    }
}

pub fn active_set(instance: &GameInstance) -> Coalition {
    PlayerCosts::compute(instance.graph()).active(instance.budget())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableSolution {
    /// Players whose cheapest through-path fits the budget (`Cost^j <= p`).
    pub active_set: Coalition,
    /// Active players whose through-path is strictly cheaper than the
    /// budget. Only they share the surplus; a player whose best path costs
    /// exactly `p` can never earn a margin and gets 0.
    pub paid_set: Coalition,
    pub imputation: Imputation,
    /// Whether every payoff of the closed form is non-negative.
    pub exists: bool,
    pub grand_value: Rational,
    /// `min(p, Cost^{-j})` for every player.
    pub capped_avoiding: Vec<Rational>,
    /// Sum of the capped avoiding costs over the paid set.
    pub capped_sum: Rational,
    pub threshold: Cost,
    /// Critical players whose capped avoiding cost exceeds the cheapest path.
    pub critical_set: Coalition,
}

pub fn stable_imputation(instance: &GameInstance) -> Result<StableSolution> {
    let costs = PlayerCosts::compute(instance.graph());
    let budget = instance.budget();
    let active = costs.active(budget);
    if active.is_empty() {
        return Err(GameError::NoAffordablePath);
    }
    let split = closed_form(&costs, budget);
    let threshold = threshold_from_costs(&costs);
    let exists = split.payoffs.iter().all(|v| !v.is_negative());
    let critical_set = Coalition::new(threshold.critical_set.iter().filter(|&j| split.capped[j] > costs.shortest));
    debug_assert_eq!(&split.grand_value, &grand_coalition_value(instance));
    Ok(StableSolution {
        active_set: active,
        paid_set: split.paid,
        imputation: Imputation::new(split.payoffs),
        exists,
        grand_value: split.grand_value,
        capped_avoiding: split.capped,
        capped_sum: split.capped_sum,
        threshold: threshold.threshold,
        critical_set,
    })
}

struct Split {
    paid: Coalition,
    payoffs: Vec<Rational>,
    capped: Vec<Rational>,
    capped_sum: Rational,
    grand_value: Rational,
}

/// The closed-form payoffs at budget `p >= Cost_SP`.
fn closed_form(costs: &PlayerCosts, p: &Rational) -> Split {
    let n = costs.through.len();
    let paid = Coalition::new((0..n).filter(|&j| costs.through[j] < *p));
    let capped: Vec<Rational> = costs.avoiding.iter().map(|c| c.capped(p)).collect();
    let capped_sum: Rational = paid.iter().map(|j| &capped[j]).sum();
    let grand_value = if p >= &costs.shortest { p - &costs.shortest } else { Rational::zero() };
    let mut payoffs = vec![Rational::zero(); n];
    if !paid.is_empty() {
        let base = (&grand_value - &capped_sum) / Rational::from_integer(paid.len().into());
        for j in paid.iter() {
            payoffs[j] = &base + &capped[j];
        }
    }
    Split { paid, payoffs, capped, capped_sum, grand_value }
}

/// A set of budgets between `low` and `high`, each end open or closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceInterval {
    pub low: Rational,
    pub low_inclusive: bool,
    pub high: Cost,
    pub high_inclusive: bool,
}

impl PriceInterval {
    pub fn point(p: Rational) -> Self {
        PriceInterval { low: p.clone(), low_inclusive: true, high: Cost::Finite(p), high_inclusive: true }
    }

    pub fn contains(&self, p: &Rational) -> bool {
        let above = p > &self.low || (self.low_inclusive && p == &self.low);
        let below = match &self.high {
            Cost::Infinite => true,
            Cost::Finite(h) => p < h || (self.high_inclusive && p == h),
        };
        above && below
    }

    fn is_empty(&self) -> bool {
        match &self.high {
            Cost::Infinite => false,
            Cost::Finite(h) => self.low > *h || (self.low == *h && !(self.low_inclusive && self.high_inclusive)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityThreshold {
    /// Minimal budget for a stable imputation: `formula` when every critical
    /// player is avoidable, otherwise `stable_from`.
    pub threshold: Cost,
    /// `sum_{k in B} Cost^{-k} - (|B| - 1) Cost_SP`, infinite when some
    /// critical player is unavoidable.
    pub formula: Cost,
    /// Smallest budget from which the closed-form imputation exists at every
    /// larger budget.
    pub stable_from: Cost,
    pub critical_set: Coalition,
    pub shortest_cost: Rational,
    /// Exact set of budgets at which the closed-form imputation exists.
    pub stable_prices: Vec<PriceInterval>,
}

pub fn stability_threshold(instance: &GameInstance) -> StabilityThreshold {
    graph_threshold(instance.graph())
}

/// The threshold depends on the graph alone, not on the current budget.
pub fn graph_threshold(graph: &ChoreographyGraph) -> StabilityThreshold {
    threshold_from_costs(&PlayerCosts::compute(graph))
}

fn threshold_from_costs(costs: &PlayerCosts) -> StabilityThreshold {
    let sp = &costs.shortest;
    let critical = costs.critical();
    let formula = critical
        .iter()
        .try_fold(Rational::zero(), |acc, k| costs.avoiding[k].finite().map(|c| acc + c))
        .map_or(Cost::Infinite, |sum| {
            let extra = Rational::from_integer(critical.len().into()) - Rational::one();
            Cost::Finite(sum - extra * sp)
        });
    let stable_prices = stable_price_set(costs);
    let stable_from = match stable_prices.last() {
        Some(last) if last.high == Cost::Infinite => Cost::Finite(last.low.clone()),
        _ => Cost::Infinite,
    };
    let threshold = if formula.is_finite() { formula.clone() } else { stable_from.clone() };
    StabilityThreshold {
        threshold,
        formula,
        stable_from,
        critical_set: critical,
        shortest_cost: sp.clone(),
        stable_prices,
    }
}

/// Budgets `p >= Cost_SP` at which every closed-form payoff is
/// non-negative.
///
/// Breakpoints are the through and avoiding costs. Each breakpoint is
/// evaluated directly; strictly between two of them the paid set is fixed
/// and every capped avoiding cost is either a constant or `p` itself, so
/// each payoff is affine in `p` and the feasible budgets form an interval.
fn stable_price_set(costs: &PlayerCosts) -> Vec<PriceInterval> {
    let sp = &costs.shortest;
    let mut points: Vec<Rational> = costs
        .through
        .iter()
        .chain(&costs.avoiding)
        .filter_map(|c| c.finite().cloned())
        .filter(|c| c >= sp)
        .chain([sp.clone()])
        .collect();
    points.sort();
    points.dedup();

    let mut pieces: Vec<PriceInterval> = Vec::new();
    for (k, start) in points.iter().enumerate() {
        if closed_form(costs, start).payoffs.iter().all(|x| !x.is_negative()) {
            push_merged(&mut pieces, PriceInterval::point(start.clone()));
        }
        if let Some(open) = open_piece(costs, start, points.get(k + 1)) {
            push_merged(&mut pieces, open);
        }
    }
    pieces
}

/// Feasible budgets in the open interval `(start, end)`.
fn open_piece(costs: &PlayerCosts, start: &Rational, end: Option<&Rational>) -> Option<PriceInterval> {
    let sp = &costs.shortest;
    let paid: Vec<usize> = (0..costs.through.len()).filter(|&j| costs.through[j] <= *start).collect();
    let size = Rational::from_integer(paid.len().into());
    // Some(constant) capped cost, or None when it equals p on this piece.
    let fixed: Vec<Option<Rational>> =
        paid.iter().map(|&j| costs.avoiding[j].finite().filter(|c| *c <= start).cloned()).collect();
    let floating = Rational::from_integer(fixed.iter().filter(|c| c.is_none()).count().into());
    let fixed_sum: Rational = fixed.iter().flatten().sum();

    let mut low: Option<Rational> = None;
    let mut high: Option<Rational> = None;
    for c in &fixed {
        // x_j(p) = slope * p + intercept
        let own = if c.is_some() { Rational::zero() } else { Rational::one() };
        let slope = (Rational::one() - &floating) / &size + own;
        let intercept = -(sp + &fixed_sum) / &size + c.clone().unwrap_or_else(Rational::zero);
        if slope.is_zero() {
            if intercept.is_negative() {
                return None;
            }
            continue;
        }
        let root = -&intercept / &slope;
        if slope.is_positive() {
            low = Some(low.map_or(root.clone(), |l| l.max(root)));
        } else {
            high = Some(high.map_or(root.clone(), |h| h.min(root)));
        }
    }
    let (low, low_inclusive) = match low {
        Some(l) if l > *start => (l, true),
        _ => (start.clone(), false),
    };
    let (high, high_inclusive) = match (high, end) {
        (Some(h), Some(e)) if h < *e => (Cost::Finite(h), true),
        (Some(h), None) => (Cost::Finite(h), true),
        (_, Some(e)) => (Cost::Finite(e.clone()), false),
        (None, None) => (Cost::Infinite, false),
    };
    let piece = PriceInterval { low, low_inclusive, high, high_inclusive };
    (!piece.is_empty()).then_some(piece)
}

fn push_merged(pieces: &mut Vec<PriceInterval>, next: PriceInterval) {
    if let Some(prev) = pieces.last_mut() {
        if prev.high == Cost::Finite(next.low.clone()) && (prev.high_inclusive || next.low_inclusive) {
            prev.high = next.high;
            prev.high_inclusive = next.high_inclusive;
            return;
        }
    }
    pieces.push(next);
}

/// A threat by `proposer` against `target`: the coalition can pay each
/// member at least its current payoff and the proposer strictly more.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectionRecord {
    pub proposer: usize,
    pub target: usize,
    pub coalition: Coalition,
    /// Promised payoffs, aligned with `coalition.members()`.
    pub payoffs: Vec<Rational>,
}

impl ObjectionRecord {
    pub fn payoff_of(&self, player: usize) -> Option<&Rational> {
        self.coalition.members().iter().position(|&p| p == player).map(|i| &self.payoffs[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterObjection {
    pub coalition: Coalition,
    /// Payoffs aligned with `coalition.members()`.
    pub payoffs: Vec<Rational>,
}

fn check_pair(table: &ValueTable, x: &Imputation, i: usize, j: usize) -> Result<()> {
    let n = table.players();
    if x.players() != n {
        return Err(GameError::InvalidParameters(format!("payoff vector has {} entries for {n} players", x.players())));
    }
    if i >= n || j >= n || i == j {
        return Err(GameError::InvalidParameters(format!("objection needs two distinct players, got {i} and {j}")));
    }
    Ok(())
}

fn surplus(table: &ValueTable, x: &Imputation, c: &Coalition) -> Rational {
    table.value(c) - x.sum_over(c)
}

/// First coalition (by size, then lexicographically) containing `i` but
/// not `j` whose value exceeds what `x` pays it. The whole surplus goes to
/// `i`.
pub fn find_objection(table: &ValueTable, x: &Imputation, i: usize, j: usize) -> Result<Option<ObjectionRecord>> {
    check_pair(table, x, i, j)?;
    Ok(coalitions_in_order(table.players()).filter(|o| o.contains(i) && !o.contains(j)).find_map(|o| {
        let s = surplus(table, x, &o);
        s.is_positive().then(|| {
            let payoffs = o.iter().map(|k| if k == i { x.get(k) + &s } else { x.get(k).clone() }).collect();
            ObjectionRecord { proposer: i, target: j, coalition: o, payoffs }
        })
    }))
}

/// A coalition containing the target but not the proposer that can match
/// the objection's promises to shared members and `x` to everyone else.
pub fn find_counter_objection(
    table: &ValueTable,
    x: &Imputation,
    objection: &ObjectionRecord,
) -> Option<CounterObjection> {
    let (i, j) = (objection.proposer, objection.target);
    coalitions_in_order(table.players()).filter(|q| q.contains(j) && !q.contains(i)).find_map(|q| {
        let floors: Vec<Rational> =
            q.iter().map(|k| objection.payoff_of(k).unwrap_or_else(|| x.get(k)).clone()).collect();
        let needed: Rational = floors.iter().sum();
        let value = table.value(&q);
        (value >= &needed).then(|| {
            let slack = value - needed;
            let payoffs = q.iter().zip(floors).map(|(k, f)| if k == j { f + &slack } else { f }).collect();
            CounterObjection { coalition: q, payoffs }
        })
    })
}

pub fn has_counter_objection(table: &ValueTable, x: &Imputation, objection: &ObjectionRecord) -> bool {
    find_counter_objection(table, x, objection).is_some()
}

/// An objection of `i` against `j` that no counter-objection can answer.
///
/// For each candidate coalition the proposer's best split of the surplus is
/// found by an exact LP: maximize `t` with `e_i >= t`, total extra payment
/// within the surplus, and every potential counter coalition `Q` left short
/// by at least `t`. A positive optimum is a justified objection.
pub fn find_justified_objection(
    table: &ValueTable,
    x: &Imputation,
    i: usize,
    j: usize,
) -> Result<Option<ObjectionRecord>> {
    check_pair(table, x, i, j)?;
    let counters = counter_candidates(table, x, i, j);
    Ok(coalitions_in_order(table.players())
        .filter(|o| o.contains(i) && !o.contains(j))
        .find_map(|o| justified_split(table, x, i, j, o, &counters)))
}

/// A justified objection of `i` against `j` through the given coalition.
pub fn justified_objection_via(
    table: &ValueTable,
    x: &Imputation,
    i: usize,
    j: usize,
    coalition: &Coalition,
) -> Result<Option<ObjectionRecord>> {
    check_pair(table, x, i, j)?;
    if !coalition.contains(i) || coalition.contains(j) {
        return Err(GameError::InvalidParameters("objection coalition must contain i and exclude j".into()));
    }
    let counters = counter_candidates(table, x, i, j);
    Ok(justified_split(table, x, i, j, coalition.clone(), &counters))
}

/// Coalitions containing `j` but not `i` that could absorb some promise:
/// those with `v(Q) >= x(Q)`, paired with that surplus.
fn counter_candidates(table: &ValueTable, x: &Imputation, i: usize, j: usize) -> Vec<(Coalition, Rational)> {
    coalitions_in_order(table.players())
        .filter(|q| q.contains(j) && !q.contains(i))
        .map(|q| {
            let s = surplus(table, x, &q);
            (q, s)
        })
        .filter(|(_, s)| !s.is_negative())
        .collect()
}

fn justified_split(
    table: &ValueTable,
    x: &Imputation,
    i: usize,
    j: usize,
    o: Coalition,
    counters: &[(Coalition, Rational)],
) -> Option<ObjectionRecord> {
    let s = surplus(table, x, &o);
    if !s.is_positive() {
        return None;
    }
    best_split(x, i, &o, &s, counters).map(|payoffs| ObjectionRecord { proposer: i, target: j, coalition: o, payoffs })
}

fn best_split(
    x: &Imputation,
    i: usize,
    o: &Coalition,
    s: &Rational,
    counters: &[(Coalition, Rational)],
) -> Option<Vec<Rational>> {
    let members = o.members();
    let canonical = || members.iter().map(|&k| if k == i { x.get(k) + s } else { x.get(k).clone() }).collect();
    if counters.is_empty() {
        return Some(canonical());
    }
    let m = members.len();
    let t = m;
    let one = Rational::one;
    let mut lp = LinearProgram::new(m + 1);
    let mut objective = vec![Rational::zero(); m + 1];
    objective[t] = -one();
    lp.minimize(objective);

    let pos_i = members.iter().position(|&k| k == i).expect("proposer is a member");
    let mut row = vec![Rational::zero(); m + 1];
    row[t] = one();
    row[pos_i] = -one();
    lp.add(row, Relation::Le, Rational::zero());

    let mut row = vec![one(); m + 1];
    row[t] = Rational::zero();
    lp.add(row, Relation::Le, s.clone());

    for (q, sq) in counters {
        let mut row: Vec<Rational> =
            members.iter().map(|&k| if q.contains(k) { one() } else { Rational::zero() }).collect();
        row.push(-one());
        lp.add(row, Relation::Ge, sq.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { point, value } if value.is_negative() => {
            Some(members.iter().zip(&point).map(|(&k, e)| x.get(k) + e).collect())
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BargainingVerdict {
    Stable,
    /// The vector is not an efficient, individually rational payoff.
    NotImputation,
    Justified(ObjectionRecord),
}

impl BargainingVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, BargainingVerdict::Stable)
    }
}

/// Full double-enumeration check: stable iff no ordered pair of players
/// admits a justified objection.
pub fn bargaining_verdict(table: &ValueTable, x: &Imputation, oracle_cap: usize) -> Result<BargainingVerdict> {
    let n = table.players();
    if n > oracle_cap {
        return Err(GameError::TooManyPlayers { players: n, cap: oracle_cap });
    }
    if !x.is_imputation(table) {
        return Ok(BargainingVerdict::NotImputation);
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let found = pairs.par_iter().map(|&(i, j)| find_justified_objection(table, x, i, j)).find_map_first(|r| match r {
        Ok(Some(obj)) => Some(Ok(obj)),
        Ok(None) => None,
        Err(e) => Some(Err(e)),
    });
    match found {
        Some(Ok(obj)) => Ok(BargainingVerdict::Justified(obj)),
        Some(Err(e)) => Err(e),
        None => Ok(BargainingVerdict::Stable),
    }
}

pub fn verify_bargaining_membership(table: &ValueTable, x: &Imputation, oracle_cap: usize) -> Result<bool> {
    bargaining_verdict(table, x, oracle_cap).map(|v| v.is_stable())
}

/// Sufficient condition for `j` to answer any objection of `i` made through
/// `S \ {j}` with the coalition `S \ {i}`:
/// `x_j - x_i <= c_j - c_i` on capped avoiding costs.
pub fn pairwise_counter_condition(solution: &StableSolution, x: &Imputation, i: usize, j: usize) -> bool {
    let c = &solution.capped_avoiding;
    x.get(j) - x.get(i) <= &c[j] - &c[i]
}

pub fn player_ids(graph: &ChoreographyGraph, coalition: &Coalition) -> Vec<PlayerId> {
    coalition.ids(graph).into_iter().cloned().collect()
}
