//! Imputations and the core.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{GameError, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::model::{ChoreographyGraph, Coalition, PlayerId};
use crate::rational::{exact_string, Rational};
use crate::values::ValueTable;

/// A payoff per player, indexed like the instance's player list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Imputation {
    payoffs: Vec<Rational>,
}

impl Imputation {
    pub fn new(payoffs: Vec<Rational>) -> Self {
        Imputation { payoffs }
    }

    pub fn zeros(players: usize) -> Self {
        Imputation { payoffs: vec![Rational::zero(); players] }
    }

    /// Builds from `(player id, payoff)` pairs; every player must appear once.
    pub fn from_ids<'a>(
        graph: &ChoreographyGraph,
        pairs: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<Self> {
        let mut payoffs: Vec<Option<Rational>> = vec![None; graph.player_count()];
        for (id, value) in pairs {
            let p = graph.player_index(&PlayerId::from(id))?;
            if payoffs[p].replace(value).is_some() {
                return Err(GameError::InvalidParameters(format!("payoff for {id:?} given twice")));
            }
        }
        payoffs
            .into_iter()
            .enumerate()
            .map(|(p, v)| {
                v.ok_or_else(|| GameError::InvalidParameters(format!("missing payoff for {}", graph.players()[p])))
            })
            .collect::<Result<Vec<_>>>()
            .map(Imputation::new)
    }

    pub fn players(&self) -> usize {
        self.payoffs.len()
    }

    pub fn get(&self, player: usize) -> &Rational {
        &self.payoffs[player]
    }

    pub fn set(&mut self, player: usize, value: Rational) {
        self.payoffs[player] = value;
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.payoffs
    }

    pub fn total(&self) -> Rational {
        self.payoffs.iter().sum()
    }

    pub fn sum_over(&self, coalition: &Coalition) -> Rational {
        coalition.iter().map(|p| &self.payoffs[p]).sum()
    }

    pub fn is_efficient(&self, table: &ValueTable) -> bool {
        &self.total() == table.grand_value()
    }

    pub fn is_individually_rational(&self, table: &ValueTable) -> bool {
        self.payoffs.iter().enumerate().all(|(p, x)| x >= table.value(&Coalition::singleton(p)))
    }

    pub fn is_imputation(&self, table: &ValueTable) -> bool {
        self.players() == table.players() && self.is_efficient(table) && self.is_individually_rational(table)
    }

    pub fn named<'g>(&self, graph: &'g ChoreographyGraph) -> Vec<(&'g PlayerId, &Rational)> {
        graph.players().iter().zip(&self.payoffs).collect()
    }
}

impl fmt::Display for Imputation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.payoffs.iter().map(exact_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreViolation {
    pub coalition: Coalition,
    pub required: Rational,
    pub received: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreMembership {
    pub member: bool,
    pub efficient: bool,
    /// First coalition whose value exceeds what `x` gives it, by size then
    /// lexicographic order.
    pub violated: Option<CoreViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreReport {
    pub empty: bool,
    /// The lexicographically smallest core point when the core is non-empty.
    pub witness: Option<Imputation>,
}

fn check_len(table: &ValueTable, x: &Imputation) -> Result<()> {
    if x.players() != table.players() {
        return Err(GameError::InvalidParameters(format!(
            "payoff vector has {} entries for {} players",
            x.players(),
            table.players()
        )));
    }
    Ok(())
}

pub fn in_core(table: &ValueTable, x: &Imputation) -> Result<CoreMembership> {
    check_len(table, x)?;
    let efficient = x.is_efficient(table);
    let violated = table.iter().find_map(|(c, v)| {
        let received = x.sum_over(&c);
        (received < v.value).then(|| CoreViolation { coalition: c, required: v.value.clone(), received })
    });
    Ok(CoreMembership { member: efficient && violated.is_none(), efficient, violated })
}

/// Subset sums of `x` for every coalition mask.
fn mask_sums(x: &[Rational]) -> Vec<Rational> {
    let mut sums = vec![Rational::zero(); 1 << x.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &x[low];
    }
    sums
}

/// Coalition with the largest shortfall `v(X) - x(X) > 0`, if any.
fn most_violated(table: &ValueTable, x: &[Rational]) -> Option<u64> {
    let sums = mask_sums(x);
    let mut best: Option<(Rational, u64)> = None;
    for (mask, sum) in sums.iter().enumerate() {
        let deficit = table.value_of_mask(mask as u64) - sum;
        if deficit.is_positive() && best.as_ref().is_none_or(|(d, _)| &deficit > d) {
            best = Some((deficit, mask as u64));
        }
    }
    best.map(|(_, m)| m)
}

fn coalition_row(mask: u64, n: usize) -> Vec<Rational> {
    (0..n).map(|p| if mask >> p & 1 == 1 { Rational::from_integer(1.into()) } else { Rational::zero() }).collect()
}

/// Decides whether the core is empty with exact arithmetic.
///
/// Coalition constraints are added lazily: the relaxed LP is re-solved with
/// the most violated coalition until its optimum satisfies every
/// constraint, which makes it optimal for the full system. The witness is
/// found by minimizing payoffs one player at a time.
pub fn core_empty(table: &ValueTable) -> CoreReport {
    let n = table.players();
    let mut lp = LinearProgram::new(n);
    lp.add(vec![Rational::from_integer(1.into()); n], Relation::Eq, table.grand_value().clone());

    for player in 0..n {
        let mut objective = vec![Rational::zero(); n];
        objective[player] = Rational::from_integer(1.into());
        lp.minimize(objective);
        let (point, value) = loop {
            match lp.solve() {
                LpOutcome::Optimal { point, value } => match most_violated(table, &point) {
                    Some(mask) => {
                        lp.add(coalition_row(mask, n), Relation::Ge, table.value_of_mask(mask).clone());
                    }
                    None => break (point, value),
                },
                LpOutcome::Infeasible => return CoreReport { empty: true, witness: None },
                LpOutcome::Unbounded => unreachable!("payoffs are bounded below by zero"),
            }
        };
        if player + 1 == n {
            return CoreReport { empty: false, witness: Some(Imputation::new(point)) };
        }
        let mut pin = vec![Rational::zero(); n];
        pin[player] = Rational::from_integer(1.into());
        lp.add(pin, Relation::Eq, value);
    }
    // Zero players: the only payoff vector is empty and trivially efficient.
    CoreReport { empty: false, witness: Some(Imputation::zeros(0)) }
}
