//! Alliance detection from announced prices.
//!
//! A provider's margin is the sum of `price - cost` over its services. The
//! providers are judged to act as one alliance when every margin matches the
//! stable imputation within a tolerance.

use num_traits::{Signed, Zero};

use crate::bargaining::stable_imputation;
use crate::error::{GameError, Result};
use crate::model::{GameInstance, PlayerId};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerCheck {
    pub player: PlayerId,
    pub active: bool,
    pub margin: Rational,
    pub expected: Rational,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionReport {
    pub alliance: bool,
    pub per_player: Vec<PlayerCheck>,
    pub tolerance: Rational,
}

fn margin_of(instance: &GameInstance, prices: &[Rational], player: usize) -> Rational {
    let graph = instance.graph();
    graph.vertices_of(player).map(|w| &prices[w] - graph.cost(w)).sum()
}

pub fn player_margin(instance: &GameInstance, player: &PlayerId) -> Result<Rational> {
    let prices = instance.announced_prices().ok_or(GameError::MissingAnnouncedPrices)?;
    let index = instance.graph().player_index(player)?;
    Ok(margin_of(instance, prices, index))
}

pub fn detect(instance: &GameInstance, tolerance: &Rational) -> Result<DetectionReport> {
    if tolerance.is_negative() {
        return Err(GameError::InvalidParameters(format!("negative tolerance {tolerance}")));
    }
    let prices = instance.announced_prices().ok_or(GameError::MissingAnnouncedPrices)?;
    let solution = match stable_imputation(instance) {
        Ok(s) if s.exists => s,
        Ok(_) | Err(GameError::NoAffordablePath) => return Err(GameError::NoStableImputation),
        Err(e) => return Err(e),
    };

    let per_player: Vec<PlayerCheck> = instance
        .players()
        .iter()
        .enumerate()
        .map(|(j, id)| {
            let margin = margin_of(instance, prices, j);
            let expected = solution.imputation.get(j).clone();
            let matches = (&margin - &expected).abs() <= *tolerance;
            PlayerCheck { player: id.clone(), active: solution.active_set.contains(j), margin, expected, matches }
        })
        .collect();
    let alliance = per_player.iter().all(|c| c.matches);
    debug_assert!(per_player.iter().all(|c| c.active || c.expected.is_zero()));
    Ok(DetectionReport { alliance, per_player, tolerance: tolerance.clone() })
}
