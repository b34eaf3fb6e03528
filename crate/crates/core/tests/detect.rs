//! Alliance detection properties.

mod common;

use common::*;
use enactment_game::rational::{int, ratio, Rational};
use enactment_game::*;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prices that put each player's expected payoff on one of its services.
fn colluding_prices(inst: &GameInstance, x: &Imputation, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let g = inst.graph();
    let mut prices: Vec<Rational> = g.vertices().map(|v| v.cost.clone()).collect();
    for p in 0..g.player_count() {
        let owned: Vec<usize> = g.vertices_of(p).collect();
        let carrier = owned[rng.gen_range(0..owned.len())];
        prices[carrier] += x.get(p);
    }
    prices
}

#[test]
fn colluding_prices_are_detected_wherever_the_markup_sits() {
    let mut detected = 0;
    for seed in 0..150u64 {
        let inst = random_game(seed, 4 + seed as usize % 5, 2 + seed as usize % 3, 0.6, 10);
        let Ok(s) = stable_imputation(&inst) else { continue };
        if !s.exists {
            let priced = inst.with_announced_prices(inst.graph().vertices().map(|v| v.cost.clone()).collect()).unwrap();
            assert_eq!(detect(&priced, &int(0)).unwrap_err(), GameError::NoStableImputation);
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first =
            detect(&inst.with_announced_prices(colluding_prices(&inst, &s.imputation, &mut rng)).unwrap(), &int(0))
                .unwrap();
        let second =
            detect(&inst.with_announced_prices(colluding_prices(&inst, &s.imputation, &mut rng)).unwrap(), &int(0))
                .unwrap();
        assert!(first.alliance);
        assert_eq!(first, second);
        detected += 1;

        // Shifting any positive amount between two paid players breaks it.
        if s.paid_set.len() >= 2 {
            let (a, b) = (s.paid_set.members()[0], s.paid_set.members()[1]);
            let mut shifted = s.imputation.clone();
            shifted.set(a, shifted.get(a) + ratio(1, 1000));
            shifted.set(b, shifted.get(b) - ratio(1, 1000));
            let priced = inst.with_announced_prices(colluding_prices(&inst, &shifted, &mut rng)).unwrap();
            let report = detect(&priced, &int(0)).unwrap();
            assert!(!report.alliance);
            assert!(detect(&priced, &ratio(1, 1000)).unwrap().alliance);
        }
    }
    assert!(detected > 50);
}

#[test]
fn margins() {
    let inst = fig2();
    assert_eq!(player_margin(&inst, &"Lambda".into()).unwrap_err(), GameError::MissingAnnouncedPrices);
    let truthful = inst.with_announced_prices(inst.graph().vertices().map(|v| v.cost.clone()).collect()).unwrap();
    for p in inst.players() {
        assert!(player_margin(&truthful, p).unwrap().is_zero());
    }
    assert!(matches!(player_margin(&truthful, &"nobody".into()), Err(GameError::UnknownPlayer(_))));
    assert!(matches!(detect(&truthful, &int(-1)), Err(GameError::InvalidParameters(_))));
}
