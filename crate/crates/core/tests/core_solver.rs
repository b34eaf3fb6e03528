//! Core decisions against basic-solution enumeration.

mod common;

use common::*;
use enactment_game::lp::{LinearProgram, LpOutcome, Relation};
use enactment_game::rational::{int, Rational};
use enactment_game::*;
use num_traits::{One, Zero};

fn small_games() -> impl Iterator<Item = GameInstance> {
    (0..400u64)
        .map(|seed| {
            let services = 3 + (seed as usize % 5);
            let layers = 1 + (seed as usize / 5) % 3;
            random_game(seed, services, layers.min(services), 0.5, 10)
        })
        .filter(|g| g.player_count() <= 4)
}

#[test]
fn emptiness_and_witness_match_vertex_enumeration() {
    let (mut empty, mut nonempty) = (0, 0);
    for inst in small_games() {
        let table = enumerate_values(&inst, 16).unwrap();
        let n = table.players();
        let vertices = core_vertices(&|m| table.value_of_mask(m).clone(), n);
        let report = core_empty(&table);
        assert_eq!(report.empty, vertices.is_empty());
        if report.empty {
            empty += 1;
            assert!(report.witness.is_none());
            continue;
        }
        nonempty += 1;
        let witness = report.witness.unwrap();
        assert_eq!(witness.payoffs(), &vertices.iter().min().unwrap()[..]);
        let m = in_core(&table, &witness).unwrap();
        assert!(m.member && m.violated.is_none());
    }
    assert!(empty >= 10 && nonempty >= 100, "empty {empty}, non-empty {nonempty}");
}

#[test]
fn dropping_a_constraint_never_loses_feasibility() {
    for inst in small_games().take(60) {
        let table = enumerate_values(&inst, 16).unwrap();
        let n = table.players();
        let rows: Vec<(Vec<Rational>, Rational)> = (1..(1u64 << n) - 1)
            .map(|m| {
                let coeffs = (0..n).map(|i| if m >> i & 1 == 1 { Rational::one() } else { Rational::zero() }).collect();
                (coeffs, table.value_of_mask(m).clone())
            })
            .collect();
        let feasible = |skip: Option<usize>| {
            let mut lp = LinearProgram::new(n);
            lp.add(vec![Rational::one(); n], Relation::Eq, table.grand_value().clone());
            for (k, (c, v)) in rows.iter().enumerate() {
                if Some(k) != skip {
                    lp.add(c.clone(), Relation::Ge, v.clone());
                }
            }
            !matches!(lp.solve(), LpOutcome::Infeasible)
        };
        let full = feasible(None);
        assert_eq!(full, !core_empty(&table).empty);
        for k in 0..rows.len() {
            assert!(!full || feasible(Some(k)));
        }
    }
}

#[test]
fn only_grand_coalition_valued() {
    // Two services in a chain owned by different players: every proper
    // coalition is worth 0, so any split of v(S) is in the core.
    let g = graph(&[("a", 1, "A"), ("b", 1, "B")], &[("a", "b")]);
    let table = enumerate_values(&GameInstance::new(g, int(10)).unwrap(), 16).unwrap();
    assert!(table.nonzero().all(|(c, _)| c.len() == 2));
    let report = core_empty(&table);
    assert!(!report.empty);
    assert_eq!(report.witness.unwrap().total(), int(8));
}

#[test]
fn too_many_players() {
    let inst =
        generate(&GeneratorParams { services: 20, layers: 4, players_per_service: 1.0, ..Default::default() }).unwrap();
    assert!(matches!(enumerate_values(&inst, 16), Err(GameError::TooManyPlayers { players: 20, cap: 16 })));
}
