//! JSON report sections. Field order in each struct is the output order.

use enactment_game::bargaining::{BargainingVerdict, PriceInterval, StabilityThreshold, StableSolution};
use enactment_game::core_set::CoreReport;
use enactment_game::detect::DetectionReport;
use enactment_game::rational::{decimal_string, exact_string, Cost, Rational};
use enactment_game::vcg::{EquivalenceReport, VcgReport};
use enactment_game::{ChoreographyGraph, Coalition, Imputation, ObjectionRecord, ValueTable};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

const DECIMAL_PLACES: usize = 6;

/// A rational as `{"exact": "7/3", "decimal": "2.333333"}`.
#[derive(Serialize)]
pub struct Number {
    exact: String,
    decimal: String,
}

impl From<&Rational> for Number {
    fn from(r: &Rational) -> Self {
        Number { exact: exact_string(r), decimal: decimal_string(r, DECIMAL_PLACES) }
    }
}

impl From<&Cost> for Number {
    fn from(c: &Cost) -> Self {
        match c {
            Cost::Finite(r) => r.into(),
            Cost::Infinite => Number { exact: "inf".into(), decimal: "inf".into() },
        }
    }
}

/// A JSON object that keeps insertion order.
pub struct Ordered<V>(Vec<(String, V)>);

impl<V: Serialize> Serialize for Ordered<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn names(graph: &ChoreographyGraph, c: &Coalition) -> Vec<String> {
    c.ids(graph).into_iter().map(|p| p.to_string()).collect()
}

fn payoffs(graph: &ChoreographyGraph, x: &Imputation) -> Ordered<Number> {
    Ordered(x.named(graph).into_iter().map(|(p, v)| (p.to_string(), v.into())).collect())
}

#[derive(Serialize)]
pub struct ValueEntry {
    coalition: Vec<String>,
    value: Number,
    winning_path: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct ValuesSection {
    coalitions: usize,
    grand_value: Number,
    /// Coalitions with a positive value, by size then player order.
    nonzero: Vec<ValueEntry>,
}

impl ValuesSection {
    pub fn new(graph: &ChoreographyGraph, table: &ValueTable) -> Self {
        let nonzero = table
            .nonzero()
            .map(|(c, v)| ValueEntry {
                coalition: names(graph, &c),
                value: (&v.value).into(),
                winning_path: v.winning_path.clone(),
            })
            .collect();
        ValuesSection { coalitions: 1 << table.players(), grand_value: table.grand_value().into(), nonzero }
    }
}

#[derive(Serialize)]
pub struct CoreSection {
    empty: bool,
    witness: Option<Ordered<Number>>,
}

impl CoreSection {
    pub fn new(graph: &ChoreographyGraph, report: &CoreReport) -> Self {
        CoreSection { empty: report.empty, witness: report.witness.as_ref().map(|w| payoffs(graph, w)) }
    }
}

#[derive(Serialize)]
pub struct ImputationSection {
    active_set: Vec<String>,
    paid_set: Vec<String>,
    x: Ordered<Number>,
    exists: bool,
    sum: Number,
    grand_value: Number,
    capped_avoiding_sum: Number,
}

impl ImputationSection {
    pub fn new(graph: &ChoreographyGraph, s: &StableSolution) -> Self {
        ImputationSection {
            active_set: names(graph, &s.active_set),
            paid_set: names(graph, &s.paid_set),
            x: payoffs(graph, &s.imputation),
            exists: s.exists,
            sum: (&s.imputation.total()).into(),
            grand_value: (&s.grand_value).into(),
            capped_avoiding_sum: (&s.capped_sum).into(),
        }
    }
}

#[derive(Serialize)]
pub struct IntervalEntry {
    low: Number,
    low_inclusive: bool,
    high: Number,
    high_inclusive: bool,
}

impl From<&PriceInterval> for IntervalEntry {
    fn from(i: &PriceInterval) -> Self {
        IntervalEntry {
            low: (&i.low).into(),
            low_inclusive: i.low_inclusive,
            high: (&i.high).into(),
            high_inclusive: i.high_inclusive,
        }
    }
}

#[derive(Serialize)]
pub struct ThresholdSection {
    threshold: Number,
    critical_set: Vec<String>,
    formula: Number,
    stable_from: Number,
    shortest_cost: Number,
    stable_prices: Vec<IntervalEntry>,
}

impl ThresholdSection {
    pub fn new(graph: &ChoreographyGraph, t: &StabilityThreshold) -> Self {
        ThresholdSection {
            threshold: (&t.threshold).into(),
            critical_set: names(graph, &t.critical_set),
            formula: (&t.formula).into(),
            stable_from: (&t.stable_from).into(),
            shortest_cost: (&t.shortest_cost).into(),
            stable_prices: t.stable_prices.iter().map(IntervalEntry::from).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ObjectionEntry {
    proposer: String,
    target: String,
    coalition: Vec<String>,
    payoffs: Ordered<Number>,
}

impl ObjectionEntry {
    fn new(graph: &ChoreographyGraph, o: &ObjectionRecord) -> Self {
        let players = graph.players();
        ObjectionEntry {
            proposer: players[o.proposer].to_string(),
            target: players[o.target].to_string(),
            coalition: names(graph, &o.coalition),
            payoffs: Ordered(
                o.coalition.iter().zip(&o.payoffs).map(|(k, y)| (players[k].to_string(), y.into())).collect(),
            ),
        }
    }
}

#[derive(Serialize)]
pub struct OracleSection {
    /// The payoff vector that was checked.
    x: Ordered<Number>,
    imputation: bool,
    stable: bool,
    justified_objection: Option<ObjectionEntry>,
}

impl OracleSection {
    pub fn new(graph: &ChoreographyGraph, x: &Imputation, verdict: &BargainingVerdict) -> Self {
        let justified_objection = match verdict {
            BargainingVerdict::Justified(o) => Some(ObjectionEntry::new(graph, o)),
            _ => None,
        };
        OracleSection {
            x: payoffs(graph, x),
            imputation: !matches!(verdict, BargainingVerdict::NotImputation),
            stable: verdict.is_stable(),
            justified_objection,
        }
    }
}

#[derive(Serialize)]
pub struct EquivalenceSection {
    vcg_total: Number,
    minimal_stable_price: Number,
    equal: bool,
}

#[derive(Serialize)]
pub struct VcgSection {
    chosen_path: Vec<String>,
    payments: Ordered<Number>,
    total_payment: Number,
    equivalence: EquivalenceSection,
}

impl VcgSection {
    pub fn new(report: &VcgReport, eq: &EquivalenceReport) -> Self {
        VcgSection {
            chosen_path: report.chosen_path.clone(),
            payments: Ordered(report.payments.iter().map(|(id, p)| (id.clone(), p.into())).collect()),
            total_payment: (&report.total_payment).into(),
            equivalence: EquivalenceSection {
                vcg_total: (&eq.vcg_total).into(),
                minimal_stable_price: (&eq.minimal_stable_price).into(),
                equal: eq.equal,
            },
        }
    }
}

#[derive(Serialize)]
pub struct PlayerEntry {
    player: String,
    active: bool,
    margin: Number,
    expected: Number,
    matches: bool,
}

#[derive(Serialize)]
pub struct DetectSection {
    alliance: bool,
    tolerance: Number,
    players: Vec<PlayerEntry>,
}

impl From<&DetectionReport> for DetectSection {
    fn from(r: &DetectionReport) -> Self {
        DetectSection {
            alliance: r.alliance,
            tolerance: (&r.tolerance).into(),
            players: r
                .per_player
                .iter()
                .map(|c| PlayerEntry {
                    player: c.player.to_string(),
                    active: c.active,
                    margin: (&c.margin).into(),
                    expected: (&c.expected).into(),
                    matches: c.matches,
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Default)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<ValuesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<CoreSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imputation: Option<ImputationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vcg: Option<VcgSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detect: Option<DetectSection>,
}
