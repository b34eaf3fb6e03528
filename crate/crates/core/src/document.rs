//! JSON game documents.
//!
//! ```json
//! {
//!   "budget": "34",
//!   "services": [
//!     {"id": "alpha", "cost": "2", "owner": "Lambda", "price": "10"}
//!   ],
//!   "edges": [["alpha", "gamma"]]
//! }
//! ```
//!
//! Amounts are decimal strings (`"2.5"`, `"7/3"`) so they parse exactly;
//! plain JSON integers are accepted too. Prices are optional but must be
//! given for every service or for none.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GameError, Result};
use crate::model::{ChoreographyGraph, GameInstance, ServiceVertex};
use crate::rational::{exact_string, parse_rational, Rational};

/// An exact amount, written as a decimal or fraction string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amount(pub Rational);

impl Serialize for Amount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&exact_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for Amount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct AmountVisitor;

        impl Visitor<'_> for AmountVisitor {
            type Value = Amount;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal string or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Amount, E> {
                parse_rational(v).map(Amount).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Amount, E> {
                Ok(Amount(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Amount, E> {
                Ok(Amount(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Amount, E> {
                Err(E::custom(format!("write {v} as a string to keep it exact")))
            }
        }

        deserializer.deserialize_any(AmountVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceEntry {
    pub id: String,
    pub cost: Amount,
    pub owner: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub price: Option<Amount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub budget: Amount,
    pub services: Vec<ServiceEntry>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

impl GameDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GameError::MalformedDocument(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn to_instance(&self) -> Result<GameInstance> {
        let vertices =
            self.services.iter().map(|s| ServiceVertex::new(s.id.clone(), s.cost.0.clone(), s.owner.clone())).collect();
        let graph = ChoreographyGraph::new(vertices, self.edges.clone())?;
        let priced = self.services.iter().filter(|s| s.price.is_some()).count();
        let budget = self.budget.0.clone();
        match priced {
            0 => GameInstance::new(graph, budget),
            n if n == self.services.len() => {
                let prices = self.services.iter().map(|s| s.price.clone().expect("all priced").0).collect();
                GameInstance::with_prices(graph, budget, prices)
            }
            _ => Err(GameError::MalformedDocument(format!(
                "{priced} of {} services carry a price; give all or none",
                self.services.len()
            ))),
        }
    }

    pub fn from_instance(instance: &GameInstance) -> Self {
        let graph = instance.graph();
        let prices = instance.announced_prices();
        let services = graph
            .vertices()
            .enumerate()
            .map(|(v, s)| ServiceEntry {
                id: s.id.clone(),
                cost: Amount(s.cost.clone()),
                owner: s.owner.0.clone(),
                price: prices.map(|p| Amount(p[v].clone())),
            })
            .collect();
        let edges = graph.edges().map(|(a, b)| (a.to_owned(), b.to_owned())).collect();
        GameDocument { budget: Amount(instance.budget().clone()), services, edges }
    }
}

/// Parses and validates a JSON game document.
pub fn load_graph(text: &str) -> Result<GameInstance> {
    GameDocument::from_json(text)?.to_instance()
}

pub fn emit_document(instance: &GameInstance) -> String {
    GameDocument::from_instance(instance).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_strings_and_integers() {
        let doc = r#"{"budget": 10, "services": [
            {"id": "a", "cost": "1.5", "owner": "x"},
            {"id": "b", "cost": 2, "owner": "y"}], "edges": [["a", "b"]]}"#;
        let inst = load_graph(doc).unwrap();
        assert_eq!(inst.total_cost(), crate::rational::ratio(7, 2));
        assert_eq!(load_graph(&emit_document(&inst)).unwrap(), inst);
    }

    #[test]
    fn rejects_floats_partial_prices_and_missing_fields() {
        let float = r#"{"budget": 1.5, "services": [{"id": "a", "cost": "1", "owner": "x"}]}"#;
        assert!(matches!(load_graph(float), Err(GameError::MalformedDocument(_))));
        let partial = r#"{"budget": "9", "services": [
            {"id": "a", "cost": "1", "owner": "x", "price": "2"},
            {"id": "b", "cost": "1", "owner": "y"}], "edges": [["a", "b"]]}"#;
        assert!(matches!(load_graph(partial), Err(GameError::MalformedDocument(_))));
        let no_owner = r#"{"budget": "9", "services": [{"id": "a", "cost": "1"}]}"#;
        assert!(matches!(load_graph(no_owner), Err(GameError::MalformedDocument(_))));
    }
}
