//! Cooperative pricing game among service providers on a service DAG.
//!
//! Providers own priced services in a directed acyclic graph; a user buys
//! the cheapest source-to-sink path within a budget. This crate computes the
//! coalition values of the resulting transferable-utility game, decides the
//! core, derives the stable revenue split and its budget threshold, detects
//! alliances from announced prices and cross-checks against VCG payments.

pub mod bargaining;
pub mod core_set;
pub mod detect;
pub mod document;
pub mod error;
pub mod generate;
pub mod lp;
pub mod model;
pub mod paths;
pub mod rational;
pub mod values;
pub mod vcg;

pub use bargaining::{
    active_set, bargaining_verdict, find_counter_objection, find_justified_objection, find_objection, graph_threshold,
    has_counter_objection, justified_objection_via, stability_threshold, stable_imputation,
    verify_bargaining_membership, BargainingVerdict, ObjectionRecord, PriceInterval, StabilityThreshold,
    StableSolution,
};
pub use core_set::{core_empty, in_core, CoreMembership, CoreReport, Imputation};
pub use detect::{detect, player_margin, DetectionReport};
pub use document::{emit_document, load_graph, GameDocument};
pub use error::{GameError, Result};
pub use generate::{generate, GeneratorParams};
pub use model::{ChoreographyGraph, Coalition, GameInstance, PlayerId, ServiceVertex};
pub use paths::{avoiding_shortest_path, player_path_cost, restricted_shortest_path, shortest_path, PathResult};
pub use rational::{Cost, Rational};
pub use values::{coalition_value, enumerate_values, grand_coalition_value, CoalitionValue, ValueReason, ValueTable};
pub use vcg::{check_equivalence, vcg_payments, EquivalenceReport, VcgReport};
