//! Social-network-analysis metrics for closed-loop supply chain networks.
//!
//! The crate loads a network of manufacturers, distribution centers and
//! retailers joined by four flow layers (two forward, two for returns),
//! computes per-facility degree, strength and reducing factor for each
//! layer, and runs a threshold-driven rule set that flags facilities whose
//! disruption would hurt the network most.

pub mod fixtures;
pub mod metrics;
pub mod netgen;
pub mod network;
pub mod report;
pub mod risk;

pub use metrics::{metrics_table, reducing_factor, Direction, MetricsRecord};
pub use network::{validate_flows, ClscNetwork, Edge, Facility, FacilityId, FacilityKind, Layer, Tolerances};
pub use risk::{analyze, Finding, RiskConfig};
