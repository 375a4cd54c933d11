//! Bundled reference network.

use crate::network::{load_network, ClscNetwork, InputFormat};

/// Raw JSON of the Ohio case-study network: 5 manufacturers (three of which
/// remanufacture), 10 distribution centers and 50 retailers.
pub const CASESTUDY_OHIO_JSON: &str = include_str!("../data/casestudy_ohio.json");

pub fn casestudy_ohio() -> ClscNetwork {
    load_network(CASESTUDY_OHIO_JSON.as_bytes(), InputFormat::Json).expect("bundled fixture is valid")
}
