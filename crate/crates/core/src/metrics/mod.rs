//! Node-level metrics per relationship layer: degree, strength and
//! reducing factor, plus each facility's share of the layer's total flow.

mod reducing;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{total_weight, ClscNetwork, Facility, FacilityId, FacilityKind, Layer, LayerView, Link};

pub use reducing::{cumulative_curve, reducing_factor, CumulativeCurve, CurvePoint, AUC_UNIFORM};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("unknown facility `{0}`")]
    UnknownFacility(String),
    #[error("weights must be positive and finite, got {0}")]
    NonPositiveWeight(f64),
    #[error("cumulative curve needs at least one weight")]
    EmptyWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn links<'a>(view: &LayerView<'a>, facility: &str, dir: Direction) -> Result<&'a [Link], MetricsError> {
    let found = match dir {
        Direction::In => view.incoming(facility),
        Direction::Out => view.outgoing(facility),
    };
    found.ok_or_else(|| MetricsError::UnknownFacility(facility.to_owned()))
}

/// Number of distinct neighbors in the given direction.
pub fn degree(view: &LayerView<'_>, facility: &str, dir: Direction) -> Result<usize, MetricsError> {
    links(view, facility, dir).map(<[Link]>::len)
}

/// Total weight in the given direction; zero for isolated facilities.
pub fn strength(view: &LayerView<'_>, facility: &str, dir: Direction) -> Result<f64, MetricsError> {
    links(view, facility, dir).map(total_weight)
}

/// Metrics of one facility within one layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub facility: FacilityId,
    pub kind: FacilityKind,
    pub layer: Layer,
    pub c_in: usize,
    pub c_out: usize,
    pub s_in: f64,
    pub s_out: f64,
    /// Balance of inbound flows; `None` below two inbound edges.
    #[serde(with = "na")]
    pub r_absorb: Option<f64>,
    /// Balance of outbound flows; `None` below two outbound edges.
    #[serde(with = "na")]
    pub r_disperse: Option<f64>,
    pub share_in: f64,
    pub share_out: f64,
}

impl MetricsRecord {
    pub fn degree(&self, dir: Direction) -> usize {
        match dir {
            Direction::In => self.c_in,
            Direction::Out => self.c_out,
        }
    }

    pub fn strength(&self, dir: Direction) -> f64 {
        match dir {
            Direction::In => self.s_in,
            Direction::Out => self.s_out,
        }
    }

    pub fn reducing(&self, dir: Direction) -> Option<f64> {
        match dir {
            Direction::In => self.r_absorb,
            Direction::Out => self.r_disperse,
        }
    }

    pub fn share(&self, dir: Direction) -> f64 {
        match dir {
            Direction::In => self.share_in,
            Direction::Out => self.share_out,
        }
    }
}

fn weights(links: &[Link]) -> Vec<f64> {
    links.iter().map(|l| l.weight).collect()
}

fn share(part: f64, total: f64) -> f64 {
    if total > 0.0 {
        part / total
    } else {
        0.0
    }
}

/// Record for one facility in one layer. The facility must belong to `view`'s
/// network.
pub fn metrics_record(view: &LayerView<'_>, facility: &Facility) -> MetricsRecord {
    let id = facility.id.as_str();
    let inbound = view.incoming(id).expect("facility belongs to the network");
    let outbound = view.outgoing(id).expect("facility belongs to the network");
    let total = view.total();
    let s_in = total_weight(inbound);
    let s_out = total_weight(outbound);
    // Link weights are validated positive at network construction.
    let r_absorb = reducing_factor(&weights(inbound)).expect("validated weights");
    let r_disperse = reducing_factor(&weights(outbound)).expect("validated weights");
    MetricsRecord {
        facility: facility.id.clone(),
        kind: facility.kind,
        layer: view.layer(),
        c_in: inbound.len(),
        c_out: outbound.len(),
        s_in,
        s_out,
        r_absorb,
        r_disperse,
        share_in: share(s_in, total),
        share_out: share(s_out, total),
    }
}

/// (layer, facility) pairs in output order: layer first, then facility id.
fn participation(net: &ClscNetwork) -> Vec<(Layer, &Facility)> {
    Layer::ALL
        .into_iter()
        .flat_map(|layer| net.facilities().iter().filter(move |f| layer.admits(f)).map(move |f| (layer, f)))
        .collect()
}

/// One record per (facility, layer) the facility's kind can take part in,
/// ordered by (layer, facility id). Evaluated in parallel; the output is
/// identical to sequential evaluation.
pub fn metrics_table(net: &ClscNetwork) -> Vec<MetricsRecord> {
    participation(net).into_par_iter().map(|(layer, f)| metrics_record(&net.layer_view(layer), f)).collect()
}

/// Key of a cumulative curve in a report.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurveKey {
    pub facility: FacilityId,
    pub layer: Layer,
    pub direction: Direction,
}

/// Cumulative curves for every (facility, layer, direction) with at least two
/// edges, i.e. everywhere a reducing factor is reported.
pub fn curve_map(net: &ClscNetwork) -> BTreeMap<CurveKey, CumulativeCurve> {
    let mut out = BTreeMap::new();
    for layer in Layer::ALL {
        let view = net.layer_view(layer);
        for (f, inbound, outbound) in view.iter() {
            for (direction, links) in [(Direction::In, inbound), (Direction::Out, outbound)] {
                if links.len() < 2 {
                    continue;
                }
                let curve = cumulative_curve(&weights(links)).expect("validated weights");
                out.insert(CurveKey { facility: f.id.clone(), layer, direction }, curve);
            }
        }
    }
    out
}

/// Serde adapter writing `None` as the literal string `"NA"`.
pub mod na {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub const NA: &str = "NA";

    pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_f64(*v),
            None => s.serialize_str(NA),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        struct NaVisitor;
        impl Visitor<'_> for NaVisitor {
            type Value = Option<f64>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"NA\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(Some(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(Some(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(Some(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == NA {
                    Ok(None)
                } else {
                    v.parse().map(Some).map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(NaVisitor)
    }
}
