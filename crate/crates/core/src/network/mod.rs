//! Closed-loop supply chain network model.
//!
//! A [`ClscNetwork`] is a set of typed facilities joined by weighted directed
//! edges. Every edge belongs to exactly one of four relationship layers, and
//! the layer fixes which facility kinds may sit at either end. Networks are
//! checked once at construction and are read-only afterwards.

mod io;
mod validate;
mod view;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{load_network, InputFormat, NetworkFile};
pub use validate::{validate_flows, CheckSummary, Tolerances, ValidationReport, Violation, ViolationCode};
pub(crate) use view::ascending_sum;
pub use view::{total_weight, LayerView, Link};

/// Unique facility identifier within one network.
///
/// Ids order naturally: runs of digits compare by value, so `DC8` sorts
/// before `DC33`. Ids that differ only in leading zeros fall back to byte
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FacilityId(String);

impl Ord for FacilityId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for FacilityId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let trim = |d: &[u8]| -> Vec<u8> { d.iter().copied().skip_while(|c| *c == b'0').collect() };
                let (na, nb) = (trim(&a[..da]), trim(&b[..db]));
                let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(&nb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

impl FacilityId {
    pub fn new(id: impl Into<String>) -> Self {
        FacilityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FacilityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FacilityId {
    fn from(s: &str) -> Self {
        FacilityId(s.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacilityKind {
    Manufacturer,
    DistributionCenter,
    Retailer,
}

impl FacilityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FacilityKind::Manufacturer => "manufacturer",
            FacilityKind::DistributionCenter => "distribution_center",
            FacilityKind::Retailer => "retailer",
        }
    }
}

impl fmt::Display for FacilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A manufacturer, distribution center or retailer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Facility {
    pub id: FacilityId,
    pub kind: FacilityKind,
    #[serde(default)]
    pub can_remanufacture: bool,
    /// Units per period. Present exactly for manufacturers.
    #[serde(default)]
    pub manufacturing_capacity: Option<f64>,
    /// Units per period. Present exactly when `can_remanufacture` is set.
    #[serde(default)]
    pub remanufacturing_capacity: Option<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

impl Facility {
    pub fn manufacturer(id: &str, capacity: f64) -> Self {
        Facility {
            id: id.into(),
            kind: FacilityKind::Manufacturer,
            can_remanufacture: false,
            manufacturing_capacity: Some(capacity),
            remanufacturing_capacity: None,
            label: None,
        }
    }

    pub fn remanufacturer(id: &str, capacity: f64, reman_capacity: f64) -> Self {
        Facility {
            can_remanufacture: true,
            remanufacturing_capacity: Some(reman_capacity),
            ..Facility::manufacturer(id, capacity)
        }
    }

    pub fn distribution_center(id: &str) -> Self {
        Facility::plain(id, FacilityKind::DistributionCenter)
    }

    pub fn retailer(id: &str) -> Self {
        Facility::plain(id, FacilityKind::Retailer)
    }

    fn plain(id: &str, kind: FacilityKind) -> Self {
        Facility {
            id: id.into(),
            kind,
            can_remanufacture: false,
            manufacturing_capacity: None,
            remanufacturing_capacity: None,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Display name: the label when present, the id otherwise.
    pub fn display_name(&self) -> &str {
        self.label.as_deref().unwrap_or(self.id.as_str())
    }

    fn check(&self) -> Result<(), String> {
        let is_manufacturer = self.kind == FacilityKind::Manufacturer;
        if self.can_remanufacture && !is_manufacturer {
            return Err(format!("{} cannot remanufacture", self.kind));
        }
        match (is_manufacturer, self.manufacturing_capacity) {
            (true, None) => return Err("manufacturer without manufacturing_capacity".into()),
            (false, Some(_)) => return Err(format!("{} must not carry manufacturing_capacity", self.kind)),
            _ => {}
        }
        match (self.can_remanufacture, self.remanufacturing_capacity) {
            (true, None) => return Err("remanufacturer without remanufacturing_capacity".into()),
            (false, Some(_)) => return Err("remanufacturing_capacity set but can_remanufacture is false".into()),
            _ => {}
        }
        for (name, cap) in [
            ("manufacturing_capacity", self.manufacturing_capacity),
            ("remanufacturing_capacity", self.remanufacturing_capacity),
        ] {
            if let Some(c) = cap {
                if !c.is_finite() || c < 0.0 {
                    return Err(format!("{name} must be a nonnegative number, got {c}"));
                }
            }
        }
        Ok(())
    }
}

/// Relationship layer. Each layer fixes the (source, target) facility kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Layer {
    /// Manufacturer to distribution center.
    #[serde(rename = "m_dc")]
    ForwardMtoDC,
    /// Distribution center to retailer.
    #[serde(rename = "dc_re")]
    ForwardDCtoRe,
    /// Retailer to distribution center (returns).
    #[serde(rename = "re_dc")]
    ReverseRetoDC,
    /// Distribution center to remanufacturer (returns).
    #[serde(rename = "dc_rm")]
    ReverseDCtoRM,
}

impl Layer {
    pub const ALL: [Layer; 4] = [Layer::ForwardMtoDC, Layer::ForwardDCtoRe, Layer::ReverseRetoDC, Layer::ReverseDCtoRM];

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::ForwardMtoDC => "m_dc",
            Layer::ForwardDCtoRe => "dc_re",
            Layer::ReverseRetoDC => "re_dc",
            Layer::ReverseDCtoRM => "dc_rm",
        }
    }

    pub fn parse(s: &str) -> Option<Layer> {
        Layer::ALL.into_iter().find(|l| l.as_str() == s)
    }

    pub fn source_kind(self) -> FacilityKind {
        match self {
            Layer::ForwardMtoDC => FacilityKind::Manufacturer,
            Layer::ForwardDCtoRe | Layer::ReverseDCtoRM => FacilityKind::DistributionCenter,
            Layer::ReverseRetoDC => FacilityKind::Retailer,
        }
    }

    pub fn target_kind(self) -> FacilityKind {
        match self {
            Layer::ForwardMtoDC | Layer::ReverseRetoDC => FacilityKind::DistributionCenter,
            Layer::ForwardDCtoRe => FacilityKind::Retailer,
            Layer::ReverseDCtoRM => FacilityKind::Manufacturer,
        }
    }

    pub fn flow(self) -> FlowDirection {
        match self {
            Layer::ForwardMtoDC | Layer::ForwardDCtoRe => FlowDirection::Forward,
            Layer::ReverseRetoDC | Layer::ReverseDCtoRM => FlowDirection::Reverse,
        }
    }

    pub fn is_forward(self) -> bool {
        self.flow() == FlowDirection::Forward
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Whether `facility` may appear at the source end of this layer.
    pub fn accepts_source(self, facility: &Facility) -> bool {
        facility.kind == self.source_kind()
    }

    /// Whether `facility` may appear at the target end of this layer.
    /// Only remanufacturing-capable manufacturers receive returns.
    pub fn accepts_target(self, facility: &Facility) -> bool {
        facility.kind == self.target_kind() && (self != Layer::ReverseDCtoRM || facility.can_remanufacture)
    }

    /// Whether the facility can take part in this layer at all.
    pub fn admits(self, facility: &Facility) -> bool {
        self.accepts_source(facility) || self.accepts_target(facility)
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Forward (manufacturing) or reverse (returns) logistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowDirection {
    Forward,
    Reverse,
}

impl FlowDirection {
    pub fn layers(self) -> [Layer; 2] {
        match self {
            FlowDirection::Forward => [Layer::ForwardMtoDC, Layer::ForwardDCtoRe],
            FlowDirection::Reverse => [Layer::ReverseRetoDC, Layer::ReverseDCtoRM],
        }
    }
}

/// A weighted directed edge. The weight is a flow volume in units per period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub from: FacilityId,
    pub to: FacilityId,
    pub layer: Layer,
    pub weight: f64,
}

impl Edge {
    pub fn new(from: &str, to: &str, layer: Layer, weight: f64) -> Self {
        Edge { from: from.into(), to: to.into(), layer, weight }
    }

    fn sort_key(&self) -> (Layer, &FacilityId, &FacilityId) {
        (self.layer, &self.from, &self.to)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}->{}", self.layer, self.from, self.to)
    }
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("integrity error: {0}")]
    Integrity(#[from] IntegrityError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrityError {
    #[error("duplicate facility id `{0}`")]
    DuplicateFacility(FacilityId),
    #[error("facility `{id}`: {reason}")]
    InvalidFacility { id: FacilityId, reason: String },
    #[error("edge {edge} references unknown facility `{missing}`")]
    DanglingEndpoint { edge: String, missing: FacilityId },
    #[error("edge {0} appears more than once")]
    DuplicateEdge(String),
    #[error("edge {edge} has nonpositive weight {weight}")]
    NonPositiveWeight { edge: String, weight: f64 },
    #[error("edge {edge} joins {from_kind} -> {to_kind}, which layer {layer} does not allow")]
    KindMismatch { edge: String, layer: Layer, from_kind: FacilityKind, to_kind: FacilityKind },
    #[error("single allocation: retailer `{retailer}` has {count} edges in layer {layer}")]
    SingleAllocation { retailer: FacilityId, layer: Layer, count: usize },
    #[error("return rate must lie in [0, 1], got {0}")]
    InvalidReturnRate(f64),
}

#[derive(Debug, Clone, Default)]
struct LayerAdjacency {
    outgoing: Vec<Vec<Link>>,
    incoming: Vec<Vec<Link>>,
    total: f64,
}

/// Validated, immutable CLSC network.
#[derive(Debug, Clone)]
pub struct ClscNetwork {
    facilities: Vec<Facility>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    return_rate: Option<f64>,
    single_allocation: bool,
    adjacency: [LayerAdjacency; 4],
}

impl ClscNetwork {
    /// Checks every structural invariant and builds the per-layer adjacency.
    /// Input order of facilities and edges is irrelevant.
    pub fn new(
        mut facilities: Vec<Facility>,
        mut edges: Vec<Edge>,
        return_rate: Option<f64>,
        single_allocation: bool,
    ) -> Result<Self, IntegrityError> {
        if let Some(rate) = return_rate {
            if !(0.0..=1.0).contains(&rate) {
                return Err(IntegrityError::InvalidReturnRate(rate));
            }
        }

        facilities.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = HashMap::with_capacity(facilities.len());
        for (i, f) in facilities.iter().enumerate() {
            f.check().map_err(|reason| IntegrityError::InvalidFacility { id: f.id.clone(), reason })?;
            if index.insert(f.id.0.clone(), i).is_some() {
                return Err(IntegrityError::DuplicateFacility(f.id.clone()));
            }
        }

        edges.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        for pair in edges.windows(2) {
            if pair[0].sort_key() == pair[1].sort_key() {
                return Err(IntegrityError::DuplicateEdge(pair[0].to_string()));
            }
        }

        let n = facilities.len();
        let mut adjacency: [LayerAdjacency; 4] = Default::default();
        for adj in adjacency.iter_mut() {
            adj.outgoing = vec![Vec::new(); n];
            adj.incoming = vec![Vec::new(); n];
        }

        for edge in &edges {
            let resolve = |id: &FacilityId| {
                index
                    .get(id.as_str())
                    .copied()
                    .ok_or_else(|| IntegrityError::DanglingEndpoint { edge: edge.to_string(), missing: id.clone() })
            };
            let src = resolve(&edge.from)?;
            let dst = resolve(&edge.to)?;
            if !(edge.weight.is_finite() && edge.weight > 0.0) {
                return Err(IntegrityError::NonPositiveWeight { edge: edge.to_string(), weight: edge.weight });
            }
            if !edge.layer.accepts_source(&facilities[src]) || !edge.layer.accepts_target(&facilities[dst]) {
                return Err(IntegrityError::KindMismatch {
                    edge: edge.to_string(),
                    layer: edge.layer,
                    from_kind: facilities[src].kind,
                    to_kind: facilities[dst].kind,
                });
            }
            let adj = &mut adjacency[edge.layer.index()];
            adj.outgoing[src].push(Link { neighbor: edge.to.clone(), weight: edge.weight });
            adj.incoming[dst].push(Link { neighbor: edge.from.clone(), weight: edge.weight });
        }

        for adj in adjacency.iter_mut() {
            // Edges are sorted by (from, to), so outgoing lists are already ordered.
            for list in adj.incoming.iter_mut() {
                list.sort_by(|a, b| a.neighbor.cmp(&b.neighbor));
            }
            let weights: Vec<f64> = adj.outgoing.iter().flatten().map(|l| l.weight).collect();
            adj.total = view::ascending_sum(weights);
        }

        if single_allocation {
            for (i, f) in facilities.iter().enumerate() {
                if f.kind != FacilityKind::Retailer {
                    continue;
                }
                let inbound = adjacency[Layer::ForwardDCtoRe.index()].incoming[i].len();
                let outbound = adjacency[Layer::ReverseRetoDC.index()].outgoing[i].len();
                for (layer, count) in [(Layer::ForwardDCtoRe, inbound), (Layer::ReverseRetoDC, outbound)] {
                    if count > 1 {
                        return Err(IntegrityError::SingleAllocation { retailer: f.id.clone(), layer, count });
                    }
                }
            }
        }

        Ok(ClscNetwork { facilities, index, edges, return_rate, single_allocation, adjacency })
    }

    /// Facilities in id order.
    pub fn facilities(&self) -> &[Facility] {
        &self.facilities
    }

    pub fn facility(&self, id: &str) -> Option<&Facility> {
        self.index.get(id).map(|&i| &self.facilities[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Edges ordered by (layer, from, to).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_in(&self, layer: Layer) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.layer == layer)
    }

    pub fn return_rate(&self) -> Option<f64> {
        self.return_rate
    }

    pub fn single_allocation(&self) -> bool {
        self.single_allocation
    }

    pub fn count_of(&self, kind: FacilityKind) -> usize {
        self.facilities.iter().filter(|f| f.kind == kind).count()
    }

    /// Sum of all edge weights in `layer`.
    pub fn layer_total(&self, layer: Layer) -> f64 {
        self.adjacency[layer.index()].total
    }

    pub fn layer_view(&self, layer: Layer) -> LayerView<'_> {
        LayerView::new(self, layer)
    }

    /// Facilities that have at least one edge in any of `layers`.
    pub fn participants(&self, layers: &[Layer]) -> BTreeSet<&FacilityId> {
        self.edges.iter().filter(|e| layers.contains(&e.layer)).flat_map(|e| [&e.from, &e.to]).collect()
    }

    fn slot(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    fn adjacency(&self, layer: Layer) -> &LayerAdjacency {
        &self.adjacency[layer.index()]
    }
}

impl PartialEq for ClscNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.facilities == other.facilities
            && self.edges == other.edges
            && self.return_rate == other.return_rate
            && self.single_allocation == other.single_allocation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> (Vec<Facility>, Vec<Edge>) {
        (
            vec![Facility::manufacturer("M1", 100.0), Facility::distribution_center("DC1"), Facility::retailer("R1")],
            vec![Edge::new("M1", "DC1", Layer::ForwardMtoDC, 10.0), Edge::new("DC1", "R1", Layer::ForwardDCtoRe, 10.0)],
        )
    }

    #[test]
    fn layer_endpoint_kinds() {
        assert_eq!(Layer::ForwardMtoDC.source_kind(), FacilityKind::Manufacturer);
        assert_eq!(Layer::ReverseDCtoRM.target_kind(), FacilityKind::Manufacturer);
        assert_eq!(Layer::parse("re_dc"), Some(Layer::ReverseRetoDC));
        assert_eq!(Layer::parse("x"), None);
    }

    #[test]
    fn rejects_duplicate_facility() {
        let (mut f, e) = chain();
        f.push(Facility::retailer("R1"));
        let err = ClscNetwork::new(f, e, None, false).unwrap_err();
        assert_eq!(err, IntegrityError::DuplicateFacility("R1".into()));
    }

    #[test]
    fn rejects_zero_weight() {
        let (f, mut e) = chain();
        e[1].weight = 0.0;
        let err = ClscNetwork::new(f, e, None, false).unwrap_err();
        assert!(matches!(err, IntegrityError::NonPositiveWeight { ref edge, .. } if edge == "dc_re:DC1->R1"));
    }

    #[test]
    fn rejects_nan_weight() {
        let (f, mut e) = chain();
        e[0].weight = f64::NAN;
        assert!(matches!(ClscNetwork::new(f, e, None, false), Err(IntegrityError::NonPositiveWeight { .. })));
    }

    #[test]
    fn rejects_duplicate_edge() {
        let (f, mut e) = chain();
        e.push(Edge::new("M1", "DC1", Layer::ForwardMtoDC, 3.0));
        assert!(matches!(ClscNetwork::new(f, e, None, false), Err(IntegrityError::DuplicateEdge(_))));
    }

    #[test]
    fn same_pair_in_two_layers_is_not_a_duplicate() {
        let (mut f, mut e) = chain();
        f[0] = Facility::remanufacturer("M1", 100.0, 10.0);
        e.push(Edge::new("R1", "DC1", Layer::ReverseRetoDC, 1.0));
        e.push(Edge::new("DC1", "M1", Layer::ReverseDCtoRM, 1.0));
        assert!(ClscNetwork::new(f, e, Some(0.1), true).is_ok());
    }

    #[test]
    fn rejects_dangling_endpoint() {
        let (f, mut e) = chain();
        e.push(Edge::new("DC1", "R9", Layer::ForwardDCtoRe, 1.0));
        let err = ClscNetwork::new(f, e, None, false).unwrap_err();
        assert!(matches!(err, IntegrityError::DanglingEndpoint { ref missing, .. } if missing.as_str() == "R9"));
    }

    #[test]
    fn rejects_kind_mismatch() {
        let (f, mut e) = chain();
        e.push(Edge::new("M1", "R1", Layer::ForwardDCtoRe, 1.0));
        assert!(matches!(ClscNetwork::new(f, e, None, false), Err(IntegrityError::KindMismatch { .. })));
    }

    #[test]
    fn returns_only_reach_remanufacturers() {
        let (f, mut e) = chain();
        e.push(Edge::new("DC1", "M1", Layer::ReverseDCtoRM, 1.0));
        assert!(matches!(ClscNetwork::new(f, e, None, false), Err(IntegrityError::KindMismatch { .. })));
    }

    #[test]
    fn facility_capacity_invariants() {
        let mut dc = Facility::distribution_center("DC1");
        dc.manufacturing_capacity = Some(5.0);
        assert!(dc.check().is_err());

        let mut m = Facility::manufacturer("M1", 1.0);
        m.manufacturing_capacity = None;
        assert!(m.check().is_err());

        let mut m = Facility::manufacturer("M1", 1.0);
        m.remanufacturing_capacity = Some(1.0);
        assert!(m.check().is_err());

        let mut r = Facility::retailer("R1");
        r.can_remanufacture = true;
        assert!(r.check().is_err());

        assert!(Facility::manufacturer("M1", -1.0).check().is_err());
        assert!(Facility::remanufacturer("M1", 1.0, 0.0).check().is_ok());
    }

    #[test]
    fn single_allocation_is_enforced() {
        let (mut f, mut e) = chain();
        f.push(Facility::distribution_center("DC2"));
        e.push(Edge::new("DC2", "R1", Layer::ForwardDCtoRe, 1.0));
        let err = ClscNetwork::new(f.clone(), e.clone(), None, true).unwrap_err();
        assert!(matches!(err, IntegrityError::SingleAllocation { count: 2, .. }));
        assert!(ClscNetwork::new(f, e, None, false).is_ok());
    }

    #[test]
    fn rejects_bad_return_rate() {
        let (f, e) = chain();
        assert_eq!(ClscNetwork::new(f, e, Some(1.5), false).unwrap_err(), IntegrityError::InvalidReturnRate(1.5));
    }

    #[test]
    fn isolated_facilities_survive() {
        let (mut f, e) = chain();
        f.push(Facility::distribution_center("DC9"));
        let net = ClscNetwork::new(f, e, None, false).unwrap();
        assert!(net.contains("DC9"));
        assert_eq!(net.facilities().len(), 4);
        assert!(!net.participants(&Layer::ALL).contains(&FacilityId::from("DC9")));
    }

    #[test]
    fn layer_totals() {
        let (f, e) = chain();
        let net = ClscNetwork::new(f, e, None, false).unwrap();
        assert_eq!(net.layer_total(Layer::ForwardMtoDC), 10.0);
        assert_eq!(net.layer_total(Layer::ReverseRetoDC), 0.0);
    }

    #[test]
    fn ids_sort_naturally() {
        let mut ids: Vec<FacilityId> =
            ["DC115", "R2", "DC8", "DC33", "M1", "DC08", "R10", "DC"].map(FacilityId::from).to_vec();
        ids.sort();
        let got: Vec<&str> = ids.iter().map(FacilityId::as_str).collect();
        assert_eq!(got, ["DC", "DC08", "DC8", "DC33", "DC115", "M1", "R2", "R10"]);
    }
}
