//! Rule engine that flags critical and high-risk facilities from their
//! metrics records.
//!
//! Rules and default severities:
//!
//! | id | name                  | severity | fires when |
//! |----|-----------------------|----------|------------|
//! | R1 | single_source_risk    | warning  | a DC has exactly one supplying manufacturer |
//! | R2 | fan_out_concentration | critical | a DC serves at least `fanout_min` retailers but has at most one supplier |
//! | R3 | flow_concentration    | critical | inbound or outbound share of a layer is at least `share_high` |
//! | R4 | low_involvement       | info     | a nonzero share is at most `share_low` |
//! | R5 | imbalanced_flow       | warning  | a reported reducing factor is at most `r_low` |
//! | R6 | capacity_saturation   | warning  | (re)manufacturing volume reaches `1 - utilization_eps` of capacity |
//! | R7 | redundant_capacity    | info     | manufacturing volume stays below that level |
//! | R8 | dual_role_critical    | critical | R2, R3 or R6 hits in both a forward and a reverse layer |

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{Direction, MetricsRecord};
use crate::network::{ClscNetwork, FacilityId, FacilityKind, FlowDirection, Layer};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiskError {
    #[error("invalid risk config: {0}")]
    InvalidConfig(String),
    #[error("metrics record refers to facility `{0}`, which is not in the network")]
    UnknownFacility(FacilityId),
}

/// Thresholds for the rule set. Every field is optional in the JSON form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RiskConfig {
    pub share_high: f64,
    pub share_low: f64,
    pub r_low: f64,
    pub fanout_min: usize,
    pub utilization_eps: f64,
}

impl Default for RiskConfig {
    fn default() -> Self {
        RiskConfig { share_high: 0.30, share_low: 0.02, r_low: 0.60, fanout_min: 5, utilization_eps: 0.005 }
    }
}

impl RiskConfig {
    pub fn validate(&self) -> Result<(), RiskError> {
        let bad = |msg: String| Err(RiskError::InvalidConfig(msg));
        if !(0.0 <= self.share_low && self.share_low < self.share_high && self.share_high <= 1.0) {
            return bad(format!(
                "need 0 <= share_low < share_high <= 1, got share_low={} share_high={}",
                self.share_low, self.share_high
            ));
        }
        if !(self.r_low > 0.0 && self.r_low <= 1.0) {
            return bad(format!("need 0 < r_low <= 1, got {}", self.r_low));
        }
        if self.fanout_min < 2 {
            return bad(format!("need fanout_min >= 2, got {}", self.fanout_min));
        }
        if !(0.0..1.0).contains(&self.utilization_eps) {
            return bad(format!("need 0 <= utilization_eps < 1, got {}", self.utilization_eps));
        }
        Ok(())
    }

    /// Parses and validates a JSON config; absent fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self, RiskError> {
        let cfg: RiskConfig = serde_json::from_str(text).map_err(|e| RiskError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "R1")]
    SingleSourceRisk,
    #[serde(rename = "R2")]
    FanOutConcentration,
    #[serde(rename = "R3")]
    FlowConcentration,
    #[serde(rename = "R4")]
    LowInvolvement,
    #[serde(rename = "R5")]
    ImbalancedFlow,
    #[serde(rename = "R6")]
    CapacitySaturation,
    #[serde(rename = "R7")]
    RedundantCapacity,
    #[serde(rename = "R8")]
    DualRoleCritical,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::SingleSourceRisk,
        Rule::FanOutConcentration,
        Rule::FlowConcentration,
        Rule::LowInvolvement,
        Rule::ImbalancedFlow,
        Rule::CapacitySaturation,
        Rule::RedundantCapacity,
        Rule::DualRoleCritical,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Rule::SingleSourceRisk => "R1",
            Rule::FanOutConcentration => "R2",
            Rule::FlowConcentration => "R3",
            Rule::LowInvolvement => "R4",
            Rule::ImbalancedFlow => "R5",
            Rule::CapacitySaturation => "R6",
            Rule::RedundantCapacity => "R7",
            Rule::DualRoleCritical => "R8",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::SingleSourceRisk => "single_source_risk",
            Rule::FanOutConcentration => "fan_out_concentration",
            Rule::FlowConcentration => "flow_concentration",
            Rule::LowInvolvement => "low_involvement",
            Rule::ImbalancedFlow => "imbalanced_flow",
            Rule::CapacitySaturation => "capacity_saturation",
            Rule::RedundantCapacity => "redundant_capacity",
            Rule::DualRoleCritical => "dual_role_critical",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Rule::FanOutConcentration | Rule::FlowConcentration | Rule::DualRoleCritical => Severity::Critical,
            Rule::SingleSourceRisk | Rule::ImbalancedFlow | Rule::CapacitySaturation => Severity::Warning,
            Rule::LowInvolvement | Rule::RedundantCapacity => Severity::Info,
        }
    }

    pub fn recommendation(self) -> &'static str {
        match self {
            Rule::SingleSourceRisk => {
                "Qualify a second supplying manufacturer so one plant outage cannot cut this facility off."
            }
            Rule::FanOutConcentration => {
                "Add inbound sourcing or move some retailers to other distribution centers; an outage here strands many downstream sites."
            }
            Rule::FlowConcentration => {
                "Plan storage, staffing and contingency capacity for this facility; it handles a large part of the layer's volume."
            }
            Rule::LowInvolvement => "Small share of the layer's volume; check whether this link can take on more flow.",
            Rule::ImbalancedFlow => {
                "Flow is concentrated on few links; rebalance allocations to simplify transport planning."
            }
            Rule::CapacitySaturation => {
                "Running at capacity leaves no room for demand swings or backup duty; schedule capacity and maintenance closely."
            }
            Rule::RedundantCapacity => "Spare capacity can back up other facilities during a disruption.",
            Rule::DualRoleCritical => {
                "Critical in both forward and reverse logistics; give it priority in monitoring and resource planning."
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Critical,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Critical => "critical",
        })
    }
}

/// A metric value copied verbatim from the record it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub metric: String,
    pub layer: Layer,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub facility: FacilityId,
    pub layer: Layer,
    pub rule: Rule,
    pub severity: Severity,
    pub evidence: Vec<Evidence>,
    /// Threshold the evidence was compared against; absent for composite rules.
    pub threshold: Option<Threshold>,
    pub recommendation: String,
}

impl Finding {
    fn new(rec: &MetricsRecord, rule: Rule, evidence: Vec<Evidence>, threshold: Option<Threshold>) -> Self {
        Finding {
            facility: rec.facility.clone(),
            layer: rec.layer,
            rule,
            severity: rule.severity(),
            evidence,
            threshold,
            recommendation: rule.recommendation().to_owned(),
        }
    }

    fn sort_key(&self) -> (Rule, Layer, &FacilityId) {
        (self.rule, self.layer, &self.facility)
    }
}

fn ev(rec: &MetricsRecord, metric: &str, value: f64) -> Evidence {
    Evidence { metric: metric.to_owned(), layer: rec.layer, value }
}

fn threshold(name: &str, value: f64) -> Option<Threshold> {
    Some(Threshold { name: name.to_owned(), value })
}

const SHARE: [(Direction, &str); 2] = [(Direction::In, "share_in"), (Direction::Out, "share_out")];
const REDUCING: [(Direction, &str); 2] = [(Direction::In, "r_absorb"), (Direction::Out, "r_disperse")];

/// Forward layer in which facilities of `kind` receive goods.
fn supply_layer(kind: FacilityKind) -> Option<Layer> {
    match kind {
        FacilityKind::DistributionCenter => Some(Layer::ForwardMtoDC),
        FacilityKind::Retailer => Some(Layer::ForwardDCtoRe),
        FacilityKind::Manufacturer => None,
    }
}

/// Applies every rule to `records` (as produced by
/// [`metrics_table`](crate::metrics::metrics_table) on `net`). Findings are
/// ordered by (rule, layer, facility).
pub fn analyze(records: &[MetricsRecord], net: &ClscNetwork, cfg: &RiskConfig) -> Result<Vec<Finding>, RiskError> {
    cfg.validate()?;
    if let Some(rec) = records.iter().find(|r| !net.contains(r.facility.as_str())) {
        return Err(RiskError::UnknownFacility(rec.facility.clone()));
    }
    let by_key: HashMap<(&str, Layer), &MetricsRecord> =
        records.iter().map(|r| ((r.facility.as_str(), r.layer), r)).collect();

    let mut findings = Vec::new();
    for rec in records {
        let facility = net.facility(rec.facility.as_str()).expect("checked above");

        // R1
        if rec.layer == Layer::ForwardMtoDC && rec.kind == FacilityKind::DistributionCenter && rec.c_in == 1 {
            findings.push(Finding::new(
                rec,
                Rule::SingleSourceRisk,
                vec![ev(rec, "c_in", rec.c_in as f64)],
                threshold("c_in", 1.0),
            ));
        }

        // R2
        if rec.layer.is_forward() && rec.c_out >= cfg.fanout_min {
            let upstream = supply_layer(rec.kind).and_then(|l| by_key.get(&(rec.facility.as_str(), l)));
            if let Some(up) = upstream.filter(|up| up.c_in <= 1) {
                findings.push(Finding::new(
                    rec,
                    Rule::FanOutConcentration,
                    vec![ev(rec, "c_out", rec.c_out as f64), ev(up, "c_in", up.c_in as f64)],
                    threshold("fanout_min", cfg.fanout_min as f64),
                ));
            }
        }

        // R3, R4
        let high: Vec<Evidence> = SHARE
            .iter()
            .filter(|(d, _)| rec.share(*d) >= cfg.share_high)
            .map(|(d, name)| ev(rec, name, rec.share(*d)))
            .collect();
        if !high.is_empty() {
            findings.push(Finding::new(rec, Rule::FlowConcentration, high, threshold("share_high", cfg.share_high)));
        }
        let low: Vec<Evidence> = SHARE
            .iter()
            .filter(|(d, _)| rec.share(*d) > 0.0 && rec.share(*d) <= cfg.share_low)
            .map(|(d, name)| ev(rec, name, rec.share(*d)))
            .collect();
        if !low.is_empty() {
            findings.push(Finding::new(rec, Rule::LowInvolvement, low, threshold("share_low", cfg.share_low)));
        }

        // R5
        let unbalanced: Vec<Evidence> = REDUCING
            .iter()
            .filter_map(|(d, name)| rec.reducing(*d).filter(|r| *r <= cfg.r_low).map(|r| ev(rec, name, r)))
            .collect();
        if !unbalanced.is_empty() {
            findings.push(Finding::new(rec, Rule::ImbalancedFlow, unbalanced, threshold("r_low", cfg.r_low)));
        }

        // R6, R7
        let floor = 1.0 - cfg.utilization_eps;
        if rec.layer == Layer::ForwardMtoDC {
            if let Some(cap) = facility.manufacturing_capacity.filter(|c| *c > 0.0) {
                let limit = floor * cap;
                let evidence = vec![ev(rec, "s_out", rec.s_out)];
                let t = threshold("(1 - utilization_eps) * manufacturing_capacity", limit);
                if rec.s_out >= limit {
                    findings.push(Finding::new(rec, Rule::CapacitySaturation, evidence, t));
                } else {
                    findings.push(Finding::new(rec, Rule::RedundantCapacity, evidence, t));
                }
            }
        }
        if rec.layer == Layer::ReverseDCtoRM && facility.can_remanufacture {
            if let Some(cap) = facility.remanufacturing_capacity.filter(|c| *c > 0.0) {
                let limit = floor * cap;
                if rec.s_in >= limit {
                    findings.push(Finding::new(
                        rec,
                        Rule::CapacitySaturation,
                        vec![ev(rec, "s_in", rec.s_in)],
                        threshold("(1 - utilization_eps) * remanufacturing_capacity", limit),
                    ));
                }
            }
        }
    }

    // R8
    let mut roles: BTreeMap<&FacilityId, Vec<&Finding>> = BTreeMap::new();
    for f in findings
        .iter()
        .filter(|f| matches!(f.rule, Rule::FanOutConcentration | Rule::FlowConcentration | Rule::CapacitySaturation))
    {
        roles.entry(&f.facility).or_default().push(f);
    }
    let mut dual = Vec::new();
    for (facility, mut hits) in roles {
        let reverse_layer = hits.iter().map(|f| f.layer).filter(|l| l.flow() == FlowDirection::Reverse).min();
        let has_forward = hits.iter().any(|f| f.layer.is_forward());
        if let (true, Some(layer)) = (has_forward, reverse_layer) {
            hits.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
            let rule = Rule::DualRoleCritical;
            dual.push(Finding {
                facility: facility.clone(),
                layer,
                rule,
                severity: rule.severity(),
                evidence: hits.iter().flat_map(|f| f.evidence.iter().cloned()).collect(),
                threshold: None,
                recommendation: rule.recommendation().to_owned(),
            });
        }
    }
    findings.extend(dual);

    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(findings)
}
