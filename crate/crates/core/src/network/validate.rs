//! Flow checks that are reported rather than enforced at load time.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::view::total_weight;
use super::{ClscNetwork, FacilityKind, Layer};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Allowed absolute gap between a DC's inbound and outbound volume.
    pub conservation_abs: f64,
    /// Allowed relative deviation of a retailer's returns from
    /// `return_rate × forward inflow`.
    pub return_rate_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { conservation_abs: 0.5, return_rate_rel: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    DcForwardConservation,
    DcReverseConservation,
    ReturnRate,
    ManufacturingCapacity,
    RemanufacturingCapacity,
}

impl ViolationCode {
    pub const ALL: [ViolationCode; 5] = [
        ViolationCode::DcForwardConservation,
        ViolationCode::DcReverseConservation,
        ViolationCode::ReturnRate,
        ViolationCode::ManufacturingCapacity,
        ViolationCode::RemanufacturingCapacity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::DcForwardConservation => "dc_forward_conservation",
            ViolationCode::DcReverseConservation => "dc_reverse_conservation",
            ViolationCode::ReturnRate => "return_rate",
            ViolationCode::ManufacturingCapacity => "manufacturing_capacity",
            ViolationCode::RemanufacturingCapacity => "remanufacturing_capacity",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    /// Facility the check was evaluated on.
    pub subject: String,
    pub message: String,
    pub measured: f64,
    pub expected: f64,
}

/// How many subjects a rule examined and how many failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub code: ViolationCode,
    pub evaluated: usize,
    pub failed: usize,
    /// False when the rule was not applicable, e.g. no return rate declared.
    pub ran: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub checks: Vec<CheckSummary>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn violations_of(&self, code: ViolationCode) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.code == code)
    }
}

struct Collector {
    checks: Vec<CheckSummary>,
    violations: Vec<Violation>,
}

impl Collector {
    fn begin(&mut self, code: ViolationCode, ran: bool) {
        self.checks.push(CheckSummary { code, evaluated: 0, failed: 0, ran });
    }

    fn record(&mut self, violation: Option<Violation>) {
        let summary = self.checks.last_mut().expect("begin() precedes record()");
        summary.evaluated += 1;
        if let Some(v) = violation {
            summary.failed += 1;
            self.violations.push(v);
        }
    }
}

/// Runs the five flow rules: DC conservation in both directions, per-retailer
/// return rate, and manufacturing / remanufacturing capacity. Problems are
/// collected, never raised.
pub fn validate_flows(net: &ClscNetwork, tol: &Tolerances) -> ValidationReport {
    let mut out = Collector { checks: Vec::new(), violations: Vec::new() };
    let strength_in = |layer: Layer, id: &str| total_weight(net.layer_view(layer).incoming(id).unwrap_or(&[]));
    let strength_out = |layer: Layer, id: &str| total_weight(net.layer_view(layer).outgoing(id).unwrap_or(&[]));
    let of_kind = |kind: FacilityKind| net.facilities().iter().filter(move |f| f.kind == kind);

    for (code, inbound, outbound) in [
        (ViolationCode::DcForwardConservation, Layer::ForwardMtoDC, Layer::ForwardDCtoRe),
        (ViolationCode::DcReverseConservation, Layer::ReverseRetoDC, Layer::ReverseDCtoRM),
    ] {
        out.begin(code, true);
        for dc in of_kind(FacilityKind::DistributionCenter) {
            let s_in = strength_in(inbound, dc.id.as_str());
            let s_out = strength_out(outbound, dc.id.as_str());
            let gap = (s_in - s_out).abs();
            out.record((gap > tol.conservation_abs).then(|| Violation {
                code,
                subject: dc.id.to_string(),
                message: format!(
                    "{} receives {s_in} via {inbound} but ships {s_out} via {outbound} (tolerance {})",
                    dc.id, tol.conservation_abs
                ),
                measured: gap,
                expected: 0.0,
            }));
        }
    }

    out.begin(ViolationCode::ReturnRate, net.return_rate().is_some());
    if let Some(rate) = net.return_rate() {
        for r in of_kind(FacilityKind::Retailer) {
            let forward = strength_in(Layer::ForwardDCtoRe, r.id.as_str());
            let returned = strength_out(Layer::ReverseRetoDC, r.id.as_str());
            let expected = rate * forward;
            let allowed = tol.return_rate_rel * expected;
            out.record(((returned - expected).abs() > allowed).then(|| Violation {
                code: ViolationCode::ReturnRate,
                subject: r.id.to_string(),
                message: format!(
                    "{} returns {returned}, expected {expected} ({rate} of {forward}) within {}%",
                    r.id,
                    tol.return_rate_rel * 100.0
                ),
                measured: returned,
                expected,
            }));
        }
    }

    out.begin(ViolationCode::ManufacturingCapacity, true);
    for m in of_kind(FacilityKind::Manufacturer) {
        let Some(cap) = m.manufacturing_capacity else { continue };
        let shipped = strength_out(Layer::ForwardMtoDC, m.id.as_str());
        out.record((shipped > cap).then(|| Violation {
            code: ViolationCode::ManufacturingCapacity,
            subject: m.id.to_string(),
            message: format!("{} ships {shipped}, above manufacturing capacity {cap}", m.id),
            measured: shipped,
            expected: cap,
        }));
    }

    out.begin(ViolationCode::RemanufacturingCapacity, true);
    for m in of_kind(FacilityKind::Manufacturer).filter(|m| m.can_remanufacture) {
        let Some(cap) = m.remanufacturing_capacity else { continue };
        let received = strength_in(Layer::ReverseDCtoRM, m.id.as_str());
        out.record((received > cap).then(|| Violation {
            code: ViolationCode::RemanufacturingCapacity,
            subject: m.id.to_string(),
            message: format!("{} receives {received} returns, above remanufacturing capacity {cap}", m.id),
            measured: received,
            expected: cap,
        }));
    }

    ValidationReport { ok: out.violations.is_empty(), checks: out.checks, violations: out.violations }
}
