//! Text, CSV, JSON and DOT renderings of metrics, findings and validation
//! results, and the on-disk report layout.

mod dot;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{curve_map, metrics_table, na, CumulativeCurve, CurveKey, Direction, MetricsRecord};
use crate::network::{
    validate_flows, ClscNetwork, FacilityId, FacilityKind, FlowDirection, Layer, Tolerances, ValidationReport,
};
use crate::risk::{analyze, Finding, RiskConfig, RiskError};

pub use dot::{penwidth, render_dot, PENWIDTH_MIN, PENWIDTH_SPAN};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Risk(#[from] RiskError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricsFormat {
    Table,
    Csv,
    Json,
}

/// Reducing factor as printed in tables: two decimals or `NA`.
pub fn rounded(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v:.2}"),
        None => na::NA.to_owned(),
    }
}

/// Flat row used by the CSV and JSON renderings. Carries the full-precision
/// reducing factors next to their two-decimal forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub facility: FacilityId,
    pub layer: Layer,
    pub kind: FacilityKind,
    pub c_in: usize,
    pub s_in: f64,
    #[serde(with = "na")]
    pub r_absorb: Option<f64>,
    pub r_absorb_2dp: String,
    pub c_out: usize,
    pub s_out: f64,
    #[serde(with = "na")]
    pub r_disperse: Option<f64>,
    pub r_disperse_2dp: String,
    pub share_in: f64,
    pub share_out: f64,
}

const METRICS_HEADER: [&str; 13] = [
    "facility",
    "layer",
    "kind",
    "c_in",
    "s_in",
    "r_absorb",
    "r_absorb_2dp",
    "c_out",
    "s_out",
    "r_disperse",
    "r_disperse_2dp",
    "share_in",
    "share_out",
];

impl From<&MetricsRecord> for MetricsRow {
    fn from(r: &MetricsRecord) -> Self {
        MetricsRow {
            facility: r.facility.clone(),
            layer: r.layer,
            kind: r.kind,
            c_in: r.c_in,
            s_in: r.s_in,
            r_absorb: r.r_absorb,
            r_absorb_2dp: rounded(r.r_absorb),
            c_out: r.c_out,
            s_out: r.s_out,
            r_disperse: r.r_disperse,
            r_disperse_2dp: rounded(r.r_disperse),
            share_in: r.share_in,
            share_out: r.share_out,
        }
    }
}

impl From<MetricsRow> for MetricsRecord {
    fn from(r: MetricsRow) -> Self {
        MetricsRecord {
            facility: r.facility,
            kind: r.kind,
            layer: r.layer,
            c_in: r.c_in,
            c_out: r.c_out,
            s_in: r.s_in,
            s_out: r.s_out,
            r_absorb: r.r_absorb,
            r_disperse: r.r_disperse,
            share_in: r.share_in,
            share_out: r.share_out,
        }
    }
}

pub fn render_metrics<W: Write>(
    records: &[MetricsRecord],
    format: MetricsFormat,
    mut sink: W,
) -> Result<(), ReportError> {
    match format {
        MetricsFormat::Table => sink.write_all(metrics_text(records).as_bytes())?,
        MetricsFormat::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            if records.is_empty() {
                w.write_record(METRICS_HEADER)?;
            }
            for r in records {
                w.serialize(MetricsRow::from(r))?;
            }
            w.flush()?;
        }
        MetricsFormat::Json => {
            let rows: Vec<MetricsRow> = records.iter().map(MetricsRow::from).collect();
            serde_json::to_writer_pretty(&mut sink, &rows)?;
            sink.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Reads back the CSV written by [`render_metrics`].
pub fn read_metrics_csv<R: Read>(source: R) -> Result<Vec<MetricsRecord>, csv::Error> {
    csv::Reader::from_reader(source).deserialize::<MetricsRow>().map(|row| row.map(MetricsRecord::from)).collect()
}

/// Reads back the JSON written by [`render_metrics`].
pub fn read_metrics_json<R: Read>(source: R) -> Result<Vec<MetricsRecord>, serde_json::Error> {
    let rows: Vec<MetricsRow> = serde_json::from_reader(source)?;
    Ok(rows.into_iter().map(MetricsRecord::from).collect())
}

fn layer_title(layer: Layer) -> &'static str {
    match layer {
        Layer::ForwardMtoDC => "forward: manufacturer -> distribution center",
        Layer::ForwardDCtoRe => "forward: distribution center -> retailer",
        Layer::ReverseRetoDC => "reverse: retailer -> distribution center",
        Layer::ReverseDCtoRM => "reverse: distribution center -> remanufacturer",
    }
}

fn amount(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn metrics_text(records: &[MetricsRecord]) -> String {
    const HEAD: [&str; 9] =
        ["facility", "c_in", "s_in", "r_absorb", "c_out", "s_out", "r_disperse", "share_in", "share_out"];
    let mut out = String::new();
    for layer in Layer::ALL {
        let in_layer: Vec<&MetricsRecord> = records.iter().filter(|r| r.layer == layer).collect();
        if in_layer.is_empty() {
            continue;
        }
        let rows: Vec<(FacilityKind, [String; 9])> = in_layer
            .iter()
            .map(|r| {
                (
                    r.kind,
                    [
                        r.facility.to_string(),
                        r.c_in.to_string(),
                        amount(r.s_in),
                        rounded(r.r_absorb),
                        r.c_out.to_string(),
                        amount(r.s_out),
                        rounded(r.r_disperse),
                        format!("{:.3}", r.share_in),
                        format!("{:.3}", r.share_out),
                    ],
                )
            })
            .collect();
        let mut widths = HEAD.map(str::len);
        for (_, cells) in &rows {
            for (w, c) in widths.iter_mut().zip(cells) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: &[&str]| {
            let mut s = String::new();
            for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
                if i == 0 {
                    let _ = write!(s, "{c:<w$}");
                } else {
                    let _ = write!(s, "  {c:>w$}");
                }
            }
            s.push('\n');
            s
        };

        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "== {} ({layer}) ==", layer_title(layer));
        out.push_str(&line(&HEAD));
        for kind in [FacilityKind::Manufacturer, FacilityKind::DistributionCenter, FacilityKind::Retailer] {
            let group: Vec<_> = rows.iter().filter(|(k, _)| *k == kind).collect();
            if group.is_empty() {
                continue;
            }
            let _ = writeln!(out, "-- {kind} --");
            for (_, cells) in group {
                let refs: Vec<&str> = cells.iter().map(String::as_str).collect();
                out.push_str(&line(&refs));
            }
        }
    }
    out
}

/// CSV with columns facility, layer, direction, x, y. Each curve starts at
/// the origin.
pub fn render_curves<W: Write>(curves: &BTreeMap<CurveKey, CumulativeCurve>, sink: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["facility", "layer", "direction", "x", "y"])?;
    for (key, curve) in curves {
        for p in &curve.points {
            w.write_record([
                key.facility.as_str(),
                key.layer.as_str(),
                key.direction.as_str(),
                &p.x.to_string(),
                &p.y.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Contents of `findings.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FindingsDocument {
    /// Set when the network failed flow validation and metrics were
    /// computed anyway.
    pub validation_dirty: bool,
    pub config: RiskConfig,
    pub findings: Vec<Finding>,
}

pub fn render_findings_json<W: Write>(doc: &FindingsDocument, mut sink: W) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut sink, doc)?;
    sink.write_all(b"\n")?;
    Ok(())
}

fn evidence_text(f: &Finding) -> String {
    f.evidence.iter().map(|e| format!("{}[{}]={}", e.metric, e.layer, e.value)).collect::<Vec<_>>().join(", ")
}

pub fn render_findings_md<W: Write>(doc: &FindingsDocument, mut sink: W) -> Result<(), ReportError> {
    let mut out = String::from("# Findings\n\n");
    if doc.validation_dirty {
        out.push_str("**Validation dirty:** the network failed flow validation; treat these findings with care.\n\n");
    }
    if doc.findings.is_empty() {
        out.push_str("No findings.\n");
    } else {
        out.push_str("| rule | severity | facility | layer | evidence | threshold | recommendation |\n");
        out.push_str("|---|---|---|---|---|---|---|\n");
        for f in &doc.findings {
            let threshold = f.threshold.as_ref().map(|t| format!("{} = {}", t.name, t.value)).unwrap_or_default();
            let _ = writeln!(
                out,
                "| {} {} | {} | {} | {} | {} | {} | {} |",
                f.rule,
                f.rule.name(),
                f.severity,
                f.facility,
                f.layer,
                evidence_text(f),
                threshold,
                f.recommendation
            );
        }
    }
    sink.write_all(out.as_bytes())?;
    Ok(())
}

/// Everything a full report contains, computed from one network.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub metrics: Vec<MetricsRecord>,
    pub findings: Vec<Finding>,
    pub validation: ValidationReport,
    pub curves: BTreeMap<CurveKey, CumulativeCurve>,
    pub config: RiskConfig,
}

/// File names written by [`ReportBundle::write_to_dir`], in write order.
pub const REPORT_FILES: [&str; 8] = [
    "metrics.csv",
    "metrics.json",
    "findings.json",
    "findings.md",
    "forward.dot",
    "reverse.dot",
    "curves.csv",
    "validation.json",
];

impl ReportBundle {
    pub fn build(net: &ClscNetwork, cfg: &RiskConfig, tol: &Tolerances) -> Result<Self, RiskError> {
        let metrics = metrics_table(net);
        let findings = analyze(&metrics, net, cfg)?;
        Ok(ReportBundle {
            findings,
            metrics,
            validation: validate_flows(net, tol),
            curves: curve_map(net),
            config: *cfg,
        })
    }

    pub fn findings_document(&self) -> FindingsDocument {
        FindingsDocument { validation_dirty: !self.validation.ok, config: self.config, findings: self.findings.clone() }
    }

    /// Curve for one facility, layer and direction, if it has two or more edges.
    pub fn curve(&self, facility: &str, layer: Layer, direction: Direction) -> Option<&CumulativeCurve> {
        self.curves.get(&CurveKey { facility: facility.into(), layer, direction })
    }

    /// Writes every file in [`REPORT_FILES`] into `dir`, creating it if
    /// needed. `net` must be the network the bundle was built from.
    pub fn write_to_dir(&self, net: &ClscNetwork, dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
        fs::create_dir_all(dir)?;
        let doc = self.findings_document();
        let mut written = Vec::new();
        for name in REPORT_FILES {
            let mut buf = Vec::new();
            match name {
                "metrics.csv" => render_metrics(&self.metrics, MetricsFormat::Csv, &mut buf)?,
                "metrics.json" => render_metrics(&self.metrics, MetricsFormat::Json, &mut buf)?,
                "findings.json" => render_findings_json(&doc, &mut buf)?,
                "findings.md" => render_findings_md(&doc, &mut buf)?,
                "forward.dot" => render_dot(net, FlowDirection::Forward, &mut buf)?,
                "reverse.dot" => render_dot(net, FlowDirection::Reverse, &mut buf)?,
                "curves.csv" => render_curves(&self.curves, &mut buf)?,
                "validation.json" => {
                    serde_json::to_writer_pretty(&mut buf, &self.validation)?;
                    buf.push(b'\n');
                }
                _ => unreachable!("unknown report file {name}"),
            }
            let path = dir.join(name);
            fs::write(&path, buf)?;
            written.push(path);
        }
        Ok(written)
    }
}
