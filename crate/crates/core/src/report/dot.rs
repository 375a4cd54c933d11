//! Graphviz export. Edge thickness grows linearly with flow.

use std::io::{self, Write};

use crate::network::{ClscNetwork, FacilityKind, FlowDirection};

/// Thinnest edge drawn.
pub const PENWIDTH_MIN: f64 = 0.5;
/// Added to `PENWIDTH_MIN` for the heaviest edge.
pub const PENWIDTH_SPAN: f64 = 4.0;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn node_style(kind: FacilityKind) -> &'static str {
    match kind {
        FacilityKind::Manufacturer => "shape=box",
        FacilityKind::DistributionCenter => "shape=ellipse",
        FacilityKind::Retailer => "shape=point, width=0.08",
    }
}

pub fn penwidth(weight: f64, max_weight: f64) -> f64 {
    PENWIDTH_MIN + PENWIDTH_SPAN * (weight / max_weight)
}

/// Writes the two layers of `direction` as one digraph. Only facilities with
/// an edge in those layers are drawn, ordered by id; edges follow layer then
/// endpoint order.
pub fn render_dot<W: Write>(net: &ClscNetwork, direction: FlowDirection, mut sink: W) -> io::Result<()> {
    let layers = direction.layers();
    let name = match direction {
        FlowDirection::Forward => "forward",
        FlowDirection::Reverse => "reverse",
    };
    let edges: Vec<_> = net.edges().iter().filter(|e| layers.contains(&e.layer)).collect();
    let max_weight = edges.iter().map(|e| e.weight).fold(0.0, f64::max);

    writeln!(sink, "digraph {name} {{")?;
    writeln!(sink, "  rankdir=LR;")?;
    for id in net.participants(&layers) {
        let f = net.facility(id.as_str()).expect("participants belong to the network");
        writeln!(sink, "  {} [{}, label={}];", quote(id.as_str()), node_style(f.kind), quote(f.display_name()))?;
    }
    for e in edges {
        writeln!(
            sink,
            "  {} -> {} [penwidth={:.3}, label=\"{}\", class=\"{}\"];",
            quote(e.from.as_str()),
            quote(e.to.as_str()),
            penwidth(e.weight, max_weight),
            e.weight,
            e.layer
        )?;
    }
    writeln!(sink, "}}")
}
