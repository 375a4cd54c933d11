use serde::{Deserialize, Serialize};

use super::{ClscNetwork, Facility, FacilityId, Layer};

/// One side of an edge as seen from a facility: the facility at the other
/// end and the flow carried.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub neighbor: FacilityId,
    pub weight: f64,
}

/// Read-only adjacency of a single layer.
///
/// Every facility of the network is present; facilities without an edge in
/// the layer simply have empty link lists.
#[derive(Debug, Clone, Copy)]
pub struct LayerView<'a> {
    net: &'a ClscNetwork,
    layer: Layer,
}

impl<'a> LayerView<'a> {
    pub(super) fn new(net: &'a ClscNetwork, layer: Layer) -> Self {
        LayerView { net, layer }
    }

    pub fn layer(&self) -> Layer {
        self.layer
    }

    pub fn network(&self) -> &'a ClscNetwork {
        self.net
    }

    /// Links leaving `id`, ordered by neighbor id. `None` for unknown ids.
    pub fn outgoing(&self, id: &str) -> Option<&'a [Link]> {
        let slot = self.net.slot(id)?;
        Some(&self.net.adjacency(self.layer).outgoing[slot])
    }

    /// Links entering `id`, ordered by neighbor id. `None` for unknown ids.
    pub fn incoming(&self, id: &str) -> Option<&'a [Link]> {
        let slot = self.net.slot(id)?;
        Some(&self.net.adjacency(self.layer).incoming[slot])
    }

    /// All facilities with their (incoming, outgoing) links in this layer.
    pub fn iter(&self) -> impl Iterator<Item = (&'a Facility, &'a [Link], &'a [Link])> + 'a {
        let adj = self.net.adjacency(self.layer);
        self.net
            .facilities
            .iter()
            .enumerate()
            .map(move |(i, f)| (f, adj.incoming[i].as_slice(), adj.outgoing[i].as_slice()))
    }

    pub fn total(&self) -> f64 {
        self.net.layer_total(self.layer)
    }
}

/// Sum of link weights, accumulated smallest first.
pub fn total_weight(links: &[Link]) -> f64 {
    ascending_sum(links.iter().map(|l| l.weight).collect())
}

pub(crate) fn ascending_sum(mut weights: Vec<f64>) -> f64 {
    weights.sort_by(f64::total_cmp);
    // Folding from +0.0 keeps empty sums from printing as "-0".
    weights.iter().fold(0.0, |acc, w| acc + w)
}
