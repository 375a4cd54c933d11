//! Seeded generator for synthetic networks that satisfy every flow rule.
//!
//! # Random stream
//!
//! The generator is ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`), seeded
//! with `SeedableRng::seed_from_u64(seed)` from `rand_core` 0.6 (the 64-bit
//! seed is expanded to the 32-byte key with PCG32). A uniform draw is
//! `(next_u64() >> 11) * 2^-53`, a value in `[0, 1)`. Draws are taken in
//! this order:
//!
//! 1. one attractiveness `0.5 + u` per DC, in id order;
//! 2. per retailer, in id order: its demand `min + u * (max - min)`; then, only
//!    when `single_allocation` is false and there are two or more DCs, a
//!    split draw (split if `u < 0.5`) and, for split retailers, the share
//!    `0.2 + 0.6 * u` kept by the first DC.
//!
//! # Construction
//!
//! Retailers are handed to DCs by smooth weighted round-robin over the
//! attractiveness values (each step adds every weight to its counter, picks
//! the largest counter, lowest index on ties, and subtracts the weight sum
//! from it). A split retailer takes the next pick as its second DC.
//! Manufacturer supply is allocated DC by DC in descending demand order,
//! always from the manufacturer with the most remaining capacity, where
//! each starts with `total / n_manufacturers * (1 + capacity_slack)`.
//! Returns equal `return_rate` times each forward edge and go back to the
//! same DC, then on to the first `n_remanufacturers` manufacturers in the
//! same greedy way. Declared capacities are the nominal ones, raised to the
//! allocated volume where rounding pushed it a hair above.
//!
//! The allocation is greedy, not cost-optimal.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{ascending_sum, ClscNetwork, Edge, Facility, Layer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub n_manufacturers: usize,
    pub n_dcs: usize,
    pub n_retailers: usize,
    pub n_remanufacturers: usize,
    /// Inclusive lower and exclusive upper bound of retailer demand.
    pub demand_range: (f64, f64),
    pub return_rate: f64,
    pub capacity_slack: f64,
    pub single_allocation: bool,
    pub seed: u64,
}

impl GenSpec {
    /// Five manufacturers (three remanufacture), ten DCs, fifty retailers,
    /// ten percent returns.
    pub fn case_study_shape(seed: u64) -> Self {
        GenSpec {
            n_manufacturers: 5,
            n_dcs: 10,
            n_retailers: 50,
            n_remanufacturers: 3,
            demand_range: (10_000.0, 200_000.0),
            return_rate: 0.10,
            capacity_slack: 0.10,
            single_allocation: true,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::InvalidSpec(msg));
        if self.n_manufacturers == 0 || self.n_dcs == 0 || self.n_retailers == 0 {
            return bad("facility counts must be positive".into());
        }
        if self.n_remanufacturers > self.n_manufacturers {
            return bad(format!(
                "n_remanufacturers ({}) exceeds n_manufacturers ({})",
                self.n_remanufacturers, self.n_manufacturers
            ));
        }
        let (lo, hi) = self.demand_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return bad(format!("demand_range must satisfy 0 < min <= max, got ({lo}, {hi})"));
        }
        if !(0.0..=1.0).contains(&self.return_rate) {
            return bad(format!("return_rate must lie in [0, 1], got {}", self.return_rate));
        }
        if !(self.capacity_slack.is_finite() && self.capacity_slack >= 0.0) {
            return bad(format!("capacity_slack must be >= 0, got {}", self.capacity_slack));
        }
        if self.return_rate > 0.0 && self.n_remanufacturers == 0 {
            return Err(GenError::Infeasible(
                "returns are generated but there is no remanufacturer to take them".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}

struct Uniform(ChaCha8Rng);

impl Uniform {
    fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    let width = n.to_string().len();
    (1..=n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

struct RoundRobin {
    weights: Vec<f64>,
    current: Vec<f64>,
    total: f64,
}

impl RoundRobin {
    fn new(weights: Vec<f64>) -> Self {
        let total = ascending_sum(weights.clone());
        RoundRobin { current: vec![0.0; weights.len()], weights, total }
    }

    fn pick(&mut self) -> usize {
        let mut best = 0;
        for i in 0..self.weights.len() {
            self.current[i] += self.weights[i];
            if self.current[i] > self.current[best] {
                best = i;
            }
        }
        self.current[best] -= self.total;
        best
    }
}

/// Splits each demand over suppliers, largest remaining capacity first.
/// Returns `flows[supplier][demand]`. Leftovers below a relative epsilon are
/// folded into the current supplier rather than opening a sliver edge.
fn greedy(demands: &[f64], n_suppliers: usize, capacity: f64) -> Vec<Vec<f64>> {
    let mut flows = vec![vec![0.0; demands.len()]; n_suppliers];
    let mut remaining = vec![capacity; n_suppliers];
    let eps = 1e-9 * capacity.max(1.0);
    let mut order: Vec<usize> = (0..demands.len()).collect();
    order.sort_by(|&a, &b| demands[b].total_cmp(&demands[a]).then(a.cmp(&b)));
    for d in order {
        let mut need = demands[d];
        while need > 0.0 {
            let mut m = 0;
            for i in 1..n_suppliers {
                if remaining[i] > remaining[m] {
                    m = i;
                }
            }
            if remaining[m] >= need - eps || remaining[m] <= eps {
                flows[m][d] += need;
                remaining[m] -= need;
                need = 0.0;
            } else {
                flows[m][d] += remaining[m];
                need -= remaining[m];
                remaining[m] = 0.0;
            }
        }
    }
    flows
}

pub fn generate(spec: &GenSpec) -> Result<ClscNetwork, GenError> {
    spec.validate()?;
    let mut rng = Uniform(ChaCha8Rng::seed_from_u64(spec.seed));
    let m_ids = ids("M", spec.n_manufacturers);
    let dc_ids = ids("DC", spec.n_dcs);
    let r_ids = ids("R", spec.n_retailers);

    let attractiveness: Vec<f64> = (0..spec.n_dcs).map(|_| 0.5 + rng.next()).collect();
    let mut rr = RoundRobin::new(attractiveness);
    let (lo, hi) = spec.demand_range;
    let can_split = !spec.single_allocation && spec.n_dcs >= 2;

    // (retailer, dc, flow)
    let mut supply: Vec<(usize, usize, f64)> = Vec::new();
    for r in 0..spec.n_retailers {
        let demand = lo + rng.next() * (hi - lo);
        let first = rr.pick();
        let split = can_split && rng.next() < 0.5;
        if split {
            let kept = 0.2 + 0.6 * rng.next();
            let second = rr.pick();
            if second != first {
                let a = demand * kept;
                supply.push((r, first, a));
                supply.push((r, second, demand - a));
                continue;
            }
        }
        supply.push((r, first, demand));
    }

    let mut dc_demand = vec![Vec::new(); spec.n_dcs];
    for &(_, dc, w) in &supply {
        dc_demand[dc].push(w);
    }
    let dc_demand: Vec<f64> = dc_demand.into_iter().map(ascending_sum).collect();
    let total_demand = ascending_sum(dc_demand.clone());
    let nominal_cap = total_demand / spec.n_manufacturers as f64 * (1.0 + spec.capacity_slack);
    let m_flows = greedy(&dc_demand, spec.n_manufacturers, nominal_cap);

    let mut edges = Vec::new();
    for (m, row) in m_flows.iter().enumerate() {
        for (dc, &w) in row.iter().enumerate() {
            if w > 0.0 {
                edges.push(Edge::new(&m_ids[m], &dc_ids[dc], Layer::ForwardMtoDC, w));
            }
        }
    }
    for &(r, dc, w) in &supply {
        edges.push(Edge::new(&dc_ids[dc], &r_ids[r], Layer::ForwardDCtoRe, w));
    }

    let mut reman_flows = vec![vec![0.0; spec.n_dcs]; spec.n_remanufacturers];
    let mut nominal_reman = 0.0;
    if spec.return_rate > 0.0 {
        let mut dc_returns = vec![Vec::new(); spec.n_dcs];
        for &(r, dc, w) in &supply {
            let back = spec.return_rate * w;
            edges.push(Edge::new(&r_ids[r], &dc_ids[dc], Layer::ReverseRetoDC, back));
            dc_returns[dc].push(back);
        }
        let dc_returns: Vec<f64> = dc_returns.into_iter().map(ascending_sum).collect();
        let total_returns = ascending_sum(dc_returns.clone());
        nominal_reman = total_returns / spec.n_remanufacturers as f64 * (1.0 + spec.capacity_slack);
        reman_flows = greedy(&dc_returns, spec.n_remanufacturers, nominal_reman);
        for (m, row) in reman_flows.iter().enumerate() {
            for (dc, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    edges.push(Edge::new(&dc_ids[dc], &m_ids[m], Layer::ReverseDCtoRM, w));
                }
            }
        }
    }

    let positive = |row: &[f64]| ascending_sum(row.iter().copied().filter(|w| *w > 0.0).collect());
    let mut facilities = Vec::new();
    for (m, id) in m_ids.iter().enumerate() {
        let cap = nominal_cap.max(positive(&m_flows[m]));
        if m < spec.n_remanufacturers {
            let reman_cap = nominal_reman.max(positive(&reman_flows[m]));
            facilities.push(Facility::remanufacturer(id, cap, reman_cap));
        } else {
            facilities.push(Facility::manufacturer(id, cap));
        }
    }
    facilities.extend(dc_ids.iter().map(|id| Facility::distribution_center(id)));
    facilities.extend(r_ids.iter().map(|id| Facility::retailer(id)));

    let return_rate = (spec.return_rate > 0.0).then_some(spec.return_rate);
    ClscNetwork::new(facilities, edges, return_rate, spec.single_allocation)
        .map_err(|e| GenError::Infeasible(format!("generated network is inconsistent: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{validate_flows, FacilityKind, Tolerances};

    #[test]
    fn case_study_shape_is_valid() {
        let net = generate(&GenSpec::case_study_shape(7)).unwrap();
        let report = validate_flows(&net, &Tolerances::default());
        assert!(report.ok, "{:#?}", report.violations);
        assert_eq!(net.count_of(FacilityKind::Manufacturer), 5);
        assert_eq!(net.count_of(FacilityKind::DistributionCenter), 10);
        assert_eq!(net.count_of(FacilityKind::Retailer), 50);
        let view = net.layer_view(Layer::ForwardDCtoRe);
        for f in net.facilities().iter().filter(|f| f.kind == FacilityKind::Retailer) {
            assert_eq!(view.incoming(f.id.as_str()).unwrap().len(), 1);
        }
        assert_eq!(net.facilities().iter().filter(|f| f.can_remanufacture).count(), 3);
    }

    #[test]
    fn single_retailer() {
        let spec = GenSpec { n_retailers: 1, ..GenSpec::case_study_shape(1) };
        let net = generate(&spec).unwrap();
        assert_eq!(net.edges_in(Layer::ForwardDCtoRe).count(), 1);
        assert!(validate_flows(&net, &Tolerances::default()).ok);
    }

    #[test]
    fn same_seed_same_bytes() {
        let spec = GenSpec { single_allocation: false, ..GenSpec::case_study_shape(99) };
        assert_eq!(generate(&spec).unwrap().to_json(), generate(&spec).unwrap().to_json());
        let other = GenSpec { seed: 100, ..spec.clone() };
        assert_ne!(generate(&spec).unwrap().to_json(), generate(&other).unwrap().to_json());
    }

    #[test]
    fn split_allocation_still_validates() {
        let spec = GenSpec { single_allocation: false, ..GenSpec::case_study_shape(3) };
        let net = generate(&spec).unwrap();
        assert!(validate_flows(&net, &Tolerances::default()).ok);
        assert!(net.edges_in(Layer::ForwardDCtoRe).count() > 50);
    }

    #[test]
    fn zero_returns_have_no_reverse_edges() {
        let spec = GenSpec { return_rate: 0.0, n_remanufacturers: 0, ..GenSpec::case_study_shape(5) };
        let net = generate(&spec).unwrap();
        assert_eq!(net.return_rate(), None);
        assert!(net.edges().iter().all(|e| e.layer.is_forward()));
        assert!(validate_flows(&net, &Tolerances::default()).ok);
    }

    #[test]
    fn rejects_bad_specs() {
        let base = GenSpec::case_study_shape(0);
        let cases = [
            GenSpec { n_dcs: 0, ..base.clone() },
            GenSpec { n_remanufacturers: 6, ..base.clone() },
            GenSpec { demand_range: (5.0, 1.0), ..base.clone() },
            GenSpec { demand_range: (0.0, 1.0), ..base.clone() },
            GenSpec { return_rate: 1.5, ..base.clone() },
            GenSpec { capacity_slack: -0.1, ..base.clone() },
        ];
        for spec in cases {
            assert!(matches!(generate(&spec), Err(GenError::InvalidSpec(_))), "{spec:?}");
        }
        let no_reman = GenSpec { n_remanufacturers: 0, ..base };
        assert!(matches!(generate(&no_reman), Err(GenError::Infeasible(_))));
    }

    #[test]
    fn round_robin_follows_weights() {
        let mut rr = RoundRobin::new(vec![5.0, 1.0, 1.0]);
        let picks: Vec<usize> = (0..7).map(|_| rr.pick()).collect();
        assert_eq!(picks, [0, 0, 1, 0, 2, 0, 0]);
    }

    #[test]
    fn greedy_respects_capacity() {
        let flows = greedy(&[6.0, 3.0, 3.0], 2, 6.0);
        assert_eq!(flows[0], [6.0, 0.0, 0.0]);
        assert_eq!(flows[1], [0.0, 3.0, 3.0]);
    }
}
