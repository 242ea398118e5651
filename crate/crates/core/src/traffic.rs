//! Inter-chiplet traffic simulation.
//!
//! A lightweight packet-count model: wirelength maps to a discrete
//! latency weight through a piecewise-constant table, workloads are
//! either explicit flow lists or seeded synthetic generators, and a run
//! produces the pairwise frequency matrix plus total model cycles. The
//! matrix depends only on the workload; geometry only affects cycles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChipletDef, Net, Placement};

/// Piecewise-constant wirelength-to-cycles map. `weights` has one entry
/// more than `breakpoints`; range `i` is `[b[i-1], b[i])` with the first
/// range starting at zero and the last unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyTable {
    /// Range boundaries in millimeters, strictly ascending.
    pub breakpoints_mm: Vec<f64>,
    /// Cycle weight per range, nonnegative and nondecreasing.
    pub weights: Vec<f64>,
}

impl Default for LatencyTable {
    // Six ranges over the 0.2-10 mm interposer operating span with
    // weights 1..6; artifact configuration, overridable per instance.
    fn default() -> Self {
        LatencyTable {
            breakpoints_mm: vec![0.2, 2.0, 4.0, 6.0, 8.0],
            weights: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        }
    }
}

impl LatencyTable {
    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.breakpoints_mm.len() + 1 {
            return Err(Error::InvalidParam(format!(
                "latency table needs {} weights for {} breakpoints, found {}",
                self.breakpoints_mm.len() + 1,
                self.breakpoints_mm.len(),
                self.weights.len()
            )));
        }
        if self.breakpoints_mm.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParam("latency breakpoints must be strictly ascending".into()));
        }
        if self.breakpoints_mm.iter().any(|b| !(*b > 0.0)) {
            return Err(Error::InvalidParam("latency breakpoints must be positive".into()));
        }
        if self.weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidParam("latency weights must be nonnegative".into()));
        }
        if self.weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParam("latency weights must be nondecreasing".into()));
        }
        Ok(())
    }
}

/// Cycle weight of the range containing `wirelength_um`. Ranges are
/// half-open, so a length exactly on a breakpoint takes the upper range.
pub fn latency_weight(wirelength_um: f64, table: &LatencyTable) -> f64 {
    let mm = wirelength_um / 1000.0;
    let idx = table.breakpoints_mm.partition_point(|b| *b <= mm);
    table.weights[idx]
}

/// One directed packet stream. The frequency matrix accumulates it
/// symmetrically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flow {
    pub src: usize,
    pub dst: usize,
    pub packets: u64,
}

/// Synthetic traffic shapes.
///
/// All generators draw one packet at a time from a ChaCha stream:
/// * `Uniform` picks an unordered pair uniformly (pairs ranked
///   lexicographically, `gen_range(0..n*(n-1)/2)`).
/// * `Hotspot` first draws a hub chiplet, then per packet routes to the
///   hub with probability 0.7 (`gen_bool`, partner via `gen_range(0..n-1)`
///   skipping the hub) and uniformly otherwise.
/// * `NetProportional` weights pair `{i, j}` by the summed weight of nets
///   containing both, then per packet draws `gen_range(0.0..total)` and
///   scans pairs in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Uniform,
    Hotspot,
    NetProportional,
}

/// Traffic description: explicit flows or a seeded generator.
#[derive(Debug, Clone, PartialEq)]
pub enum Workload {
    Flows(Vec<Flow>),
    Generator { kind: GeneratorKind, total_packets: u64, seed: u64 },
}

/// Symmetric pairwise packet counts with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyMatrix {
    n: usize,
    counts: Vec<u64>,
}

impl FrequencyMatrix {
    pub fn zero(n: usize) -> Self {
        FrequencyMatrix { n, counts: vec![0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.n + j]
    }

    /// Adds `packets` to both `(i, j)` and `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, packets: u64) {
        assert!(i != j, "diagonal must stay zero");
        self.counts[i * self.n + j] += packets;
        self.counts[j * self.n + i] += packets;
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Row-major copy, used by the document layer.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        let mut m = FrequencyMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if i == j && v != 0 {
                    return Err(Error::InvalidParam("frequency matrix diagonal must be zero".into()));
                }
                if rows[j][i] != v {
                    return Err(Error::InvalidParam("frequency matrix must be symmetric".into()));
                }
                m.counts[i * n + j] = v;
            }
        }
        Ok(m)
    }
}

fn unrank_pair(n: usize, mut idx: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - 1 - i;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
    }
    unreachable!("pair index out of range");
}

fn center_distance(chiplets: &[ChipletDef], placement: &Placement, i: usize, j: usize) -> f64 {
    let (xi, yi) = placement.center(&chiplets[i]);
    let (xj, yj) = placement.center(&chiplets[j]);
    (xi - xj).abs() + (yi - yj).abs()
}

/// Runs a workload and returns the frequency matrix plus total model
/// cycles.
///
/// Each packet between `i` and `j` costs `base_cycles +
/// latency_weight(d_ij)` where `d_ij` is the center-to-center Manhattan
/// distance. Identical inputs and seed give identical outputs.
pub fn simulate(
    chiplets: &[ChipletDef],
    placement: &Placement,
    nets: &[Net],
    workload: &Workload,
    table: &LatencyTable,
    base_cycles: f64,
) -> Result<(FrequencyMatrix, f64)> {
    let n = chiplets.len();
    if placement.len() != n {
        return Err(Error::PlacementMismatch { expected: n, found: placement.len() });
    }
    let mut freq = FrequencyMatrix::zero(n);
    match workload {
        Workload::Flows(flows) => {
            for f in flows {
                if f.src >= n || f.dst >= n {
                    return Err(Error::InvalidParam(format!(
                        "flow references chiplet {} but instance has {n}",
                        f.src.max(f.dst)
                    )));
                }
                if f.src == f.dst {
                    return Err(Error::InvalidParam(format!(
                        "flow source and destination are both {}",
                        f.src
                    )));
                }
                freq.add(f.src, f.dst, f.packets);
            }
        }
        Workload::Generator { kind, total_packets, seed } => {
            if n >= 2 {
                generate(&mut freq, *kind, *total_packets, *seed, nets)?;
            } else if *total_packets > 0 {
                return Err(Error::InvalidParam("generator needs at least two chiplets".into()));
            }
        }
    }

    let mut cycles = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let f = freq.get(i, j);
            if f > 0 {
                let d = center_distance(chiplets, placement, i, j);
                cycles += f as f64 * (base_cycles + latency_weight(d, table));
            }
        }
    }
    Ok((freq, cycles))
}

fn generate(
    freq: &mut FrequencyMatrix,
    kind: GeneratorKind,
    total_packets: u64,
    seed: u64,
    nets: &[Net],
) -> Result<()> {
    let n = freq.dim();
    let pairs = n * (n - 1) / 2;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_WORKLOAD);
    match kind {
        GeneratorKind::Uniform => {
            for _ in 0..total_packets {
                let (i, j) = unrank_pair(n, rng.gen_range(0..pairs));
                freq.add(i, j, 1);
            }
        }
        GeneratorKind::Hotspot => {
            let hub = rng.gen_range(0..n);
            for _ in 0..total_packets {
                if rng.gen_bool(0.7) {
                    let mut partner = rng.gen_range(0..n - 1);
                    if partner >= hub {
                        partner += 1;
                    }
                    freq.add(hub, partner, 1);
                } else {
                    let (i, j) = unrank_pair(n, rng.gen_range(0..pairs));
                    freq.add(i, j, 1);
                }
            }
        }
        GeneratorKind::NetProportional => {
            let mut weights = vec![0.0f64; pairs];
            for net in nets {
                let pair_count = net.endpoints.len() * (net.endpoints.len() - 1) / 2;
                for (a, &i) in net.endpoints.iter().enumerate() {
                    for &j in &net.endpoints[a + 1..] {
                        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                        let idx = lo * n - lo * (lo + 1) / 2 + (hi - lo - 1);
                        weights[idx] += net.weight / pair_count as f64;
                    }
                }
            }
            let total: f64 = weights.iter().sum();
            if total <= 0.0 {
                return Ok(());
            }
            for _ in 0..total_packets {
                let mut u = rng.gen_range(0.0..total);
                let mut chosen = pairs - 1;
                for (idx, w) in weights.iter().enumerate() {
                    if u < *w {
                        chosen = idx;
                        break;
                    }
                    u -= w;
                }
                let (i, j) = unrank_pair(n, chosen);
                freq.add(i, j, 1);
            }
        }
    }
    Ok(())
}

/// Communication cost: sum over pairs of frequency times center-to-center
/// Manhattan distance.
pub fn com_cost(
    freq: &FrequencyMatrix,
    chiplets: &[ChipletDef],
    placement: &Placement,
) -> Result<f64> {
    let n = chiplets.len();
    if freq.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: freq.dim() });
    }
    if placement.len() != n {
        return Err(Error::PlacementMismatch { expected: n, found: placement.len() });
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let f = freq.get(i, j);
            if f > 0 {
                total += f as f64 * center_distance(chiplets, placement, i, j);
            }
        }
    }
    Ok(total)
}

pub const STREAM_WORKLOAD: u64 = 2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::PlacedChiplet;
    use proptest::prelude::*;

    #[test]
    fn latency_weight_ranges() {
        let t = LatencyTable::default();
        assert_eq!(latency_weight(0.0, &t), 1.0);
        assert_eq!(latency_weight(100.0, &t), 1.0);
        // Exactly on a breakpoint takes the upper range.
        assert_eq!(latency_weight(200.0, &t), 2.0);
        assert_eq!(latency_weight(2000.0, &t), 3.0);
        assert_eq!(latency_weight(9900.0, &t), 6.0);
        assert_eq!(latency_weight(50_000.0, &t), 6.0);
    }

    #[test]
    fn latency_table_validation() {
        let mut t = LatencyTable::default();
        t.weights.pop();
        assert!(t.validate().is_err());
        let t = LatencyTable { breakpoints_mm: vec![2.0, 1.0], weights: vec![1.0, 2.0, 3.0] };
        assert!(t.validate().is_err());
        let t = LatencyTable { breakpoints_mm: vec![1.0], weights: vec![2.0, 1.0] };
        assert!(t.validate().is_err());
    }

    #[test]
    fn simulate_empty_workload() {
        let inst = fixtures::c8_instance();
        let p = fixtures::c8_grid_placement();
        let (f, cycles) = simulate(
            &inst.chiplets,
            &p,
            &inst.nets,
            &Workload::Flows(vec![]),
            &inst.latency_table,
            inst.base_cycles,
        )
        .unwrap();
        assert!(f.is_zero());
        assert_eq!(cycles, 0.0);
    }

    #[test]
    fn simulate_single_flow_arithmetic() {
        // Two chiplets with centers 2.5 mm apart: weight 3 under the default
        // table; base 1 cycle; 10 packets -> 40 cycles.
        let chiplets: Vec<ChipletDef> = (0..2)
            .map(|id| ChipletDef {
                id,
                name: format!("c{id}"),
                width_o: 100.0,
                height_o: 100.0,
                function: "block".into(),
            })
            .collect();
        let p = Placement::new(vec![
            PlacedChiplet { x: 0.0, y: 0.0, rotated: false },
            PlacedChiplet { x: 2500.0, y: 0.0, rotated: false },
        ]);
        let w = Workload::Flows(vec![Flow { src: 0, dst: 1, packets: 10 }]);
        let (f, cycles) = simulate(&chiplets, &p, &[], &w, &LatencyTable::default(), 1.0).unwrap();
        assert_eq!(f.get(0, 1), 10);
        assert_eq!(f.get(1, 0), 10);
        assert_eq!(cycles, 40.0);
    }

    #[test]
    fn simulate_rejects_bad_flows() {
        let inst = fixtures::c8_instance();
        let p = fixtures::c8_grid_placement();
        let bad = Workload::Flows(vec![Flow { src: 0, dst: 99, packets: 1 }]);
        assert!(simulate(&inst.chiplets, &p, &inst.nets, &bad, &inst.latency_table, 4.0).is_err());
        let selfloop = Workload::Flows(vec![Flow { src: 3, dst: 3, packets: 1 }]);
        assert!(simulate(&inst.chiplets, &p, &inst.nets, &selfloop, &inst.latency_table, 4.0).is_err());
    }

    #[test]
    fn net_proportional_matches_reference_redraw() {
        let inst = fixtures::c8_instance();
        let p = fixtures::c8_grid_placement();
        let w = Workload::Generator { kind: GeneratorKind::NetProportional, total_packets: 500, seed: 7 };
        let (f, _) = simulate(&inst.chiplets, &p, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();

        // Straight-line reference of the documented draw.
        let n = inst.chiplets.len();
        let pairs = n * (n - 1) / 2;
        let mut weights = vec![0.0f64; pairs];
        for net in &inst.nets {
            let pc = net.endpoints.len() * (net.endpoints.len() - 1) / 2;
            for (a, &i) in net.endpoints.iter().enumerate() {
                for &j in &net.endpoints[a + 1..] {
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    weights[lo * n - lo * (lo + 1) / 2 + (hi - lo - 1)] += net.weight / pc as f64;
                }
            }
        }
        let total: f64 = weights.iter().sum();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        rng.set_stream(STREAM_WORKLOAD);
        let mut expect = FrequencyMatrix::zero(n);
        for _ in 0..500 {
            let mut u = rng.gen_range(0.0..total);
            let mut chosen = pairs - 1;
            for (idx, wt) in weights.iter().enumerate() {
                if u < *wt {
                    chosen = idx;
                    break;
                }
                u -= wt;
            }
            let (i, j) = unrank_pair(n, chosen);
            expect.add(i, j, 1);
        }
        assert_eq!(f, expect);
    }

    #[test]
    fn frequency_independent_of_placement() {
        let inst = fixtures::c8_instance();
        let a = fixtures::c8_grid_placement();
        let mut items = a.items.clone();
        items.swap(0, 5);
        // Same chiplet order, different coordinates.
        let b = Placement::new(
            items.iter().map(|q| PlacedChiplet { x: q.x + 37.0, y: q.y, rotated: q.rotated }).collect(),
        );
        let w = Workload::Generator { kind: GeneratorKind::Hotspot, total_packets: 300, seed: 9 };
        let (fa, _) = simulate(&inst.chiplets, &a, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
        let (fb, _) = simulate(&inst.chiplets, &b, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
        assert_eq!(fa, fb);
    }

    #[test]
    fn com_cost_cases() {
        let chiplets: Vec<ChipletDef> = (0..2)
            .map(|id| ChipletDef {
                id,
                name: format!("c{id}"),
                width_o: 2.0,
                height_o: 2.0,
                function: "block".into(),
            })
            .collect();
        let p = Placement::new(vec![
            PlacedChiplet { x: -1.0, y: -1.0, rotated: false },
            PlacedChiplet { x: 99.0, y: 199.0, rotated: false },
        ]);
        let zero = FrequencyMatrix::zero(2);
        assert_eq!(com_cost(&zero, &chiplets, &p).unwrap(), 0.0);
        let mut f = FrequencyMatrix::zero(2);
        f.add(0, 1, 5);
        assert_eq!(com_cost(&f, &chiplets, &p).unwrap(), 1500.0);
        let wrong = FrequencyMatrix::zero(3);
        assert!(matches!(
            com_cost(&wrong, &chiplets, &p),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn com_cost_c8_fixture_bruteforce() {
        let inst = fixtures::c8_instance();
        let p = fixtures::c8_grid_placement();
        let w = Workload::Generator { kind: GeneratorKind::Uniform, total_packets: 1000, seed: 3 };
        let (f, _) = simulate(&inst.chiplets, &p, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
        let got = com_cost(&f, &inst.chiplets, &p).unwrap();
        // Brute-force double loop over the full matrix (each pair twice).
        let mut expect2 = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    let (xi, yi) = p.center(&inst.chiplets[i]);
                    let (xj, yj) = p.center(&inst.chiplets[j]);
                    expect2 += f.get(i, j) as f64 * ((xi - xj).abs() + (yi - yj).abs());
                }
            }
        }
        assert!((got - expect2 / 2.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn simulate_deterministic(seed in 0u64..50, packets in 0u64..2000) {
            let inst = fixtures::c8_instance();
            let p = fixtures::c8_grid_placement();
            let w = Workload::Generator { kind: GeneratorKind::Uniform, total_packets: packets, seed };
            let a = simulate(&inst.chiplets, &p, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
            let b = simulate(&inst.chiplets, &p, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn cycles_monotone_when_distances_grow(shift in 0.0f64..5000.0) {
            let inst = fixtures::c8_instance();
            let p = fixtures::c8_grid_placement();
            // Push one chiplet further out along +x: its pairwise distances
            // can only grow (it already sits at the right edge of the grid).
            let mut items = p.items.clone();
            items[5].x += shift;
            let q = Placement::new(items);
            let w = Workload::Generator { kind: GeneratorKind::Uniform, total_packets: 500, seed: 11 };
            let (_, base) = simulate(&inst.chiplets, &p, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
            let (_, moved) = simulate(&inst.chiplets, &q, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
            prop_assert!(moved >= base - 1e-9);
        }

        #[test]
        fn com_cost_translation_and_rotation_invariant(dx in -500.0f64..500.0, dy in -500.0f64..500.0, k in 0usize..8) {
            let inst = fixtures::c8_instance();
            let p = fixtures::c8_grid_placement();
            let w = Workload::Generator { kind: GeneratorKind::Uniform, total_packets: 200, seed: 5 };
            let (f, _) = simulate(&inst.chiplets, &p, &inst.nets, &w, &inst.latency_table, 4.0).unwrap();
            let base = com_cost(&f, &inst.chiplets, &p).unwrap();

            let translated = Placement::new(
                p.items.iter().map(|q| PlacedChiplet { x: q.x + dx, y: q.y + dy, ..*q }).collect(),
            );
            prop_assert!((com_cost(&f, &inst.chiplets, &translated).unwrap() - base).abs() < 1e-6);

            let def = &inst.chiplets[k];
            let (cx, cy) = p.center(def);
            let mut items = p.items.clone();
            items[k] = PlacedChiplet { x: cx - def.height_o / 2.0, y: cy - def.width_o / 2.0, rotated: true };
            let rotated = Placement::new(items);
            prop_assert!((com_cost(&f, &inst.chiplets, &rotated).unwrap() - base).abs() < 1e-6);
        }
    }
}
