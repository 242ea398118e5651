//! Floorplan optimization.
//!
//! Placements are encoded as a relative order: one of four separating
//! relations per chiplet pair plus a rotation bit per chiplet. An order
//! realizes into coordinates by longest-path compaction of its horizontal
//! and vertical constraint graphs, which guarantees zero overlap by
//! construction. On top of that sit the weighted-sum objectives, a
//! simulated-annealing solver, and an exhaustive exact oracle.

mod anneal;
mod exact;

pub use anneal::{solve_perf, solve_primary, two_stage_flow, MoveWeights, SolverConfig, WarmStart};
pub use exact::solve_exact;

use serde::{Deserialize, Serialize};

use crate::costrel;
use crate::error::{Error, Result};
use crate::model::{
    hpwl, hpwl_unweighted, package_area, ChipletDef, FloorplanInstance, ObjectiveBreakdown,
    PlacedChiplet, Placement,
};
use crate::traffic::{com_cost, FrequencyMatrix};

/// Relation of chiplet `i` to chiplet `j` for a pair with `i < j`.
///
/// The four cases map to the indicator pair `(p, q)`: `(0,0)` left,
/// `(0,1)` below, `(1,0)` right, `(1,1)` above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRel {
    LeftOf,
    Below,
    RightOf,
    Above,
}

impl PairRel {
    pub fn to_indicator_bits(self) -> (bool, bool) {
        match self {
            PairRel::LeftOf => (false, false),
            PairRel::Below => (false, true),
            PairRel::RightOf => (true, false),
            PairRel::Above => (true, true),
        }
    }

    pub fn from_indicator_bits(p: bool, q: bool) -> Self {
        match (p, q) {
            (false, false) => PairRel::LeftOf,
            (false, true) => PairRel::Below,
            (true, false) => PairRel::RightOf,
            (true, true) => PairRel::Above,
        }
    }

    /// The same geometric relation seen from the other operand.
    pub fn flipped(self) -> Self {
        match self {
            PairRel::LeftOf => PairRel::RightOf,
            PairRel::RightOf => PairRel::LeftOf,
            PairRel::Below => PairRel::Above,
            PairRel::Above => PairRel::Below,
        }
    }

    pub const ALL: [PairRel; 4] = [PairRel::LeftOf, PairRel::Below, PairRel::RightOf, PairRel::Above];
}

/// Relative-position encoding of a floorplan: exactly one relation per
/// unordered pair plus per-chiplet rotation bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeOrder {
    n: usize,
    rels: Vec<PairRel>,
    rotations: Vec<bool>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl RelativeOrder {
    pub fn new(n: usize) -> Self {
        RelativeOrder { n, rels: vec![PairRel::LeftOf; n * (n - 1) / 2], rotations: vec![false; n] }
    }

    pub fn chiplet_count(&self) -> usize {
        self.n
    }

    /// Relation of `i` to `j`; works for either operand order.
    pub fn relation(&self, i: usize, j: usize) -> PairRel {
        if i < j {
            self.rels[pair_index(self.n, i, j)]
        } else {
            self.rels[pair_index(self.n, j, i)].flipped()
        }
    }

    pub fn set_relation(&mut self, i: usize, j: usize, rel: PairRel) {
        if i < j {
            self.rels[pair_index(self.n, i, j)] = rel;
        } else {
            self.rels[pair_index(self.n, j, i)] = rel.flipped();
        }
    }

    pub fn rotated(&self, k: usize) -> bool {
        self.rotations[k]
    }

    pub fn set_rotated(&mut self, k: usize, rotated: bool) {
        self.rotations[k] = rotated;
    }

    pub fn toggle_rotation(&mut self, k: usize) {
        self.rotations[k] = !self.rotations[k];
    }

    pub fn pair_count(&self) -> usize {
        self.rels.len()
    }

    pub fn relation_by_pair_index(&self, idx: usize) -> PairRel {
        self.rels[idx]
    }

    pub fn set_relation_by_pair_index(&mut self, idx: usize, rel: PairRel) {
        self.rels[idx] = rel;
    }

    /// Builds the order induced by a sequence pair (two permutations of
    /// `0..n`): `i` before `j` in both sequences puts `i` left of `j`;
    /// before/after puts `i` above `j`. Orders built this way always have
    /// acyclic constraint graphs.
    pub fn from_sequence_pair(s1: &[usize], s2: &[usize]) -> Self {
        let n = s1.len();
        debug_assert_eq!(s2.len(), n);
        let mut pos1 = vec![0usize; n];
        let mut pos2 = vec![0usize; n];
        for (p, &v) in s1.iter().enumerate() {
            pos1[v] = p;
        }
        for (p, &v) in s2.iter().enumerate() {
            pos2[v] = p;
        }
        let mut order = RelativeOrder::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let rel = match (pos1[i] < pos1[j], pos2[i] < pos2[j]) {
                    (true, true) => PairRel::LeftOf,
                    (false, false) => PairRel::RightOf,
                    (true, false) => PairRel::Above,
                    (false, true) => PairRel::Below,
                };
                order.set_relation(i, j, rel);
            }
        }
        order
    }

    /// Random order drawn from two random permutations, plus random
    /// rotation bits.
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut s1: Vec<usize> = (0..n).collect();
        let mut s2: Vec<usize> = (0..n).collect();
        s1.shuffle(rng);
        s2.shuffle(rng);
        let mut order = RelativeOrder::from_sequence_pair(&s1, &s2);
        for k in 0..n {
            order.rotations[k] = rng.gen_bool(0.5);
        }
        order
    }

    /// Reads a relation per pair off an overlap-free placement. Relation
    /// priority is left, right, below, above; non-overlap guarantees at
    /// least one applies.
    pub fn from_placement(chiplets: &[ChipletDef], placement: &Placement) -> Result<Self> {
        let n = chiplets.len();
        if placement.len() != n {
            return Err(Error::PlacementMismatch { expected: n, found: placement.len() });
        }
        let rects: Vec<_> = placement.rects(chiplets).collect();
        let mut order = RelativeOrder::new(n);
        for i in 0..n {
            order.rotations[i] = placement.items[i].rotated;
            for j in (i + 1)..n {
                let (a, b) = (&rects[i], &rects[j]);
                let rel = if a.x + a.w <= b.x {
                    PairRel::LeftOf
                } else if b.x + b.w <= a.x {
                    PairRel::RightOf
                } else if a.y + a.h <= b.y {
                    PairRel::Below
                } else if b.y + b.h <= a.y {
                    PairRel::Above
                } else {
                    return Err(Error::InvalidInstance(format!(
                        "chiplets {i} and {j} overlap; no separating relation exists"
                    )));
                };
                order.set_relation(i, j, rel);
            }
        }
        Ok(order)
    }

    /// Exchanges the roles of chiplets `a` and `b` (relations and
    /// rotation bits), leaving every other pair untouched.
    pub fn swap_labels(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let old = self.clone();
        let perm = |k: usize| {
            if k == a {
                b
            } else if k == b {
                a
            } else {
                k
            }
        };
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                self.set_relation(i, j, old.relation(perm(i), perm(j)));
            }
        }
        self.rotations.swap(a, b);
    }
}

/// Realizes a relative order into coordinates by left-bottom compaction.
///
/// Each left/below relation becomes an edge of the horizontal or vertical
/// constraint graph; every chiplet takes the longest-path coordinate from
/// the origin, so every encoded relation holds with zero overlap and no
/// chiplet can move left or down without breaking a relation.
///
/// Orders produced by this crate's constructors always realize; an
/// arbitrary relation assignment can encode contradictory separations, in
/// which case the constraint graph is cyclic and `Error::CyclicOrder` is
/// returned.
pub fn realize(order: &RelativeOrder, chiplets: &[ChipletDef]) -> Result<Placement> {
    let n = chiplets.len();
    if order.chiplet_count() != n {
        return Err(Error::PlacementMismatch { expected: n, found: order.chiplet_count() });
    }
    let dims: Vec<(f64, f64)> = chiplets
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if order.rotated(k) {
                (c.height_o, c.width_o)
            } else {
                (c.width_o, c.height_o)
            }
        })
        .collect();

    let mut h_succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut v_succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            match order.relation(i, j) {
                PairRel::LeftOf => h_succ[i].push(j),
                PairRel::RightOf => h_succ[j].push(i),
                PairRel::Below => v_succ[i].push(j),
                PairRel::Above => v_succ[j].push(i),
            }
        }
    }

    let x = longest_path(&h_succ, &dims, |d| d.0)?;
    let y = longest_path(&v_succ, &dims, |d| d.1)?;
    Ok(Placement::new(
        (0..n)
            .map(|k| PlacedChiplet { x: x[k], y: y[k], rotated: order.rotated(k) })
            .collect(),
    ))
}

fn longest_path(
    succ: &[Vec<usize>],
    dims: &[(f64, f64)],
    extent: impl Fn(&(f64, f64)) -> f64,
) -> Result<Vec<f64>> {
    let n = succ.len();
    let mut indegree = vec![0usize; n];
    for outs in succ {
        for &j in outs {
            indegree[j] += 1;
        }
    }
    let mut coord = vec![0.0f64; n];
    let mut queue: Vec<usize> = (0..n).filter(|&k| indegree[k] == 0).collect();
    let mut seen = 0;
    while let Some(k) = queue.pop() {
        seen += 1;
        let reach = coord[k] + extent(&dims[k]);
        for &j in &succ[k] {
            if reach > coord[j] {
                coord[j] = reach;
            }
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push(j);
            }
        }
    }
    if seen != n {
        return Err(Error::CyclicOrder);
    }
    Ok(coord)
}

/// Primary weighted-sum objective: wirelength, package area, per-axis
/// warpage, and 2.5D cost. Returns the total plus the unweighted terms.
pub fn objective_primary(
    instance: &FloorplanInstance,
    placement: &Placement,
) -> Result<(f64, ObjectiveBreakdown)> {
    let mut breakdown = ObjectiveBreakdown::default();
    breakdown.hpwl = hpwl(&instance.chiplets, placement, &instance.nets)?;
    breakdown.hpwl_unweighted = hpwl_unweighted(&instance.chiplets, placement, &instance.nets)?;
    breakdown.package_area = package_area(&instance.chiplets, placement)?;
    let (wx, wy, _) = costrel::warpage_check(&instance.chiplets, placement, &instance.materials)?;
    breakdown.warpage_x = wx;
    breakdown.warpage_y = wy;
    breakdown.cost_2_5d = costrel::cost_2_5d(&instance.chiplets, placement, &instance.costs)?;
    breakdown.com_cost = 0.0;
    let w = &instance.weights;
    breakdown.total = w.beta1 * breakdown.hpwl
        + w.beta2 * breakdown.package_area
        + w.beta3 * (wx + wy)
        + w.beta4 * breakdown.cost_2_5d;
    Ok((breakdown.total, breakdown))
}

/// Performance-aware objective: the primary objective plus the weighted
/// communication cost of the frequency matrix.
pub fn objective_perf(
    instance: &FloorplanInstance,
    placement: &Placement,
    freq: &FrequencyMatrix,
) -> Result<(f64, ObjectiveBreakdown)> {
    let (_, mut breakdown) = objective_primary(instance, placement)?;
    breakdown.com_cost = com_cost(freq, &instance.chiplets, placement)?;
    breakdown.total += instance.weights.gamma1 * breakdown.com_cost;
    Ok((breakdown.total, breakdown))
}

/// Continuous constraint-violation measures used by the annealer's
/// penalty terms and by feasibility checks. All zero exactly when
/// [`crate::model::validate`] returns no violations for an overlap-free
/// placement.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct InfeasibilityMeasures {
    pub out_of_bounds: f64,
    pub warpage_excess: f64,
    pub bump_deficit: f64,
}

impl InfeasibilityMeasures {
    pub fn feasible(&self) -> bool {
        self.out_of_bounds <= 0.0 && self.warpage_excess <= 0.0 && self.bump_deficit <= 0.0
    }
}

pub(crate) fn infeasibility(
    instance: &FloorplanInstance,
    placement: &Placement,
) -> InfeasibilityMeasures {
    let mut m = InfeasibilityMeasures::default();
    for r in placement.rects(&instance.chiplets) {
        m.out_of_bounds += (r.x + r.w - instance.board.width).max(0.0)
            + (r.y + r.h - instance.board.height).max(0.0)
            + (-r.x).max(0.0)
            + (-r.y).max(0.0);
        for &bump in &instance.bumps.hotspots {
            let (cx, cy) = r.center();
            let dist = ((cx - bump.0).powi(2) + (cy - bump.1).powi(2)).sqrt();
            let required = r.circumradius() + instance.bumps.margin_radius;
            m.bump_deficit += (required - dist).max(0.0);
        }
    }
    let mat = &instance.materials;
    if let Ok(bbox) = placement.bounding_box(&instance.chiplets) {
        let mut axis_excess = |half: f64, l: f64| {
            // Past the substrate the model has no value; penalize the
            // overhang itself on top of the threshold-level excess at l.
            let clamped = half.min(l);
            let wpg = costrel::warpage(clamped, l, mat, costrel::WarpageMode::Quadratic)
                .unwrap_or(f64::INFINITY);
            m.warpage_excess += (wpg - mat.warpage_threshold).max(0.0) + (half - l).max(0.0);
        };
        axis_excess(bbox.w / 2.0, mat.half_len_x);
        axis_excess(bbox.h / 2.0, mat.half_len_y);
    }
    m
}
