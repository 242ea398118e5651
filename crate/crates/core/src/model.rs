//! Shared domain types and geometry primitives.
//!
//! Everything downstream (cost models, partitioner, traffic simulator,
//! floorplan solvers) works against the types in this module. All lengths
//! are micrometers, all areas square micrometers unless a name says
//! otherwise.

use serde::{Deserialize, Serialize};

use crate::costrel::{self, CostParams, MaterialParams};
use crate::error::{Error, Result};
use crate::traffic::LatencyTable;

/// A rectangular IP block placed on the interposer.
///
/// `width_o`/`height_o` are the original (unrotated) dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChipletDef {
    pub id: usize,
    pub name: String,
    pub width_o: f64,
    pub height_o: f64,
    pub function: String,
}

impl ChipletDef {
    pub fn area(&self) -> f64 {
        self.width_o * self.height_o
    }
}

/// A multi-endpoint connection between chiplets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net {
    pub id: usize,
    /// Distinct chiplet ids, at least two.
    pub endpoints: Vec<usize>,
    pub weight: f64,
}

/// Hotspot bump locations plus the margin radius every chiplet must keep
/// clear of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpField {
    pub hotspots: Vec<(f64, f64)>,
    pub margin_radius: f64,
}

impl BumpField {
    pub fn empty() -> Self {
        BumpField { hotspots: Vec::new(), margin_radius: 0.0 }
    }
}

/// Fixed-outline board the chiplets must stay inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Board {
    pub width: f64,
    pub height: f64,
}

/// Coefficients of the weighted-sum objective. `gamma1` scales the
/// communication-cost term used only by the performance-aware stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub gamma1: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights { beta1: 1.0, beta2: 10.0, beta3: 100.0, beta4: 1.0, gamma1: 1.0 }
    }
}

/// Lower-left corner plus rotation flag for one chiplet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedChiplet {
    pub x: f64,
    pub y: f64,
    pub rotated: bool,
}

/// Positions for every chiplet of an instance, indexed by chiplet id.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Placement {
    pub items: Vec<PlacedChiplet>,
}

/// Axis-aligned rectangle, lower-left anchored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    /// Radius of the circumscribed circle, `sqrt(w^2 + h^2) / 2`.
    pub fn circumradius(&self) -> f64 {
        (self.w * self.w + self.h * self.h).sqrt() / 2.0
    }
}

impl Placement {
    pub fn new(items: Vec<PlacedChiplet>) -> Self {
        Placement { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Effective rectangle of chiplet `def` under this placement; rotation
    /// swaps width and height, preserving area.
    pub fn rect(&self, def: &ChipletDef) -> Rect {
        let p = self.items[def.id];
        let (w, h) = if p.rotated { (def.height_o, def.width_o) } else { (def.width_o, def.height_o) };
        Rect { x: p.x, y: p.y, w, h }
    }

    pub fn rects<'a>(&'a self, chiplets: &'a [ChipletDef]) -> impl Iterator<Item = Rect> + 'a {
        chiplets.iter().map(move |c| self.rect(c))
    }

    pub fn center(&self, def: &ChipletDef) -> (f64, f64) {
        self.rect(def).center()
    }

    /// Tight bounding box of all placed chiplets.
    pub fn bounding_box(&self, chiplets: &[ChipletDef]) -> Result<Rect> {
        if self.items.is_empty() || chiplets.is_empty() {
            return Err(Error::EmptyPlacement);
        }
        let mut min_x = f64::INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for r in self.rects(chiplets) {
            min_x = min_x.min(r.x);
            min_y = min_y.min(r.y);
            max_x = max_x.max(r.x + r.w);
            max_y = max_y.max(r.y + r.h);
        }
        Ok(Rect { x: min_x, y: min_y, w: max_x - min_x, h: max_y - min_y })
    }
}

/// A full problem instance: blocks, connectivity, board, reliability and
/// cost parameters, and objective weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloorplanInstance {
    pub chiplets: Vec<ChipletDef>,
    pub nets: Vec<Net>,
    pub board: Board,
    pub bumps: BumpField,
    pub materials: MaterialParams,
    pub costs: CostParams,
    pub weights: ObjectiveWeights,
    pub latency_table: LatencyTable,
    /// Fixed per-hop interface latency added to every packet (cycles).
    pub base_cycles: f64,
}

impl FloorplanInstance {
    /// Validates all structural invariants; rejects area-infeasible
    /// instances up front.
    pub fn validate(&self) -> Result<()> {
        let n = self.chiplets.len();
        if n == 0 {
            return Err(Error::InvalidInstance("instance has no chiplets".into()));
        }
        for (k, c) in self.chiplets.iter().enumerate() {
            if c.id != k {
                return Err(Error::InvalidInstance(format!(
                    "chiplet ids must be dense 0..{n}; found id {} at position {k}",
                    c.id
                )));
            }
            if !(c.width_o > 0.0) || !(c.height_o > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "chiplet `{}` has nonpositive dimensions",
                    c.name
                )));
            }
        }
        for net in &self.nets {
            if net.endpoints.len() < 2 {
                return Err(Error::InvalidInstance(format!("net {} has fewer than 2 endpoints", net.id)));
            }
            let mut seen = vec![false; n];
            for &e in &net.endpoints {
                if e >= n {
                    return Err(Error::UnknownEndpoint { net: net.id, endpoint: e });
                }
                if seen[e] {
                    return Err(Error::InvalidInstance(format!(
                        "net {} repeats endpoint {e}",
                        net.id
                    )));
                }
                seen[e] = true;
            }
            if !(net.weight >= 0.0) {
                return Err(Error::InvalidInstance(format!("net {} has negative weight", net.id)));
            }
        }
        if !(self.board.width > 0.0) || !(self.board.height > 0.0) {
            return Err(Error::InvalidInstance("board dimensions must be positive".into()));
        }
        let total_area: f64 = self.chiplets.iter().map(|c| c.area()).sum();
        if total_area > self.board.width * self.board.height {
            return Err(Error::InvalidInstance(format!(
                "total chiplet area {total_area} exceeds board area {}",
                self.board.width * self.board.height
            )));
        }
        if !(self.bumps.margin_radius >= 0.0) {
            return Err(Error::InvalidInstance("bump margin radius must be nonnegative".into()));
        }
        for &(x, y) in &self.bumps.hotspots {
            if x < 0.0 || y < 0.0 || x > self.board.width || y > self.board.height {
                return Err(Error::InvalidInstance(format!(
                    "hotspot ({x}, {y}) outside board bounds"
                )));
            }
        }
        let w = &self.weights;
        if [w.beta1, w.beta2, w.beta3, w.beta4, w.gamma1].iter().any(|b| !(*b >= 0.0)) {
            return Err(Error::InvalidInstance("objective weights must be nonnegative".into()));
        }
        if !(self.base_cycles >= 0.0) {
            return Err(Error::InvalidInstance("base_cycles must be nonnegative".into()));
        }
        self.materials.validate()?;
        self.costs.validate()?;
        self.latency_table.validate()?;
        Ok(())
    }
}

/// Per-term values of the objective, stored unweighted; `total` is the
/// weighted recombination.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub hpwl: f64,
    pub hpwl_unweighted: f64,
    pub package_area: f64,
    pub warpage_x: f64,
    pub warpage_y: f64,
    pub cost_2_5d: f64,
    pub com_cost: f64,
    pub total: f64,
}

/// One constraint violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Overlap { a: usize, b: usize, area: f64 },
    OutOfBoard { chiplet: usize, excess_x: f64, excess_y: f64 },
    BumpClearance { chiplet: usize, hotspot: usize, distance: f64, required: f64 },
    Warpage { axis: char, value: f64, threshold: f64 },
}

/// Solver output: the placement plus derived metrics and bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub placement: Placement,
    pub objective_breakdown: ObjectiveBreakdown,
    pub violations: Vec<Violation>,
    pub seed: u64,
    pub iterations: u64,
    /// Wall-clock seconds; excluded from serialized documents so that
    /// repeated runs with one seed stay byte-identical.
    #[serde(skip)]
    pub wall_time: f64,
}

/// Weighted half-perimeter wirelength over chiplet centers.
///
/// Each net contributes `weight * (dx + dy)` of the bounding box of its
/// endpoints' centers.
pub fn hpwl(chiplets: &[ChipletDef], placement: &Placement, nets: &[Net]) -> Result<f64> {
    hpwl_impl(chiplets, placement, nets, true)
}

/// Same as [`hpwl`] but ignoring net weights.
pub fn hpwl_unweighted(chiplets: &[ChipletDef], placement: &Placement, nets: &[Net]) -> Result<f64> {
    hpwl_impl(chiplets, placement, nets, false)
}

fn hpwl_impl(chiplets: &[ChipletDef], placement: &Placement, nets: &[Net], weighted: bool) -> Result<f64> {
    let mut total = 0.0;
    for net in nets {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for &e in &net.endpoints {
            let def = chiplets
                .get(e)
                .filter(|_| e < placement.len())
                .ok_or(Error::UnknownEndpoint { net: net.id, endpoint: e })?;
            let (cx, cy) = placement.center(def);
            min_x = min_x.min(cx);
            max_x = max_x.max(cx);
            min_y = min_y.min(cy);
            max_y = max_y.max(cy);
        }
        if net.endpoints.is_empty() {
            continue;
        }
        let span = (max_x - min_x) + (max_y - min_y);
        total += if weighted { net.weight * span } else { span };
    }
    Ok(total)
}

/// Area of the intersection of two rectangles. Zero exactly when the
/// interiors are disjoint; rectangles sharing only an edge do not overlap.
pub fn overlap_area(a: &Rect, b: &Rect) -> f64 {
    let dx = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
    let dy = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
    if dx > 0.0 && dy > 0.0 {
        dx * dy
    } else {
        0.0
    }
}

/// Area of the tight bounding box of all placed chiplets. The board is a
/// hard outer bound; this is the live area objective inside it.
pub fn package_area(chiplets: &[ChipletDef], placement: &Placement) -> Result<f64> {
    Ok(placement.bounding_box(chiplets)?.area())
}

/// Checks a placement against every constraint family and returns all
/// violations found. An empty list means the placement is feasible.
pub fn validate(instance: &FloorplanInstance, placement: &Placement) -> Result<Vec<Violation>> {
    let n = instance.chiplets.len();
    if placement.len() != n {
        return Err(Error::PlacementMismatch { expected: n, found: placement.len() });
    }
    let rects: Vec<Rect> = placement.rects(&instance.chiplets).collect();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in (i + 1)..n {
            let area = overlap_area(&rects[i], &rects[j]);
            if area > 0.0 {
                violations.push(Violation::Overlap { a: i, b: j, area });
            }
        }
    }

    for (i, r) in rects.iter().enumerate() {
        let excess_x = (r.x + r.w - instance.board.width).max(0.0) + (-r.x).max(0.0);
        let excess_y = (r.y + r.h - instance.board.height).max(0.0) + (-r.y).max(0.0);
        if excess_x > 0.0 || excess_y > 0.0 {
            violations.push(Violation::OutOfBoard { chiplet: i, excess_x, excess_y });
        }
    }

    for (i, r) in rects.iter().enumerate() {
        for (s, &bump) in instance.bumps.hotspots.iter().enumerate() {
            if !costrel::bump_clearance(r, bump, instance.bumps.margin_radius) {
                let (cx, cy) = r.center();
                let distance = ((cx - bump.0).powi(2) + (cy - bump.1).powi(2)).sqrt();
                let required = r.circumradius() + instance.bumps.margin_radius;
                violations.push(Violation::BumpClearance { chiplet: i, hotspot: s, distance, required });
            }
        }
    }

    match costrel::warpage_check(&instance.chiplets, placement, &instance.materials) {
        Ok((wpg_x, wpg_y, _)) => {
            if wpg_x > instance.materials.warpage_threshold {
                violations.push(Violation::Warpage {
                    axis: 'x',
                    value: wpg_x,
                    threshold: instance.materials.warpage_threshold,
                });
            }
            if wpg_y > instance.materials.warpage_threshold {
                violations.push(Violation::Warpage {
                    axis: 'y',
                    value: wpg_y,
                    threshold: instance.materials.warpage_threshold,
                });
            }
        }
        // A span beyond the substrate is unconditionally over any threshold.
        Err(Error::SubstrateExceeded { axis, span, .. }) => {
            violations.push(Violation::Warpage {
                axis,
                value: span,
                threshold: instance.materials.warpage_threshold,
            });
        }
        Err(e) => return Err(e),
    }

    Ok(violations)
}
