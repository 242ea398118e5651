//! Yield, cost, and reliability models.
//!
//! Covers the negative-binomial die yield, manufacturing cost per yielded
//! area, package assembly cost, the full 2.5D package cost, the warpage
//! displacement model (exact and quadratic), and the hotspot-bump
//! clearance predicate.
//!
//! Die areas are in cm^2 to match the defect-density convention; geometry
//! stays in micrometers and is converted at the call sites.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChipletDef, Placement, Rect};

/// Square micrometers per square centimeter.
pub const UM2_PER_CM2: f64 = 1e8;

/// Wafer, assembly, and yield parameters of the cost model.
///
/// All yields live in (0, 1]. Prices are in arbitrary currency units; the
/// interposer price is per cm^2 of package area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Wafer unit price per cm^2 of die area.
    pub wafer_price_per_cm2: f64,
    /// Defect density d0, per cm^2.
    pub defect_density_per_cm2: f64,
    /// Negative-binomial clustering parameter.
    pub alpha_cluster: f64,
    /// Raw package cost.
    pub package_cost: f64,
    /// Raw substrate cost.
    pub substrate_cost: f64,
    /// Interposer cost per cm^2 of package area.
    pub interposer_cost_per_cm2: f64,
    /// Bonding cost per chiplet.
    pub bond_cost_per_chiplet: f64,
    /// Interposer yield y1.
    pub interposer_yield: f64,
    /// Chiplet bonding yield y2.
    pub chiplet_bond_yield: f64,
    /// Interposer bonding yield y3.
    pub interposer_bond_yield: f64,
    /// Package yield.
    pub package_yield: f64,
    /// Bond yield applied per chiplet to the final cost.
    pub bond_yield: f64,
    /// Optional per-chiplet yield overrides; `None` entries fall back to
    /// the die-yield model of the chiplet's own area.
    pub chiplet_yield_override: Option<Vec<Option<f64>>>,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            wafer_price_per_cm2: 10.0,
            defect_density_per_cm2: 0.09,
            alpha_cluster: 10.0,
            package_cost: 5.0,
            substrate_cost: 2.0,
            interposer_cost_per_cm2: 1.0,
            bond_cost_per_chiplet: 0.1,
            interposer_yield: 0.98,
            chiplet_bond_yield: 0.99,
            interposer_bond_yield: 0.98,
            package_yield: 0.95,
            bond_yield: 0.99,
            chiplet_yield_override: None,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        let yields = [
            ("interposer_yield", self.interposer_yield),
            ("chiplet_bond_yield", self.chiplet_bond_yield),
            ("interposer_bond_yield", self.interposer_bond_yield),
            ("package_yield", self.package_yield),
            ("bond_yield", self.bond_yield),
        ];
        for (name, y) in yields {
            if !(y > 0.0 && y <= 1.0) {
                return Err(Error::InvalidParam(format!("{name} = {y} outside (0, 1]")));
            }
        }
        if let Some(overrides) = &self.chiplet_yield_override {
            for y in overrides.iter().flatten() {
                if !(*y > 0.0 && *y <= 1.0) {
                    return Err(Error::InvalidParam(format!(
                        "chiplet yield override {y} outside (0, 1]"
                    )));
                }
            }
        }
        if !(self.defect_density_per_cm2 >= 0.0) {
            return Err(Error::InvalidParam("defect density must be nonnegative".into()));
        }
        if !(self.alpha_cluster > 0.0) {
            return Err(Error::InvalidParam("alpha_cluster must be positive".into()));
        }
        for (name, p) in [
            ("wafer_price_per_cm2", self.wafer_price_per_cm2),
            ("package_cost", self.package_cost),
            ("substrate_cost", self.substrate_cost),
            ("interposer_cost_per_cm2", self.interposer_cost_per_cm2),
            ("bond_cost_per_chiplet", self.bond_cost_per_chiplet),
        ] {
            if !(p >= 0.0) {
                return Err(Error::InvalidParam(format!("{name} must be nonnegative")));
            }
        }
        Ok(())
    }
}

/// Material and geometry parameters of the warpage model.
///
/// The displacement prefactor is `t * delta_alpha * delta_t / (2 * lambda
/// * flex_d)`; `decay_k` and the half-lengths shape the bracket term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Thickness term, um.
    pub t: f64,
    /// CTE mismatch, 1/K.
    pub delta_alpha: f64,
    /// Thermal load, K.
    pub delta_t: f64,
    /// Material coefficient.
    pub lambda: f64,
    /// Flexural coefficient.
    pub flex_d: f64,
    /// Decay coefficient, 1/um.
    pub decay_k: f64,
    /// Half substrate length along x, um.
    pub half_len_x: f64,
    /// Half substrate length along y, um.
    pub half_len_y: f64,
    /// Acceptable warpage per axis, um.
    pub warpage_threshold: f64,
}

impl Default for MaterialParams {
    // Defaults are calibrated so the threshold trips once the placement
    // bounding box spans about 85% of the substrate at the default
    // thermal load.
    fn default() -> Self {
        MaterialParams {
            t: 100.0,
            delta_alpha: 8e-6,
            delta_t: 100.0,
            lambda: 1.0,
            flex_d: 2e7,
            decay_k: 2e-4,
            half_len_x: 5000.0,
            half_len_y: 5000.0,
            warpage_threshold: 6.36e-3,
        }
    }
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        if self.flex_d == 0.0 {
            return Err(Error::InvalidParam("flex_d must be nonzero".into()));
        }
        if self.lambda == 0.0 {
            return Err(Error::InvalidParam("lambda must be nonzero".into()));
        }
        if !(self.decay_k > 0.0) {
            return Err(Error::InvalidParam("decay_k must be positive".into()));
        }
        if !(self.half_len_x > 0.0 && self.half_len_y > 0.0) {
            return Err(Error::InvalidParam("substrate half-lengths must be positive".into()));
        }
        if !(self.warpage_threshold > 0.0) {
            return Err(Error::InvalidParam("warpage_threshold must be positive".into()));
        }
        Ok(())
    }

    /// Displacement prefactor shared by both warpage modes.
    pub fn coefficient(&self) -> f64 {
        self.t * self.delta_alpha * self.delta_t / (2.0 * self.lambda * self.flex_d)
    }
}

/// Evaluation mode for [`cost_per_yielded_area`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    Exact,
    Taylor,
}

/// Evaluation mode for [`warpage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarpageMode {
    Exact,
    Quadratic,
}

/// Negative-binomial die yield `(1 + d0*s/alpha)^(-alpha)` for a die of
/// area `s_cm2`. Strictly decreasing in area when the defect density is
/// positive.
pub fn die_yield(s_cm2: f64, params: &CostParams) -> Result<f64> {
    if s_cm2 < 0.0 {
        return Err(Error::NegativeArea(s_cm2));
    }
    let d0 = params.defect_density_per_cm2;
    let alpha = params.alpha_cluster;
    Ok((1.0 + d0 * s_cm2 / alpha).powf(-alpha))
}

/// Manufacturing cost per yielded cm^2 for a die of area `s_cm2`.
///
/// Exact mode divides the wafer price by the die yield; Taylor mode uses
/// the second-order expansion `P0 * (1 + d0*s + (alpha-1)/(2*alpha) *
/// d0^2 * s^2)`.
pub fn cost_per_yielded_area(s_cm2: f64, params: &CostParams, mode: CostMode) -> Result<f64> {
    let p0 = params.wafer_price_per_cm2;
    match mode {
        CostMode::Exact => Ok(p0 / die_yield(s_cm2, params)?),
        CostMode::Taylor => {
            if s_cm2 < 0.0 {
                return Err(Error::NegativeArea(s_cm2));
            }
            let d0 = params.defect_density_per_cm2;
            let alpha = params.alpha_cluster;
            Ok(p0 * (1.0 + d0 * s_cm2 + (alpha - 1.0) / (2.0 * alpha) * d0 * d0 * s_cm2 * s_cm2))
        }
    }
}

/// Package assembly cost for `n` chiplets with interposer cost `c_inter`:
/// `C_pack + c_inter * (1/(y1 * y2^n * y3) - 1) + C_sub * (1/y3 - 1)`.
pub fn package_assembly_cost(n: usize, params: &CostParams, c_inter: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParam("assembly cost needs at least one chiplet".into()));
    }
    if c_inter < 0.0 {
        return Err(Error::InvalidParam("interposer cost must be nonnegative".into()));
    }
    let y1 = params.interposer_yield;
    let y2 = params.chiplet_bond_yield;
    let y3 = params.interposer_bond_yield;
    if y1 == 0.0 {
        return Err(Error::ZeroYield("interposer_yield"));
    }
    if y2 == 0.0 {
        return Err(Error::ZeroYield("chiplet_bond_yield"));
    }
    if y3 == 0.0 {
        return Err(Error::ZeroYield("interposer_bond_yield"));
    }
    let denom = y1 * y2.powi(n as i32) * y3;
    Ok(params.package_cost
        + c_inter * (1.0 / denom - 1.0)
        + params.substrate_cost * (1.0 / y3 - 1.0))
}

/// Total 2.5D package cost of a placement.
///
/// The assembled package cost (with the interposer priced per cm^2 of the
/// placement's bounding box) is divided by the package yield, each
/// chiplet contributes its yielded manufacturing cost plus bonding, and
/// the sum is discounted by `bond_yield^n`.
pub fn cost_2_5d(
    chiplets: &[ChipletDef],
    placement: &Placement,
    params: &CostParams,
) -> Result<f64> {
    let n = chiplets.len();
    if params.package_yield == 0.0 {
        return Err(Error::ZeroYield("package_yield"));
    }
    if params.bond_yield == 0.0 {
        return Err(Error::ZeroYield("bond_yield"));
    }
    let pa_cm2 = crate::model::package_area(chiplets, placement)? / UM2_PER_CM2;
    let c_inter = params.interposer_cost_per_cm2 * pa_cm2;
    let assembled = package_assembly_cost(n, params, c_inter)?;

    let mut total = assembled / params.package_yield;
    for c in chiplets {
        let s = c.area() / UM2_PER_CM2;
        let chip_cost = cost_per_yielded_area(s, params, CostMode::Exact)? * s;
        let chip_yield = params
            .chiplet_yield_override
            .as_ref()
            .and_then(|v| v.get(c.id).copied().flatten())
            .map_or_else(|| die_yield(s, params), |y| Ok(y))?;
        if chip_yield == 0.0 {
            return Err(Error::ZeroYield("chiplet_yield_override"));
        }
        total += chip_cost / chip_yield + params.bond_cost_per_chiplet;
    }
    Ok(total / params.bond_yield.powi(n as i32))
}

/// Vertical displacement at half-span `x` of an axis with substrate
/// half-length `l`.
///
/// Exact mode evaluates `coef * (x^2/2 - (cosh(kx) - 1) / (k^2 cosh(kl)))`;
/// quadratic mode substitutes `(kx)^2 / 2` for `cosh(kx) - 1`, which keeps
/// the displacement zero at the package center and monotone over `[0, l]`
/// for positive prefactors. Both modes are even in `x`, enforced here by
/// the domain restriction to nonnegative half-spans.
pub fn warpage(x: f64, l: f64, m: &MaterialParams, mode: WarpageMode) -> Result<f64> {
    if x < 0.0 || x > l {
        return Err(Error::WarpageDomain { x, l });
    }
    let k = m.decay_k;
    let coef = m.coefficient();
    let bracket = match mode {
        WarpageMode::Exact => x * x / 2.0 - ((k * x).cosh() - 1.0) / (k * k * (k * l).cosh()),
        WarpageMode::Quadratic => x * x / 2.0 - (x * x / 2.0) / (k * l).cosh(),
    };
    Ok(coef * bracket)
}

/// Per-axis warpage of a placement, quadratic mode.
///
/// The half-span argument per axis is half the extent of the placement's
/// bounding box along that axis. Returns `(wpg_x, wpg_y, feasible)` where
/// feasibility means both axes stay at or below the threshold.
pub fn warpage_check(
    chiplets: &[ChipletDef],
    placement: &Placement,
    m: &MaterialParams,
) -> Result<(f64, f64, bool)> {
    let bbox = placement.bounding_box(chiplets)?;
    let half_x = bbox.w / 2.0;
    let half_y = bbox.h / 2.0;
    if half_x > m.half_len_x {
        return Err(Error::SubstrateExceeded { axis: 'x', span: half_x, l: m.half_len_x });
    }
    if half_y > m.half_len_y {
        return Err(Error::SubstrateExceeded { axis: 'y', span: half_y, l: m.half_len_y });
    }
    let wpg_x = warpage(half_x, m.half_len_x, m, WarpageMode::Quadratic)?;
    let wpg_y = warpage(half_y, m.half_len_y, m, WarpageMode::Quadratic)?;
    let feasible = wpg_x <= m.warpage_threshold && wpg_y <= m.warpage_threshold;
    Ok((wpg_x, wpg_y, feasible))
}

/// Hotspot-bump clearance: the chiplet center must keep at least its
/// circumscribed-circle radius plus the margin radius away from the bump.
/// The inequality is non-strict, so touching the margin exactly is legal.
pub fn bump_clearance(rect: &Rect, bump: (f64, f64), margin_radius: f64) -> bool {
    let (cx, cy) = rect.center();
    let dx = cx - bump.0;
    let dy = cy - bump.1;
    let required = rect.circumradius() + margin_radius;
    dx * dx + dy * dy >= required * required
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PlacedChiplet, Placement};
    use proptest::prelude::*;

    fn chiplet(id: usize, w: f64, h: f64) -> ChipletDef {
        ChipletDef { id, name: format!("c{id}"), width_o: w, height_o: h, function: "block".into() }
    }

    #[test]
    fn die_yield_limits() {
        let mut p = CostParams::default();
        p.defect_density_per_cm2 = 0.0;
        assert_eq!(die_yield(3.0, &p).unwrap(), 1.0);
        let p = CostParams::default();
        assert_eq!(die_yield(0.0, &p).unwrap(), 1.0);
        assert!(matches!(die_yield(-0.1, &p), Err(Error::NegativeArea(_))));
    }

    #[test]
    fn die_yield_seven_nm_point() {
        // 7 nm typicals: d0 = 0.09 / cm^2, alpha = 10. Frozen from a
        // 40-digit arbitrary-precision evaluation of (1 + 0.009)^(-10).
        let p = CostParams::default();
        let y = die_yield(1.0, &p).unwrap();
        let expect = 0.914_299_195_505_074_99;
        assert!((y - expect).abs() / expect < 1e-12, "y = {y}");
    }

    #[test]
    fn die_yield_exponential_limit() {
        let mut p = CostParams::default();
        p.alpha_cluster = 1e6;
        let y = die_yield(1.0, &p).unwrap();
        let exp = (-0.09f64).exp();
        assert!((y - exp).abs() / exp < 1e-6);
    }

    #[test]
    fn cost_per_yielded_area_modes() {
        let p = CostParams::default();
        assert_eq!(cost_per_yielded_area(0.0, &p, CostMode::Exact).unwrap(), 10.0);
        assert_eq!(cost_per_yielded_area(0.0, &p, CostMode::Taylor).unwrap(), 10.0);

        let exact = cost_per_yielded_area(0.1, &p, CostMode::Exact).unwrap();
        let taylor = cost_per_yielded_area(0.1, &p, CostMode::Taylor).unwrap();
        assert!((exact - taylor).abs() / exact < 1e-4);

        // Reciprocal of the frozen die-yield oracle value at s = 1.
        let at_one = cost_per_yielded_area(1.0, &p, CostMode::Exact).unwrap();
        assert!((at_one - 10.0 * 1.093_733_872_802_526_5).abs() < 1e-9);
    }

    #[test]
    fn assembly_cost_substitution() {
        let mut p = CostParams::default();
        p.package_cost = 5.0;
        p.substrate_cost = 2.0;
        p.interposer_yield = 1.0;
        p.chiplet_bond_yield = 1.0;
        p.interposer_bond_yield = 1.0;
        assert_eq!(package_assembly_cost(3, &p, 10.0).unwrap(), 5.0);

        p.interposer_yield = 0.9;
        p.chiplet_bond_yield = 0.9;
        p.interposer_bond_yield = 0.9;
        let got = package_assembly_cost(1, &p, 10.0).unwrap();
        // Direct substitution, frozen: 5 + 10*(1/0.729 - 1) + 2*(1/0.9 - 1).
        let expect = 8.939_643_347_050_754;
        assert!((got - expect).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn assembly_cost_monotone_in_n() {
        let p = CostParams::default();
        let mut prev = 0.0;
        for n in 1..10 {
            let c = package_assembly_cost(n, &p, 10.0).unwrap();
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn cost_2_5d_perfect_yield_collapse() {
        let mut p = CostParams::default();
        p.interposer_yield = 1.0;
        p.chiplet_bond_yield = 1.0;
        p.interposer_bond_yield = 1.0;
        p.package_yield = 1.0;
        p.bond_yield = 1.0;
        p.bond_cost_per_chiplet = 0.0;
        p.chiplet_yield_override = Some(vec![Some(1.0), Some(1.0)]);
        let chiplets = vec![chiplet(0, 1000.0, 1000.0), chiplet(1, 2000.0, 1000.0)];
        let placement = Placement::new(vec![
            PlacedChiplet { x: 0.0, y: 0.0, rotated: false },
            PlacedChiplet { x: 1000.0, y: 0.0, rotated: false },
        ]);
        let got = cost_2_5d(&chiplets, &placement, &p).unwrap();
        // All yields 1, bonding free: package cost plus raw chip costs.
        let s0 = 1e6 / UM2_PER_CM2;
        let s1 = 2e6 / UM2_PER_CM2;
        let expect = p.package_cost
            + cost_per_yielded_area(s0, &p, CostMode::Exact).unwrap() * s0
            + cost_per_yielded_area(s1, &p, CostMode::Exact).unwrap() * s1;
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn cost_2_5d_bond_yield_ratio() {
        let mut perfect = CostParams::default();
        perfect.bond_yield = 1.0;
        let mut degraded = perfect.clone();
        degraded.bond_yield = 0.9;
        let chiplets = vec![chiplet(0, 1000.0, 1000.0), chiplet(1, 1000.0, 1000.0)];
        let placement = Placement::new(vec![
            PlacedChiplet { x: 0.0, y: 0.0, rotated: false },
            PlacedChiplet { x: 1000.0, y: 0.0, rotated: false },
        ]);
        let a = cost_2_5d(&chiplets, &placement, &perfect).unwrap();
        let b = cost_2_5d(&chiplets, &placement, &degraded).unwrap();
        assert!((b / a - 1.0 / 0.81).abs() < 1e-12);
    }

    #[test]
    fn cost_2_5d_c8_fixture_direct_substitution() {
        let inst = crate::fixtures::c8_instance();
        let placement = crate::fixtures::c8_grid_placement();
        let got = cost_2_5d(&inst.chiplets, &placement, &inst.costs).unwrap();

        // Spreadsheet-style oracle: every factor substituted explicitly.
        let p = &inst.costs;
        let pa = crate::model::package_area(&inst.chiplets, &placement).unwrap() / UM2_PER_CM2;
        let n = inst.chiplets.len();
        let denom = p.interposer_yield * p.chiplet_bond_yield.powi(n as i32) * p.interposer_bond_yield;
        let assembled = p.package_cost
            + p.interposer_cost_per_cm2 * pa * (1.0 / denom - 1.0)
            + p.substrate_cost * (1.0 / p.interposer_bond_yield - 1.0);
        let mut expect = assembled / p.package_yield;
        for c in &inst.chiplets {
            let s = c.area() / UM2_PER_CM2;
            let y = (1.0 + p.defect_density_per_cm2 * s / p.alpha_cluster).powf(-p.alpha_cluster);
            expect += (p.wafer_price_per_cm2 / y) * s / y + p.bond_cost_per_chiplet;
        }
        expect /= p.bond_yield.powi(n as i32);
        assert!((got - expect).abs() / expect < 1e-12);
        // Frozen from the arbitrary-precision oracle.
        assert!((got - 7.294_280_664_260_279).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn warpage_zero_cases() {
        let m = MaterialParams::default();
        assert_eq!(warpage(0.0, m.half_len_x, &m, WarpageMode::Exact).unwrap(), 0.0);
        assert_eq!(warpage(0.0, m.half_len_x, &m, WarpageMode::Quadratic).unwrap(), 0.0);
        let mut cold = m;
        cold.delta_t = 0.0;
        for x in [0.0, 1000.0, 5000.0] {
            assert_eq!(warpage(x, m.half_len_x, &cold, WarpageMode::Exact).unwrap(), 0.0);
        }
    }

    #[test]
    fn warpage_domain_errors() {
        let m = MaterialParams::default();
        assert!(matches!(warpage(-1.0, 5000.0, &m, WarpageMode::Exact), Err(Error::WarpageDomain { .. })));
        assert!(matches!(warpage(5001.0, 5000.0, &m, WarpageMode::Exact), Err(Error::WarpageDomain { .. })));
    }

    #[test]
    fn warpage_default_midpoint_frozen() {
        // Frozen from a 40-digit evaluation of both modes at x = l/2.
        let m = MaterialParams::default();
        let exact = warpage(2500.0, m.half_len_x, &m, WarpageMode::Exact).unwrap();
        let quad = warpage(2500.0, m.half_len_x, &m, WarpageMode::Quadratic).unwrap();
        assert!((exact - 2.114_572_390_876_329_5e-3).abs() < 1e-15);
        assert!((quad - 2.199_660_789_600_716_3e-3).abs() < 1e-15);
    }

    #[test]
    fn warpage_check_small_and_spanning() {
        let m = MaterialParams::default();
        let tiny = vec![chiplet(0, 10.0, 10.0)];
        let placement = Placement::new(vec![PlacedChiplet { x: 2495.0, y: 2495.0, rotated: false }]);
        let (wx, wy, feasible) = warpage_check(&tiny, &placement, &m).unwrap();
        assert!(feasible && wx < m.warpage_threshold && wy < m.warpage_threshold);

        // A hot, full-substrate span exceeds the threshold: at x = l the
        // quadratic bracket is l^2/2 * (1 - 1/cosh(kl)).
        let mut hot = m;
        hot.delta_t = 1000.0;
        let wide = vec![chiplet(0, 10000.0, 10000.0)];
        let placement = Placement::new(vec![PlacedChiplet { x: 0.0, y: 0.0, rotated: false }]);
        let (wx, _, feasible) = warpage_check(&wide, &placement, &hot).unwrap();
        assert!(!feasible);
        assert!(wx > hot.warpage_threshold);
    }

    #[test]
    fn warpage_check_rejects_substrate_overrun() {
        let m = MaterialParams::default();
        let wide = vec![chiplet(0, 10002.0, 100.0)];
        let placement = Placement::new(vec![PlacedChiplet { x: 0.0, y: 0.0, rotated: false }]);
        assert!(matches!(
            warpage_check(&wide, &placement, &m),
            Err(Error::SubstrateExceeded { axis: 'x', .. })
        ));
    }

    #[test]
    fn bump_clearance_cases() {
        let r = Rect { x: 0.0, y: 0.0, w: 2.0, h: 2.0 };
        // Center on the bump.
        assert!(!bump_clearance(&r, (1.0, 1.0), 1.0));
        // Exactly at d_cc + d_mr: non-strict boundary is clear.
        let d_cc = r.circumradius();
        assert!(bump_clearance(&r, (1.0 + d_cc + 1.0, 1.0), 1.0));
        // 2x2 at origin, bump at (10, 0), margin 1: 9 >= sqrt(2) + 1.
        assert!(bump_clearance(&r, (10.0, 0.0), 1.0));
    }

    #[test]
    fn bump_clearance_rotation_invariant() {
        let def = chiplet(0, 30.0, 10.0);
        let upright = Placement::new(vec![PlacedChiplet { x: 0.0, y: 0.0, rotated: false }]);
        let (cx, cy) = upright.center(&def);
        let rotated = Placement::new(vec![PlacedChiplet {
            x: cx - def.height_o / 2.0,
            y: cy - def.width_o / 2.0,
            rotated: true,
        }]);
        for bump in [(5.0, 5.0), (40.0, 0.0), (cx, cy), (18.0, 9.0)] {
            assert_eq!(
                bump_clearance(&upright.rect(&def), bump, 2.0),
                bump_clearance(&rotated.rect(&def), bump, 2.0),
            );
        }
    }

    proptest! {
        #[test]
        fn yield_decreasing_cost_increasing(step in 1usize..100) {
            let p = CostParams::default();
            let s0 = 4.0 * (step - 1) as f64 / 100.0;
            let s1 = 4.0 * step as f64 / 100.0;
            prop_assert!(die_yield(s1, &p).unwrap() < die_yield(s0, &p).unwrap());
            prop_assert!(
                cost_per_yielded_area(s1, &p, CostMode::Exact).unwrap()
                    > cost_per_yielded_area(s0, &p, CostMode::Exact).unwrap()
            );
        }

        #[test]
        fn quadratic_warpage_monotone(
            t in 1.0f64..500.0,
            da in 1e-7f64..1e-4,
            dt in 1.0f64..500.0,
            lambda in 0.1f64..10.0,
            d in 1e4f64..1e9,
            kl in 0.05f64..1.0,
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            let l = 5000.0;
            let m = MaterialParams {
                t, delta_alpha: da, delta_t: dt, lambda, flex_d: d,
                decay_k: kl / l, half_len_x: l, half_len_y: l,
                warpage_threshold: 1.0,
            };
            let (lo, hi) = if a <= b { (a * l, b * l) } else { (b * l, a * l) };
            let w_lo = warpage(lo, l, &m, WarpageMode::Quadratic).unwrap();
            let w_hi = warpage(hi, l, &m, WarpageMode::Quadratic).unwrap();
            prop_assert!(w_hi >= w_lo - 1e-18);
        }

        #[test]
        fn cost_2_5d_decreasing_in_each_yield(which in 0usize..5) {
            let chiplets = vec![chiplet(0, 1000.0, 1000.0), chiplet(1, 1500.0, 900.0)];
            let placement = Placement::new(vec![
                PlacedChiplet { x: 0.0, y: 0.0, rotated: false },
                PlacedChiplet { x: 1000.0, y: 0.0, rotated: false },
            ]);
            let bump = |p: &mut CostParams, v: f64| match which {
                0 => p.interposer_yield = v,
                1 => p.chiplet_bond_yield = v,
                2 => p.interposer_bond_yield = v,
                3 => p.package_yield = v,
                _ => p.bond_yield = v,
            };
            let mut low = CostParams::default();
            bump(&mut low, 0.8);
            let mut high = CostParams::default();
            bump(&mut high, 0.95);
            let c_low = cost_2_5d(&chiplets, &placement, &low).unwrap();
            let c_high = cost_2_5d(&chiplets, &placement, &high).unwrap();
            prop_assert!(c_low > c_high);
        }
    }
}
