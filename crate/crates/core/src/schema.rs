//! File formats.
//!
//! Every document is JSON with a mandatory `version` field, unit suffixes
//! embedded in key names, and unknown keys rejected. The materials, costs,
//! weights, and latency sections of the instance document are optional
//! field-by-field, falling back to the documented defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::costrel::{CostParams, MaterialParams};
use crate::error::{Error, Result};
use crate::model::{
    Board, BumpField, ChipletDef, FloorplanInstance, Net, ObjectiveWeights, PlacedChiplet,
    Placement, SolveReport, Violation,
};
use crate::partition::{HierNode, PoolEntry};
use crate::traffic::{Flow, FrequencyMatrix, GeneratorKind, LatencyTable, Workload};

pub const FORMAT_VERSION: u32 = 1;

fn check_version(version: u32, what: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Document(format!(
            "{what} document version {version} unsupported, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Instance document
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub version: u32,
    pub chiplets: Vec<ChipletDoc>,
    #[serde(default)]
    pub nets: Vec<NetDoc>,
    pub board: BoardDoc,
    #[serde(default)]
    pub bumps: BumpsDoc,
    #[serde(default)]
    pub materials: MaterialsDoc,
    #[serde(default)]
    pub costs: CostsDoc,
    #[serde(default)]
    pub weights: WeightsDoc,
    #[serde(default)]
    pub latency: LatencyDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChipletDoc {
    pub id: usize,
    pub name: String,
    pub width_um: f64,
    pub height_um: f64,
    #[serde(default = "default_function")]
    pub function: String,
}

fn default_function() -> String {
    "block".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetDoc {
    pub id: usize,
    pub endpoints: Vec<usize>,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoardDoc {
    pub width_um: f64,
    pub height_um: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BumpsDoc {
    #[serde(default)]
    pub hotspots: Vec<HotspotDoc>,
    #[serde(default)]
    pub margin_radius_um: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HotspotDoc {
    pub x_um: f64,
    pub y_um: f64,
}

macro_rules! defaulted_doc {
    ($doc:ident, $target:ty, $( $field:ident : $ty:ty => $apply:expr ),+ $(,)?) => {
        #[derive(Debug, Clone, Serialize, Deserialize, Default)]
        #[serde(deny_unknown_fields)]
        pub struct $doc {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )+
        }

        impl $doc {
            /// Overlays the stated fields on the defaults.
            pub fn resolve(&self) -> $target {
                let mut out = <$target>::default();
                $(
                    if let Some(v) = self.$field.clone() {
                        let apply: fn(&mut $target, $ty) = $apply;
                        apply(&mut out, v);
                    }
                )+
                out
            }
        }
    };
}

defaulted_doc!(MaterialsDoc, MaterialParams,
    t_um: f64 => |m, v| m.t = v,
    delta_alpha_per_k: f64 => |m, v| m.delta_alpha = v,
    delta_t_k: f64 => |m, v| m.delta_t = v,
    lambda: f64 => |m, v| m.lambda = v,
    flex_d: f64 => |m, v| m.flex_d = v,
    decay_k_per_um: f64 => |m, v| m.decay_k = v,
    half_len_x_um: f64 => |m, v| m.half_len_x = v,
    half_len_y_um: f64 => |m, v| m.half_len_y = v,
    warpage_threshold_um: f64 => |m, v| m.warpage_threshold = v,
);

defaulted_doc!(CostsDoc, CostParams,
    wafer_price_per_cm2: f64 => |c, v| c.wafer_price_per_cm2 = v,
    defect_density_per_cm2: f64 => |c, v| c.defect_density_per_cm2 = v,
    alpha_cluster: f64 => |c, v| c.alpha_cluster = v,
    package_cost: f64 => |c, v| c.package_cost = v,
    substrate_cost: f64 => |c, v| c.substrate_cost = v,
    interposer_cost_per_cm2: f64 => |c, v| c.interposer_cost_per_cm2 = v,
    bond_cost_per_chiplet: f64 => |c, v| c.bond_cost_per_chiplet = v,
    interposer_yield: f64 => |c, v| c.interposer_yield = v,
    chiplet_bond_yield: f64 => |c, v| c.chiplet_bond_yield = v,
    interposer_bond_yield: f64 => |c, v| c.interposer_bond_yield = v,
    package_yield: f64 => |c, v| c.package_yield = v,
    bond_yield: f64 => |c, v| c.bond_yield = v,
    chiplet_yield_override: Vec<Option<f64>> => |c, v| c.chiplet_yield_override = Some(v),
);

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct WeightsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta4: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
}

impl WeightsDoc {
    pub fn resolve(&self) -> ObjectiveWeights {
        let d = ObjectiveWeights::default();
        ObjectiveWeights {
            beta1: self.beta1.unwrap_or(d.beta1),
            beta2: self.beta2.unwrap_or(d.beta2),
            beta3: self.beta3.unwrap_or(d.beta3),
            beta4: self.beta4.unwrap_or(d.beta4),
            gamma1: self.gamma1.unwrap_or(d.gamma1),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LatencyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints_mm: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// Interface cycles added to every packet; defaults to 4 (a 2 ns
    /// interface bound at 2 GHz).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_cycles: Option<f64>,
}

impl InstanceDocument {
    pub fn into_instance(self) -> Result<FloorplanInstance> {
        check_version(self.version, "instance")?;
        let mut chiplets: Vec<ChipletDef> = self
            .chiplets
            .into_iter()
            .map(|c| ChipletDef {
                id: c.id,
                name: c.name,
                width_o: c.width_um,
                height_o: c.height_um,
                function: c.function,
            })
            .collect();
        chiplets.sort_by_key(|c| c.id);
        let nets = self
            .nets
            .into_iter()
            .map(|n| Net { id: n.id, endpoints: n.endpoints, weight: n.weight })
            .collect();
        let table_default = LatencyTable::default();
        let instance = FloorplanInstance {
            chiplets,
            nets,
            board: Board { width: self.board.width_um, height: self.board.height_um },
            bumps: BumpField {
                hotspots: self.bumps.hotspots.iter().map(|h| (h.x_um, h.y_um)).collect(),
                margin_radius: self.bumps.margin_radius_um,
            },
            materials: self.materials.resolve(),
            costs: self.costs.resolve(),
            weights: self.weights.resolve(),
            latency_table: LatencyTable {
                breakpoints_mm: self
                    .latency
                    .breakpoints_mm
                    .clone()
                    .unwrap_or(table_default.breakpoints_mm),
                weights: self.latency.weights.clone().unwrap_or(table_default.weights),
            },
            base_cycles: self.latency.base_cycles.unwrap_or(4.0),
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn from_instance(instance: &FloorplanInstance) -> Self {
        InstanceDocument {
            version: FORMAT_VERSION,
            chiplets: instance
                .chiplets
                .iter()
                .map(|c| ChipletDoc {
                    id: c.id,
                    name: c.name.clone(),
                    width_um: c.width_o,
                    height_um: c.height_o,
                    function: c.function.clone(),
                })
                .collect(),
            nets: instance
                .nets
                .iter()
                .map(|n| NetDoc { id: n.id, endpoints: n.endpoints.clone(), weight: n.weight })
                .collect(),
            board: BoardDoc { width_um: instance.board.width, height_um: instance.board.height },
            bumps: BumpsDoc {
                hotspots: instance
                    .bumps
                    .hotspots
                    .iter()
                    .map(|&(x, y)| HotspotDoc { x_um: x, y_um: y })
                    .collect(),
                margin_radius_um: instance.bumps.margin_radius,
            },
            materials: MaterialsDoc {
                t_um: Some(instance.materials.t),
                delta_alpha_per_k: Some(instance.materials.delta_alpha),
                delta_t_k: Some(instance.materials.delta_t),
                lambda: Some(instance.materials.lambda),
                flex_d: Some(instance.materials.flex_d),
                decay_k_per_um: Some(instance.materials.decay_k),
                half_len_x_um: Some(instance.materials.half_len_x),
                half_len_y_um: Some(instance.materials.half_len_y),
                warpage_threshold_um: Some(instance.materials.warpage_threshold),
            },
            costs: CostsDoc {
                wafer_price_per_cm2: Some(instance.costs.wafer_price_per_cm2),
                defect_density_per_cm2: Some(instance.costs.defect_density_per_cm2),
                alpha_cluster: Some(instance.costs.alpha_cluster),
                package_cost: Some(instance.costs.package_cost),
                substrate_cost: Some(instance.costs.substrate_cost),
                interposer_cost_per_cm2: Some(instance.costs.interposer_cost_per_cm2),
                bond_cost_per_chiplet: Some(instance.costs.bond_cost_per_chiplet),
                interposer_yield: Some(instance.costs.interposer_yield),
                chiplet_bond_yield: Some(instance.costs.chiplet_bond_yield),
                interposer_bond_yield: Some(instance.costs.interposer_bond_yield),
                package_yield: Some(instance.costs.package_yield),
                bond_yield: Some(instance.costs.bond_yield),
                chiplet_yield_override: instance.costs.chiplet_yield_override.clone(),
            },
            weights: WeightsDoc {
                beta1: Some(instance.weights.beta1),
                beta2: Some(instance.weights.beta2),
                beta3: Some(instance.weights.beta3),
                beta4: Some(instance.weights.beta4),
                gamma1: Some(instance.weights.gamma1),
            },
            latency: LatencyDoc {
                breakpoints_mm: Some(instance.latency_table.breakpoints_mm.clone()),
                weights: Some(instance.latency_table.weights.clone()),
                base_cycles: Some(instance.base_cycles),
            },
        }
    }
}

pub fn load_instance(path: &Path) -> Result<FloorplanInstance> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<FloorplanInstance> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    doc.into_instance()
}

// ---------------------------------------------------------------------------
// Solution document
// ---------------------------------------------------------------------------

/// Solver output as written to disk. Carries enough geometry (board,
/// bumps, effective rectangles) to be rendered stand-alone. Wall-clock
/// time is deliberately absent: documents for one seed are byte-stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub version: u32,
    pub seed: u64,
    pub iterations: u64,
    pub board: BoardDoc,
    pub bumps: BumpsDoc,
    pub placement: Vec<PlacedChipletDoc>,
    pub objective: ObjectiveDoc,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacedChipletDoc {
    pub id: usize,
    pub name: String,
    pub function: String,
    pub x_um: f64,
    pub y_um: f64,
    pub rotated: bool,
    pub width_eff_um: f64,
    pub height_eff_um: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveDoc {
    pub hpwl_um: f64,
    pub hpwl_unweighted_um: f64,
    pub package_area_um2: f64,
    pub warpage_x_um: f64,
    pub warpage_y_um: f64,
    pub cost_2_5d: f64,
    pub com_cost_um: f64,
    pub total: f64,
}

impl SolutionDocument {
    pub fn from_report(instance: &FloorplanInstance, report: &SolveReport) -> Self {
        let b = &report.objective_breakdown;
        SolutionDocument {
            version: FORMAT_VERSION,
            seed: report.seed,
            iterations: report.iterations,
            board: BoardDoc { width_um: instance.board.width, height_um: instance.board.height },
            bumps: BumpsDoc {
                hotspots: instance
                    .bumps
                    .hotspots
                    .iter()
                    .map(|&(x, y)| HotspotDoc { x_um: x, y_um: y })
                    .collect(),
                margin_radius_um: instance.bumps.margin_radius,
            },
            placement: instance
                .chiplets
                .iter()
                .map(|c| {
                    let r = report.placement.rect(c);
                    PlacedChipletDoc {
                        id: c.id,
                        name: c.name.clone(),
                        function: c.function.clone(),
                        x_um: r.x,
                        y_um: r.y,
                        rotated: report.placement.items[c.id].rotated,
                        width_eff_um: r.w,
                        height_eff_um: r.h,
                    }
                })
                .collect(),
            objective: ObjectiveDoc {
                hpwl_um: b.hpwl,
                hpwl_unweighted_um: b.hpwl_unweighted,
                package_area_um2: b.package_area,
                warpage_x_um: b.warpage_x,
                warpage_y_um: b.warpage_y,
                cost_2_5d: b.cost_2_5d,
                com_cost_um: b.com_cost,
                total: b.total,
            },
            violations: report.violations.clone(),
        }
    }

    /// Extracts the placement, checking ids against the instance.
    pub fn placement_for(&self, instance: &FloorplanInstance) -> Result<Placement> {
        check_version(self.version, "solution")?;
        let n = instance.chiplets.len();
        if self.placement.len() != n {
            return Err(Error::PlacementMismatch { expected: n, found: self.placement.len() });
        }
        let mut items = vec![PlacedChiplet { x: 0.0, y: 0.0, rotated: false }; n];
        for p in &self.placement {
            let def = instance.chiplets.get(p.id).ok_or(Error::Document(format!(
                "solution places unknown chiplet id {}",
                p.id
            )))?;
            if def.name != p.name {
                return Err(Error::Document(format!(
                    "solution chiplet {} named `{}`, instance says `{}`",
                    p.id, p.name, def.name
                )));
            }
            items[p.id] = PlacedChiplet { x: p.x_um, y: p.y_um, rotated: p.rotated };
        }
        Ok(Placement::new(items))
    }
}

pub fn load_solution(path: &Path) -> Result<SolutionDocument> {
    let doc: SolutionDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    check_version(doc.version, "solution")?;
    Ok(doc)
}

// ---------------------------------------------------------------------------
// Hierarchy tree and pool documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub version: u32,
    pub root: TreeNodeDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeNodeDoc {
    pub name: String,
    /// Required on leaves; optional on internal nodes, which are filled
    /// bottom-up and cross-checked when stated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_um2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeNodeDoc>,
}

fn tree_node(doc: &TreeNodeDoc, parent_function: &str) -> HierNode {
    let function = doc.function.clone().unwrap_or_else(|| parent_function.to_string());
    HierNode {
        name: doc.name.clone(),
        area: doc.area_um2.unwrap_or(0.0),
        function: function.clone(),
        children: doc.children.iter().map(|c| tree_node(c, &function)).collect(),
    }
}

/// Parses and validates a hierarchy-tree document into a [`HierNode`].
pub fn parse_tree(text: &str) -> Result<HierNode> {
    let doc: TreeDocument = serde_json::from_str(text)?;
    check_version(doc.version, "tree")?;
    let mut root = tree_node(&doc.root, "block");
    crate::partition::validate_hierarchy(&mut root, "")?;
    Ok(root)
}

pub fn load_tree(path: &Path) -> Result<HierNode> {
    parse_tree(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolDocument {
    pub version: u32,
    pub chiplets: Vec<PoolChipletDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolChipletDoc {
    pub id: usize,
    pub name: String,
    pub width_um: f64,
    pub height_um: f64,
    pub area_um2: f64,
    pub function: String,
    pub provenance: Vec<String>,
    pub residual: bool,
}

impl PoolDocument {
    pub fn new(entries: &[PoolEntry], chiplets: &[ChipletDef]) -> Self {
        PoolDocument {
            version: FORMAT_VERSION,
            chiplets: chiplets
                .iter()
                .zip(entries)
                .map(|(c, e)| PoolChipletDoc {
                    id: c.id,
                    name: c.name.clone(),
                    width_um: c.width_o,
                    height_um: c.height_o,
                    area_um2: e.area,
                    function: c.function.clone(),
                    provenance: e.provenance.clone(),
                    residual: e.residual,
                })
                .collect(),
        }
    }
}

pub fn load_pool(path: &Path) -> Result<PoolDocument> {
    let doc: PoolDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    check_version(doc.version, "pool")?;
    Ok(doc)
}

// ---------------------------------------------------------------------------
// Workload document
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadDocument {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flows: Option<Vec<FlowDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorDoc>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowDoc {
    pub src: usize,
    pub dst: usize,
    pub packets: u64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub kind: GeneratorKind,
    pub total_packets: u64,
    /// Optional; when absent the command-line seed governs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl WorkloadDocument {
    /// Resolves the document into a concrete workload; `default_seed`
    /// fills a generator without its own seed.
    pub fn into_workload(self, default_seed: u64) -> Result<Workload> {
        check_version(self.version, "workload")?;
        match (self.flows, self.generator) {
            (Some(flows), None) => Ok(Workload::Flows(
                flows.into_iter().map(|f| Flow { src: f.src, dst: f.dst, packets: f.packets }).collect(),
            )),
            (None, Some(g)) => Ok(Workload::Generator {
                kind: g.kind,
                total_packets: g.total_packets,
                seed: g.seed.unwrap_or(default_seed),
            }),
            _ => Err(Error::Document(
                "workload document needs exactly one of `flows` or `generator`".into(),
            )),
        }
    }
}

pub fn load_workload(path: &Path, default_seed: u64) -> Result<Workload> {
    let doc: WorkloadDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    doc.into_workload(default_seed)
}

pub fn parse_workload(text: &str, default_seed: u64) -> Result<Workload> {
    let doc: WorkloadDocument = serde_json::from_str(text)?;
    doc.into_workload(default_seed)
}

// ---------------------------------------------------------------------------
// Frequency matrix document
// ---------------------------------------------------------------------------

/// Square integer matrix with a chiplet-id header row.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyDocument {
    pub version: u32,
    pub chiplet_ids: Vec<usize>,
    pub matrix: Vec<Vec<u64>>,
}

impl FrequencyDocument {
    pub fn from_matrix(freq: &FrequencyMatrix) -> Self {
        FrequencyDocument {
            version: FORMAT_VERSION,
            chiplet_ids: (0..freq.dim()).collect(),
            matrix: freq.to_rows(),
        }
    }

    pub fn into_matrix(self) -> Result<FrequencyMatrix> {
        check_version(self.version, "frequency")?;
        if self.chiplet_ids != (0..self.matrix.len()).collect::<Vec<_>>() {
            return Err(Error::Document("frequency header must list ids 0..n in order".into()));
        }
        FrequencyMatrix::from_rows(self.matrix)
    }
}

pub fn load_frequency(path: &Path) -> Result<FrequencyMatrix> {
    let doc: FrequencyDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    doc.into_matrix()
}

// ---------------------------------------------------------------------------
// Solver config document
// ---------------------------------------------------------------------------

/// Optional overrides for the annealer, loaded via `--config`. The seed
/// always comes from the command line.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverConfigDocument {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooling_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations_per_temperature: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_relation_flip: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_rotate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_pair_swap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty_out_of_bounds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty_warpage: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty_bump: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_max_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallel_restarts: Option<bool>,
}

impl SolverConfigDocument {
    pub fn resolve(&self, seed: u64) -> Result<crate::floorplan::SolverConfig> {
        check_version(self.version, "solver config")?;
        let mut cfg = crate::floorplan::SolverConfig { seed, ..Default::default() };
        if let Some(v) = self.initial_temperature {
            cfg.initial_temperature = v;
        }
        if let Some(v) = self.cooling_rate {
            cfg.cooling_rate = v;
        }
        if let Some(v) = self.iterations_per_temperature {
            cfg.iterations_per_temperature = v;
        }
        if let Some(v) = self.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = self.move_relation_flip {
            cfg.move_weights.relation_flip = v;
        }
        if let Some(v) = self.move_rotate {
            cfg.move_weights.rotate = v;
        }
        if let Some(v) = self.move_pair_swap {
            cfg.move_weights.pair_swap = v;
        }
        if let Some(v) = self.penalty_out_of_bounds {
            cfg.penalty_out_of_bounds = v;
        }
        if let Some(v) = self.penalty_warpage {
            cfg.penalty_warpage = v;
        }
        if let Some(v) = self.penalty_bump {
            cfg.penalty_bump = v;
        }
        if let Some(v) = self.exact_max_n {
            cfg.exact_max_n = v;
        }
        if let Some(v) = self.parallel_restarts {
            cfg.parallel_restarts = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_solver_config(path: &Path, seed: u64) -> Result<crate::floorplan::SolverConfig> {
    let doc: SolverConfigDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    doc.resolve(seed)
}

/// Serializes any document with a stable, human-diffable layout.
pub fn to_json_pretty<T: Serialize>(doc: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(doc)?;
    out.push('\n');
    Ok(out)
}
