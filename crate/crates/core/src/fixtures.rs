//! Bundled benchmark instances.
//!
//! The JSON files under `benchmarks/` are the single source of truth;
//! they are embedded at compile time and parsed through the regular
//! document schemas, so every accessor here also exercises the parsers.

use crate::model::{FloorplanInstance, PlacedChiplet, Placement};
use crate::partition::HierNode;
use crate::schema;
use crate::traffic::Workload;

pub const C8_INSTANCE_JSON: &str = include_str!("../../../benchmarks/c8_instance.json");
pub const C16_INSTANCE_JSON: &str = include_str!("../../../benchmarks/c16_instance.json");
pub const HOTSPOT_INSTANCE_JSON: &str = include_str!("../../../benchmarks/hotspot_instance.json");
pub const SOC_TREE_14_JSON: &str = include_str!("../../../benchmarks/soc_tree_14.json");
pub const WORKLOAD_UNIFORM_C8_JSON: &str =
    include_str!("../../../benchmarks/workload_uniform_c8.json");
pub const WORKLOAD_SKEWED_C8_JSON: &str =
    include_str!("../../../benchmarks/workload_skewed_c8.json");
pub const WORKLOAD_SKEWED_C16_JSON: &str =
    include_str!("../../../benchmarks/workload_skewed_c16.json");

/// Eight-chiplet benchmark with twelve nets and two edge hotspots.
pub fn c8_instance() -> FloorplanInstance {
    schema::parse_instance(C8_INSTANCE_JSON).expect("bundled c8 instance parses")
}

/// Sixteen-chiplet benchmark.
pub fn c16_instance() -> FloorplanInstance {
    schema::parse_instance(C16_INSTANCE_JSON).expect("bundled c16 instance parses")
}

/// Four equal tiles, a full net clique, and one origin hotspot whose
/// margin collides with the wirelength-optimal packing.
pub fn hotspot_instance() -> FloorplanInstance {
    schema::parse_instance(HOTSPOT_INSTANCE_JSON).expect("bundled hotspot instance parses")
}

/// Fourteen-leaf, three-level SoC hierarchy.
pub fn soc_tree_14() -> HierNode {
    schema::parse_tree(SOC_TREE_14_JSON).expect("bundled tree parses")
}

pub fn skewed_workload_c8() -> Workload {
    schema::parse_workload(WORKLOAD_SKEWED_C8_JSON, 0).expect("bundled workload parses")
}

pub fn skewed_workload_c16() -> Workload {
    schema::parse_workload(WORKLOAD_SKEWED_C16_JSON, 0).expect("bundled workload parses")
}

/// Fixed hand-placed grid for the c8 chiplets, used by metric oracles.
pub fn c8_grid_placement() -> Placement {
    let at = |x: f64, y: f64| PlacedChiplet { x, y, rotated: false };
    Placement::new(vec![
        at(0.0, 0.0),
        at(1000.0, 0.0),
        at(2000.0, 0.0),
        at(0.0, 1000.0),
        at(1000.0, 1000.0),
        at(2000.0, 1000.0),
        at(0.0, 2500.0),
        at(2000.0, 2500.0),
    ])
}
