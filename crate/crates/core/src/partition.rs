//! SoC hierarchy partitioning into a chiplet pool.
//!
//! A hierarchy tree of synthesized areas is walked recursively: subtrees
//! too large to be a single chiplet recurse, siblings too small combine
//! into a residual, and everything inside the target area range becomes a
//! chiplet. Dimensions are realized afterwards from a seeded aspect-ratio
//! draw.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ChipletDef;

/// Node of the SoC hierarchy. Leaves carry synthesized areas; internal
/// areas equal the sum of their children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierNode {
    pub name: String,
    pub area: f64,
    pub function: String,
    pub children: Vec<HierNode>,
}

impl HierNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Names of all leaves under this node, in document order.
    pub fn leaf_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<String>) {
        if self.is_leaf() {
            out.push(self.name.clone());
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    /// Total leaf area under this node.
    pub fn leaf_area(&self) -> f64 {
        if self.is_leaf() {
            self.area
        } else {
            self.children.iter().map(HierNode::leaf_area).sum()
        }
    }
}

/// Area-range rule parameters: relaxation ratio and the typical
/// minimum/maximum chiplet counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    pub rr: f64,
    pub c_min: usize,
    pub c_max: usize,
}

impl PartitionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rr >= 1.0) {
            return Err(Error::InvalidParam(format!("relaxation ratio {} must be >= 1", self.rr)));
        }
        if !(self.c_min >= 1 && self.c_min < self.c_max) {
            return Err(Error::InvalidParam(format!(
                "chiplet count range requires 1 <= c_min < c_max, got ({}, {})",
                self.c_min, self.c_max
            )));
        }
        Ok(())
    }
}

/// One chiplet candidate produced by the partitioner, before dimensions
/// are realized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub name: String,
    pub area: f64,
    pub function: String,
    /// Leaf names that contributed to this entry.
    pub provenance: Vec<String>,
    /// True for an end-of-level residual that stayed below the minimum
    /// area.
    pub residual: bool,
}

const AREA_MATCH_TOL: f64 = 1e-6;

/// Validates a raw hierarchy tree: positive leaf areas, unique sibling
/// names, and internal areas matching their children. Internal nodes with
/// `area <= 0` are treated as unstated and auto-filled bottom-up.
/// `path` is the slash-joined location used in diagnostics.
pub fn validate_hierarchy(node: &mut HierNode, path: &str) -> Result<()> {
    let here = if path.is_empty() { node.name.clone() } else { format!("{path}/{}", node.name) };
    if node.is_leaf() {
        if !(node.area > 0.0) {
            return Err(Error::HierarchyParse {
                path: here,
                reason: format!("leaf area {} must be positive", node.area),
            });
        }
        return Ok(());
    }
    let mut seen = std::collections::HashSet::new();
    for child in &node.children {
        if !seen.insert(child.name.clone()) {
            return Err(Error::HierarchyParse {
                path: here,
                reason: format!("duplicate sibling name `{}`", child.name),
            });
        }
    }
    let mut sum = 0.0;
    for child in &mut node.children {
        validate_hierarchy(child, &here)?;
        sum += child.area;
    }
    if node.area > 0.0 {
        if (node.area - sum).abs() > AREA_MATCH_TOL * sum.max(node.area) {
            return Err(Error::HierarchyParse {
                path: here,
                reason: format!("stated area {} does not match children sum {sum}", node.area),
            });
        }
    }
    node.area = sum;
    Ok(())
}

/// Area-range rule: `a_min = a_soc * rr / c_max`, `a_max = a_soc * rr /
/// c_min`.
pub fn area_bounds(a_soc: f64, cfg: &PartitionConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if !(a_soc > 0.0) {
        return Err(Error::InvalidParam(format!("SoC area {a_soc} must be positive")));
    }
    let a_min = a_soc * cfg.rr / cfg.c_max as f64;
    let a_max = a_soc * cfg.rr / cfg.c_min as f64;
    Ok((a_min, a_max))
}

struct ResidualAcc {
    area: f64,
    parts: Vec<String>,
    provenance: Vec<String>,
    functions: Vec<String>,
}

impl ResidualAcc {
    fn new() -> Self {
        ResidualAcc { area: 0.0, parts: Vec::new(), provenance: Vec::new(), functions: Vec::new() }
    }

    fn comb(&mut self, node: &HierNode) {
        self.area += node.area;
        self.parts.push(node.name.clone());
        self.provenance.extend(node.leaf_names());
        self.functions.push(node.function.clone());
    }

    fn flush(self, parent: &str, counter: &mut usize, a_min: f64) -> PoolEntry {
        let idx = *counter;
        *counter += 1;
        let function = if self.functions.windows(2).all(|w| w[0] == w[1]) {
            self.functions.first().cloned().unwrap_or_default()
        } else {
            "mixed".to_string()
        };
        PoolEntry {
            name: format!("{parent}_res{idx}"),
            area: self.area,
            function,
            provenance: self.provenance,
            residual: self.area < a_min,
        }
    }
}

/// Recursive partition of a hierarchy tree into a chiplet pool.
///
/// Children above `a_max` recurse (a leaf that large is a hard error),
/// children below `a_min` accumulate into a residual, and in-range
/// children are emitted directly. The residual flushes early whenever it
/// reaches `a_min` and once more at the end of the level; only the final
/// flush may stay under `a_min` and is then flagged.
pub fn par_chiplet(tree: &HierNode, a_min: f64, a_max: f64) -> Result<Vec<PoolEntry>> {
    if !(a_min < a_max) {
        return Err(Error::InvalidParam(format!("area range ({a_min}, {a_max}) is empty")));
    }
    if tree.is_leaf() {
        // Single-node tree: the leaf itself is the only candidate.
        if tree.area > a_max {
            return Err(Error::OversizedLeaf { name: tree.name.clone(), area: tree.area, a_max });
        }
        return Ok(vec![PoolEntry {
            name: tree.name.clone(),
            area: tree.area,
            function: tree.function.clone(),
            provenance: vec![tree.name.clone()],
            residual: tree.area < a_min,
        }]);
    }
    let mut pool = Vec::new();
    walk(tree, a_min, a_max, &mut pool)?;
    Ok(pool)
}

fn walk(node: &HierNode, a_min: f64, a_max: f64, pool: &mut Vec<PoolEntry>) -> Result<()> {
    let mut residual: Option<ResidualAcc> = None;
    let mut flush_counter = 0usize;
    for child in &node.children {
        if child.area > a_max {
            if child.is_leaf() {
                return Err(Error::OversizedLeaf {
                    name: child.name.clone(),
                    area: child.area,
                    a_max,
                });
            }
            walk(child, a_min, a_max, pool)?;
        } else if child.area < a_min {
            let acc = residual.get_or_insert_with(ResidualAcc::new);
            acc.comb(child);
            if acc.area >= a_min {
                let acc = residual.take().unwrap();
                pool.push(acc.flush(&node.name, &mut flush_counter, a_min));
            }
        } else {
            pool.push(PoolEntry {
                name: child.name.clone(),
                area: child.area,
                function: child.function.clone(),
                provenance: child.leaf_names(),
                residual: false,
            });
        }
    }
    if let Some(acc) = residual {
        pool.push(acc.flush(&node.name, &mut flush_counter, a_min));
    }
    Ok(())
}

/// Merges `extra` into `pool`, dropping entries whose `(name, area)` pair
/// already exists. Identical sub-blocks reappearing across SoCs are the
/// same IP and keep a single pool slot; entries within one tree are never
/// deduplicated.
pub fn merge_pools(pool: &mut Vec<PoolEntry>, extra: Vec<PoolEntry>) {
    for e in extra {
        let dup = pool.iter().any(|p| p.name == e.name && (p.area - e.area).abs() <= 1e-9 * e.area.max(1.0));
        if !dup {
            pool.push(e);
        }
    }
}

/// Assigns width/height to pool entries from a seeded aspect-ratio draw.
///
/// Each entry draws `rho` uniformly from `[rho_min, rho_max]` and gets
/// `w = sqrt(area * rho)`, `h = sqrt(area / rho)`, preserving its area.
/// Identical seeds give identical output.
pub fn realize_dimensions(
    pool: &[PoolEntry],
    aspect_range: (f64, f64),
    seed: u64,
) -> Result<Vec<ChipletDef>> {
    let (rho_min, rho_max) = aspect_range;
    if !(rho_min > 0.0 && rho_min <= rho_max) {
        return Err(Error::InvalidParam(format!(
            "aspect range ({rho_min}, {rho_max}) must satisfy 0 < min <= max"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_ASPECT);
    let mut out = Vec::with_capacity(pool.len());
    for (id, entry) in pool.iter().enumerate() {
        let rho = if rho_min == rho_max { rho_min } else { rng.gen_range(rho_min..=rho_max) };
        out.push(ChipletDef {
            id,
            name: entry.name.clone(),
            width_o: (entry.area * rho).sqrt(),
            height_o: (entry.area / rho).sqrt(),
            function: entry.function.clone(),
        });
    }
    Ok(out)
}

/// ChaCha stream ids deriving independent generators from one user seed.
pub const STREAM_ASPECT: u64 = 3;
