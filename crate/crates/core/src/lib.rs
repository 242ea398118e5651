//! Chiplet floorplanning toolkit for 2.5D interposer packages.
//!
//! The crate covers the full pipeline: partitioning an SoC hierarchy into
//! a chiplet pool, placing the chiplets on a fixed-outline interposer
//! under cost, warpage, and bump-stress models, simulating inter-chiplet
//! traffic on the result, and re-running the floorplan with the measured
//! traffic to cut communication cost.
//!
//! Modules:
//! * [`model`] - shared domain types, geometry, and solution validation
//! * [`costrel`] - yield/cost models, warpage, bump clearance
//! * [`partition`] - hierarchy partitioning into a chiplet pool
//! * [`traffic`] - latency table, workload generators, packet simulation
//! * [`floorplan`] - relative-order encoding, annealer, exact oracle
//! * [`schema`] - JSON document formats
//! * [`report`] - two-stage comparison reports
//! * [`render`] - SVG output
//! * [`fixtures`] - bundled benchmark instances

pub mod costrel;
pub mod error;
pub mod fixtures;
pub mod floorplan;
pub mod model;
pub mod partition;
pub mod render;
pub mod report;
pub mod schema;
pub mod traffic;

pub use error::{Error, Result};
