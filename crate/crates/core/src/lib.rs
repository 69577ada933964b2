//! System-level coexistence simulator for the 70/80 GHz bands.
//!
//! Models aggregate uplink interference from outdoor 5G user terminals into
//! incumbent fixed point-to-point microwave receivers. The crate is organized
//! as a set of small, independently testable kernels:
//!
//! * [`geo`] — local planar projection, building footprints, a uniform-grid
//!   spatial index, link blockage, and off-axis angle geometry.
//! * [`antenna`] — receive-side lookup patterns for fixed stations and the
//!   two-stage (beam + element) transmit model for user terminals.
//! * [`propagation`] — street-canyon path loss with LOS/NLOS branches,
//!   log-normal shadowing hooks, and thermal noise.
//! * [`ingest`] — loaders and writers for the fixed-station CSV database,
//!   building-footprint GeoJSON, and scenario TOML files.
//! * [`fs_analytics`] — deployment-geometry statistics over a fixed-station
//!   database (density, heights, tilts, beamwidths).
//! * [`engine`] — Monte Carlo driver: drops user terminals, evaluates every
//!   terminal-to-receiver link, and aggregates interference-to-noise ratios.
//! * [`stats`] — empirical distributions (CDF/PDF/percentiles) and CSV
//!   emitters for simulation outputs.
//! * [`synth`] — synthetic scene generators (station registries, block-grid
//!   building layouts, scenario files) for tests and demos.
//!
//! All simulation randomness flows from a single root seed through named,
//! counter-derived substreams, so results are reproducible bit-for-bit across
//! runs and across worker-thread counts.

pub mod antenna;
pub mod engine;
pub mod fs_analytics;
pub mod geo;
pub mod ingest;
pub mod propagation;
pub mod stats;
pub mod synth;

pub use antenna::{FsAntenna, PatternTable, UeAntenna};
pub use engine::{InrReport, RunOptions, RunResult, UserTerminal};
pub use geo::{BuildingIndex, Footprint, GeoPoint, OffAxisAngles, PlanarPoint};
pub use ingest::{FixedStation, Scenario, ScenarioConfig};
pub use propagation::{NoiseConfig, PathLossConfig};
pub use stats::EmpiricalDistribution;
