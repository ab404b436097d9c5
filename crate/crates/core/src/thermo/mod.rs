//! Partition functions, entropy and pressure estimators, and the checks built on them.

pub mod checks;
pub mod entropy_point;
pub mod estimate;
pub mod glw;
pub mod partition;

pub use checks::{subadditivity_check, variation_bound_check, SubadditivityReport, VariationReport};
pub use entropy_point::{entropy_point_probe, entropy_point_scan, EntropyPointReport};
pub use estimate::{
    delta_star, estimate_entropy, estimate_pressure, fit_slope, pressure_curve, EstimateReport,
    PressureCurve, Schedule,
};
pub use glw::{bis_quotient, distinct_elements, glw_count_exact, glw_count_grid, glw_entropy, BisReport};
pub use partition::{partition_function, shared_sets, PartitionFunctionSample, SetOptions, SharedSets};
