//! Force laws and the fixed-timestep integrator.

mod forces;
mod world;

pub use forces::{
    combine_profiles, elastic_magnitude, pair_force, target_force, zone_c_slope, zone_viscosity,
    PairLaw, SimParams, COINCIDENT_EPSILON, DEFAULT_ZONE_C_AMPLIFICATION,
};
pub use world::{
    run_scene, run_scene_with_strategy, stable_dt_limit, stiffest_zone_c_slope, NeighborStrategy,
    NumericalInstability, RunStats, World, PERSON_MASS,
};
