//! Coevolutionary Optional Prisoner's Dilemma on a weighted torus lattice.
//!
//! Agents on a periodic square lattice play the three-strategy Optional
//! Prisoner's Dilemma (cooperate, defect, abstain) with their eight Moore
//! neighbors. Link weights coevolve with strategies: edges whose utility
//! beats the agent's neighborhood mean are strengthened, the rest
//! weakened, and imitation follows accumulated-utility differences.

pub mod config;
pub mod engine;
pub mod error;
pub mod game;
pub mod lattice;
pub mod runner;
pub mod scenarios;
pub mod snapshot;
pub mod timeseries;

pub use config::{parse_config, RunConfig};
pub use engine::{
    accumulated_utility, adoption_probability, average_utility, inner_step, mc_step, run,
    update_link_weights, utility, Observer, RngStream, RunOptions, RunResult, StepReport,
};
pub use error::{Error, Result};
pub use game::{payoff, GameParams, Strategy, STRATEGIES};
pub use lattice::{Lattice, StrategyCounts};
pub use runner::{run_replicates, ReplicateSummary};
pub use scenarios::{
    init_two_species, init_uniform_thirds, mutate_species, neighborhood_census, replace_species,
    reset_weights, Init, MutationSpec, ScenarioSpec, Survivors,
};
pub use snapshot::{read_snapshot, Snapshot};
pub use timeseries::{TimeSeries, TimeSeriesRow};
