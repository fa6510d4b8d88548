//! Run configuration: TOML key/value parsing with paper defaults.
//!
//! Missing keys fall back to the experimental defaults (side 102,
//! 10^6 steps, 10 replicates, b=1.9, l=0.5, Δ=0.24, δ=0.8). Unknown keys
//! are rejected.

use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::game::{GameParams, Strategy};
use crate::scenarios::{Init, MutationSpec, ScenarioSpec};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub side: usize,
    pub n_steps: usize,
    pub n_replicates: usize,
    pub params: GameParams,
    pub scenario: ScenarioSpec,
    pub seed: u64,
    pub record_every: usize,
    pub snapshot_steps: Vec<usize>,
    pub early_stop_on_absorption: bool,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            side: 102,
            n_steps: 1_000_000,
            n_replicates: 10,
            params: GameParams::coevolution_default(),
            scenario: ScenarioSpec::default(),
            seed: 1,
            record_every: 1,
            snapshot_steps: Vec::new(),
            early_stop_on_absorption: false,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.side < 3 {
            return Err(Error::Config(format!("side must be >= 3, got {}", self.side)));
        }
        if self.n_replicates < 1 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        if self.record_every < 1 {
            return Err(Error::Config("record_every must be >= 1".into()));
        }
        self.scenario.validate()?;
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    side: Option<usize>,
    steps: Option<usize>,
    replicates: Option<usize>,
    b: Option<f64>,
    l: Option<f64>,
    delta_step: Option<f64>,
    delta_max: Option<f64>,
    seed: Option<u64>,
    record_every: Option<usize>,
    snapshot_steps: Option<Vec<usize>>,
    early_stop_on_absorption: Option<bool>,
    out: Option<String>,
    scenario: Option<RawScenario>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    init: Option<RawInit>,
    mutation: Option<RawMutation>,
    reset_weights: Option<bool>,
}

#[derive(Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawInit {
    UniformThirds,
    TwoSpecies(String, String),
    FromSnapshot(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMutation {
    from: String,
    to: String,
    rate: Option<f64>,
    keep_count: Option<usize>,
    keep_at: Option<(usize, usize)>,
}

/// Parses a TOML document into a validated RunConfig.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let defaults = RunConfig::default();
    let params = GameParams::new(
        raw.b.unwrap_or(defaults.params.b),
        raw.l.unwrap_or(defaults.params.l),
        raw.delta_step.unwrap_or(defaults.params.delta_step),
        raw.delta_max.unwrap_or(defaults.params.delta_max),
    )?;
    let scenario = match raw.scenario {
        None => ScenarioSpec::default(),
        Some(raw_sc) => {
            let init = match raw_sc.init {
                None => Init::UniformThirds,
                Some(RawInit::UniformThirds) => Init::UniformThirds,
                Some(RawInit::TwoSpecies(a, b)) => {
                    Init::TwoSpecies(Strategy::from_str(&a)?, Strategy::from_str(&b)?)
                }
                Some(RawInit::FromSnapshot(path)) => Init::FromSnapshot(PathBuf::from(path)),
            };
            let mutation = raw_sc
                .mutation
                .map(|m| -> Result<MutationSpec> {
                    Ok(MutationSpec {
                        from: Strategy::from_str(&m.from)?,
                        to: Strategy::from_str(&m.to)?,
                        rate: m.rate.unwrap_or(0.0),
                        keep_count: m.keep_count,
                        keep_at: m.keep_at,
                    })
                })
                .transpose()?;
            ScenarioSpec {
                init,
                mutation,
                reset_weights: raw_sc.reset_weights.unwrap_or(false),
            }
        }
    };
    let config = RunConfig {
        side: raw.side.unwrap_or(defaults.side),
        n_steps: raw.steps.unwrap_or(defaults.n_steps),
        n_replicates: raw.replicates.unwrap_or(defaults.n_replicates),
        params,
        scenario,
        seed: raw.seed.unwrap_or(defaults.seed),
        record_every: raw.record_every.unwrap_or(defaults.record_every),
        snapshot_steps: raw.snapshot_steps.unwrap_or_default(),
        early_stop_on_absorption: raw
            .early_stop_on_absorption
            .unwrap_or(defaults.early_stop_on_absorption),
        out_dir: raw.out.map(PathBuf::from).unwrap_or(defaults.out_dir),
    };
    config.validate()?;
    Ok(config)
}
