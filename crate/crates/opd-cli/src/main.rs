//! `opd` — coevolutionary Optional Prisoner's Dilemma simulator.
//!
//! Subcommands:
//!   run      seeded replicate runs from a config file and/or flags
//!   perturb  load a snapshot, apply replace/mutate/reset-weights, continue
//!   census   neighborhood strategy counts of one snapshot agent

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use opd_core::{
    neighborhood_census, parse_config, read_snapshot, run_replicates, GameParams, Init,
    MutationSpec, RunConfig, ScenarioSpec, Strategy,
};

#[derive(Parser)]
#[command(name = "opd", version, about = "Coevolutionary Optional Prisoner's Dilemma on a weighted torus lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct RunFlags {
    /// Grid side length (population is side^2)
    #[arg(long)]
    side: Option<usize>,
    /// Monte Carlo steps per replicate
    #[arg(long)]
    steps: Option<usize>,
    /// Temptation to defect, in (1, 2)
    #[arg(long)]
    b: Option<f64>,
    /// Loner's payoff, in (0, 1)
    #[arg(long)]
    l: Option<f64>,
    /// Link-weight increment per update
    #[arg(long)]
    delta_step: Option<f64>,
    /// Link-weight amplitude: weights stay in [1-delta_max, 1+delta_max]
    #[arg(long)]
    delta_max: Option<f64>,
    /// Base seed; replicate i uses seed + i
    #[arg(long)]
    seed: Option<u64>,
    /// Number of replicate runs
    #[arg(long)]
    replicates: Option<usize>,
    /// Record a time-series row every this many steps
    #[arg(long)]
    record_every: Option<usize>,
    /// Steps at which to write snapshots (repeatable)
    #[arg(long = "snapshot-step")]
    snapshot_steps: Vec<usize>,
    /// Stop a replicate as soon as one strategy occupies the whole lattice
    #[arg(long)]
    early_stop: bool,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunFlags {
    fn apply(&self, config: &mut RunConfig) -> opd_core::Result<()> {
        if let Some(side) = self.side {
            config.side = side;
        }
        if let Some(steps) = self.steps {
            config.n_steps = steps;
        }
        if let Some(replicates) = self.replicates {
            config.n_replicates = replicates;
        }
        config.params = GameParams::new(
            self.b.unwrap_or(config.params.b),
            self.l.unwrap_or(config.params.l),
            self.delta_step.unwrap_or(config.params.delta_step),
            self.delta_max.unwrap_or(config.params.delta_max),
        )?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(record_every) = self.record_every {
            config.record_every = record_every;
        }
        if !self.snapshot_steps.is_empty() {
            config.snapshot_steps = self.snapshot_steps.clone();
        }
        if self.early_stop {
            config.early_stop_on_absorption = true;
        }
        if let Some(out) = &self.out {
            config.out_dir = out.clone();
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded replicates and write time series, snapshots and a summary
    Run {
        /// TOML config file; flags override its values
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Load a snapshot, perturb it, then continue running
    Perturb {
        /// Grid-text snapshot to start from
        #[arg(long)]
        snapshot: PathBuf,
        /// Strategy to mutate away from (C, D or A)
        #[arg(long)]
        from: String,
        /// Strategy the mutated agents adopt
        #[arg(long)]
        to: String,
        /// Fraction of `from` agents that mutate (1.0 replaces the species)
        #[arg(long, conflicts_with = "keep_one")]
        rate: Option<f64>,
        /// Keep exactly one `from` agent, optionally at ROW,COL
        #[arg(long, value_name = "ROW,COL", num_args = 0..=1, default_missing_value = "")]
        keep_one: Option<String>,
        /// Reset all link weights to 1 after the mutation
        #[arg(long)]
        reset_weights: bool,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Print the neighborhood strategy census of one snapshot agent
    Census {
        /// Grid-text snapshot to inspect
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        row: usize,
        #[arg(long)]
        col: usize,
    },
}

fn print_summaries(summaries: &[opd_core::ReplicateSummary]) {
    for s in summaries {
        let outcome = match s.absorbed {
            Some(strategy) => format!("absorbed by {strategy}"),
            None => "coexist".to_string(),
        };
        println!(
            "replicate {} (seed {}): {} at step {} (C={:.3} D={:.3} A={:.3})",
            s.replicate,
            s.seed,
            outcome,
            s.stop_step,
            s.final_fractions[0],
            s.final_fractions[1],
            s.final_fractions[2],
        );
    }
}

fn cmd_run(config_path: Option<PathBuf>, flags: &RunFlags) -> opd_core::Result<()> {
    let mut config = match config_path {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    flags.apply(&mut config)?;
    let summaries = run_replicates(&config)?;
    print_summaries(&summaries);
    Ok(())
}

fn cmd_perturb(
    snapshot: PathBuf,
    from: &str,
    to: &str,
    rate: Option<f64>,
    keep_one: Option<String>,
    reset_weights: bool,
    flags: &RunFlags,
) -> opd_core::Result<()> {
    let from = Strategy::from_str(from)?;
    let to = Strategy::from_str(to)?;
    let (rate, keep_count, keep_at) = match (rate, keep_one) {
        (Some(rate), None) => (rate, None, None),
        (None, Some(spec)) if spec.is_empty() => (0.0, Some(1), None),
        (None, Some(spec)) => {
            let coords: Vec<&str> = spec.split(',').collect();
            let bad = || opd_core::Error::Config(format!("--keep-one expects ROW,COL, got `{spec}`"));
            if coords.len() != 2 {
                return Err(bad());
            }
            let row = coords[0].trim().parse().map_err(|_| bad())?;
            let col = coords[1].trim().parse().map_err(|_| bad())?;
            (0.0, None, Some((row, col)))
        }
        (None, None) => {
            return Err(opd_core::Error::Config(
                "perturb needs --rate or --keep-one".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    // the snapshot fixes the lattice side
    let side = read_snapshot(&snapshot)?.side;
    let mut config = RunConfig {
        side,
        n_steps: 10_000,
        n_replicates: 1,
        scenario: ScenarioSpec {
            init: Init::FromSnapshot(snapshot),
            mutation: Some(MutationSpec {
                from,
                to,
                rate,
                keep_count,
                keep_at,
            }),
            reset_weights,
        },
        // two-species style runs end in dominance, so stop there by default
        early_stop_on_absorption: true,
        ..RunConfig::default()
    };
    flags.apply(&mut config)?;
    if let Some(side_flag) = flags.side {
        if side_flag != config.side {
            return Err(opd_core::Error::Config(format!(
                "--side {side_flag} conflicts with snapshot side {side}"
            )));
        }
    }
    let summaries = run_replicates(&config)?;
    print_summaries(&summaries);
    Ok(())
}

fn cmd_census(snapshot: PathBuf, row: usize, col: usize) -> opd_core::Result<()> {
    let lattice = read_snapshot(snapshot)?.to_lattice()?;
    let agent = lattice.index_of(row, col)?;
    let counts = neighborhood_census(&lattice, agent)?;
    println!(
        "agent ({row},{col}) is {}; neighbors: C={} D={} A={}",
        lattice.strategy(agent),
        counts.get(Strategy::Cooperator),
        counts.get(Strategy::Defector),
        counts.get(Strategy::Abstainer),
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, flags } => cmd_run(config, &flags),
        Command::Perturb {
            snapshot,
            from,
            to,
            rate,
            keep_one,
            reset_weights,
            flags,
        } => cmd_perturb(snapshot, &from, &to, rate, keep_one, reset_weights, &flags),
        Command::Census { snapshot, row, col } => cmd_census(snapshot, row, col),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
