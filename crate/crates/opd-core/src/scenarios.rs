//! Initial populations and the extinction / mutation / environment-reset
//! perturbations.

use std::path::PathBuf;

use crate::engine::RngStream;
use crate::error::{Error, Result};
use crate::game::{Strategy, STRATEGIES};
use crate::lattice::{Lattice, StrategyCounts};
use crate::snapshot::Snapshot;

/// How the starting lattice is produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Init {
    /// Each cell uniform over {C, D, A}, all weights 1.
    UniformThirds,
    /// Each cell uniform over the two given strategies, all weights 1.
    TwoSpecies(Strategy, Strategy),
    /// Load strategies and weights from a grid-text snapshot.
    FromSnapshot(PathBuf),
}

/// One-shot mutation applied before the run starts.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationSpec {
    pub from: Strategy,
    pub to: Strategy,
    /// Fraction of `from` agents that mutate; ignored when a keep rule is set.
    pub rate: f64,
    /// Keep exactly this many `from` agents, survivors drawn at random.
    pub keep_count: Option<usize>,
    /// Keep exactly the agent at (row, col); implies keep_count semantics.
    pub keep_at: Option<(usize, usize)>,
}

impl MutationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.from == self.to {
            return Err(Error::InvalidParam(
                "mutation source and target strategies must differ".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.rate) {
            return Err(Error::InvalidParam(format!(
                "mutation rate must be in [0, 1], got {}",
                self.rate
            )));
        }
        Ok(())
    }
}

/// Full scenario: initial population plus optional perturbations.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub init: Init,
    pub mutation: Option<MutationSpec>,
    pub reset_weights: bool,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            init: Init::UniformThirds,
            mutation: None,
            reset_weights: false,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if let Init::TwoSpecies(a, b) = self.init {
            if a == b {
                return Err(Error::InvalidParam(
                    "two-species init needs two distinct strategies".into(),
                ));
            }
        }
        if let Some(m) = &self.mutation {
            m.validate()?;
        }
        Ok(())
    }

    /// Builds the starting lattice: init, then mutation, then weight reset.
    pub fn build(&self, side: usize, rng: &mut RngStream) -> Result<Lattice> {
        self.validate()?;
        let mut lattice = match &self.init {
            Init::UniformThirds => init_uniform_thirds(side, rng)?,
            Init::TwoSpecies(a, b) => init_two_species(side, *a, *b, rng)?,
            Init::FromSnapshot(path) => Snapshot::read_grid_text_file(path)?.to_lattice()?,
        };
        if let Some(m) = &self.mutation {
            let survivors = if let Some((row, col)) = m.keep_at {
                Survivors::At(vec![lattice.index_of(row, col)?])
            } else if let Some(k) = m.keep_count {
                Survivors::Count(k)
            } else {
                Survivors::ByRate
            };
            mutate_species(&mut lattice, m.from, m.to, m.rate, survivors, rng)?;
        }
        if self.reset_weights {
            reset_weights(&mut lattice);
        }
        Ok(lattice)
    }
}

/// Each cell designated C, D or A with equal probability; weights 1.
pub fn init_uniform_thirds(side: usize, rng: &mut RngStream) -> Result<Lattice> {
    let mut lattice = Lattice::new(side, Strategy::Cooperator)?;
    for i in 0..lattice.len() {
        lattice.set_strategy(i, STRATEGIES[rng.index(3)]);
    }
    Ok(lattice)
}

/// Each cell uniform over the two given strategies; weights 1.
pub fn init_two_species(
    side: usize,
    first: Strategy,
    second: Strategy,
    rng: &mut RngStream,
) -> Result<Lattice> {
    if first == second {
        return Err(Error::InvalidParam(
            "two-species init needs two distinct strategies".into(),
        ));
    }
    let pair = [first, second];
    let mut lattice = Lattice::new(side, first)?;
    for i in 0..lattice.len() {
        lattice.set_strategy(i, pair[rng.index(2)]);
    }
    Ok(lattice)
}

/// Replaces every `from` agent by `to`; weights untouched.
pub fn replace_species(lattice: &mut Lattice, from: Strategy, to: Strategy) -> Result<()> {
    if from == to {
        return Err(Error::InvalidParam(
            "replace source and target strategies must differ".into(),
        ));
    }
    for i in 0..lattice.len() {
        if lattice.strategy(i) == from {
            lattice.set_strategy(i, to);
        }
    }
    Ok(())
}

/// Which `from` agents survive a mutation.
#[derive(Clone, Debug)]
pub enum Survivors {
    /// No keep rule: mutate round(rate * count) agents chosen at random.
    ByRate,
    /// Keep exactly this many, chosen uniformly at random.
    Count(usize),
    /// Keep exactly these agents (each must hold the source strategy).
    At(Vec<usize>),
}

/// Mutates `from` agents into `to`. Victims are sampled uniformly without
/// replacement; weights are untouched.
pub fn mutate_species(
    lattice: &mut Lattice,
    from: Strategy,
    to: Strategy,
    rate: f64,
    survivors: Survivors,
    rng: &mut RngStream,
) -> Result<()> {
    if from == to {
        return Err(Error::InvalidParam(
            "mutation source and target strategies must differ".into(),
        ));
    }
    let mut pool: Vec<usize> = (0..lattice.len())
        .filter(|&i| lattice.strategy(i) == from)
        .collect();
    let available = pool.len();
    let n_mutate = match survivors {
        Survivors::ByRate => {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidParam(format!(
                    "mutation rate must be in [0, 1], got {rate}"
                )));
            }
            (rate * available as f64).round() as usize
        }
        Survivors::Count(keep) => {
            if keep > available {
                return Err(Error::KeepCount { keep, available });
            }
            available - keep
        }
        Survivors::At(ref kept) => {
            for &i in kept {
                if i >= lattice.len() {
                    return Err(Error::IndexOutOfRange {
                        index: i,
                        n: lattice.len(),
                    });
                }
                if lattice.strategy(i) != from {
                    return Err(Error::BadSurvivor(i));
                }
            }
            pool.retain(|i| !kept.contains(i));
            pool.len()
        }
    };
    // partial Fisher-Yates: the first n_mutate entries are the victims
    for k in 0..n_mutate {
        let j = k + rng.index(pool.len() - k);
        pool.swap(k, j);
        lattice.set_strategy(pool[k], to);
    }
    Ok(())
}

/// Restores every edge weight to 1; strategies untouched.
pub fn reset_weights(lattice: &mut Lattice) {
    let ones = vec![1.0; lattice.edge_count()];
    lattice.set_weights(&ones).unwrap();
}

/// Counts of each strategy among the 8 neighbors of `agent`.
pub fn neighborhood_census(lattice: &Lattice, agent: usize) -> Result<StrategyCounts> {
    let mut counts = StrategyCounts::default();
    for y in lattice.neighbors(agent)? {
        counts.0[lattice.strategy(y).index()] += 1;
    }
    Ok(counts)
}
