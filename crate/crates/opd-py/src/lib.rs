//! Python bindings: exposes the lattice simulation as an `opd` module.

use std::path::PathBuf;
use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use opd_core::{
    mc_step, neighborhood_census, GameParams, Lattice, RngStream, Snapshot, Strategy, Survivors,
};

fn to_py_err(err: opd_core::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn strategy_arg(s: &str) -> PyResult<Strategy> {
    Strategy::from_str(s).map_err(to_py_err)
}

/// Row player's payoff for one pairwise interaction.
#[pyfunction]
#[pyo3(signature = (s_x, s_y, b=1.9, l=0.5))]
fn payoff(s_x: &str, s_y: &str, b: f64, l: f64) -> PyResult<f64> {
    let params = GameParams::new(b, l, 0.0, 0.0).map_err(to_py_err)?;
    Ok(opd_core::payoff(strategy_arg(s_x)?, strategy_arg(s_y)?, &params))
}

/// A seeded coevolutionary simulation on a side x side torus.
#[pyclass]
struct Simulation {
    lattice: Lattice,
    params: GameParams,
    rng: RngStream,
    step: usize,
}

#[pymethods]
impl Simulation {
    #[new]
    #[pyo3(signature = (side=102, b=1.9, l=0.5, delta_step=0.24, delta_max=0.8, seed=1))]
    fn new(side: usize, b: f64, l: f64, delta_step: f64, delta_max: f64, seed: u64) -> PyResult<Self> {
        let params = GameParams::new(b, l, delta_step, delta_max).map_err(to_py_err)?;
        let mut rng = RngStream::new(seed);
        let lattice = opd_core::init_uniform_thirds(side, &mut rng).map_err(to_py_err)?;
        Ok(Simulation {
            lattice,
            params,
            rng,
            step: 0,
        })
    }

    /// Load strategies and weights from a grid-text snapshot file.
    #[staticmethod]
    #[pyo3(signature = (path, b=1.9, l=0.5, delta_step=0.24, delta_max=0.8, seed=1))]
    fn from_snapshot(path: PathBuf, b: f64, l: f64, delta_step: f64, delta_max: f64, seed: u64) -> PyResult<Self> {
        let params = GameParams::new(b, l, delta_step, delta_max).map_err(to_py_err)?;
        let snap = Snapshot::read_grid_text_file(path).map_err(to_py_err)?;
        Ok(Simulation {
            step: snap.step,
            lattice: snap.to_lattice().map_err(to_py_err)?,
            params,
            rng: RngStream::new(seed),
        })
    }

    #[getter]
    fn side(&self) -> usize {
        self.lattice.side()
    }

    #[getter]
    fn step(&self) -> usize {
        self.step
    }

    /// Advance `steps` Monte Carlo steps; returns (C, D, A) counts.
    #[pyo3(signature = (steps=1))]
    fn run(&mut self, steps: usize) -> (usize, usize, usize) {
        for _ in 0..steps {
            self.step += 1;
            mc_step(&mut self.lattice, &self.params, &mut self.rng, self.step);
        }
        self.counts()
    }

    /// Current (C, D, A) counts.
    fn counts(&self) -> (usize, usize, usize) {
        let c = self.lattice.counts();
        (c.0[0], c.0[1], c.0[2])
    }

    /// Current (C, D, A) fractions.
    fn fractions(&self) -> (f64, f64, f64) {
        let f = self.lattice.counts().fractions();
        (f[0], f[1], f[2])
    }

    /// The absorbing strategy ("C"/"D"/"A") or None while strategies coexist.
    fn absorbed(&self) -> Option<String> {
        self.lattice.counts().absorbed().map(|s| s.to_string())
    }

    /// Strategies as a list of side strings of C/D/A characters.
    fn grid(&self) -> Vec<String> {
        self.lattice
            .strategies()
            .chunks(self.lattice.side())
            .map(|row| row.iter().map(|s| s.as_char()).collect())
            .collect()
    }

    /// (min, max) over all edge weights.
    fn weight_bounds(&self) -> (f64, f64) {
        let weights = self.lattice.weights();
        let min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (min, max)
    }

    /// (C, D, A) counts among the 8 neighbors of the agent at (row, col).
    fn census(&self, row: usize, col: usize) -> PyResult<(usize, usize, usize)> {
        let agent = self.lattice.index_of(row, col).map_err(to_py_err)?;
        let c = neighborhood_census(&self.lattice, agent).map_err(to_py_err)?;
        Ok((c.0[0], c.0[1], c.0[2]))
    }

    /// Replace every `from_s` agent by `to_s`; weights untouched.
    fn replace_species(&mut self, from_s: &str, to_s: &str) -> PyResult<()> {
        opd_core::replace_species(&mut self.lattice, strategy_arg(from_s)?, strategy_arg(to_s)?)
            .map_err(to_py_err)
    }

    /// Mutate `from_s` agents into `to_s`, keeping `keep` random survivors
    /// (when given) or mutating a `rate` fraction otherwise.
    #[pyo3(signature = (from_s, to_s, rate=1.0, keep=None))]
    fn mutate_species(&mut self, from_s: &str, to_s: &str, rate: f64, keep: Option<usize>) -> PyResult<()> {
        let survivors = match keep {
            Some(k) => Survivors::Count(k),
            None => Survivors::ByRate,
        };
        opd_core::mutate_species(
            &mut self.lattice,
            strategy_arg(from_s)?,
            strategy_arg(to_s)?,
            rate,
            survivors,
            &mut self.rng,
        )
        .map_err(to_py_err)
    }

    /// Reset every link weight back to 1; strategies untouched.
    fn reset_weights(&mut self) {
        opd_core::reset_weights(&mut self.lattice);
    }

    /// Write a grid-text snapshot (strategies + weights).
    fn write_snapshot(&self, path: PathBuf) -> PyResult<()> {
        Snapshot::from_lattice(&self.lattice, self.step, true)
            .write_grid_text_file(path)
            .map_err(to_py_err)
    }

    /// Write the strategy grid as a binary portable pixmap.
    fn write_ppm(&self, path: PathBuf) -> PyResult<()> {
        Snapshot::from_lattice(&self.lattice, self.step, false)
            .write_ppm_file(path)
            .map_err(to_py_err)
    }
}

#[pymodule]
fn opd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(payoff, m)?)?;
    m.add_class::<Simulation>()?;
    Ok(())
}
