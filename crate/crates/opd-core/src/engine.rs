//! Coevolutionary Monte Carlo dynamics: weighted utilities, link-weight
//! updates and probabilistic strategy imitation.
//!
//! One Monte Carlo step performs `side^2` inner steps, each drawing an
//! agent uniformly with replacement. The RNG draw order within an inner
//! step is normative: agent index, neighbor index, then the adoption coin
//! (drawn only when the neighbor's accumulated utility is higher).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{payoff, GameParams, Strategy};
use crate::lattice::{Lattice, StrategyCounts};
use crate::timeseries::TimeSeries;

/// Seeded deterministic random stream (ChaCha8).
///
/// Same seed, same sequence of draws, same trajectory.
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform agent (or generic) index in `0..n`.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Uniform neighbor slot in `0..8`.
    #[inline]
    pub fn neighbor(&mut self) -> usize {
        self.rng.random_range(0..8)
    }

    /// Uniform f64 in `[0, 1)`.
    #[inline]
    pub fn coin(&mut self) -> f64 {
        self.rng.random()
    }
}

/// Outcome of one Monte Carlo step.
#[derive(Clone, Copy, Debug)]
pub struct StepReport {
    pub step_index: usize,
    pub counts: StrategyCounts,
    pub absorbed: Option<Strategy>,
}

/// Weighted utility u_xy = w_xy * P_xy of agent `x` against neighbor `y`.
pub fn utility(lattice: &Lattice, params: &GameParams, x: usize, y: usize) -> crate::Result<f64> {
    let w = lattice.get_weight(x, y)?;
    Ok(w * payoff(lattice.strategy(x), lattice.strategy(y), params))
}

/// 3x3 payoff matrix flattened row-major (row player index * 3 + column),
/// built once per step to keep the hot loop branch-free.
#[inline]
fn payoff_table(params: &GameParams) -> [f64; 9] {
    use crate::game::STRATEGIES;
    let mut table = [0.0; 9];
    for (i, &sx) in STRATEGIES.iter().enumerate() {
        for (j, &sy) in STRATEGIES.iter().enumerate() {
            table[i * 3 + j] = payoff(sx, sy, params);
        }
    }
    table
}

#[inline]
fn accumulated_with_table(lattice: &Lattice, table: &[f64; 9], x: usize) -> f64 {
    let row = lattice.strategy(x).index() * 3;
    let nbrs = lattice.neighbor_table(x);
    let edges = lattice.edge_table(x, &nbrs);
    let mut sum = 0.0;
    for d in 0..8 {
        sum += lattice.edge_weight(edges[d]) * table[row + lattice.strategy(nbrs[d]).index()];
    }
    sum
}

#[inline]
fn utilities_of(lattice: &Lattice, params: &GameParams, x: usize) -> [f64; 8] {
    let sx = lattice.strategy(x);
    let nbrs = lattice.neighbor_table(x);
    let edges = lattice.edge_table(x, &nbrs);
    let mut u = [0.0; 8];
    for d in 0..8 {
        u[d] = lattice.edge_weight(edges[d]) * payoff(sx, lattice.strategy(nbrs[d]), params);
    }
    u
}

/// Mean utility over the 8 neighbors.
pub fn average_utility(lattice: &Lattice, params: &GameParams, x: usize) -> f64 {
    accumulated_utility(lattice, params, x) / 8.0
}

/// Sum of weighted utilities over the 8 neighbors.
pub fn accumulated_utility(lattice: &Lattice, params: &GameParams, x: usize) -> f64 {
    let u = utilities_of(lattice, params, x);
    let mut sum = 0.0;
    for d in 0..8 {
        sum += u[d];
    }
    sum
}

/// Adjusts the 8 edges of `x`: +Δ where u_xy exceeds the pre-update mean,
/// −Δ where it falls below, unchanged on exact equality; each weight is
/// then clamped into `[1 − δ, 1 + δ]`.
pub fn update_link_weights(lattice: &mut Lattice, params: &GameParams, x: usize) {
    let nbrs = lattice.neighbor_table(x);
    let edges = lattice.edge_table(x, &nbrs);
    let sx = lattice.strategy(x);
    let mut payoffs = [0.0; 8];
    let mut u = [0.0; 8];
    let mut sum = 0.0;
    for d in 0..8 {
        payoffs[d] = payoff(sx, lattice.strategy(nbrs[d]), params);
        u[d] = lattice.edge_weight(edges[d]) * payoffs[d];
        sum += u[d];
    }
    let mean = sum / 8.0;
    apply_weight_deltas(lattice, params, &edges, &u, mean);
}

#[inline]
fn apply_weight_deltas(
    lattice: &mut Lattice,
    params: &GameParams,
    edges: &[usize; 8],
    u: &[f64; 8],
    mean: f64,
) {
    let lo = 1.0 - params.delta_max;
    let hi = 1.0 + params.delta_max;
    for d in 0..8 {
        let w = lattice.edge_weight(edges[d]);
        let w = if u[d] > mean {
            w + params.delta_step
        } else if u[d] < mean {
            w - params.delta_step
        } else {
            w
        };
        lattice.set_edge_weight(edges[d], w.clamp(lo, hi));
    }
}

/// Probability that the focal agent adopts the neighbor's strategy,
/// (U_y − U_x) / (8·b) clamped into [0, 1]; zero whenever U_y ≤ U_x.
pub fn adoption_probability(u_x: f64, u_y: f64, params: &GameParams) -> f64 {
    if u_y <= u_x {
        return 0.0;
    }
    ((u_y - u_x) / (8.0 * params.b)).min(1.0)
}

/// One inner step: pick a random agent, update its link weights, then
/// possibly imitate a random neighbor. Returns the strategy change, if any.
pub fn inner_step(
    lattice: &mut Lattice,
    params: &GameParams,
    rng: &mut RngStream,
) -> Option<(usize, Strategy, Strategy)> {
    inner_step_with(lattice, params, &payoff_table(params), rng)
}

#[inline]
fn inner_step_with(
    lattice: &mut Lattice,
    params: &GameParams,
    table: &[f64; 9],
    rng: &mut RngStream,
) -> Option<(usize, Strategy, Strategy)> {
    let x = rng.index(lattice.len());
    let nbrs = lattice.neighbor_table(x);
    let edges = lattice.edge_table(x, &nbrs);
    let row = lattice.strategy(x).index() * 3;
    let mut payoffs = [0.0; 8];
    let mut u = [0.0; 8];
    let mut sum = 0.0;
    for d in 0..8 {
        payoffs[d] = table[row + lattice.strategy(nbrs[d]).index()];
        u[d] = lattice.edge_weight(edges[d]) * payoffs[d];
        sum += u[d];
    }
    apply_weight_deltas(lattice, params, &edges, &u, sum / 8.0);
    // weights changed, so utilities are recomputed before comparison;
    // the pairwise payoffs themselves are unchanged
    let mut u_x = 0.0;
    for d in 0..8 {
        u_x += lattice.edge_weight(edges[d]) * payoffs[d];
    }
    let d = rng.neighbor();
    let y = nbrs[d];
    let u_y = accumulated_with_table(lattice, table, y);
    if u_y > u_x {
        let p = adoption_probability(u_x, u_y, params);
        if rng.coin() < p {
            let old = lattice.strategy(x);
            let new = lattice.strategy(y);
            if old != new {
                lattice.set_strategy(x, new);
                return Some((x, old, new));
            }
        }
    }
    None
}

/// One Monte Carlo step: `side^2` inner steps, then a census.
pub fn mc_step(
    lattice: &mut Lattice,
    params: &GameParams,
    rng: &mut RngStream,
    step_index: usize,
) -> StepReport {
    let table = payoff_table(params);
    for _ in 0..lattice.len() {
        inner_step_with(lattice, params, &table, rng);
    }
    let counts = lattice.counts();
    StepReport {
        step_index,
        counts,
        absorbed: counts.absorbed(),
    }
}

/// Read-only callback invoked after every recorded Monte Carlo step.
pub trait Observer {
    fn on_step(&mut self, step_index: usize, counts: &StrategyCounts, lattice: &Lattice);
}

impl<F: FnMut(usize, &StrategyCounts, &Lattice)> Observer for F {
    fn on_step(&mut self, step_index: usize, counts: &StrategyCounts, lattice: &Lattice) {
        self(step_index, counts, lattice)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Record a time-series row every this many MC steps.
    pub record_every: usize,
    /// Stop as soon as a single strategy occupies every site.
    pub early_stop_on_absorption: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            record_every: 1,
            early_stop_on_absorption: false,
        }
    }
}

/// Result of a full run: the recorded series plus the stopping state.
pub struct RunResult {
    pub series: TimeSeries,
    pub absorbed: Option<Strategy>,
    pub last_step: usize,
}

/// Runs `n_steps` Monte Carlo steps, recording fractions every
/// `record_every` steps (step 0 is always recorded) and invoking the
/// observers on every step. Stops early on absorption when configured.
pub fn run(
    lattice: &mut Lattice,
    params: &GameParams,
    n_steps: usize,
    rng: &mut RngStream,
    opts: &RunOptions,
    observers: &mut [&mut dyn Observer],
) -> RunResult {
    let record_every = opts.record_every.max(1);
    let mut series = TimeSeries::new();
    let counts = lattice.counts();
    series.push(0, &counts);
    for obs in observers.iter_mut() {
        obs.on_step(0, &counts, lattice);
    }
    let mut absorbed = counts.absorbed();
    let mut last_step = 0;
    if !(opts.early_stop_on_absorption && absorbed.is_some()) {
        for step in 1..=n_steps {
            let report = mc_step(lattice, params, rng, step);
            last_step = step;
            let stop = opts.early_stop_on_absorption && report.absorbed.is_some();
            if step % record_every == 0 || step == n_steps || stop {
                series.push(step, &report.counts);
            }
            for obs in observers.iter_mut() {
                obs.on_step(step, &report.counts, lattice);
            }
            if stop {
                absorbed = report.absorbed;
                break;
            }
            absorbed = report.absorbed;
        }
    }
    RunResult {
        series,
        absorbed,
        last_step,
    }
}
