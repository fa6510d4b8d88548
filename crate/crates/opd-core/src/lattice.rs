//! Square torus lattice with Moore neighborhoods and symmetric per-edge
//! weights.
//!
//! Agents are indexed row-major: agent `i` sits at row `i / side`,
//! column `i % side`. The eight neighbors of an agent are always reported
//! in the fixed order N, NE, E, SE, S, SW, W, NW; this order is normative
//! so identical seeds yield identical trajectories.
//!
//! Each undirected edge stores a single shared weight. An edge is owned by
//! the agent for which it points E, SE, S or SW, giving exactly
//! `4 * side^2` edges on the torus. Edge enumeration order (row-major agent
//! order; per agent E, SE, S, SW) is also the serialization order for
//! snapshot weight sections.

use crate::error::{Error, Result};
use crate::game::{Strategy, STRATEGIES};

#[derive(Clone)]
pub struct Lattice {
    side: usize,
    strategies: Vec<Strategy>,
    weights: Vec<f64>,
}

impl Lattice {
    /// Fresh lattice with every agent holding `fill` and all weights 1.
    pub fn new(side: usize, fill: Strategy) -> Result<Self> {
        if side < 3 {
            return Err(Error::SideTooSmall(side));
        }
        let n = side * side;
        Ok(Lattice {
            side,
            strategies: vec![fill; n],
            weights: vec![1.0; 4 * n],
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of agents (side squared).
    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of undirected edges: 4 * side^2.
    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn index_of(&self, row: usize, col: usize) -> Result<usize> {
        if row >= self.side || col >= self.side {
            return Err(Error::IndexOutOfRange {
                index: row * self.side + col,
                n: self.len(),
            });
        }
        Ok(row * self.side + col)
    }

    pub fn strategy(&self, agent: usize) -> Strategy {
        self.strategies[agent]
    }

    pub fn set_strategy(&mut self, agent: usize, s: Strategy) {
        self.strategies[agent] = s;
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    /// The 8 Moore neighbors of `agent`, in N, NE, E, SE, S, SW, W, NW order.
    pub fn neighbors(&self, agent: usize) -> Result<[usize; 8]> {
        if agent >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: agent,
                n: self.len(),
            });
        }
        Ok(self.neighbor_table(agent))
    }

    /// Neighbor indices, computed arithmetically (no table: the hot loop
    /// touches agents at random and extra lookup tables just thrash cache).
    #[inline]
    pub(crate) fn neighbor_table(&self, agent: usize) -> [usize; 8] {
        let side = self.side;
        let r = agent / side;
        let c = agent % side;
        let rn = if r == 0 { side - 1 } else { r - 1 };
        let rs = if r + 1 == side { 0 } else { r + 1 };
        let cw = if c == 0 { side - 1 } else { c - 1 };
        let ce = if c + 1 == side { 0 } else { c + 1 };
        [
            rn * side + c,  // N
            rn * side + ce, // NE
            r * side + ce,  // E
            rs * side + ce, // SE
            rs * side + c,  // S
            rs * side + cw, // SW
            r * side + cw,  // W
            rn * side + cw, // NW
        ]
    }

    /// Edge slots for each direction. An agent owns the 4 edges pointing
    /// E, SE, S, SW (slots 4i..4i+4); the other 4 belong to the neighbor
    /// in the opposite direction.
    #[inline]
    pub(crate) fn edge_table(&self, agent: usize, nbrs: &[usize; 8]) -> [usize; 8] {
        [
            nbrs[0] * 4 + 2, // N: neighbor's S edge
            nbrs[1] * 4 + 3, // NE: neighbor's SW edge
            agent * 4,       // E
            agent * 4 + 1,   // SE
            agent * 4 + 2,   // S
            agent * 4 + 3,   // SW
            nbrs[6] * 4,     // W: neighbor's E edge
            nbrs[7] * 4 + 1, // NW: neighbor's SE edge
        ]
    }

    #[inline]
    pub(crate) fn edge_weight(&self, edge: usize) -> f64 {
        self.weights[edge]
    }

    #[inline]
    pub(crate) fn set_edge_weight(&mut self, edge: usize, w: f64) {
        self.weights[edge] = w;
    }

    fn edge_between(&self, x: usize, y: usize) -> Result<usize> {
        if x >= self.len() || y >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: x.max(y),
                n: self.len(),
            });
        }
        let nbrs = self.neighbor_table(x);
        let edges = self.edge_table(x, &nbrs);
        for d in 0..8 {
            if nbrs[d] == y {
                return Ok(edges[d]);
            }
        }
        Err(Error::NotAdjacent { x, y })
    }

    /// Weight of the shared edge between the adjacent agents `x` and `y`.
    pub fn get_weight(&self, x: usize, y: usize) -> Result<f64> {
        Ok(self.weights[self.edge_between(x, y)?])
    }

    pub fn set_weight(&mut self, x: usize, y: usize, w: f64) -> Result<()> {
        let e = self.edge_between(x, y)?;
        self.weights[e] = w;
        Ok(())
    }

    /// Edge weights in enumeration order (per agent: E, SE, S, SW).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn set_weights(&mut self, weights: &[f64]) -> Result<()> {
        if weights.len() != self.weights.len() {
            return Err(Error::InvalidParam(format!(
                "expected {} weights, got {}",
                self.weights.len(),
                weights.len()
            )));
        }
        self.weights.copy_from_slice(weights);
        Ok(())
    }

    pub fn counts(&self) -> StrategyCounts {
        let mut counts = StrategyCounts::default();
        for &s in &self.strategies {
            counts.0[s.index()] += 1;
        }
        counts
    }
}

/// Number of agents per strategy, indexed C, D, A.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StrategyCounts(pub [usize; 3]);

impl StrategyCounts {
    pub fn get(&self, s: Strategy) -> usize {
        self.0[s.index()]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fractions(&self) -> [f64; 3] {
        let n = self.total() as f64;
        [
            self.0[0] as f64 / n,
            self.0[1] as f64 / n,
            self.0[2] as f64 / n,
        ]
    }

    /// The single surviving strategy, if the population is absorbed.
    pub fn absorbed(&self) -> Option<Strategy> {
        let n = self.total();
        STRATEGIES.into_iter().find(|&s| self.get(s) == n)
    }

    /// True when every strategy has at least one agent.
    pub fn all_present(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }
}
