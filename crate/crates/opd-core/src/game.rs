//! Strategies, game parameters and the pairwise payoff of the Optional
//! Prisoner's Dilemma, rescaled to R=1, P=S=0, T=b, L=l.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the three agent strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Strategy {
    Cooperator = 0,
    Defector = 1,
    Abstainer = 2,
}

pub const STRATEGIES: [Strategy; 3] = [
    Strategy::Cooperator,
    Strategy::Defector,
    Strategy::Abstainer,
];

impl Strategy {
    pub fn as_char(self) -> char {
        match self {
            Strategy::Cooperator => 'C',
            Strategy::Defector => 'D',
            Strategy::Abstainer => 'A',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'C' => Some(Strategy::Cooperator),
            'D' => Some(Strategy::Defector),
            'A' => Some(Strategy::Abstainer),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "c" | "cooperator" => Ok(Strategy::Cooperator),
            "d" | "defector" => Ok(Strategy::Defector),
            "a" | "abstainer" => Ok(Strategy::Abstainer),
            other => Err(Error::InvalidParam(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Payoff and coevolution constants.
///
/// `b` is the temptation to defect (T), `l` the loner's payoff (L),
/// `delta_step` the per-update weight increment and `delta_max` the
/// amplitude bounding weights to `[1 - delta_max, 1 + delta_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameParams {
    pub b: f64,
    pub l: f64,
    pub delta_step: f64,
    pub delta_max: f64,
}

impl GameParams {
    pub fn new(b: f64, l: f64, delta_step: f64, delta_max: f64) -> Result<Self> {
        if !(b > 1.0 && b < 2.0) {
            return Err(Error::InvalidParam(format!("b must be in (1, 2), got {b}")));
        }
        if !(l > 0.0 && l < 1.0) {
            return Err(Error::InvalidParam(format!("l must be in (0, 1), got {l}")));
        }
        if !(0.0..=1.0).contains(&delta_max) {
            return Err(Error::InvalidParam(format!(
                "delta_max must be in [0, 1], got {delta_max}"
            )));
        }
        if !(delta_step >= 0.0 && delta_step <= delta_max) {
            return Err(Error::InvalidParam(format!(
                "delta_step must satisfy 0 <= delta_step <= delta_max, got {delta_step}"
            )));
        }
        Ok(GameParams {
            b,
            l,
            delta_step,
            delta_max,
        })
    }

    /// Parameters used throughout the coevolution experiments:
    /// b=1.9, l=0.5, Δ=0.24, δ=0.8 (Δ/δ=0.3).
    pub fn coevolution_default() -> Self {
        GameParams::new(1.9, 0.5, 0.24, 0.8).unwrap()
    }

    /// Same payoffs on a static unweighted network (Δ=δ=0).
    pub fn static_network(b: f64, l: f64) -> Result<Self> {
        GameParams::new(b, l, 0.0, 0.0)
    }
}

/// Row player's payoff for one pairwise interaction.
///
/// Any pair involving an abstainer pays the loner's payoff `l` to both.
pub fn payoff(s_x: Strategy, s_y: Strategy, params: &GameParams) -> f64 {
    use Strategy::*;
    match (s_x, s_y) {
        (Abstainer, _) | (_, Abstainer) => params.l,
        (Cooperator, Cooperator) => 1.0,
        (Cooperator, Defector) => 0.0,
        (Defector, Cooperator) => params.b,
        (Defector, Defector) => 0.0,
    }
}
