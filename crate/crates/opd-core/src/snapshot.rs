//! Full-grid snapshots: grid-text round-trip format and pixmap images.
//!
//! Grid-text layout: a `side step` header line, `side` lines of `side`
//! strategy characters (C/D/A), then optionally one weight per line in
//! edge enumeration order (row-major agent order; per agent E, SE, S, SW).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::game::Strategy;
use crate::lattice::Lattice;

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub side: usize,
    pub step: usize,
    pub strategies: Vec<Strategy>,
    pub weights: Option<Vec<f64>>,
}

impl Snapshot {
    pub fn from_lattice(lattice: &Lattice, step: usize, include_weights: bool) -> Self {
        Snapshot {
            side: lattice.side(),
            step,
            strategies: lattice.strategies().to_vec(),
            weights: include_weights.then(|| lattice.weights().to_vec()),
        }
    }

    /// Reconstructs a lattice; absent weights default to 1.
    pub fn to_lattice(&self) -> Result<Lattice> {
        let mut lattice = Lattice::new(self.side, Strategy::Cooperator)?;
        if self.strategies.len() != lattice.len() {
            return Err(Error::InvalidParam(format!(
                "snapshot has {} strategies for side {}",
                self.strategies.len(),
                self.side
            )));
        }
        for (i, &s) in self.strategies.iter().enumerate() {
            lattice.set_strategy(i, s);
        }
        if let Some(weights) = &self.weights {
            lattice.set_weights(weights)?;
        }
        Ok(lattice)
    }

    pub fn write_grid_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.side, self.step)?;
        for row in self.strategies.chunks(self.side) {
            let line: String = row.iter().map(|s| s.as_char()).collect();
            writeln!(out, "{line}")?;
        }
        if let Some(weights) = &self.weights {
            for w in weights {
                writeln!(out, "{w}")?;
            }
        }
        Ok(())
    }

    pub fn write_grid_text_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_grid_text(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_grid_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::SnapshotParse {
                line: 1,
                msg: "empty file".into(),
            })??;
        let mut parts = header.split_whitespace();
        let parse_usize = |part: Option<&str>, what: &str| -> Result<usize> {
            part.and_then(|p| p.parse().ok()).ok_or_else(|| Error::SnapshotParse {
                line: 1,
                msg: format!("header must be `side step`, bad {what}"),
            })
        };
        let side = parse_usize(parts.next(), "side")?;
        let step = parse_usize(parts.next(), "step")?;
        if side < 3 {
            return Err(Error::SnapshotParse {
                line: 1,
                msg: format!("side {side} below minimum 3"),
            });
        }
        let mut strategies = Vec::with_capacity(side * side);
        for row in 0..side {
            let line_no = row + 2;
            let line = lines
                .next()
                .ok_or_else(|| Error::SnapshotParse {
                    line: line_no,
                    msg: "missing strategy row".into(),
                })??;
            let trimmed = line.trim_end();
            if trimmed.chars().count() != side {
                return Err(Error::SnapshotParse {
                    line: line_no,
                    msg: format!("expected {side} strategy characters"),
                });
            }
            for c in trimmed.chars() {
                strategies.push(Strategy::from_char(c).ok_or_else(|| Error::SnapshotParse {
                    line: line_no,
                    msg: format!("bad strategy character `{c}`"),
                })?);
            }
        }
        let mut weights = Vec::new();
        for (offset, line) in lines.enumerate() {
            let line_no = side + 2 + offset;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            weights.push(trimmed.parse::<f64>().map_err(|_| Error::SnapshotParse {
                line: line_no,
                msg: format!("bad weight `{trimmed}`"),
            })?);
        }
        let weights = if weights.is_empty() {
            None
        } else if weights.len() == 4 * side * side {
            Some(weights)
        } else {
            return Err(Error::SnapshotParse {
                line: side + 2,
                msg: format!(
                    "weight section has {} entries, expected {}",
                    weights.len(),
                    4 * side * side
                ),
            });
        };
        Ok(Snapshot {
            side,
            step,
            strategies,
            weights,
        })
    }

    pub fn read_grid_text_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::read_grid_text(BufReader::new(File::open(path)?))
    }

    /// Binary portable pixmap (P6), one pixel per agent:
    /// C blue (0,0,255), D red (255,0,0), A green (0,255,0).
    pub fn write_ppm<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.side, self.side)?;
        let mut pixels = Vec::with_capacity(3 * self.strategies.len());
        for &s in &self.strategies {
            pixels.extend_from_slice(&match s {
                Strategy::Cooperator => [0, 0, 255],
                Strategy::Defector => [255, 0, 0],
                Strategy::Abstainer => [0, 255, 0],
            });
        }
        out.write_all(&pixels)?;
        Ok(())
    }

    pub fn write_ppm_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_ppm(&mut out)?;
        out.flush()?;
        Ok(())
    }
}

/// Reads a grid-text snapshot file (convenience for CLI and scenarios).
pub fn read_snapshot<P: AsRef<Path>>(path: P) -> Result<Snapshot> {
    Snapshot::read_grid_text_file(path)
}
