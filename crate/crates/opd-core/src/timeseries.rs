//! Per-step strategy fractions and their CSV form.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::StrategyCounts;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSeriesRow {
    pub step: usize,
    pub frac_c: f64,
    pub frac_d: f64,
    pub frac_a: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    rows: Vec<TimeSeriesRow>,
}

impl TimeSeries {
    pub fn new() -> Self {
        TimeSeries::default()
    }

    pub fn push(&mut self, step: usize, counts: &StrategyCounts) {
        let [frac_c, frac_d, frac_a] = counts.fractions();
        self.rows.push(TimeSeriesRow {
            step,
            frac_c,
            frac_d,
            frac_a,
        });
    }

    pub fn rows(&self) -> &[TimeSeriesRow] {
        &self.rows
    }

    /// Writes `step,frac_c,frac_d,frac_a` rows, fractions at 6 decimal
    /// digits (round half to even). Byte output is deterministic.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "step,frac_c,frac_d,frac_a")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{:.6},{:.6},{:.6}",
                row.step, row.frac_c, row.frac_d, row.frac_a
            )?;
        }
        Ok(())
    }

    pub fn write_csv_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_csv(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            if idx == 0 {
                if line.trim() != "step,frac_c,frac_d,frac_a" {
                    return Err(Error::Config(format!("unexpected CSV header `{line}`")));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Config(format!(
                    "line {}: expected 4 fields, got {}",
                    idx + 1,
                    fields.len()
                )));
            }
            let parse_f = |s: &str| -> Result<f64> {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("line {}: bad number `{s}`", idx + 1)))
            };
            rows.push(TimeSeriesRow {
                step: fields[0]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("line {}: bad step", idx + 1)))?,
                frac_c: parse_f(fields[1])?,
                frac_d: parse_f(fields[2])?,
                frac_a: parse_f(fields[3])?,
            });
        }
        Ok(TimeSeries { rows })
    }

    pub fn read_csv_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::read_csv(BufReader::new(File::open(path)?))
    }
}
