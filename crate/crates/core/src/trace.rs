//! Per-iteration convergence records and their CSV form.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 6] = ["iter", "fevals", "resnorm", "step_size", "mode", "wallclock_s"];

/// Residual-update mode of an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Residual recomputed from a function evaluation.
    #[serde(rename = "NL")]
    Nonlinear,
    /// Residual updated from the linear model.
    #[serde(rename = "LIN")]
    Linear,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Nonlinear => "NL",
            Mode::Linear => "LIN",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NL" => Ok(Mode::Nonlinear),
            "LIN" => Ok(Mode::Linear),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    /// Cumulative function evaluations.
    pub fevals: usize,
    /// Relative residual norm `‖f(x)‖ / ‖f(x₀)‖`.
    pub resnorm: f64,
    pub step_size: f64,
    pub mode: Mode,
    pub wallclock_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTrace {
    records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn append(&mut self, rec: TraceRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if rec.fevals < last.fevals {
                return Err(Error::TraceOrder {
                    last: last.fevals,
                    got: rec.fevals,
                });
            }
        }
        self.records.push(rec);
        Ok(())
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn final_resnorm(&self) -> Option<f64> {
        self.last().map(|r| r.resnorm)
    }

    pub fn total_fevals(&self) -> usize {
        self.last().map_or(0, |r| r.fevals)
    }

    /// Cumulative evaluations at the first record with `resnorm <= threshold`.
    pub fn fevals_to(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.resnorm <= threshold)
            .map(|r| r.fevals)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRACE_HEADER)?;
        for r in &self.records {
            w.write_record([
                r.iter.to_string(),
                r.fevals.to_string(),
                format!("{:.16e}", r.resnorm),
                format!("{:.16e}", r.step_size),
                r.mode.to_string(),
                format!("{:.6}", r.wallclock_s),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let header = rdr.headers()?.clone();
        if header.iter().ne(TRACE_HEADER.iter().copied()) {
            return Err(Error::Config(format!(
                "unexpected trace header `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut trace = Self::new();
        for row in rdr.records() {
            let row = row?;
            let field = |i: usize| row.get(i).unwrap_or_default();
            let bad = |what: &str| Error::Config(format!("malformed {what} in trace row {:?}", row));
            let rec = TraceRecord {
                iter: field(0).parse().map_err(|_| bad("iter"))?,
                fevals: field(1).parse().map_err(|_| bad("fevals"))?,
                resnorm: field(2).parse().map_err(|_| bad("resnorm"))?,
                step_size: field(3).parse().map_err(|_| bad("step_size"))?,
                mode: field(4).parse()?,
                wallclock_s: field(5).parse().map_err(|_| bad("wallclock_s"))?,
            };
            trace.append(rec)?;
        }
        Ok(trace)
    }
}
