//! Per-iteration run records and their CSV form.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::oracle::OracleLedger;

pub const CSV_HEADER: &str = "step,objective,grad_x_calls,grad_y_calls,inversions,time_s";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRecord {
    pub step: u64,
    pub objective: f64,
    pub ledger: OracleLedger,
    pub time_s: f64,
}

/// Ordered run records: strictly increasing steps, monotone ledger snapshots.
#[derive(Debug, Clone)]
pub struct RunHistory {
    records: Vec<HistoryRecord>,
    started: Option<Instant>,
}

impl Default for RunHistory {
    fn default() -> Self {
        Self::new()
    }
}

impl RunHistory {
    /// History that stamps wall time relative to its creation.
    pub fn new() -> Self {
        Self { records: Vec::new(), started: Some(Instant::now()) }
    }

    /// History whose `time_s` column is always zero, so output is reproducible byte for byte.
    pub fn without_timing() -> Self {
        Self { records: Vec::new(), started: None }
    }

    pub fn records(&self) -> &[HistoryRecord] {
        &self.records
    }

    pub fn last(&self) -> Option<&HistoryRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends a record stamped with the elapsed wall time.
    pub fn record(&mut self, step: u64, objective: f64, ledger: OracleLedger) -> Result<()> {
        let time_s = self.started.map_or(0.0, |t| t.elapsed().as_secs_f64());
        self.push(HistoryRecord { step, objective, ledger, time_s })
    }

    pub fn push(&mut self, rec: HistoryRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if rec.step <= last.step {
                return Err(Error::Contract(format!(
                    "history steps must increase ({} after {})",
                    rec.step, last.step
                )));
            }
            if !rec.ledger.dominates(&last.ledger) {
                return Err(Error::Contract("ledger snapshots must be monotone".into()));
            }
        }
        self.records.push(rec);
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(self.to_csv_string().as_bytes())
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::with_capacity(64 * (self.records.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            let _ = writeln!(
                s,
                "{},{:e},{},{},{},{:.6}",
                r.step,
                r.objective,
                r.ledger.grad_x_calls(),
                r.ledger.grad_y_calls(),
                r.ledger.matrix_inversions(),
                r.time_s
            );
        }
        s
    }

    /// Parses the CSV produced by [`RunHistory::to_csv_string`].
    pub fn parse_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: String| Error::Parse { path: "<history>".into(), line, msg };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim_end() == CSV_HEADER => {}
            _ => return Err(bad(1, "missing or unexpected header".into())),
        }
        let mut history = RunHistory::without_timing();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(bad(lineno, format!("expected 6 fields, found {}", fields.len())));
            }
            let int = |i: usize| fields[i].trim().parse::<u64>().map_err(|e| bad(lineno, e.to_string()));
            let float = |i: usize| fields[i].trim().parse::<f64>().map_err(|e| bad(lineno, e.to_string()));
            let mut ledger = OracleLedger::new();
            ledger.add_grad_x(int(2)?);
            ledger.add_grad_y(int(3)?);
            ledger.add_inversions(int(4)?);
            history
                .push(HistoryRecord { step: int(0)?, objective: float(1)?, ledger, time_s: float(5)? })
                .map_err(|e| bad(lineno, e.to_string()))?;
        }
        Ok(history)
    }
}
