//! CSV and JSON-lines emission of traces and summaries.
//!
//! CSV floats are written with 17 significant digits, which round-trips
//! every `f64` exactly. JSONL rows use the same field names as the CSV
//! headers.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::AggregateResult;
use crate::error::Result;
use crate::evaluator::ConvergenceTrace;

pub const TRACE_HEADER: [&str; 8] = [
    "function",
    "algorithm",
    "dim",
    "replication",
    "seed",
    "checkpoint_evals",
    "elapsed_ms",
    "best_value",
];

pub const SUMMARY_HEADER: [&str; 8] = [
    "function",
    "algorithm",
    "checkpoint_evals",
    "mean_best",
    "std_best",
    "median_best",
    "min_best",
    "n",
];

/// One checkpoint of one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub function: String,
    pub algorithm: String,
    pub dim: usize,
    pub replication: u64,
    pub seed: u64,
    pub checkpoint_evals: u64,
    pub elapsed_ms: u64,
    pub best_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub function: String,
    pub algorithm: String,
    pub checkpoint_evals: u64,
    pub mean_best: f64,
    pub std_best: f64,
    pub median_best: f64,
    pub min_best: f64,
    pub n: u64,
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_rows(traces: &[ConvergenceTrace]) -> impl Iterator<Item = TraceRow> + '_ {
    traces.iter().flat_map(|t| {
        t.checkpoints.iter().map(move |c| TraceRow {
            function: t.function.clone(),
            algorithm: t.algorithm.clone(),
            dim: t.dim,
            replication: t.replication,
            seed: t.seed,
            checkpoint_evals: c.evals,
            elapsed_ms: c.elapsed_ms,
            best_value: c.best_value,
        })
    })
}

fn summary_rows(agg: &AggregateResult) -> impl Iterator<Item = SummaryRow> + '_ {
    agg.rows.iter().map(|r| SummaryRow {
        function: r.function.clone(),
        algorithm: r.algorithm.clone(),
        checkpoint_evals: r.checkpoint_evals,
        mean_best: r.mean,
        std_best: r.std,
        median_best: r.median,
        min_best: r.min,
        n: r.n,
    })
}

fn csv_writer<W: Write>(sink: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink)
}

pub fn write_trace_csv<W: Write>(traces: &[ConvergenceTrace], sink: W) -> Result<()> {
    let mut w = csv_writer(sink);
    w.write_record(TRACE_HEADER)?;
    for r in trace_rows(traces) {
        w.write_record([
            r.function,
            r.algorithm,
            r.dim.to_string(),
            r.replication.to_string(),
            r.seed.to_string(),
            r.checkpoint_evals.to_string(),
            r.elapsed_ms.to_string(),
            fmt_float(r.best_value),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(agg: &AggregateResult, sink: W) -> Result<()> {
    let mut w = csv_writer(sink);
    w.write_record(SUMMARY_HEADER)?;
    for r in summary_rows(agg) {
        w.write_record([
            r.function,
            r.algorithm,
            r.checkpoint_evals.to_string(),
            fmt_float(r.mean_best),
            fmt_float(r.std_best),
            fmt_float(r.median_best),
            fmt_float(r.min_best),
            r.n.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_jsonl<W: Write, T: Serialize>(rows: impl Iterator<Item = T>, mut sink: W) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut sink, &r)?;
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn write_trace_jsonl<W: Write>(traces: &[ConvergenceTrace], sink: W) -> Result<()> {
    write_jsonl(trace_rows(traces), sink)
}

pub fn write_summary_jsonl<W: Write>(agg: &AggregateResult, sink: W) -> Result<()> {
    write_jsonl(summary_rows(agg), sink)
}

fn read_csv<R: Read, T: for<'de> Deserialize<'de>>(source: R, header: &[&str]) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    if r.headers()?.iter().ne(header.iter().copied()) {
        return Err(crate::error::Error::config(format!(
            "unexpected header; expected {}",
            header.join(",")
        )));
    }
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

/// Parses a trace CSV as written by [`write_trace_csv`].
pub fn read_trace_csv<R: Read>(source: R) -> Result<Vec<TraceRow>> {
    read_csv(source, &TRACE_HEADER)
}

/// Parses a summary CSV as written by [`write_summary_csv`].
pub fn read_summary_csv<R: Read>(source: R) -> Result<Vec<SummaryRow>> {
    read_csv(source, &SUMMARY_HEADER)
}
