//! CSV output for step traces and error curves.
//!
//! Floats are written with 17 significant digits so they parse back to the
//! same double.

use std::io::Write;

use crate::error::Result;
use crate::harness::{ErrorEstimate, TracedRun};

pub const TRACE_HEADER: [&str; 9] = [
    "n",
    "t_exact",
    "t_float",
    "value",
    "M_n",
    "tau_level",
    "rho_max",
    "undershoot_max",
    "delta",
];

pub const ERRORS_HEADER: [&str; 8] = [
    "algorithm",
    "lambda",
    "p",
    "n",
    "R",
    "lp_error",
    "std_pth_power",
    "dropped_replications",
];

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace_csv<W: Write>(out: W, run: &TracedRun) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for t in &run.traces {
        w.write_record([
            t.n.to_string(),
            t.new_site.to_string(),
            format_float(t.new_site.to_f64()),
            format_float(t.new_value),
            format_float(t.min_value),
            t.tau_level.to_string(),
            format_float(t.rho_max),
            format_float(t.undershoot_max),
            format_float(run.delta(t)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_errors_csv<W: Write>(out: W, rows: &[ErrorEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ERRORS_HEADER)?;
    for r in rows {
        w.write_record([
            r.algorithm.to_string(),
            r.lambda.map(format_float).unwrap_or_default(),
            format_float(r.p),
            r.n.to_string(),
            r.replications.to_string(),
            format_float(r.estimate.lp_error),
            format_float(r.estimate.std_pth_power),
            r.dropped.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
