use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::trace::ConvergenceTrace;

pub const THRESHOLDS: [f64; 4] = [1e-4, 1e-6, 1e-8, 1e-10];
pub const NEVER: &str = "-";

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub label: String,
    pub fevals_to: [Option<usize>; 4],
    pub final_resnorm: f64,
}

pub fn compare_row(label: &str, trace: &ConvergenceTrace) -> CompareRow {
    CompareRow {
        label: label.to_string(),
        fevals_to: THRESHOLDS.map(|t| trace.fevals_to(t)),
        final_resnorm: trace.final_resnorm().unwrap_or(f64::NAN),
    }
}

/// Reads every trace and sorts by evaluations to `1e-6`; traces that never
/// get there go last.
pub fn compare_paths<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<CompareRow>> {
    let mut rows = Vec::with_capacity(paths.len());
    for p in paths {
        let p = p.as_ref();
        let trace = ConvergenceTrace::read_csv(std::fs::File::open(p)?)?;
        let label = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
        rows.push(compare_row(&label, &trace));
    }
    rows.sort_by(|a, b| {
        let key = |r: &CompareRow| (r.fevals_to[1].is_none(), r.fevals_to[1]);
        key(a).cmp(&key(b)).then_with(|| a.label.cmp(&b.label))
    });
    Ok(rows)
}

pub fn write_compare<W: Write>(rows: &[CompareRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "trace",
        "fevals_to_1e-4",
        "fevals_to_1e-6",
        "fevals_to_1e-8",
        "fevals_to_1e-10",
        "final_resnorm",
    ])?;
    for r in rows {
        let mut rec = vec![r.label.clone()];
        rec.extend(r.fevals_to.iter().map(|f| f.map_or(NEVER.to_string(), |v| v.to_string())));
        rec.push(format!("{:.3e}", r.final_resnorm));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
