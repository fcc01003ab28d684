//! Text output formats: raster lines, monitor CSV, JSON manifest.

use std::io::Write;

use crate::error::Result;

use super::engine::SimulationResult;

/// Raster as `step<TAB>neuron_id` lines, one spike per line.
pub fn write_raster<W: Write>(result: &SimulationResult, out: &mut W) -> Result<()> {
    for &(step, id) in &result.raster {
        writeln!(out, "{step}\t{id}")?;
    }
    Ok(())
}

/// Monitor traces as CSV with header `step,<name>...`.
pub fn write_monitor_csv<W: Write>(result: &SimulationResult, out: &mut W) -> Result<()> {
    let mut header = String::from("step");
    for t in &result.traces {
        header.push(',');
        header.push_str(&t.name);
    }
    writeln!(out, "{header}")?;
    for step in 0..result.steps as usize {
        write!(out, "{step}")?;
        for t in &result.traces {
            write!(out, ",{}", t.values[step])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Run manifest as pretty JSON.
pub fn manifest_json(result: &SimulationResult) -> String {
    serde_json::to_string_pretty(&result.manifest).expect("manifest serializes")
}
