use std::io::Write;
use std::time::Instant;

use crate::error::Result;

/// One benchmark measurement row.
#[derive(Debug, Clone)]
pub struct BenchResult {
    pub case: String,
    pub kernel: String,
    pub n_rows: usize,
    pub n_cols: usize,
    /// Event density, connection probability, or other case-defined ratio.
    pub density: f64,
    pub reps: usize,
    pub median_ns: u64,
    pub mean_ns: u64,
    pub p10_ns: u64,
    pub p90_ns: u64,
    pub state_bytes: u64,
    /// Sum of the output vector; equal across kernels on identical inputs.
    pub checksum: f64,
}

pub const CSV_HEADER: &str =
    "case,kernel,rows,cols,density,reps,median_ns,mean_ns,p10_ns,p90_ns,state_bytes,checksum";

/// Writes results as CSV with the documented stable header.
pub fn write_csv<W: Write>(results: &[BenchResult], out: &mut W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{:.17e}",
            r.case,
            r.kernel,
            r.n_rows,
            r.n_cols,
            r.density,
            r.reps,
            r.median_ns,
            r.mean_ns,
            r.p10_ns,
            r.p90_ns,
            r.state_bytes,
            r.checksum
        )?;
    }
    Ok(())
}

/// Parses a CSV produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<BenchResult>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != CSV_HEADER {
        return Err(crate::error::Error::Format(format!(
            "unexpected CSV header: {header}"
        )));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let bad = || crate::error::Error::Format(format!("bad CSV row {}", i + 2));
        if f.len() != 12 {
            return Err(bad());
        }
        out.push(BenchResult {
            case: f[0].into(),
            kernel: f[1].into(),
            n_rows: f[2].parse().map_err(|_| bad())?,
            n_cols: f[3].parse().map_err(|_| bad())?,
            density: f[4].parse().map_err(|_| bad())?,
            reps: f[5].parse().map_err(|_| bad())?,
            median_ns: f[6].parse().map_err(|_| bad())?,
            mean_ns: f[7].parse().map_err(|_| bad())?,
            p10_ns: f[8].parse().map_err(|_| bad())?,
            p90_ns: f[9].parse().map_err(|_| bad())?,
            state_bytes: f[10].parse().map_err(|_| bad())?,
            checksum: f[11].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

/// Robust summary of wall-clock samples: `(median, mean, p10, p90)`.
/// The median is the headline number; percentiles bound scheduler noise.
pub fn summarize(samples_ns: &[u64]) -> (u64, u64, u64, u64) {
    assert!(!samples_ns.is_empty());
    let mut s = samples_ns.to_vec();
    s.sort_unstable();
    let pick = |q: f64| s[((s.len() - 1) as f64 * q).round() as usize];
    let mean = (s.iter().sum::<u64>() as f64 / s.len() as f64).round() as u64;
    (pick(0.5), mean, pick(0.1), pick(0.9))
}

/// Times `f` for `reps` repetitions after `warmup` unrecorded calls.
pub fn time_reps<F: FnMut(usize)>(warmup: usize, reps: usize, mut f: F) -> Vec<u64> {
    for k in 0..warmup {
        f(k);
    }
    (0..reps)
        .map(|k| {
            let start = Instant::now();
            f(warmup + k);
            start.elapsed().as_nanos() as u64
        })
        .collect()
}
