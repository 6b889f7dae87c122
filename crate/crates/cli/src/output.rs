//! Artifact writers. Numeric CSV cells carry 17 significant digits so
//! doubles round-trip exactly; line endings are `\n`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use qprobe::qevolve::TrajectoryRecord;
use qprobe::qinfo::{von_neumann_entropy, InfoLedgerEntry};
use qprobe::Density2;

use crate::CliError;

/// 17 significant digits, round-trip exact for f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub const SERIES_HEADER: &str = "time,rho00_re,rho00_im,rho01_re,rho01_im,rho10_re,rho10_im,rho11_re,rho11_im,vn_entropy_bits,purity";

pub const LEDGER_HEADER: &str =
    "step,shannon_bits,info_gain_bits,entanglement_bits,vn_entropy_bits";

/// Density-matrix time series: one row per stamp with entropy and purity.
pub fn write_series_csv(path: &Path, times: &[f64], states: &[Density2]) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SERIES_HEADER}")?;
    for (t, rho) in times.iter().zip(states.iter()) {
        let vn = von_neumann_entropy(rho)
            .map_err(|e| CliError::Numeric(format!("series entropy: {e}")))?;
        let mut row = vec![fmt17(*t)];
        for i in 0..2 {
            for j in 0..2 {
                let e = rho.entry(i, j);
                row.push(fmt17(e.re));
                row.push(fmt17(e.im));
            }
        }
        row.push(fmt17(vn));
        row.push(fmt17(rho.purity()));
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ledger_csv(path: &Path, entries: &[InfoLedgerEntry<f64>]) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{LEDGER_HEADER}")?;
    for e in entries {
        writeln!(
            w,
            "{},{},{},{},{}",
            e.step,
            fmt17(e.shannon_bits),
            fmt17(e.info_gain_bits),
            fmt17(e.entanglement_bits),
            fmt17(e.vn_entropy_bits),
        )?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryOut {
    stream: u64,
    outcomes: String,
    times: Vec<f64>,
    snapshots: Vec<[[f64; 2]; 2]>,
}

#[derive(Serialize)]
struct TrajectoriesOut {
    seed: u64,
    unraveling: &'static str,
    n_trajectories: usize,
    snapshot_stride: usize,
    trajectories: Vec<TrajectoryOut>,
}

/// Trajectory records: seed, outcome string, and state snapshots as
/// `[re, im]` amplitude pairs in the fixed basis order.
pub fn write_trajectories_json(
    path: &Path,
    records: &[TrajectoryRecord<f64>],
    snapshot_stride: usize,
) -> Result<(), CliError> {
    let first = records
        .first()
        .ok_or_else(|| CliError::Numeric("empty ensemble".into()))?;
    let out = TrajectoriesOut {
        seed: first.seed,
        unraveling: first.unraveling.as_str(),
        n_trajectories: records.len(),
        snapshot_stride,
        trajectories: records
            .iter()
            .map(|r| TrajectoryOut {
                stream: r.stream,
                outcomes: r.outcomes.iter().map(|s| s.as_char()).collect(),
                times: r.times.clone(),
                snapshots: r
                    .states
                    .iter()
                    .map(|s| {
                        let a = s.amplitudes();
                        [[a.get(0).re, a.get(0).im], [a.get(1).re, a.get(1).im]]
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, &out)
        .map_err(|e| CliError::Numeric(format!("serializing trajectories: {e}")))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::Numeric(format!("serializing json: {e}")))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
