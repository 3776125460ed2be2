use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::continuation::SweepReport;
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::solvers::{NormTrace, SolverConfig, Trajectory};

pub const NORMS_CSV_HEADER: [&str; 8] =
    ["t", "norm_H", "norm_V", "norm_DA", "norm_L4", "int_V2", "int_f_y", "int_L4_8"];
pub const SWEEP_CSV_HEADER: [&str; 5] = ["lambda", "status", "t_star", "serrin", "sup_V"];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub config: SolverConfig,
    pub exit_status: String,
    pub samples: usize,
    pub t_end: f64,
    pub advective_warning: bool,
    /// `(grid index, time, file)` for each stored snapshot.
    pub snapshots: Vec<(usize, f64, String)>,
    pub created_unix: u64,
}

/// Writes `meta.json`, `norms.csv` and `fields/state_NNNNNN.csv` snapshots
/// (every `snapshot_every`-th state plus the last) into `dir`.
pub fn write_trajectory(
    dir: &Path,
    traj: &Trajectory,
    snapshot_every: usize,
    exit_status: &str,
) -> Result<TrajectoryMeta> {
    fs::create_dir_all(dir.join("fields"))?;
    write_norms_csv(&dir.join("norms.csv"), traj.norm_trace())?;
    let n = traj.times().len();
    let every = snapshot_every.max(1);
    let mut snapshots = Vec::new();
    for i in (0..n).filter(|i| i % every == 0 || *i == n - 1) {
        let name = format!("fields/state_{i:06}.csv");
        traj.states()[i].write_csv_file(dir.join(&name))?;
        snapshots.push((i, traj.times()[i], name));
    }
    let meta = TrajectoryMeta {
        config: traj.config().clone(),
        exit_status: exit_status.to_string(),
        samples: n,
        t_end: traj.t_end(),
        advective_warning: traj.advective_warning(),
        snapshots,
        created_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    write_json(&dir.join("meta.json"), &meta)?;
    Ok(meta)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}

pub fn write_norms_csv(path: &Path, trace: &NormTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(NORMS_CSV_HEADER)?;
    for i in 0..trace.len() {
        w.write_record(
            [
                trace.times[i],
                trace.norm_h[i],
                trace.norm_v[i],
                trace.norm_da[i],
                trace.norm_l4[i],
                trace.int_v2[i],
                trace.int_f_y[i],
                trace.int_l4_8[i],
            ]
            .map(fmt_f64),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_norms_csv(path: &Path) -> Result<NormTrace> {
    let mut r = csv::Reader::from_path(path)?;
    if r.headers()?.iter().ne(NORMS_CSV_HEADER) {
        return Err(Error::DataIntegrity(format!("{}: unexpected header", path.display())));
    }
    let mut trace = NormTrace::default();
    for record in r.records() {
        let record = record?;
        let v: Vec<f64> = record
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::DataIntegrity(format!("{}: {e}", path.display())))?;
        if v.len() != 8 {
            return Err(Error::DataIntegrity(format!("{}: expected 8 columns", path.display())));
        }
        trace.times.push(v[0]);
        trace.norm_h.push(v[1]);
        trace.norm_v.push(v[2]);
        trace.norm_da.push(v[3]);
        trace.norm_l4.push(v[4]);
        trace.int_v2.push(v[5]);
        trace.int_f_y.push(v[6]);
        trace.int_l4_8.push(v[7]);
    }
    Ok(trace)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub status: String,
    pub t_star: Option<f64>,
    pub serrin: Option<f64>,
    pub sup_v: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_sweep_csv(path: &Path, report: &SweepReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SWEEP_CSV_HEADER)?;
    for e in &report.entries {
        w.write_record([fmt_f64(e.lambda), e.status.as_str().to_string(), opt(e.t_star), opt(e.serrin), opt(e.sup_v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path)?;
    if r.headers()?.iter().ne(SWEEP_CSV_HEADER) {
        return Err(Error::DataIntegrity(format!("{}: unexpected header", path.display())));
    }
    let parse = |s: &str| -> Result<Option<f64>> {
        let s = s.trim();
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| Error::DataIntegrity(format!("{}: {e}", path.display())))
        }
    };
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        if record.len() != 5 {
            return Err(Error::DataIntegrity(format!("{}: expected 5 columns", path.display())));
        }
        rows.push(SweepRow {
            lambda: parse(&record[0])?
                .ok_or_else(|| Error::DataIntegrity(format!("{}: missing lambda", path.display())))?,
            status: record[1].to_string(),
            t_star: parse(&record[2])?,
            serrin: parse(&record[3])?,
            sup_v: parse(&record[4])?,
        });
    }
    Ok(rows)
}
