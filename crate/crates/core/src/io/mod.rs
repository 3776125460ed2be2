//! On-disk formats: field CSV, trajectory directories (`meta.json`,
//! `norms.csv`, snapshot CSVs), sweep CSV and JSON reports.
//!
//! Floats are written in shortest round-trip scientific notation, so a
//! write → read → write cycle is byte-identical.

mod field_csv;
mod trajectory_dir;

pub use field_csv::{read_field_csv, write_field_csv, FIELD_CSV_HEADER};
pub use trajectory_dir::{
    read_norms_csv, read_sweep_csv, write_json, write_norms_csv, write_sweep_csv, write_trajectory, SweepRow,
    TrajectoryMeta, NORMS_CSV_HEADER, SWEEP_CSV_HEADER,
};

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}
