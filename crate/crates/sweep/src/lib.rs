//! Parameter sweeps over the analytic solution of the driven gain/loss dimer,
//! optionally cross-checked against the truncated Fock-space oracle.
//!
//! A [`SweepSpec`] is resolved from per-command defaults, a TOML file and
//! command-line overrides; [`run`] evaluates it into a [`SweepTable`].

pub mod commands;
pub mod error;
pub mod spec;
pub mod table;

pub use commands::{
    cmd_intensity_map, cmd_linecut, cmd_snr_map, cmd_stability_map, cmd_transient, cmd_verify, exit_code, run,
    BOUNDARY_TOL,
};
pub use error::{Result, SweepError};
pub use spec::{Axis, Command, Engine, Format, Layer, Scale, SweepSpec};
pub use table::{format_number, Row, Status, SweepTable};

/// Write a table in the spec's format to its output path (stdout if none).
pub fn write_table(spec: &SweepSpec, table: &SweepTable) -> Result<()> {
    let mut buf = Vec::new();
    match spec.format {
        Format::Csv => table.write_csv(&mut buf)?,
        Format::Json => table.write_json(&mut buf)?,
    }
    match &spec.out {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::Write::write_all(&mut std::io::stdout().lock(), &buf)?,
    }
    Ok(())
}
