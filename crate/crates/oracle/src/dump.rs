//! Plain-text density-matrix exchange: one `row,col,re,im` line per nonzero.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::DMatrix;

use crate::error::{OracleError, Result};
use crate::C64;

pub fn write_dump<W: Write>(mut w: W, rho: &DMatrix<C64>) -> Result<()> {
    writeln!(w, "# dim={}", rho.nrows())?;
    writeln!(w, "row,col,re,im")?;
    for c in 0..rho.ncols() {
        for r in 0..rho.nrows() {
            let z = rho[(r, c)];
            if z != C64::new(0.0, 0.0) {
                writeln!(w, "{r},{c},{},{}", z.re, z.im)?;
            }
        }
    }
    Ok(())
}

pub fn read_dump<R: Read>(r: R) -> Result<DMatrix<C64>> {
    let mut dim = None;
    let mut entries = Vec::new();
    for line in BufReader::new(r).lines() {
        let line = line?;
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("# dim=") {
            dim = Some(rest.parse::<usize>().map_err(|e| OracleError::Format(e.to_string()))?);
            continue;
        }
        if line.is_empty() || line.starts_with('#') || line == "row,col,re,im" {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(OracleError::Format(format!("expected 4 fields: `{line}`")));
        }
        let bad = |e: String| OracleError::Format(format!("{e} in `{line}`"));
        let r: usize = f[0].parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
        let c: usize = f[1].parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
        let re: f64 = f[2].parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?;
        let im: f64 = f[3].parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?;
        entries.push((r, c, C64::new(re, im)));
    }
    let d = dim.ok_or_else(|| OracleError::Format("missing `# dim=` header".into()))?;
    let mut m = DMatrix::zeros(d, d);
    for (r, c, z) in entries {
        if r >= d || c >= d {
            return Err(OracleError::Format(format!("entry ({r},{c}) outside dim {d}")));
        }
        m[(r, c)] = z;
    }
    Ok(m)
}
