//! Stationary states of the truncated master equation.

use nalgebra::DMatrix;
use ptdimer_core::SystemParams;

use crate::banded::{banded_bytes, bandwidths, solve_banded};
use crate::config::{FockConfig, Truncation};
use crate::csr::CsrMatrix;
use crate::error::{OracleError, Result};
use crate::liouvillian::build_liouvillian;
use crate::ode::{Dopri, OdeOptions};
use crate::sector::{displaced_steady_state, drift_abscissa};
use crate::state::FockState;
use crate::C64;

/// Stationary state for the configured truncation; rejects results whose
/// population on the truncation boundary exceeds `cfg.tail_tol`.
pub fn steady_state(p: &SystemParams, cfg: &FockConfig) -> Result<FockState> {
    let state = match cfg.truncation {
        Truncation::PerMode => lab_steady_state(p, cfg)?,
        Truncation::TotalExcitation => displaced_steady_state(p, cfg)?,
    };
    check_tail(&state)?;
    Ok(state)
}

pub(crate) fn check_tail(state: &FockState) -> Result<()> {
    let tail = state.tail_population();
    if tail > state.cfg.tail_tol {
        return Err(OracleError::CutoffTooSmall(format!(
            "boundary population {tail:e} above {:e} at cutoff {}",
            state.cfg.tail_tol, state.cfg.cutoff
        )));
    }
    Ok(())
}

/// Estimated multiply-adds of the banded factorization.
pub fn banded_work(n: usize, kl: usize, ku: usize) -> f64 {
    n as f64 * kl as f64 * (kl + ku) as f64
}

/// Lab-frame stationary state: `L vec(ρ) = 0` with the equation of the vacuum
/// element replaced by `ρ[0,0] = 1`, solved by banded elimination, then scaled
/// to unit trace. Falls back to long-time integration if the solve breaks down.
pub fn lab_steady_state(p: &SystemParams, cfg: &FockConfig) -> Result<FockState> {
    p.validate()?;
    if drift_abscissa(p) >= 0.0 {
        return Err(OracleError::Unstable);
    }
    let cfg = FockConfig { truncation: Truncation::PerMode, ..*cfg };
    let l = build_liouvillian(p, &cfg)?;
    let d = l.dim;
    let n = d * d;
    let mut t: Vec<(usize, usize, C64)> = l.matrix.triplets().filter(|&(r, _, _)| r != 0).collect();
    t.push((0, 0, C64::new(1.0, 0.0)));
    let a = CsrMatrix::from_triplets(n, n, t);
    let (kl, ku) = bandwidths(&a);
    if banded_bytes(n, kl, ku) > cfg.memory_budget || banded_work(n, kl, ku) > cfg.work_budget {
        return Err(OracleError::CutoffTooSmall(format!(
            "banded solve at cutoff {} exceeds the resource budget",
            cfg.cutoff
        )));
    }
    let mut b = vec![C64::new(0.0, 0.0); n];
    b[0] = C64::new(1.0, 0.0);
    let x = match solve_banded(&a, &b) {
        Ok(x) => x,
        Err(OracleError::NotConverged(_)) => relax(&l.matrix, d, p)?,
        Err(e) => return Err(e),
    };
    let mut rho = DMatrix::from_fn(d, d, |r, c| x[r + d * c]);
    let tr = rho.trace();
    rho /= tr;
    Ok(FockState::from_dense(cfg, rho))
}

/// Integrate from the vacuum until the generator residual is negligible.
fn relax(l: &CsrMatrix, d: usize, p: &SystemParams) -> Result<Vec<C64>> {
    let mut y0 = vec![C64::new(0.0, 0.0); d * d];
    y0[0] = C64::new(1.0, 0.0);
    let mut ode = Dopri::new(|_, y: &[C64], dy: &mut [C64]| l.matvec_into(y, dy), 0.0, y0, OdeOptions::default());
    let rate = -drift_abscissa(p);
    let mut horizon = 20.0 / rate;
    for _ in 0..8 {
        ode.advance_to(horizon)?;
        let r = l.matvec(&ode.y);
        let res = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let size = ode.y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if res <= 1e-10 * size * p.j {
            return Ok(ode.y);
        }
        horizon *= 2.0;
    }
    Err(OracleError::NotConverged("long-time integration did not reach a stationary state".into()))
}
