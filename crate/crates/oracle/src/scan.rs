//! Choice of the truncation from convergence of the observables.

use ptdimer_core::SystemParams;

use crate::config::{FockConfig, Truncation};
use crate::error::{OracleError, Result};
use crate::sector::displaced_steady_state_from;
use crate::state::{FockState, Representation};
use crate::steady::lab_steady_state;

/// Cutoff increment between compared solves.
pub const SCAN_STEP: usize = 4;

/// Smallest cutoff whose tail prediction may end the scan early.
const EARLY_REFUSAL_MIN: usize = 17;
/// Predictions beyond this multiple of the maximum cutoff end the scan.
const EARLY_REFUSAL_FACTOR: f64 = 1.5;

/// Population per truncation level: total excitation `N` for sectors,
/// `max(n1, n2)` for the lab frame.
pub fn level_populations(state: &FockState) -> Vec<f64> {
    let nc = state.cfg.cutoff;
    match &state.repr {
        Representation::Sectors { blocks, .. } => blocks.iter().map(|b| b.trace().re).collect(),
        Representation::Dense(m) => {
            let mut pops = vec![0.0; nc + 1];
            for k in 0..m.nrows() {
                pops[(k / (nc + 1)).max(k % (nc + 1))] += m[(k, k)].re;
            }
            pops
        }
    }
}

/// Cutoff at which the boundary population is predicted to fall below `tail_tol`,
/// from the geometric decay of the last few levels, or from
/// [`rising_tail_cutoff`] while the populations still grow toward the boundary.
fn predicted_cutoff(state: &FockState) -> Option<f64> {
    let pops = level_populations(state);
    let nc = pops.len() - 1;
    if nc < 6 {
        return None;
    }
    // The boundary level itself is distorted by the truncation; fit below it.
    let (hi, lo) = (pops[nc - 1], pops[nc - 5]);
    if hi > 0.0 && lo <= hi {
        return Some(rising_tail_cutoff(nc, state.cfg.tail_tol));
    }
    if !(hi > 0.0 && lo > hi) {
        return None;
    }
    let rate = (lo / hi).ln() / 4.0;
    let excess = (pops[nc] / state.cfg.tail_tol).ln().max(0.0);
    Some(nc as f64 + excess / rate)
}

/// Lower estimate of the cutoff needed when the populations still rise toward
/// the boundary. For two thermal modes the total-excitation distribution rises
/// at level `nc` only if the larger occupation is at least about `nc - 2.5`;
/// such a mode decays below `tail_tol` only after `(ν + 1/2) ln(1 / (tail_tol (ν + 1)))`
/// levels.
fn rising_tail_cutoff(nc: usize, tail_tol: f64) -> f64 {
    let nu = (nc as f64 - 2.5).max(0.0);
    (nu + 0.5) * (-(tail_tol * (nu + 1.0)).ln()).max(0.0)
}

fn solve(p: &SystemParams, cfg: &FockConfig, warm: Option<&FockState>) -> Result<FockState> {
    match cfg.truncation {
        Truncation::PerMode => lab_steady_state(p, cfg),
        Truncation::TotalExcitation => displaced_steady_state_from(p, cfg, warm),
    }
}

fn settled(a: &FockState, b: &FockState, tol: f64) -> bool {
    let (ma, mb) = (a.moments(), b.moments());
    let vals = |m: &crate::state::FockMoments| [m.intensity[0], m.intensity[1], m.dispersion[0], m.dispersion[1]];
    vals(&ma).iter().zip(vals(&mb)).all(|(x, y)| (x - y).abs() <= tol * y.abs().max(1e-8))
}

/// Smallest cutoff on the grid `1, 5, 9, ...` (up to `max_cutoff`) whose
/// intensities and dispersions change by less than `tol` (relative) when the
/// cutoff grows by [`SCAN_STEP`], and whose boundary population is at most
/// `base.tail_tol`. Grid points whose boundary population is predicted to
/// stay above the threshold are skipped. Returns the configuration and the
/// state at that cutoff.
pub fn cutoff_scan(p: &SystemParams, tol: f64, base: &FockConfig, max_cutoff: usize) -> Result<(FockConfig, FockState)> {
    let refuse = |why: String| OracleError::CutoffTooSmall(format!("{why} (max cutoff {max_cutoff})"));
    let mut nc = 1;
    let mut current = solve(p, &base.with_cutoff(nc), None)?;
    loop {
        let next_nc = nc + SCAN_STEP;
        if next_nc > max_cutoff {
            return Err(refuse(format!("not converged at cutoff {nc}")));
        }
        if current.tail_population() > base.tail_tol {
            let mut target = next_nc;
            if let Some(pred) = predicted_cutoff(&current) {
                // Once the geometric tail is resolved, a prediction far past the
                // limit is conclusive; stop before the expensive solves.
                if nc >= EARLY_REFUSAL_MIN && pred > EARLY_REFUSAL_FACTOR * max_cutoff as f64 {
                    return Err(refuse(format!("boundary population predicts cutoff ~{pred:.0}")));
                }
                let grid = 1 + ((pred.min(1e6) as usize).saturating_sub(1) / SCAN_STEP) * SCAN_STEP;
                target = target.max(grid.min(2 * nc + SCAN_STEP));
            }
            let last = 1 + (max_cutoff - SCAN_STEP - 1) / SCAN_STEP * SCAN_STEP;
            target = target.min(last.max(next_nc));
            current = solve(p, &base.with_cutoff(target), Some(&current))?;
            nc = target;
            continue;
        }
        let bigger = solve(p, &base.with_cutoff(next_nc), Some(&current))?;
        if settled(&current, &bigger, tol) {
            return Ok((base.with_cutoff(nc), current));
        }
        nc = next_nc;
        current = bigger;
    }
}
