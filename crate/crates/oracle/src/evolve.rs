//! Time evolution of truncated density matrices.

use nalgebra::DMatrix;
use ptdimer_core::SystemParams;

use crate::divergence::{DivergenceMonitor, GrowthTrace};
use crate::error::{OracleError, Result};
use crate::liouvillian::build_liouvillian;
use crate::ode::{Dopri, OdeOptions};
use crate::sector::{mean_field, SectorOperator};
use crate::state::{FockState, Representation};
use crate::C64;

/// Largest accepted change of the trace during one evolution.
pub const TRACE_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct EvolveOptions {
    pub ode: OdeOptions,
    pub monitor: DivergenceMonitor,
}

/// Flattening of a state for the integrator, and its inverse.
enum Layout {
    Dense(usize),
    Sectors(SectorOperator, nalgebra::Vector2<C64>),
}

impl Layout {
    fn flatten(&self, state: &FockState) -> Vec<C64> {
        match &state.repr {
            // Column stacking.
            Representation::Dense(m) => m.iter().copied().collect(),
            Representation::Sectors { blocks, .. } => blocks.iter().flat_map(|b| b.transpose().iter().copied().collect::<Vec<_>>()).collect(),
        }
    }

    fn rebuild(&self, template: &FockState, y: &[C64]) -> FockState {
        let repr = match self {
            Layout::Dense(d) => Representation::Dense(DMatrix::from_column_slice(*d, *d, y)),
            Layout::Sectors(op, beta) => Representation::Sectors {
                beta: *beta,
                blocks: (0..op.blocks())
                    .map(|n| {
                        let o = op.offset(n);
                        DMatrix::from_fn(n + 1, n + 1, |i, j| y[o + i * (n + 1) + j])
                    })
                    .collect(),
            },
        };
        FockState { cfg: template.cfg, repr }
    }
}

/// Evolve `initial` to time `t`, calling `observe` at every monitor sample
/// (and at `t = 0`). Lab-frame states use the full Liouvillian; displaced
/// states use the invariant sector generator with the frame fixed by their
/// stored mean field, which must be the stationary one of `p`.
///
/// Growth matching the monitor's signature aborts with `DivergenceDetected`.
pub fn evolve_observed<O>(p: &SystemParams, initial: &FockState, t: f64, opts: &EvolveOptions, mut observe: O) -> Result<FockState>
where
    O: FnMut(f64, &FockState),
{
    p.validate()?;
    if !(t >= 0.0) {
        return Err(OracleError::Model(ptdimer_core::Error::InvalidParameter(format!("evolution time {t} must be >= 0"))));
    }
    let tr0 = initial.trace();
    let (layout, generator): (Layout, Box<dyn Fn(&[C64], &mut [C64])>) = match &initial.repr {
        Representation::Dense(m) => {
            let l = build_liouvillian(p, &initial.cfg)?;
            if l.dim != m.nrows() {
                return Err(OracleError::Format(format!("state dimension {} does not match cutoff {}", m.nrows(), initial.cfg.cutoff)));
            }
            (Layout::Dense(l.dim), Box::new(move |y: &[C64], dy: &mut [C64]| l.matrix.matvec_into(y, dy)))
        }
        Representation::Sectors { beta, blocks } => {
            let fixed = mean_field(p)?;
            if (beta - fixed).norm() > 1e-12 * fixed.norm().max(1.0) {
                return Err(OracleError::Format("displaced state belongs to a different mean field".into()));
            }
            let op = SectorOperator::new(p, blocks.len() - 1, 0);
            let op2 = op.clone();
            (Layout::Sectors(op, *beta), Box::new(move |y: &[C64], dy: &mut [C64]| op2.apply_into(y, dy)))
        }
    };
    let mut trace = GrowthTrace::new(opts.monitor.clone(), p.j);
    let mut ode = Dopri::new(|_, y: &[C64], dy: &mut [C64]| generator(y, dy), 0.0, layout.flatten(initial), opts.ode);
    let mut now = 0.0;
    loop {
        let state = layout.rebuild(initial, &ode.y);
        let tr = state.trace();
        if (tr - tr0).abs() > TRACE_DRIFT_TOL * tr0.abs().max(1.0) {
            return Err(OracleError::NotConverged(format!("trace drifted by {:e} at t = {now}", tr - tr0)));
        }
        observe(now, &state);
        let m = state.moments();
        if let Some(reason) = trace.push(now, m.intensity[0] + m.intensity[1], state.tail_population() / tr) {
            return Err(OracleError::DivergenceDetected { time: now, reason });
        }
        if now >= t {
            return Ok(state);
        }
        now = (now + trace.interval()).min(t);
        ode.advance_to(now)?;
    }
}

/// Evolve `initial` to time `t`.
pub fn evolve(p: &SystemParams, initial: &FockState, t: f64, opts: &EvolveOptions) -> Result<FockState> {
    evolve_observed(p, initial, t, opts, |_, _| {})
}
