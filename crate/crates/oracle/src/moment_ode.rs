//! Closed equations for the first moments `<a>` and the normally ordered
//! second moments `rho[n][n'] = <a_n'† a_n>`, integrated numerically.
//!
//! From the Heisenberg-Langevin equations, `d<a>/dt = G <a> + s` and
//! `d rho/dt = G rho + rho G† + <a> s† + s <a>† + Γ1 |1><1|`, with the drift
//! `G` and source `s` of [`crate::sector::drift`].

use ptdimer_core::SystemParams;

use crate::divergence::{DivergenceMonitor, GrowthTrace};
use crate::error::Result;
use crate::ode::{Dopri, OdeOptions};
use crate::sector::drift;
use crate::{Mat2, Vec2, C64};

fn pack(a: &Vec2, rho: &Mat2) -> Vec<C64> {
    vec![a[0], a[1], rho[(0, 0)], rho[(1, 0)], rho[(0, 1)], rho[(1, 1)]]
}

fn unpack(y: &[C64]) -> (Vec2, Mat2) {
    (Vec2::new(y[0], y[1]), Mat2::new(y[2], y[4], y[3], y[5]))
}

fn rhs(p: &SystemParams) -> impl Fn(f64, &[C64], &mut [C64]) {
    let (g, s) = drift(p);
    let gain = p.gamma1;
    move |_, y, dy| {
        let (a, rho) = unpack(y);
        let da = g * a + s;
        let mut drho = g * rho + rho * g.adjoint() + a * s.adjoint() + s * a.adjoint();
        drho[(0, 0)] += gain;
        dy.copy_from_slice(&pack(&da, &drho));
    }
}

/// `(<a>(t), rho(t))` from the initial pair.
pub fn moment_ode_evolve(p: &SystemParams, a0: &Vec2, rho0: &Mat2, t: f64, opts: OdeOptions) -> Result<(Vec2, Mat2)> {
    p.validate()?;
    let mut ode = Dopri::new(rhs(p), 0.0, pack(a0, rho0), opts);
    ode.advance_to(t)?;
    Ok(unpack(&ode.y))
}

/// Integrate up to `horizon`; returns the onset time and reason if the total
/// intensity `tr rho` grows with the monitor's divergence signature.
pub fn moment_ode_divergence(p: &SystemParams, a0: &Vec2, rho0: &Mat2, horizon: f64, opts: OdeOptions, monitor: &DivergenceMonitor) -> Result<Option<(f64, String)>> {
    p.validate()?;
    let mut ode = Dopri::new(rhs(p), 0.0, pack(a0, rho0), opts);
    let mut trace = GrowthTrace::new(monitor.clone(), p.j);
    let mut now = 0.0;
    loop {
        let (_, rho) = unpack(&ode.y);
        if let Some(reason) = trace.push(now, rho.trace().re, 0.0) {
            return Ok(Some((now, reason)));
        }
        if now >= horizon {
            return Ok(None);
        }
        now = (now + trace.interval()).min(horizon);
        ode.advance_to(now)?;
    }
}
