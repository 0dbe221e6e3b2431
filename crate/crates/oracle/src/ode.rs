//! Dormand-Prince 5(4) adaptive integrator for complex linear-algebra states.

use crate::error::{OracleError, Result};
use crate::C64;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_init: 1e-3, h_max: 1.0, max_steps: 10_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Integrator state that can be advanced to successive output times.
pub struct Dopri<F>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    f: F,
    pub t: f64,
    pub y: Vec<C64>,
    h: f64,
    k: Vec<Vec<C64>>,
    fsal: bool,
    opts: OdeOptions,
    pub steps: usize,
}

impl<F> Dopri<F>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    pub fn new(f: F, t0: f64, y0: Vec<C64>, opts: OdeOptions) -> Self {
        let n = y0.len();
        Self { f, t: t0, y: y0, h: opts.h_init, k: vec![vec![C64::new(0.0, 0.0); n]; 7], fsal: false, opts, steps: 0 }
    }

    /// Advance exactly to `t_end`.
    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        let n = self.y.len();
        let mut stage = vec![C64::new(0.0, 0.0); n];
        let mut ynew = vec![C64::new(0.0, 0.0); n];
        while self.t < t_end {
            if self.steps >= self.opts.max_steps {
                return Err(OracleError::NotConverged(format!("ODE step limit at t = {}", self.t)));
            }
            let h = self.h.min(t_end - self.t).min(self.opts.h_max);
            if !self.fsal {
                (self.f)(self.t, &self.y, &mut self.k[0]);
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = self.y[i];
                    for (j, a) in A[s][..s].iter().enumerate() {
                        if *a != 0.0 {
                            acc += self.k[j][i] * (h * a);
                        }
                    }
                    stage[i] = acc;
                }
                if s == 6 {
                    ynew.copy_from_slice(&stage);
                }
                let (_, tail) = self.k.split_at_mut(s);
                (self.f)(self.t + C[s] * h, &stage, &mut tail[0]);
            }
            let mut err = 0.0;
            for i in 0..n {
                let mut e = C64::new(0.0, 0.0);
                for (j, w) in E.iter().enumerate() {
                    if *w != 0.0 {
                        e += self.k[j][i] * *w;
                    }
                }
                let sc = self.opts.atol + self.opts.rtol * self.y[i].norm().max(ynew[i].norm());
                err += (e.norm() * h / sc).powi(2);
            }
            let err = (err / n as f64).sqrt();
            if !err.is_finite() {
                return Err(OracleError::NotConverged(format!("non-finite ODE state at t = {}", self.t)));
            }
            if err <= 1.0 {
                self.t = if h == t_end - self.t { t_end } else { self.t + h };
                std::mem::swap(&mut self.y, &mut ynew);
                self.k.swap(0, 6);
                self.fsal = true;
                self.steps += 1;
            } else {
                // k[0] still holds f(t, y).
                self.fsal = true;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            let proposal = h * fac;
            // A step shortened to land on an output time says little about the natural step.
            self.h = if err <= 1.0 && h < self.h { self.h.max(proposal) } else { proposal };
        }
        Ok(())
    }
}
