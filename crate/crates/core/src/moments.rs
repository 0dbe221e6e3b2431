//! Characteristic function, antinormal moments and derived observables.

use crate::error::{Error, Result};
use crate::jet::Jet4;
use crate::params::SystemParams;
use crate::stationary::{stationary_gaussian, StationaryGaussian};
use crate::{Mat2, Vec2, C64};

/// Default maximal total moment order.
pub const DEFAULT_MAX_ORDER: usize = 8;

/// `χ(α) = exp(<q|α> - <α|q> + <α|M|α>)`.
pub fn chi_stationary(g: &StationaryGaussian, alpha: &Vec2) -> C64 {
    gaussian_chi(&g.q, &g.m, alpha)
}

/// Characteristic function of a displaced Gaussian with displacement `a`.
pub(crate) fn gaussian_chi(a: &Vec2, m: &Mat2, alpha: &Vec2) -> C64 {
    let qa = a.dotc(alpha);
    let aq = alpha.dotc(a);
    let ama = alpha.dotc(&(m * alpha));
    (qa - aq + ama).exp()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Taylor expansion of `χ` at `α = 0`, from which any antinormal moment up
/// to `order` is read off.
#[derive(Debug, Clone)]
pub struct MomentTable {
    chi: Jet4,
}

impl MomentTable {
    pub fn new(g: &StationaryGaussian, order: usize) -> Self {
        let x1 = Jet4::var(order, 0);
        let x = [x1.var_like(0), x1.var_like(1)];
        let y = [x1.var_like(2), x1.var_like(3)];
        let mut e = x1.scale(C64::from(0.0));
        for i in 0..2 {
            e = &e + &x[i].scale(g.q[i].conj());
            e = &e - &y[i].scale(g.q[i]);
            for j in 0..2 {
                e = &e + &(&y[i] * &x[j]).scale(g.m[(i, j)]);
            }
        }
        Self { chi: e.exp() }
    }

    pub fn order(&self) -> usize {
        self.chi.order()
    }

    /// `<a1^n1 a2^n2 a1†^m1 a2†^m2>`.
    pub fn moment(&self, n1: usize, n2: usize, m1: usize, m2: usize) -> Result<C64> {
        let order = n1 + n2 + m1 + m2;
        if order > self.order() {
            return Err(Error::OrderTooLarge { order, max: self.order() });
        }
        let sign = if (n1 + n2) % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * factorial(n1) * factorial(n2) * factorial(m1) * factorial(m2);
        Ok(self.chi.coeff([m1, m2, n1, n2]) * w)
    }
}

/// Single antinormal moment at the default maximal order.
pub fn antinormal_moment(g: &StationaryGaussian, n1: usize, n2: usize, m1: usize, m2: usize) -> Result<C64> {
    let order = n1 + n2 + m1 + m2;
    if order > DEFAULT_MAX_ORDER {
        return Err(Error::OrderTooLarge { order, max: DEFAULT_MAX_ORDER });
    }
    MomentTable::new(g, order).moment(n1, n2, m1, m2)
}

/// Stationary observables of both resonators (index 0: pumped, 1: lossy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSet {
    pub mean_a: Vec2,
    pub rho: Mat2,
    pub intensity: [f64; 2],
    pub dispersion: [f64; 2],
    pub snr1: [f64; 2],
    pub snr2: [f64; 2],
}

fn ratio(num: f64, den2: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den2.max(0.0).sqrt()
    }
}

pub fn observables(g: &StationaryGaussian, p: &SystemParams) -> ObservableSet {
    let n_inc = [p.j * p.gamma2 * g.m0 - 1.0, p.j * p.gamma1 * g.m0];
    let q2 = [g.q[0].norm_sqr(), g.q[1].norm_sqr()];
    let intensity = [q2[0] + n_inc[0], q2[1] + n_inc[1]];
    let dispersion = [
        q2[0] * (2.0 * n_inc[0] + 1.0) + n_inc[0] * (n_inc[0] + 1.0),
        q2[1] * (2.0 * n_inc[1] + 1.0) + n_inc[1] * (n_inc[1] + 1.0),
    ];
    let mut rho = g.rho();
    // The diagonal is the closed-form intensity identically.
    for n in 0..2 {
        rho[(n, n)] = C64::from(intensity[n]);
    }
    ObservableSet {
        mean_a: g.q,
        rho,
        intensity,
        dispersion,
        snr1: [0, 1].map(|n| ratio(q2[n].sqrt(), intensity[n] - q2[n])),
        snr2: [0, 1].map(|n| ratio(intensity[n], dispersion[n])),
    }
}

/// Both signal-to-noise ratios at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    pub snr1: [f64; 2],
    pub snr2: [f64; 2],
}

/// SNRs along a parameter sequence, e.g. one approaching a stability boundary.
pub fn snr_limit_checks(seq: &[SystemParams], tol: f64) -> Result<Vec<SnrPoint>> {
    seq.iter()
        .map(|p| {
            let o = observables(&stationary_gaussian(p, tol)?, p);
            Ok(SnrPoint { snr1: o.snr1, snr2: o.snr2 })
        })
        .collect()
}
