//! Time dynamics of the order parameter and the transient characteristic
//! function on the exceptional-point line.

use std::f64::consts::SQRT_2;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::heff::build_heff;
use crate::moments::gaussian_chi;
use crate::params::SystemParams;
use crate::stationary::{drive_response, StationaryGaussian};
use crate::{Mat2, Vec2, C64};

/// EP membership tolerance: `|Γ1 + Γ2 - 2J| <= EP_TOL * J`.
pub const EP_TOL: f64 = 1e-9;

/// Coalesced eigen-data at the exceptional point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpModeData {
    /// `Δ - i(Γ2-Γ1)/4`.
    pub lambda: C64,
    /// `(1, -i)/√2`.
    pub b: Vec2,
    /// `(0, 1)`.
    pub e2_basis: Vec2,
}

fn check_ep(p: &SystemParams) -> Result<()> {
    p.validate()?;
    let offset = (p.gamma1 + p.gamma2 - 2.0 * p.j).abs();
    if offset > EP_TOL * p.j {
        return Err(Error::NotAtEP { offset });
    }
    Ok(())
}

pub fn ep_mode_data(p: &SystemParams) -> Result<EpModeData> {
    check_ep(p)?;
    let r = 1.0 / SQRT_2;
    Ok(EpModeData {
        lambda: C64::new(p.delta, -0.25 * (p.gamma2 - p.gamma1)),
        b: Vec2::new(C64::new(r, 0.0), C64::new(0.0, -r)),
        e2_basis: Vec2::new(C64::from(0.0), C64::from(1.0)),
    })
}

/// Weight of `|2>` per unit `C1` in the general EP solution: `√8 i / (Γ1+Γ2)`.
fn kappa(p: &SystemParams) -> C64 {
    C64::new(0.0, 8f64.sqrt() / (p.gamma1 + p.gamma2))
}

/// `q + (C0 b + κ C1 |2>) e^{-iλt} + C1 t e^{-iλt} b`.
pub fn order_parameter_ep(p: &SystemParams, c0: C64, c1: C64, t: f64) -> Result<Vec2> {
    let ep = ep_mode_data(p)?;
    let q = drive_response(p)?;
    let ph = (-C64::i() * ep.lambda * t).exp();
    Ok(q + (ep.b * c0 + ep.e2_basis * (kappa(p) * c1)) * ph + ep.b * (c1 * t * ph))
}

/// Constants `(C0, C1)` reproducing the initial order parameter `a0`.
pub fn fit_constants(p: &SystemParams, a0: &Vec2) -> Result<(C64, C64)> {
    check_ep(p)?;
    let d = a0 - drive_response(p)?;
    // d = C0 (1, -i)/√2 + κ C1 (0, 1).
    let c0 = d[0] * SQRT_2;
    let c1 = (d[1] + C64::i() * d[0]) / kappa(p);
    Ok((c0, c1))
}

/// `e^X` for a 2x2 matrix via `X = cI + N`, `N² = s² I`.
pub(crate) fn expm2(x: &Mat2) -> Mat2 {
    let c = 0.5 * (x[(0, 0)] + x[(1, 1)]);
    let n = x - Mat2::identity() * c;
    let s2 = n[(0, 0)] * n[(0, 0)] + n[(0, 1)] * n[(1, 0)];
    if s2.norm() < 1e-6 {
        // Even series in s around the defective case.
        let ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0 + s2 * s2 * s2 / 720.0;
        let shc = 1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0;
        return (Mat2::identity() * ch + n * shc) * c.exp();
    }
    // Spectral form; keeps e^{c±s} together so large arguments do not cancel.
    let s = s2.sqrt();
    let ns = n / s;
    let id = Mat2::identity();
    ((id + ns) * (c + s).exp() + (id - ns) * (c - s).exp()) * C64::from(0.5)
}

/// Solution of `i dā/dt = H_eff ā + |F>` with `ā(0) = a0`, valid for any
/// parameters, including unstable and defective ones.
pub fn order_parameter_general(p: &SystemParams, a0: &Vec2, t: f64) -> Vec2 {
    let h = build_heff(p).h;
    let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
    if det.norm() > 1e-6 * p.j * p.j {
        let ass = drive_response(p).expect("H_eff invertible");
        return expm2(&(h * (-C64::i() * t))) * (a0 - ass) + ass;
    }
    // H_eff (nearly) singular: propagate the affine system as a linear one in 3D.
    let mut aug = Matrix3::<C64>::zeros();
    for r in 0..2 {
        for c in 0..2 {
            aug[(r, c)] = -C64::i() * h[(r, c)] * t;
        }
    }
    aug[(1, 2)] = -C64::i() * p.f * t;
    let e = aug.exp();
    let v = e * nalgebra::Vector3::new(a0[0], a0[1], C64::from(1.0));
    Vec2::new(v[0], v[1])
}

/// One component of the mixture over the constants `(C0, C1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsemblePoint {
    pub c0: C64,
    pub c1: C64,
    pub weight: f64,
}

/// Normalized convex mixture over `(C0, C1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientEnsemble {
    points: Vec<EnsemblePoint>,
}

impl TransientEnsemble {
    pub fn new(points: Vec<EnsemblePoint>) -> Result<Self> {
        let sum: f64 = points.iter().map(|p| p.weight).sum();
        if points.iter().any(|p| !(p.weight >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::UnnormalizedEnsemble { sum });
        }
        Ok(Self { points })
    }

    /// Single point with unit weight.
    pub fn single(c0: C64, c1: C64) -> Self {
        Self { points: vec![EnsemblePoint { c0, c1, weight: 1.0 }] }
    }

    pub fn points(&self) -> &[EnsemblePoint] {
        &self.points
    }
}

/// Mixture of stationary-covariance Gaussians displaced along the EP trajectories.
pub fn transient_chi(
    p: &SystemParams,
    g: &StationaryGaussian,
    ens: &TransientEnsemble,
    t: f64,
    alpha: &Vec2,
) -> Result<C64> {
    check_ep(p)?;
    let sum: f64 = ens.points.iter().map(|x| x.weight).sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::UnnormalizedEnsemble { sum });
    }
    let mut acc = C64::from(0.0);
    for pt in &ens.points {
        let a = order_parameter_ep(p, pt.c0, pt.c1, t)?;
        acc += gaussian_chi(&a, &g.m, alpha) * pt.weight;
    }
    Ok(acc)
}
