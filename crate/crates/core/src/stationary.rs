//! Stationary Gaussian state: drive response `q`, noise matrix `M`, scale `M0`.

use crate::error::{Error, Result};
use crate::heff::build_heff;
use crate::params::SystemParams;
use crate::{Mat2, Vec2, C64};

/// Default singularity tolerance relative to `J` (or `J²`).
pub const DEFAULT_TOL: f64 = 1e-9;

/// The stationary antinormal characteristic function is
/// `exp(<q|α> - <α|q> + <α|M|α>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryGaussian {
    pub m0: f64,
    pub m: Mat2,
    pub q: Vec2,
}

impl StationaryGaussian {
    /// Normal-ordered covariance `ρ_{nn'} = <a_n'† a_n> = q q† - M - I`.
    pub fn rho(&self) -> Mat2 {
        self.q * self.q.adjoint() - self.m - Mat2::identity()
    }
}

/// Coherent response `q = 2F/(J² - 4E1E2) (-J, 2E1)`, i.e. `-H_eff⁻¹ (0, F)`.
/// Defined whenever `H_eff` is invertible, stable or not.
pub fn drive_response(p: &SystemParams) -> Result<Vec2> {
    let hf = build_heff(p);
    let den = C64::from(p.j * p.j) - 4.0 * hf.e1 * hf.e2;
    if den.norm() <= DEFAULT_TOL * p.j * p.j {
        return Err(Error::SingularParameters("H_eff is not invertible".into()));
    }
    let s = 2.0 * p.f / den;
    Ok(Vec2::new(s * (-p.j), s * 2.0 * hf.e1))
}

pub fn stationary_gaussian(p: &SystemParams, tol: f64) -> Result<StationaryGaussian> {
    p.validate()?;
    let (j, g1, g2) = (p.j, p.gamma1, p.gamma2);
    let gap = g2 - g1;
    let det = j * j - g1 * g2;
    if gap.abs() <= tol * j {
        return Err(Error::SingularParameters(format!("|G2-G1| = {:e} at the PT-symmetric boundary", gap.abs())));
    }
    if det.abs() <= tol * j * j {
        return Err(Error::SingularParameters(format!("|J^2-G1G2| = {:e} at the boundary", det.abs())));
    }
    if gap < 0.0 || det < 0.0 {
        return Err(Error::Unstable);
    }
    let m0 = j / (gap * det);
    let off = C64::new(0.0, m0 * g1 * g2);
    let m = Mat2::new(
        C64::from(-m0 * j * g2),
        -off,
        off,
        C64::from(-m0 * j * g1 - 1.0),
    );
    Ok(StationaryGaussian { m0, m, q: drive_response(p)? })
}

/// Right side of the closed covariance equation evaluated at `(q, ρ)`:
/// `-i(H ρ - ρ H†) + i(|q><F| - |F><q|) + Γ1 |1><1|`.
pub fn lyapunov_residual(p: &SystemParams, q: &Vec2, rho: &Mat2) -> Mat2 {
    let h = build_heff(p).h;
    let i = C64::i();
    let fv = Vec2::new(C64::from(0.0), C64::from(p.f));
    let mut out = (h * rho - rho * h.adjoint()) * (-i) + (q * fv.adjoint() - fv * q.adjoint()) * i;
    out[(0, 0)] += p.gamma1;
    out
}
