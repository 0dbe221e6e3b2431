//! Effective non-Hermitian Hamiltonian, its spectrum and the phase diagram.

use crate::params::SystemParams;
use crate::transient::EP_TOL;
use crate::{Mat2, Vec2, C64};

/// `h = [[e1, J/2], [J/2, e2]]` with `e1 = Δ + iΓ1/2`, `e2 = Δ - iΓ2/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    pub h: Mat2,
    pub e1: C64,
    pub e2: C64,
}

pub fn build_heff(p: &SystemParams) -> EffectiveHamiltonian {
    let e1 = C64::new(p.delta, 0.5 * p.gamma1);
    let e2 = C64::new(p.delta, -0.5 * p.gamma2);
    let c = C64::new(0.5 * p.j, 0.0);
    EffectiveHamiltonian { h: Mat2::new(e1, c, c, e2), e1, e2 }
}

/// Eigen-data of `H_eff`. When `defective`, both eigenvalues are the same
/// number and only one eigenvector exists.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: [C64; 2],
    pub defective: bool,
    pub eigenvectors: Vec<Vec2>,
}

/// Real discriminant `J²/4 - (Γ1+Γ2)²/16`, factored to avoid cancellation.
pub fn discriminant(p: &SystemParams) -> f64 {
    let s = p.gamma1 + p.gamma2;
    (2.0 * p.j - s) * (2.0 * p.j + s) / 16.0
}

/// Unit norm, first nonzero component real positive.
pub(crate) fn normalize_phase(v: Vec2) -> Vec2 {
    let n = v.norm();
    let lead = if v[0].norm() > 1e-300 { v[0] } else { v[1] };
    let phase = lead / lead.norm();
    v.map(|z| z / (phase * n))
}

pub fn heff_spectrum(p: &SystemParams) -> Spectrum {
    let centre = C64::new(p.delta, 0.25 * (p.gamma1 - p.gamma2));
    let d = discriminant(p);
    let e1 = C64::new(p.delta, 0.5 * p.gamma1);
    // (H - λ) v = 0 with the first row gives v ∝ (J/2, λ - e1), never zero for J > 0.
    let vec_for = |lam: C64| normalize_phase(Vec2::new(C64::new(0.5 * p.j, 0.0), lam - e1));
    if d.abs() <= EP_TOL * p.j * p.j {
        return Spectrum { eigenvalues: [centre, centre], defective: true, eigenvectors: vec![vec_for(centre)] };
    }
    let root = if d > 0.0 { C64::new(d.sqrt(), 0.0) } else { C64::new(0.0, (-d).sqrt()) };
    let (lp, lm) = (centre + root, centre - root);
    Spectrum { eigenvalues: [lp, lm], defective: false, eigenvectors: vec![vec_for(lp), vec_for(lm)] }
}

/// Position of a parameter point in the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub stable: bool,
    pub on_ep_line: bool,
    pub pt_symmetric: bool,
    /// `min(|Γ2-Γ1|, |J²-Γ1Γ2|) / J²`.
    pub boundary_distance: f64,
}

pub fn classify_regime(p: &SystemParams, tol: f64) -> RegimeReport {
    let j2 = p.j * p.j;
    let stable = p.gamma2 > p.gamma1 && j2 > p.gamma1 * p.gamma2;
    RegimeReport {
        stable,
        on_ep_line: (p.gamma1 + p.gamma2 - 2.0 * p.j).abs() <= tol * p.j,
        pt_symmetric: (p.gamma1 - p.gamma2).abs() <= tol * p.j,
        boundary_distance: (p.gamma2 - p.gamma1).abs().min((j2 - p.gamma1 * p.gamma2).abs()) / j2,
    }
}
