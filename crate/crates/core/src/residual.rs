//! Finite-difference residual of the characteristic-function evolution equation
//!
//! `∂χ/∂t = -i(<α|H ∂*χ> - <∂χ|H†|α>) + iF(α2 + α2*)χ - Γ2 α2* α2 χ`,
//!
//! where `∂*` and `∂` differentiate with respect to `α*` and `α`.

use crate::heff::build_heff;
use crate::params::SystemParams;
use crate::{Vec2, C64};

/// Default finite-difference step in units of `1/J`.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Absolute residual at `(t, α)` of a black-box `χ(t, α)`. All derivatives are
/// central differences; α-derivatives are Wirtinger combinations of the real
/// and imaginary directions of each component.
pub fn chi_pde_residual<F>(p: &SystemParams, chi: F, t: f64, alpha: &Vec2, h: f64) -> f64
where
    F: Fn(f64, &Vec2) -> C64,
{
    let hm = build_heff(p).h;
    let i = C64::i();
    let c = chi(t, alpha);
    let dt = (chi(t + h, alpha) - chi(t - h, alpha)) / (2.0 * h);
    let mut d = [C64::from(0.0); 2];
    let mut ds = [C64::from(0.0); 2];
    for k in 0..2 {
        let shifted = |z: C64| {
            let mut a = *alpha;
            a[k] += z;
            chi(t, &a)
        };
        let dx = (shifted(C64::from(h)) - shifted(C64::from(-h))) / (2.0 * h);
        let dy = (shifted(C64::new(0.0, h)) - shifted(C64::new(0.0, -h))) / (2.0 * h);
        d[k] = 0.5 * (dx - i * dy);
        ds[k] = 0.5 * (dx + i * dy);
    }
    let dsv = Vec2::new(ds[0], ds[1]);
    let dv = Vec2::new(d[0], d[1]);
    // <α|H|∂*χ> = Σ αi* Hij ∂χ/∂αj*; <∂χ|H†|α> = Σ ∂χ/∂αi (H†)ij αj.
    let t1 = alpha.dotc(&(hm * dsv));
    let t2 = dv.transpose() * (hm.adjoint() * alpha);
    let a2 = alpha[1];
    let rhs = -i * (t1 - t2[(0, 0)]) + i * p.f * (a2 + a2.conj()) * c - p.gamma2 * a2.norm_sqr() * c;
    (dt - rhs).norm()
}
