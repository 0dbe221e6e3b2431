//! Husimi density of the stationary Gaussian.
//!
//! With `A = -M`, the Fourier transform of `χ` over `d²α1 d²α2 / π⁴` is
//! `Q(a) = exp(-(a-q)† A⁻¹ (a-q)) / (π² det A)`, normalized over `d²a1 d²a2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::stationary::StationaryGaussian;
use crate::Vec2;

pub fn husimi_density(g: &StationaryGaussian, a: &Vec2) -> Result<f64> {
    let am = -g.m;
    let tr = am[(0, 0)].re + am[(1, 1)].re;
    let det = (am[(0, 0)] * am[(1, 1)] - am[(0, 1)] * am[(1, 0)]).re;
    if !(det > 1e-12 * tr * tr && tr > 0.0) {
        return Err(Error::SingularParameters("-M is not positive definite".into()));
    }
    let inv = am.try_inverse().ok_or_else(|| Error::SingularParameters("-M is singular".into()))?;
    let d = a - g.q;
    let quad = d.dotc(&(inv * d)).re;
    Ok((-quad).exp() / (PI * PI * det))
}
