#![allow(dead_code)]

use nalgebra::DMatrix;
use ptdimer_core::{SystemParams, Vec2, C64};
use ptdimer_oracle::{FockState, Representation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p_star() -> SystemParams {
    SystemParams::new(0.0, 1.0, 0.3, 0.4, 1.6).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn crel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

pub fn random_hermitian(r: &mut ChaCha8Rng, d: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(d, d, |_, _| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Single-mode `<n| e^{x b†} e^{y b} |m>` on `0..=nmax`.
fn normal_exp(x: C64, y: C64, nmax: usize) -> DMatrix<C64> {
    let fact: Vec<f64> = (0..=nmax).scan(1.0, |f, k| {
        let v = *f;
        *f *= (k + 1) as f64;
        Some(v)
    }).collect();
    DMatrix::from_fn(nmax + 1, nmax + 1, |n, m| {
        (0..=n.min(m))
            .map(|k| {
                let up = x.powu((n - k) as u32) / fact[n - k] * (fact[n] / fact[k]).sqrt();
                let down = y.powu((m - k) as u32) / fact[m - k] * (fact[m] / fact[k]).sqrt();
                up * down
            })
            .sum()
    })
}

/// `tr(ρ e^{-α*·a} e^{α·a†})` of a displaced-frame state, written in normal
/// order so that only matrix elements inside the truncation enter.
pub fn antinormal_chi(state: &FockState, alpha: &Vec2) -> C64 {
    let Representation::Sectors { beta, blocks } = &state.repr else { panic!("sector state expected") };
    let nmax = blocks.len() - 1;
    let e: Vec<DMatrix<C64>> = (0..2).map(|k| normal_exp(alpha[k], -alpha[k].conj(), nmax)).collect();
    let mut acc = C64::new(0.0, 0.0);
    // The state is block diagonal in N; tr(ρ O) = Σ ρ[i, j] O[j, i], and O
    // factorizes over the modes.
    for (n, b) in blocks.iter().enumerate() {
        for i in 0..=n {
            for j in 0..=n {
                acc += b[(i, j)] * e[0][(j, i)] * e[1][(n - j, n - i)];
            }
        }
    }
    let shift: C64 = (0..2).map(|k| -alpha[k].conj() * beta[k] + alpha[k] * beta[k].conj() - alpha[k].norm_sqr()).sum();
    acc * shift.exp() / C64::new(state.trace(), 0.0)
}
