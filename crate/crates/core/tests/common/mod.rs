#![allow(dead_code)]

use ptdimer_core::{classify_regime, SystemParams, Vec2, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p_star() -> SystemParams {
    SystemParams::new(0.0, 1.0, 0.3, 0.4, 1.6).unwrap()
}

/// Stable point with `J = 1` and boundary distance at least `min_dist`.
pub fn stable_draw(r: &mut ChaCha8Rng, min_dist: f64) -> SystemParams {
    loop {
        let p = SystemParams::new(
            r.gen_range(-1.0..1.0),
            1.0,
            r.gen_range(0.0..0.5),
            r.gen_range(0.0..1.0),
            r.gen_range(0.0..2.0),
        )
        .unwrap();
        let reg = classify_regime(&p, 1e-9);
        if reg.stable && reg.boundary_distance >= min_dist {
            return p;
        }
    }
}

/// Unstable point with `J = 1` away from the boundary.
pub fn unstable_draw(r: &mut ChaCha8Rng) -> SystemParams {
    loop {
        let p = SystemParams::new(r.gen_range(-1.0..1.0), 1.0, r.gen_range(0.0..0.5), r.gen_range(0.0..2.5), r.gen_range(0.0..2.5))
            .unwrap();
        let reg = classify_regime(&p, 1e-9);
        if !reg.stable && reg.boundary_distance >= 0.1 {
            return p;
        }
    }
}

/// EP point `Γ1 + Γ2 = 2J` inside the stability domain.
pub fn ep_draw(r: &mut ChaCha8Rng) -> SystemParams {
    let g1 = r.gen_range(0.0..0.9);
    SystemParams::new(r.gen_range(-1.0..1.0), 1.0, r.gen_range(0.0..0.5), g1, 2.0 - g1).unwrap()
}

pub fn cvec(r: &mut ChaCha8Rng, scale: f64) -> Vec2 {
    Vec2::new(
        C64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale)),
        C64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale)),
    )
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

pub fn cclose(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}
