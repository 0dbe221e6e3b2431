//! Exact dynamics in the frame displaced by the mean field.
//!
//! With `a = β + b` and `β` the fixed point of the first-moment equations, all
//! linear terms of the generator cancel and what remains is invariant under
//! `b → e^{iφ} b`. Density-matrix elements `|M><N|` with `M - N = k` therefore
//! evolve independently for every `k`. The stationary state lives in `k = 0`;
//! first moments of any state live in `k = 1`. Truncation keeps total
//! excitation `n1 + n2 <= Nmax`.

use nalgebra::{linalg::Schur, DMatrix, Matrix2};
use ptdimer_core::SystemParams;

use crate::config::{FockConfig, Truncation};
use crate::error::{OracleError, Result};
use crate::gmres::gmres;
use crate::ode::{Dopri, OdeOptions};
use crate::state::{FockState, Representation};
use crate::{Vec2, C64};

/// Drift matrix `G` of `d<a>/dt = G <a> + s`, read off the Heisenberg equations:
/// `[a1, H] = Δ a1 + J/2 a2`, gain adds `+Γ1/2`, loss `-Γ2/2`, and `s = (0, -iF)`.
pub fn drift(p: &SystemParams) -> (Matrix2<C64>, Vec2) {
    let mi = C64::new(0.0, -1.0);
    let g = Matrix2::new(
        mi * p.delta + 0.5 * p.gamma1,
        mi * (0.5 * p.j),
        mi * (0.5 * p.j),
        mi * p.delta - 0.5 * p.gamma2,
    );
    (g, Vec2::new(C64::new(0.0, 0.0), mi * p.f))
}

/// Fixed point `β = -G⁻¹ s` of the first-moment equations.
pub fn mean_field(p: &SystemParams) -> Result<Vec2> {
    let (g, s) = drift(p);
    let inv = g
        .try_inverse()
        .ok_or_else(|| OracleError::NotConverged("first-moment drift is singular".into()))?;
    Ok(-(inv * s))
}

/// Largest real part of the drift eigenvalues; negative iff first moments decay.
pub fn drift_abscissa(p: &SystemParams) -> f64 {
    let (g, _) = drift(p);
    let tr = g[(0, 0)] + g[(1, 1)];
    let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
    let root = (tr * tr - 4.0 * det).sqrt();
    ((tr + root) * 0.5).re.max(((tr - root) * 0.5).re)
}

/// Generator restricted to one coherence sector `k`; blocks `|N+k><N|` for
/// `N = 0..=Nmax-k`, each `(N+k+1) x (N+1)`, stored row-major back to back.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    p: SystemParams,
    pub nmax: usize,
    pub k: usize,
    offsets: Vec<usize>,
    hop: Vec<Vec<f64>>,
    damp: Vec<Vec<f64>>,
}

impl SectorOperator {
    pub fn new(p: &SystemParams, nmax: usize, k: usize) -> Self {
        assert!(k <= nmax);
        let mut offsets = vec![0];
        for n in 0..=nmax - k {
            offsets.push(offsets[n] + (n + k + 1) * (n + 1));
        }
        let hop = (0..=nmax)
            .map(|m| (0..m).map(|i| 0.5 * p.j * (((i + 1) * (m - i)) as f64).sqrt()).collect())
            .collect();
        let damp = (0..=nmax)
            .map(|m| {
                let up = if m < nmax { 1.0 } else { 0.0 };
                (0..=m).map(|i| 0.5 * p.gamma1 * (i + 1) as f64 * up + 0.5 * p.gamma2 * (m - i) as f64).collect()
            })
            .collect();
        Self { p: *p, nmax, k, offsets, hop, damp }
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn offset(&self, n: usize) -> usize {
        self.offsets[n]
    }

    /// Shape `(rows, cols)` of block `n`.
    pub fn shape(&self, n: usize) -> (usize, usize) {
        (n + self.k + 1, n + 1)
    }

    /// `out = L x`.
    pub fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        let i_ = C64::new(0.0, 1.0);
        let (g1, g2) = (self.p.gamma1, self.p.gamma2);
        let shift = -i_ * self.p.delta * self.k as f64;
        for n in 0..self.blocks() {
            let m = n + self.k;
            let (rows, cols) = self.shape(n);
            let o = self.offsets[n];
            let xb = &x[o..o + rows * cols];
            let (hm, hn) = (&self.hop[m], &self.hop[n]);
            let (dm, dn) = (&self.damp[m], &self.damp[n]);
            for i in 0..rows {
                for j in 0..cols {
                    let xij = xb[i * cols + j];
                    let mut acc = xij * (shift - dm[i] - dn[j]);
                    let mut hsum = C64::new(0.0, 0.0);
                    if i > 0 {
                        hsum -= xb[(i - 1) * cols + j] * hm[i - 1];
                    }
                    if i + 1 < rows {
                        hsum -= xb[(i + 1) * cols + j] * hm[i];
                    }
                    if j > 0 {
                        hsum += xb[i * cols + j - 1] * hn[j - 1];
                    }
                    if j + 1 < cols {
                        hsum += xb[i * cols + j + 1] * hn[j];
                    }
                    acc += i_ * hsum;
                    if n >= 1 && i >= 1 && j >= 1 {
                        // b1† X b1 from block n-1.
                        let (po, pc) = (self.offsets[n - 1], cols - 1);
                        acc += x[po + (i - 1) * pc + (j - 1)] * (g1 * ((i * j) as f64).sqrt());
                    }
                    if n + 1 < self.blocks() {
                        // b2 X b2† from block n+1.
                        let (no, nc) = (self.offsets[n + 1], cols + 1);
                        acc += x[no + i * nc + j] * (g2 * (((m + 1 - i) * (n + 1 - j)) as f64).sqrt());
                    }
                    out[o + i * cols + j] = acc;
                }
            }
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        self.apply_into(x, &mut out);
        out
    }
}

/// Complex matrix held as separate real and imaginary parts, so products run
/// on the real matrix kernel.
#[derive(Clone)]
struct Split {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl Split {
    fn new(m: &DMatrix<C64>) -> Self {
        Self { re: m.map(|z| z.re), im: m.map(|z| z.im) }
    }

    fn adjoint(&self) -> Self {
        Self { re: self.re.transpose(), im: -self.im.transpose() }
    }

    /// Three-multiplication complex product.
    fn mul(&self, b: &Split) -> Split {
        let t1 = &self.re * &b.re;
        let t2 = &self.im * &b.im;
        let t3 = (&self.re + &self.im) * (&b.re + &b.im);
        Split { re: &t1 - &t2, im: t3 - t1 - t2 }
    }

    fn join(&self) -> DMatrix<C64> {
        self.re.zip_map(&self.im, C64::new)
    }
}

/// Per-level Schur factors of `A_N` for the Sylvester preconditioner.
struct Level {
    q: Split,
    qh: Split,
    /// Transposed triangular factor (`t_tr[(l, i)] = T[i, l]`), for contiguous access.
    t_tr: DMatrix<C64>,
}

impl Level {
    fn new(a: DMatrix<C64>) -> Self {
        let (q, t) = Schur::new(a).unpack();
        let q = Split::new(&q);
        Self { qh: q.adjoint(), q, t_tr: t.transpose() }
    }

    /// Solve `A Y + Y A† = C`.
    fn sylvester(&self, c: &DMatrix<C64>) -> DMatrix<C64> {
        let ct = self.qh.mul(&Split::new(c)).mul(&self.q).join();
        let z = triangular_sylvester(&self.t_tr, &ct);
        self.q.mul(&Split::new(&z)).mul(&self.qh).join()
    }
}

fn level_matrix(op: &SectorOperator, n: usize) -> DMatrix<C64> {
    let mi = C64::new(0.0, -1.0);
    DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r == c {
            C64::new(-op.damp[n][r], 0.0)
        } else if r + 1 == c {
            mi * op.hop[n][r]
        } else if c + 1 == r {
            mi * op.hop[n][c]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Solve `T Y + Y T† = C` for upper-triangular `T` given as its transpose,
/// column by column from the right.
fn triangular_sylvester(t_tr: &DMatrix<C64>, c: &DMatrix<C64>) -> DMatrix<C64> {
    let n = t_tr.nrows();
    let mut y = DMatrix::<C64>::zeros(n, n);
    for j in (0..n).rev() {
        let mut rhs: Vec<C64> = (0..n).map(|i| c[(i, j)]).collect();
        for k in j + 1..n {
            let w = t_tr[(k, j)].conj();
            for (i, r) in rhs.iter_mut().enumerate() {
                *r -= y[(i, k)] * w;
            }
        }
        let shift = t_tr[(j, j)].conj();
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for l in i + 1..n {
                acc -= t_tr[(l, i)] * y[(l, j)];
            }
            y[(i, j)] = acc / (t_tr[(i, i)] + shift);
        }
    }
    y
}

/// Bytes used by the stationary sector solve.
pub fn sector_bytes(nmax: usize, restart: usize) -> usize {
    let len: usize = (0..=nmax).map(|n| (n + 1) * (n + 1)).sum();
    len.saturating_mul(16 * (restart + 12)) + (0..=nmax).map(|n| 2 * (n + 1) * (n + 1) * 16).sum::<usize>()
}

const RESTART: usize = 60;

/// Stationary state in the displaced frame, truncated at `n1 + n2 <= cfg.cutoff`.
///
/// The vacuum element is pinned to one (its equation is redundant by trace
/// preservation) and the rest is solved by GMRES, preconditioned with a
/// symmetric block Gauss-Seidel sweep over excitation levels whose diagonal
/// blocks are Sylvester equations solved in a Schur basis. The result is
/// rescaled to unit trace.
pub fn displaced_steady_state(p: &SystemParams, cfg: &FockConfig) -> Result<FockState> {
    displaced_steady_state_from(p, cfg, None)
}

/// As [`displaced_steady_state`], warm-started from a solution at a smaller cutoff.
pub fn displaced_steady_state_from(p: &SystemParams, cfg: &FockConfig, warm: Option<&FockState>) -> Result<FockState> {
    p.validate()?;
    if cfg.truncation != Truncation::TotalExcitation {
        return Err(OracleError::Format("displaced steady state needs total-excitation truncation".into()));
    }
    if drift_abscissa(p) >= 0.0 {
        return Err(OracleError::Unstable);
    }
    let nmax = cfg.cutoff;
    if sector_bytes(nmax, RESTART) > cfg.memory_budget {
        return Err(OracleError::CutoffTooSmall(format!("sector solve at cutoff {nmax} exceeds the memory budget")));
    }
    let beta = mean_field(p)?;
    let op = SectorOperator::new(p, nmax, 0);
    let levels: Vec<Level> = (0..=nmax).map(|n| Level::new(level_matrix(&op, n))).collect();
    let n_all = op.len();
    let zero = C64::new(0.0, 0.0);
    // Unknowns are all blocks except the pinned 1x1 vacuum block.
    let embed = |y: &[C64], pin: C64| {
        let mut x = Vec::with_capacity(n_all);
        x.push(pin);
        x.extend_from_slice(y);
        x
    };
    let apply = |y: &[C64]| op.apply(&embed(y, zero))[1..].to_vec();
    let rhs: Vec<C64> = op.apply(&embed(&vec![zero; n_all - 1], C64::new(1.0, 0.0)))[1..].iter().map(|z| -z).collect();
    let (g1, g2) = (p.gamma1, p.gamma2);
    let precond = |c: &[C64]| {
        // Forward sweep: level n sees the gain from level n-1.
        let mut ys: Vec<DMatrix<C64>> = vec![DMatrix::zeros(1, 1)];
        for n in 1..=nmax {
            let s = n + 1;
            let o = op.offset(n) - 1;
            let prev = &ys[n - 1];
            let cm = DMatrix::from_fn(s, s, |i, j| {
                let gain = if i >= 1 && j >= 1 { prev[(i - 1, j - 1)] * (g1 * ((i * j) as f64).sqrt()) } else { zero };
                c[o + i * s + j] - gain
            });
            ys.push(levels[n].sylvester(&cm));
        }
        // Backward sweep: level n sees the loss from level n+1.
        for n in (1..nmax).rev() {
            let s = n + 1;
            let next = &ys[n + 1];
            let lm = DMatrix::from_fn(s, s, |i, j| next[(i, j)] * (g2 * (((n + 1 - i) * (n + 1 - j)) as f64).sqrt()));
            let corr = levels[n].sylvester(&lm);
            ys[n] -= corr;
        }
        let mut out = Vec::with_capacity(n_all - 1);
        for y in &ys[1..] {
            out.extend(y.transpose().iter().copied());
        }
        out
    };
    let x0 = warm.and_then(|w| match &w.repr {
        Representation::Sectors { blocks, .. } if blocks[0][(0, 0)].norm() > 0.0 => {
            let pin = blocks[0][(0, 0)];
            let mut x = Vec::with_capacity(n_all - 1);
            for n in 1..=nmax {
                match blocks.get(n) {
                    Some(b) => x.extend(b.transpose().iter().map(|z| z / pin)),
                    None => x.extend(std::iter::repeat(zero).take((n + 1) * (n + 1))),
                }
            }
            Some(x)
        }
        _ => None,
    });
    let (y, _) = gmres(apply, precond, &rhs, x0, 1e-13, RESTART, 40 * (nmax + 10))?;
    let x = embed(&y, C64::new(1.0, 0.0));
    let mut blocks: Vec<DMatrix<C64>> = (0..=nmax)
        .map(|n| {
            let o = op.offset(n);
            DMatrix::from_fn(n + 1, n + 1, |i, j| x[o + i * (n + 1) + j])
        })
        .collect();
    let tr: f64 = blocks.iter().map(|b| b.trace().re).sum();
    for b in blocks.iter_mut() {
        *b /= C64::new(tr, 0.0);
    }
    Ok(FockState { cfg: *cfg, repr: Representation::Sectors { beta, blocks } })
}

/// Amplitudes `<n1, n2 | γ>` of a coherent state, ordered like sector blocks.
fn coherent_amplitude(gamma: &Vec2, nmax: usize) -> Vec<Vec<C64>> {
    let norm = (-0.5 * gamma.norm_squared()).exp();
    let mut u1 = vec![C64::new(1.0, 0.0)];
    let mut u2 = vec![C64::new(1.0, 0.0)];
    for n in 1..=nmax {
        let s = (n as f64).sqrt();
        let (a, b) = (u1[n - 1] * gamma[0] / s, u2[n - 1] * gamma[1] / s);
        u1.push(a);
        u2.push(b);
    }
    (0..=nmax).map(|n| (0..=n).map(|i| u1[i] * u2[n - i] * norm).collect()).collect()
}

/// First moments `<a(t)>` of the exact truncated dynamics started from the
/// coherent state `|a0>`, at each of `times` (ascending, from `t = 0`).
pub fn coherent_first_moments(p: &SystemParams, a0: &Vec2, times: &[f64], cfg: &FockConfig, opts: OdeOptions) -> Result<Vec<Vec2>> {
    p.validate()?;
    let nmax = cfg.cutoff;
    let beta = mean_field(p)?;
    let gamma = a0 - beta;
    let amp = coherent_amplitude(&gamma, nmax);
    let trace: f64 = amp.iter().flatten().map(|z| z.norm_sqr()).sum();
    let op = SectorOperator::new(p, nmax, 1);
    let mut x = vec![C64::new(0.0, 0.0); op.len()];
    for n in 0..op.blocks() {
        let (rows, cols) = op.shape(n);
        let o = op.offset(n);
        for i in 0..rows {
            for j in 0..cols {
                x[o + i * cols + j] = amp[n + 1][i] * amp[n][j].conj();
            }
        }
    }
    let first_moment = |x: &[C64]| {
        let mut b = Vec2::zeros();
        for n in 0..op.blocks() {
            let (_, cols) = op.shape(n);
            let o = op.offset(n);
            for i in 0..=n + 1 {
                if i >= 1 {
                    b[0] += x[o + i * cols + (i - 1)] * (i as f64).sqrt();
                }
                if i <= n {
                    b[1] += x[o + i * cols + i] * ((n + 1 - i) as f64).sqrt();
                }
            }
        }
        beta + b / C64::new(trace, 0.0)
    };
    let mut ode = Dopri::new(|_, y: &[C64], dy: &mut [C64]| op.apply_into(y, dy), 0.0, x, opts);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        ode.advance_to(t)?;
        out.push(first_moment(&ode.y));
    }
    Ok(out)
}
