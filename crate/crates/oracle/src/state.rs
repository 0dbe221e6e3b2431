//! Truncated density matrices and their moments.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::config::{FockConfig, Truncation};
use crate::liouvillian::mode_operators;
use crate::{Mat2, Vec2, C64};

/// Storage of the reduced density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// Lab frame, basis index `n1 (Nc+1) + n2`.
    Dense(DMatrix<C64>),
    /// Displaced frame, U(1)-invariant state: one block per total excitation
    /// `N`, indexed by `n1 = 0..=N`.
    Sectors { beta: Vec2, blocks: Vec<DMatrix<C64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub cfg: FockConfig,
    pub repr: Representation,
}

/// Moments of a Fock state, in the lab frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockMoments {
    pub mean_a: Vec2,
    /// `rho[n][n'] = <a_n'† a_n>`.
    pub rho: Mat2,
    pub intensity: [f64; 2],
    pub dispersion: [f64; 2],
}

fn sector_index(n: usize, i: usize) -> usize {
    n * (n + 1) / 2 + i
}

impl FockState {
    /// Lab-frame vacuum projector.
    pub fn vacuum(cfg: FockConfig) -> Self {
        let d = FockConfig { truncation: Truncation::PerMode, ..cfg }.dim();
        let mut m = DMatrix::zeros(d, d);
        m[(0, 0)] = C64::new(1.0, 0.0);
        Self { cfg: FockConfig { truncation: Truncation::PerMode, ..cfg }, repr: Representation::Dense(m) }
    }

    /// Lab-frame coherent state `|α1, α2>` projected on the truncated space.
    pub fn coherent(cfg: FockConfig, alpha: &Vec2) -> Self {
        let nc = cfg.cutoff;
        let amp = |a: C64| {
            let mut v = vec![C64::new((-0.5 * a.norm_sqr()).exp(), 0.0)];
            for n in 1..=nc {
                let prev = v[n - 1];
                v.push(prev * a / (n as f64).sqrt());
            }
            v
        };
        let (u1, u2) = (amp(alpha[0]), amp(alpha[1]));
        let psi: Vec<C64> = u1.iter().flat_map(|x| u2.iter().map(move |y| x * y)).collect();
        let d = psi.len();
        let m = DMatrix::from_fn(d, d, |r, c| psi[r] * psi[c].conj());
        Self { cfg: FockConfig { truncation: Truncation::PerMode, ..cfg }, repr: Representation::Dense(m) }
    }

    pub fn from_dense(cfg: FockConfig, rho: DMatrix<C64>) -> Self {
        Self { cfg: FockConfig { truncation: Truncation::PerMode, ..cfg }, repr: Representation::Dense(rho) }
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Representation::Dense(m) => m.trace().re,
            Representation::Sectors { blocks, .. } => blocks.iter().map(|b| b.trace().re).sum(),
        }
    }

    /// Dense matrix in the state's own basis (for sectors: ordered by `N`, then `n1`).
    pub fn rho_full(&self) -> DMatrix<C64> {
        match &self.repr {
            Representation::Dense(m) => m.clone(),
            Representation::Sectors { blocks, .. } => {
                let d = self.cfg.dim();
                let mut m = DMatrix::zeros(d, d);
                for (n, b) in blocks.iter().enumerate() {
                    for i in 0..=n {
                        for j in 0..=n {
                            m[(sector_index(n, i), sector_index(n, j))] = b[(i, j)];
                        }
                    }
                }
                m
            }
        }
    }

    fn blocks_or_dense(&self) -> Vec<&DMatrix<C64>> {
        match &self.repr {
            Representation::Dense(m) => vec![m],
            Representation::Sectors { blocks, .. } => blocks.iter().collect(),
        }
    }

    /// `max |ρ - ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.blocks_or_dense()
            .into_iter()
            .map(|b| (b - b.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks_or_dense()
            .into_iter()
            .map(|b| {
                let h = (b + b.adjoint()) * C64::new(0.5, 0.0);
                SymmetricEigen::new(h).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Population on the truncation boundary.
    pub fn tail_population(&self) -> f64 {
        let nc = self.cfg.cutoff;
        match &self.repr {
            Representation::Dense(m) => (0..m.nrows())
                .filter(|&k| k / (nc + 1) == nc || k % (nc + 1) == nc)
                .map(|k| m[(k, k)].re)
                .sum(),
            Representation::Sectors { blocks, .. } => blocks.last().map_or(0.0, |b| b.trace().re),
        }
    }

    /// Lab-frame moments, normalized by the trace.
    pub fn moments(&self) -> FockMoments {
        match &self.repr {
            Representation::Dense(m) => dense_moments(m, self.cfg.cutoff),
            Representation::Sectors { beta, blocks } => sector_moments(beta, blocks),
        }
    }
}

/// `tr(O ρ)` for a sparse operator.
fn expect(op: &crate::csr::CsrMatrix, rho: &DMatrix<C64>) -> C64 {
    op.triplets().map(|(r, c, v)| v * rho[(c, r)]).sum()
}

fn dense_moments(m: &DMatrix<C64>, nc: usize) -> FockMoments {
    let tr = m.trace().re;
    let (a1, a2) = mode_operators(nc);
    let ops = [a1, a2];
    let mean_a = Vec2::new(expect(&ops[0], m) / tr, expect(&ops[1], m) / tr);
    let mut rho = Mat2::zeros();
    for n in 0..2 {
        for k in 0..2 {
            rho[(n, k)] = expect(&ops[k].adjoint().mul(&ops[n]), m) / tr;
        }
    }
    let (mut s1, mut s2) = ([0.0; 2], [0.0; 2]);
    for idx in 0..m.nrows() {
        let p = m[(idx, idx)].re / tr;
        let n = [(idx / (nc + 1)) as f64, (idx % (nc + 1)) as f64];
        for k in 0..2 {
            s1[k] += n[k] * p;
            s2[k] += n[k] * n[k] * p;
        }
    }
    FockMoments { mean_a, rho, intensity: s1, dispersion: [s2[0] - s1[0] * s1[0], s2[1] - s1[1] * s1[1]] }
}

fn sector_moments(beta: &Vec2, blocks: &[DMatrix<C64>]) -> FockMoments {
    let tr: f64 = blocks.iter().map(|b| b.trace().re).sum();
    let (mut s1, mut s2) = ([0.0; 2], [0.0; 2]);
    let mut c21 = C64::new(0.0, 0.0);
    for (n, b) in blocks.iter().enumerate() {
        for i in 0..=n {
            let p = b[(i, i)].re / tr;
            let occ = [i as f64, (n - i) as f64];
            for k in 0..2 {
                s1[k] += occ[k] * p;
                s2[k] += occ[k] * occ[k] * p;
            }
            if i >= 1 {
                // <b2† b1>: b2† b1 |i, N-i> = √i √(N-i+1) |i-1, N-i+1>.
                c21 += b[(i, i - 1)] * ((i * (n - i + 1)) as f64).sqrt() / tr;
            }
        }
    }
    let var = [s2[0] - s1[0] * s1[0], s2[1] - s1[1] * s1[1]];
    let mut rho_b = Mat2::zeros();
    rho_b[(0, 0)] = C64::new(s1[0], 0.0);
    rho_b[(1, 1)] = C64::new(s1[1], 0.0);
    rho_b[(0, 1)] = c21;
    rho_b[(1, 0)] = c21.conj();
    let rho = beta * beta.adjoint() + rho_b;
    let b2 = [beta[0].norm_sqr(), beta[1].norm_sqr()];
    // The U(1)-invariant displaced state has no odd or anomalous moments, so
    // Var(n_a) = Var(n_b) + |β|² (<b b†> + <b† b>) with <b b†> = <b† b> + 1.
    FockMoments {
        mean_a: *beta,
        rho,
        intensity: [b2[0] + s1[0], b2[1] + s1[1]],
        dispersion: [0, 1].map(|k| var[k] + b2[k] * (2.0 * s1[k] + 1.0)),
    }
}
