//! Lab-frame Liouvillian on the per-mode truncated Fock space.
//!
//! Basis index `n1 (Nc+1) + n2`; density matrices are column-stacked,
//! `vec(X)[r + d c] = X[r, c]`, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use ptdimer_core::SystemParams;

use crate::config::FockConfig;
use crate::csr::CsrMatrix;
use crate::error::{OracleError, Result};
use crate::C64;

/// Sparse matrix of the master-equation generator acting on `vec(ρ)`.
#[derive(Debug, Clone)]
pub struct SparseSuperoperator {
    pub matrix: CsrMatrix,
    /// Hilbert-space dimension `d`; the matrix is `d² x d²`.
    pub dim: usize,
}

impl SparseSuperoperator {
    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn apply(&self, rho_vec: &[C64]) -> Vec<C64> {
        self.matrix.matvec(rho_vec)
    }
}

/// Truncated annihilation operator on `0..=nc`.
pub fn annihilation(nc: usize) -> CsrMatrix {
    let t = (1..=nc).map(|n| (n - 1, n, C64::new((n as f64).sqrt(), 0.0))).collect();
    CsrMatrix::from_triplets(nc + 1, nc + 1, t)
}

/// `(a1, a2)` on the two-mode space.
pub fn mode_operators(nc: usize) -> (CsrMatrix, CsrMatrix) {
    let a = annihilation(nc);
    let id = CsrMatrix::identity(nc + 1);
    (a.kron(&id), id.kron(&a))
}

/// `H = Δ(a1†a1 + a2†a2) + J/2 (a2†a1 + a1†a2) + F (a2 + a2†)`.
pub fn hamiltonian(p: &SystemParams, nc: usize) -> CsrMatrix {
    let (a1, a2) = mode_operators(nc);
    let (a1d, a2d) = (a1.adjoint(), a2.adjoint());
    let r = |x: f64| C64::new(x, 0.0);
    a1d.mul(&a1)
        .add(&a2d.mul(&a2))
        .scale(r(p.delta))
        .add(&a2d.mul(&a1).add(&a1d.mul(&a2)).scale(r(0.5 * p.j)))
        .add(&a2.add(&a2d).scale(r(p.f)))
}

/// Rough peak memory of assembly plus a handful of work vectors.
pub fn liouvillian_bytes(cfg: &FockConfig) -> usize {
    let d2 = cfg.dim() * cfg.dim();
    d2.saturating_mul(24 * 16 * 2 + 16 * 12)
}

pub fn build_liouvillian(p: &SystemParams, cfg: &FockConfig) -> Result<SparseSuperoperator> {
    p.validate()?;
    let nc = cfg.cutoff;
    let lab = FockConfig { truncation: crate::config::Truncation::PerMode, ..*cfg };
    if liouvillian_bytes(&lab) > cfg.memory_budget {
        return Err(OracleError::CutoffTooSmall(format!(
            "lab-frame Liouvillian at cutoff {nc} needs ~{} MB, budget {} MB",
            liouvillian_bytes(&lab) >> 20,
            cfg.memory_budget >> 20
        )));
    }
    let d = (nc + 1) * (nc + 1);
    let id = CsrMatrix::identity(d);
    let h = hamiltonian(p, nc);
    let mi = C64::new(0.0, -1.0);
    // -i (I ⊗ H - Hᵀ ⊗ I)
    let mut l = id.kron(&h).add(&h.transpose().kron(&id).scale(C64::new(-1.0, 0.0))).scale(mi);
    let (a1, a2) = mode_operators(nc);
    for (c, rate) in [(a1.adjoint(), p.gamma1), (a2, p.gamma2)] {
        if rate == 0.0 {
            continue;
        }
        let cdc = c.adjoint().mul(&c);
        let half = C64::new(-0.5, 0.0);
        let d_op = c.conj().kron(&c).add(&id.kron(&cdc).scale(half)).add(&cdc.transpose().kron(&id).scale(half));
        l = l.add(&d_op.scale(C64::new(rate, 0.0)));
    }
    Ok(SparseSuperoperator { matrix: l, dim: d })
}
