//! Truncation settings.

/// How the Fock space is truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Lab frame, `n1, n2 <= cutoff` each.
    PerMode,
    /// Frame displaced by the mean field, `n1 + n2 <= cutoff`.
    TotalExcitation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub cutoff: usize,
    pub truncation: Truncation,
    /// Largest population allowed on the truncation boundary for an accepted state.
    pub tail_tol: f64,
    /// Memory budget in bytes for any single solve.
    pub memory_budget: usize,
    /// Budget for direct factorizations, in complex multiply-adds.
    pub work_budget: f64,
}

/// Default memory budget: 4 GiB.
pub const DEFAULT_BUDGET: usize = 4 << 30;

/// Default factorization budget, about a minute of single-core work.
pub const DEFAULT_WORK: f64 = 2e10;

impl FockConfig {
    pub fn lab(cutoff: usize) -> Self {
        Self { cutoff, truncation: Truncation::PerMode, tail_tol: 1e-3, memory_budget: DEFAULT_BUDGET, work_budget: DEFAULT_WORK }
    }

    pub fn displaced(cutoff: usize) -> Self {
        Self { cutoff, truncation: Truncation::TotalExcitation, tail_tol: 1e-6, memory_budget: DEFAULT_BUDGET, work_budget: DEFAULT_WORK }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        let n = self.cutoff + 1;
        match self.truncation {
            Truncation::PerMode => n * n,
            Truncation::TotalExcitation => n * (n + 1) / 2,
        }
    }

    pub fn with_cutoff(self, cutoff: usize) -> Self {
        Self { cutoff, ..self }
    }
}
