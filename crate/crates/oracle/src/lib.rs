//! Brute-force reference for the driven gain/loss resonator dimer: the Lindblad
//! master equation on a truncated two-mode Fock space, plus the closed
//! first/second-moment equations integrated numerically.

pub mod banded;
pub mod config;
pub mod csr;
pub mod divergence;
pub mod dump;
pub mod error;
pub mod evolve;
pub mod gmres;
pub mod liouvillian;
pub mod moment_ode;
pub mod ode;
pub mod scan;
pub mod sector;
pub mod state;
pub mod steady;

pub use config::{FockConfig, Truncation, DEFAULT_BUDGET, DEFAULT_WORK};
pub use csr::CsrMatrix;
pub use divergence::DivergenceMonitor;
pub use dump::{read_dump, write_dump};
pub use error::{OracleError, Result};
pub use evolve::{evolve, evolve_observed, EvolveOptions};
pub use liouvillian::{build_liouvillian, SparseSuperoperator};
pub use moment_ode::{moment_ode_divergence, moment_ode_evolve};
pub use ode::{Dopri, OdeOptions};
pub use scan::cutoff_scan;
pub use sector::{coherent_first_moments, displaced_steady_state, mean_field};
pub use steady::{lab_steady_state, steady_state};
pub use state::{FockMoments, FockState, Representation};

pub use ptdimer_core::{Mat2, Vec2, C64};
