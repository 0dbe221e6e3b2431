//! Closed-form quantum-noise solution of two coupled, coherently driven
//! bosonic resonators, one with incoherent gain and one with radiative loss.
//!
//! Everything is expressed in the frame rotating with the drive; rates are in
//! the same units as the tunneling amplitude `J`.

pub mod error;
pub mod heff;
pub mod husimi;
pub mod jet;
pub mod moments;
pub mod params;
pub mod residual;
pub mod stationary;
pub mod transient;

pub use error::{Error, Result};
pub use heff::{build_heff, classify_regime, heff_spectrum, EffectiveHamiltonian, RegimeReport, Spectrum};
pub use husimi::husimi_density;
pub use jet::Jet4;
pub use moments::{
    antinormal_moment, chi_stationary, observables, snr_limit_checks, MomentTable, ObservableSet,
    SnrPoint, DEFAULT_MAX_ORDER,
};
pub use params::SystemParams;
pub use residual::{chi_pde_residual, DEFAULT_FD_STEP};
pub use stationary::{drive_response, lyapunov_residual, stationary_gaussian, StationaryGaussian, DEFAULT_TOL};
pub use transient::{
    ep_mode_data, fit_constants, order_parameter_ep, order_parameter_general, transient_chi,
    EnsemblePoint, EpModeData, TransientEnsemble, EP_TOL,
};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
/// Complex 2-vector (one entry per resonator).
pub type Vec2 = nalgebra::Vector2<C64>;
/// Complex 2x2 matrix.
pub type Mat2 = nalgebra::Matrix2<C64>;
