//! Quantum estimation and thermodynamics of two gravitationally coupled qubits.
//!
//! The system is a pair of two-level "cat" particles with energy splitting
//! `omega` and gravitational coupling `gamma`, held in a Gibbs state at
//! temperature `T` (units with k_B = hbar = 1 throughout). The crate computes:
//!
//! - the exact 4x4 Hamiltonian and its closed-form eigensystem ([`model`]),
//! - the thermal density matrix and its X-state scalar elements ([`thermal`]),
//! - analytic and finite-difference parameter derivatives of the state
//!   ([`calculus`]),
//! - the quantum Fisher information matrix and symmetric logarithmic
//!   derivative operators by three independent numerical routes ([`qfim`]),
//! - Cramér–Rao variance bounds for simultaneous and individual two-parameter
//!   estimation ([`estimation`]),
//! - state functions and the four-stroke quantum Stirling cycle ([`thermo`]).
//!
//! Every headline quantity is reachable by at least two independent
//! computational paths so results can be cross-validated numerically; the
//! test suites enforce the agreement.
//!
//! ```
//! use gravcat_core::{bounds_report, qfim_spectral, qfim_vectorized, ModelParams, ParamTag};
//!
//! let params = ModelParams::new(1.0, 1.5).unwrap();
//! let pair = (ParamTag::Gamma, ParamTag::Temperature);
//! let block = qfim_spectral(&params, 0.5, pair).unwrap();
//! let check = qfim_vectorized(&params, 0.5, pair).unwrap();
//! assert!((block.f11 - check.f11).abs() < 1e-9);
//!
//! let bounds = bounds_report(&block).unwrap();
//! assert!(bounds.var_sim_1 >= bounds.var_ind_1);
//! assert!(bounds.gamma_ratio >= 0.5);
//! ```
//!
//! The crate is `no_std` (all kernels are fixed-size and allocation-free);
//! the companion CLI crate carries IO and file formats.
#![cfg_attr(not(test), no_std)]

pub mod calculus;
pub mod error;
pub mod estimation;
pub mod linalg;
pub mod model;
pub mod qfim;
pub mod thermal;
pub mod thermo;

pub use calculus::{d_rho, d_rho_fd, d_rho_wrt_beta, ParamTag, RhoDerivative};
pub use error::{Error, Result};
pub use estimation::{
    bounds_report, gamma_ratio, individual_bounds, simultaneous_bounds, BoundsReport,
};
pub use model::{
    build_hamiltonian, coupling_from_geometry, eigensystem, EigenSystem, Hamiltonian4, ModelParams,
};
pub use qfim::{
    compatibility, qfim_integral, qfim_spectral, qfim_vectorized, sld, sld_closed_form,
    sld_spectral, unvec4, vec4, QfimBlock, QuadratureConfig, Route, SldOperator, SuperR,
};
pub use thermal::{
    gibbs_state, partition_function, x_state_elements, DensityMatrix, XStateElements,
};
pub use thermo::{carnot, stirling_cycle, thermo_state, CycleResult, Regime, ThermoState};
