//! Spectral Galerkin simulation and analyticity diagnostics for the cubic
//! Szegő equation `i ∂ₜu = Π(|u|²u)` on the one-dimensional torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`hardy`] — the truncated Hardy-space series type and its norms.
//! * [`dynamics`] — the Galerkin system, RK4 integration and conservation monitoring.
//! * [`hankel`] — Hankel matrices, a dense complex SVD, trace norms and the
//!   trace-norm inequalities.
//! * [`gevrey`] — explicit constants, analyticity-radius lower bounds, the
//!   persistence check and the empirical radius estimator.
//! * [`experiments`] — presets, reproducible experiment runs and the ε-sweep.
//! * [`cli`] / [`verify`] — the command-line front end and its invariant suite.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod export;
pub mod gevrey;
pub mod hankel;
pub mod hardy;
pub mod numeric;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use hardy::{GevreyOrder, HardySeries, LaurentSlice};

pub use num_complex::Complex64;
