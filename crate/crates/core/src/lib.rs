//! Periodic dnoidal traveling waves of the cubic–quintic double dispersion
//! equation and their spectral stability.
//!
//! The pipeline runs bottom-up: [`wave`] builds the profile with period
//! `L` and speed `c`, [`hill`] solves the linear IVPs for the Hill
//! operator `𝓛₁`, and [`stability`] assembles the constraint matrices and
//! counts eigenvalues to reach a verdict. [`galerkin`] provides an
//! independent check of the `𝓛₁` spectrum.

// `!(x > y)` is used on purpose so that NaN fails every admissibility check
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod elliptic;
pub mod error;
pub mod galerkin;
pub mod hill;
pub mod linalg;
pub mod ode;
pub mod stability;
pub mod wave;

pub use elliptic::{EllipticModulus, JacobiFunctions};
pub use error::{Error, Result, Stage};
pub use galerkin::HillSpectrum;
pub use hill::{HillField, IvpSolution};
pub use linalg::{Inertia, SymMatrix};
pub use stability::{classify, threshold_c, StabilityReport, Threshold, Verdict};
pub use wave::{build_profile, solve_alpha4, ProfilePoint, RootData, WaveParams, WaveProfile};
