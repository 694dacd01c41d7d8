//! Numerical probes for the regularity of phase-lag thermoelastic plate
//! semigroups.
//!
//! Two first-order systems are discretized and interrogated:
//!
//! * a fully thermoelastic Euler-Bernoulli plate with hinged boundary
//!   conditions, block-diagonalized over the sine eigenbasis of the
//!   Dirichlet Laplacian ([`modal`]);
//! * a radially symmetric transmission plate with an elastic disc and a
//!   thermoelastic annulus, discretized by conservative radial finite
//!   differences ([`radial`]).
//!
//! On top of the discrete generators, [`analysis`] runs resolvent sweeps
//! along the imaginary axis (analyticity / Gevrey classification), spectral
//! abscissa and growth-bound estimates, and [`timeevo`] integrates the
//! systems in time with energy-identity diagnostics. All dense complex
//! kernels live in [`linalg`]; the [`cli`] module is the command-line
//! front end.

// `!(x > 0.0)` guards intentionally reject NaN along with the sign
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// dense kernels read as explicitly indexed loops
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod linalg;
pub mod modal;
pub mod model;
pub mod operator;
pub mod radial;
pub mod timeevo;
