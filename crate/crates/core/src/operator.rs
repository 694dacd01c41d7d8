//! Discrete generators with a Gram-weighted phase space.
//!
//! Both discretizations expose the same probing surface: either as an
//! assembled matrix pair (A_h, G_h) or as a set of independent blocks whose
//! direct sum is G-orthogonal, so that norms reduce to maxima over blocks.

use crate::linalg::{
    eigenvalues, matrix_exponential, numerical_abscissa, weighted_operator_norm,
    weighted_resolvent_norm, ComplexMatrix, GramMatrix, IterationConfig, LinalgError,
};
use num_complex::Complex64;
use std::ops::Range;

/// Named index ranges into a stacked state vector.
#[derive(Debug, Clone)]
pub struct StateLayout {
    entries: Vec<(String, Range<usize>)>,
}

impl StateLayout {
    pub fn new(entries: Vec<(String, Range<usize>)>) -> Self {
        StateLayout { entries }
    }

    pub fn range(&self, name: &str) -> Option<Range<usize>> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r.clone())
    }

    pub fn entries(&self) -> &[(String, Range<usize>)] {
        &self.entries
    }
}

/// Assembled generator matrix plus the Gram matrix of the discrete
/// phase-space norm.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub a_h: ComplexMatrix,
    pub g_h: GramMatrix,
    pub layout: StateLayout,
}

/// One eigenvalue with the index of the block it came from (0 for assembled
/// operators).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub value: Complex64,
    pub block: usize,
}

/// Probing surface shared by the modal block set and assembled operators.
pub trait PhaseSpaceOperator {
    fn dim(&self) -> usize;

    /// A - 2 c0 I, the dissipative perturbation of the generator.
    fn shifted(&self, c0: f64) -> Self
    where
        Self: Sized;

    /// ||(lambda I - A)^{-1}||_G.
    fn resolvent_norm(&self, lambda: Complex64, cfg: &IterationConfig) -> Result<f64, LinalgError>;

    /// sup Re<Ax, x>_G / <x, x>_G.
    fn numerical_abscissa(&self) -> Result<f64, LinalgError>;

    fn spectrum(&self) -> Result<Vec<SpectrumPoint>, LinalgError>;

    /// ||A||_G estimate (power iteration).
    fn operator_norm(&self, cfg: &IterationConfig) -> Result<f64, LinalgError>;

    /// ||e^{tA}||_G.
    fn exp_norm(&self, t: f64, cfg: &IterationConfig) -> Result<f64, LinalgError>;

    /// ||A e^{tA}||_G, the small-time smoothing quantity.
    fn smoothing_norm(&self, t: f64, cfg: &IterationConfig) -> Result<f64, LinalgError>;
}

impl PhaseSpaceOperator for DiscreteOperator {
    fn dim(&self) -> usize {
        self.a_h.rows()
    }

    fn shifted(&self, c0: f64) -> Self {
        DiscreteOperator {
            a_h: self.a_h.shift_diag(Complex64::new(2.0 * c0, 0.0)),
            g_h: self.g_h.clone(),
            layout: self.layout.clone(),
        }
    }

    fn resolvent_norm(&self, lambda: Complex64, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        weighted_resolvent_norm(&self.a_h, &self.g_h, lambda, cfg)
    }

    fn numerical_abscissa(&self) -> Result<f64, LinalgError> {
        numerical_abscissa(&self.a_h, &self.g_h)
    }

    fn spectrum(&self) -> Result<Vec<SpectrumPoint>, LinalgError> {
        Ok(eigenvalues(&self.a_h)?
            .into_iter()
            .map(|value| SpectrumPoint { value, block: 0 })
            .collect())
    }

    fn operator_norm(&self, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        weighted_operator_norm(&self.a_h, &self.g_h, cfg)
    }

    fn exp_norm(&self, t: f64, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        let e = matrix_exponential(&self.a_h, t)?;
        weighted_operator_norm(&e, &self.g_h, cfg)
    }

    fn smoothing_norm(&self, t: f64, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        let e = matrix_exponential(&self.a_h, t)?;
        weighted_operator_norm(&self.a_h.mul(&e), &self.g_h, cfg)
    }
}
