//! Exact block-diagonalization of the fully thermoelastic plate generator
//! over the sine eigenbasis of the Dirichlet Laplacian.
//!
//! Hinged plate conditions (u = Lap u = 0 on the boundary) make the
//! bilaplacian the square of the Dirichlet Laplacian, so on a rectangle or
//! an interval each eigenfunction phi with -Lap phi = d phi carries an
//! independent (n+3)x(n+3) block over the coefficients
//! (u, v, Theta_0, ..., Theta_n):
//!
//!   u'       = v
//!   v'       = -kappa1 d^2 u + beta d sum_j a_j Theta_j
//!   Theta_j' = Theta_{j+1}                      (j < n)
//!   Theta_n' = (1/a_n) [ -beta d v - d sum_j b_j Theta_j
//!                        - sum_{j<n} a_j Theta_{j+1} ]
//!
//! and the per-mode Gram matrix realizing the phase-space norm is
//! diag(kappa1 d^2, 1) (+) T with T_jk = d [j = k <= n-1] + a_j a_k.
//!
//! The published form of the last row ends with sum_{j<n} a_j Theta_j
//! (undifferentiated); that variant does not reproduce the second-order
//! system when the chain Theta_j' = Theta_{j+1} is substituted back, so the
//! default here shifts the index. The literal variant stays available as
//! [`GeneratorForm::Literal`] for comparison runs.

use crate::linalg::{
    weighted_resolvent_norm, ComplexMatrix, GramMatrix, IterationConfig, LinalgError,
};
use crate::model::{validate, DomainSpec, PhaseLagModel};
use crate::operator::{DiscreteOperator, PhaseSpaceOperator, SpectrumPoint, StateLayout};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneratorForm {
    /// Last-row Theta sum over Theta_{j+1}; equivalent to the second-order
    /// system. The default.
    #[default]
    Equivalent,
    /// Last-row Theta sum over Theta_j exactly as published.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeIndex {
    Single(u32),
    Pair(u32, u32),
}

/// One Dirichlet-Laplacian eigenvalue d > 0 with its lattice index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletMode {
    pub index: ModeIndex,
    pub eigenvalue: f64,
}

/// One modal block: generator matrix and Gram matrix for a single mode.
#[derive(Debug, Clone)]
pub struct ModalBlock {
    pub mode: DirichletMode,
    pub m: ComplexMatrix,
    pub g: GramMatrix,
}

#[derive(Debug, Clone, Error)]
pub enum ModalError {
    #[error("domain must be a rectangle or an interval for the sine basis")]
    UnsupportedDomain,
    #[error("mode cutoff must be >= 1")]
    EmptyCutoff,
    #[error("mode cutoff {k} exceeds the brute-force assembly limit {limit}")]
    CutoffTooLarge { k: usize, limit: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub const ASSEMBLE_FULL_MAX_MODES: usize = 200;

/// The K smallest Dirichlet-Laplacian eigenvalues of the domain, ascending,
/// ties broken lexicographically by lattice index.
pub fn dirichlet_eigenvalues(
    domain: &DomainSpec,
    k: usize,
) -> Result<Vec<DirichletMode>, ModalError> {
    if k == 0 {
        return Err(ModalError::EmptyCutoff);
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut modes = match *domain {
        DomainSpec::Interval { l } => (1..=k as u32)
            .map(|m| DirichletMode {
                index: ModeIndex::Single(m),
                eigenvalue: pi2 * (m as f64) * (m as f64) / (l * l),
            })
            .collect::<Vec<_>>(),
        DomainSpec::Rectangle { l1, l2 } => {
            // any candidate with m1 > k already exceeds the k-th smallest
            let bound = k as u32;
            let mut v = Vec::with_capacity((k * k).min(1 << 20));
            for m1 in 1..=bound {
                for m2 in 1..=bound {
                    let d = pi2
                        * ((m1 as f64 * m1 as f64) / (l1 * l1)
                            + (m2 as f64 * m2 as f64) / (l2 * l2));
                    v.push(DirichletMode {
                        index: ModeIndex::Pair(m1, m2),
                        eigenvalue: d,
                    });
                }
            }
            v
        }
        DomainSpec::ConcentricDiscs { .. } => return Err(ModalError::UnsupportedDomain),
    };
    modes.sort_by(|a, b| {
        a.eigenvalue
            .total_cmp(&b.eigenvalue)
            .then_with(|| index_key(a.index).cmp(&index_key(b.index)))
    });
    modes.truncate(k);
    Ok(modes)
}

fn index_key(i: ModeIndex) -> (u32, u32) {
    match i {
        ModeIndex::Single(m) => (m, 0),
        ModeIndex::Pair(m1, m2) => (m1, m2),
    }
}

/// Build the (n+3)x(n+3) generator and Gram matrices of one mode.
pub fn assemble_block(
    model: &PhaseLagModel,
    mode: &DirichletMode,
    form: GeneratorForm,
) -> ModalBlock {
    let n = model.n;
    let dim = n + 3;
    let d = mode.eigenvalue;
    let a = &model.a;
    let b = &model.b;
    let an = a[n];
    let kappa = model.kappa1;
    let beta = model.beta;

    let mut m = ComplexMatrix::zeros(dim, dim);
    let re = |x: f64| Complex64::new(x, 0.0);
    m[(0, 1)] = re(1.0);
    m[(1, 0)] = re(-kappa * d * d);
    for j in 0..=n {
        m[(1, 2 + j)] = re(beta * d * a[j]);
    }
    for j in 0..n {
        m[(2 + j, 2 + j + 1)] = re(1.0);
    }
    let last = 2 + n;
    m[(last, 1)] = re(-beta * d / an);
    for j in 0..=n {
        m[(last, 2 + j)] += re(-d * b[j] / an);
    }
    for j in 0..n {
        match form {
            GeneratorForm::Equivalent => m[(last, 2 + j + 1)] += re(-a[j] / an),
            GeneratorForm::Literal => m[(last, 2 + j)] += re(-a[j] / an),
        }
    }

    let mut g = ComplexMatrix::zeros(dim, dim);
    g[(0, 0)] = re(kappa * d * d);
    g[(1, 1)] = re(1.0);
    for j in 0..=n {
        for k in 0..=n {
            g[(2 + j, 2 + k)] += re(a[j] * a[k]);
        }
        if j < n {
            g[(2 + j, 2 + j)] += re(d);
        }
    }

    ModalBlock {
        mode: *mode,
        m,
        g: GramMatrix::new(g).expect("modal Gram matrix is Hermitian by construction"),
    }
}

/// The first K blocks of the diagonalized generator.
#[derive(Debug, Clone)]
pub struct ModalSystem {
    pub model: PhaseLagModel,
    pub form: GeneratorForm,
    pub blocks: Vec<ModalBlock>,
}

impl ModalSystem {
    pub fn build(
        model: &PhaseLagModel,
        domain: &DomainSpec,
        k: usize,
        form: GeneratorForm,
    ) -> Result<Self, ModalError> {
        validate(model, domain).map_err(|diags| {
            ModalError::InvalidModel(
                diags
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        let modes = dirichlet_eigenvalues(domain, k)?;
        let blocks = modes
            .iter()
            .map(|mode| assemble_block(model, mode, form))
            .collect();
        Ok(ModalSystem {
            model: model.clone(),
            form,
            blocks,
        })
    }

    pub fn block_dim(&self) -> usize {
        self.model.n + 3
    }

    /// Stack per-block coefficient slices into one state vector layout.
    pub fn layout(&self) -> StateLayout {
        let bd = self.block_dim();
        StateLayout::new(
            self.blocks
                .iter()
                .enumerate()
                .map(|(k, _)| (format!("block{k}"), k * bd..(k + 1) * bd))
                .collect(),
        )
    }
}

/// Block-direct-sum of the first K blocks, as a brute-force cross-check
/// target for the per-block path.
pub fn assemble_full(
    model: &PhaseLagModel,
    domain: &DomainSpec,
    k: usize,
    form: GeneratorForm,
) -> Result<DiscreteOperator, ModalError> {
    if k > ASSEMBLE_FULL_MAX_MODES {
        return Err(ModalError::CutoffTooLarge {
            k,
            limit: ASSEMBLE_FULL_MAX_MODES,
        });
    }
    let system = ModalSystem::build(model, domain, k, form)?;
    let bd = system.block_dim();
    let dim = bd * system.blocks.len();
    let mut a_h = ComplexMatrix::zeros(dim, dim);
    let mut g_h = ComplexMatrix::zeros(dim, dim);
    for (i, block) in system.blocks.iter().enumerate() {
        a_h.set_block(i * bd, i * bd, &block.m);
        g_h.set_block(i * bd, i * bd, block.g.matrix());
    }
    Ok(DiscreteOperator {
        a_h,
        g_h: GramMatrix::new(g_h)?,
        layout: system.layout(),
    })
}

impl PhaseSpaceOperator for ModalSystem {
    fn dim(&self) -> usize {
        self.block_dim() * self.blocks.len()
    }

    fn shifted(&self, c0: f64) -> Self {
        let shift = Complex64::new(2.0 * c0, 0.0);
        ModalSystem {
            model: self.model.clone(),
            form: self.form,
            blocks: self
                .blocks
                .iter()
                .map(|b| ModalBlock {
                    mode: b.mode,
                    m: b.m.shift_diag(shift),
                    g: b.g.clone(),
                })
                .collect(),
        }
    }

    fn resolvent_norm(&self, lambda: Complex64, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        // blocks are G-orthogonal, so the norm is the max over blocks
        let per_block: Result<Vec<f64>, LinalgError> = self
            .blocks
            .par_iter()
            .map(|b| weighted_resolvent_norm(&b.m, &b.g, lambda, cfg))
            .collect();
        Ok(per_block?.into_iter().fold(0.0, f64::max))
    }

    fn numerical_abscissa(&self) -> Result<f64, LinalgError> {
        let per_block: Result<Vec<f64>, LinalgError> = self
            .blocks
            .par_iter()
            .map(|b| crate::linalg::numerical_abscissa(&b.m, &b.g))
            .collect();
        Ok(per_block?.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }

    fn spectrum(&self) -> Result<Vec<SpectrumPoint>, LinalgError> {
        let per_block: Result<Vec<Vec<Complex64>>, LinalgError> = self
            .blocks
            .par_iter()
            .map(|b| crate::linalg::eigenvalues(&b.m))
            .collect();
        Ok(per_block?
            .into_iter()
            .enumerate()
            .flat_map(|(k, evs)| {
                evs.into_iter()
                    .map(move |value| SpectrumPoint { value, block: k })
            })
            .collect())
    }

    fn operator_norm(&self, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        let per_block: Result<Vec<f64>, LinalgError> = self
            .blocks
            .par_iter()
            .map(|b| crate::linalg::weighted_operator_norm(&b.m, &b.g, cfg))
            .collect();
        Ok(per_block?.into_iter().fold(0.0, f64::max))
    }

    fn exp_norm(&self, t: f64, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        let per_block: Result<Vec<f64>, LinalgError> = self
            .blocks
            .par_iter()
            .map(|b| {
                let e = crate::linalg::matrix_exponential(&b.m, t)?;
                crate::linalg::weighted_operator_norm(&e, &b.g, cfg)
            })
            .collect();
        Ok(per_block?.into_iter().fold(0.0, f64::max))
    }

    fn smoothing_norm(&self, t: f64, cfg: &IterationConfig) -> Result<f64, LinalgError> {
        let per_block: Result<Vec<f64>, LinalgError> = self
            .blocks
            .par_iter()
            .map(|b| {
                let e = crate::linalg::matrix_exponential(&b.m, t)?;
                crate::linalg::weighted_operator_norm(&b.m.mul(&e), &b.g, cfg)
            })
            .collect();
        Ok(per_block?.into_iter().fold(0.0, f64::max))
    }
}
