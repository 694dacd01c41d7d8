//! Time evolution of both discretized systems with energy diagnostics.
//!
//! The energy is E(t) = ||U(t)||_G^2 / 2 and satisfies, exactly at the
//! discrete level,
//!
//!   dE/dt = -sum_j b_j D(Theta_j, vartheta) + sum_{j<n} D(Theta_{j+1}, Theta_j)
//!
//! with D the discrete Dirichlet form of the temperature slices (d * <.,.>
//! per mode in the modal case, -diag(w) L_T on the annulus in the radial
//! case). Evolution traces record both right-hand-side terms so the
//! identity can be checked against centered differences of E without
//! entangling the check with the integrator.

use crate::linalg::{lu_factor, matrix_exponential, ComplexMatrix, LinalgError};
use crate::modal::ModalSystem;
use crate::radial::TransmissionOperator;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum EvolveError {
    #[error("state has length {got}, system expects {want}")]
    StateDim { got: usize, want: usize },
    #[error("time step and horizon must be positive, got dt = {dt}, t_final = {t_final}")]
    BadTimeGrid { dt: f64, t_final: f64 },
    #[error("implicit midpoint factorization failed (try a smaller dt): {0}")]
    MidpointSingular(LinalgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Time series of states with energy and energy-rate diagnostics.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub energy: Vec<f64>,
    /// Per time: (-sum_j b_j D(Theta_j, vartheta), sum_{j<n} D(Theta_{j+1}, Theta_j)).
    pub dissipation: Vec<(f64, f64)>,
}

/// Energy bookkeeping shared by the two discretizations.
pub trait EnergyDiagnostics {
    fn state_dim(&self) -> usize;
    /// E = ||U||_G^2 / 2.
    fn energy(&self, state: &[Complex64]) -> f64;
    /// The two right-hand-side terms of the energy identity.
    fn rate_terms(&self, state: &[Complex64]) -> (f64, f64);
    /// (D(Theta_n, Theta_n), sum_{j<n} D(Theta_j, Theta_j)).
    fn theta_seminorms(&self, state: &[Complex64]) -> (f64, f64);
    /// (a, b) coefficient slices.
    fn coefficients(&self) -> (&[f64], &[f64]);
}

impl EnergyDiagnostics for ModalSystem {
    fn state_dim(&self) -> usize {
        self.block_dim() * self.blocks.len()
    }

    fn energy(&self, state: &[Complex64]) -> f64 {
        let bd = self.block_dim();
        self.blocks
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let x = &state[k * bd..(k + 1) * bd];
                0.5 * b.g.inner(x, x).re
            })
            .sum()
    }

    fn rate_terms(&self, state: &[Complex64]) -> (f64, f64) {
        let n = self.model.n;
        let a = &self.model.a;
        let bcoef = &self.model.b;
        let bd = self.block_dim();
        let mut diss = 0.0;
        let mut prod = 0.0;
        for (k, block) in self.blocks.iter().enumerate() {
            let d = block.mode.eigenvalue;
            let theta = &state[k * bd + 2..(k + 1) * bd];
            let va: Complex64 = (0..=n).map(|j| theta[j] * a[j]).sum();
            let vb: Complex64 = (0..=n).map(|j| theta[j] * bcoef[j]).sum();
            diss -= d * (vb * va.conj()).re;
            for j in 0..n {
                prod += d * (theta[j + 1] * theta[j].conj()).re;
            }
        }
        (diss, prod)
    }

    fn theta_seminorms(&self, state: &[Complex64]) -> (f64, f64) {
        let n = self.model.n;
        let bd = self.block_dim();
        let mut top = 0.0;
        let mut low = 0.0;
        for (k, block) in self.blocks.iter().enumerate() {
            let d = block.mode.eigenvalue;
            let theta = &state[k * bd + 2..(k + 1) * bd];
            top += d * theta[n].norm_sqr();
            for j in 0..n {
                low += d * theta[j].norm_sqr();
            }
        }
        (top, low)
    }

    fn coefficients(&self) -> (&[f64], &[f64]) {
        (&self.model.a, &self.model.b)
    }
}

impl EnergyDiagnostics for TransmissionOperator {
    fn state_dim(&self) -> usize {
        self.dim()
    }

    fn energy(&self, state: &[Complex64]) -> f64 {
        0.5 * self.op.g_h.inner(state, state).re
    }

    fn rate_terms(&self, state: &[Complex64]) -> (f64, f64) {
        let n = self.model.n;
        let na = self.grid.annulus_cells();
        let mut vartheta = vec![Complex64::new(0.0, 0.0); na];
        for j in 0..=n {
            let tj = self.theta_component(state, j);
            for i in 0..na {
                vartheta[i] += tj[i] * self.model.a[j];
            }
        }
        let mut diss = 0.0;
        for j in 0..=n {
            diss -=
                self.model.b[j] * self.theta_dirichlet(self.theta_component(state, j), &vartheta);
        }
        let mut prod = 0.0;
        for j in 0..n {
            prod += self.theta_dirichlet(
                self.theta_component(state, j + 1),
                self.theta_component(state, j),
            );
        }
        (diss, prod)
    }

    fn theta_seminorms(&self, state: &[Complex64]) -> (f64, f64) {
        let n = self.model.n;
        let top = self.theta_dirichlet(
            self.theta_component(state, n),
            self.theta_component(state, n),
        );
        let mut low = 0.0;
        for j in 0..n {
            low += self.theta_dirichlet(
                self.theta_component(state, j),
                self.theta_component(state, j),
            );
        }
        (top, low)
    }

    fn coefficients(&self) -> (&[f64], &[f64]) {
        (&self.model.a, &self.model.b)
    }
}

fn check_grid(dt: f64, t_final: f64) -> Result<usize, EvolveError> {
    if !(dt > 0.0) || !(t_final >= dt) || !dt.is_finite() || !t_final.is_finite() {
        return Err(EvolveError::BadTimeGrid { dt, t_final });
    }
    Ok((t_final / dt).round() as usize)
}

fn trace_from_states(
    sys: &impl EnergyDiagnostics,
    dt: f64,
    states: Vec<Vec<Complex64>>,
) -> EvolutionTrace {
    let times: Vec<f64> = (0..states.len()).map(|i| i as f64 * dt).collect();
    let energy: Vec<f64> = states.iter().map(|s| sys.energy(s)).collect();
    let dissipation: Vec<(f64, f64)> = states.iter().map(|s| sys.rate_terms(s)).collect();
    EvolutionTrace {
        times,
        states,
        energy,
        dissipation,
    }
}

/// Exact per-block propagation: U_{k+1} = e^{dt M} U_k on each block.
pub fn evolve_modal(
    sys: &ModalSystem,
    initial: &[Complex64],
    dt: f64,
    t_final: f64,
) -> Result<EvolutionTrace, EvolveError> {
    if initial.len() != sys.state_dim() {
        return Err(EvolveError::StateDim {
            got: initial.len(),
            want: sys.state_dim(),
        });
    }
    let steps = check_grid(dt, t_final)?;
    let bd = sys.block_dim();
    // per-block trajectories in parallel, then stitch
    let per_block: Result<Vec<Vec<Vec<Complex64>>>, EvolveError> = sys
        .blocks
        .par_iter()
        .enumerate()
        .map(|(k, block)| {
            let stepper = matrix_exponential(&block.m, dt)?;
            let mut x = initial[k * bd..(k + 1) * bd].to_vec();
            let mut traj = Vec::with_capacity(steps + 1);
            traj.push(x.clone());
            for _ in 0..steps {
                x = stepper.mul_vec(&x);
                traj.push(x.clone());
            }
            Ok(traj)
        })
        .collect();
    let per_block = per_block?;
    let mut states = vec![vec![Complex64::new(0.0, 0.0); sys.state_dim()]; steps + 1];
    for (k, traj) in per_block.iter().enumerate() {
        for (i, x) in traj.iter().enumerate() {
            states[i][k * bd..(k + 1) * bd].copy_from_slice(x);
        }
    }
    Ok(trace_from_states(sys, dt, states))
}

/// Implicit midpoint for the assembled transmission operator:
/// (I - dt/2 A) U_{k+1} = (I + dt/2 A) U_k, one factorization reused.
pub fn evolve_radial(
    op: &TransmissionOperator,
    initial: &[Complex64],
    dt: f64,
    t_final: f64,
) -> Result<EvolutionTrace, EvolveError> {
    if initial.len() != op.dim() {
        return Err(EvolveError::StateDim {
            got: initial.len(),
            want: op.dim(),
        });
    }
    let steps = check_grid(dt, t_final)?;
    let half = Complex64::new(0.5 * dt, 0.0);
    let minus = ComplexMatrix::identity(op.dim()).sub(&op.op.a_h.scale(half));
    let plus = ComplexMatrix::identity(op.dim()).add(&op.op.a_h.scale(half));
    let factors = lu_factor(&minus).map_err(EvolveError::MidpointSingular)?;
    let mut states = Vec::with_capacity(steps + 1);
    let mut x = initial.to_vec();
    states.push(x.clone());
    for _ in 0..steps {
        let rhs = plus.mul_vec(&x);
        x = factors.solve_vec(&rhs);
        states.push(x.clone());
    }
    Ok(trace_from_states(op, dt, states))
}

/// Outcome of the discrete energy-identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// max over interior times of |dE/dt - RHS| / E(0), dE/dt by centered
    /// differences.
    pub max_residual: f64,
    /// dE/dt <= -(a_n b_n / 2) D(Theta_n, Theta_n) + c0 sum_{j<n} D(Theta_j, Theta_j)
    /// along the whole trace, evaluated with the supplied c0.
    pub inequality_holds: bool,
}

pub fn energy_identity_residual(
    trace: &EvolutionTrace,
    sys: &impl EnergyDiagnostics,
    c0: f64,
) -> IdentityReport {
    let n = trace.times.len();
    let e0 = trace
        .energy
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(f64::MIN_POSITIVE);
    let mut max_residual = 0.0f64;
    if n >= 3 {
        let dt = trace.times[1] - trace.times[0];
        for i in 1..n - 1 {
            let dedt = (trace.energy[i + 1] - trace.energy[i - 1]) / (2.0 * dt);
            let (diss, prod) = trace.dissipation[i];
            max_residual = max_residual.max((dedt - (diss + prod)).abs());
        }
    }
    let (a, b) = sys.coefficients();
    let an_bn_half = 0.5 * a.last().unwrap() * b.last().unwrap();
    let mut inequality_holds = true;
    for state in &trace.states {
        let (diss, prod) = sys.rate_terms(state);
        let (top, low) = sys.theta_seminorms(state);
        let lhs = diss + prod; // exact dE/dt
        let rhs = -an_bn_half * top + c0 * low;
        let scale = top.abs().max(low.abs()).max(1.0);
        if lhs > rhs + 1e-9 * scale {
            inequality_holds = false;
            break;
        }
    }
    IdentityReport {
        max_residual: max_residual / e0,
        inequality_holds,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionReport {
    pub pass: bool,
    /// max over t of ||U(t)||_G / (e^{2 c0 t} ||U(0)||_G).
    pub max_ratio: f64,
    pub argmax_time: f64,
}

pub const CONTRACTION_TOL: f64 = 1e-8;

pub fn quasi_contraction_check(trace: &EvolutionTrace, c0: f64) -> ContractionReport {
    let norm0 = trace.energy.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let mut max_ratio = 0.0f64;
    let mut argmax_time = 0.0;
    for (&t, &e) in trace.times.iter().zip(trace.energy.iter()) {
        let ratio = e.max(0.0).sqrt() / ((2.0 * c0 * t).exp() * norm0.max(f64::MIN_POSITIVE));
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax_time = t;
        }
    }
    ContractionReport {
        pass: max_ratio <= 1.0 + CONTRACTION_TOL,
        max_ratio,
        argmax_time,
    }
}

/// Canonical initial data families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialPreset {
    /// Displacement data: the slowest plate-branch eigenvector of the
    /// lowest mode (modal), or a smooth transversal deflection (radial).
    Plate,
    /// Pure thermal data on Theta_0.
    Thermal,
    /// Random complex state, G-normalized.
    Random,
}

impl std::str::FromStr for InitialPreset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plate" => Ok(InitialPreset::Plate),
            "thermal" => Ok(InitialPreset::Thermal),
            "random" => Ok(InitialPreset::Random),
            other => Err(format!(
                "unknown preset '{other}' (expected plate | thermal | random)"
            )),
        }
    }
}

/// Build modal initial data, G-normalized to ||U||_G = 1.
pub fn modal_initial(
    sys: &ModalSystem,
    preset: InitialPreset,
    seed: u64,
) -> Result<Vec<Complex64>, EvolveError> {
    let bd = sys.block_dim();
    let mut x = vec![Complex64::new(0.0, 0.0); sys.state_dim()];
    match preset {
        InitialPreset::Plate => {
            // inverse iteration toward the plate branch of block 0: start
            // from pure displacement and project onto the eigenvector with
            // eigenvalue closest to +i sqrt(kappa1) d
            let block = &sys.blocks[0];
            let d = block.mode.eigenvalue;
            let target = Complex64::new(0.0, sys.model.kappa1.sqrt() * d);
            let shifted = block.m.shift_diag(target * Complex64::new(1.0, 1e-8));
            let factors = lu_factor(&shifted)?;
            let mut v = vec![Complex64::new(0.0, 0.0); bd];
            v[0] = Complex64::new(1.0, 0.0);
            for _ in 0..50 {
                v = factors.solve_vec(&v);
                let norm = crate::linalg::vec_norm(&v);
                for z in v.iter_mut() {
                    *z /= norm;
                }
            }
            x[0..bd].copy_from_slice(&v);
        }
        InitialPreset::Thermal => {
            x[2] = Complex64::new(1.0, 0.0); // Theta_0 of the lowest block
        }
        InitialPreset::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for z in x.iter_mut() {
                *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
    normalize_g_modal(sys, &mut x);
    Ok(x)
}

fn normalize_g_modal(sys: &ModalSystem, x: &mut [Complex64]) {
    let e = sys.energy(x);
    let norm = (2.0 * e).sqrt();
    if norm > 0.0 {
        for z in x.iter_mut() {
            *z /= norm;
        }
    }
}

/// Build radial initial data, G-normalized to ||U||_G = 1.
pub fn radial_initial(
    op: &TransmissionOperator,
    preset: InitialPreset,
    seed: u64,
) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); op.dim()];
    let ncells = op.grid.cells();
    match preset {
        InitialPreset::Plate => {
            // smooth deflection (R^2 - r^2), zero velocity and temperature
            let r2 = op.grid.outer_radius().powi(2);
            for i in 0..ncells {
                let r = op.grid.node(i);
                x[i] = Complex64::new(r2 - r * r, 0.0);
            }
        }
        InitialPreset::Thermal => {
            // Theta_0 bump vanishing at both annulus faces
            let r0 = op.grid.r0();
            let r1 = op.grid.outer_radius();
            let base = 2 * ncells;
            for i in 0..op.grid.annulus_cells() {
                let r = op.grid.node(op.grid.disc_cells() + i);
                x[base + i] = Complex64::new((r - r0) * (r1 - r), 0.0);
            }
        }
        InitialPreset::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for z in x.iter_mut() {
                *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
    let norm = (2.0 * op.energy(&x)).sqrt();
    if norm > 0.0 {
        for z in x.iter_mut() {
            *z /= norm;
        }
    }
    x
}
