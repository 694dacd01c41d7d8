//! Theorem-probing layer: resolvent sweeps along the imaginary axis,
//! analyticity and Gevrey exponent fits, spectral abscissa, growth bound
//! and small-time smoothing rate.
//!
//! The dichotomy being probed: an analytic semigroup keeps
//! gamma * ||(i gamma - B)^{-1}|| bounded along the axis, while Gevrey
//! class 1/sigma only guarantees ||(i gamma - B)^{-1}|| ~ gamma^{-sigma}.
//! Both reduce to log-log slopes of sweep data.

use crate::linalg::{IterationConfig, LinalgError};
use crate::operator::{PhaseSpaceOperator, SpectrumPoint};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum AnalysisError {
    #[error("resolvent singular at gamma = {gamma:.6e}; nearest eigenvalue {nearest}")]
    SingularResolvent { gamma: f64, nearest: Complex64 },
    #[error("shift c0 = {c0:.6e} below the dissipative threshold abscissa/2 = {required:.6e}")]
    InsufficientShift { c0: f64, required: f64 },
    #[error("sweep grid must be strictly increasing and non-empty")]
    BadGrid,
    #[error("fit window [{lo:.3}, {hi:.3}] holds {got} samples, need >= {need}")]
    WindowTooNarrow {
        lo: f64,
        hi: f64,
        got: usize,
        need: usize,
    },
    #[error("degenerate fit window: all norms equal")]
    DegenerateWindow,
    #[error("indicator needs a shifted sweep spanning >= {need} decades, got {got:.2}")]
    TooFewDecades { need: f64, got: f64 },
    #[error("this fit is defined on sweeps of the shifted generator")]
    UnshiftedSweep,
    #[error("time grid must be ascending, positive, and hold >= 2 points")]
    BadTimeGrid,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Log-spaced frequency grid: 10^(lo + i/ppd) for i = 0..=ppd*(hi-lo).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub log10_min: f64,
    pub log10_max: f64,
    pub points_per_decade: usize,
}

impl SweepGrid {
    pub fn new(log10_min: f64, log10_max: f64, points_per_decade: usize) -> Self {
        SweepGrid {
            log10_min,
            log10_max,
            points_per_decade,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let decades = self.log10_max - self.log10_min;
        if decades < 0.0 || self.points_per_decade == 0 {
            return Vec::new();
        }
        // a zero-width grid degenerates to the single frequency 10^lo
        let count = (decades * self.points_per_decade as f64).round() as usize;
        (0..=count)
            .map(|i| 10f64.powf(self.log10_min + i as f64 / self.points_per_decade as f64))
            .collect()
    }
}

/// Samples of ||(i gamma - B)^{-1}||_G on an ascending frequency grid.
#[derive(Debug, Clone)]
pub struct ResolventSweep {
    pub gamma: Vec<f64>,
    pub norm: Vec<f64>,
    pub gamma_times_norm: Vec<f64>,
    pub shifted: bool,
    pub c0: f64,
    pub seed: u64,
}

impl ResolventSweep {
    pub fn from_samples(
        gamma: Vec<f64>,
        norm: Vec<f64>,
        shifted: bool,
        c0: f64,
        seed: u64,
    ) -> Self {
        let gamma_times_norm = gamma.iter().zip(norm.iter()).map(|(g, n)| g * n).collect();
        ResolventSweep {
            gamma,
            norm,
            gamma_times_norm,
            shifted,
            c0,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn decades(&self) -> f64 {
        if self.gamma.is_empty() {
            0.0
        } else {
            (self.gamma[self.len() - 1] / self.gamma[0]).log10()
        }
    }
}

/// Sweep the resolvent of B = A - 2 c0 I (or of A itself when `shift` is
/// None) along the imaginary axis. Samples are returned in grid order; each
/// point is evaluated independently, so the map parallelizes.
pub fn resolvent_sweep<T: PhaseSpaceOperator + Sync>(
    op: &T,
    grid: &SweepGrid,
    shift: Option<f64>,
    cfg: &IterationConfig,
) -> Result<ResolventSweep, AnalysisError> {
    let gammas = grid.points();
    if gammas.is_empty() || gammas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::BadGrid);
    }
    let (target, shifted, c0) = match shift {
        Some(c0) => {
            let absc = op.numerical_abscissa()?;
            // slack for the eigensolve tolerance on the abscissa itself
            let slack = 1e-9 * absc.abs().max(1.0);
            if c0 < absc / 2.0 - slack {
                return Err(AnalysisError::InsufficientShift {
                    c0,
                    required: absc / 2.0,
                });
            }
            (op.shifted(c0), true, c0)
        }
        None => (op.shifted(0.0), false, 0.0),
    };
    let norms: Result<Vec<f64>, LinalgError> = gammas
        .par_iter()
        .map(|&g| target.resolvent_norm(Complex64::new(0.0, g), cfg))
        .collect();
    let norms = norms?;
    for (&g, &n) in gammas.iter().zip(norms.iter()) {
        if !n.is_finite() || n <= 0.0 {
            let nearest = nearest_eigenvalue(&target, Complex64::new(0.0, g))
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            return Err(AnalysisError::SingularResolvent { gamma: g, nearest });
        }
    }
    Ok(ResolventSweep::from_samples(
        gammas, norms, shifted, c0, cfg.seed,
    ))
}

fn nearest_eigenvalue<T: PhaseSpaceOperator>(op: &T, lambda: Complex64) -> Option<Complex64> {
    op.spectrum().ok().and_then(|sp| {
        sp.into_iter()
            .map(|p| p.value)
            .min_by(|a, b| (a - lambda).norm().total_cmp(&(b - lambda).norm()))
    })
}

/// Outcome of the imaginary-axis inclusion check.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisReport {
    pub pass: bool,
    /// Smallest weighted singular value of (i gamma - B) over the sweep.
    pub min_distance: f64,
    pub argmin_gamma: f64,
    pub threshold: f64,
}

/// Pass iff every sampled norm is finite and the smallest singular value
/// 1/norm stays above 1e-12 * ||A||.
pub fn verify_imaginary_axis(sweep: &ResolventSweep, operator_norm: f64) -> AxisReport {
    let threshold = 1e-12 * operator_norm;
    let mut min_distance = f64::INFINITY;
    let mut argmin_gamma = f64::NAN;
    let mut finite = true;
    for (&g, &n) in sweep.gamma.iter().zip(sweep.norm.iter()) {
        if !n.is_finite() {
            finite = false;
            argmin_gamma = g;
            min_distance = 0.0;
            break;
        }
        let dist = 1.0 / n;
        if dist < min_distance {
            min_distance = dist;
            argmin_gamma = g;
        }
    }
    AxisReport {
        pass: finite && min_distance > threshold,
        min_distance,
        argmin_gamma,
        threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticityIndicator {
    /// sup over the grid of gamma * ||(i gamma - B)^{-1}||.
    pub sup_gamma_norm: f64,
    pub argmax_gamma: f64,
    /// Least-squares slope of log(gamma * norm) vs log gamma over the top
    /// decade; near zero for analytic generators.
    pub tail_slope: f64,
}

pub fn analyticity_indicator(
    sweep: &ResolventSweep,
) -> Result<AnalyticityIndicator, AnalysisError> {
    if !sweep.shifted || sweep.decades() < 3.0 - 1e-12 {
        return Err(AnalysisError::TooFewDecades {
            need: 3.0,
            got: sweep.decades(),
        });
    }
    let mut sup = 0.0f64;
    let mut argmax = f64::NAN;
    for (&g, &gn) in sweep.gamma.iter().zip(sweep.gamma_times_norm.iter()) {
        if gn > sup {
            sup = gn;
            argmax = g;
        }
    }
    let gmax = *sweep.gamma.last().unwrap();
    let lo = gmax / 10.0;
    let xs: Vec<f64> = sweep
        .gamma
        .iter()
        .zip(sweep.gamma_times_norm.iter())
        .filter(|(&g, _)| g >= lo * (1.0 - 1e-12))
        .map(|(&g, _)| g.ln())
        .collect();
    let ys: Vec<f64> = sweep
        .gamma
        .iter()
        .zip(sweep.gamma_times_norm.iter())
        .filter(|(&g, _)| g >= lo * (1.0 - 1e-12))
        .map(|(_, &gn)| gn.ln())
        .collect();
    let (slope, _, _) = fit_line(&xs, &ys)?;
    Ok(AnalyticityIndicator {
        sup_gamma_norm: sup,
        argmax_gamma: argmax,
        tail_slope: slope,
    })
}

/// Power-law fit of the resolvent decay: log norm = log C - varsigma log gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevreyFit {
    pub varsigma: f64,
    pub c: f64,
    pub r_squared: f64,
    /// log10 window actually used.
    pub window: (f64, f64),
    pub samples: usize,
}

pub const GEVREY_MIN_SAMPLES: usize = 10;

pub fn gevrey_fit(sweep: &ResolventSweep, window: (f64, f64)) -> Result<GevreyFit, AnalysisError> {
    if !sweep.shifted {
        return Err(AnalysisError::UnshiftedSweep);
    }
    let (lo, hi) = window;
    let glo = 10f64.powf(lo) * (1.0 - 1e-12);
    let ghi = 10f64.powf(hi) * (1.0 + 1e-12);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&g, &n) in sweep.gamma.iter().zip(sweep.norm.iter()) {
        if g >= glo && g <= ghi {
            xs.push(g.ln());
            ys.push(n.ln());
        }
    }
    if xs.len() < GEVREY_MIN_SAMPLES {
        return Err(AnalysisError::WindowTooNarrow {
            lo,
            hi,
            got: xs.len(),
            need: GEVREY_MIN_SAMPLES,
        });
    }
    let (slope, intercept, r2) = fit_line(&xs, &ys)?;
    Ok(GevreyFit {
        varsigma: -slope,
        c: intercept.exp(),
        r_squared: r2,
        window,
        samples: xs.len(),
    })
}

/// Plain least squares on (x, y); returns (slope, intercept, R^2).
/// Errors when y has no variance (degenerate window).
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64), AnalysisError> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return Err(AnalysisError::DegenerateWindow);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if syy == 0.0 {
        return Err(AnalysisError::DegenerateWindow);
    }
    if sxx == 0.0 {
        return Err(AnalysisError::BadGrid);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(&x, &y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let r2 = 1.0 - ss_res / syy;
    Ok((slope, intercept, r2))
}

/// max Re of the discrete spectrum, with the attaining point.
pub fn spectral_abscissa<T: PhaseSpaceOperator>(
    op: &T,
) -> Result<(f64, SpectrumPoint), AnalysisError> {
    let spectrum = op.spectrum()?;
    let best = spectrum
        .into_iter()
        .max_by(|a, b| a.value.re.total_cmp(&b.value.re))
        .ok_or(AnalysisError::BadGrid)?;
    Ok((best.value.re, best))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub omega0: f64,
    pub r_squared: f64,
    /// The fitted samples (t, ||e^{tA}||_G).
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
}

/// Fitted growth bound omega_0: least-squares slope of log ||e^{tA}||_G
/// over the trailing half of the time grid.
pub fn growth_bound<T: PhaseSpaceOperator + Sync>(
    op: &T,
    times: &[f64],
    cfg: &IterationConfig,
) -> Result<GrowthFit, AnalysisError> {
    if times.len() < 2
        || times.windows(2).any(|w| w[0] >= w[1])
        || times.iter().any(|&t| !(t > 0.0))
    {
        return Err(AnalysisError::BadTimeGrid);
    }
    let tmax = *times.last().unwrap();
    let tail: Vec<f64> = times
        .iter()
        .copied()
        .filter(|&t| t >= tmax / 2.0 - 1e-15)
        .collect();
    if tail.len() < 2 {
        return Err(AnalysisError::BadTimeGrid);
    }
    let norms: Result<Vec<f64>, LinalgError> =
        tail.par_iter().map(|&t| op.exp_norm(t, cfg)).collect();
    let norms = norms?;
    if norms.iter().any(|&n| !n.is_finite() || n <= 0.0) {
        return Err(AnalysisError::Linalg(LinalgError::ExpOverflow {
            norm: f64::INFINITY,
        }));
    }
    let ys: Vec<f64> = norms.iter().map(|n| n.ln()).collect();
    let (slope, _, r2) = fit_line(&tail, &ys)?;
    Ok(GrowthFit {
        omega0: slope,
        r_squared: r2,
        times: tail,
        norms,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingFit {
    /// Slope s of log ||A e^{tA}||_G vs log t; analytic generators satisfy
    /// s >= -1 up to fit noise.
    pub slope: f64,
    pub r_squared: f64,
    /// The fitted samples (t, ||A e^{tA}||_G).
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
}

/// Small-time smoothing rate from a log-spaced time grid.
pub fn smoothing_rate<T: PhaseSpaceOperator + Sync>(
    op: &T,
    times: &[f64],
    cfg: &IterationConfig,
) -> Result<SmoothingFit, AnalysisError> {
    if times.len() < 2
        || times.windows(2).any(|w| w[0] >= w[1])
        || times.iter().any(|&t| !(t > 0.0))
    {
        return Err(AnalysisError::BadTimeGrid);
    }
    let norms: Result<Vec<f64>, LinalgError> = times
        .par_iter()
        .map(|&t| op.smoothing_norm(t, cfg))
        .collect();
    let norms = norms?;
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|n| n.ln()).collect();
    let (slope, _, r2) = fit_line(&xs, &ys)?;
    Ok(SmoothingFit {
        slope,
        r_squared: r2,
        times: times.to_vec(),
        norms,
    })
}

/// Log-spaced times between t_lo and t_hi inclusive.
pub fn log_time_grid(t_lo: f64, t_hi: f64, points: usize) -> Vec<f64> {
    assert!(t_lo > 0.0 && t_hi > t_lo && points >= 2);
    let l0 = t_lo.ln();
    let l1 = t_hi.ln();
    (0..points)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Evenly spaced times on [t_hi/2, t_hi], the window growth_bound fits over.
pub fn growth_time_grid(t_hi: f64, points: usize) -> Vec<f64> {
    assert!(t_hi > 0.0 && points >= 2);
    (0..points)
        .map(|i| t_hi / 2.0 + t_hi / 2.0 * i as f64 / (points - 1) as f64)
        .collect()
}
