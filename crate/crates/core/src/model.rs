//! Phase-lag thermoelastic model coefficients and domain geometry.
//!
//! The heat law carries two coefficient sequences a_0..a_n and b_0..b_n
//! multiplying successive time derivatives of the temperature and of its
//! Laplacian. Only the leading coefficients are sign-constrained: a_n > 0
//! and b_n > 0. The plate couples through beta; beta = 0 is accepted (it
//! gives closed-form decoupled spectra, useful as oracles) and flagged as
//! "decoupled" in reports.

use thiserror::Error;

/// Model coefficients shared by both discretizations. Densities are unit in
/// this version: non-unit rho or c_T must be scaled out by the caller first.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseLagModel {
    /// Order of the phase-lag expansion (number of extra temperature
    /// derivatives); the state carries Theta_0..Theta_n.
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub rho: f64,
    pub c_t: f64,
    /// Plate stiffness of the thermoelastic part.
    pub kappa1: f64,
    /// Plate stiffness of the elastic part (transmission problem only).
    pub kappa2: Option<f64>,
    /// Thermoelastic coupling coefficient; any real.
    pub beta: f64,
}

impl PhaseLagModel {
    pub fn new(
        n: usize,
        a: Vec<f64>,
        b: Vec<f64>,
        kappa1: f64,
        kappa2: Option<f64>,
        beta: f64,
    ) -> Self {
        PhaseLagModel {
            n,
            a,
            b,
            rho: 1.0,
            c_t: 1.0,
            kappa1,
            kappa2,
            beta,
        }
    }

    /// beta = 0 decouples the plate from the heat chain.
    pub fn is_decoupled(&self) -> bool {
        self.beta == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Rectangle { l1: f64, l2: f64 },
    Interval { l: f64 },
    ConcentricDiscs { r0: f64, r: f64 },
}

/// One violated invariant: which field, what was required, what was seen.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub field: &'static str,
    pub constraint: &'static str,
    pub actual: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} violated (got {})",
            self.field, self.constraint, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("degenerate a_n: taylor expansion with n >= 1 needs tau_q > 0")]
    DegenerateLeadCoefficient,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Standard Taylor-of-delay coefficient presets
/// a_j = tau_q^j / j!, b_j = k_cond * tau_theta^j / j! for j = 0..n.
///
/// With tau_theta = 0 and n >= 1 the returned b_n is zero and the model will
/// be rejected by [`validate`] unless the caller supplies b explicitly.
pub fn taylor_coefficients(
    tau_q: f64,
    tau_theta: f64,
    k_cond: f64,
    n: usize,
) -> Result<(Vec<f64>, Vec<f64>), ModelError> {
    if !(tau_q >= 0.0) || !(tau_theta >= 0.0) {
        return Err(ModelError::InvalidArgument(format!(
            "delay times must be >= 0, got tau_q = {tau_q}, tau_theta = {tau_theta}"
        )));
    }
    if !(k_cond > 0.0) {
        return Err(ModelError::InvalidArgument(format!(
            "conductivity must be > 0, got {k_cond}"
        )));
    }
    if n >= 1 && tau_q == 0.0 {
        return Err(ModelError::DegenerateLeadCoefficient);
    }
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    let mut aj = 1.0;
    let mut bj = k_cond;
    for j in 0..=n {
        a.push(aj);
        b.push(bj);
        let fac = (j + 1) as f64;
        aj *= tau_q / fac;
        bj *= tau_theta / fac;
    }
    Ok((a, b))
}

/// Checks every type invariant and reports all violations, not just the
/// first. Returns the model untouched on success.
pub fn validate(model: &PhaseLagModel, domain: &DomainSpec) -> Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let push = |diags: &mut Vec<Diagnostic>, field, constraint, actual: String| {
        diags.push(Diagnostic {
            field,
            constraint,
            actual,
        });
    };

    if model.a.len() != model.n + 1 {
        push(
            &mut diags,
            "a",
            "len(a) == n + 1",
            format!("{} coefficients for n = {}", model.a.len(), model.n),
        );
    }
    if model.b.len() != model.n + 1 {
        push(
            &mut diags,
            "b",
            "len(b) == n + 1",
            format!("{} coefficients for n = {}", model.b.len(), model.n),
        );
    }
    if let Some(&an) = model.a.last() {
        if !(an > 0.0) {
            push(&mut diags, "a", "a_n > 0", format!("{an}"));
        }
    }
    if let Some(&bn) = model.b.last() {
        if !(bn > 0.0) {
            push(&mut diags, "b", "b_n > 0", format!("{bn}"));
        }
    }
    for (field, v) in [("rho", model.rho), ("c_T", model.c_t)] {
        if !(v > 0.0) {
            push(&mut diags, field, "> 0", format!("{v}"));
        } else if v != 1.0 {
            // nondimensionalization is the caller's job in this version
            push(
                &mut diags,
                field,
                "== 1 (rescale the model first)",
                format!("{v}"),
            );
        }
    }
    if !(model.kappa1 > 0.0) {
        push(
            &mut diags,
            "kappa1",
            "kappa1 > 0",
            format!("{}", model.kappa1),
        );
    }
    if let Some(k2) = model.kappa2 {
        if !(k2 > 0.0) {
            push(&mut diags, "kappa2", "kappa2 > 0", format!("{k2}"));
        }
    }
    if !model.beta.is_finite() {
        push(&mut diags, "beta", "finite", format!("{}", model.beta));
    }

    match *domain {
        DomainSpec::Rectangle { l1, l2 } => {
            if !(l1 > 0.0) {
                push(&mut diags, "l1", "l1 > 0", format!("{l1}"));
            }
            if !(l2 > 0.0) {
                push(&mut diags, "l2", "l2 > 0", format!("{l2}"));
            }
        }
        DomainSpec::Interval { l } => {
            if !(l > 0.0) {
                push(&mut diags, "l", "l > 0", format!("{l}"));
            }
        }
        DomainSpec::ConcentricDiscs { r0, r } => {
            if !(r0 > 0.0) {
                push(&mut diags, "r0", "r0 > 0", format!("{r0}"));
            }
            if !(r0 < r) {
                push(&mut diags, "r0", "r0 < r", format!("r0 = {r0}, r = {r}"));
            }
            if model.kappa2.is_none() {
                push(
                    &mut diags,
                    "kappa2",
                    "required for concentric discs",
                    "missing".into(),
                );
            }
        }
    }

    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}
