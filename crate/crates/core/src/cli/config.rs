//! Run configuration: a sectioned key/value file (TOML syntax) with
//! `[model]`, `[domain]`, `[sweep]`, `[evolve]`, `[fit]` and `[output]`
//! tables. Unknown keys anywhere are errors.

use crate::model::{taylor_coefficients, DomainSpec, PhaseLagModel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::sync::Arc<std::io::Error>,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub domain: DomainSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub evolve: EvolveSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: usize,
    /// Explicit coefficients; alternative to the tau_* presets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cond: Option<f64>,
    pub kappa1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa2: Option<f64>,
    pub beta: f64,
    #[serde(default = "one")]
    pub rho: f64,
    #[serde(default = "one")]
    pub c_t: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// log10 bounds of the frequency grid.
    #[serde(default = "default_decades")]
    pub decades: [f64; 2],
    #[serde(default = "default_ppd")]
    pub points_per_decade: usize,
    /// Case 1 mode cutoff K.
    #[serde(default = "default_modes")]
    pub modes: usize,
    /// Case 2 mesh width; must align R0 and R with cell faces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Sweep B = A - 2 c0 I instead of A.
    #[serde(default = "default_true")]
    pub shifted: bool,
    /// Explicit shift; default is max(0, numerical abscissa).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    /// Re-run at doubled resolution (2K or h/2) and report the drift.
    #[serde(default)]
    pub convergence_check: bool,
}

fn default_decades() -> [f64; 2] {
    [0.0, 6.0]
}

fn default_ppd() -> usize {
    20
}

fn default_modes() -> usize {
    200
}

fn default_true() -> bool {
    true
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            decades: default_decades(),
            points_per_decade: default_ppd(),
            modes: default_modes(),
            h: None,
            shifted: true,
            c0: None,
            convergence_check: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSection {
    #[serde(default = "default_preset")]
    pub preset: String,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
}

fn default_preset() -> String {
    "plate".into()
}

fn default_dt() -> f64 {
    1e-3
}

fn default_t_final() -> f64 {
    1.0
}

impl Default for EvolveSection {
    fn default() -> Self {
        EvolveSection {
            preset: default_preset(),
            dt: default_dt(),
            t_final: default_t_final(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    /// log10 window; default is the top three decades of the sweep grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    /// Fit an existing sweep CSV instead of running a sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default = "default_true")]
    pub svg: bool,
}

fn default_dir() -> String {
    "out".into()
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: default_dir(),
            svg: true,
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            source: std::sync::Arc::new(e),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    /// Resolve coefficient presets and build the validated model/domain pair.
    pub fn build_model(&self) -> Result<(PhaseLagModel, DomainSpec), ConfigError> {
        let m = &self.model;
        let (a, b) = match (&m.a, &m.b, m.tau_q, m.tau_theta, m.k_cond) {
            (Some(a), Some(b), None, None, None) => (a.clone(), b.clone()),
            (None, None, Some(tq), Some(tt), kc) => {
                taylor_coefficients(tq, tt, kc.unwrap_or(1.0), m.n)
                    .map_err(|e| ConfigError::Invalid(e.to_string()))?
            }
            (Some(_), Some(_), tq, tt, _) if tq.is_some() || tt.is_some() => {
                return Err(ConfigError::Invalid(
                    "give either explicit a/b or tau_q/tau_theta, not both".into(),
                ))
            }
            _ => {
                return Err(ConfigError::Invalid(
                    "model needs either both a and b, or both tau_q and tau_theta".into(),
                ))
            }
        };
        let model = PhaseLagModel {
            n: m.n,
            a,
            b,
            rho: m.rho,
            c_t: m.c_t,
            kappa1: m.kappa1,
            kappa2: m.kappa2,
            beta: m.beta,
        };
        let domain = self.build_domain()?;
        crate::model::validate(&model, &domain).map_err(|diags| {
            ConfigError::Invalid(
                diags
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        Ok((model, domain))
    }

    fn build_domain(&self) -> Result<DomainSpec, ConfigError> {
        let d = &self.domain;
        let need = |opt: Option<f64>, key: &str| {
            opt.ok_or_else(|| {
                ConfigError::Invalid(format!("domain kind '{}' needs key '{key}'", d.kind))
            })
        };
        match d.kind.as_str() {
            "rectangle" => Ok(DomainSpec::Rectangle {
                l1: need(d.l1, "l1")?,
                l2: need(d.l2, "l2")?,
            }),
            "interval" => Ok(DomainSpec::Interval { l: need(d.l, "l")? }),
            "concentric_discs" => Ok(DomainSpec::ConcentricDiscs {
                r0: need(d.r0, "r0")?,
                r: need(d.r, "r")?,
            }),
            other => Err(ConfigError::Invalid(format!(
                "unknown domain kind '{other}' (rectangle | interval | concentric_discs)"
            ))),
        }
    }

    /// 1 for rectangle/interval, 2 for concentric discs.
    pub fn case(&self) -> u8 {
        if self.domain.kind == "concentric_discs" {
            2
        } else {
            1
        }
    }

    /// The fit window, defaulting to the top three decades of the sweep.
    pub fn fit_window(&self) -> (f64, f64) {
        match self.fit.window {
            Some([lo, hi]) => (lo, hi),
            None => {
                let hi = self.sweep.decades[1];
                let lo = (hi - 3.0).max(self.sweep.decades[0]);
                (lo, hi)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[model]
n = 1
a = [1.0, 0.5]
b = [1.0, 0.25]
kappa1 = 1.0
beta = 1.0

[domain]
kind = "rectangle"
l1 = 1.0
l2 = 1.0
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(cfg.sweep.points_per_decade, 20);
        assert_eq!(cfg.sweep.decades, [0.0, 6.0]);
        assert_eq!(cfg.case(), 1);
        let (model, domain) = cfg.build_model().unwrap();
        assert_eq!(model.n, 1);
        assert!(matches!(domain, DomainSpec::Rectangle { .. }));
    }

    #[test]
    fn unknown_keys_are_errors() {
        let text = MINIMAL.replace("beta = 1.0", "beta = 1.0\nbogus_key = 3");
        match RunConfig::parse(&text) {
            Err(ConfigError::Parse(msg)) => assert!(msg.contains("bogus_key"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn taylor_preset_path() {
        let text = r#"
[model]
n = 1
tau_q = 0.5
tau_theta = 0.25
k_cond = 1.0
kappa1 = 1.0
beta = 0.0

[domain]
kind = "interval"
l = 3.0
"#;
        let cfg = RunConfig::parse(text).unwrap();
        let (model, _) = cfg.build_model().unwrap();
        assert_eq!(model.a, vec![1.0, 0.5]);
        assert_eq!(model.b, vec![1.0, 0.25]);
    }

    #[test]
    fn both_coefficient_paths_rejected() {
        let text = MINIMAL.replace("beta = 1.0", "beta = 1.0\ntau_q = 0.5\ntau_theta = 0.2");
        let cfg = RunConfig::parse(&text).unwrap();
        assert!(matches!(cfg.build_model(), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn invalid_coefficients_reported() {
        let text = MINIMAL.replace("a = [1.0, 0.5]", "a = [1.0, 0.0]");
        let cfg = RunConfig::parse(&text).unwrap();
        match cfg.build_model() {
            Err(ConfigError::Invalid(msg)) => assert!(msg.contains("a_n > 0"), "{msg}"),
            other => panic!("expected invalid-model error, got {other:?}"),
        }
    }

    #[test]
    fn default_fit_window_is_top_three_decades() {
        let cfg = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(cfg.fit_window(), (3.0, 6.0));
    }
}
