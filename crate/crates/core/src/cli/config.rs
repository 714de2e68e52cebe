//! Experiment configuration: one JSON document per run, tagged by `suite`.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bimodule_derivation::MAX_DIRICHLET_DEGREE;
use crate::error::{Error, Result};
use crate::fock::multichoose;

/// Largest Fock basis the runner will build dense operators on.
pub const MAX_OPERATOR_DIM: usize = 4000;

pub const SUITES: [&str; 9] = [
    "moments",
    "cohomology",
    "ps-trace",
    "deformation-decay",
    "semigroup",
    "smooth-identity",
    "malleable-torus",
    "bimodule",
    "invariant-unitary",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum SuiteConfig {
    Moments(MomentsConfig),
    Cohomology(CohomologyConfig),
    PsTrace(PsTraceConfig),
    DeformationDecay(DeformationConfig),
    Semigroup(SemigroupConfig),
    SmoothIdentity(SmoothingConfig),
    MalleableTorus(MalleabilityConfig),
    Bimodule(BimoduleConfig),
    InvariantUnitary(InvariantConfig),
}

impl SuiteConfig {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteConfig::Moments(_) => "moments",
            SuiteConfig::Cohomology(_) => "cohomology",
            SuiteConfig::PsTrace(_) => "ps-trace",
            SuiteConfig::DeformationDecay(_) => "deformation-decay",
            SuiteConfig::Semigroup(_) => "semigroup",
            SuiteConfig::SmoothIdentity(_) => "smooth-identity",
            SuiteConfig::MalleableTorus(_) => "malleable-torus",
            SuiteConfig::Bimodule(_) => "bimodule",
            SuiteConfig::InvariantUnitary(_) => "invariant-unitary",
        }
    }
}

/// A parsed configuration: run-level fields plus the suite parameters.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub suite: SuiteConfig,
}

impl ExperimentConfig {
    /// Parses a JSON document. `seed` and `out` are run-level keys; every
    /// other key belongs to the suite and unknown ones are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: Value = serde_json::from_str(text)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::InvalidInput("config must be a JSON object".into()))?;
        if !obj.contains_key("suite") {
            return Err(Error::InvalidInput("config is missing the \"suite\" key".into()));
        }
        let seed = match obj.remove("seed") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| Error::InvalidInput("\"seed\" must be a non-negative integer".into()))?,
        };
        let out = match obj.remove("out") {
            None => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(Error::InvalidInput("\"out\" must be a string".into())),
        };
        let suite: SuiteConfig = serde_json::from_value(value)?;
        let cfg = ExperimentConfig { seed, out, suite };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parameter echo for reports.
    pub fn echo(&self) -> Value {
        let mut v = serde_json::to_value(&self.suite).expect("config serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.insert("seed".into(), Value::from(self.seed));
        }
        v
    }

    fn validate(&self) -> Result<()> {
        match &self.suite {
            SuiteConfig::Moments(c) => {
                for &d in &c.modes {
                    operator_size(d, c.cap)?;
                }
            }
            SuiteConfig::Cohomology(c) => {
                if c.free_dims.iter().any(|&d| d == 0 || d > 8) {
                    return Err(Error::InvalidInput("free_dims entries must lie in 1..=8".into()));
                }
            }
            SuiteConfig::PsTrace(c) => {
                if c.identity_caps.len() != c.identity_tols.len() {
                    return Err(Error::InvalidInput("identity_caps and identity_tols differ in length".into()));
                }
                for &cap in &c.identity_caps {
                    operator_size(1, cap)?;
                }
                if let Some(cap) = c.cap {
                    operator_size(1, cap)?;
                }
            }
            SuiteConfig::DeformationDecay(c) => {
                if c.compare_caps.len() != 2 {
                    return Err(Error::InvalidInput("compare_caps must hold two caps".into()));
                }
                for &cap in c.compare_caps.iter().chain(c.cap.iter()) {
                    operator_size(2, cap)?;
                }
            }
            SuiteConfig::Semigroup(c) => {
                operator_size(c.modes, c.cap)?;
                if c.cap < 4.min(c.modes) {
                    return Err(Error::InvalidInput("semigroup cap must be at least min(modes, 4)".into()));
                }
            }
            SuiteConfig::SmoothIdentity(c) => {
                if c.max_dim < 2 || c.max_dim > 64 {
                    return Err(Error::InvalidInput("max_dim must lie in 2..=64".into()));
                }
            }
            SuiteConfig::MalleableTorus(c) => {
                operator_size(2 * c.modes, c.cap)?;
                if c.grid > 4096 {
                    return Err(Error::ResourceCap {
                        size: (c.grid * c.grid) as u128,
                        cap: 4096 * 4096,
                    });
                }
            }
            SuiteConfig::Bimodule(c) => {
                if c.modes == 0 || c.cap < 2 {
                    return Err(Error::InvalidInput("bimodule needs modes ≥ 1 and cap ≥ 2".into()));
                }
                operator_size(c.modes + 1, c.cap)?;
                if let Some(p) = c.polynomials.iter().find(|p| p.len() > MAX_DIRICHLET_DEGREE + 1) {
                    return Err(Error::InvalidInput(format!(
                        "polynomial of degree {} exceeds {MAX_DIRICHLET_DEGREE}",
                        p.len() - 1
                    )));
                }
                if c.mc_samples > 100_000_000 {
                    return Err(Error::ResourceCap {
                        size: c.mc_samples as u128,
                        cap: 100_000_000,
                    });
                }
            }
            SuiteConfig::InvariantUnitary(c) => {
                operator_size(2, c.cap)?;
            }
        }
        Ok(())
    }
}

/// Fails with `ResourceCap` when the truncated Fock space is too large for
/// dense operators.
pub fn operator_size(modes: usize, cap: usize) -> Result<usize> {
    let mut size: u128 = 0;
    for k in 0..=cap {
        size += multichoose(modes, k);
        if size > MAX_OPERATOR_DIM as u128 {
            return Err(Error::ResourceCap {
                size,
                cap: MAX_OPERATOR_DIM,
            });
        }
    }
    Ok(size as usize)
}

fn default_t_grid() -> Vec<f64> {
    vec![0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI]
}

fn default_norms() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    #[serde(default = "MomentsConfig::default_modes")]
    pub modes: Vec<usize>,
    #[serde(default = "MomentsConfig::default_cap")]
    pub cap: usize,
    #[serde(default = "MomentsConfig::default_max_order")]
    pub max_order: usize,
    #[serde(default = "MomentsConfig::default_tol")]
    pub tol: f64,
}

impl MomentsConfig {
    fn default_modes() -> Vec<usize> {
        vec![1, 2, 3]
    }
    fn default_cap() -> usize {
        5
    }
    fn default_max_order() -> usize {
        8
    }
    fn default_tol() -> f64 {
        1e-10
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyConfig {
    /// Dimensions of the random orthogonal representations of `F₂`.
    #[serde(default = "CohomologyConfig::default_free_dims")]
    pub free_dims: Vec<usize>,
    /// Radius of the growth probes.
    #[serde(default = "CohomologyConfig::default_growth_radius")]
    pub growth_radius: usize,
    #[serde(default = "CohomologyConfig::default_fit_tol")]
    pub fit_tol: f64,
    /// Optional `{generators, relators, matrices}` file to analyse as well.
    #[serde(default)]
    pub representation: Option<PathBuf>,
}

impl CohomologyConfig {
    fn default_free_dims() -> Vec<usize> {
        vec![1, 2, 3, 4]
    }
    fn default_growth_radius() -> usize {
        6
    }
    fn default_fit_tol() -> f64 {
        1e-9
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsTraceConfig {
    #[serde(default = "default_norms")]
    pub norms: Vec<f64>,
    /// Fixed cap; the Poisson budget is used when absent.
    #[serde(default)]
    pub cap: Option<usize>,
    #[serde(default = "PsTraceConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "PsTraceConfig::default_identity_caps")]
    pub identity_caps: Vec<usize>,
    #[serde(default = "PsTraceConfig::default_identity_tols")]
    pub identity_tols: Vec<f64>,
}

impl PsTraceConfig {
    fn default_tol() -> f64 {
        1e-6
    }
    fn default_identity_caps() -> Vec<usize> {
        vec![12, 16]
    }
    fn default_identity_tols() -> Vec<f64> {
        vec![1e-3, 1e-5]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationConfig {
    #[serde(default = "default_norms")]
    pub norms: Vec<f64>,
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub cap: Option<usize>,
    #[serde(default = "DeformationConfig::default_tol")]
    pub tol: f64,
    /// Pair of caps whose residuals must decrease.
    #[serde(default = "DeformationConfig::default_compare_caps")]
    pub compare_caps: Vec<usize>,
}

impl DeformationConfig {
    fn default_tol() -> f64 {
        1e-5
    }
    fn default_compare_caps() -> Vec<usize> {
        vec![12, 16]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupConfig {
    #[serde(default = "SemigroupConfig::default_modes")]
    pub modes: usize,
    #[serde(default = "SemigroupConfig::default_cap")]
    pub cap: usize,
    #[serde(default = "SemigroupConfig::default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default = "SemigroupConfig::default_alpha_grid")]
    pub alpha_grid: Vec<f64>,
    #[serde(default = "SemigroupConfig::default_law_tol")]
    pub law_tol: f64,
    #[serde(default = "SemigroupConfig::default_formula_tol")]
    pub formula_tol: f64,
}

impl SemigroupConfig {
    fn default_modes() -> usize {
        4
    }
    fn default_cap() -> usize {
        4
    }
    fn default_t_grid() -> Vec<f64> {
        vec![0.0, 0.1, 0.5, 1.0, 2.0]
    }
    fn default_alpha_grid() -> Vec<f64> {
        vec![0.5, 1.0, 10.0, 1000.0]
    }
    fn default_law_tol() -> f64 {
        1e-14
    }
    fn default_formula_tol() -> f64 {
        1e-10
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingConfig {
    #[serde(default = "SmoothingConfig::default_count")]
    pub count: usize,
    #[serde(default = "SmoothingConfig::default_max_dim")]
    pub max_dim: usize,
    #[serde(default = "SmoothingConfig::default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default = "SmoothingConfig::default_tol")]
    pub tol: f64,
}

impl SmoothingConfig {
    fn default_count() -> usize {
        10
    }
    fn default_max_dim() -> usize {
        6
    }
    fn default_t_grid() -> Vec<f64> {
        vec![0.1, 1.0]
    }
    fn default_tol() -> f64 {
        1e-6
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MalleabilityConfig {
    #[serde(default = "MalleabilityConfig::default_modes")]
    pub modes: usize,
    #[serde(default = "MalleabilityConfig::default_cap")]
    pub cap: usize,
    #[serde(default = "MalleabilityConfig::default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default = "MalleabilityConfig::default_grid")]
    pub grid: usize,
    #[serde(default = "MalleabilityConfig::default_tol")]
    pub tol: f64,
}

impl MalleabilityConfig {
    fn default_modes() -> usize {
        2
    }
    fn default_cap() -> usize {
        6
    }
    fn default_t_grid() -> Vec<f64> {
        vec![0.0, 0.37, 1.0]
    }
    fn default_grid() -> usize {
        256
    }
    fn default_tol() -> f64 {
        1e-12
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleConfig {
    #[serde(default = "BimoduleConfig::default_modes")]
    pub modes: usize,
    #[serde(default = "BimoduleConfig::default_cap")]
    pub cap: usize,
    #[serde(default = "BimoduleConfig::default_isometry_samples")]
    pub isometry_samples: usize,
    #[serde(default = "BimoduleConfig::default_leibniz_degree")]
    pub leibniz_degree: usize,
    /// Polynomials (coefficient lists, constant term first) for the
    /// Dirichlet-form comparison.
    #[serde(default = "BimoduleConfig::default_polynomials")]
    pub polynomials: Vec<Vec<f64>>,
    #[serde(default = "BimoduleConfig::default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default = "BimoduleConfig::default_commutation_tol")]
    pub commutation_tol: f64,
    #[serde(default = "BimoduleConfig::default_isometry_tol")]
    pub isometry_tol: f64,
    #[serde(default = "BimoduleConfig::default_covariance_tol")]
    pub covariance_tol: f64,
}

impl BimoduleConfig {
    fn default_modes() -> usize {
        2
    }
    fn default_cap() -> usize {
        8
    }
    fn default_isometry_samples() -> usize {
        100
    }
    fn default_leibniz_degree() -> usize {
        8
    }
    fn default_polynomials() -> Vec<Vec<f64>> {
        vec![vec![0.0, 1.0], vec![-1.0, 0.0, 1.0], vec![0.0, 0.0, 0.0, 1.0], vec![0.5, -1.0, 0.25, 0.0, 0.1]]
    }
    fn default_mc_samples() -> usize {
        1_000_000
    }
    fn default_commutation_tol() -> f64 {
        1e-10
    }
    fn default_isometry_tol() -> f64 {
        1e-12
    }
    fn default_covariance_tol() -> f64 {
        1e-8
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantConfig {
    #[serde(default = "InvariantConfig::default_angle")]
    pub angle: f64,
    #[serde(default = "InvariantConfig::default_cap")]
    pub cap: usize,
    #[serde(default = "InvariantConfig::default_lambda")]
    pub lambda: f64,
    #[serde(default = "InvariantConfig::default_tol")]
    pub tol: f64,
    /// Required gap `1 − |τ(u)|`.
    #[serde(default = "InvariantConfig::default_nontriviality")]
    pub nontriviality: f64,
}

impl InvariantConfig {
    fn default_angle() -> f64 {
        1.0
    }
    fn default_cap() -> usize {
        10
    }
    fn default_lambda() -> f64 {
        0.5
    }
    fn default_tol() -> f64 {
        1e-6
    }
    fn default_nontriviality() -> f64 {
        1e-3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_configs_parse_for_every_suite() {
        for s in SUITES {
            let cfg = ExperimentConfig::from_json(&format!(r#"{{"suite": "{s}"}}"#)).unwrap();
            assert_eq!(cfg.suite.name(), s);
            assert_eq!(cfg.seed, 0);
        }
    }

    #[test]
    fn run_level_keys() {
        let cfg = ExperimentConfig::from_json(r#"{"suite": "moments", "seed": 9, "out": "x", "cap": 6}"#).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.out, Some(PathBuf::from("x")));
        match cfg.suite {
            SuiteConfig::Moments(m) => assert_eq!(m.cap, 6),
            _ => unreachable!(),
        }
    }

    #[test]
    fn rejections() {
        assert!(ExperimentConfig::from_json("{}").is_err());
        assert!(ExperimentConfig::from_json("").is_err());
        assert!(ExperimentConfig::from_json(r#"{"suite": "nope"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"suite": "moments", "bogus": 1}"#).is_err());
        assert!(matches!(
            ExperimentConfig::from_json(r#"{"suite": "moments", "modes": [6], "cap": 12}"#),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn echo_round_trips() {
        let cfg = ExperimentConfig::from_json(r#"{"suite": "ps-trace", "seed": 3}"#).unwrap();
        let echo = cfg.echo();
        assert_eq!(echo["suite"], "ps-trace");
        assert_eq!(echo["seed"], 3);
        let again = ExperimentConfig::from_json(&echo.to_string()).unwrap();
        assert_eq!(again.echo(), echo);
    }
}
