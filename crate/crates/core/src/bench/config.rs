//! TOML run files. Top-level keys set defaults; each `[run.<name>]` section
//! pairs one problem with a list of solvers.
//!
//! ```toml
//! tol = 1e-8
//!
//! [run.bratu]
//! problem = "bratu"
//! grid_n = 100
//! x0 = 1.0
//! solvers = ["nltgcr-adaptive", "nltgcr-nonlinear"]
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub run: BTreeMap<String, RunConfig>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    #[serde(default)]
    pub solvers: Vec<String>,
    pub repetitions: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    /// Constant initial guess (Bratu, logistic regression, linear).
    pub x0: Option<f64>,

    // problem parameters
    pub grid_n: Option<usize>,
    pub lambda: Option<f64>,
    pub scaled: Option<bool>,
    pub cells: Option<usize>,
    pub perturbation: Option<f64>,
    pub samples: Option<usize>,
    pub features: Option<usize>,
    pub lambda_reg: Option<f64>,
    pub data: Option<PathBuf>,
    pub kind: Option<String>,
    pub n: Option<usize>,

    // solver parameters
    pub m: Option<usize>,
    pub beta: Option<f64>,
    /// `0` disables periodic restarts.
    pub restart_every: Option<usize>,
    pub adaptive_threshold: Option<f64>,
    pub linesearch: Option<bool>,
    /// `"frechet"` or `"exact"`.
    pub jv: Option<String>,
    pub inner_m: Option<usize>,
    pub eta0: Option<f64>,
    /// `"ew"` (Eisenstat–Walker) or `"fixed"`.
    pub forcing: Option<String>,
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}
