//! The JSON run configuration.
//!
//! ```json
//! {
//!   "grid": {"dim": 1, "n": 1024, "box_length": 40.0},
//!   "problem": {"s": 0.5, "c": 1.0,
//!               "nonlinearity": {"kind": "pure_power", "ell": 1.0, "K": 0.3333333333333333}},
//!   "solver": {"max_iters": 20000, "seed": 7},
//!   "output": {"dir": "out"}
//! }
//! ```
//!
//! Every section rejects unknown keys. Solver keys left out take the
//! library defaults.

use std::path::{Path, PathBuf};

use fracvar::{ConstraintMode, GridSpec, InitKind, NonlinearitySpec, SolveConfig};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub problem: ProblemSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub s: f64,
    pub c: f64,
    pub nonlinearity: NonlinearitySpec,
    /// Admit `s = 1`.
    #[serde(default)]
    pub oracle_mode: bool,
    /// Norm-form Gagliardo–Nirenberg constant for critical problems.
    #[serde(default)]
    pub gn_constant: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub step: Option<f64>,
    pub precondition: Option<bool>,
    pub max_iters: Option<usize>,
    pub tol_energy: Option<f64>,
    pub tol_residual: Option<f64>,
    pub symmetrize_every: Option<usize>,
    pub seed: Option<u64>,
    pub init: Option<InitKind>,
    pub inequality_mode: Option<ConstraintMode>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "yes")]
    pub emit_profile: bool,
    #[serde(default = "yes")]
    pub emit_json: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_dir(), emit_profile: true, emit_json: true }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

impl RunConfig {
    /// Parses and validates a document, keeping its text for echoing.
    pub fn parse(text: &str) -> CliResult<(RunConfig, Box<RawValue>)> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let raw = RawValue::from_string(text.trim().to_string()).map_err(|e| CliError::Config(e.to_string()))?;
        config.solve_config().validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok((config, raw))
    }

    pub fn load(path: &Path) -> CliResult<(RunConfig, Box<RawValue>)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn solve_config(&self) -> SolveConfig {
        let p = &self.problem;
        let v = &self.solver;
        let mut c = SolveConfig::new(self.grid, p.s, p.nonlinearity, p.c);
        c.oracle_mode = p.oracle_mode;
        c.gn_constant = p.gn_constant;
        c.step = v.step.unwrap_or(c.step);
        c.precondition = v.precondition.unwrap_or(c.precondition);
        c.max_iters = v.max_iters.unwrap_or(c.max_iters);
        c.tol_energy = v.tol_energy.unwrap_or(c.tol_energy);
        c.tol_residual = v.tol_residual.unwrap_or(c.tol_residual);
        c.symmetrize_every = v.symmetrize_every.unwrap_or(c.symmetrize_every);
        c.seed = v.seed.unwrap_or(c.seed);
        c.init = v.init.unwrap_or(c.init);
        c.inequality_mode = v.inequality_mode.unwrap_or(c.inequality_mode);
        c.threads = v.threads.unwrap_or(c.threads);
        c
    }
}
