//! Experiment manifest: one TOML document driving every CLI subcommand.
//!
//! ```toml
//! schema_version = 1
//! seed = 7
//! output_dir = "out"
//! points = "grid.csv"          # optional input point set
//!
//! [environment.domain]
//! lower = [0.0, 0.0]
//! upper = [1.0, 1.0]
//!
//! [[environment.obstacles]]
//! shape = "box"
//! lower = [0.4, 0.4]
//! upper = [0.6, 0.6]
//!
//! [partition]
//! algorithm = "onnrao"
//! agents = 25
//!
//! [pso]
//! methods = ["random", "cvt", "rao", "onnrao"]
//! functions = ["rosenbrock", "griewank", "schwefel"]
//! repeats = 1000
//! ```
//!
//! Every table rejects unknown keys. The top-level `seed` is the master seed:
//! the `seed` keys inside `[partition]`, `[cvt]`, `[evaluation]` and
//! `[pso.swarm]` are replaced by values derived from it.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cvt::CvtConfig;
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::evaluation::{EvalOptions, Method, MethodConfigs};
use crate::partitioner::{Algorithm, PartitionConfig};
use crate::pso::{FunctionKind, PsoConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Input point set for commands that analyse stored placements.
    pub points: Option<PathBuf>,
    /// Unit square when absent.
    pub environment: Option<Environment>,
    pub partition: PartitionConfig,
    pub cvt: CvtConfig,
    pub evaluation: EvaluationSection,
    pub pdf: PdfSection,
    pub fill: FillSection,
    pub bench: BenchSection,
    pub pso: PsoSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: 0,
            output_dir: PathBuf::from("out"),
            points: None,
            environment: None,
            partition: PartitionConfig::default(),
            cvt: CvtConfig::default(),
            evaluation: EvaluationSection::default(),
            pdf: PdfSection::default(),
            fill: FillSection::default(),
            bench: BenchSection::default(),
            pso: PsoSection::default(),
        }
    }
}

/// Options for `evaluate`, `scree`, `density` and `duals`. When no `points`
/// file is given, a placement of `agents` agents is generated with `method`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationSection {
    pub method: Method,
    pub agents: usize,
    pub options: EvalOptions,
}

impl Default for EvaluationSection {
    fn default() -> Self {
        Self {
            method: Method::Onnrao,
            agents: 100,
            options: EvalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PdfSection {
    pub methods: Vec<Method>,
    pub agents: usize,
    pub trials: usize,
}

impl Default for PdfSection {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            agents: 13,
            trials: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FillSection {
    pub methods: Vec<Method>,
    pub agents: usize,
    pub max_executions: usize,
    pub outer_trials: usize,
}

impl Default for FillSection {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            agents: 13,
            max_executions: 1000,
            outer_trials: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchSection {
    pub algorithms: Vec<Algorithm>,
    pub dims: Vec<usize>,
    pub agents: Vec<usize>,
    pub iters: usize,
}

impl Default for BenchSection {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Rao, Algorithm::Onnrao],
            dims: vec![2, 3, 4, 5],
            agents: vec![25, 50, 100, 200],
            iters: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsoSection {
    pub methods: Vec<Method>,
    pub functions: Vec<FunctionKind>,
    pub dims: usize,
    pub repeats: usize,
    /// Also write every run's best position to the JSON bundle.
    pub records: bool,
    pub swarm: PsoConfig,
}

impl Default for PsoSection {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            functions: vec![FunctionKind::Rosenbrock, FunctionKind::Griewank, FunctionKind::Schwefel],
            dims: 2,
            repeats: 1000,
            records: true,
            swarm: PsoConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    /// Parse a manifest; a relative `points` path is resolved against the
    /// manifest's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let (Some(p), Some(dir)) = (&cfg.points, path.parent()) {
            if p.is_relative() {
                cfg.points = Some(dir.join(p));
            }
        }
        Ok(cfg)
    }

    pub fn environment(&self) -> Environment {
        self.environment.clone().unwrap_or_else(|| Environment::unit(2))
    }

    pub fn method_configs(&self) -> MethodConfigs {
        MethodConfigs {
            partition: self.partition.clone(),
            cvt: self.cvt.clone(),
        }
    }

    /// Structural checks shared by every subcommand.
    pub fn validate(&self) -> Result<()> {
        if let Some(env) = &self.environment {
            env.validate()?;
        }
        self.partition.validate()?;
        self.pso.swarm.validate()?;
        if let Some(p) = &self.points {
            if !p.is_file() {
                return Err(Error::InvalidConfig(format!(
                    "points file `{}` does not exist",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    /// Path of an artifact inside the output directory.
    pub fn output(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }
}
