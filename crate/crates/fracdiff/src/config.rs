#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Experiment manifests.
//!
//! A manifest is a TOML file; every key has a default, so an empty file
//! describes the linear problem with `alpha = 0.5`, `N = 10` and `dx = 0.005`.
//!
//! ```toml
//! problem = "sqrt"          # "linear" or "sqrt"
//! alpha = 1.5
//! n = 10
//!
//! [space]
//! dx = 0.005                # or: m = 199 interior nodes
//!
//! [time]
//! nodes = "chebyshev-gauss" # "chebyshev", "chebyshev-gauss", "uniform"
//! basis = "jacobi"          # "jacobi" or "power"
//! flavor = "auto-zero-ic"   # "auto-zero-ic", "rl", "caputo"
//! t_end = 2.0
//!
//! [newton]
//! tol = 1e-12
//! max_iter = 50
//!
//! [reference]
//! n_bar = 13
//! series_tol = 1e-12
//!
//! [sweep]
//! n = [2, 3, 4, 5]
//! alphas = [0.1, 0.5, 0.9, 1.1, 1.5, 1.9]
//!
//! [output]
//! dir = "out"
//! format = "csv"            # "csv" or "json"
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use fracdiff_core::collocation::{BasisChoice, NodeKind, Variant};
use fracdiff_core::solver::{NewtonOptions, Nonlinearity};
use fracdiff_core::spatial::SpaceGrid;
use fracdiff_core::FractionalOrder;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{config, HarnessError, Result};

/// Default orders of a table run.
pub const TABLE_ALPHAS: [f64; 6] = [0.1, 0.5, 0.9, 1.1, 1.5, 1.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// `K(u) = u`, compared against the series solution.
    Linear,
    /// `K(u) = sqrt(u)`, compared against a run with `n_bar` time nodes.
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nodes {
    /// Chebyshev-Gauss-Lobatto points.
    Chebyshev,
    /// Roots of `T_{N-1}` plus both endpoints.
    ChebyshevGauss,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Jacobi,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    AutoZeroIc,
    Rl,
    Caputo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        Self { dx: Some(0.005), m: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    pub nodes: Nodes,
    pub basis: Basis,
    pub flavor: Flavor,
    pub t_end: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { nodes: Nodes::Chebyshev, basis: Basis::Jacobi, flavor: Flavor::AutoZeroIc, t_end: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NewtonConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        let d = NewtonOptions::default();
        Self { tol: d.tol, max_iter: d.max_iter }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceConfig {
    pub n_bar: usize,
    pub series_tol: f64,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self { n_bar: 13, series_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("."), format: Format::Csv }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub alpha: f64,
    pub n: usize,
    pub space: SpaceConfig,
    pub time: TimeConfig,
    pub newton: NewtonConfig,
    pub reference: ReferenceConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Linear,
            alpha: 0.5,
            n: 10,
            space: SpaceConfig::default(),
            time: TimeConfig::default(),
            newton: NewtonConfig::default(),
            reference: ReferenceConfig::default(),
            sweep: SweepConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Read { path: path.to_owned(), source })?;
        Self::from_toml_str(&text).map_err(|source| HarnessError::Parse { path: path.to_owned(), source })
    }

    pub fn validate(&self) -> Result<()> {
        self.order()?;
        if self.n == 0 {
            return config("n must be at least 1");
        }
        if !(self.time.t_end.is_finite() && self.time.t_end > 0.0) {
            return config("time.t_end must be positive");
        }
        self.space_grid()?;
        if !(self.newton.tol > 0.0) || self.newton.max_iter == 0 {
            return config("newton.tol must be positive and newton.max_iter at least 1");
        }
        if !(self.reference.series_tol > 0.0) {
            return config("reference.series_tol must be positive");
        }
        if self.problem == Problem::Sqrt && self.reference.n_bar == 0 {
            return config("reference.n_bar must be at least 1");
        }
        if self.sweep.n.windows(2).any(|w| w[1] <= w[0]) {
            return config("sweep.n must be strictly increasing");
        }
        for &a in &self.sweep.alphas {
            if FractionalOrder::new(a).is_err() || a >= 2.0 {
                return config(format!("sweep.alphas entry {a} is not in (0,1) or (1,2)"));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> Result<FractionalOrder> {
        if !(self.alpha > 0.0 && self.alpha < 2.0) || self.alpha == 1.0 {
            return config(format!("alpha = {} is not in (0,1) or (1,2)", self.alpha));
        }
        FractionalOrder::new(self.alpha).or_else(|e| config(e.to_string()))
    }

    pub fn space_grid(&self) -> Result<SpaceGrid> {
        let r = match (self.space.dx, self.space.m) {
            (Some(_), Some(_)) => return config("give either space.dx or space.m, not both"),
            (Some(dx), None) => SpaceGrid::with_spacing(0.0, 1.0, dx),
            (None, Some(m)) => SpaceGrid::new(0.0, 1.0, m),
            (None, None) => return config("space.dx or space.m is required"),
        };
        r.or_else(|e| config(format!("space grid: {e}")))
    }

    pub fn node_kind(&self) -> NodeKind {
        match self.time.nodes {
            Nodes::Chebyshev => NodeKind::ChebyshevLobatto,
            Nodes::ChebyshevGauss => NodeKind::ChebyshevGauss,
            Nodes::Uniform => NodeKind::Uniform,
        }
    }

    pub fn variant(&self) -> Variant {
        match self.time.flavor {
            Flavor::AutoZeroIc => Variant::ZeroIc,
            Flavor::Rl => Variant::RiemannLiouville,
            Flavor::Caputo => Variant::Caputo,
        }
    }

    pub fn basis_choice(&self) -> BasisChoice {
        match self.time.basis {
            Basis::Jacobi => BasisChoice::Jacobi,
            Basis::Power => BasisChoice::PowerAlpha,
        }
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        match self.problem {
            Problem::Linear => Nonlinearity::Identity,
            Problem::Sqrt => Nonlinearity::SquareRoot,
        }
    }

    pub fn newton_options(&self) -> NewtonOptions {
        NewtonOptions { tol: self.newton.tol, max_iter: self.newton.max_iter }
    }

    /// Orders of a table run; [`TABLE_ALPHAS`] when none are configured.
    pub fn table_alphas(&self) -> Vec<f64> {
        if self.sweep.alphas.is_empty() {
            TABLE_ALPHAS.to_vec()
        } else {
            self.sweep.alphas.clone()
        }
    }

    /// The same experiment at another order or resolution.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..self.clone() }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    /// First 16 hex digits of the SHA-256 of every setting that affects the
    /// numbers (output location and format excluded).
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputConfig::default();
        let canonical = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
