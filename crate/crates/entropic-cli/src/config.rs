//! Experiment configuration: JSON files, command-line overrides and presets.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Deserializer, Serialize};

use crate::CliError;

/// Flat experiment description. Every field is optional so that presets,
/// config files and flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Named preset supplying defaults for the remaining fields.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// advection, monomial, sainte-marie, lake-at-rest, euler, euler-2d;
    /// `check` also accepts coupled-burgers and shallow-water.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    /// ec, ec1, ec2, ec-kep, es, es-kep or central, depending on the system.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux: Option<String>,
    /// Flux parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    /// Monomial exponent of the conserved flux part.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Monomial exponent of the nonconservative part.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Polynomial degree of the GLL operator.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Element count; a comma-separated list for `convergence`.
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<usize>>,
    /// Courant number; the step is `cfl · min(Δx/λ) / (2p + 1)`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl: Option<f64>,
    /// Final time.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tfinal: Option<f64>,
    /// Initial condition of the selected system.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ic: Option<String>,
    /// Entropy pair for Euler checks: `thermodynamic` or `total-energy`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<String>,
    /// Condition for `check`: `ec` or `es`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    /// Random state pairs drawn by `check`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Seed of the random state and initial-data generators.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Record diagnostics every this many steps (0: start and end only).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub every: Option<usize>,
    /// Time integrator: `ssprk104` or `rk4`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

fn one_or_many<'de, D, T>(de: D) -> Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Ok(Option::<OneOrMany<T>>::deserialize(de)?.map(|v| match v {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(xs) => xs,
    }))
}

macro_rules! layer {
    ($base:expr, $top:expr, $($field:ident),*) => {
        ExperimentConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overlay(self, top: Self) -> Self {
        layer!(
            self, top, preset, system, flux, alpha, m, n, degree, elements, cfl, tfinal, ic, entropy, condition,
            samples, seed, every, method, output
        )
    }

    /// Expand the preset, if any, underneath the explicit fields.
    pub fn resolve(self) -> Result<Self, CliError> {
        match &self.preset {
            None => Ok(self),
            Some(name) => {
                let p = preset(name).ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))?;
                Ok(p.config.overlay(self))
            }
        }
    }

    pub fn require_system(&self) -> Result<&str, CliError> {
        self.system
            .as_deref()
            .ok_or_else(|| CliError::Config("no system given (use --system or --preset)".into()))
    }

    pub fn single_elements(&self, default: usize) -> Result<usize, CliError> {
        match self.elements.as_deref() {
            None => Ok(default),
            Some([k]) => Ok(*k),
            Some(_) => Err(CliError::Config("`run` takes a single element count".into())),
        }
    }
}

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ExperimentConfig,
}

fn base(system: &str, flux: &str, degree: usize, elements: &[usize], cfl: f64) -> ExperimentConfig {
    ExperimentConfig {
        system: Some(system.into()),
        flux: Some(flux.into()),
        degree: Some(degree),
        elements: Some(elements.to_vec()),
        cfl: Some(cfl),
        ..Default::default()
    }
}

pub fn presets() -> Vec<Preset> {
    vec![
        Preset {
            name: "advection",
            description: "variable-coefficient advection on [-1,1], 32 elements, CFL 0.01, T = 1",
            config: ExperimentConfig { tfinal: Some(1.0), ..base("advection", "ec", 3, &[32], 0.01) },
        },
        Preset {
            name: "advection-convergence",
            description: "uniform-speed advection, p = 1, K = 8, 16, 32, T = 1",
            config: ExperimentConfig {
                tfinal: Some(1.0),
                ic: Some("uniform".into()),
                ..base("advection", "ec", 1, &[8, 16, 32], 0.1)
            },
        },
        Preset {
            name: "monomial-ec1",
            description: "monomial (m, n) = (4, 5) with the first scheme, 32 elements, CFL 0.001, T = Tmax/2",
            config: ExperimentConfig { m: Some(4), n: Some(5), ..base("monomial", "ec1", 3, &[32], 0.001) },
        },
        Preset {
            name: "monomial-ec2",
            description: "monomial (m, n) = (4, 4) with the second scheme, alpha = 1/2, 32 elements, CFL 0.001, T = Tmax/2",
            config: ExperimentConfig {
                m: Some(4),
                n: Some(4),
                alpha: Some(vec![0.5]),
                ..base("monomial", "ec2", 3, &[32], 0.001)
            },
        },
        Preset {
            name: "sainte-marie",
            description: "Sainte-Marie layer on [0,1], 128 elements, CFL 0.1, T = 0.1, g = 1, alpha = (1/2, 1, 2/3)",
            config: ExperimentConfig {
                tfinal: Some(0.1),
                alpha: Some(vec![0.5, 1.0, 2.0 / 3.0]),
                ..base("sainte-marie", "ec", 3, &[128], 0.1)
            },
        },
        Preset {
            name: "wb2d",
            description: "lake at rest on a warped 4x4 wall-bounded mesh of [0,sqrt2]^2, CFL 1, T = 100",
            config: ExperimentConfig { tfinal: Some(100.0), ..base("lake-at-rest", "ec", 3, &[16], 1.0) },
        },
        Preset {
            name: "free-stream",
            description: "constant Euler state on a warped periodic 4x4 mesh, dissipative faces, CFL 0.1, T = 1",
            config: ExperimentConfig {
                tfinal: Some(1.0),
                ic: Some("free-stream".into()),
                ..base("euler-2d", "es", 3, &[16], 0.1)
            },
        },
        Preset {
            name: "pressure-equilibrium",
            description: "Euler with random density, unit velocity and pressure on [0,1], 16 elements",
            config: ExperimentConfig {
                tfinal: Some(0.1),
                ic: Some("pressure-equilibrium".into()),
                seed: Some(7),
                ..base("euler", "ec-kep", 4, &[16], 0.5)
            },
        },
        Preset {
            name: "potential",
            description: "Euler in the potential phi = x on [0,1], total energy tracked, CFL 0.01, T = 0.5",
            config: ExperimentConfig {
                tfinal: Some(0.5),
                ic: Some("potential".into()),
                ..base("euler", "ec-kep", 3, &[16], 0.01)
            },
        },
        Preset {
            name: "manufactured",
            description: "Euler manufactured solution on the warped mesh, p = 3, K = 16, 64, 256, T = 2",
            config: ExperimentConfig {
                tfinal: Some(2.0),
                ic: Some("manufactured".into()),
                ..base("euler-2d", "ec-kep", 3, &[16, 64, 256], 0.1)
            },
        },
    ]
}

pub fn preset(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name == name)
}
