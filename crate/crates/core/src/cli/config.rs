//! Run configuration: command-line flags merged over an optional JSON file.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dispersion::{CasePoint, ExteriorReduction, SearchOptions, SweepParam};
use crate::error::{Error, Result};
use crate::kinematics::{LayerStack, MaterialParams, WavenumberConvention};

use super::presets::PresetOptions;

fn is_false(b: &bool) -> bool {
    !*b
}

/// Material, loading and search flags shared by the computing subcommands.
#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CommonArgs {
    /// JSON file with the same keys as the long flags; flags take precedence
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Eulerian wavenumber k (K = lambda k unless --wavenumber-convention lagrangian)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    /// Dimensionless Lagrangian induction normal to the surface
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_bar: Option<f64>,
    /// Shear modulus of the upper layer over that of the substrate
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_ratio: Option<f64>,
    /// Magnetic alpha of both layers
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Magnetic beta of both layers
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_u: Option<f64>,
    /// Mooney-Rivlin gamma of both layers (default 1)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_u: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_step: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bisection_tol: Option<f64>,
    /// paper-12 or reduced
    #[arg(long, value_name = "MODE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exterior_reduction: Option<ExteriorReduction>,
    /// eulerian or lagrangian
    #[arg(long, value_name = "MODE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavenumber_convention: Option<WavenumberConvention>,
    /// CSV destination (standard output if absent)
    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Exit with status 1 if any point fails numerically
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub strict: bool,
}

/// A one-dimensional grid.
#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Geometric spacing
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub log: bool,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct FigureArgs {
    /// Upper end of the induction grid for fig3, fig4, fig5, fig7, fig8 (default 2)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_max: Option<f64>,
    /// fig6: apply alpha = beta = 0.5 to the substrate as well (default substrate (0, 1))
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub fig6_both: bool,
    /// Points per series along the figure abscissa
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

/// Every key accepted in a configuration file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct Settings {
    pub command: Option<String>,
    pub preset: Option<String>,
    pub k: Option<f64>,
    pub b_bar: Option<f64>,
    pub mu_ratio: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub alpha_s: Option<f64>,
    pub beta_s: Option<f64>,
    pub alpha_u: Option<f64>,
    pub beta_u: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_s: Option<f64>,
    pub gamma_u: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub scan_step: Option<f64>,
    pub bisection_tol: Option<f64>,
    pub exterior_reduction: Option<ExteriorReduction>,
    pub wavenumber_convention: Option<WavenumberConvention>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub strict: bool,
    pub param: Option<SweepParam>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub steps: Option<usize>,
    pub log: bool,
    pub b_max: Option<f64>,
    pub fig6_both: bool,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Critical,
    Sweep,
    Figure,
    DetTrace,
    Verify,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Critical => "critical",
            CommandKind::Sweep => "sweep",
            CommandKind::Figure => "figure",
            CommandKind::DetTrace => "det-trace",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log: bool,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config(format!("steps must be at least 2, got {}", self.steps)));
        }
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(Error::Config("grid bounds must be finite".into()));
        }
        if self.log && !(self.from > 0.0 && self.to > 0.0) {
            return Err(Error::Config("log grid needs positive bounds".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == 0 {
                    return self.from;
                }
                if i == n {
                    return self.to;
                }
                let t = i as f64 / n as f64;
                if self.log {
                    (self.from.ln() + t * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + t * (self.to - self.from)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub grid: Grid,
}

/// Fully resolved configuration of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub template: CasePoint,
    /// Sweep axis (`sweep`) or stretch grid (`det-trace`, parameter ignored).
    pub axis: Option<SweepAxis>,
    pub preset: Option<String>,
    pub preset_options: PresetOptions,
    pub options: SearchOptions,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub strict: bool,
}

/// Overlay the flag object on the file object; absent flags leave file values in place.
pub fn merge(file: Value, flags: &[Value]) -> Result<Settings> {
    let mut map = match file {
        Value::Object(m) => m,
        Value::Null => Map::new(),
        _ => return Err(Error::Config("configuration file must hold a JSON object".into())),
    };
    for layer in flags {
        if let Value::Object(m) = layer {
            for (k, v) in m {
                map.insert(k.clone(), v.clone());
            }
        }
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| Error::Config(format!("configuration: {e}")))
}

pub fn read_file(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("flag structs serialize")
}

impl Settings {
    pub fn stack(&self) -> Result<LayerStack> {
        let ratio = self.mu_ratio.unwrap_or(1.0);
        let layer = |mu, a: Option<f64>, b: Option<f64>, g: Option<f64>| {
            MaterialParams::new(
                mu,
                g.or(self.gamma).unwrap_or(1.0),
                a.or(self.alpha).unwrap_or(0.0),
                b.or(self.beta).unwrap_or(1.0),
            )
        };
        LayerStack::new(
            layer(1.0, self.alpha_s, self.beta_s, self.gamma_s)?,
            layer(ratio, self.alpha_u, self.beta_u, self.gamma_u)?,
        )
    }

    pub fn options(&self) -> Result<SearchOptions> {
        let d = SearchOptions::default();
        let o = SearchOptions {
            lambda_min: self.lambda_min.unwrap_or(d.lambda_min),
            lambda_max: self.lambda_max.unwrap_or(d.lambda_max),
            scan_step: self.scan_step.unwrap_or(d.scan_step),
            bisection_tol: self.bisection_tol.unwrap_or(d.bisection_tol),
            exterior_reduction: self.exterior_reduction.unwrap_or(d.exterior_reduction),
            ..d
        };
        o.validate()?;
        Ok(o)
    }

    pub fn resolve(&self, command: CommandKind) -> Result<RunConfig> {
        if let Some(c) = &self.command {
            if c != command.as_str() {
                return Err(Error::Config(format!(
                    "configuration file is for '{c}', invoked as '{}'",
                    command.as_str()
                )));
            }
        }
        let stack = self.stack()?;
        let template = CasePoint {
            stack,
            k: self.k.unwrap_or(1.0),
            b_bar: self.b_bar.unwrap_or(0.0),
            convention: self.wavenumber_convention.unwrap_or_default(),
        };
        crate::kinematics::LoadingPoint::new(1.0, template.b_bar, template.k)?;
        let options = self.options()?;
        let axis = match command {
            CommandKind::Sweep => {
                let param = self.param.ok_or_else(|| Error::Config("sweep needs --param".into()))?;
                let (Some(from), Some(to)) = (self.from, self.to) else {
                    return Err(Error::Config("sweep needs --from and --to".into()));
                };
                let grid = Grid { from, to, steps: self.steps.unwrap_or(11), log: self.log };
                grid.validate()?;
                Some(SweepAxis { param, grid })
            }
            CommandKind::DetTrace => {
                let grid = Grid {
                    from: self.from.unwrap_or(options.lambda_min),
                    to: self.to.unwrap_or(options.lambda_max),
                    steps: self.steps.unwrap_or(281),
                    log: self.log,
                };
                grid.validate()?;
                if grid.from <= 0.0 || grid.to <= 0.0 {
                    return Err(Error::Config("stretch grid must be positive".into()));
                }
                Some(SweepAxis { param: SweepParam::K, grid })
            }
            _ => None,
        };
        let preset_options = PresetOptions {
            b_max: self.b_max.unwrap_or(2.0),
            fig6_both: self.fig6_both,
            points: self.points,
            gamma_s: self.gamma_s.or(self.gamma).unwrap_or(1.0),
            gamma_u: self.gamma_u.or(self.gamma).unwrap_or(1.0),
            convention: template.convention,
        };
        if command == CommandKind::Figure && self.preset.is_none() {
            return Err(Error::Config("figure needs a preset name (fig2..fig9)".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("--threads must be positive".into()));
        }
        Ok(RunConfig {
            command,
            template,
            axis,
            preset: self.preset.clone(),
            preset_options,
            options,
            out: self.out.clone(),
            threads: self.threads,
            strict: self.strict,
        })
    }
}
