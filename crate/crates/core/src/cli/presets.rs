//! Parameter grids of the reference figures.
//!
//! Where a substrate is called non-magnetizable its magnetic constants are `(alpha, beta) = (0, 1)`,
//! under which the layer responds to the field exactly like the surrounding vacuum.

use crate::dispersion::CasePoint;
use crate::error::{Error, Result};
use crate::kinematics::{LayerStack, MaterialParams, WavenumberConvention};

use super::config::Grid;

pub const PRESET_NAMES: [&str; 8] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"];

const RATIOS: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];
const BETAS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];
const FIELDS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];
const VACUUM: (f64, f64) = (0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetOptions {
    pub b_max: f64,
    /// fig6 with the magnetoelastic constants in the substrate as well.
    pub fig6_both: bool,
    pub points: Option<usize>,
    pub gamma_s: f64,
    pub gamma_u: f64,
    pub convention: WavenumberConvention,
}

impl Default for PresetOptions {
    fn default() -> Self {
        PresetOptions {
            b_max: 2.0,
            fig6_both: false,
            points: None,
            gamma_s: 1.0,
            gamma_u: 1.0,
            convention: WavenumberConvention::Eulerian,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub case_id: String,
    /// Index of the curve this point belongs to.
    pub series: usize,
    pub point: CasePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub description: &'static str,
    /// Column that identifies a curve, and the one along it.
    pub series_column: &'static str,
    pub x_column: &'static str,
    pub cases: Vec<Case>,
}

impl Preset {
    pub fn series_count(&self) -> usize {
        self.cases.iter().map(|c| c.series + 1).max().unwrap_or(0)
    }
}

struct Builder<'a> {
    name: &'a str,
    opts: &'a PresetOptions,
    cases: Vec<Case>,
}

impl Builder<'_> {
    fn push(&mut self, series: usize, ratio: f64, sub: (f64, f64), up: (f64, f64), k: f64, b_bar: f64) {
        let idx = self.cases.iter().filter(|c| c.series == series).count();
        let stack = LayerStack {
            substrate: MaterialParams::magnetoelastic(1.0, sub.0, sub.1).with_gamma(self.opts.gamma_s),
            upper: MaterialParams::magnetoelastic(ratio, up.0, up.1).with_gamma(self.opts.gamma_u),
        };
        self.cases.push(Case {
            case_id: format!("{}-s{}-{:03}", self.name, series, idx),
            series,
            point: CasePoint { stack, k, b_bar, convention: self.opts.convention },
        });
    }
}

fn grid(from: f64, to: f64, steps: usize, log: bool) -> Vec<f64> {
    Grid { from, to, steps, log }.values()
}

/// Cases of the named figure, series-major.
pub fn figure_preset(name: &str, opts: &PresetOptions) -> Result<Preset> {
    if !(opts.b_max > 0.0) || !opts.b_max.is_finite() {
        return Err(Error::Config(format!("b-max must be positive, got {}", opts.b_max)));
    }
    if opts.points.is_some_and(|p| p < 2) {
        return Err(Error::Config("points must be at least 2".into()));
    }
    let mut b = Builder { name, opts, cases: Vec::new() };
    let field_grid = grid(0.0, opts.b_max, opts.points.unwrap_or(21), false);
    let ratio_grid = grid(0.1, 100.0, opts.points.unwrap_or(25), true);
    let (description, series_column, x_column) = match name {
        "fig2" => {
            for (s, &ratio) in RATIOS.iter().enumerate() {
                for k in grid(0.1, 20.0, opts.points.unwrap_or(25), true) {
                    b.push(s, ratio, VACUUM, VACUUM, k, 0.0);
                }
            }
            ("non-magnetizable layers, no field, lambda_cr against k", "mu_ratio", "k")
        }
        "fig3" | "fig4" | "fig5" => {
            let ratio = if name == "fig5" { 5.0 } else { 1.0 };
            for (s, &beta) in BETAS.iter().enumerate() {
                let sub = if name == "fig3" { (0.5, beta) } else { VACUUM };
                for &bb in &field_grid {
                    b.push(s, ratio, sub, (0.5, beta), 1.0, bb);
                }
            }
            match name {
                "fig3" => ("identical magnetoelastic layers, alpha = 0.5, lambda_cr against b_bar", "beta_u", "b_bar"),
                "fig4" => ("non-magnetizable substrate (0, 1), upper alpha = 0.5, mu_ratio 1", "beta_u", "b_bar"),
                _ => ("non-magnetizable substrate (0, 1), upper alpha = 0.5, mu_ratio 5", "beta_u", "b_bar"),
            }
        }
        "fig6" | "fig9" => {
            let sub = if name == "fig9" || opts.fig6_both { (0.5, 0.5) } else { VACUUM };
            for (s, &bb) in FIELDS.iter().enumerate() {
                for &ratio in &ratio_grid {
                    b.push(s, ratio, sub, (0.5, 0.5), 1.0, bb);
                }
            }
            if name == "fig6" {
                ("upper alpha = beta = 0.5 over a (0, 1) substrate unless fig6-both, lambda_cr against mu_ratio", "b_bar", "mu_ratio")
            } else {
                ("both layers alpha = beta = 0.5, lambda_cr against mu_ratio", "b_bar", "mu_ratio")
            }
        }
        "fig7" | "fig8" => {
            let beta = if name == "fig7" { 0.5 } else { 1.0 };
            for (s, &ratio) in RATIOS.iter().enumerate() {
                for &bb in &field_grid {
                    b.push(s, ratio, (0.5, beta), (0.5, beta), 1.0, bb);
                }
            }
            ("both layers alpha = 0.5, lambda_cr against b_bar per stiffness ratio", "mu_ratio", "b_bar")
        }
        _ => {
            return Err(Error::Config(format!(
                "unknown preset '{name}', expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(Preset { name: name.to_string(), description, series_column, x_column, cases: b.cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_have_five_series() {
        for name in PRESET_NAMES {
            let p = figure_preset(name, &PresetOptions::default()).unwrap();
            assert_eq!(p.series_count(), 5, "{name}");
            let mut ids: Vec<_> = p.cases.iter().map(|c| c.case_id.clone()).collect();
            ids.sort();
            ids.dedup();
            assert_eq!(ids.len(), p.cases.len());
        }
    }

    #[test]
    fn fig2_contains_unit_ratio() {
        let p = figure_preset("fig2", &PresetOptions::default()).unwrap();
        assert!(p.cases.iter().any(|c| c.point.stack.mu_ratio() == 1.0));
        let ks: Vec<f64> = p.cases.iter().filter(|c| c.series == 0).map(|c| c.point.k).collect();
        assert_eq!(ks.first(), Some(&0.1));
        assert_eq!(ks.last(), Some(&20.0));
    }

    #[test]
    fn substrate_conventions() {
        let p = figure_preset("fig4", &PresetOptions::default()).unwrap();
        assert!(p.cases.iter().all(|c| c.point.stack.substrate == MaterialParams::non_magnetizable(1.0)));
        let p6 = figure_preset("fig6", &PresetOptions::default()).unwrap();
        assert_eq!(p6.cases[0].point.stack.substrate.beta, 1.0);
        let both = PresetOptions { fig6_both: true, ..Default::default() };
        let p6b = figure_preset("fig6", &both).unwrap();
        let p9 = figure_preset("fig9", &PresetOptions::default()).unwrap();
        assert_eq!(p6b.cases[3].point, p9.cases[3].point);
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(figure_preset("fig99", &PresetOptions::default()), Err(Error::Config(_))));
    }
}
