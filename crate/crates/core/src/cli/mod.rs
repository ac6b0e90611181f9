//! Command-line front end.
//!
//! Exit codes: 0 success, 1 numerical failure under `--strict` (or a failed `verify`),
//! 2 invalid configuration or usage.

pub mod config;
pub mod output;
pub mod presets;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::dispersion::{det_trace, grid_points, sweep, DeterminantFn, SearchOptions, SweepRow};
use crate::error::{Error, Result};

pub use config::{CommandKind, Grid, RunConfig, Settings, SweepAxis};
pub use output::{format_sig, read_rows, write_rows, ResultRow, HEADER};
pub use presets::{figure_preset, Case, Preset, PresetOptions, PRESET_NAMES};

use config::{CommonArgs, FigureArgs, GridArgs};

#[derive(Debug, Parser)]
#[command(name = "maglayer", version, about = "Critical stretch of a magnetoelastic layer on a magnetoelastic half-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Critical stretches at one parameter point
    Critical {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Critical stretches along one parameter axis
    Sweep {
        /// k, b-bar, mu-ratio, beta (upper layer) or beta-both
        #[arg(long)]
        param: Option<crate::dispersion::SweepParam>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Grid of one of the reference figures fig2..fig9
    ///
    /// Figures 4 and 5 (and 6 unless --fig6-both) use a non-magnetizable substrate with
    /// (alpha, beta) = (0, 1), which makes it magnetically indistinguishable from vacuum.
    Figure {
        name: Option<String>,
        #[command(flatten)]
        fig: FigureArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Scaled boundary determinant against the stretch
    DetTrace {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Built-in verification suite
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn settings(kind: CommandKind, common: &CommonArgs, extra: Vec<Value>) -> Result<RunConfig> {
    let file = match &common.config {
        Some(p) => config::read_file(p)?,
        None => Value::Null,
    };
    let mut layers = vec![config::to_value(common)];
    layers.extend(extra);
    config::merge(file, &layers)?.resolve(kind)
}

fn parse(cli: Cli) -> Result<RunConfig> {
    match cli.command {
        Command::Critical { common } => settings(CommandKind::Critical, &common, vec![]),
        Command::Sweep { param, grid, common } => {
            let mut extra = vec![config::to_value(&grid)];
            if let Some(p) = param {
                extra.push(serde_json::json!({ "param": p }));
            }
            settings(CommandKind::Sweep, &common, extra)
        }
        Command::Figure { name, fig, common } => {
            let mut extra = vec![config::to_value(&fig)];
            if let Some(n) = name {
                extra.push(serde_json::json!({ "preset": n }));
            }
            settings(CommandKind::Figure, &common, extra)
        }
        Command::DetTrace { grid, common } => settings(CommandKind::DetTrace, &common, vec![config::to_value(&grid)]),
        Command::Verify { common } => settings(CommandKind::Verify, &common, vec![]),
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::Config(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Config(format!("thread pool: {e}"))),
        None => Ok(f()),
    }
}

/// `(case_id, point)` list of a sweep-like command.
pub fn cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    match cfg.command {
        CommandKind::Critical => Ok(vec![Case { case_id: "critical".into(), series: 0, point: cfg.template }]),
        CommandKind::Sweep => {
            let axis = cfg.axis.ok_or_else(|| Error::Config("sweep axis missing".into()))?;
            Ok(grid_points(&cfg.template, axis.param, &axis.grid.values())
                .into_iter()
                .enumerate()
                .map(|(i, point)| Case { case_id: format!("sweep-{i:03}"), series: 0, point })
                .collect())
        }
        CommandKind::Figure => {
            let name = cfg.preset.as_deref().ok_or_else(|| Error::Config("preset missing".into()))?;
            Ok(figure_preset(name, &cfg.preset_options)?.cases)
        }
        _ => Err(Error::Config(format!("{} has no case list", cfg.command.as_str()))),
    }
}

/// Validated cases solved in grid order; per-point failures stay in the rows.
pub fn solve_cases(list: &[Case], opts: &SearchOptions, threads: Option<usize>) -> Result<Vec<ResultRow>> {
    for c in list {
        c.point.stack.substrate.validate()?;
        c.point.stack.upper.validate()?;
        crate::kinematics::LoadingPoint::new(1.0, c.point.b_bar, c.point.k)?;
    }
    let points: Vec<_> = list.iter().map(|c| c.point).collect();
    let rows: Vec<SweepRow> = with_threads(threads, || sweep(&points, opts))?;
    Ok(list.iter().zip(&rows).map(|(c, r)| ResultRow::new(c.case_id.clone(), r)).collect())
}

/// Run a resolved configuration and return the exit code.
pub fn execute(cfg: &RunConfig) -> Result<i32> {
    match cfg.command {
        CommandKind::Verify => {
            let mut report = Vec::new();
            let passed = with_threads(cfg.threads, || verify::run_suite(&mut report, &cfg.options))??;
            let mut out = open_out(cfg.out.as_deref())?;
            out.write_all(&report)
                .and_then(|_| out.flush())
                .map_err(|e| Error::Config(format!("write: {e}")))?;
            Ok(if passed { 0 } else { 1 })
        }
        CommandKind::DetTrace => {
            let axis = cfg.axis.ok_or_else(|| Error::Config("stretch grid missing".into()))?;
            let t = cfg.template;
            let f = DeterminantFn {
                stack: t.stack,
                k: t.k,
                b_bar: t.b_bar,
                convention: t.convention,
                reduction: cfg.options.exterior_reduction,
            };
            let rows = det_trace(&f, &axis.grid.values());
            output::write_trace(open_out(cfg.out.as_deref())?, t.k, t.convention, &rows)?;
            let failed = rows.iter().any(|(_, r)| r.is_err());
            Ok(if cfg.strict && failed { 1 } else { 0 })
        }
        _ => {
            let rows = solve_cases(&cases(cfg)?, &cfg.options, cfg.threads)?;
            write_rows(open_out(cfg.out.as_deref())?, &rows)?;
            let failed = rows
                .iter()
                .any(|r| r.status == "admissibility-violated" || r.status == "numerical-inconsistency");
            Ok(if cfg.strict && failed { 1 } else { 0 })
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match parse(cli).and_then(|cfg| execute(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("maglayer: {e}");
            eprintln!("see `maglayer --help` for usage");
            2
        }
    }
}
