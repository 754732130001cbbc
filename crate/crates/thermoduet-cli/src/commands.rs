use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thermoduet::thermo::{TrajectoryOptions, DEFAULT_TOL_QUAD};
use thermoduet::{classify_regime, Propagator, RegimeReport, Subsystem, ThermoTrajectory, TimeGrid};

use crate::config::{set_param, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::write_csv;
use crate::summary::{self, PLATEAU_THRESHOLD};
use crate::verify::{self, AnalyticOptions, FockOutcome, Report};

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Context {
    pub out_dir: PathBuf,
    pub workers: Option<usize>,
    pub tol_quad: f64,
}

impl Default for Context {
    fn default() -> Self {
        Self { out_dir: PathBuf::from("."), workers: None, tol_quad: DEFAULT_TOL_QUAD }
    }
}

impl Context {
    fn pool(&self) -> CliResult<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            if n == 0 {
                return Err(CliError::config("--workers must be at least 1"));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))
    }

    fn prepare_out_dir(&self) -> CliResult<()> {
        fs::create_dir_all(&self.out_dir).map_err(|e| CliError::io(&self.out_dir, e))
    }
}

pub fn trajectory(cfg: &ScenarioConfig, tol_quad: f64) -> CliResult<ThermoTrajectory> {
    let prop = Propagator::new(&cfg.params)?;
    let grid = TimeGrid::uniform(cfg.window(), cfg.n_points)?;
    Ok(ThermoTrajectory::compute(&prop, &grid, &TrajectoryOptions { md: true, tol_quad })?)
}

fn write_trajectory(traj: &ThermoTrajectory, cfg: &ScenarioConfig, path: &Path) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_csv(traj, cfg, BufWriter::new(file)).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub regime: RegimeReport,
    pub csv: PathBuf,
    /// md samples lost to singular windows.
    pub missing_md: usize,
}

pub fn run(cfg: &ScenarioConfig, name: &str, ctx: &Context) -> CliResult<RunOutcome> {
    ctx.prepare_out_dir()?;
    let regime = classify_regime(&cfg.params);
    let traj = ctx.pool()?.install(|| trajectory(cfg, ctx.tol_quad))?;
    let csv = ctx.out_dir.join(format!("{name}.csv"));
    write_trajectory(&traj, cfg, &csv)?;
    Ok(RunOutcome { regime, csv, missing_md: traj.missing_md_samples() })
}

pub fn classify(cfg: &ScenarioConfig) -> RegimeReport {
    classify_regime(&cfg.params)
}

pub fn verify_analytic(cfg: &ScenarioConfig, ctx: &Context, negative_control: bool) -> CliResult<Report> {
    let opts = AnalyticOptions { tol_quad: ctx.tol_quad, negative_control, ..AnalyticOptions::default() };
    ctx.pool()?.install(|| verify::analytic_report(&cfg.params, &opts))
}

pub fn verify_fock(cfg: &ScenarioConfig) -> CliResult<FockOutcome> {
    verify::fock_report(&cfg.params, cfg.n_points)
}

/// One row of the sweep summary.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub index: usize,
    pub value: f64,
    pub outcome: Result<SweepMetrics, String>,
}

#[derive(Debug, Clone)]
pub struct SweepMetrics {
    pub csv: PathBuf,
    pub missing_md: usize,
    pub ratios: Vec<summary::BalanceRatio>,
    pub plateau: [Option<f64>; 2],
}

pub const SUMMARY_SCHEMA_LINE: &str = "# thermoduet sweep summary v1";

pub fn sweep(cfg: &ScenarioConfig, name: &str, ctx: &Context) -> CliResult<(Vec<SweepPoint>, PathBuf)> {
    let axis = cfg.sweep.as_ref().ok_or_else(|| CliError::config("sweep needs a `[sweep]` axis"))?;
    let mut points = Vec::with_capacity(axis.values.len());
    for (k, &v) in axis.values.iter().enumerate() {
        let mut c = cfg.clone();
        set_param(&mut c.params, &axis.param, v).map_err(CliError::config)?;
        c.sweep = None;
        points.push((k, v, c));
    }
    ctx.prepare_out_dir()?;
    let pool = ctx.pool()?;
    let rows: Vec<SweepPoint> = pool.install(|| {
        points
            .into_par_iter()
            .map(|(index, value, c)| {
                let csv = ctx.out_dir.join(format!("{name}_{}_{index:03}.csv", axis.param));
                let outcome = c
                    .params
                    .validate()
                    .map_err(CliError::from)
                    .and_then(|_| trajectory(&c, ctx.tol_quad))
                    .and_then(|traj| {
                        write_trajectory(&traj, &c, &csv)?;
                        Ok(SweepMetrics {
                            csv: csv.clone(),
                            missing_md: traj.missing_md_samples(),
                            ratios: summary::balance_ratios(&traj),
                            plateau: Subsystem::BOTH.map(|x| summary::energy_plateau(&traj, x)),
                        })
                    })
                    .map_err(|e| e.to_string());
                SweepPoint { index, value, outcome }
            })
            .collect()
    });
    let path = ctx.out_dir.join(format!("{name}_summary.csv"));
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    write_summary(&axis.param, &rows, BufWriter::new(file)).map_err(|e| CliError::io(&path, e))?;
    Ok((rows, path))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{:.12e}", x + 0.0)).unwrap_or_default()
}

pub fn write_summary<W: Write>(param: &str, rows: &[SweepPoint], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SUMMARY_SCHEMA_LINE}")?;
    let ratio_cols: Vec<String> = thermoduet::Approach::ALL
        .iter()
        .flat_map(|&a| {
            summary::Quantity::ALL
                .iter()
                .map(move |&q| summary::BalanceRatio { approach: a, quantity: q, ratio: None }.column())
        })
        .collect();
    writeln!(
        w,
        "index,{param},status,missing_md,{},plateau_ratio_1,plateau_ratio_2,plateau_1,plateau_2,file",
        ratio_cols.join(",")
    )?;
    for r in rows {
        match &r.outcome {
            Ok(m) => {
                let ratios: Vec<String> = m.ratios.iter().map(|b| opt(b.ratio)).collect();
                let flag = |p: Option<f64>| p.map_or(String::new(), |v| (v < PLATEAU_THRESHOLD).to_string());
                let file = m.csv.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
                writeln!(
                    w,
                    "{},{:.12e},ok,{},{},{},{},{},{},{file}",
                    r.index,
                    r.value,
                    m.missing_md,
                    ratios.join(","),
                    opt(m.plateau[0]),
                    opt(m.plateau[1]),
                    flag(m.plateau[0]),
                    flag(m.plateau[1]),
                )?;
            }
            Err(e) => {
                let msg = e.replace([',', '\n'], ";");
                let blanks = ",".repeat(ratio_cols.len() + 6);
                writeln!(w, "{},{:.12e},error: {msg}{blanks}", r.index, r.value)?;
            }
        }
    }
    w.flush()
}
