//! Numeric pipeline against the closed-form homogeneous solution and against
//! brute-force Fock-space evolution.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use thermoduet::analytic::{self, HomogeneousDerived};
use thermoduet::fock::{FockConfig, FockEvolution};
use thermoduet::linalg::{self, CMat};
use thermoduet::spectral::{self, BlockSpectra};
use thermoduet::thermo::TrajectoryOptions;
use thermoduet::{
    build_hamiltonian, sample_frequencies, Approach, ModelParams, Propagator, Subsystem, ThermoTrajectory, TimeGrid,
};

use crate::error::{CliError, CliResult};

/// Relative tolerance for closed-form quantities.
pub const EXACT_TOL: f64 = 1e-8;
/// Relative tolerance for quadrature-based md heat and work.
pub const QUAD_TOL: f64 = 1e-6;
/// Fock deviations may reach this multiple of the truncation bound.
pub const FOCK_TAIL_FACTOR: f64 = 10.0;
/// Largest mode count accepted by the Fock oracle.
pub const FOCK_MAX_MODES: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self { name: name.into(), deviation, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, deviation: f64, tolerance: f64) {
        self.checks.push(Check::new(name, deviation, tolerance));
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn worst(&self) -> Option<&Check> {
        self.checks.iter().max_by(|a, b| (a.deviation / a.tolerance).total_cmp(&(b.deviation / b.tolerance)))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{tag}  {:<28} deviation {:.3e}  tolerance {:.1e}", c.name, c.deviation, c.tolerance)?;
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "verification failed" })
    }
}

/// `max|a − b| / max|b|`, NaN-poisoned so that missing data fails.
pub fn series_deviation(num: &[f64], reference: &[f64]) -> f64 {
    let scale = reference.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut err = 0.0_f64;
    for (a, b) in num.iter().zip(reference) {
        let d = (a - b).abs();
        if d.is_nan() {
            return f64::INFINITY;
        }
        err = err.max(d);
    }
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}

fn present(v: &[Option<f64>]) -> Vec<f64> {
    v.iter().map(|x| x.unwrap_or(f64::NAN)).collect()
}

/// Options for [`analytic_report`].
#[derive(Debug, Clone)]
pub struct AnalyticOptions {
    pub n_points: usize,
    pub tol_quad: f64,
    /// Overwrite one coupling entry without its mirror before running.
    pub negative_control: bool,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        Self { n_points: 2000, tol_quad: TrajectoryOptions::default().tol_quad, negative_control: false }
    }
}

/// Compares every numeric quantity with its closed form over one period `2π/Ω`.
pub fn analytic_report(p: &ModelParams, opts: &AnalyticOptions) -> CliResult<Report> {
    if p.sigma != 0.0 {
        return Err(CliError::config(format!("verify-analytic needs sigma = 0, got {}", p.sigma)));
    }
    p.validate()?;
    let d = HomogeneousDerived::new(p)?;
    if d.big_omega == 0.0 {
        return Err(CliError::config("verify-analytic needs a non-zero Rabi frequency"));
    }
    let grid = TimeGrid::uniform(2.0 * PI / d.big_omega, opts.n_points)?;
    let mut h = build_hamiltonian(p, &sample_frequencies(p)?)?;
    if opts.negative_control {
        h = h.with_unmirrored_entry(0, p.n1, p.gamma + 1e-3 * p.omega1);
    }
    let mut report = Report::default();
    let prop = match Propagator::from_hamiltonian(p, h) {
        Ok(v) => v,
        Err(e) => {
            report.push(format!("pipeline ({e})"), f64::INFINITY, 0.0);
            return Ok(report);
        }
    };
    let traj_opts = TrajectoryOptions { md: true, tol_quad: opts.tol_quad };
    let traj = ThermoTrajectory::compute(&prop, &grid, &traj_opts)?;
    let ts = grid.times();
    let energies: Vec<_> = ts.iter().map(|&t| analytic::analytic_energies(t, &d)).collect();
    let ui: Vec<f64> = energies.iter().map(|e| e.interaction()).collect();
    report.push("dU_I", series_deviation(&traj.interaction_variation(), &ui), EXACT_TOL);

    for x in Subsystem::BOTH {
        let l = x.label();
        let bare: Vec<f64> = energies.iter().map(|e| e.bare(x)).collect();
        let other: Vec<f64> = energies.iter().map(|e| -e.bare(x.other())).collect();
        let md: Vec<f64> = energies.iter().map(|e| e.md(x)).collect();
        let minus_ui: Vec<f64> = ui.iter().map(|v| -v).collect();
        let e_x: Vec<f64> = traj.energies().iter().map(|e| e.e[x.index()] - traj.energies()[0].e[x.index()]).collect();
        let q = |a| traj.quantities(x, a);
        report.push(format!("dE_{l}"), series_deviation(&e_x, &bare), EXACT_TOL);
        report.push(format!("dU_{l}_wc"), series_deviation(&present(&q(Approach::Wc).du), &bare), EXACT_TOL);
        report.push(format!("dU_{l}_int"), series_deviation(&present(&q(Approach::Int).du), &other), EXACT_TOL);
        report.push(format!("dU_{l}_bare"), series_deviation(&present(&q(Approach::Bare).du), &bare), EXACT_TOL);
        report.push(format!("dW_{l}_bare"), series_deviation(&present(&q(Approach::Bare).dw), &minus_ui), EXACT_TOL);
        report.push(format!("dU_{l}_md"), series_deviation(&present(&q(Approach::Md).du), &md), EXACT_TOL);

        let mut heat = Vec::with_capacity(ts.len());
        let mut work = Vec::with_capacity(ts.len());
        for &t in ts {
            let m = analytic::md_heat_work(t, &d, x).map_err(CliError::from)?;
            heat.push(m.heat);
            work.push(m.work);
        }
        report.push(format!("dQ_{l}_md"), series_deviation(&present(&q(Approach::Md).dq), &heat), QUAD_TOL);
        report.push(format!("dW_{l}_md"), series_deviation(&present(&q(Approach::Md).dw), &work), QUAD_TOL);

        let n = d.modes(x);
        let ones = DVector::from_element(n, 1.0);
        let (mut dev_diag, mut dev_coll) = (0.0_f64, 0.0_f64);
        for (j, &t) in ts.iter().enumerate().step_by(37) {
            let a = analytic::analytic_effective_hamiltonian(t, &d, x)?;
            let (tr, sum_all) = match (traj.trace_k(x)[j], prop.k_quadratic_form(t, x, &ones)) {
                (Some(tr), Ok(s)) => (tr, s),
                _ => (f64::INFINITY, f64::INFINITY),
            };
            let k = analytic::extract_coefficients(tr, sum_all, n);
            let scale = a.collective.abs().max(a.diagonal.abs());
            dev_diag = dev_diag.max(((k.diagonal - a.diagonal) / a.diagonal).abs());
            dev_coll = dev_coll.max(((k.collective - a.collective) / scale).abs());
        }
        report.push(format!("K_{l} diagonal"), nan_as_inf(dev_diag), EXACT_TOL);
        report.push(format!("K_{l} collective"), nan_as_inf(dev_coll), EXACT_TOL);
    }
    Ok(report)
}

fn nan_as_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Summary of a Fock-oracle comparison.
#[derive(Debug, Clone)]
pub struct FockOutcome {
    pub report: Report,
    pub n_max: usize,
    pub tail_bound: f64,
    pub window: f64,
}

/// Gaussian moments against Fock-space evolution over four exchange periods.
pub fn fock_report(p: &ModelParams, n_points: usize) -> CliResult<FockOutcome> {
    p.validate()?;
    if p.n1 + p.n2 > FOCK_MAX_MODES {
        return Err(CliError::config(format!("verify-fock takes at most {FOCK_MAX_MODES} modes, got {}", p.n1 + p.n2)));
    }
    if n_points < 2 {
        return Err(CliError::config("verify-fock needs at least 2 time points"));
    }
    let h = build_hamiltonian(p, &sample_frequencies(p)?)?;
    let s0 = spectral::thermal_initial_moments(p, &BlockSpectra::new(&h)?)?;
    let spec = spectral::diagonalize(&h)?;
    let cfg = FockConfig::auto(p, h.clone())?;
    let bound = cfg.tail_bound()?;
    let ev = FockEvolution::new(&cfg)?;

    let regime = thermoduet::classify_regime(p);
    let rate = if regime.big_omega > 0.0 { regime.big_omega } else { p.omega1 };
    let window = 4.0 * 2.0 * PI / rate;
    let gaussian = |t: f64| -> CliResult<CMat> {
        let u = spectral::one_particle_unitary(&spec, t);
        Ok(spectral::evolve_moments(&s0, &u, t)?.s)
    };

    let m0 = ev.measure(0.0);
    let n0: f64 = m0.occupations.diagonal().iter().map(|z| z.re).sum();
    let (mut dev, mut drift, mut number) = (0.0_f64, 0.0_f64, 0.0_f64);
    let resonant_pair = p.n1 == 1 && p.n2 == 1 && p.omega1 == p.omega2;
    let mut exchange = 0.0_f64;
    for k in 0..n_points {
        let t = window * k as f64 / (n_points - 1) as f64;
        let m = ev.measure(t);
        dev = dev.max(linalg::max_abs(&(&m.occupations - gaussian(t)?)));
        drift = drift.max(linalg::max_abs(&(&m.occupations - &m0.occupations)));
        let n: f64 = m.occupations.diagonal().iter().map(|z| z.re).sum();
        number = number.max((n - n0).abs());
        if resonant_pair {
            let (n1, n2) = (s0.s[(0, 0)].re, s0.s[(1, 1)].re);
            let expected = n1 + (n2 - n1) * (p.gamma * t).sin().powi(2);
            exchange = exchange.max((m.occupations[(0, 0)].re - expected).abs());
        }
    }
    let mut report = Report::default();
    report.push("moments vs gaussian", dev, FOCK_TAIL_FACTOR * bound);
    report.push("number conservation", number, 1e-10);
    if resonant_pair {
        report.push("resonant sin^2 exchange", exchange, FOCK_TAIL_FACTOR * bound);
    }
    if p.gamma == 0.0 {
        report.push("uncoupled occupations static", drift, 1e-12);
    }
    Ok(FockOutcome { report, n_max: cfg.n_max, tail_bound: bound, window })
}
