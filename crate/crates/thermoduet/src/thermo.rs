//! Internal energy, heat and work of both subsystems under the four
//! definition sets, and their sums over the bipartition.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::model::Subsystem;
use crate::propagator::{EnergySample, MdSample, Propagator};
use crate::quadrature;
use crate::reduced::trace_product;

/// Default relative first-law tolerance for the md approach.
pub const DEFAULT_TOL_QUAD: f64 = 1e-6;
/// Relative accuracy requested from gap refinement.
const REFINE_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
    step: f64,
}

impl TimeGrid {
    /// `n_points` equally spaced times on `[0, t_max]`.
    pub fn uniform(t_max: f64, n_points: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::Grid(format!("t_max must be positive and finite, got {t_max}")));
        }
        if n_points < 3 {
            return Err(Error::Grid(format!("need at least 3 points, got {n_points}")));
        }
        let step = t_max / (n_points - 1) as f64;
        let times = (0..n_points).map(|j| j as f64 * step).collect();
        Ok(Self { times, step })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("grid has at least 3 points")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Approach {
    Wc,
    Int,
    Bare,
    Md,
}

impl Approach {
    pub const ALL: [Approach; 4] = [Approach::Wc, Approach::Int, Approach::Bare, Approach::Md];

    pub fn label(self) -> &'static str {
        match self {
            Approach::Wc => "wc",
            Approach::Int => "int",
            Approach::Bare => "bare",
            Approach::Md => "md",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `ΔU`, `δQ`, `δW` series on a grid; `None` marks a missing sample.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Quantities {
    pub du: Vec<Option<f64>>,
    pub dq: Vec<Option<f64>>,
    pub dw: Vec<Option<f64>>,
}

fn present(v: impl IntoIterator<Item = f64>) -> Vec<Option<f64>> {
    v.into_iter().map(Some).collect()
}

fn variation(e: &[f64]) -> Vec<f64> {
    let e0 = e.first().copied().unwrap_or(0.0);
    e.iter().map(|v| v - e0).collect()
}

impl Quantities {
    pub fn len(&self) -> usize {
        self.du.len()
    }

    pub fn is_empty(&self) -> bool {
        self.du.is_empty()
    }

    /// `ΔU − δQ − δW`, missing where any term is.
    pub fn first_law_residual(&self) -> Vec<Option<f64>> {
        (0..self.len()).map(|j| Some(self.du[j]? - self.dq[j]? - self.dw[j]?)).collect()
    }

    fn sum(&self, other: &Self) -> Self {
        let add = |a: &[Option<f64>], b: &[Option<f64>]| -> Vec<Option<f64>> {
            a.iter().zip(b).map(|(x, y)| Some((*x)? + (*y)?)).collect()
        };
        Self { du: add(&self.du, &other.du), dq: add(&self.dq, &other.dq), dw: add(&self.dw, &other.dw) }
    }
}

/// Weak-coupling approach: heat is the change of the bare subsystem energy.
pub fn weak_coupling_quantities(e_x: &[f64]) -> Quantities {
    let du = variation(e_x);
    Quantities { dq: present(du.iter().copied()), du: present(du), dw: vec![Some(0.0); e_x.len()] }
}

/// Interaction approach: heat is minus the change of the other subsystem's bare energy.
pub fn interaction_approach(e_other: &[f64]) -> Quantities {
    let du: Vec<f64> = variation(e_other).into_iter().map(|v| -v).collect();
    Quantities { dq: present(du.iter().copied()), du: present(du), dw: vec![Some(0.0); e_other.len()] }
}

/// Bare approach: the interaction-energy change is booked as work.
pub fn bare_approach(e_x: &[f64], e_other: &[f64], u_i: &[f64]) -> Quantities {
    Quantities {
        du: present(variation(e_x)),
        dq: present(variation(e_other).into_iter().map(|v| -v)),
        dw: present(variation(u_i).into_iter().map(|v| -v)),
    }
}

/// Integrands of the md approach at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdPoint {
    /// `Tr(K S)`.
    pub tr_ks: f64,
    /// `Tr(K Ṡ)`.
    pub heat_rate: f64,
    /// `Tr(K̇ S)`.
    pub work_rate: f64,
}

impl MdPoint {
    pub fn from_matrices(k: &CMat, k_dot: &CMat, s: &CMat, s_dot: &CMat) -> Self {
        Self {
            tr_ks: trace_product(k, s).re,
            heat_rate: trace_product(k, s_dot).re,
            work_rate: trace_product(k_dot, s).re,
        }
    }
}

impl From<MdSample> for MdPoint {
    fn from(s: MdSample) -> Self {
        Self { tr_ks: s.tr_ks, heat_rate: s.heat_rate, work_rate: s.work_rate }
    }
}

/// Bookkeeping of the md integration for one subsystem.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MdDiagnostics {
    /// Grid nodes where the reduced propagator was singular.
    pub singular_nodes: usize,
    /// First time from which heat and work could not be integrated.
    pub exhausted_at: Option<f64>,
}

/// Minimal-dissipation approach from per-node integrands.
///
/// `refine(t)` re-evaluates the integrands off-grid and is used on intervals
/// next to missing nodes.
pub fn minimal_dissipation_quantities<F>(
    samples: &[Option<MdPoint>],
    grid: &TimeGrid,
    mut refine: F,
) -> (Quantities, MdDiagnostics)
where
    F: FnMut(f64) -> Option<MdPoint>,
{
    let n = samples.len();
    assert_eq!(n, grid.len(), "one sample per grid node");
    let e0 = samples.first().copied().flatten().map(|s| s.tr_ks);
    let du: Vec<Option<f64>> = samples.iter().map(|s| Some(s.as_ref()?.tr_ks - e0?)).collect();
    let h = grid.step();
    let t0 = grid.times()[0];
    let mut integrate = |pick: fn(&MdPoint) -> f64| {
        let f: Vec<Option<f64>> = samples.iter().map(|s| s.as_ref().map(pick)).collect();
        let scale = f.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        quadrature::cumulative_with_gaps(&f, h, |a, b| {
            let tol = REFINE_REL_TOL * (b - a) * scale;
            quadrature::adaptive_gauss_legendre(|t| refine(t0 + t).as_ref().map(pick), a, b, tol)
        })
    };
    let mut dq = integrate(|p| p.heat_rate);
    let mut dw = integrate(|p| p.work_rate);
    let singular_nodes = samples.iter().filter(|s| s.is_none()).count();
    for j in 0..n {
        if samples[j].is_none() {
            dq[j] = None;
            dw[j] = None;
        }
    }
    let exhausted_at =
        (0..n).find(|&j| samples[j].is_some() && (dq[j].is_none() || dw[j].is_none())).map(|j| grid.times()[j]);
    (Quantities { du, dq, dw }, MdDiagnostics { singular_nodes, exhausted_at })
}

/// All quantities at one grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoSample {
    pub t: f64,
    /// Indexed by subsystem, then [`Approach::index`].
    pub du: [[Option<f64>; 4]; 2],
    pub dq: [[Option<f64>; 4]; 2],
    pub dw: [[Option<f64>; 4]; 2],
    pub u_i: f64,
    /// Set when the md sample of a subsystem is missing.
    pub md_missing: [bool; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOptions {
    /// Evaluate the minimal-dissipation approach.
    pub md: bool,
    /// Relative first-law tolerance for md, scaled by the `ΔU^md` range.
    pub tol_quad: f64,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self { md: true, tol_quad: DEFAULT_TOL_QUAD }
    }
}

#[derive(Debug, Clone)]
pub struct ThermoTrajectory {
    grid: TimeGrid,
    energies: Vec<EnergySample>,
    series: [[Quantities; 4]; 2],
    trace_k: [Vec<Option<f64>>; 2],
    diagnostics: [MdDiagnostics; 2],
    tol_quad: f64,
}

impl ThermoTrajectory {
    pub fn compute(prop: &Propagator, grid: &TimeGrid, opts: &TrajectoryOptions) -> Result<Self> {
        let energies: Vec<EnergySample> = grid.times().par_iter().map(|&t| prop.energies(t)).collect();
        let e = |x: Subsystem| energies.iter().map(|s| s.e[x.index()]).collect::<Vec<_>>();
        let e1 = e(Subsystem::One);
        let e2 = e(Subsystem::Two);
        let ui: Vec<f64> = energies.iter().map(|s| s.u_i).collect();

        let build = |x: Subsystem| -> Result<(Quantities, Vec<Option<f64>>, MdDiagnostics)> {
            let n = grid.len();
            if !opts.md {
                return Ok((
                    Quantities { du: vec![None; n], dq: vec![None; n], dw: vec![None; n] },
                    vec![None; n],
                    MdDiagnostics::default(),
                ));
            }
            let raw: Vec<Option<MdSample>> =
                grid.times().par_iter().map(|&t| sample_or_gap(prop.md_sample(t, x))).collect::<Result<_>>()?;
            let trace_k = raw.iter().map(|s| s.map(|s| s.trace_k)).collect();
            let points: Vec<Option<MdPoint>> = raw.iter().map(|s| s.map(MdPoint::from)).collect();
            let refine = |t: f64| prop.md_sample(t, x).ok().map(MdPoint::from);
            let (q, diag) = minimal_dissipation_quantities(&points, grid, refine);
            Ok((q, trace_k, diag))
        };
        let (md1, tk1, d1) = build(Subsystem::One)?;
        let (md2, tk2, d2) = build(Subsystem::Two)?;

        let series = [
            [weak_coupling_quantities(&e1), interaction_approach(&e2), bare_approach(&e1, &e2, &ui), md1],
            [weak_coupling_quantities(&e2), interaction_approach(&e1), bare_approach(&e2, &e1, &ui), md2],
        ];
        Ok(Self {
            grid: grid.clone(),
            energies,
            series,
            trace_k: [tk1, tk2],
            diagnostics: [d1, d2],
            tol_quad: opts.tol_quad,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn quantities(&self, x: Subsystem, a: Approach) -> &Quantities {
        &self.series[x.index()][a.index()]
    }

    /// Bare energies `E_1`, `E_2` and `U_I` at each node.
    pub fn energies(&self) -> &[EnergySample] {
        &self.energies
    }

    /// `ΔU_I(t)`.
    pub fn interaction_variation(&self) -> Vec<f64> {
        variation(&self.energies.iter().map(|s| s.u_i).collect::<Vec<_>>())
    }

    /// `Tr K_t` of subsystem `x`; `None` where singular or md is disabled.
    pub fn trace_k(&self, x: Subsystem) -> &[Option<f64>] {
        &self.trace_k[x.index()]
    }

    pub fn md_diagnostics(&self, x: Subsystem) -> &MdDiagnostics {
        &self.diagnostics[x.index()]
    }

    /// Number of md samples missing over both subsystems.
    pub fn missing_md_samples(&self) -> usize {
        Subsystem::BOTH
            .iter()
            .map(|&x| {
                let q = self.quantities(x, Approach::Md);
                (0..q.len()).filter(|&j| q.du[j].is_none() || q.dq[j].is_none() || q.dw[j].is_none()).count()
            })
            .sum()
    }

    pub fn sample(&self, j: usize) -> ThermoSample {
        let pick = |f: fn(&Quantities) -> &Vec<Option<f64>>| {
            let mut out = [[None; 4]; 2];
            for x in Subsystem::BOTH {
                for a in Approach::ALL {
                    out[x.index()][a.index()] = f(self.quantities(x, a))[j];
                }
            }
            out
        };
        let md_missing = Subsystem::BOTH.map(|x| {
            let q = self.quantities(x, Approach::Md);
            q.du[j].is_none() || q.dq[j].is_none() || q.dw[j].is_none()
        });
        ThermoSample {
            t: self.grid.times()[j],
            du: pick(|q| &q.du),
            dq: pick(|q| &q.dq),
            dw: pick(|q| &q.dw),
            u_i: self.energies[j].u_i - self.energies[0].u_i,
            md_missing,
        }
    }

    pub fn samples(&self) -> Vec<ThermoSample> {
        (0..self.len()).map(|j| self.sample(j)).collect()
    }

    /// Sums over both subsystems, indexed by [`Approach::index`].
    pub fn balances(&self) -> [Quantities; 4] {
        net_balances(self)
    }

    /// Absolute first-law tolerance for `(x, a)`: machine-level for the
    /// closed-form approaches, `tol_quad` times the `ΔU^md` range for md.
    pub fn first_law_tolerance(&self, x: Subsystem, a: Approach) -> f64 {
        let q = self.quantities(x, a);
        let range = |v: &[Option<f64>]| {
            let (lo, hi) =
                v.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &y| (l.min(y), h.max(y)));
            if hi >= lo {
                hi - lo
            } else {
                0.0
            }
        };
        match a {
            Approach::Md => self.tol_quad * range(&q.du).max(f64::MIN_POSITIVE),
            _ => 1e-12 * self.energies.iter().map(|s| s.e[x.index()].abs()).fold(1.0, f64::max),
        }
    }

    /// Largest `|ΔU − δQ − δW|` over present samples.
    pub fn max_first_law_residual(&self, x: Subsystem, a: Approach) -> f64 {
        self.quantities(x, a).first_law_residual().into_iter().flatten().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn sample_or_gap(r: Result<MdSample>) -> Result<Option<MdSample>> {
    match r {
        Ok(s) => Ok(Some(s)),
        Err(Error::SingularPropagator { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `ΔŪ`, `δQ̄`, `δW̄` per approach.
pub fn net_balances(traj: &ThermoTrajectory) -> [Quantities; 4] {
    Approach::ALL.map(|a| traj.quantities(Subsystem::One, a).sum(traj.quantities(Subsystem::Two, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::uniform(1.0, 2).is_err());
        assert!(TimeGrid::uniform(0.0, 10).is_err());
        assert!(TimeGrid::uniform(f64::NAN, 10).is_err());
        let g = TimeGrid::uniform(2.0, 5).unwrap();
        assert_eq!(g.times(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.t_max(), 2.0);
    }

    #[test]
    fn closed_form_approaches() {
        let e1 = [3.0, 3.5, 2.0];
        let e2 = [1.0, 0.25, 2.5];
        let ui = [0.1, 0.35, -0.4];
        let wc = weak_coupling_quantities(&e1);
        assert_eq!(wc.du, vec![Some(0.0), Some(0.5), Some(-1.0)]);
        assert_eq!(wc.du, wc.dq);
        assert!(wc.dw.iter().all(|w| *w == Some(0.0)));
        let int = interaction_approach(&e2);
        assert_eq!(int.du, vec![Some(0.0), Some(0.75), Some(-1.5)]);
        let bare = bare_approach(&e1, &e2, &ui);
        assert_eq!(bare.dq, int.dq);
        for r in bare.first_law_residual() {
            assert!(r.unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn md_from_smooth_integrands() {
        let grid = TimeGrid::uniform(3.0, 61).unwrap();
        let point = |t: f64| MdPoint { tr_ks: t.sin() + t * t, heat_rate: t.cos(), work_rate: 2.0 * t };
        let mut samples: Vec<Option<MdPoint>> = grid.times().iter().map(|&t| Some(point(t))).collect();
        samples[17] = None;
        let (q, diag) = minimal_dissipation_quantities(&samples, &grid, |t| Some(point(t)));
        assert_eq!(diag.singular_nodes, 1);
        assert_eq!(diag.exhausted_at, None);
        assert!(q.du[17].is_none() && q.dq[17].is_none());
        for (j, r) in q.first_law_residual().into_iter().enumerate() {
            if j != 17 {
                assert!(r.unwrap().abs() < 1e-7, "j={j}");
            }
        }
    }

    #[test]
    fn md_refinement_failure_truncates() {
        let grid = TimeGrid::uniform(1.0, 11).unwrap();
        let point = MdPoint { tr_ks: 0.0, heat_rate: 1.0, work_rate: 0.0 };
        let mut samples = vec![Some(point); 11];
        samples[4] = None;
        let (q, diag) = minimal_dissipation_quantities(&samples, &grid, |_| None);
        assert!((diag.exhausted_at.unwrap() - 0.3).abs() < 1e-15);
        assert!(q.dq[..3].iter().all(Option::is_some));
        assert!(q.dq[3..].iter().all(Option::is_none));
        assert!(q.du[5].is_some());
    }
}
