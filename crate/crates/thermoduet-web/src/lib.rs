//! Browser bindings: regime classification, homogeneous closed-form curves
//! and a small numeric trajectory.

use std::f64::consts::PI;

use thermoduet::analytic::{self, HomogeneousDerived};
use thermoduet::thermo::TrajectoryOptions;
use thermoduet::{classify_regime, Approach, ModelParams, Propagator, Subsystem, ThermoTrajectory, TimeGrid};
use wasm_bindgen::prelude::*;

/// Largest total mode count accepted by [`Scenario::trajectory`].
pub const MAX_MODES: usize = 120;
/// Largest grid accepted by either curve generator.
pub const MAX_POINTS: usize = 4000;
/// Values per row of [`Scenario::analytic_curves`].
pub const ANALYTIC_STRIDE: usize = 5;
/// Values per row of [`Scenario::trajectory`].
pub const TRAJECTORY_STRIDE: usize = 13;

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub n1: usize,
    pub n2: usize,
    pub omega1: f64,
    pub omega2: f64,
    pub g1: f64,
    pub g2: f64,
    pub gamma: f64,
    pub temp1: f64,
    pub temp2: f64,
    pub sigma: f64,
    pub seed: u32,
}

impl Default for Scenario {
    fn default() -> Self {
        let p = ModelParams::default();
        Self {
            n1: p.n1,
            n2: p.n2,
            omega1: p.omega1,
            omega2: p.omega2,
            g1: p.g1,
            g2: p.g2,
            gamma: p.gamma,
            temp1: p.temp1,
            temp2: p.temp2,
            sigma: p.sigma,
            seed: 0,
        }
    }
}

impl Scenario {
    pub fn params(&self) -> ModelParams {
        ModelParams {
            n1: self.n1,
            n2: self.n2,
            omega1: self.omega1,
            omega2: self.omega2,
            g1: self.g1,
            g2: self.g2,
            gamma: self.gamma,
            temp1: self.temp1,
            temp2: self.temp2,
            sigma: self.sigma,
            seed: u64::from(self.seed),
        }
    }

    fn points(n: usize) -> Result<usize, String> {
        if (3..=MAX_POINTS).contains(&n) {
            Ok(n)
        } else {
            Err(format!("n_points must lie in 3..={MAX_POINTS}, got {n}"))
        }
    }

    /// Rows `[t, ΔU_1^wc, ΔU_1^int, ΔU_1^md, ΔU_I]` over one period `2π/Ω`,
    /// from the closed forms and ignoring `sigma`.
    pub fn analytic_rows(&self, n_points: usize) -> Result<Vec<f64>, String> {
        let n = Self::points(n_points)?;
        let p = ModelParams { sigma: 0.0, ..self.params() };
        p.validate().map_err(|e| e.to_string())?;
        let d = HomogeneousDerived::new(&p).map_err(|e| e.to_string())?;
        if d.big_omega == 0.0 {
            return Err("uncoupled subsystems have no exchange period".into());
        }
        let t_max = 2.0 * PI / d.big_omega;
        let mut out = Vec::with_capacity(n * ANALYTIC_STRIDE);
        for k in 0..n {
            let t = t_max * k as f64 / (n - 1) as f64;
            let e = analytic::analytic_energies(t, &d);
            out.extend([t, e.bare(Subsystem::One), -e.bare(Subsystem::Two), e.md(Subsystem::One), e.interaction()]);
        }
        Ok(out)
    }

    /// Rows `[t, ΔU×4, δQ×4, δW×4]` for one subsystem, approaches in the
    /// order wc, int, bare, md; missing md samples are NaN.
    pub fn trajectory_rows(&self, t_max: f64, n_points: usize, subsystem: u8) -> Result<Vec<f64>, String> {
        let n = Self::points(n_points)?;
        let p = self.params();
        if p.n1 + p.n2 > MAX_MODES {
            return Err(format!("at most {MAX_MODES} modes in the browser, got {}", p.n1 + p.n2));
        }
        let x = match subsystem {
            1 => Subsystem::One,
            2 => Subsystem::Two,
            _ => return Err(format!("subsystem must be 1 or 2, got {subsystem}")),
        };
        let prop = Propagator::new(&p).map_err(|e| e.to_string())?;
        let grid = TimeGrid::uniform(t_max, n).map_err(|e| e.to_string())?;
        let traj = ThermoTrajectory::compute(&prop, &grid, &TrajectoryOptions::default()).map_err(|e| e.to_string())?;
        let mut out = Vec::with_capacity(n * TRAJECTORY_STRIDE);
        for (j, &t) in grid.times().iter().enumerate() {
            out.push(t);
            for pick in [0, 1, 2] {
                for a in Approach::ALL {
                    let q = traj.quantities(x, a);
                    let s = [&q.du, &q.dq, &q.dw][pick];
                    out.push(s[j].unwrap_or(f64::NAN));
                }
            }
        }
        Ok(out)
    }
}

#[wasm_bindgen]
impl Scenario {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Scenario {
        Scenario::default()
    }

    /// Regime report as plain text.
    pub fn classify(&self) -> String {
        classify_regime(&self.params()).to_string()
    }

    #[wasm_bindgen(js_name = analyticCurves)]
    pub fn analytic_curves(&self, n_points: usize) -> Result<Vec<f64>, JsError> {
        self.analytic_rows(n_points).map_err(|e| JsError::new(&e))
    }

    pub fn trajectory(&self, t_max: f64, n_points: usize, subsystem: u8) -> Result<Vec<f64>, JsError> {
        self.trajectory_rows(t_max, n_points, subsystem).map_err(|e| JsError::new(&e))
    }
}

#[wasm_bindgen(js_name = analyticStride)]
pub fn analytic_stride() -> usize {
    ANALYTIC_STRIDE
}

#[wasm_bindgen(js_name = trajectoryStride)]
pub fn trajectory_stride() -> usize {
    TRAJECTORY_STRIDE
}
