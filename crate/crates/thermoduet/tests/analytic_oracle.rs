mod common;

use std::f64::consts::PI;

use common::{detuned, dispersive, rel_series_error, unwrap_all};
use nalgebra::DVector;
use thermoduet::analytic::{self, HomogeneousDerived};
use thermoduet::thermo::TrajectoryOptions;
use thermoduet::{Approach, ModelParams, Propagator, Subsystem, ThermoTrajectory, TimeGrid};

const EXACT_TOL: f64 = 1e-8;
const QUAD_TOL: f64 = 1e-6;

fn check_set(p: &ModelParams) {
    let d = HomogeneousDerived::new(p).unwrap();
    let grid = TimeGrid::uniform(2.0 * PI / d.big_omega, 2000).unwrap();
    let prop = Propagator::new(p).unwrap();
    let traj = ThermoTrajectory::compute(&prop, &grid, &TrajectoryOptions::default()).unwrap();
    let ts = grid.times();
    let energies: Vec<_> = ts.iter().map(|&t| analytic::analytic_energies(t, &d)).collect();

    let ui: Vec<f64> = energies.iter().map(|e| e.interaction()).collect();
    assert!(rel_series_error(&traj.interaction_variation(), &ui) < EXACT_TOL);

    for x in Subsystem::BOTH {
        let bare: Vec<f64> = energies.iter().map(|e| e.bare(x)).collect();
        let other: Vec<f64> = energies.iter().map(|e| -e.bare(x.other())).collect();
        let md: Vec<f64> = energies.iter().map(|e| e.md(x)).collect();
        let minus_ui: Vec<f64> = ui.iter().map(|v| -v).collect();
        let q = |a| traj.quantities(x, a);
        let cases = [
            ("wc du", unwrap_all(&q(Approach::Wc).du), &bare, EXACT_TOL),
            ("int du", unwrap_all(&q(Approach::Int).du), &other, EXACT_TOL),
            ("bare du", unwrap_all(&q(Approach::Bare).du), &bare, EXACT_TOL),
            ("bare dw", unwrap_all(&q(Approach::Bare).dw), &minus_ui, EXACT_TOL),
            ("md du", unwrap_all(&q(Approach::Md).du), &md, EXACT_TOL),
        ];
        for (name, num, refv, tol) in cases {
            let err = rel_series_error(&num, refv);
            assert!(err < tol, "{x} {name}: {err:e}");
        }
        let ex: Vec<_> = ts.iter().map(|&t| analytic::md_heat_work(t, &d, x).unwrap()).collect();
        let heat: Vec<f64> = ex.iter().map(|m| m.heat).collect();
        let work: Vec<f64> = ex.iter().map(|m| m.work).collect();
        let eh = rel_series_error(&unwrap_all(&q(Approach::Md).dq), &heat);
        let ew = rel_series_error(&unwrap_all(&q(Approach::Md).dw), &work);
        assert!(eh < QUAD_TOL, "{x} md heat: {eh:e}");
        assert!(ew < QUAD_TOL, "{x} md work: {ew:e}");

        let n = d.modes(x);
        let ones = DVector::from_element(n, 1.0);
        for (j, &t) in ts.iter().enumerate().step_by(37) {
            let tr = traj.trace_k(x)[j].unwrap();
            let sum_all = prop.k_quadratic_form(t, x, &ones).unwrap();
            let k = analytic::extract_coefficients(tr, sum_all, n);
            let a = analytic::analytic_effective_hamiltonian(t, &d, x).unwrap();
            assert!((k.diagonal - a.diagonal).abs() <= EXACT_TOL * a.diagonal.abs(), "{x} t={t}");
            let scale = a.collective.abs().max(a.diagonal.abs());
            assert!((k.collective - a.collective).abs() <= EXACT_TOL * scale, "{x} t={t}");
        }
    }
}

#[test]
fn dispersive_set_matches_closed_forms() {
    check_set(&dispersive());
}

#[test]
fn positive_detuning_matches_closed_forms() {
    check_set(&detuned(0.3));
}

#[test]
fn negative_detuning_matches_closed_forms() {
    check_set(&detuned(1.7));
}

#[test]
fn small_blocks_match_closed_forms() {
    let p = ModelParams { n1: 3, n2: 4, omega2: 0.8, g1: 0.05, g2: -0.02, gamma: 0.04, ..ModelParams::default() };
    check_set(&p);
}
