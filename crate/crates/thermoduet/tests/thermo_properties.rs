mod common;

use std::f64::consts::PI;

use common::{detuned, dispersive};
use proptest::prelude::*;
use thermoduet::analytic::HomogeneousDerived;
use thermoduet::thermo::{Quantities, TrajectoryOptions};
use thermoduet::{Approach, ModelParams, Propagator, Subsystem, ThermoTrajectory, TimeGrid};

fn trajectory(p: &ModelParams, t_max: f64, n: usize) -> ThermoTrajectory {
    let prop = Propagator::new(p).unwrap();
    let grid = TimeGrid::uniform(t_max, n).unwrap();
    ThermoTrajectory::compute(&prop, &grid, &TrajectoryOptions::default()).unwrap()
}

fn period(p: &ModelParams) -> f64 {
    2.0 * PI / HomogeneousDerived::new(p).unwrap().big_omega
}

fn max_abs(v: &[Option<f64>]) -> f64 {
    v.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[Option<f64>], b: &[Option<f64>]) -> f64 {
    a.iter().zip(b).filter_map(|(x, y)| Some((x.as_ref()? - y.as_ref()?).abs())).fold(0.0, f64::max)
}

fn all_series(q: &Quantities) -> [&Vec<Option<f64>>; 3] {
    [&q.du, &q.dq, &q.dw]
}

#[test]
fn first_law_holds_per_approach() {
    for p in [dispersive(), detuned(0.3), detuned(1.7)] {
        let traj = trajectory(&p, 2.0 * period(&p), 801);
        for x in Subsystem::BOTH {
            for a in Approach::ALL {
                let tol = traj.first_law_tolerance(x, a);
                let r = traj.max_first_law_residual(x, a);
                assert!(r <= tol, "{x} {a}: {r:e} > {tol:e}");
            }
        }
    }
}

#[test]
fn md_residual_shrinks_under_grid_halving() {
    for p in [dispersive(), detuned(1.7)] {
        let t_max = period(&p);
        let coarse = trajectory(&p, t_max, 41);
        let fine = trajectory(&p, t_max, 81);
        for x in Subsystem::BOTH {
            let rc = coarse.max_first_law_residual(x, Approach::Md);
            let rf = fine.max_first_law_residual(x, Approach::Md);
            assert!(rc >= 4.0 * rf, "{x}: {rc:e} vs {rf:e}");
        }
    }
}

#[test]
fn balance_identities() {
    let p = ModelParams { sigma: 0.1, n1: 40, n2: 60, gamma: 2e-3, omega2: 1.7, seed: 9, ..ModelParams::default() };
    let traj = trajectory(&p, 30.0, 301);
    let ui: Vec<Option<f64>> = traj.interaction_variation().into_iter().map(Some).collect();
    let scale = max_abs(&ui);
    let b = traj.balances();
    let neg = |v: &[Option<f64>], k: f64| v.iter().map(|x| x.map(|y| k * y)).collect::<Vec<_>>();
    assert!(max_diff(&b[Approach::Int.index()].du, &ui) <= 1e-10 * scale);
    assert!(max_diff(&b[Approach::Bare.index()].du, &neg(&ui, -1.0)) <= 1e-10 * scale);
    assert!(max_diff(&b[Approach::Bare.index()].dq, &ui) <= 1e-10 * scale);
    assert!(max_diff(&b[Approach::Bare.index()].dw, &neg(&ui, -2.0)) <= 1e-10 * scale);
    assert_eq!(max_abs(&b[Approach::Int.index()].dw), 0.0);
    for x in Subsystem::BOTH {
        let int = traj.quantities(x, Approach::Int);
        let bare = traj.quantities(x, Approach::Bare);
        assert_eq!(int.dq, bare.dq);
        assert!(int.dw.iter().all(|w| *w == Some(0.0)));
        let swapped = traj.quantities(x.other(), Approach::Bare);
        assert_eq!(int.dq, neg(&swapped.du, -1.0));
    }
    assert_eq!(traj.quantities(Subsystem::One, Approach::Bare).dw, traj.quantities(Subsystem::Two, Approach::Bare).dw);
}

#[test]
fn identical_subsystems_at_equal_temperature_stay_still() {
    let p = ModelParams { n1: 50, n2: 50, omega2: 1.0, temp2: 0.6, gamma: 2e-3, ..ModelParams::default() };
    let traj = trajectory(&p, 2.0 * period(&p), 400);
    for x in Subsystem::BOTH {
        let tol = 1e-12 * traj.energies()[0].e[x.index()].abs().max(1.0);
        for a in Approach::ALL {
            for s in all_series(traj.quantities(x, a)) {
                assert!(max_abs(s) <= tol, "{x} {a}: {:e}", max_abs(s));
            }
        }
    }
    assert!(traj.interaction_variation().iter().all(|v| v.abs() <= 1e-12));
}

#[test]
fn equal_collective_frequencies_make_approaches_agree() {
    let omega2 = 1.0 + 199.0 * 1e-5 - 299.0 * 1e-5;
    let p = ModelParams { omega2, gamma: 2e-4, ..ModelParams::default() };
    let d = HomogeneousDerived::new(&p).unwrap();
    assert!(d.delta.abs() < 1e-14);
    let traj = trajectory(&p, 2.0 * PI / d.big_omega, 400);
    assert!(traj.interaction_variation().iter().all(|v| v.abs() <= 1e-9));
    for x in Subsystem::BOTH {
        let wc = traj.quantities(x, Approach::Wc);
        let scale = max_abs(&wc.du);
        assert!(scale > 1e-3);
        for a in [Approach::Int, Approach::Bare, Approach::Md] {
            let q = traj.quantities(x, a);
            for (s, r) in all_series(q).into_iter().zip(all_series(wc)) {
                let d = max_diff(s, r);
                assert!(d <= 1e-9 * scale, "{x} {a}: {d:e}");
            }
        }
    }
}

#[test]
fn uncoupled_subsystems_give_zero_series() {
    let p = ModelParams { gamma: 0.0, sigma: 0.2, n1: 10, n2: 15, ..ModelParams::default() };
    let traj = trajectory(&p, 20.0, 101);
    for x in Subsystem::BOTH {
        for a in Approach::ALL {
            for s in all_series(traj.quantities(x, a)) {
                assert!(max_abs(s) <= 1e-12);
            }
        }
    }
}

#[test]
fn homogeneous_series_are_periodic() {
    let p = detuned(1.7);
    let t = period(&p);
    let traj = trajectory(&p, 2.0 * t, 401);
    let e = traj.energies();
    let e0 = e[0].e[0];
    assert!((e[200].e[0] - e0).abs() <= 1e-8 * e0.abs());
    assert!((e[400].e[0] - e0).abs() <= 1e-8 * e0.abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn role_swap_mirrors_subsystems(
        n1 in 1usize..5, n2 in 1usize..5,
        omega1 in 0.5f64..1.5, omega2 in 0.5f64..1.5,
        gamma in 0.0f64..0.1, temp1 in 0.3f64..3.0, temp2 in 0.3f64..3.0,
        seed in any::<u64>(),
    ) {
        let p = ModelParams { n1, n2, omega1, omega2, gamma, temp1, temp2, g1: 0.0, g2: 0.0, sigma: 0.0, seed };
        let q = ModelParams { n1: n2, n2: n1, omega1: omega2, omega2: omega1, temp1: temp2, temp2: temp1, ..p.clone() };
        let a = trajectory(&p, 10.0, 21);
        let b = trajectory(&q, 10.0, 21);
        for x in Subsystem::BOTH {
            for ap in Approach::ALL {
                let qa = a.quantities(x, ap);
                let qb = b.quantities(x.other(), ap);
                for (s, r) in all_series(qa).into_iter().zip(all_series(qb)) {
                    let scale = 1.0 + max_abs(r);
                    prop_assert!(max_diff(s, r) <= 1e-9 * scale, "{} {}", x, ap);
                }
            }
        }
    }

    #[test]
    fn energy_is_conserved(
        n1 in 1usize..8, n2 in 1usize..8, sigma in 0.0f64..0.3,
        gamma in 0.0f64..0.05, seed in any::<u64>(), t in 0.0f64..200.0,
    ) {
        let p = ModelParams { n1, n2, sigma, gamma, seed, omega2: 0.8, ..ModelParams::default() };
        let prop = Propagator::new(&p).unwrap();
        let total = |t: f64| { let e = prop.energies(t); e.e[0] + e.e[1] + e.u_i };
        let e0 = total(0.0);
        prop_assert!((total(t) - e0).abs() <= 1e-10 * e0.abs());
        let trace = |t: f64| -> f64 {
            Subsystem::BOTH.iter().map(|&x| prop.reduced_moments(t, x).diagonal().iter().map(|z| z.re).sum::<f64>()).sum()
        };
        let n0 = trace(0.0);
        prop_assert!((trace(t) - n0).abs() <= 1e-10 * n0);
    }
}
