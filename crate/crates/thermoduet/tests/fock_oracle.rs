//! Gaussian moment dynamics against brute-force evolution in a truncated Fock space.

use std::f64::consts::PI;

use thermoduet::fock::{FockConfig, FockEvolution};
use thermoduet::linalg::{self, CMat};
use thermoduet::spectral::{self, BlockSpectra, MomentMatrix};
use thermoduet::{build_hamiltonian, sample_frequencies, ModelParams};

struct Setup {
    s0: MomentMatrix,
    spec: spectral::Spectrum,
    cfg: FockConfig,
}

fn setup(p: &ModelParams) -> Setup {
    let freqs = sample_frequencies(p).unwrap();
    let h = build_hamiltonian(p, &freqs).unwrap();
    let s0 = spectral::thermal_initial_moments(p, &BlockSpectra::new(&h).unwrap()).unwrap();
    let spec = spectral::diagonalize(&h).unwrap();
    let cfg = FockConfig::auto(p, h.clone()).unwrap();
    Setup { s0, spec, cfg }
}

fn gaussian(s: &Setup, t: f64) -> CMat {
    let u = spectral::one_particle_unitary(&s.spec, t);
    spectral::evolve_moments(&s.s0, &u, t).unwrap().s
}

fn pair(omega2: f64, gamma: f64) -> ModelParams {
    ModelParams { n1: 1, n2: 1, omega2, gamma, g1: 0.0, g2: 0.0, temp1: 0.6, temp2: 1.0, ..ModelParams::default() }
}

fn check_against_gaussian(p: &ModelParams, t_max: f64, points: usize) {
    let s = setup(p);
    let bound = s.cfg.tail_bound().unwrap();
    assert!(bound < 1e-6, "tail bound {bound:e}");
    let ev = FockEvolution::new(&s.cfg).unwrap();
    for k in 0..points {
        let t = t_max * k as f64 / (points - 1) as f64;
        let fock = ev.measure(t).occupations;
        let err = linalg::max_abs(&(&fock - gaussian(&s, t)));
        assert!(err <= 10.0 * bound, "t={t}: {err:e} vs bound {bound:e}");
    }
}

#[test]
fn resonant_pair_swaps_occupations() {
    let gamma = 0.05;
    let p = pair(1.0, gamma);
    let s = setup(&p);
    let bound = s.cfg.tail_bound().unwrap();
    let ev = FockEvolution::new(&s.cfg).unwrap();
    let n1 = s.s0.s[(0, 0)].re;
    let n2 = s.s0.s[(1, 1)].re;
    let t_max = 4.0 * PI / gamma;
    for k in 0..=400 {
        let t = t_max * k as f64 / 400.0;
        let occ = ev.measure(t).occupations;
        let expected = n1 + (n2 - n1) * (gamma * t).sin().powi(2);
        assert!((occ[(0, 0)].re - expected).abs() <= 10.0 * bound, "t={t}");
    }
}

#[test]
fn detuned_pair_matches_gaussian_moments() {
    let p = pair(0.7, 0.08);
    let omega = ((0.3f64).powi(2) + 4.0 * 0.08f64.powi(2)).sqrt();
    check_against_gaussian(&p, 4.0 * 2.0 * PI / omega, 300);
}

#[test]
fn three_modes_with_intra_block_coupling() {
    let p = ModelParams {
        n1: 2,
        n2: 1,
        omega1: 1.0,
        omega2: 1.2,
        g1: 0.04,
        gamma: 0.06,
        temp1: 0.5,
        temp2: 0.7,
        ..ModelParams::default()
    };
    check_against_gaussian(&p, 200.0, 120);
}

#[test]
fn uncoupled_pair_is_static() {
    let s = setup(&pair(0.8, 0.0));
    let ev = FockEvolution::new(&s.cfg).unwrap();
    let m0 = ev.measure(0.0).occupations;
    for t in [1.0, 7.5, 40.0, 300.0] {
        assert!(linalg::max_abs(&(&ev.measure(t).occupations - &m0)) <= 1e-12);
    }
}

#[test]
fn total_number_is_conserved() {
    let s = setup(&pair(0.7, 0.08));
    let ev = FockEvolution::new(&s.cfg).unwrap();
    let m0 = ev.measure(0.0);
    let n0: f64 = m0.occupations.diagonal().iter().map(|z| z.re).sum();
    for t in [0.3, 5.0, 50.0, 500.0] {
        let m = ev.measure(t);
        let n: f64 = m.occupations.diagonal().iter().map(|z| z.re).sum();
        assert!((n - n0).abs() <= 1e-10, "t={t}");
        assert!((m.norm - m0.norm).abs() <= 1e-12);
    }
}
