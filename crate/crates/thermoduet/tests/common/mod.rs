#![allow(dead_code)]

use thermoduet::ModelParams;

/// Dispersive homogeneous set.
pub fn dispersive() -> ModelParams {
    ModelParams::default()
}

/// Strong-coupling homogeneous sets with positive and negative detuning.
pub fn detuned(omega2: f64) -> ModelParams {
    ModelParams { omega2, gamma: 2e-3, ..ModelParams::default() }
}

/// `max|a − b| / max|b|` over paired samples.
pub fn rel_series_error(num: &[f64], reference: &[f64]) -> f64 {
    assert_eq!(num.len(), reference.len());
    let scale = reference.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let err = num.iter().zip(reference).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}

pub fn unwrap_all(v: &[Option<f64>]) -> Vec<f64> {
    v.iter().map(|x| x.expect("sample present")).collect()
}
