//! Physical parameters, Hamiltonian assembly, frequency sampling and regime labels.

use std::fmt;
use std::ops::Range;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Redraw cap per mode when a sampled frequency is not positive.
pub const MAX_REDRAWS: usize = 1000;
/// `|Δ|/Γ` at or above which the coupling counts as dispersive.
pub const R_DISP: f64 = 10.0;
/// `|Δ|/Γ` at or below which the coupling counts as ultrastrong.
pub const R_ULTRA: f64 = 0.1;
/// `N_x g_x / ω_x` at or below which a subsystem is non-collective.
pub const COLLECTIVE_LOW: f64 = 0.1;
/// `N_x g_x / ω_x` at or above which a subsystem is collective.
pub const COLLECTIVE_HIGH: f64 = 10.0;
/// Largest accepted `|h_ij|`; squares of larger entries overflow.
pub const MAX_ENTRY: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    One,
    Two,
}

impl Subsystem {
    pub const BOTH: [Subsystem; 2] = [Subsystem::One, Subsystem::Two];

    pub fn other(self) -> Self {
        match self {
            Subsystem::One => Subsystem::Two,
            Subsystem::Two => Subsystem::One,
        }
    }

    /// Zero-based index (0 for subsystem 1).
    pub fn index(self) -> usize {
        match self {
            Subsystem::One => 0,
            Subsystem::Two => 1,
        }
    }

    pub fn label(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Parameters of the bipartite model, with ħ = k_B = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
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
    pub seed: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            n1: 200,
            n2: 300,
            omega1: 1.0,
            omega2: 0.3,
            g1: 1e-5,
            g2: 1e-5,
            gamma: 1e-5,
            temp1: 0.6,
            temp2: 4.0,
            sigma: 0.0,
            seed: 0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParams { name, reason: format!("must be finite and > 0, got {v}") })
            }
        }
        fn finite(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams { name, reason: format!("must be finite, got {v}") })
            }
        }
        if self.n1 == 0 {
            return Err(Error::InvalidParams { name: "n1", reason: "must be at least 1".into() });
        }
        if self.n2 == 0 {
            return Err(Error::InvalidParams { name: "n2", reason: "must be at least 1".into() });
        }
        positive("omega1", self.omega1)?;
        positive("omega2", self.omega2)?;
        positive("temp1", self.temp1)?;
        positive("temp2", self.temp2)?;
        finite("g1", self.g1)?;
        finite("g2", self.g2)?;
        finite("gamma", self.gamma)?;
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParams {
                name: "sigma",
                reason: format!("must be finite and >= 0, got {}", self.sigma),
            });
        }
        Ok(())
    }

    pub fn modes(&self, x: Subsystem) -> usize {
        match x {
            Subsystem::One => self.n1,
            Subsystem::Two => self.n2,
        }
    }

    pub fn omega(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.omega1,
            Subsystem::Two => self.omega2,
        }
    }

    pub fn g(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.g1,
            Subsystem::Two => self.g2,
        }
    }

    pub fn temp(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.temp1,
            Subsystem::Two => self.temp2,
        }
    }

    pub fn beta(&self, x: Subsystem) -> f64 {
        1.0 / self.temp(x)
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }
}

/// Mode frequencies: first `n1` for subsystem 1, then `n2` for subsystem 2.
pub fn sample_frequencies(params: &ModelParams) -> Result<Vec<f64>> {
    params.validate()?;
    let mut out = Vec::with_capacity(params.dim());
    if params.sigma == 0.0 {
        out.extend(std::iter::repeat(params.omega1).take(params.n1));
        out.extend(std::iter::repeat(params.omega2).take(params.n2));
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for x in Subsystem::BOTH {
        let center = params.omega(x);
        let normal = Normal::new(center, params.sigma * center)
            .map_err(|e| Error::InvalidParams { name: "sigma", reason: e.to_string() })?;
        for _ in 0..params.modes(x) {
            let mut accepted = None;
            for _ in 0..=MAX_REDRAWS {
                let w = normal.sample(&mut rng);
                if w > 0.0 {
                    accepted = Some(w);
                    break;
                }
            }
            out.push(accepted.ok_or(Error::SamplingExhausted { subsystem: x.label(), retries: MAX_REDRAWS })?);
        }
    }
    Ok(out)
}

/// Real symmetric single-particle Hamiltonian with block layout `[[H₁, G], [Gᵀ, H₂]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    h: DMatrix<f64>,
    n1: usize,
    n2: usize,
}

impl HamiltonianMatrix {
    /// Assembles from blocks; only the upper triangles of `h1` and `h2` are read,
    /// and every lower entry is written as a copy of its mirror.
    pub fn from_blocks(h1: &DMatrix<f64>, h2: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<Self> {
        let n1 = h1.nrows();
        let n2 = h2.nrows();
        if h1.ncols() != n1 {
            return Err(Error::DimensionMismatch { expected: n1, got: h1.ncols() });
        }
        if h2.ncols() != n2 {
            return Err(Error::DimensionMismatch { expected: n2, got: h2.ncols() });
        }
        if g.shape() != (n1, n2) {
            return Err(Error::DimensionMismatch { expected: n1 * n2, got: g.len() });
        }
        let n = n1 + n2;
        let mut h = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = match (i < n1, j < n1) {
                    (true, true) => h1[(i, j)],
                    (false, false) => h2[(i - n1, j - n1)],
                    (true, false) => g[(i, j - n1)],
                    (false, true) => unreachable!("i <= j"),
                };
                if v.is_nan() || v.abs() > MAX_ENTRY {
                    return Err(Error::InvalidParams {
                        name: "hamiltonian",
                        reason: format!("entry ({i}, {j}) = {v} is not finite or exceeds {MAX_ENTRY:e} in magnitude"),
                    });
                }
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        Ok(Self { h, n1, n2 })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn modes(&self, x: Subsystem) -> usize {
        match x {
            Subsystem::One => self.n1,
            Subsystem::Two => self.n2,
        }
    }

    pub fn range(&self, x: Subsystem) -> Range<usize> {
        match x {
            Subsystem::One => 0..self.n1,
            Subsystem::Two => self.n1..self.n1 + self.n2,
        }
    }

    pub fn block(&self, x: Subsystem) -> DMatrix<f64> {
        let r = self.range(x);
        self.h.view((r.start, r.start), (r.len(), r.len())).clone_owned()
    }

    /// The `n1 × n2` inter-block coupling `G`.
    pub fn coupling(&self) -> DMatrix<f64> {
        self.h.view((0, self.n1), (self.n1, self.n2)).clone_owned()
    }

    pub fn max_abs(&self) -> f64 {
        self.h.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    /// Overwrites a single entry without mirroring it. Breaks symmetry on
    /// purpose; exists for negative-control checks of the verification path.
    #[doc(hidden)]
    pub fn with_unmirrored_entry(mut self, i: usize, j: usize, value: f64) -> Self {
        self.h[(i, j)] = value;
        self
    }
}

pub fn build_hamiltonian(params: &ModelParams, freqs: &[f64]) -> Result<HamiltonianMatrix> {
    let (n1, n2) = (params.n1, params.n2);
    if freqs.len() != n1 + n2 {
        return Err(Error::DimensionMismatch { expected: n1 + n2, got: freqs.len() });
    }
    if let Some(&bad) = freqs.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidParams { name: "freqs", reason: format!("frequency {bad} is not positive") });
    }
    let h1 = DMatrix::from_fn(n1, n1, |i, j| if i == j { freqs[i] } else { params.g1 });
    let h2 = DMatrix::from_fn(n2, n2, |i, j| if i == j { freqs[n1 + i] } else { params.g2 });
    let g = DMatrix::from_element(n1, n2, params.gamma);
    HamiltonianMatrix::from_blocks(&h1, &h2, &g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingRegime {
    Dispersive,
    Intermediate,
    Ultrastrong,
}

impl fmt::Display for CouplingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingRegime::Dispersive => "dispersive",
            CouplingRegime::Intermediate => "intermediate",
            CouplingRegime::Ultrastrong => "ultrastrong",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collectivity {
    NonCollective,
    Intermediate,
    Collective,
}

impl fmt::Display for Collectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Collectivity::NonCollective => "non-collective",
            Collectivity::Intermediate => "intermediate",
            Collectivity::Collective => "collective",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub nu1: f64,
    pub nu2: f64,
    pub delta: f64,
    pub big_gamma: f64,
    pub big_omega: f64,
    pub coupling_regime: CouplingRegime,
    pub collectivity: [Collectivity; 2],
    /// Set when the frequencies are distributed and the values above use central frequencies.
    pub nominal: bool,
}

impl RegimeReport {
    /// `|Δ|/Γ`, infinite for an uncoupled model.
    pub fn detuning_ratio(&self) -> f64 {
        if self.big_gamma == 0.0 {
            f64::INFINITY
        } else {
            self.delta.abs() / self.big_gamma
        }
    }
}

impl fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nu1            = {:.9}", self.nu1)?;
        writeln!(f, "nu2            = {:.9}", self.nu2)?;
        writeln!(f, "delta          = {:.9e}", self.delta)?;
        writeln!(f, "big_gamma      = {:.9e}", self.big_gamma)?;
        writeln!(f, "big_omega      = {:.9e}", self.big_omega)?;
        writeln!(f, "|delta|/gamma  = {:.6e}", self.detuning_ratio())?;
        writeln!(f, "coupling       = {}", self.coupling_regime)?;
        writeln!(f, "collectivity_1 = {}", self.collectivity[0])?;
        writeln!(f, "collectivity_2 = {}", self.collectivity[1])?;
        write!(f, "nominal        = {}", self.nominal)
    }
}

pub fn classify_regime(params: &ModelParams) -> RegimeReport {
    let nu = |x: Subsystem| params.omega(x) + (params.modes(x) as f64 - 1.0) * params.g(x);
    let nu1 = nu(Subsystem::One);
    let nu2 = nu(Subsystem::Two);
    let delta = nu1 - nu2;
    let big_gamma = 2.0 * ((params.n1 * params.n2) as f64).sqrt() * params.gamma.abs();
    let big_omega = delta.hypot(big_gamma);
    let ratio = if big_gamma == 0.0 { f64::INFINITY } else { delta.abs() / big_gamma };
    let coupling_regime = if ratio >= R_DISP {
        CouplingRegime::Dispersive
    } else if ratio <= R_ULTRA {
        CouplingRegime::Ultrastrong
    } else {
        CouplingRegime::Intermediate
    };
    let collectivity = Subsystem::BOTH.map(|x| {
        let r = params.modes(x) as f64 * params.g(x).abs() / params.omega(x);
        if r <= COLLECTIVE_LOW {
            Collectivity::NonCollective
        } else if r >= COLLECTIVE_HIGH {
            Collectivity::Collective
        } else {
            Collectivity::Intermediate
        }
    });
    RegimeReport { nu1, nu2, delta, big_gamma, big_omega, coupling_regime, collectivity, nominal: params.sigma > 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n1: usize, n2: usize) -> ModelParams {
        ModelParams { n1, n2, ..ModelParams::default() }
    }

    #[test]
    fn zero_spread_returns_central_values() {
        let p = ModelParams { n1: 2, n2: 2, omega1: 1.0, omega2: 0.3, ..ModelParams::default() };
        assert_eq!(sample_frequencies(&p).unwrap(), vec![1.0, 1.0, 0.3, 0.3]);
    }

    #[test]
    fn sampling_is_deterministic_by_seed() {
        let p = ModelParams { sigma: 0.1, seed: 42, ..small(20, 30) };
        assert_eq!(sample_frequencies(&p).unwrap(), sample_frequencies(&p).unwrap());
        let q = ModelParams { seed: 43, ..p.clone() };
        assert_ne!(sample_frequencies(&p).unwrap(), sample_frequencies(&q).unwrap());
    }

    #[test]
    fn huge_spread_still_positive() {
        let p = ModelParams { sigma: 3.0, seed: 7, ..small(50, 50) };
        assert!(sample_frequencies(&p).unwrap().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn two_by_two_assembly() {
        let p = ModelParams { gamma: 0.01, ..small(1, 1) };
        let h = build_hamiltonian(&p, &[1.0, 0.3]).unwrap();
        assert_eq!(h.matrix(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.01, 0.01, 0.3]));
    }

    #[test]
    fn decoupled_assembly() {
        let p = ModelParams { g1: 0.1, gamma: 0.0, ..small(2, 1) };
        let h = build_hamiltonian(&p, &[1.0, 1.0, 0.3]).unwrap();
        let want = DMatrix::from_row_slice(3, 3, &[1.0, 0.1, 0.0, 0.1, 1.0, 0.0, 0.0, 0.0, 0.3]);
        assert_eq!(h.matrix(), &want);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = small(2, 2);
        assert!(matches!(build_hamiltonian(&p, &[1.0; 3]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(ModelParams { n1: 0, ..small(1, 1) }.validate().is_err());
        assert!(ModelParams { temp2: 0.0, ..small(1, 1) }.validate().is_err());
        assert!(ModelParams { sigma: -0.1, ..small(1, 1) }.validate().is_err());
        assert!(ModelParams { omega1: f64::NAN, ..small(1, 1) }.validate().is_err());
    }

    #[test]
    fn default_set_classification() {
        let r = classify_regime(&ModelParams::default());
        assert!((r.nu1 - 1.00199).abs() < 1e-12);
        assert!((r.nu2 - 0.30299).abs() < 1e-12);
        assert!((r.delta - 0.699).abs() < 1e-12);
        let gamma_oracle = 2.0 * (60000.0_f64).sqrt() * 1e-5;
        assert!((r.big_gamma - gamma_oracle).abs() < 1e-15);
        assert!((r.detuning_ratio() - 142.68).abs() < 0.01);
        assert_eq!(r.coupling_regime, CouplingRegime::Dispersive);
        assert_eq!(r.collectivity, [Collectivity::NonCollective; 2]);
        assert!(!r.nominal);
    }

    #[test]
    fn ultrastrong_and_collective_labels() {
        let mut p = ModelParams { gamma: 1.0, ..ModelParams::default() };
        p.omega2 = p.omega1 + 199e-5 - 299e-5 + 1e-3 * 2.0 * (60000.0_f64).sqrt();
        let r = classify_regime(&p);
        assert!((r.detuning_ratio() - 1e-3).abs() < 1e-9);
        assert_eq!(r.coupling_regime, CouplingRegime::Ultrastrong);

        let p = ModelParams { g1: 0.1, g2: 0.1, ..ModelParams::default() };
        assert_eq!(classify_regime(&p).collectivity[0], Collectivity::Collective);
    }

    #[test]
    fn distributed_report_is_nominal() {
        let p = ModelParams { sigma: 0.1, ..ModelParams::default() };
        assert!(classify_regime(&p).nominal);
    }

    #[test]
    fn rejects_overflowing_entries() {
        let p = ModelParams { n1: 1, n2: 1, gamma: -1e300, ..ModelParams::default() };
        assert!(matches!(build_hamiltonian(&p, &[1.0, 0.3]), Err(Error::InvalidParams { .. })));
    }
}
