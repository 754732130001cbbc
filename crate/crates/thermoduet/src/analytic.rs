//! Closed forms for homogeneous subsystems and their dispersive and
//! ultrastrong expansions.
//!
//! With equal frequencies and couplings inside each block, only the two
//! collective modes `1/√N_x` exchange energy. They see the 2×2 Hamiltonian
//! `[[ν₁, Γ/2], [Γ/2, ν₂]]`; every other mode is a decoupled normal mode.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Subsystem};
use crate::reduced::KAPPA_MAX;
use crate::spectral::bose;

/// `|α(t)|²` below this marks the reduced propagator singular.
pub const ALPHA_FLOOR: f64 = 1.0 / (KAPPA_MAX * KAPPA_MAX);

/// Guard-band factor: the ultrastrong expansions are rejected where
/// `Γ² cos²(Γt/2) < GUARD_BAND · Δ²`.
pub const GUARD_BAND: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousDerived {
    pub n1: usize,
    pub n2: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu: f64,
    pub delta: f64,
    pub big_gamma: f64,
    pub big_omega: f64,
    pub lambda: f64,
    pub mu: f64,
    pub f_plus: f64,
    pub f_minus: f64,
    pub n_eps1: f64,
    pub n_eps2: f64,
    pub n_nu1: f64,
    pub n_nu2: f64,
}

impl HomogeneousDerived {
    /// Uses the nominal frequencies; `sigma` is ignored.
    pub fn new(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        let eps1 = p.omega1 - p.g1;
        let eps2 = p.omega2 - p.g2;
        let nu1 = p.omega1 + (p.n1 as f64 - 1.0) * p.g1;
        let nu2 = p.omega2 + (p.n2 as f64 - 1.0) * p.g2;
        for (x, e, n) in [(1u8, eps1, p.n1), (2, eps2, p.n2)] {
            if n > 1 && e <= 0.0 {
                return Err(Error::NonPositiveModeEnergy { subsystem: x, energy: e });
            }
        }
        for (x, e) in [(1u8, nu1), (2, nu2)] {
            if e <= 0.0 {
                return Err(Error::NonPositiveModeEnergy { subsystem: x, energy: e });
            }
        }
        let delta = nu1 - nu2;
        let big_gamma = 2.0 * ((p.n1 * p.n2) as f64).sqrt() * p.gamma;
        let big_omega = delta.hypot(big_gamma);
        let nu = nu1 + nu2;
        let ratio = if big_omega > 0.0 { delta / big_omega } else { 1.0 };
        let (b1, b2) = (1.0 / p.temp1, 1.0 / p.temp2);
        Ok(Self {
            n1: p.n1,
            n2: p.n2,
            eps1,
            eps2,
            nu1,
            nu2,
            nu,
            delta,
            big_gamma,
            big_omega,
            lambda: 0.5 * (nu + big_omega),
            mu: 0.5 * (nu - big_omega),
            f_plus: (0.5 * (1.0 + ratio)).sqrt(),
            f_minus: (0.5 * (1.0 - ratio)).sqrt(),
            n_eps1: bose(b1, eps1),
            n_eps2: bose(b2, eps2),
            n_nu1: bose(b1, nu1),
            n_nu2: bose(b2, nu2),
        })
    }

    pub fn modes(&self, x: Subsystem) -> usize {
        match x {
            Subsystem::One => self.n1,
            Subsystem::Two => self.n2,
        }
    }

    pub fn eps(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.eps1,
            Subsystem::Two => self.eps2,
        }
    }

    pub fn nu_x(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.nu1,
            Subsystem::Two => self.nu2,
        }
    }

    pub fn n_eps(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.n_eps1,
            Subsystem::Two => self.n_eps2,
        }
    }

    pub fn n_nu(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.n_nu1,
            Subsystem::Two => self.n_nu2,
        }
    }

    /// `|α(t)|² = 1 − (Γ²/Ω²) sin²(Ωt/2)`.
    pub fn alpha_sq(&self, t: f64) -> f64 {
        1.0 - self.xi_sq(t)
    }

    /// `|ξ(t)|²`.
    pub fn xi_sq(&self, t: f64) -> f64 {
        if self.big_omega == 0.0 {
            return 0.0;
        }
        let r = self.big_gamma / self.big_omega;
        r * r * (0.5 * self.big_omega * t).sin().powi(2)
    }

    /// `d|α|²/dt`.
    pub fn alpha_sq_rate(&self, t: f64) -> f64 {
        if self.big_omega == 0.0 {
            return 0.0;
        }
        -self.big_gamma * self.big_gamma / (2.0 * self.big_omega) * (self.big_omega * t).sin()
    }

    /// Sorted single-particle spectrum of the full Hamiltonian.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n1 + self.n2);
        out.extend(std::iter::repeat(self.eps1).take(self.n1 - 1));
        out.extend(std::iter::repeat(self.eps2).take(self.n2 - 1));
        out.push(self.lambda);
        out.push(self.mu);
        out.sort_by(f64::total_cmp);
        out
    }

    fn check_alpha(&self, t: f64) -> Result<f64> {
        let a = self.alpha_sq(t);
        if a < ALPHA_FLOOR {
            return Err(Error::SingularPropagator { t, condition: 1.0 / a.max(0.0).sqrt() });
        }
        Ok(a)
    }
}

fn phase(w: f64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -w * t)
}

/// `(α₁, α₂, ξ)`: collective-mode amplitudes of the one-particle propagator.
pub fn alpha_xi(t: f64, d: &HomogeneousDerived) -> (Complex64, Complex64, Complex64) {
    let (el, em) = (phase(d.lambda, t), phase(d.mu, t));
    let (fp2, fm2) = (d.f_plus * d.f_plus, d.f_minus * d.f_minus);
    (el * fp2 + em * fm2, el * fm2 + em * fp2, (el - em) * (d.f_plus * d.f_minus))
}

/// `dα_x/dt`.
pub fn alpha_rate(t: f64, d: &HomogeneousDerived, x: Subsystem) -> Complex64 {
    let (el, em) = (phase(d.lambda, t), phase(d.mu, t));
    let (fp2, fm2) = (d.f_plus * d.f_plus, d.f_minus * d.f_minus);
    let (wl, wm) = match x {
        Subsystem::One => (fp2, fm2),
        Subsystem::Two => (fm2, fp2),
    };
    -Complex64::i() * (el * (d.lambda * wl) + em * (d.mu * wm))
}

/// `(G(t), B(t))` with `G = G₁ = −G₂`.
pub fn g_b_functions(t: f64, d: &HomogeneousDerived) -> (f64, f64) {
    let a = d.alpha_sq(t);
    let g = (d.n_nu2 - d.n_nu1) * d.xi_sq(t);
    (g, -0.5 * d.xi_sq(t) / a)
}

/// Energy variations of both subsystems in the bare and md pictures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticEnergies {
    pub de1: f64,
    pub de2: f64,
    pub du1_md: f64,
    pub du2_md: f64,
}

impl AnalyticEnergies {
    /// `ΔU_I = −ΔE₁ − ΔE₂`.
    pub fn interaction(&self) -> f64 {
        -self.de1 - self.de2
    }

    pub fn bare(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.de1,
            Subsystem::Two => self.de2,
        }
    }

    pub fn md(&self, x: Subsystem) -> f64 {
        match x {
            Subsystem::One => self.du1_md,
            Subsystem::Two => self.du2_md,
        }
    }
}

pub fn analytic_energies(t: f64, d: &HomogeneousDerived) -> AnalyticEnergies {
    let (g, b) = g_b_functions(t, d);
    AnalyticEnergies {
        de1: d.nu1 * g,
        de2: -d.nu2 * g,
        du1_md: d.nu1 * g - b * d.delta * (d.n_nu1 + g),
        du2_md: -d.nu2 * g + b * d.delta * (d.n_nu2 - g),
    }
}

/// `K = diagonal·I + collective·J/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCoefficients {
    pub diagonal: f64,
    pub collective: f64,
}

/// Collective eigenvalue `κ_x(t)` of `K_t`.
fn kappa(d: &HomogeneousDerived, a: f64, x: Subsystem) -> f64 {
    let s = match x {
        Subsystem::One => 1.0,
        Subsystem::Two => -1.0,
    };
    0.5 * d.nu + s * d.delta / (2.0 * a)
}

/// `dκ_x/dt`.
fn kappa_rate(d: &HomogeneousDerived, a: f64, a_dot: f64, x: Subsystem) -> f64 {
    let s = match x {
        Subsystem::One => 1.0,
        Subsystem::Two => -1.0,
    };
    -s * d.delta * a_dot / (2.0 * a * a)
}

pub fn analytic_effective_hamiltonian(t: f64, d: &HomogeneousDerived, which: Subsystem) -> Result<KCoefficients> {
    let a = d.check_alpha(t)?;
    let eps = d.eps(which);
    Ok(KCoefficients { diagonal: eps, collective: kappa(d, a, which) - eps })
}

/// Collective coefficient of `K̇_t`; the diagonal part is constant.
pub fn analytic_effective_hamiltonian_rate(t: f64, d: &HomogeneousDerived, which: Subsystem) -> Result<f64> {
    let a = d.check_alpha(t)?;
    Ok(kappa_rate(d, a, d.alpha_sq_rate(t), which))
}

/// `Φ_t = diagonal·I + collective·J/N`.
pub fn propagator_block_coefficients(t: f64, d: &HomogeneousDerived, which: Subsystem) -> (Complex64, Complex64) {
    let (a1, a2, _) = alpha_xi(t, d);
    let alpha = match which {
        Subsystem::One => a1,
        Subsystem::Two => a2,
    };
    let e = phase(d.eps(which), t);
    (e, alpha - e)
}

/// `L_t = diagonal·I + collective·J/N`.
pub fn generator_coefficients(t: f64, d: &HomogeneousDerived, which: Subsystem) -> Result<(Complex64, Complex64)> {
    d.check_alpha(t)?;
    let (a1, a2, _) = alpha_xi(t, d);
    let alpha = match which {
        Subsystem::One => a1,
        Subsystem::Two => a2,
    };
    let diag = -Complex64::i() * d.eps(which);
    Ok((diag, alpha_rate(t, d, which) / alpha - diag))
}

/// Reduced moments `Tr_x̄ S_t = diagonal·I + collective·J/N`.
pub fn reduced_moment_coefficients(t: f64, d: &HomogeneousDerived, which: Subsystem) -> (f64, f64) {
    let (g, _) = g_b_functions(t, d);
    let n_coll = match which {
        Subsystem::One => d.n_nu1 + g,
        Subsystem::Two => d.n_nu2 - g,
    };
    let n_eps = d.n_eps(which);
    (n_eps, n_coll - n_eps)
}

/// Closed-form md heat and work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdExchange {
    pub heat: f64,
    pub work: f64,
}

pub fn md_heat_work(t: f64, d: &HomogeneousDerived, which: Subsystem) -> Result<MdExchange> {
    let a = d.check_alpha(t)?;
    let (n1, n2) = (d.n_nu1, d.n_nu2);
    let (half_nu, half_delta) = (0.5 * d.nu, 0.5 * d.delta);
    let (inv, ln) = (1.0 / a - 1.0, a.ln());
    Ok(match which {
        Subsystem::One => MdExchange {
            heat: (n2 - n1) * (half_nu * (1.0 - a) - half_delta * ln),
            work: half_delta * (n2 * inv + (n2 - n1) * ln),
        },
        Subsystem::Two => MdExchange {
            heat: (n1 - n2) * (half_nu * (1.0 - a) + half_delta * ln),
            work: -half_delta * (n1 * inv + (n1 - n2) * ln),
        },
    })
}

/// Closed-form md heat and work rates `Tr(K Ṡ)`, `Tr(K̇ S)`.
pub fn md_rates(t: f64, d: &HomogeneousDerived, which: Subsystem) -> Result<MdExchange> {
    let a = d.check_alpha(t)?;
    let a_dot = d.alpha_sq_rate(t);
    let g_dot = -(d.n_nu2 - d.n_nu1) * a_dot;
    let (g, _) = g_b_functions(t, d);
    let (occ, occ_dot) = match which {
        Subsystem::One => (d.n_nu1 + g, g_dot),
        Subsystem::Two => (d.n_nu2 - g, -g_dot),
    };
    Ok(MdExchange { heat: kappa(d, a, which) * occ_dot, work: kappa_rate(d, a, a_dot, which) * occ })
}

/// Leading dispersive forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveExpansion {
    /// `δQ_x^md` indexed by subsystem.
    pub heat: [f64; 2],
    pub b: f64,
}

pub fn dispersive_expansions(t: f64, d: &HomogeneousDerived) -> DispersiveExpansion {
    if d.big_gamma == 0.0 {
        return DispersiveExpansion { heat: [0.0; 2], b: 0.0 };
    }
    let r2 = (d.big_gamma / d.delta).powi(2);
    let s_delta = (0.5 * d.delta * t).sin().powi(2);
    let s_omega = (0.5 * d.big_omega * t).sin().powi(2);
    DispersiveExpansion {
        heat: [d.nu1 * (d.n_nu2 - d.n_nu1) * r2 * s_delta, d.nu2 * (d.n_nu1 - d.n_nu2) * r2 * s_delta],
        b: -0.5 * r2 * s_omega,
    }
}

/// Leading ultrastrong forms for subsystem 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltrastrongExpansion {
    pub du: f64,
    pub heat: f64,
    pub work: f64,
}

pub fn ultrastrong_expansions(t: f64, d: &HomogeneousDerived) -> Result<UltrastrongExpansion> {
    let c = (0.5 * d.big_gamma * t).cos();
    if (d.big_gamma * c).powi(2) < GUARD_BAND * d.delta * d.delta || c == 0.0 {
        return Err(Error::GuardBand { t });
    }
    let diff = d.n_nu2 - d.n_nu1;
    let s2 = (0.5 * d.big_gamma * t).sin().powi(2);
    let tan2 = s2 / (c * c);
    let ln = c.abs().ln();
    let peak = 0.5 * d.delta * d.n_nu2 * tan2;
    Ok(UltrastrongExpansion {
        du: 0.5 * d.nu * diff * s2 + peak,
        heat: diff * (0.5 * d.nu * s2 - d.delta * ln),
        work: diff * d.delta * ln + peak,
    })
}

/// Homogeneous K coefficients from a full matrix block: `ε = (Tr K − 1ᵀK1/N)/(N−1)`,
/// collective `= 1ᵀK1/N − ε`.
pub fn extract_coefficients(trace: f64, sum_all: f64, n: usize) -> KCoefficients {
    let nf = n as f64;
    let coll_eig = sum_all / nf;
    let diagonal = if n > 1 { (trace - coll_eig) / (nf - 1.0) } else { 0.0 };
    KCoefficients { diagonal, collective: coll_eig - diagonal }
}
