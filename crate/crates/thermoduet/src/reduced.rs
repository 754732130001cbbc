//! Reduced propagator, time-local generator and renormalized Hamiltonian of one subsystem.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ComplexLu};
use crate::model::{HamiltonianMatrix, Subsystem};
use crate::spectral::{unitary_derivative, Spectrum};

/// Condition number beyond which the reduced propagator counts as singular.
pub const KAPPA_MAX: f64 = 1e12;

fn diagonal_block(m: &CMat, h: &HamiltonianMatrix, which: Subsystem) -> CMat {
    let r = h.range(which);
    m.view((r.start, r.start), (r.len(), r.len())).clone_owned()
}

/// `Φ_t`, the subsystem block of `U_t`.
pub fn reduced_propagator(spec: &Spectrum, h: &HamiltonianMatrix, t: f64, which: Subsystem) -> CMat {
    diagonal_block(&unitary_derivative(spec, t, 0), h, which)
}

/// Generator `L_t = Φ̇_t·Φ_t⁻¹` together with the ingredients it was built from.
#[derive(Debug, Clone)]
pub struct GeneratorBlock {
    pub phi: CMat,
    pub phi_dot: CMat,
    pub l: CMat,
    pub condition: f64,
    lu: ComplexLu,
}

/// Solves `x·Φ = b` through the transposed system `Φᵀ·xᵀ = bᵀ`.
fn right_solve(lu_of_transpose: &ComplexLu, b: &CMat) -> CMat {
    let mut xt = b.transpose();
    lu_of_transpose.solve_in_place(&mut xt);
    xt.transpose()
}

/// Factors `Φᵀ` and estimates the condition of `Φ` against the unit scale of `U_t`.
pub(crate) fn factor_checked(phi: &CMat, t: f64) -> Result<(ComplexLu, f64)> {
    let lu = ComplexLu::new(&phi.transpose());
    let condition = lu.condition_estimate_against(1.0);
    if condition.is_nan() || condition > KAPPA_MAX {
        return Err(Error::SingularPropagator { t, condition });
    }
    Ok((lu, condition))
}

pub fn generator(spec: &Spectrum, h: &HamiltonianMatrix, t: f64, which: Subsystem) -> Result<GeneratorBlock> {
    let phi = diagonal_block(&unitary_derivative(spec, t, 0), h, which);
    let phi_dot = diagonal_block(&unitary_derivative(spec, t, 1), h, which);
    let (lu, condition) = factor_checked(&phi, t)?;
    let l = right_solve(&lu, &phi_dot);
    Ok(GeneratorBlock { phi, phi_dot, l, condition, lu })
}

/// `K = (L† − L)/(2i)`.
pub fn effective_hamiltonian(l: &CMat) -> CMat {
    linalg::anti_hermitian_to_hermitian(l)
}

/// `K̇` from `L̇ = Φ̈·Φ⁻¹ − L²`.
pub fn effective_hamiltonian_rate(spec: &Spectrum, h: &HamiltonianMatrix, t: f64, which: Subsystem) -> Result<CMat> {
    let g = generator(spec, h, t, which)?;
    Ok(rate_from_generator(spec, h, t, which, &g))
}

fn rate_from_generator(spec: &Spectrum, h: &HamiltonianMatrix, t: f64, which: Subsystem, g: &GeneratorBlock) -> CMat {
    let phi_ddot = diagonal_block(&unitary_derivative(spec, t, 2), h, which);
    let l_dot = right_solve(&g.lu, &phi_ddot) - linalg::cmul(&g.l, &g.l);
    linalg::anti_hermitian_to_hermitian(&l_dot)
}

/// All per-time reduced-dynamics data of one subsystem.
#[derive(Debug, Clone)]
pub struct EffectiveGenerator {
    pub which: Subsystem,
    pub t: f64,
    pub phi: CMat,
    pub l: CMat,
    pub k: CMat,
    pub k_dot: CMat,
    pub condition: f64,
}

impl EffectiveGenerator {
    pub fn compute(spec: &Spectrum, h: &HamiltonianMatrix, t: f64, which: Subsystem) -> Result<Self> {
        let g = generator(spec, h, t, which)?;
        let k_dot = rate_from_generator(spec, h, t, which, &g);
        let k = effective_hamiltonian(&g.l);
        Ok(Self { which, t, phi: g.phi, l: g.l, k, k_dot, condition: g.condition })
    }

    /// `Tr(K·S)` for a Hermitian reduced moment block.
    pub fn energy(&self, s_block: &CMat) -> f64 {
        trace_product(&self.k, s_block).re
    }
}

/// `Tr(A·B)`.
pub fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    linalg::frobenius_dot(&a.transpose(), b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, ModelParams};
    use crate::spectral::diagonalize;

    fn setup(p: &ModelParams, freqs: &[f64]) -> (HamiltonianMatrix, Spectrum) {
        let h = build_hamiltonian(p, freqs).unwrap();
        let sp = diagonalize(&h).unwrap();
        (h, sp)
    }

    #[test]
    fn initial_generator_is_minus_i_h() {
        let p = ModelParams { n1: 3, n2: 2, g1: 0.07, gamma: 0.04, ..ModelParams::default() };
        let (h, sp) = setup(&p, &[1.0, 1.2, 0.9, 0.3, 0.4]);
        let eg = EffectiveGenerator::compute(&sp, &h, 0.0, Subsystem::One).unwrap();
        let h1 = h.block(Subsystem::One).map(|v| Complex64::new(v, 0.0));
        assert!(linalg::max_abs(&(&eg.phi - CMat::identity(3, 3))) < 1e-14);
        assert!(linalg::max_abs(&(&eg.l + &h1 * linalg::I)) < 1e-13);
        assert!(linalg::max_abs(&(&eg.k - &h1)) < 1e-13);
    }

    #[test]
    fn closed_subsystem_has_constant_generator() {
        let p = ModelParams { n1: 2, n2: 2, g1: 0.1, gamma: 0.0, ..ModelParams::default() };
        let (h, sp) = setup(&p, &[1.0, 1.1, 0.3, 0.3]);
        let h1 = h.block(Subsystem::One).map(|v| Complex64::new(v, 0.0));
        for t in [0.3, 5.0, 40.0] {
            let eg = EffectiveGenerator::compute(&sp, &h, t, Subsystem::One).unwrap();
            let phi = &eg.phi;
            assert!(linalg::max_abs(&(phi.adjoint() * phi - CMat::identity(2, 2))) < 1e-13);
            assert!(linalg::max_abs(&(&eg.k - &h1)) < 1e-12);
            assert!(linalg::max_abs(&eg.k_dot) < 1e-12);
        }
    }

    #[test]
    fn exactly_singular_block_is_reported() {
        // Resonant 1+1 exchange empties mode 1 completely at γt = π/2.
        let gamma = 0.25;
        let p = ModelParams { n1: 1, n2: 1, omega2: 1.0, gamma, ..ModelParams::default() };
        let (h, sp) = setup(&p, &[1.0, 1.0]);
        let t = std::f64::consts::FRAC_PI_2 / gamma;
        match generator(&sp, &h, t, Subsystem::One) {
            Err(Error::SingularPropagator { condition, .. }) => assert!(condition > KAPPA_MAX),
            other => panic!("expected singular propagator, got {other:?}"),
        }
    }
}
