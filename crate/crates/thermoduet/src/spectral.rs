//! Normal-mode decomposition and exact propagation of second moments.
//!
//! Conventions: `H = Z·diag(d)·Zᵀ`, `U_t = Z·e^{−iDt}·Zᵀ` and
//! `S_t = conj(U_t)·S_0·U_t` with `S_ij = ⟨a†_i a_j⟩`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RMat};
use crate::model::{HamiltonianMatrix, ModelParams, Subsystem};

/// Mean thermal occupation `1/(e^{βx} − 1)`.
pub fn bose(beta: f64, x: f64) -> f64 {
    1.0 / (beta * x).exp_m1()
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub z: RMat,
    pub eigenvalues: DVector<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Z·diag(f(d_k))·Zᵀ`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> RMat {
        let n = self.dim();
        let mut scaled = self.z.clone();
        for k in 0..n {
            let w = f(self.eigenvalues[k]);
            scaled.column_mut(k).scale_mut(w);
        }
        scaled * self.z.transpose()
    }
}

pub fn diagonalize(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let (z, eigenvalues) = linalg::symmetric_eigen(h.matrix())?;
    Ok(Spectrum { z, eigenvalues })
}

/// `(d/dt)^order U_t = Z·(−iD)^order·e^{−iDt}·Zᵀ`.
pub fn unitary_derivative(spec: &Spectrum, t: f64, order: u32) -> CMat {
    let n = spec.dim();
    let factors: Vec<Complex64> = (0..n)
        .map(|k| {
            let d = spec.eigenvalues[k];
            Complex64::new(0.0, -d).powu(order) * Complex64::from_polar(1.0, -d * t)
        })
        .collect();
    let mut zr = spec.z.clone();
    let mut zi = spec.z.clone();
    for (k, f) in factors.iter().enumerate() {
        zr.column_mut(k).scale_mut(f.re);
        zi.column_mut(k).scale_mut(f.im);
    }
    let zt = spec.z.transpose();
    linalg::complexify(&(zr * &zt), &(zi * &zt))
}

pub fn one_particle_unitary(spec: &Spectrum, t: f64) -> CMat {
    unitary_derivative(spec, t, 0)
}

#[derive(Debug, Clone)]
pub struct MomentMatrix {
    pub s: CMat,
    pub t: f64,
}

impl MomentMatrix {
    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.s.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::max_abs(&(&self.s - self.s.adjoint()))
    }

    /// The reduced block `Tr_x̄ S` of subsystem `x`.
    pub fn block(&self, h: &HamiltonianMatrix, x: Subsystem) -> CMat {
        let r = h.range(x);
        self.s.view((r.start, r.start), (r.len(), r.len())).clone_owned()
    }
}

/// Eigensystems of the uncoupled blocks `H₁`, `H₂`.
#[derive(Debug, Clone)]
pub struct BlockSpectra {
    pub blocks: [Spectrum; 2],
}

impl BlockSpectra {
    pub fn new(h: &HamiltonianMatrix) -> Result<Self> {
        let mk = |x| {
            let (z, eigenvalues) = linalg::symmetric_eigen(&h.block(x))?;
            Ok::<_, Error>(Spectrum { z, eigenvalues })
        };
        Ok(Self { blocks: [mk(Subsystem::One)?, mk(Subsystem::Two)?] })
    }

    pub fn get(&self, x: Subsystem) -> &Spectrum {
        &self.blocks[x.index()]
    }

    /// Bose occupations of the block eigenmodes at the subsystem temperatures.
    pub fn occupations(&self, params: &ModelParams, x: Subsystem) -> Result<DVector<f64>> {
        let beta = params.beta(x);
        let sp = self.get(x);
        if let Some(&bad) = sp.eigenvalues.iter().find(|e| **e <= 0.0) {
            return Err(Error::NonPositiveModeEnergy { subsystem: x.label(), energy: bad });
        }
        Ok(sp.eigenvalues.map(|e| bose(beta, e)))
    }
}

/// Thermal product state of the uncoupled blocks, block `x` equal to
/// `P_x·diag(n_x)·P_xᵀ`.
pub fn thermal_initial_moments(params: &ModelParams, blocks: &BlockSpectra) -> Result<MomentMatrix> {
    let n1 = blocks.get(Subsystem::One).dim();
    let n2 = blocks.get(Subsystem::Two).dim();
    if n1 != params.n1 || n2 != params.n2 {
        return Err(Error::DimensionMismatch { expected: params.n1 + params.n2, got: n1 + n2 });
    }
    let mut s = CMat::zeros(n1 + n2, n1 + n2);
    for x in Subsystem::BOTH {
        let occ = blocks.occupations(params, x)?;
        let sp = blocks.get(x);
        let mut scaled = sp.z.clone();
        for k in 0..occ.len() {
            scaled.column_mut(k).scale_mut(occ[k]);
        }
        let b = scaled * sp.z.transpose();
        let off = if x == Subsystem::One { 0 } else { n1 };
        let m = b.nrows();
        for j in 0..m {
            for i in 0..m {
                let v = 0.5 * (b[(i, j)] + b[(j, i)]);
                s[(off + i, off + j)] = Complex64::new(v, 0.0);
            }
        }
    }
    Ok(MomentMatrix { s, t: 0.0 })
}

pub fn evolve_moments(s0: &MomentMatrix, u: &CMat, t: f64) -> Result<MomentMatrix> {
    let n = s0.dim();
    if u.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, got: u.nrows() });
    }
    let left = linalg::cmul(&u.map(|z| z.conj()), &s0.s);
    Ok(MomentMatrix { s: linalg::cmul(&left, u), t })
}

/// `Ṡ = conj(U̇)·S₀·U + conj(U)·S₀·U̇`.
pub fn moment_time_derivative(s0: &MomentMatrix, spec: &Spectrum, t: f64) -> Result<CMat> {
    let n = s0.dim();
    if spec.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: spec.dim() });
    }
    let u = one_particle_unitary(spec, t);
    let ud = unitary_derivative(spec, t, 1);
    let a = linalg::cmul(&linalg::cmul(&ud.map(|z| z.conj()), &s0.s), &u);
    let b = linalg::cmul(&linalg::cmul(&u.map(|z| z.conj()), &s0.s), &ud);
    Ok(a + b)
}

fn block_contraction(
    s: &MomentMatrix,
    h: &HamiltonianMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Complex64 {
    let hm = h.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in cols {
        for i in rows.clone() {
            acc += s.s[(i, j)] * hm[(i, j)];
        }
    }
    acc
}

/// Bare energy `E_x = Tr(H_x·Tr_x̄ S)`.
pub fn subsystem_energy(s: &MomentMatrix, h: &HamiltonianMatrix, which: Subsystem) -> f64 {
    let r = h.range(which);
    let e = block_contraction(s, h, r.clone(), r);
    let tol = 1e-10 * e.re.abs().max(1.0);
    debug_assert!(e.im.abs() <= tol, "imaginary residue {} in subsystem energy", e.im);
    e.re
}

/// `U_I = 2·Re Σ_{i∈1,k∈2} γ_ik S_ik`.
pub fn interaction_energy(s: &MomentMatrix, h: &HamiltonianMatrix) -> f64 {
    2.0 * block_contraction(s, h, h.range(Subsystem::One), h.range(Subsystem::Two)).re
}

/// `⟨H⟩ = Tr(H·S)`.
pub fn total_energy(s: &MomentMatrix, h: &HamiltonianMatrix) -> f64 {
    let n = h.dim();
    block_contraction(s, h, 0..n, 0..n).re
}

/// Smallest eigenvalue of the Hermitian moment matrix.
pub fn min_eigenvalue(s: &MomentMatrix) -> f64 {
    // Real 2n×2n embedding [[Re, −Im], [Im, Re]] shares the spectrum (doubled).
    let n = s.dim();
    let re = linalg::real_part(&s.s);
    let im = linalg::imag_part(&s.s);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&re);
    m.view_mut((n, n), (n, n)).copy_from(&re);
    m.view_mut((0, n), (n, n)).copy_from(&(-&im));
    m.view_mut((n, 0), (n, n)).copy_from(&im);
    let m = 0.5 * (&m + m.transpose());
    nalgebra::SymmetricEigen::new(m).eigenvalues.min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;

    fn params(n1: usize, n2: usize) -> ModelParams {
        ModelParams { n1, n2, ..ModelParams::default() }
    }

    #[test]
    fn diagonal_input_gives_permutation() {
        let p = ModelParams { gamma: 0.0, ..params(1, 1) };
        let h = build_hamiltonian(&p, &[1.0, 0.3]).unwrap();
        let sp = diagonalize(&h).unwrap();
        assert_eq!(sp.eigenvalues.as_slice(), &[0.3, 1.0]);
        assert!((sp.z[(1, 0)].abs() - 1.0).abs() < 1e-15 && (sp.z[(0, 1)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_eigenvalues_match_quadratic_formula() {
        let p = ModelParams { gamma: 0.01, ..params(1, 1) };
        let h = build_hamiltonian(&p, &[1.0, 0.3]).unwrap();
        let sp = diagonalize(&h).unwrap();
        let root = (0.49_f64 + 4e-4).sqrt();
        assert!((sp.eigenvalues[0] - (1.3 - root) / 2.0).abs() < 1e-15);
        assert!((sp.eigenvalues[1] - (1.3 + root) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_at_zero_is_identity() {
        let p = ModelParams { gamma: 0.1, g1: 0.05, ..params(3, 2) };
        let h = build_hamiltonian(&p, &[1.0, 1.1, 0.9, 0.3, 0.35]).unwrap();
        let sp = diagonalize(&h).unwrap();
        let u = one_particle_unitary(&sp, 0.0);
        assert!(linalg::max_abs(&(u - CMat::identity(5, 5))) < 1e-14);
    }

    #[test]
    fn uncoupled_phases() {
        let p = ModelParams { gamma: 0.0, g1: 0.0, g2: 0.0, ..params(1, 2) };
        let h = build_hamiltonian(&p, &[1.0, 0.3, 0.5]).unwrap();
        let sp = diagonalize(&h).unwrap();
        let t = 3.7;
        let u = one_particle_unitary(&sp, t);
        for (i, w) in [1.0, 0.3, 0.5].iter().enumerate() {
            assert!((u[(i, i)] - Complex64::from_polar(1.0, -w * t)).norm() < 1e-14);
        }
    }

    #[test]
    fn single_mode_occupation() {
        let p = ModelParams { gamma: 0.0, temp1: 0.6, ..params(1, 1) };
        let h = build_hamiltonian(&p, &[1.0, 0.3]).unwrap();
        let s0 = thermal_initial_moments(&p, &BlockSpectra::new(&h).unwrap()).unwrap();
        let oracle = 1.0 / ((1.0_f64 / 0.6).exp() - 1.0);
        assert!((s0.s[(0, 0)].re - oracle).abs() < 1e-15);
        assert!((oracle - 0.232_856_5).abs() < 1e-7);
    }

    #[test]
    fn vacuum_limit() {
        let p = ModelParams { temp1: 1e-3, temp2: 1e-3, ..params(2, 2) };
        let h = build_hamiltonian(&p, &[1.0, 1.0, 0.3, 0.3]).unwrap();
        let s0 = thermal_initial_moments(&p, &BlockSpectra::new(&h).unwrap()).unwrap();
        assert!(linalg::max_abs(&s0.s) < 1e-100);
    }

    #[test]
    fn homogeneous_pair_block_structure() {
        let p = ModelParams { g1: 0.2, ..params(2, 1) };
        let h = build_hamiltonian(&p, &[1.0, 1.0, 0.3]).unwrap();
        let s0 = thermal_initial_moments(&p, &BlockSpectra::new(&h).unwrap()).unwrap();
        let beta = 1.0 / p.temp1;
        let (ne, nn) = (bose(beta, 0.8), bose(beta, 1.2));
        let diag = ne + (nn - ne) / 2.0;
        let off = (nn - ne) / 2.0;
        assert!((s0.s[(0, 0)].re - diag).abs() < 1e-14);
        assert!((s0.s[(0, 1)].re - off).abs() < 1e-14);
        assert_eq!(s0.s[(0, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn non_positive_mode_energy_is_an_error() {
        let p = ModelParams { g1: -0.6, ..params(2, 1) };
        let h = build_hamiltonian(&p, &[0.5, 0.5, 0.3]).unwrap();
        let err = thermal_initial_moments(&p, &BlockSpectra::new(&h).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonPositiveModeEnergy { subsystem: 1, .. }));
    }

    #[test]
    fn stationary_derivative_when_decoupled() {
        let p = ModelParams { gamma: 0.0, g1: 0.1, ..params(3, 2) };
        let h = build_hamiltonian(&p, &[1.0; 3].iter().chain(&[0.3, 0.3]).copied().collect::<Vec<_>>()).unwrap();
        let s0 = thermal_initial_moments(&p, &BlockSpectra::new(&h).unwrap()).unwrap();
        let sd = moment_time_derivative(&s0, &diagonalize(&h).unwrap(), 0.0).unwrap();
        assert!(linalg::max_abs(&sd) < 1e-15);
    }

    #[test]
    fn energies_at_zero_are_block_local() {
        let p = ModelParams { gamma: 0.05, g1: 0.02, ..params(3, 2) };
        let h = build_hamiltonian(&p, &[1.0, 1.0, 1.0, 0.3, 0.3]).unwrap();
        let s0 = thermal_initial_moments(&p, &BlockSpectra::new(&h).unwrap()).unwrap();
        assert!(interaction_energy(&s0, &h).abs() < 1e-18);
        let beta = 1.0 / p.temp1;
        let e1 = 2.0 * 0.98 * bose(beta, 0.98) + 1.04 * bose(beta, 1.04);
        assert!((subsystem_energy(&s0, &h, Subsystem::One) - e1).abs() < 1e-14);
    }
}
