//! Brute-force check of the moment dynamics in a truncated Fock space.
//!
//! The product basis keeps occupations `0..=n_max` per mode. Number sectors
//! with `N ≤ n_max` are complete in that basis, so the dynamics inside them is
//! exact; the thermal weight of the higher sectors is the truncation error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RMat};
use crate::model::{HamiltonianMatrix, ModelParams, Subsystem};
use crate::spectral::BlockSpectra;

/// Largest product-basis dimension accepted.
pub const FOCK_DIM_CAP: usize = 10_000;
/// Per-mode thermal tail weight required by [`FockConfig::auto`].
pub const TAIL_TARGET: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct FockConfig {
    pub n_max: usize,
    pub dims: usize,
    pub h: HamiltonianMatrix,
    pub temps: [f64; 2],
}

impl FockConfig {
    pub fn new(h: HamiltonianMatrix, temps: [f64; 2], n_max: usize) -> Result<Self> {
        let dims = h.dim();
        let cfg = Self { n_max, dims, h, temps };
        let dim = cfg.checked_dim().ok_or(Error::FockDimension { dim: usize::MAX, cap: FOCK_DIM_CAP })?;
        if dim > FOCK_DIM_CAP {
            return Err(Error::FockDimension { dim, cap: FOCK_DIM_CAP });
        }
        Ok(cfg)
    }

    /// Smallest `n_max` whose per-mode tail `q^{n_max+1}` is below
    /// [`TAIL_TARGET`] for the hottest block normal mode.
    pub fn auto(params: &ModelParams, h: HamiltonianMatrix) -> Result<Self> {
        let q = hottest_ratio(params, &h)?;
        let n_max = if q == 0.0 { 1 } else { ((TAIL_TARGET.ln() / q.ln()).floor() as usize).max(1) };
        Self::new(h, [params.temp1, params.temp2], n_max)
    }

    fn checked_dim(&self) -> Option<usize> {
        (0..self.dims).try_fold(1usize, |acc, _| acc.checked_mul(self.n_max + 1))
    }

    /// `(n_max+1)^dims`.
    pub fn dim(&self) -> usize {
        self.checked_dim().expect("validated on construction")
    }

    fn block_ratios(&self) -> Result<Vec<f64>> {
        let blocks = BlockSpectra::new(&self.h)?;
        let mut q = Vec::with_capacity(self.dims);
        for x in Subsystem::BOTH {
            let beta = 1.0 / self.temps[x.index()];
            for &e in blocks.get(x).eigenvalues.iter() {
                if e <= 0.0 {
                    return Err(Error::NonPositiveModeEnergy { subsystem: x.label(), energy: e });
                }
                q.push((-beta * e).exp());
            }
        }
        Ok(q)
    }

    /// Largest per-mode tail weight `q^{n_max+1}`.
    pub fn per_mode_tail(&self) -> Result<f64> {
        Ok(self.block_ratios()?.into_iter().fold(0.0, f64::max).powi(self.n_max as i32 + 1))
    }

    /// `E[N·1{N > n_max}]` in the untruncated initial state: a bound on the
    /// error of every moment from dropping the incomplete sectors.
    pub fn tail_bound(&self) -> Result<f64> {
        let dist = number_distribution(&self.block_ratios()?, self.n_max);
        let mean: f64 = self.block_ratios()?.iter().map(|q| q / (1.0 - q)).sum();
        let kept: f64 = dist.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        Ok((mean - kept).max(0.0))
    }
}

fn hottest_ratio(params: &ModelParams, h: &HamiltonianMatrix) -> Result<f64> {
    let blocks = BlockSpectra::new(h)?;
    let mut q: f64 = 0.0;
    for x in Subsystem::BOTH {
        for &e in blocks.get(x).eigenvalues.iter() {
            if e <= 0.0 {
                return Err(Error::NonPositiveModeEnergy { subsystem: x.label(), energy: e });
            }
            q = q.max((-params.beta(x) * e).exp());
        }
    }
    Ok(q)
}

/// `P(N = n)` for `n ≤ n_max` with independent geometric modes of ratio `q_k`.
fn number_distribution(q: &[f64], n_max: usize) -> Vec<f64> {
    let mut p = vec![0.0; n_max + 1];
    p[0] = 1.0;
    for &qk in q {
        let mut next = vec![0.0; n_max + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            let mut w = 1.0 - qk;
            for m in (0..=n).rev() {
                *slot += p[m] * w;
                w *= qk;
            }
        }
        p = next;
    }
    p
}

/// Occupation vectors of the product basis; mode 0 varies fastest.
fn basis_states(dims: usize, n_max: usize) -> Vec<Vec<usize>> {
    let base = n_max + 1;
    let dim = (0..dims).fold(1, |a, _| a * base);
    (0..dim)
        .map(|mut idx| {
            (0..dims)
                .map(|_| {
                    let n = idx % base;
                    idx /= base;
                    n
                })
                .collect()
        })
        .collect()
}

fn index_of(occ: &[usize], n_max: usize) -> usize {
    occ.iter().rev().fold(0, |acc, &n| acc * (n_max + 1) + n)
}

/// `Σ m_ij a†_i a_j` restricted to `states`, which must be closed under the
/// hops `a†_i a_j` that stay within occupation `n_max`.
fn quadratic_operator_on<F>(m: &RMat, states: &[Vec<usize>], n_max: usize, index: F) -> RMat
where
    F: Fn(&[usize]) -> usize,
{
    let dims = m.nrows();
    let mut out = RMat::zeros(states.len(), states.len());
    for (col, occ) in states.iter().enumerate() {
        for i in 0..dims {
            for j in 0..dims {
                let v = m[(i, j)];
                if v == 0.0 {
                    continue;
                }
                if i == j {
                    out[(col, col)] += v * occ[i] as f64;
                    continue;
                }
                if occ[j] == 0 || occ[i] == n_max {
                    continue;
                }
                let mut to = occ.clone();
                let amp = (occ[j] as f64).sqrt() * ((occ[i] + 1) as f64).sqrt();
                to[j] -= 1;
                to[i] += 1;
                out[(index(&to), col)] += v * amp;
            }
        }
    }
    out
}

/// `Σ m_ij a†_i a_j` on the full product basis.
fn quadratic_operator(m: &RMat, n_max: usize) -> RMat {
    let states = basis_states(m.nrows(), n_max);
    quadratic_operator_on(m, &states, n_max, |occ| index_of(occ, n_max))
}

/// Occupation vectors with total number `n`, in product-basis order.
fn sector_states(dims: usize, n: usize) -> Vec<Vec<usize>> {
    basis_states(dims, n).into_iter().filter(|occ| occ.iter().sum::<usize>() == n).collect()
}

/// Dense Fock-space matrix of `Σ h_ij a†_i a_j`.
pub fn build_fock_hamiltonian(cfg: &FockConfig) -> RMat {
    quadratic_operator(cfg.h.matrix(), cfg.n_max)
}

/// Moments measured on the Fock state.
#[derive(Debug, Clone)]
pub struct FockMeasurement {
    /// `⟨a†_i a_j⟩`.
    pub occupations: CMat,
    /// Probability kept in the complete sectors.
    pub norm: f64,
}

#[derive(Debug, Clone)]
struct Sector {
    energies: Vec<f64>,
    /// Initial state in the sector's energy eigenbasis.
    rho: RMat,
    /// `⟨k| a†_i a_j |l⟩` in the same basis, row-major over `(i, j)`.
    ops: Vec<RMat>,
}

/// Sector-wise spectral data for repeated measurements.
#[derive(Debug, Clone)]
pub struct FockEvolution {
    dims: usize,
    sectors: Vec<Sector>,
}

impl FockEvolution {
    pub fn new(cfg: &FockConfig) -> Result<Self> {
        let dims = cfg.dims;
        let n_max = cfg.n_max;
        let mut beta_h = cfg.h.matrix().clone();
        for x in Subsystem::BOTH {
            let r = cfg.h.range(x);
            let beta = 1.0 / cfg.temps[x.index()];
            for i in r.clone() {
                for j in 0..dims {
                    if r.contains(&j) {
                        beta_h[(i, j)] *= beta;
                    } else {
                        beta_h[(i, j)] = 0.0;
                    }
                }
            }
        }
        let log_z: f64 = -cfg.block_ratios()?.iter().map(|q| (1.0 - q).ln()).sum::<f64>();
        let units: Vec<RMat> = (0..dims * dims)
            .map(|k| {
                let mut e = RMat::zeros(dims, dims);
                e[(k / dims, k % dims)] = 1.0;
                e
            })
            .collect();

        let mut sectors = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let states = sector_states(dims, n);
            let lookup: std::collections::HashMap<Vec<usize>, usize> =
                states.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
            let op = |m: &RMat| quadratic_operator_on(m, &states, n_max, |occ| lookup[occ]);
            let (w, e) = linalg::symmetric_eigen(&op(cfg.h.matrix()))?;
            let (vb, eb) = linalg::symmetric_eigen(&op(&beta_h))?;
            let boltz = RMat::from_diagonal(&eb.map(|x| (-x - log_z).exp()));
            let rho_site = &vb * boltz * vb.transpose();
            let rho = w.transpose() * rho_site * &w;
            let ops = units.iter().map(|u| w.transpose() * op(u) * &w).collect();
            sectors.push(Sector { energies: e.iter().copied().collect(), rho, ops });
        }
        Ok(Self { dims, sectors })
    }

    pub fn measure(&self, t: f64) -> FockMeasurement {
        let d = self.dims;
        let mut occ = CMat::zeros(d, d);
        let mut norm = 0.0;
        for s in &self.sectors {
            let m = s.energies.len();
            let ph: Vec<Complex64> = s.energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
            let rho_t = CMat::from_fn(m, m, |k, l| ph[k] * ph[l].conj() * s.rho[(k, l)]);
            norm += rho_t.diagonal().iter().map(|z| z.re).sum::<f64>();
            for (idx, op) in s.ops.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    for l in 0..m {
                        acc += rho_t[(k, l)] * op[(l, k)];
                    }
                }
                occ[(idx / d, idx % d)] += acc;
            }
        }
        FockMeasurement { occupations: occ, norm }
    }
}

/// One-shot evolution of the truncated thermal state to time `t`.
pub fn evolve_and_measure(cfg: &FockConfig, t: f64) -> Result<FockMeasurement> {
    Ok(FockEvolution::new(cfg)?.measure(t))
}
