//! Time-series evaluator for energies and effective-Hamiltonian traces.
//!
//! Works in the eigenbases of the uncoupled blocks, where the initial moments
//! are diagonal. Inside each degenerate block cluster the basis is rotated so
//! that as few vectors as possible overlap the inter-block coupling; the
//! others are exact normal modes of the full Hamiltonian and only contribute
//! constants. The remaining "active" coordinates carry all time dependence.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RMat};
use crate::model::{build_hamiltonian, sample_frequencies, HamiltonianMatrix, ModelParams, Subsystem};
use crate::reduced;
use crate::spectral::{bose, BlockSpectra};

/// Relative gap below which block eigenvalues are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-12;
/// Relative coupling norm below which a rotated block mode is decoupled.
const DECOUPLING_TOL: f64 = 1e-13;

/// Minimal-dissipation traces of one subsystem at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdSample {
    /// `Tr(K_t S_t)`.
    pub tr_ks: f64,
    /// `Tr(K_t Ṡ_t)`.
    pub heat_rate: f64,
    /// `Tr(K̇_t S_t)`.
    pub work_rate: f64,
    /// `Tr K_t`.
    pub trace_k: f64,
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    /// Bare subsystem energies `E_1`, `E_2`.
    pub e: [f64; 2],
    /// Interaction energy `U_I`.
    pub u_i: f64,
}

#[derive(Debug, Clone)]
struct BlockFrame {
    /// Rotated block eigenbasis, active columns first.
    basis: RMat,
    /// Diagonal of the block Hamiltonian in that basis.
    energy: DVector<f64>,
    occupation: DVector<f64>,
    active: usize,
    /// `Σ` over decoupled modes of energy × occupation.
    passive_energy: f64,
    /// `Σ` over decoupled modes of energy.
    passive_trace: f64,
}

#[derive(Debug, Clone)]
pub struct Propagator {
    h: HamiltonianMatrix,
    frames: [BlockFrame; 2],
    /// Eigenvectors and eigenvalues of the active Hamiltonian.
    z: RMat,
    d: DVector<f64>,
    occ: DVector<f64>,
    /// Eigenbasis weights giving `E_1`, `E_2`, `U_I` as `cᵀCc + sᵀCs`.
    weights: [RMat; 3],
}

fn clusters(values: &DVector<f64>, tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Rotates each degenerate cluster of `p` so that the rows of `pᵀ·coupling`
/// concentrate on as few basis vectors as possible.
fn deflate(p: &RMat, values: &DVector<f64>, coupling: &RMat, cluster_tol: f64) -> Result<RMat> {
    let mut out = p.clone();
    let m = p.transpose() * coupling;
    for c in clusters(values, cluster_tol) {
        if c.len() < 2 {
            continue;
        }
        let rows = m.rows(c.start, c.len()).clone_owned();
        let gram = &rows * rows.transpose();
        let (rot, _) = linalg::symmetric_eigen(&gram)?;
        let block = p.columns(c.start, c.len()) * rot;
        out.columns_mut(c.start, c.len()).copy_from(&block);
    }
    Ok(out)
}

impl BlockFrame {
    fn new(
        params: &ModelParams,
        h: &HamiltonianMatrix,
        blocks: &BlockSpectra,
        x: Subsystem,
        coupling: &RMat,
        scale: f64,
    ) -> Result<Self> {
        let sp = blocks.get(x);
        if let Some(&bad) = sp.eigenvalues.iter().find(|e| **e <= 0.0) {
            return Err(Error::NonPositiveModeEnergy { subsystem: x.label(), energy: bad });
        }
        let rotated = deflate(&sp.z, &sp.eigenvalues, coupling, CLUSTER_TOL * scale)?;
        let overlap = rotated.transpose() * coupling;
        let threshold = DECOUPLING_TOL * scale * (h.dim() as f64).sqrt();
        let n = rotated.ncols();
        let (mut order, passive): (Vec<usize>, Vec<usize>) = (0..n).partition(|&k| overlap.row(k).norm() > threshold);
        let active = order.len();
        order.extend(passive);
        let basis = RMat::from_fn(n, n, |i, j| rotated[(i, order[j])]);
        let hx = h.block(x);
        let energy = (basis.transpose() * &hx * &basis).diagonal();
        let beta = params.beta(x);
        let occupation = energy.map(|e| bose(beta, e));
        if let Some(&bad) = energy.iter().find(|e| **e <= 0.0) {
            return Err(Error::NonPositiveModeEnergy { subsystem: x.label(), energy: bad });
        }
        let passive_energy = (active..n).map(|k| energy[k] * occupation[k]).sum();
        let passive_trace = (active..n).map(|k| energy[k]).sum();
        Ok(Self { basis, energy, occupation, active, passive_energy, passive_trace })
    }

    fn active_basis(&self) -> RMat {
        self.basis.columns(0, self.active).clone_owned()
    }
}

impl Propagator {
    /// Samples frequencies, assembles the Hamiltonian and prepares the evaluator.
    pub fn new(params: &ModelParams) -> Result<Self> {
        let freqs = sample_frequencies(params)?;
        let h = build_hamiltonian(params, &freqs)?;
        Self::from_hamiltonian(params, h)
    }

    /// Uses `params` only for the block temperatures.
    pub fn from_hamiltonian(params: &ModelParams, h: HamiltonianMatrix) -> Result<Self> {
        params.validate()?;
        let blocks = BlockSpectra::new(&h)?;
        let scale = h.max_abs().max(f64::MIN_POSITIVE);
        let g = h.coupling();
        let f1 = BlockFrame::new(params, &h, &blocks, Subsystem::One, &g, scale)?;
        let f2 = BlockFrame::new(params, &h, &blocks, Subsystem::Two, &g.transpose(), scale)?;
        let (a1, a2) = (f1.active, f2.active);
        let na = a1 + a2;

        let p1 = f1.active_basis();
        let p2 = f2.active_basis();
        let h1 = p1.transpose() * h.block(Subsystem::One) * &p1;
        let h2 = p2.transpose() * h.block(Subsystem::Two) * &p2;
        let g12 = p1.transpose() * &g * &p2;

        let sym = |m: RMat| 0.5 * (&m + m.transpose());
        let mut hact_1 = RMat::zeros(na, na);
        hact_1.view_mut((0, 0), (a1, a1)).copy_from(&sym(h1));
        let mut hact_2 = RMat::zeros(na, na);
        hact_2.view_mut((a1, a1), (a2, a2)).copy_from(&sym(h2));
        let mut hact_i = RMat::zeros(na, na);
        hact_i.view_mut((0, a1), (a1, a2)).copy_from(&g12);
        hact_i.view_mut((a1, 0), (a2, a1)).copy_from(&g12.transpose());
        let hact = &hact_1 + &hact_2 + &hact_i;

        let (z, d) = linalg::symmetric_eigen(&hact)?;
        let occ =
            DVector::from_iterator(na, f1.occupation.iter().take(a1).chain(f2.occupation.iter().take(a2)).copied());
        let mut zn = z.clone();
        for i in 0..na {
            zn.row_mut(i).scale_mut(occ[i]);
        }
        let s0_eig = z.transpose() * zn;
        let weight = |a: &RMat| (z.transpose() * a * &z).component_mul(&s0_eig);
        let weights = [weight(&hact_1), weight(&hact_2), weight(&hact_i)];

        Ok(Self { h, frames: [f1, f2], z, d, occ, weights })
    }

    pub fn hamiltonian(&self) -> &HamiltonianMatrix {
        &self.h
    }

    /// Number of time-dependent coordinates per subsystem.
    pub fn active_dims(&self) -> [usize; 2] {
        [self.frames[0].active, self.frames[1].active]
    }

    fn active_range(&self, x: Subsystem) -> std::ops::Range<usize> {
        let a1 = self.frames[0].active;
        match x {
            Subsystem::One => 0..a1,
            Subsystem::Two => a1..a1 + self.frames[1].active,
        }
    }

    fn phases(&self, t: f64) -> (DVector<f64>, DVector<f64>) {
        (self.d.map(|d| (d * t).cos()), self.d.map(|d| (d * t).sin()))
    }

    pub fn energies(&self, t: f64) -> EnergySample {
        let (c, s) = self.phases(t);
        let form = |w: &RMat| c.dot(&(w * &c)) + s.dot(&(w * &s));
        EnergySample {
            e: [
                self.frames[0].passive_energy + form(&self.weights[0]),
                self.frames[1].passive_energy + form(&self.weights[1]),
            ],
            u_i: form(&self.weights[2]),
        }
    }

    /// Active-space propagator rows and derivative blocks of subsystem `x`.
    fn active_blocks(&self, t: f64, x: Subsystem) -> ActiveBlocks {
        let r = self.active_range(x);
        let a = r.len();
        let na = self.d.len();
        let (c, s) = self.phases(t);
        let zx = self.z.rows(r.start, a);
        let mut w = RMat::zeros(6 * a, na);
        for k in 0..na {
            let d = self.d[k];
            let f = [c[k], s[k], d * c[k], d * s[k], d * d * c[k], d * d * s[k]];
            for (slot, fk) in f.iter().enumerate() {
                for i in 0..a {
                    w[(slot * a + i, k)] = zx[(i, k)] * fk;
                }
            }
        }
        let rows = w.rows(0, 4 * a) * self.z.transpose();
        let rows_ddot = w.rows(4 * a, 2 * a) * zx.transpose();
        let re_r = rows.rows(0, a).clone_owned();
        let im_r = -rows.rows(a, a);
        let re_rd = -rows.rows(3 * a, a);
        let im_rd = -rows.rows(2 * a, a);
        let cols = |m: &RMat| m.columns(r.start, a).clone_owned();
        let phi = linalg::complexify(&cols(&re_r), &cols(&im_r));
        let phi_dot = linalg::complexify(&cols(&re_rd), &cols(&im_rd));
        let phi_ddot = linalg::complexify(&(-rows_ddot.rows(0, a)), &rows_ddot.rows(a, a).clone_owned());
        ActiveBlocks { re_r, im_r, re_rd, im_rd, phi, phi_dot, phi_ddot }
    }

    /// `(S, Ṡ)` of subsystem `x` in its active coordinates.
    fn active_moments(&self, b: &ActiveBlocks) -> (CMat, CMat) {
        let a = b.re_r.nrows();
        let na = self.d.len();
        let scale = |m: &RMat| {
            let mut out = m.clone();
            for k in 0..na {
                out.column_mut(k).scale_mut(self.occ[k]);
            }
            out
        };
        let an = scale(&b.re_r);
        let bn = scale(&b.im_r);
        let mut left1 = RMat::zeros(2 * a, 2 * na);
        left1.view_mut((0, 0), (a, na)).copy_from(&b.re_r);
        left1.view_mut((0, na), (a, na)).copy_from(&b.im_r);
        left1.view_mut((a, 0), (a, na)).copy_from(&b.re_rd);
        left1.view_mut((a, na), (a, na)).copy_from(&b.im_rd);
        let mut left2 = left1.clone();
        left2.view_mut((0, na), (a, na)).copy_from(&(-&b.im_r));
        left2.view_mut((a, na), (a, na)).copy_from(&(-&b.im_rd));
        let mut right1 = RMat::zeros(2 * na, a);
        right1.view_mut((0, 0), (na, a)).copy_from(&an.transpose());
        right1.view_mut((na, 0), (na, a)).copy_from(&bn.transpose());
        let mut right2 = RMat::zeros(2 * na, a);
        right2.view_mut((0, 0), (na, a)).copy_from(&bn.transpose());
        right2.view_mut((na, 0), (na, a)).copy_from(&an.transpose());
        let p1 = left1 * right1;
        let p2 = left2 * right2;
        let s_re = p1.rows(0, a);
        let xm = p1.rows(a, a);
        let s_im = p2.rows(0, a);
        let ym = p2.rows(a, a);
        let s = CMat::from_fn(a, a, |i, j| {
            Complex64::new(0.5 * (s_re[(i, j)] + s_re[(j, i)]), 0.5 * (s_im[(i, j)] - s_im[(j, i)]))
        });
        let sd = CMat::from_fn(a, a, |i, j| Complex64::new(xm[(i, j)] + xm[(j, i)], ym[(i, j)] - ym[(j, i)]));
        (s, sd)
    }

    /// `Lᵀ` and `L̇ᵀ` of the active block, plus the condition estimate.
    fn active_generator(&self, b: &ActiveBlocks, t: f64) -> Result<(CMat, CMat, f64)> {
        let a = b.phi.nrows();
        let (lu, condition) = reduced::factor_checked(&b.phi, t)?;
        let mut rhs = CMat::zeros(a, 2 * a);
        rhs.view_mut((0, 0), (a, a)).copy_from(&b.phi_dot.transpose());
        rhs.view_mut((0, a), (a, a)).copy_from(&b.phi_ddot.transpose());
        lu.solve_in_place(&mut rhs);
        let lt = rhs.columns(0, a).clone_owned();
        let ddot_t = rhs.columns(a, a).clone_owned();
        let ldot_t = ddot_t - linalg::cmul(&lt, &lt);
        Ok((lt, ldot_t, condition))
    }

    pub fn md_sample(&self, t: f64, x: Subsystem) -> Result<MdSample> {
        let f = &self.frames[x.index()];
        if f.active == 0 {
            return Ok(MdSample {
                tr_ks: f.passive_energy,
                heat_rate: 0.0,
                work_rate: 0.0,
                trace_k: f.passive_trace,
                condition: 1.0,
            });
        }
        let b = self.active_blocks(t, x);
        let (lt, ldot_t, condition) = self.active_generator(&b, t)?;
        let (s, sd) = self.active_moments(&b);
        let tr_l = lt.diagonal().iter().sum::<Complex64>();
        Ok(MdSample {
            tr_ks: f.passive_energy - linalg::frobenius_dot(&lt, &s).im,
            heat_rate: -linalg::frobenius_dot(&lt, &sd).im,
            work_rate: -linalg::frobenius_dot(&ldot_t, &s).im,
            trace_k: f.passive_trace - tr_l.im,
            condition,
        })
    }

    /// `K_t` and `K̇_t` of subsystem `x` in the original site basis.
    pub fn effective_hamiltonian(&self, t: f64, x: Subsystem) -> Result<(CMat, CMat)> {
        let f = &self.frames[x.index()];
        let n = f.basis.nrows();
        let mut k = CMat::zeros(n, n);
        let mut kd = CMat::zeros(n, n);
        for j in f.active..n {
            k[(j, j)] = Complex64::new(f.energy[j], 0.0);
        }
        if f.active > 0 {
            let b = self.active_blocks(t, x);
            let (lt, ldot_t, _) = self.active_generator(&b, t)?;
            let a = f.active;
            k.view_mut((0, 0), (a, a)).copy_from(&linalg::anti_hermitian_to_hermitian(&lt.transpose()));
            kd.view_mut((0, 0), (a, a)).copy_from(&linalg::anti_hermitian_to_hermitian(&ldot_t.transpose()));
        }
        let p = f.basis.map(|v| Complex64::new(v, 0.0));
        let back = |m: &CMat| linalg::cmul(&linalg::cmul(&p, m), &p.transpose());
        Ok((back(&k), back(&kd)))
    }

    /// `vᵀ K_t v` for a real site-basis vector `v` of subsystem `x`.
    pub fn k_quadratic_form(&self, t: f64, x: Subsystem, v: &DVector<f64>) -> Result<f64> {
        let f = &self.frames[x.index()];
        let w = f.basis.transpose() * v;
        let passive: f64 = (f.active..w.len()).map(|k| f.energy[k] * w[k] * w[k]).sum();
        if f.active == 0 {
            return Ok(passive);
        }
        let b = self.active_blocks(t, x);
        let (lt, _, _) = self.active_generator(&b, t)?;
        let wa = w.rows(0, f.active).map(|v| Complex64::new(v, 0.0));
        let q = (wa.transpose() * lt * &wa)[(0, 0)];
        Ok(passive - q.im)
    }

    /// `Tr_x̄ S_t` in the original site basis.
    pub fn reduced_moments(&self, t: f64, x: Subsystem) -> CMat {
        let f = &self.frames[x.index()];
        let n = f.basis.nrows();
        let mut s = CMat::zeros(n, n);
        for j in f.active..n {
            s[(j, j)] = Complex64::new(f.occupation[j], 0.0);
        }
        if f.active > 0 {
            let b = self.active_blocks(t, x);
            let (sa, _) = self.active_moments(&b);
            s.view_mut((0, 0), (f.active, f.active)).copy_from(&sa);
        }
        let p = f.basis.map(|v| Complex64::new(v, 0.0));
        linalg::cmul(&linalg::cmul(&p, &s), &p.transpose())
    }
}

struct ActiveBlocks {
    re_r: RMat,
    im_r: RMat,
    re_rd: RMat,
    im_rd: RMat,
    phi: CMat,
    phi_dot: CMat,
    phi_ddot: CMat,
}
