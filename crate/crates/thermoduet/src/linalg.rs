//! Dense kernels shared by the propagation and oracle code.

use matrixmultiply::CGemmOption;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `c = alpha * a * b + beta * c` for column-major complex matrices.
pub fn zgemm(alpha: Complex64, a: &CMat, b: &CMat, beta: Complex64, c: &mut CMat) {
    let (m, k) = a.shape();
    let (k2, n) = b.shape();
    assert_eq!(k, k2, "inner dimensions differ");
    assert_eq!(c.shape(), (m, n), "output shape mismatch");
    if m == 0 || n == 0 {
        return;
    }
    // SAFETY: Complex64 is repr(C) with layout [re, im]; all strides describe
    // the contiguous column-major storage of the nalgebra buffers.
    unsafe {
        matrixmultiply::zgemm(
            CGemmOption::Standard,
            CGemmOption::Standard,
            m,
            k,
            n,
            [alpha.re, alpha.im],
            a.as_ptr() as *const [f64; 2],
            1,
            m as isize,
            b.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [beta.re, beta.im],
            c.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
}

pub fn cmul(a: &CMat, b: &CMat) -> CMat {
    let mut c = CMat::zeros(a.nrows(), b.ncols());
    zgemm(Complex64::new(1.0, 0.0), a, b, Complex64::new(0.0, 0.0), &mut c);
    c
}

pub fn complexify(re: &RMat, im: &RMat) -> CMat {
    CMat::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// `Σ_ij a_ij b_ij`, i.e. `Tr(aᵀ b)`.
pub fn frobenius_dot(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Hermitian part extraction `(l† − l) / (2i)`.
pub fn anti_hermitian_to_hermitian(l: &CMat) -> CMat {
    let n = l.nrows();
    CMat::from_fn(n, n, |i, j| (l[(j, i)].conj() - l[(i, j)]) / (2.0 * I))
}

/// Symmetric eigendecomposition sorted ascending (stable on ties), with an
/// orthogonality repair and a reconstruction check.
pub fn symmetric_eigen(m: &RMat) -> Result<(RMat, DVector<f64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch { expected: n, got: m.ncols() });
    }
    if n == 0 {
        return Ok((RMat::zeros(0, 0), DVector::zeros(0)));
    }
    let eig =
        nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 200 * n.max(8)).ok_or(Error::EigenNoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut z = RMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);

    if orthogonality_defect(&z) > 1e-12 {
        reorthogonalize(&mut z);
    }

    let scale = max_abs_real(m);
    let tolerance = 1e-10 * scale;
    let recon = &z * DMatrix::from_diagonal(&values) * z.transpose();
    let residual = max_abs_real(&(recon - m));
    if !(residual <= tolerance || residual <= f64::MIN_POSITIVE) {
        return Err(Error::SpectralResidual { residual, tolerance });
    }
    Ok((z, values))
}

pub fn orthogonality_defect(z: &RMat) -> f64 {
    let g = z.transpose() * z;
    let n = g.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Two passes of modified Gram-Schmidt over the columns.
pub fn reorthogonalize(z: &mut RMat) {
    let n = z.ncols();
    for _ in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let proj = z.column(k).dot(&z.column(j));
                let ck = z.column(k).clone_owned();
                z.column_mut(j).axpy(-proj, &ck, 1.0);
            }
            let norm = z.column(j).norm();
            if norm > 0.0 {
                z.column_mut(j).scale_mut(1.0 / norm);
            }
        }
    }
}

/// LU factorization with partial pivoting of a square complex matrix.
#[derive(Debug, Clone)]
pub struct ComplexLu {
    lu: CMat,
    perm: Vec<usize>,
    norm1: f64,
    singular: bool,
}

impl ComplexLu {
    pub fn new(a: &CMat) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU needs a square matrix");
        let norm1 = (0..n).map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                lu.swap_rows(k, p);
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            let inv = 1.0 / pivot;
            for i in k + 1..n {
                lu[(i, k)] *= inv;
            }
            for j in k + 1..n {
                let f = lu[(k, j)];
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let data = lu.as_mut_slice();
                let (left, right) = data.split_at_mut(j * n);
                let lcol = &left[k * n..(k + 1) * n];
                let rcol = &mut right[..n];
                for i in k + 1..n {
                    rcol[i] -= lcol[i] * f;
                }
            }
        }
        Self { lu, perm, norm1, singular }
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    pub fn is_exactly_singular(&self) -> bool {
        self.singular
    }

    /// Overwrites `b` with `a⁻¹ b`.
    pub fn solve_in_place(&self, b: &mut CMat) {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        if n == 0 {
            return;
        }
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        let lu = self.lu.as_slice();
        for col in b.as_mut_slice().chunks_exact_mut(n) {
            for i in 0..n {
                tmp[i] = col[self.perm[i]];
            }
            for k in 0..n {
                let xk = tmp[k];
                if xk == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let lk = &lu[k * n..(k + 1) * n];
                for i in k + 1..n {
                    tmp[i] -= lk[i] * xk;
                }
            }
            for k in (0..n).rev() {
                let uk = &lu[k * n..(k + 1) * n];
                tmp[k] /= uk[k];
                let xk = tmp[k];
                for i in 0..k {
                    tmp[i] -= uk[i] * xk;
                }
            }
            col.copy_from_slice(&tmp);
        }
    }

    /// Overwrites `b` with `a^{-H} b`.
    pub fn solve_adjoint_in_place(&self, b: &mut DVector<Complex64>) {
        let n = self.dim();
        let lu = self.lu.as_slice();
        let mut w = b.as_slice().to_vec();
        // Uᴴ is lower triangular.
        for k in 0..n {
            let uk = &lu[k * n..(k + 1) * n];
            let mut acc = w[k];
            for i in 0..k {
                acc -= uk[i].conj() * w[i];
            }
            w[k] = acc / uk[k].conj();
        }
        // Lᴴ is unit upper triangular.
        for k in (0..n).rev() {
            let lk = &lu[k * n..(k + 1) * n];
            let mut acc = w[k];
            for i in k + 1..n {
                acc -= lk[i].conj() * w[i];
            }
            w[k] = acc;
        }
        for i in 0..n {
            b[self.perm[i]] = w[i];
        }
    }

    /// 1-norm condition estimate (Hager–Higham).
    pub fn condition_estimate(&self) -> f64 {
        self.norm1 * self.inverse_norm_estimate()
    }

    /// Condition estimate with `‖a‖₁` floored at `reference`, for blocks of a
    /// larger well-scaled matrix where a uniformly small block is itself a symptom.
    pub fn condition_estimate_against(&self, reference: f64) -> f64 {
        self.norm1.max(reference) * self.inverse_norm_estimate()
    }

    pub fn norm1(&self) -> f64 {
        self.norm1
    }

    /// Estimate of `‖a⁻¹‖₁`.
    pub fn inverse_norm_estimate(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        if self.singular {
            return f64::INFINITY;
        }
        let solve_vec = |v: &DVector<Complex64>| {
            let mut m = CMat::from_column_slice(n, 1, v.as_slice());
            self.solve_in_place(&mut m);
            DVector::from_column_slice(m.as_slice())
        };
        let norm1 = |v: &DVector<Complex64>| v.iter().map(|z| z.norm()).sum::<f64>();

        let mut x = DVector::from_element(n, Complex64::new(1.0 / n as f64, 0.0));
        let mut est = 0.0;
        for iter in 0..5 {
            let y = solve_vec(&x);
            let ny = norm1(&y);
            if !ny.is_finite() {
                return f64::INFINITY;
            }
            if iter > 0 && ny <= est {
                break;
            }
            est = ny;
            let mut xi = y.map(|z| {
                let r = z.norm();
                if r > 0.0 {
                    z / r
                } else {
                    Complex64::new(1.0, 0.0)
                }
            });
            self.solve_adjoint_in_place(&mut xi);
            let (jmax, zmax) =
                xi.iter()
                    .enumerate()
                    .map(|(j, z)| (j, z.norm()))
                    .fold((0, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            let zx: f64 = xi.iter().zip(x.iter()).map(|(a, b)| (a.conj() * b).re).sum();
            if iter > 0 && zmax <= zx {
                break;
            }
            x = DVector::from_element(n, Complex64::new(0.0, 0.0));
            x[jmax] = Complex64::new(1.0, 0.0);
        }
        let alt = DVector::from_fn(n, |i, _| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let ramp = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            Complex64::new(sign * (1.0 + ramp), 0.0)
        });
        let alt_est = 2.0 * norm1(&solve_vec(&alt)) / (3.0 * n as f64);
        let inv_norm = est.max(alt_est);
        if inv_norm.is_finite() {
            inv_norm
        } else {
            f64::INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cmat(n: usize, m: usize, seed: u64) -> CMat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMat::from_fn(n, m, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn naive_mul(a: &CMat, b: &CMat) -> CMat {
        CMat::from_fn(a.nrows(), b.ncols(), |i, j| (0..a.ncols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
    }

    #[test]
    fn zgemm_matches_naive_product() {
        let a = random_cmat(7, 5, 1);
        let b = random_cmat(5, 9, 2);
        let diff = max_abs(&(cmul(&a, &b) - naive_mul(&a, &b)));
        assert!(diff < 1e-13, "{diff}");
    }

    #[test]
    fn lu_solve_recovers_rhs() {
        let a = random_cmat(12, 12, 3);
        let b = random_cmat(12, 4, 4);
        let lu = ComplexLu::new(&a);
        let mut x = b.clone();
        lu.solve_in_place(&mut x);
        assert!(max_abs(&(naive_mul(&a, &x) - b)) < 1e-12);
    }

    #[test]
    fn adjoint_solve_recovers_rhs() {
        let a = random_cmat(10, 10, 5);
        let b = random_cmat(10, 1, 6);
        let lu = ComplexLu::new(&a);
        let mut x = DVector::from_column_slice(b.as_slice());
        lu.solve_adjoint_in_place(&mut x);
        let back = a.adjoint() * CMat::from_column_slice(10, 1, x.as_slice());
        assert!(max_abs(&(back - b)) < 1e-12);
    }

    #[test]
    fn condition_estimate_tracks_diagonal_spread() {
        let d = CMat::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1e-6),
            Complex64::new(0.5, 0.5),
        ]));
        let kappa = ComplexLu::new(&d).condition_estimate();
        assert!((kappa - 1e6).abs() / 1e6 < 1e-9, "{kappa}");
    }

    #[test]
    fn condition_estimate_is_infinite_for_zero_pivot() {
        let mut a = CMat::identity(3, 3);
        a[(1, 1)] = Complex64::new(0.0, 0.0);
        assert!(ComplexLu::new(&a).condition_estimate().is_infinite());
    }

    #[test]
    fn symmetric_eigen_sorts_and_reconstructs() {
        let m = RMat::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, -1.0]);
        let (z, d) = symmetric_eigen(&m).unwrap();
        assert!((d[0] + 1.0).abs() < 1e-14 && (d[1] - 1.0).abs() < 1e-14 && (d[2] - 3.0).abs() < 1e-14);
        assert!(orthogonality_defect(&z) < 1e-14);
    }
}
