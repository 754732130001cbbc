//! Cumulative quadrature on uniform grids with optional gaps.

/// Maximum bisection depth of the adaptive gap integrator.
pub const MAX_DEPTH: u32 = 12;

const GL_NODES: [f64; 5] =
    [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
const GL_WEIGHTS: [f64; 5] =
    [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];

/// `∫` over `[x_j, x_{j+1}]` from the interpolating polynomial through the
/// nearest present nodes: cubic when four are available, quadratic next to
/// gaps, trapezoid as a last resort.
fn interval(f: &[Option<f64>], j: usize, h: f64) -> Option<f64> {
    let at = |k: isize| -> Option<f64> {
        if k < 0 {
            None
        } else {
            f.get(k as usize).copied().flatten()
        }
    };
    let j = j as isize;
    let (f0, f1) = (at(j)?, at(j + 1)?);
    let c = h / 24.0;
    if let (Some(m), Some(p)) = (at(j - 1), at(j + 2)) {
        return Some(c * (-m + 13.0 * f0 + 13.0 * f1 - p));
    }
    if let (Some(p), Some(q)) = (at(j + 2), at(j + 3)) {
        return Some(c * (9.0 * f0 + 19.0 * f1 - 5.0 * p + q));
    }
    if let (Some(m), Some(n)) = (at(j - 1), at(j - 2)) {
        return Some(c * (n - 5.0 * m + 19.0 * f0 + 9.0 * f1));
    }
    let q = h / 12.0;
    if let Some(p) = at(j + 2) {
        return Some(q * (5.0 * f0 + 8.0 * f1 - p));
    }
    if let Some(m) = at(j - 1) {
        return Some(q * (-m + 8.0 * f0 + 5.0 * f1));
    }
    Some(0.5 * h * (f0 + f1))
}

fn simpson(f0: f64, f1: f64, f2: f64, h: f64) -> f64 {
    h / 3.0 * (f0 + 4.0 * f1 + f2)
}

/// `F_j = ∫_{x_0}^{x_j} f` on a uniform grid of spacing `h`.
///
/// Even nodes use composite Simpson; odd nodes add a cubic interval rule
/// to the preceding even node.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let opt: Vec<Option<f64>> = f.iter().map(|&v| Some(v)).collect();
    cumulative_with_gaps(&opt, h, |_, _| None).into_iter().map(|v| v.expect("gap-free input")).collect()
}

/// Like [`cumulative_simpson`], but intervals touching a missing sample are
/// handed to `refine(a, b)` with `a`, `b` the grid offsets from `x_0`.
/// Once `refine` fails, the remaining entries are `None`.
pub fn cumulative_with_gaps<F>(f: &[Option<f64>], h: f64, mut refine: F) -> Vec<Option<f64>>
where
    F: FnMut(f64, f64) -> Option<f64>,
{
    let n = f.len();
    let mut out = vec![None; n];
    if n == 0 {
        return out;
    }
    out[0] = Some(0.0);
    let x = |j: usize| j as f64 * h;
    let mut acc = 0.0;
    let mut j = 0;
    while j + 2 < n {
        let (a, b, c) = (f[j], f[j + 1], f[j + 2]);
        let (mid, end) = match (a, b, c) {
            (Some(a), Some(b), Some(c)) => (interval(f, j, h).expect("nodes present"), simpson(a, b, c, h)),
            _ => {
                let Some(left) = refine(x(j), x(j + 1)) else { return out };
                out[j + 1] = Some(acc + left);
                let Some(right) = refine(x(j + 1), x(j + 2)) else { return out };
                (left, left + right)
            }
        };
        out[j + 1] = Some(acc + mid);
        acc += end;
        out[j + 2] = Some(acc);
        j += 2;
    }
    if j + 1 < n {
        let piece = interval(f, j, h).or_else(|| refine(x(j), x(j + 1)));
        out[j + 1] = piece.map(|p| acc + p);
    }
    out
}

/// Five-point Gauss–Legendre rule; `None` if any node evaluation fails.
pub fn gauss_legendre<F>(f: &mut F, a: f64, b: f64) -> Option<f64>
where
    F: FnMut(f64) -> Option<f64>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        sum += w * f(mid + half * x)?;
    }
    Some(half * sum)
}

/// Adaptive bisection with open Gauss–Legendre panels.
///
/// Subintervals whose evaluation fails are split further; `None` when one
/// still fails at [`MAX_DEPTH`].
pub fn adaptive_gauss_legendre<F>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> Option<f64>,
{
    let whole = gauss_legendre(&mut f, a, b);
    bisect(&mut f, a, b, whole, abs_tol, 0)
}

fn bisect<F>(f: &mut F, a: f64, b: f64, whole: Option<f64>, tol: f64, depth: u32) -> Option<f64>
where
    F: FnMut(f64) -> Option<f64>,
{
    let m = 0.5 * (a + b);
    let left = gauss_legendre(f, a, m);
    let right = gauss_legendre(f, m, b);
    if let (Some(l), Some(r)) = (left, right) {
        let converged = whole.is_some_and(|w| (w - (l + r)).abs() <= tol);
        if converged || depth >= MAX_DEPTH {
            return Some(l + r);
        }
    } else if depth >= MAX_DEPTH {
        return None;
    }
    let l = bisect(f, a, m, left, 0.5 * tol, depth + 1)?;
    let r = bisect(f, m, b, right, 0.5 * tol, depth + 1)?;
    Some(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, h: f64) -> Vec<f64> {
        (0..n).map(|j| j as f64 * h).collect()
    }

    #[test]
    fn cubic_is_exact_on_even_and_odd_nodes() {
        for n in [2, 3, 4, 7, 10] {
            let h = 0.3;
            let xs = grid(n, h);
            let f: Vec<f64> = xs.iter().map(|x| 1.0 - 2.0 * x + 3.0 * x * x).collect();
            let out = cumulative_simpson(&f, h);
            for (j, x) in xs.iter().enumerate() {
                let exact = x - x * x + x * x * x;
                let tol = if n < 4 { 0.1 } else { 1e-12 };
                assert!((out[j] - exact).abs() < tol, "n={n} j={j}: {} vs {exact}", out[j]);
            }
        }
    }

    #[test]
    fn converges_at_fourth_order() {
        let err = |n: usize| {
            let h = 2.0 / (n - 1) as f64;
            let f: Vec<f64> = grid(n, h).iter().map(|x| x.sin()).collect();
            let out = cumulative_simpson(&f, h);
            out.iter().enumerate().map(|(j, v)| (v - (1.0 - (j as f64 * h).cos())).abs()).fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn gaps_are_refined() {
        let h = 0.1;
        let n = 21;
        let xs = grid(n, h);
        let mut f: Vec<Option<f64>> = xs.iter().map(|x| Some(x.exp())).collect();
        f[7] = None;
        let out = cumulative_with_gaps(&f, h, |a, b| adaptive_gauss_legendre(|x| Some(x.exp()), a, b, 1e-13));
        for (j, x) in xs.iter().enumerate() {
            assert!((out[j].unwrap() - (x.exp() - 1.0)).abs() < 5e-6, "j={j} {:?} {}", out[j], x.exp() - 1.0);
        }
    }

    #[test]
    fn integrable_hole_is_skipped_by_open_rule() {
        let f = |x: f64| if x == 0.5 { None } else { Some(x * x) };
        let v = adaptive_gauss_legendre(f, 0.0, 1.0, 1e-14).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn persistent_failure_propagates() {
        let f = |x: f64| if (x - 0.3).abs() < 0.05 { None } else { Some(1.0) };
        assert!(adaptive_gauss_legendre(f, 0.0, 1.0, 1e-12).is_none());
        let vals: Vec<Option<f64>> = vec![Some(1.0), None, Some(1.0), Some(1.0), Some(1.0)];
        let out = cumulative_with_gaps(&vals, 0.25, |_, _| None);
        assert_eq!(out[0], Some(0.0));
        assert!(out[1..].iter().all(Option::is_none));
    }
}
