//! Symmetric tridiagonal kernels: Sturm counts, bisection and shifted solves.

/// Number of eigenvalues strictly below `lambda`, from the signs of the
/// `LDLᵀ` pivots of `T − λI`.
pub fn sturm_count(diag: &[f64], off: f64, lambda: f64) -> usize {
    let guard = f64::MIN_POSITIVE.sqrt();
    let off2 = off * off;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 { d - lambda } else { (d - lambda) - off2 / q };
        if q < 0.0 {
            count += 1;
        }
        if q.abs() < guard {
            q = if q < 0.0 { -guard } else { guard };
        }
    }
    count
}

/// Bracket `(lo, hi)` of the smallest eigenvalue with `hi − lo ≤ tol`,
/// `count(lo) = 0` and `count(hi) ≥ 1`.
pub fn smallest_eigenvalue_bracket(diag: &[f64], off: f64, tol: f64) -> (f64, f64) {
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut lo = dmin - 2.0 * off.abs();
    let mut hi = dmin;
    while sturm_count(diag, off, hi) == 0 {
        hi += (hi - lo).max(1e-300);
    }
    while sturm_count(diag, off, lo) > 0 {
        lo -= (hi - lo).max(1.0);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Solves `(T − shift·I) y = rhs` by symmetric Gaussian elimination.
pub fn shifted_solve(diag: &[f64], off: f64, shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let guard = f64::MIN_POSITIVE.sqrt();
    let mut pivots = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let mut p = diag[i] - shift;
        let mut r = rhs[i];
        if i > 0 {
            let l = off / pivots[i - 1];
            p -= l * off;
            r -= l * y[i - 1];
        }
        if p.abs() < guard {
            p = if p < 0.0 { -guard } else { guard };
        }
        pivots.push(p);
        y.push(r);
    }
    for i in (0..n).rev() {
        let next = if i + 1 < n { off * y[i + 1] } else { 0.0 };
        y[i] = (y[i] - next) / pivots[i];
    }
    y
}

/// `max_i |(T v − λ v)_i|`.
pub fn residual_sup(diag: &[f64], off: f64, lambda: f64, v: &[f64]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut r = (diag[i] - lambda) * v[i];
            if i > 0 {
                r += off * v[i - 1];
            }
            if i + 1 < n {
                r += off * v[i + 1];
            }
            r.abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn counts_on_two_by_two() {
        // [[1,-1],[-1,3]]: eigenvalues 2 ∓ √2
        let d = [1.0, 3.0];
        assert_eq!(sturm_count(&d, -1.0, 0.0), 0);
        assert_eq!(sturm_count(&d, -1.0, 1.0), 1);
        assert_eq!(sturm_count(&d, -1.0, 4.0), 2);
        let (lo, hi) = smallest_eigenvalue_bracket(&d, -1.0, 1e-13);
        assert!((0.5 * (lo + hi) - (2.0 - 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn free_chain_spectrum() {
        let n = 200;
        let d = vec![2.0; n];
        let (lo, _) = smallest_eigenvalue_bracket(&d, -1.0, 1e-14);
        let exact = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();
        assert!((lo - exact).abs() < 1e-13);
    }

    #[test]
    fn shifted_solve_inverts() {
        let d = [4.0, 5.0, 6.0, 7.0];
        let x = [1.0, -2.0, 0.5, 3.0];
        let mut rhs = vec![0.0; 4];
        for i in 0..4 {
            rhs[i] = (d[i] - 0.5) * x[i];
            if i > 0 {
                rhs[i] -= x[i - 1];
            }
            if i < 3 {
                rhs[i] -= x[i + 1];
            }
        }
        let y = shifted_solve(&d, -1.0, 0.5, &rhs);
        for i in 0..4 {
            assert!((y[i] - x[i]).abs() < 1e-14);
        }
    }
}
