//! Tridiagonal solves.

/// Solves a tridiagonal system in place with the Thomas algorithm.
///
/// `lower[i]` multiplies x[i-1], `upper[i]` multiplies x[i+1]; `lower[0]` and
/// `upper[n-1]` are ignored. Returns `false` on a zero pivot.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64], scratch: &mut Vec<f64>) -> bool {
    let n = diag.len();
    debug_assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    scratch.clear();
    scratch.resize(n, 0.0);
    let mut piv = diag[0];
    if piv == 0.0 || !piv.is_finite() {
        return false;
    }
    rhs[0] /= piv;
    for i in 1..n {
        scratch[i] = upper[i - 1] / piv;
        piv = diag[i] - lower[i] * scratch[i];
        if piv == 0.0 || !piv.is_finite() {
            return false;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [2 1 0; 1 3 1; 0 1 2] x = [3 5 3] -> x = [1 1 1]
        let mut b = vec![3.0, 5.0, 3.0];
        let mut s = Vec::new();
        assert!(solve_tridiagonal(&[0.0, 1.0, 1.0], &[2.0, 3.0, 2.0], &[1.0, 1.0, 0.0], &mut b, &mut s));
        for v in b {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn reports_zero_pivot() {
        let mut b = vec![1.0, 1.0];
        let mut s = Vec::new();
        assert!(!solve_tridiagonal(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &mut b, &mut s));
    }
}
