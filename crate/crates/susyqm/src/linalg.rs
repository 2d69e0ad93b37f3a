//! Dense symmetric-tridiagonal eigensolver (Sturm bisection + inverse
//! iteration) and a small positive-semidefiniteness check for Gram matrices.

use crate::Real;
use num_complex::Complex64;

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below
/// `lambda`, via the Sturm sequence of LDLᵀ pivots.
pub fn sturm_count(diag: &[Real], off: &[Real], lambda: Real) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let denom = if q.abs() < 1e-300 { 1e-300_f64.copysign(q.max(1e-300)) } else { q };
        q = diag[i] - lambda - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `k` eigenvalues by bisection inside the Gershgorin interval.
pub fn lowest_eigenvalues(diag: &[Real], off: &[Real], k: usize) -> Vec<Real> {
    let n = diag.len();
    assert!(k <= n);
    let mut lo = Real::INFINITY;
    let mut hi = Real::NEG_INFINITY;
    for i in 0..n {
        let r = (if i > 0 { off[i - 1].abs() } else { 0.0 })
            + (if i + 1 < n { off[i].abs() } else { 0.0 });
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (0..k)
        .map(|idx| {
            let mut a = lo;
            let mut b = hi;
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if sturm_count(diag, off, m) > idx {
                    b = m;
                } else {
                    a = m;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Solve the tridiagonal system `(T - shift·I) x = b` with partial pivoting.
/// Row swaps introduce one extra superdiagonal of fill-in (`e`).
fn tridiag_solve_shifted(diag: &[Real], off: &[Real], shift: Real, b: &[Real]) -> Vec<Real> {
    let n = diag.len();
    let mut d: Vec<Real> = diag.iter().map(|&v| v - shift).collect();
    let mut c: Vec<Real> = off.to_vec(); // entry (i, i+1)
    let mut sub: Vec<Real> = off.to_vec(); // entry (i+1, i)
    let mut e = vec![0.0; n]; // entry (i, i+2), created by swaps
    let mut rhs = b.to_vec();
    for i in 0..n - 1 {
        if sub[i].abs() > d[i].abs() {
            // swap rows i and i+1; row i has entries (d, c, 0), row i+1 has
            // (sub, d, c) relative to column i
            let (d_i, c_i) = (d[i], c[i]);
            d[i] = sub[i];
            c[i] = d[i + 1];
            e[i] = if i + 2 < n { c[i + 1] } else { 0.0 };
            sub[i] = d_i;
            d[i + 1] = c_i;
            if i + 2 < n {
                c[i + 1] = 0.0;
            }
            rhs.swap(i, i + 1);
        }
        let piv = if d[i].abs() < 1e-300 { 1e-300 } else { d[i] };
        let m = sub[i] / piv;
        d[i + 1] -= m * c[i];
        if i + 2 < n {
            c[i + 1] -= m * e[i];
        }
        rhs[i + 1] -= m * rhs[i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = rhs[i];
        if i + 1 < n {
            v -= c[i] * x[i + 1];
        }
        if i + 2 < n {
            v -= e[i] * x[i + 2];
        }
        let piv = if d[i].abs() < 1e-300 { 1e-300 } else { d[i] };
        x[i] = v / piv;
    }
    x
}

/// Eigenvector for an isolated eigenvalue by inverse iteration (2 sweeps from
/// a deterministic start), normalized to unit Euclidean norm.
pub fn eigenvector(diag: &[Real], off: &[Real], lambda: Real) -> Vec<Real> {
    let n = diag.len();
    let mut v: Vec<Real> = (0..n)
        .map(|i| 1.0 + 0.3 * ((i as Real * 0.7391).sin()))
        .collect();
    // tiny shift keeps the solve well-posed at the converged eigenvalue
    let shift = lambda + 1e-11;
    for _ in 0..3 {
        let w = tridiag_solve_shifted(diag, off, shift, &v);
        let norm = w.iter().map(|x| x * x).sum::<Real>().sqrt();
        v = w.into_iter().map(|x| x / norm).collect();
    }
    // fix sign: the first component of appreciable size is positive
    if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-3) {
        if lead < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
    v
}

/// Positive-semidefiniteness of a Hermitian matrix within `tol`, by pivoted
/// Gaussian elimination (all pivots must stay ≥ -tol).
pub fn hermitian_psd(matrix: &[Vec<Complex64>], tol: Real) -> bool {
    let n = matrix.len();
    let mut m: Vec<Vec<Complex64>> = matrix.to_vec();
    for k in 0..n {
        let piv = m[k][k].re;
        if m[k][k].im.abs() > 1e-9 * (1.0 + piv.abs()) {
            return false; // not Hermitian
        }
        if piv < -tol {
            return false;
        }
        if piv.abs() <= tol {
            continue;
        }
        for i in k + 1..n {
            let f = m[i][k] / Complex64::from(piv);
            for j in k..n {
                let mkj = m[k][j];
                m[i][j] -= f * mkj;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn free_particle_box_spectrum() {
        // -u'' = λ u on (0, π), Dirichlet: λ_k = k², FD gives the classic
        // 2(1-cos kh)/h² values
        let n = 400;
        let h = std::f64::consts::PI / (n as Real + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let eigs = lowest_eigenvalues(&diag, &off, 3);
        for (k, &e) in eigs.iter().enumerate() {
            let kk = (k + 1) as Real;
            let exact_fd = 2.0 * (1.0 - (kk * h).cos()) / (h * h);
            assert_abs_diff_eq!(e, exact_fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn eigenvector_satisfies_equation() {
        let n = 200;
        let h = 1.0 / (n as Real + 1.0);
        let diag: Vec<Real> = (0..n).map(|i| 2.0 / (h * h) + (i as Real * h).powi(2)).collect();
        let off = vec![-1.0 / (h * h); n - 1];
        let lam = lowest_eigenvalues(&diag, &off, 1)[0];
        let v = eigenvector(&diag, &off, lam);
        let mut resid: Real = 0.0;
        for i in 0..n {
            let mut r = (diag[i] - lam) * v[i];
            if i > 0 {
                r += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                r += off[i] * v[i + 1];
            }
            resid = resid.max(r.abs());
        }
        assert!(resid < 1e-7, "residual {resid}");
    }

    #[test]
    fn psd_check_accepts_and_rejects() {
        let id: Vec<Vec<Complex64>> = (0..3)
            .map(|i| (0..3).map(|j| Complex64::from(if i == j { 1.0 } else { 0.0 })).collect())
            .collect();
        assert!(hermitian_psd(&id, 1e-12));
        let mut neg = id.clone();
        neg[2][2] = Complex64::from(-0.5);
        assert!(!hermitian_psd(&neg, 1e-10));
        // rank-deficient Gram matrix of identical vectors is PSD
        let ones: Vec<Vec<Complex64>> = (0..3).map(|_| (0..3).map(|_| Complex64::from(1.0)).collect()).collect();
        assert!(hermitian_psd(&ones, 1e-12));
    }
}
