//! Chebyshev–Gauss–Lobatto nodes, differentiation matrix and
//! Clenshaw–Curtis weights on `[-1, 1]`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

/// `x_j = cos(πj/N)`, `j = 0..=N` (descending from 1 to -1).
pub fn nodes(npts: usize) -> Vec<f64> {
    let n = npts - 1;
    (0..npts).map(|j| (PI * j as f64 / n as f64).cos()).collect()
}

/// First-derivative collocation matrix on [`nodes`].
pub fn diff_matrix(npts: usize) -> DMatrix<f64> {
    let n = npts - 1;
    let x = nodes(npts);
    let c = |i: usize| if i == 0 || i == n { 2.0 } else { 1.0 };
    let mut d = DMatrix::zeros(npts, npts);
    for i in 0..npts {
        for j in 0..npts {
            if i != j {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                d[(i, j)] = c(i) / c(j) * sign / (x[i] - x[j]);
            }
        }
    }
    // negative-sum trick for the diagonal
    for i in 0..npts {
        let s: f64 = (0..npts).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -s;
    }
    d
}

/// Clenshaw–Curtis quadrature weights on [`nodes`]; they integrate
/// polynomials of degree `≤ N` exactly over `[-1, 1]`.
pub fn clenshaw_curtis(npts: usize) -> Vec<f64> {
    let n = npts - 1;
    let nf = n as f64;
    let theta: Vec<f64> = (0..npts).map(|j| PI * j as f64 / nf).collect();
    let mut w = vec![0.0; npts];
    let mut v = vec![1.0; npts];
    if n % 2 == 0 {
        w[0] = 1.0 / (nf * nf - 1.0);
        w[n] = w[0];
        for k in 1..n / 2 {
            let kf = k as f64;
            for j in 1..n {
                v[j] -= 2.0 * (2.0 * kf * theta[j]).cos() / (4.0 * kf * kf - 1.0);
            }
        }
        for j in 1..n {
            v[j] -= (nf * theta[j]).cos() / (nf * nf - 1.0);
        }
    } else {
        w[0] = 1.0 / (nf * nf);
        w[n] = w[0];
        for k in 1..=(n - 1) / 2 {
            let kf = k as f64;
            for j in 1..n {
                v[j] -= 2.0 * (2.0 * kf * theta[j]).cos() / (4.0 * kf * kf - 1.0);
            }
        }
    }
    for j in 1..n {
        w[j] = 2.0 * v[j] / nf;
    }
    w
}
