//! Restarted GMRES with right preconditioning (modified Gram–Schmidt, Givens).

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub iterations: usize,
    /// True relative residual `‖b − Ax‖ / ‖b‖`.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = b` starting from the contents of `x`.
///
/// `apply(v, out)` writes `A v`; `precond(v, out)` writes `M⁻¹ v`.
pub fn solve<A, P>(mut apply: A, mut precond: P, b: &[f64], x: &mut [f64], s: Settings) -> Result<Outcome>
where
    A: FnMut(&[f64], &mut [f64]),
    P: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(Outcome { iterations: 0, residual: 0.0 });
    }
    let m = s.restart.max(1);
    let mut basis: Vec<Vec<f64>> = (0..=m).map(|_| vec![0.0; n]).collect();
    let mut zs: Vec<Vec<f64>> = (0..m).map(|_| vec![0.0; n]).collect();
    let mut h = vec![vec![0.0; m]; m + 1];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut r = vec![0.0; n];
    let mut total = 0;

    loop {
        apply(x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let beta = norm(&r);
        let rel = beta / bnorm;
        if !rel.is_finite() {
            return Err(Error::SolverDiverged { iterations: total, residual: rel });
        }
        if rel <= s.tol {
            return Ok(Outcome { iterations: total, residual: rel });
        }
        if total >= s.max_iter {
            return Err(Error::SolverDiverged { iterations: total, residual: rel });
        }

        for (v, ri) in basis[0].iter_mut().zip(&r) {
            *v = ri / beta;
        }
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;
        let mut k = 0;
        while k < m && total < s.max_iter {
            precond(&basis[k], &mut zs[k]);
            let (head, tail) = basis.split_at_mut(k + 1);
            let w = &mut tail[0];
            apply(&zs[k], w);
            for i in 0..=k {
                let hik = dot(w, &head[i]);
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(&head[i]) {
                    *wj -= hik * vj;
                }
            }
            let hk1 = norm(w);
            h[k + 1][k] = hk1;
            if hk1 > 0.0 {
                w.iter_mut().for_each(|v| *v /= hk1);
            }
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == 0.0 {
                cs[k] = 1.0;
                sn[k] = 0.0;
            } else {
                cs[k] = h[k][k] / denom;
                sn[k] = h[k + 1][k] / denom;
            }
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k += 1;
            total += 1;
            if g[k].abs() / bnorm <= s.tol || hk1 == 0.0 {
                break;
            }
        }

        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for j in i + 1..k {
                acc -= h[i][j] * y[j];
            }
            y[i] = acc / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, zi) in x.iter_mut().zip(&zs[j]) {
                *xi += yj * zi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_nonsymmetric_system() {
        let n = 50;
        let a = |v: &[f64], out: &mut [f64]| {
            for i in 0..n {
                let left = if i > 0 { v[i - 1] } else { 0.0 };
                let right = if i + 1 < n { v[i + 1] } else { 0.0 };
                out[i] = 4.0 * v[i] - 1.5 * left - 0.5 * right;
            }
        };
        let p = |v: &[f64], out: &mut [f64]| {
            for i in 0..n {
                out[i] = v[i] / 4.0;
            }
        };
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b = vec![0.0; n];
        a(&xs, &mut b);
        let mut x = vec![0.0; n];
        let s = Settings { tol: 1e-13, restart: 10, max_iter: 500 };
        let out = solve(a, p, &b, &mut x, s).unwrap();
        assert!(out.residual <= 1e-13);
        for i in 0..n {
            assert!((x[i] - xs[i]).abs() < 1e-11);
        }
    }

    #[test]
    fn reports_failure() {
        let n = 30;
        let a = |v: &[f64], out: &mut [f64]| {
            for i in 0..n {
                out[i] = (1.0 + i as f64) * v[i];
            }
        };
        let b = vec![1.0; n];
        let mut x = vec![0.0; n];
        let s = Settings { tol: 1e-14, restart: 2, max_iter: 3 };
        let err = solve(a, |v: &[f64], o: &mut [f64]| o.copy_from_slice(v), &b, &mut x, s);
        assert!(matches!(err, Err(Error::SolverDiverged { iterations: 3, .. })));
    }
}
