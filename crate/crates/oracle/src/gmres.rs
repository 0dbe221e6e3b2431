//! Restarted, right-preconditioned GMRES.

use crate::error::{OracleError, Result};
use crate::C64;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct GmresReport {
    pub matvecs: usize,
    pub relative_residual: f64,
}

/// Solve `A x = b` to `||b - A x|| <= tol ||b||`, starting from `x0` (zero if absent).
pub fn gmres<A, P>(
    apply: A,
    precond: P,
    b: &[C64],
    x0: Option<Vec<C64>>,
    tol: f64,
    restart: usize,
    max_matvecs: usize,
) -> Result<(Vec<C64>, GmresReport)>
where
    A: Fn(&[C64]) -> Vec<C64>,
    P: Fn(&[C64]) -> Vec<C64>,
{
    let n = b.len();
    let zero = C64::new(0.0, 0.0);
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((vec![zero; n], GmresReport { matvecs: 0, relative_residual: 0.0 }));
    }
    let mut x = x0.filter(|v| v.len() == n).unwrap_or_else(|| vec![zero; n]);
    let mut matvecs = 0;
    loop {
        let ax = apply(&x);
        matvecs += 1;
        let r: Vec<C64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let beta = norm(&r);
        if beta <= tol * bnorm {
            return Ok((x, GmresReport { matvecs, relative_residual: beta / bnorm }));
        }
        if matvecs >= max_matvecs {
            return Err(OracleError::NotConverged(format!("GMRES residual {:e} after {matvecs} products", beta / bnorm)));
        }
        let mut v: Vec<Vec<C64>> = vec![r.iter().map(|z| z / beta).collect()];
        let mut h = vec![vec![zero; restart]; restart + 1];
        let (mut cs, mut sn) = (vec![0.0; restart], vec![zero; restart]);
        let mut g = vec![zero; restart + 1];
        g[0] = C64::new(beta, 0.0);
        let mut k_used = 0;
        for k in 0..restart {
            let mut w = apply(&precond(&v[k]));
            matvecs += 1;
            // Modified Gram-Schmidt, applied twice for robustness.
            for _ in 0..2 {
                for (i, vi) in v.iter().enumerate() {
                    let hij = dot(vi, &w);
                    h[i][k] += hij;
                    for (wj, vj) in w.iter_mut().zip(vi) {
                        *wj -= hij * vj;
                    }
                }
            }
            let hn = norm(&w);
            h[k + 1][k] = C64::new(hn, 0.0);
            for i in 0..k {
                let (a, bb) = (h[i][k], h[i + 1][k]);
                h[i][k] = a * cs[i] + sn[i] * bb;
                h[i + 1][k] = -sn[i].conj() * a + bb * cs[i];
            }
            let (a, bb) = (h[k][k], h[k + 1][k]);
            let rr = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if a.norm() == 0.0 {
                cs[k] = 0.0;
                sn[k] = C64::new(1.0, 0.0);
            } else {
                cs[k] = a.norm() / rr;
                sn[k] = a / a.norm() * bb.conj() / rr;
            }
            h[k][k] = a * cs[k] + sn[k] * bb;
            h[k + 1][k] = zero;
            g[k + 1] = -sn[k].conj() * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            if g[k + 1].norm() <= 0.5 * tol * bnorm || hn == 0.0 || matvecs >= max_matvecs {
                break;
            }
            v.push(w.iter().map(|z| z / hn).collect());
        }
        let mut y = vec![zero; k_used];
        for i in (0..k_used).rev() {
            let mut acc = g[i];
            for j in i + 1..k_used {
                acc -= h[i][j] * y[j];
            }
            y[i] = acc / h[i][i];
        }
        let mut u = vec![zero; n];
        for (yi, vi) in y.iter().zip(&v) {
            for (uj, vj) in u.iter_mut().zip(vi) {
                *uj += yi * vj;
            }
        }
        for (xj, dj) in x.iter_mut().zip(precond(&u)) {
            *xj += dj;
        }
    }
}
