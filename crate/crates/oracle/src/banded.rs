//! Banded Gaussian elimination with partial pivoting for one right-hand side.

use crate::csr::CsrMatrix;
use crate::error::{OracleError, Result};
use crate::C64;

/// Lower and upper bandwidth of a square sparse matrix.
pub fn bandwidths(a: &CsrMatrix) -> (usize, usize) {
    let (mut kl, mut ku) = (0, 0);
    for (r, c, _) in a.triplets() {
        if r > c {
            kl = kl.max(r - c);
        } else {
            ku = ku.max(c - r);
        }
    }
    (kl, ku)
}

/// Bytes needed by `solve_banded` for the given matrix.
pub fn banded_bytes(n: usize, kl: usize, ku: usize) -> usize {
    n.saturating_mul(2 * kl + ku + 1).saturating_mul(16)
}

/// Solve `A x = b`. Rows are stored with their own first column so pivot
/// swaps can move whole rows; fill-in stays within `kl + ku` above the diagonal.
pub fn solve_banded(a: &CsrMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.nrows;
    let (kl, ku) = bandwidths(a);
    let w = 2 * kl + ku + 1;
    let zero = C64::new(0.0, 0.0);
    let mut start: Vec<isize> = (0..n).map(|i| i as isize - kl as isize).collect();
    let mut rows: Vec<Vec<C64>> = vec![vec![zero; w]; n];
    for (r, c, v) in a.triplets() {
        rows[r][(c as isize - start[r]) as usize] = v;
    }
    let mut rhs = b.to_vec();
    let scale = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..n {
        let last = (i + kl).min(n - 1);
        let at = |rows: &Vec<Vec<C64>>, start: &Vec<isize>, r: usize, c: usize| -> C64 {
            let k = c as isize - start[r];
            if k < 0 || k >= w as isize {
                zero
            } else {
                rows[r][k as usize]
            }
        };
        let mut piv = i;
        let mut best = at(&rows, &start, i, i).norm();
        for r in i + 1..=last {
            let v = at(&rows, &start, r, i).norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= 1e-14 * scale {
            return Err(OracleError::NotConverged(format!("singular pivot at row {i}")));
        }
        if piv != i {
            rows.swap(i, piv);
            start.swap(i, piv);
            rhs.swap(i, piv);
            // Keep `start = position - kl` for every row still to be eliminated.
            let want = piv as isize - kl as isize;
            let shift = (want - start[piv]) as usize;
            let row = &mut rows[piv];
            row.rotate_left(shift);
            for z in row[w - shift..].iter_mut() {
                *z = zero;
            }
            start[piv] = want;
        }
        let pivot = at(&rows, &start, i, i);
        let hi = (i + kl + ku).min(n - 1);
        let (head, tail) = rows.split_at_mut(i + 1);
        let prow = &head[i];
        let ps = start[i];
        for r in i + 1..=last {
            let rs = start[r];
            let row = &mut tail[r - i - 1];
            let k = (i as isize - rs) as usize;
            if k >= w || row[k] == zero {
                continue;
            }
            let m = row[k] / pivot;
            row[k] = zero;
            for c in i + 1..=hi {
                let pk = c as isize - ps;
                if pk < 0 || pk >= w as isize {
                    continue;
                }
                let pv = prow[pk as usize];
                if pv != zero {
                    row[(c as isize - rs) as usize] -= m * pv;
                }
            }
            rhs[r] = rhs[r] - m * rhs[i];
        }
    }
    let mut x = vec![zero; n];
    for i in (0..n).rev() {
        let hi = (i + kl + ku).min(n - 1);
        let mut acc = rhs[i];
        for c in i + 1..=hi {
            let k = c as isize - start[i];
            if k >= 0 && (k as usize) < w {
                acc -= rows[i][k as usize] * x[c];
            }
        }
        x[i] = acc / rows[i][(i as isize - start[i]) as usize];
    }
    Ok(x)
}
