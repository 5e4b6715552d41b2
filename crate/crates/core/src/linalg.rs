//! Small dense vector and matrix helpers.
//!
//! Matrices are row-major `Vec<f64>` of length `n * n`. Everything here is
//! sized for n ≤ 10 or so; nothing is blocked or vectorized.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Normalizes in place. Returns the original norm; a zero vector is left
/// untouched.
pub fn normalize(a: &mut [f64]) -> f64 {
    let nrm = norm2(a);
    if nrm > 0.0 {
        a.iter_mut().for_each(|v| *v /= nrm);
    }
    nrm
}

pub fn frobenius(m: &[f64]) -> f64 {
    norm2(m)
}

/// `‖a − s·b‖₂`.
pub fn residual(a: &[f64], s: f64, b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - s * y) * (x - s * y))
        .sum::<f64>()
        .sqrt()
}

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `tol * ‖M‖_F` (or to exactly zero). Only the upper triangle is read; the
/// caller is responsible for passing a symmetric matrix.
pub fn sym_eigen(m: &[f64], n: usize, tol: f64) -> SymEigen {
    debug_assert_eq!(m.len(), n * n);
    let mut a = m.to_vec();
    for i in 0..n {
        for j in 0..i {
            a[i * n + j] = a[j * n + i];
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = frobenius(&a);
    let threshold = tol * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off <= threshold || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    SymEigen {
        values: order.iter().map(|&k| a[k * n + k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|r| v[r * n + k]).collect())
            .collect(),
    }
}

/// Solves `M x = b` by Gaussian elimination with partial pivoting. Returns
/// `None` when a pivot is below `1e-14` times the largest entry of `M`.
pub fn solve(m: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert_eq!(m.len(), n * n);
    let mut a = m.to_vec();
    let mut x = b.to_vec();
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap();
        if a[pivot * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            x.swap(pivot, col);
        }
        for r in (col + 1)..n {
            let f = a[r * n + col] / a[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[r * n + k] -= f * a[col * n + k];
            }
            x[r] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for k in (col + 1)..n {
            acc -= a[col * n + k] * x[k];
        }
        x[col] = acc / a[col * n + col];
    }
    Some(x)
}

/// Least-squares solution of the overdetermined `rows × cols` system
/// `J d = r` through the normal equations.
pub fn least_squares(j: &[f64], rows: usize, cols: usize, r: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(j.len(), rows * cols);
    let mut jtj = vec![0.0; cols * cols];
    let mut jtr = vec![0.0; cols];
    for p in 0..cols {
        for q in 0..cols {
            jtj[p * cols + q] = (0..rows).map(|k| j[k * cols + p] * j[k * cols + q]).sum();
        }
        jtr[p] = (0..rows).map(|k| j[k * cols + p] * r[k]).sum();
    }
    solve(&jtj, &jtr)
}
