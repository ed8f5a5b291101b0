//! Small dense linear algebra on row-major square matrices.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `A x = b` for symmetric positive definite `A` (row-major `k x k`).
pub fn cholesky_solve<T: Scalar>(a: &[T], b: &[T], k: usize) -> Result<Vec<T>> {
    let l = cholesky(a, k)?;
    // L y = b
    let mut y = vec![T::zero(); k];
    for i in 0..k {
        let mut s = b[i];
        for j in 0..i {
            s = s - l[i * k + j] * y[j];
        }
        y[i] = s / l[i * k + i];
    }
    // L' x = y
    let mut x = vec![T::zero(); k];
    for i in (0..k).rev() {
        let mut s = y[i];
        for j in i + 1..k {
            s = s - l[j * k + i] * x[j];
        }
        x[i] = s / l[i * k + i];
    }
    Ok(x)
}

/// Lower Cholesky factor; fails with `RankDeficient` on a non-positive pivot
/// relative to the diagonal scale.
pub fn cholesky<T: Scalar>(a: &[T], k: usize) -> Result<Vec<T>> {
    let scale = (0..k).map(|i| a[i * k + i].abs()).fold(T::zero(), T::max);
    let tol = scale * T::epsilon() * T::from_count(k.max(1) * 16);
    let mut l = vec![T::zero(); k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i * k + j];
            for p in 0..j {
                s = s - l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if !(s > tol) {
                    return Err(Error::RankDeficient);
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    Ok(l)
}

/// Numerical rank of a symmetric positive semidefinite matrix by pivoted
/// Cholesky; pivots below `rel_tol * trace` count as zero.
pub fn psd_rank<T: Scalar>(a: &[T], k: usize, rel_tol: T) -> usize {
    let mut m = a.to_vec();
    let trace = (0..k).map(|i| m[i * k + i]).fold(T::zero(), |x, y| x + y);
    if !(trace > T::zero()) {
        return 0;
    }
    let tol = trace * rel_tol;
    let mut active: Vec<usize> = (0..k).collect();
    let mut rank = 0;
    while !active.is_empty() {
        let (pos, &piv) = active
            .iter()
            .enumerate()
            .max_by(|x, y| m[*x.1 * k + *x.1].partial_cmp(&m[*y.1 * k + *y.1]).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        let d = m[piv * k + piv];
        if !(d > tol) {
            break;
        }
        rank += 1;
        active.swap_remove(pos);
        // Schur complement update on the remaining indices.
        for &i in &active {
            for &j in &active {
                m[i * k + j] = m[i * k + j] - m[i * k + piv] * m[piv * k + j] / d;
            }
        }
    }
    rank
}

/// Inverse of a general square matrix by Gauss-Jordan with partial pivoting.
pub fn invert<T: Scalar>(a: &[T], k: usize) -> Result<Vec<T>> {
    let mut m = a.to_vec();
    let mut inv = vec![T::zero(); k * k];
    for i in 0..k {
        inv[i * k + i] = T::one();
    }
    let scale = m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&x, &y| {
                m[x * k + col].abs().partial_cmp(&m[y * k + col].abs()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if !(m[piv * k + col].abs() > scale * T::epsilon() * T::from_count(k)) {
            return Err(Error::RankDeficient);
        }
        if piv != col {
            for j in 0..k {
                m.swap(piv * k + j, col * k + j);
                inv.swap(piv * k + j, col * k + j);
            }
        }
        let p = m[col * k + col];
        for j in 0..k {
            m[col * k + j] = m[col * k + j] / p;
            inv[col * k + j] = inv[col * k + j] / p;
        }
        for r in 0..k {
            if r != col {
                let f = m[r * k + col];
                if f != T::zero() {
                    for j in 0..k {
                        m[r * k + j] = m[r * k + j] - f * m[col * k + j];
                        inv[r * k + j] = inv[r * k + j] - f * inv[col * k + j];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// `A' x` for row-major `k x k` matrix `A`.
pub fn transpose_mul<T: Scalar>(a: &[T], x: &[T], k: usize) -> Vec<T> {
    (0..k).map(|j| (0..k).fold(T::zero(), |s, i| s + a[i * k + j] * x[i])).collect()
}

/// `A x` for row-major `k x k` matrix `A`.
pub fn mul<T: Scalar>(a: &[T], x: &[T], k: usize) -> Vec<T> {
    (0..k).map(|i| (0..k).fold(T::zero(), |s, j| s + a[i * k + j] * x[j])).collect()
}
