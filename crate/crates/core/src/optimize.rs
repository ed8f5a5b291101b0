//! One-dimensional minimization.

use crate::scalar::Scalar;

/// Result of a bracketed line search.
#[derive(Clone, Copy, Debug)]
pub struct LineMin<T> {
    pub x: T,
    pub fx: T,
    pub evals: usize,
}

/// Golden-section search for a minimizer of `f` on `[a, b]`.
///
/// Exact for unimodal `f`; otherwise returns a local minimizer. Stops when the
/// bracket is narrower than `tol` or after `max_iter` reductions.
pub fn golden_section<T: Scalar, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T, max_iter: usize) -> LineMin<T> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::two();
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc <= fd {
        LineMin { x: c, fx: fc, evals }
    } else {
        LineMin { x: d, fx: fd, evals }
    }
}
