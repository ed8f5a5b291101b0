//! Deterministic direction grids on the unit sphere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::sample::Direction;
use crate::scalar::Scalar;

/// `L` equispaced directions `(cos 2 pi l / L, sin 2 pi l / L)`.
pub fn circle<T: Scalar>(l: usize) -> Vec<Direction<T>> {
    let step = T::two() * T::PI() / T::from_count(l);
    (0..l).map(|i| Direction::from_angle(step * T::from_count(i))).collect()
}

/// `L` equispaced directions on the arc `[from, to]`, endpoints included.
pub fn arc<T: Scalar>(from: T, to: T, l: usize) -> Vec<Direction<T>> {
    if l == 1 {
        return vec![Direction::from_angle(from)];
    }
    let step = (to - from) / T::from_count(l - 1);
    (0..l).map(|i| Direction::from_angle(from + step * T::from_count(i))).collect()
}

/// Fibonacci lattice of `L` points on the 2-sphere.
pub fn fibonacci_sphere<T: Scalar>(l: usize) -> Vec<Direction<T>> {
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let lt = T::from_count(l);
    (0..l)
        .map(|i| {
            let z = T::one() - T::two() * (T::from_count(i) + T::half()) / lt;
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let phi = golden * T::from_count(i);
            Direction::normalized_unchecked(vec![r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

/// Direction grid used throughout the crate: `{+1, -1}` for `d = 1`, the
/// equispaced circle for `d = 2`, and `L` lattice points plus their antipodes
/// for `d >= 3` (Fibonacci lattice for `d = 3`, seeded Gaussian draws above).
pub fn grid<T: Scalar>(d: usize, l: usize) -> Vec<Direction<T>> {
    match d {
        0 => Vec::new(),
        1 => vec![Direction::normalized_unchecked(vec![T::one()]), Direction::normalized_unchecked(vec![-T::one()])],
        2 => circle(l),
        _ => {
            let base: Vec<Direction<T>> = if d == 3 { fibonacci_sphere(l) } else { random_directions(d, l, 0x5eed) };
            let mut all = Vec::with_capacity(2 * base.len());
            for u in &base {
                all.push(u.negated());
            }
            let mut out = base;
            out.append(&mut all);
            out
        }
    }
}

/// `count` uniformly distributed directions from a seeded generator.
pub fn random_directions<T: Scalar>(d: usize, count: usize, seed: u64) -> Vec<Direction<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<T> = (0..d).map(|_| T::lit(StandardNormal.sample(&mut rng))).collect();
        if let Ok(u) = Direction::new(v) {
            out.push(u);
        }
    }
    out
}

/// Images `u_A` of a grid under `z -> A z + b` (see [`Direction::affine_transform`]).
pub fn affine_grid<T: Scalar>(grid: &[Direction<T>], a_inv: &[T]) -> Vec<Direction<T>> {
    grid.iter().map(|u| u.affine_transform(a_inv)).collect()
}
