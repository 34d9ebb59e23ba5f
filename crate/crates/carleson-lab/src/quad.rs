//! Quadrature rules.
//!
//! Two rules cover the whole crate: the uniform periodic rule on
//! [0, 2π), which is exact for trigonometric polynomials of degree
//! below the node count, and the composite midpoint rule on arbitrary
//! intervals, which never places a node on an interval endpoint (and so
//! never on a kernel singularity that was split onto a boundary).

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Uniform rule on [0, 2π): nodes 2πj/M, weights 2π/M.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicGrid {
    pub m: usize,
}

impl PeriodicGrid {
    pub fn new(m: usize) -> Self {
        assert!(m >= 4, "periodic grid needs at least 4 nodes");
        PeriodicGrid { m }
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        TAU * j as f64 / self.m as f64
    }

    #[inline]
    pub fn weight(&self) -> f64 {
        TAU / self.m as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |j| self.node(j))
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        let w = self.weight();
        self.nodes().map(|x| f(x) * w).sum()
    }

    pub fn integrate_real<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let w = self.weight();
        self.nodes().map(|x| f(x) * w).sum()
    }
}

/// Composite midpoint rule on [a, b] with n nodes. Returns 0 for a >= b.
pub fn midpoint<F: Fn(f64) -> Complex64>(a: f64, b: f64, n: usize, f: F) -> Complex64 {
    if a >= b || n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let h = (b - a) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        acc += f(a + (j as f64 + 0.5) * h);
    }
    acc * h
}

pub fn midpoint_real<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    midpoint(a, b, n, |x| Complex64::new(f(x), 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_rule_is_exact_for_pure_modes() {
        let g = PeriodicGrid::new(64);
        for n in -31i64..=31 {
            let v = g.integrate(|x| Complex64::from_polar(1.0, n as f64 * x));
            let expect = if n == 0 { TAU } else { 0.0 };
            assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-10, "mode {n}");
        }
    }

    #[test]
    fn midpoint_integrates_polynomials() {
        // midpoint is exact on affine functions
        let v = midpoint_real(1.0, 3.0, 17, |x| 2.0 * x + 1.0);
        assert!((v - 10.0).abs() < 1e-12);
        // and second order convergent otherwise
        let v = midpoint_real(0.0, 1.0, 4096, |x| x * x);
        assert!((v - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn midpoint_empty_interval_is_zero() {
        assert_eq!(midpoint_real(2.0, 2.0, 100, |_| 1.0), 0.0);
        assert_eq!(midpoint_real(3.0, 2.0, 100, |_| 1.0), 0.0);
    }
}
