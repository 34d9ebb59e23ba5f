//! Concrete kernels on the real line.
//!
//! The truncated Hilbert kernel κ, the Dirichlet kernels K_N in both the
//! exponential-sum and closed secant forms, the dyadic partition of unity
//! ψ with its kernel slices K_s, the periodic bump k_r, and the averaged
//! Dirichlet kernel L' that represents the approximate Hilbert transform
//! as a convolution.

use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default guard band on |1 - e^{ix}| below which closed forms are refused.
pub const SINGULARITY_GUARD: f64 = 1e-12;

#[inline]
fn one_minus_exp(x: f64) -> Complex64 {
    Complex64::new(1.0 - x.cos(), -x.sin())
}

/// Truncated Hilbert kernel: 0 at the origin and outside the unit
/// interval, (1-|x|)/(1-e^{ix}) in between.
pub fn kappa(x: f64) -> Complex64 {
    if x == 0.0 || x.abs() >= 1.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(1.0 - x.abs(), 0.0) / one_minus_exp(x)
    }
}

/// Evaluation form for the Dirichlet kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirichletForm {
    /// Σ_{n=-N}^{N} e^{inx}
    Sum,
    /// e^{iNx}/(1-e^{-ix}) + e^{-iNx}/(1-e^{ix})
    Closed,
}

pub fn dirichlet_kernel(n: u32, x: f64, form: DirichletForm) -> Result<Complex64> {
    dirichlet_kernel_guarded(n, x, form, SINGULARITY_GUARD)
}

pub fn dirichlet_kernel_guarded(
    n: u32,
    x: f64,
    form: DirichletForm,
    guard: f64,
) -> Result<Complex64> {
    match form {
        DirichletForm::Sum => {
            let mut acc = Complex64::new(1.0, 0.0);
            for k in 1..=i64::from(n) {
                let kx = k as f64 * x;
                acc += Complex64::from_polar(1.0, kx) + Complex64::from_polar(1.0, -kx);
            }
            Ok(acc)
        }
        DirichletForm::Closed => {
            let denom = one_minus_exp(x);
            if denom.norm() <= guard {
                return Err(Error::Singularity(format!(
                    "closed Dirichlet form at x = {x}: |1-e^(ix)| = {} below guard {guard}",
                    denom.norm()
                )));
            }
            let nx = f64::from(n) * x;
            Ok(Complex64::from_polar(1.0, nx) / denom.conj()
                + Complex64::from_polar(1.0, -nx) / denom)
        }
    }
}

/// Dirichlet kernel by whichever form is defined: closed outside the
/// guard band, exponential sum inside.
pub fn dirichlet_kernel_auto(n: u32, x: f64) -> Complex64 {
    dirichlet_kernel_guarded(n, x, DirichletForm::Closed, SINGULARITY_GUARD)
        .unwrap_or_else(|_| dirichlet_kernel(n, x, DirichletForm::Sum).unwrap())
}

/// The dyadic partition of unity: the piecewise-linear bump with corners
/// at 1/(4D), 1/(2D), 1/4, 1/2 whose D-dilates sum to one on x > 0.
///
/// The two interior slopes are solved from the corner abscissas (the
/// partition identity forces the plateau value one and matching rise and
/// fall), not hard-coded.
#[derive(Debug, Clone, Copy)]
pub struct PsiPartition {
    d: f64,
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
    rise: f64,
    fall: f64,
}

impl PsiPartition {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > 4.0) {
            return Err(Error::Domain(format!("scale base D = {d} must exceed 4")));
        }
        let (c1, c2, c3, c4) = (1.0 / (4.0 * d), 1.0 / (2.0 * d), 0.25, 0.5);
        Ok(PsiPartition {
            d,
            c1,
            c2,
            c3,
            c4,
            rise: 1.0 / (c2 - c1),
            fall: 1.0 / (c4 - c3),
        })
    }

    pub fn scale_base(&self) -> f64 {
        self.d
    }

    /// ψ(x): zero outside [1/(4D), 1/2], one on [1/(2D), 1/4], linear on
    /// the two joining intervals.
    pub fn psi(&self, x: f64) -> f64 {
        if x <= self.c1 || x >= self.c4 {
            0.0
        } else if x < self.c2 {
            (x - self.c1) * self.rise
        } else if x <= self.c3 {
            1.0
        } else {
            (self.c4 - x) * self.fall
        }
    }

    /// |Σ_s ψ(D^{-s} x) - 1| over the finitely many active scales.
    pub fn partition_defect(&self, x: f64) -> Result<f64> {
        Ok((self.scale_sum(x)? - 1.0).abs())
    }

    fn scale_sum(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!(
                "partition of unity holds on x > 0, got {x}"
            )));
        }
        // ψ(D^{-s}x) is active iff c1 ≤ D^{-s}x ≤ c4
        let logd = self.d.ln();
        let s_lo = ((x / self.c4).ln() / logd).floor() as i64 - 1;
        let s_hi = ((x / self.c1).ln() / logd).ceil() as i64 + 1;
        let mut acc = 0.0;
        for s in s_lo..=s_hi {
            acc += self.psi(x * self.d.powi(-s as i32));
        }
        Ok(acc)
    }

    /// Kernel slice K_s(x, y) = κ(x-y) ψ(D^{-s}|x-y|) on the line; the
    /// slices are supported on (1/4)D^{s-1} ≤ |x-y| ≤ (1/2)D^s and sum to
    /// κ(x-y) over s.
    pub fn k_s(&self, s: i32, x: f64, y: f64) -> Complex64 {
        let rho = (x - y).abs();
        if rho == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let cut = self.psi(rho * self.d.powi(-s));
        if cut == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            kappa(x - y) * cut
        }
    }
}

/// 2π-periodic bump kernel min(1/r, 1 + r/|1-e^{ix}|^2), with the value
/// 1/r at the singular points.
pub fn bump_kr(r: f64, x: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("bump parameter r = {r} outside (0,1)")));
    }
    let denom = one_minus_exp(x).norm_sqr();
    if denom == 0.0 {
        Ok(1.0 / r)
    } else {
        Ok((1.0 / r).min(1.0 + r / denom))
    }
}

/// Smallest integer strictly larger than 1/r.
pub fn dirichlet_approx_n(r: f64) -> Result<u32> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!(
            "approximation parameter r = {r} outside (0,1)"
        )));
    }
    let inv = 1.0 / r;
    Ok(inv.floor() as u32 + 1)
}

/// Averaged Dirichlet kernel L'(x) = (1/N) Σ_{n=0}^{N-1} K_{N+n}(x) e^{i(N+n)x}
/// for a given N. The modulation sign is the one under which convolution
/// with L' reproduces the averaged modulated projection and the kernel
/// stays within 12 k_r of the truncated Hilbert kernel for every r.
pub fn lprime_n(n: u32, x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in n..(2 * n) {
        acc += dirichlet_kernel_auto(k, x) * Complex64::from_polar(1.0, f64::from(k) * x);
    }
    acc / f64::from(n)
}

/// L' for the truncation parameter r, with N the smallest integer above
/// 1/r. Satisfies |L'| ≤ 2^3/r and, on [-π, π],
/// |L'(x) - 1_{r<|x|<1} κ(x)| ≤ 12 k_r(x).
pub fn dirichlet_approx_lprime(r: f64, x: f64) -> Result<Complex64> {
    Ok(lprime_n(dirichlet_approx_n(r)?, x))
}

/// Lower secant bound data: returns (|1-e^{ix}|, 2η/π); the contract is
/// lhs ≥ rhs for η > 0, -2π+η ≤ x ≤ 2π-η, |x| ≥ η.
pub fn lower_secant_check(eta: f64, x: f64) -> Result<(f64, f64)> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("eta = {eta} must be positive")));
    }
    if x < -2.0 * PI + eta || x > 2.0 * PI - eta || x.abs() < eta {
        return Err(Error::Domain(format!(
            "x = {x} outside [-2π+η, 2π-η] with |x| ≥ η for η = {eta}"
        )));
    }
    Ok((one_minus_exp(x).norm(), 2.0 * eta / PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    #[test]
    fn kappa_support_and_value() {
        assert_eq!(kappa(0.0), Complex64::new(0.0, 0.0));
        assert_eq!(kappa(1.5), Complex64::new(0.0, 0.0));
        assert_eq!(kappa(1.0), Complex64::new(0.0, 0.0));
        // |κ(0.5)| = 0.5 / (2 sin 0.25), evaluated independently
        let expect = 0.5 / (2.0 * (0.25f64).sin());
        assert!((kappa(0.5).norm() - expect).abs() < 1e-12);
        assert!((kappa(0.5).norm() - 1.0105).abs() < 1e-4);
    }

    #[test]
    fn dirichlet_sum_and_closed_agree() {
        assert_eq!(
            dirichlet_kernel(0, 0.3, DirichletForm::Sum).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let v = dirichlet_kernel(7, 0.0, DirichletForm::Sum).unwrap();
        assert!((v - Complex64::new(15.0, 0.0)).norm() < 1e-12);
        assert!(dirichlet_kernel(7, 0.0, DirichletForm::Closed).is_err());

        let s = dirichlet_kernel(17, 0.7, DirichletForm::Sum).unwrap();
        let c = dirichlet_kernel(17, 0.7, DirichletForm::Closed).unwrap();
        assert!((s - c).norm() <= 1e-10);

        let mut rng = CounterRng::new(42);
        for _ in 0..500 {
            let n = rng.index(65) as u32;
            let x = rng.range(-8.0, 8.0);
            if one_minus_exp(x).norm() <= 1e-6 {
                continue;
            }
            let s = dirichlet_kernel(n, x, DirichletForm::Sum).unwrap();
            let c = dirichlet_kernel(n, x, DirichletForm::Closed).unwrap();
            assert!((s - c).norm() <= 1e-9, "N={n} x={x}");
        }
    }

    #[test]
    fn psi_shape_and_partition() {
        let part = PsiPartition::new(8.0).unwrap();
        assert!((part.psi(1.0 / 8.0) - 1.0).abs() < 1e-15); // inside [1/16, 1/4]
        assert_eq!(part.psi(0.5), 0.0);
        assert_eq!(part.psi(0.7), 0.0);
        assert_eq!(part.psi(1.0 / 32.0), 0.0);
        let defect = part.partition_defect(0.37).unwrap();
        assert!(defect <= 1e-12, "defect {defect}");
        // partition holds across many magnitudes for several D
        for d in [8.0, 32.0, 100.0] {
            let part = PsiPartition::new(d).unwrap();
            let mut rng = CounterRng::new(5);
            for _ in 0..2000 {
                let x = d.powi(-6) * d.powf(12.0 * rng.f64());
                assert!(part.partition_defect(x).unwrap() <= 1e-12, "D={d} x={x}");
            }
        }
        assert!(PsiPartition::new(4.0).is_err());
        assert!(part.partition_defect(0.0).is_err());
    }

    #[test]
    fn k_s_support_and_telescoping() {
        let part = PsiPartition::new(8.0).unwrap();
        // vanishing outside the annulus (1/4)D^{s-1} ≤ |x-y| ≤ (1/2)D^s
        assert_eq!(part.k_s(0, 0.0, 0.6), Complex64::new(0.0, 0.0));
        assert_eq!(part.k_s(0, 0.3, 0.3), Complex64::new(0.0, 0.0));
        let rho: f64 = 0.1;
        for s in -8..8 {
            let v = part.k_s(s, rho, 0.0);
            if v.norm() > 0.0 {
                let lo = 0.25 * 8.0f64.powi(s - 1);
                let hi = 0.5 * 8.0f64.powi(s);
                assert!(rho >= lo && rho <= hi, "s={s}");
            }
        }
        // slices telescope back to κ
        let sum: Complex64 = (-5..=5).map(|s| part.k_s(s, 0.1, 0.0)).sum();
        assert!((sum - kappa(0.1)).norm() <= 1e-12);
    }

    #[test]
    fn bump_kernel_values() {
        assert_eq!(bump_kr(0.1, 0.0).unwrap(), 10.0);
        let v = bump_kr(0.1, std::f64::consts::PI).unwrap();
        assert!((v - 1.025).abs() < 1e-12);
        let mut rng = CounterRng::new(1);
        for _ in 0..200 {
            let x = rng.range(-10.0, 10.0);
            assert!(bump_kr(0.2, x).unwrap() <= 5.0 + 1e-15);
            assert!(bump_kr(0.2, x).unwrap() > 0.0);
        }
        assert!(bump_kr(0.0, 1.0).is_err());
        assert!(bump_kr(1.0, 1.0).is_err());
    }

    #[test]
    fn lprime_parameters_and_bounds() {
        assert_eq!(dirichlet_approx_n(0.5).unwrap(), 3);
        assert_eq!(dirichlet_approx_n(0.1).unwrap(), 11);
        for r in [0.2, 0.1, 0.05] {
            let cap = 8.0 / r;
            for j in 0..2000 {
                let x = -PI + (j as f64 + 0.5) * (2.0 * PI / 2000.0);
                let lp = dirichlet_approx_lprime(r, x).unwrap();
                assert!(lp.norm() <= cap + 1e-9, "r={r} x={x}");
            }
        }
    }

    #[test]
    fn lprime_tracks_kappa_up_to_bump() {
        for r in [0.2, 0.1, 0.05, 0.004] {
            for j in 0..2000 {
                let x = -PI + (j as f64 + 0.5) * (2.0 * PI / 2000.0);
                let lp = dirichlet_approx_lprime(r, x).unwrap();
                let cut = if r < x.abs() && x.abs() < 1.0 {
                    kappa(x)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let bound = 12.0 * bump_kr(r, x).unwrap();
                assert!((lp - cut).norm() <= bound + 1e-9, "r={r} x={x}");
            }
        }
    }

    #[test]
    fn dirichlet_close_to_modulated_hilbert() {
        // |K_N(x) - (e^{-iNx}κ(x) + conj(e^{-iNx}κ(x)))| ≤ π on (-π, π)\{0}
        let mut rng = CounterRng::new(31);
        for _ in 0..2000 {
            let n = rng.index(65) as u32;
            let x = rng.range(-PI + 1e-9, PI - 1e-9);
            if x == 0.0 {
                continue;
            }
            let kn = dirichlet_kernel_auto(n, x);
            let h = Complex64::from_polar(1.0, -(f64::from(n)) * x) * kappa(x);
            let diff = (kn - (h + h.conj())).norm();
            assert!(diff <= PI + 1e-9, "N={n} x={x}: {diff}");
        }
    }

    #[test]
    fn lower_secant_cases() {
        let (lhs, rhs) = lower_secant_check(PI, PI).unwrap();
        assert!((lhs - 2.0).abs() < 1e-12 && (rhs - 2.0).abs() < 1e-12);
        let (lhs, rhs) = lower_secant_check(1.0, 1.0).unwrap();
        assert!((lhs - 0.9589).abs() < 1e-4);
        assert!((rhs - std::f64::consts::FRAC_2_PI).abs() < 1e-12);
        assert!(lhs >= rhs);
        let (lhs, _) = lower_secant_check(0.01, 0.01).unwrap();
        assert!(lhs >= 0.00637);
        assert!(lower_secant_check(0.5, 0.1).is_err());
        assert!(lower_secant_check(0.5, 7.0).is_err());
    }

    #[test]
    fn hilbert_kernel_bound_and_regularity() {
        let mut rng = CounterRng::new(77);
        for _ in 0..100_000 {
            let x = rng.range(-3.0, 3.0);
            let y = rng.range(-3.0, 3.0);
            if x == y {
                continue;
            }
            // size bound 2^2 (2|x-y|)^{-1}
            assert!(kappa(x - y).norm() <= 4.0 / (2.0 * (x - y).abs()) + 1e-12);
        }
        for _ in 0..100_000 {
            let x = rng.range(-2.0, 2.0);
            let y = rng.range(-2.0, 2.0);
            if x == y {
                continue;
            }
            let dy = rng.range(-0.5, 0.5) * (x - y).abs() / 2.0;
            let yp = y + dy;
            if 2.0 * (y - yp).abs() > (x - y).abs() || x == yp {
                continue;
            }
            let lhs = (kappa(x - y) - kappa(x - yp)).norm();
            let rhs = 256.0 * (y - yp).abs() / (x - y).powi(2);
            assert!(lhs <= rhs + 1e-12, "x={x} y={y} y'={yp}");
        }
    }
}
