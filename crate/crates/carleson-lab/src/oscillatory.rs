//! Oscillatory integral estimates: van der Corput decay for Lipschitz
//! amplitudes, the Lipschitz approximation of Hölder functions, and the
//! Hölder-amplitude cancellation check with the frequency metric
//! d_B(n, m) = 2R|n-m|.
//!
//! Norms of black-box callables are estimated on probe meshes; they are
//! lower bounds of the true suprema, so inequality contracts multiply the
//! mesh value by the declared safety factor 1.05.

use crate::quad::midpoint;
use crate::space::PointCloudSpace;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Safety factor applied to mesh-estimated norms inside contracts.
pub const MESH_SAFETY: f64 = 1.05;

/// Default probe mesh size for norm estimation.
pub const DEFAULT_MESH: usize = 2048;

type EvalFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Where μ lives: the line with quadrature, or a weighted point cloud.
pub enum Domain<'a> {
    Line { quad_m: usize },
    Cloud(&'a PointCloudSpace),
}

/// Inhomogeneous Lipschitz norm on [a, b] estimated on a uniform mesh:
/// sup |g| + (|b-a|/2) sup difference quotient.
pub fn lip_norm_mesh<F: Fn(f64) -> Complex64>(g: F, a: f64, b: f64, mesh: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / mesh as f64;
    let vals: Vec<Complex64> = (0..=mesh).map(|j| g(a + j as f64 * h)).collect();
    let sup = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let quot = vals
        .windows(2)
        .map(|w| (w[1] - w[0]).norm() / h)
        .fold(0.0, f64::max);
    sup + 0.5 * (b - a) * quot
}

/// Van der Corput estimate: returns
/// (|∫_α^β g e^{inx} dx|, 2π|β-α| ‖g‖_Lip(α,β) (1+|n||β-α|)^{-1}).
/// The norm is the mesh estimate times the safety factor; the contract is
/// lhs ≤ rhs.
pub fn van_der_corput<F: Fn(f64) -> Complex64 + Copy>(
    g: F,
    alpha: f64,
    beta: f64,
    n: i64,
    quad_m: usize,
) -> Result<(f64, f64)> {
    if beta < alpha {
        return Err(Error::Domain(format!("interval [{alpha}, {beta}] reversed")));
    }
    let lhs = midpoint(alpha, beta, quad_m, |x| {
        g(x) * Complex64::from_polar(1.0, n as f64 * x)
    })
    .norm();
    let norm = MESH_SAFETY * lip_norm_mesh(g, alpha, beta, DEFAULT_MESH);
    let len = beta - alpha;
    let rhs = 2.0 * PI * len * norm / (1.0 + n.unsigned_abs() as f64 * len);
    Ok((lhs, rhs))
}

/// A Hölder-continuous amplitude supported in B(z, R), carrying its
/// L∞-normalized τ-Hölder norm over B(z, 2R) estimated on a probe mesh:
/// sup |φ| + (2R)^τ sup |φ(x)-φ(y)| / |x-y|^τ.
pub struct HolderFunction {
    eval: EvalFn,
    pub center: f64,
    pub radius: f64,
    pub tau: f64,
    pub cnorm: f64,
}

impl HolderFunction {
    /// Build from a callable; `a` is the doubling exponent fixing τ = 1/a.
    pub fn new<F: Fn(f64) -> Complex64 + Send + Sync + 'static>(
        f: F,
        center: f64,
        radius: f64,
        a: u32,
        mesh: usize,
    ) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain("support radius must be positive".into()));
        }
        let tau = 1.0 / f64::from(a);
        let eval: EvalFn = Arc::new(f);
        let cnorm = holder_norm_mesh(&*eval, center, radius, tau, mesh);
        Ok(HolderFunction {
            eval,
            center,
            radius,
            tau,
            cnorm,
        })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }
}

/// Mesh estimate of the τ-Hölder norm over B(z, 2R).
pub fn holder_norm_mesh<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    center: f64,
    radius: f64,
    tau: f64,
    mesh: usize,
) -> f64 {
    let (a, b) = (center - 2.0 * radius, center + 2.0 * radius);
    let h = (b - a) / mesh as f64;
    let vals: Vec<Complex64> = (0..=mesh).map(|j| f(a + j as f64 * h)).collect();
    let sup = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // the Hölder quotient of a piecewise-smooth function is attained in
    // the small-separation limit, so adjacent and short-range pairs carry
    // the mesh estimate; longer strides refine the constant cheaply
    let mut quot = 0.0f64;
    for stride in [1usize, 2, 3, 5, 9, 17, 33, 65] {
        if stride > mesh {
            break;
        }
        let dx = stride as f64 * h;
        let denom = dx.powf(tau);
        for j in 0..(vals.len() - stride) {
            let q = (vals[j + stride] - vals[j]).norm() / denom;
            if q > quot {
                quot = q;
            }
        }
    }
    sup + (2.0 * radius).powf(tau) * quot
}

/// Lipschitz regularization of a Hölder amplitude by the normalized tent
/// average at scale tR:
/// φ̃(x) = (∫ L(x,y) dμ(y))^{-1} ∫ L(x,y) φ(y) dμ(y),
/// L(x,y) = max(0, 1 - ρ(x,y)/(tR)).
pub struct LipschitzApprox {
    pub eval: EvalFn,
    /// mesh-estimated inhomogeneous Lipschitz norm over B(z, 2R)
    pub lip_norm: f64,
    pub t: f64,
}

pub fn lipschitz_approx(
    phi: &HolderFunction,
    t: f64,
    domain: &Domain<'_>,
) -> Result<LipschitzApprox> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("t = {t} outside (0, 1]")));
    }
    let tr = t * phi.radius;
    let eval = phi.eval.clone();
    let tilde: EvalFn = match domain {
        Domain::Line { quad_m } => {
            let nodes = (*quad_m).max(64);
            Arc::new(move |x: f64| {
                let tent = move |y: f64| (1.0 - (x - y).abs() / tr).max(0.0);
                let mass = crate::quad::midpoint_real(x - tr, x + tr, nodes, tent);
                let num = midpoint(x - tr, x + tr, nodes, |y| eval(y) * tent(y));
                num / mass
            })
        }
        Domain::Cloud(space) => {
            let pos: Vec<f64> = (0..space.n())
                .map(|i| {
                    space
                        .position(i)
                        .expect("cloud domain requires line positions")
                })
                .collect();
            let w = space.weights().to_vec();
            Arc::new(move |x: f64| {
                let mut mass = 0.0;
                let mut num = Complex64::new(0.0, 0.0);
                for (i, &p) in pos.iter().enumerate() {
                    let l = (1.0 - (x - p).abs() / tr).max(0.0);
                    if l > 0.0 {
                        mass += w[i] * l;
                        num += eval(p) * (w[i] * l);
                    }
                }
                if mass > 0.0 {
                    num / mass
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
    };
    let lip = lip_norm_mesh(
        |x| tilde(x),
        phi.center - 2.0 * phi.radius,
        phi.center + 2.0 * phi.radius,
        DEFAULT_MESH,
    );
    Ok(LipschitzApprox {
        eval: tilde,
        lip_norm: lip,
        t,
    })
}

/// Hölder-amplitude cancellation: returns
/// (|∫ e^{i(n-m)x} φ dμ|, 2^{7a} μ(B) ‖φ‖_{C^τ} (1 + d_B(n,m))^{-1/(2a²+a³)})
/// with d_B(n, m) = 2R|n-m| and a = 1/τ.
pub fn holder_vdc_check(
    phi: &HolderFunction,
    n: i64,
    m: i64,
    domain: &Domain<'_>,
) -> Result<(f64, f64)> {
    let a = (1.0 / phi.tau).round();
    let (z, r) = (phi.center, phi.radius);
    let lhs = match domain {
        Domain::Line { quad_m } => midpoint(z - r, z + r, (*quad_m).max(64), |x| {
            phi.eval(x) * Complex64::from_polar(1.0, (n - m) as f64 * x)
        })
        .norm(),
        Domain::Cloud(space) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..space.n() {
                let p = space.position(i).expect("cloud domain requires positions");
                if (p - z).abs() < r {
                    acc += phi.eval(p)
                        * Complex64::from_polar(1.0, (n - m) as f64 * p)
                        * space.weight(i);
                }
            }
            acc.norm()
        }
    };
    let mu_b = match domain {
        Domain::Line { .. } => 2.0 * r,
        Domain::Cloud(space) => {
            let mut acc = 0.0;
            for i in 0..space.n() {
                let p = space.position(i).unwrap();
                if (p - z).abs() < r {
                    acc += space.weight(i);
                }
            }
            acc
        }
    };
    let d = 2.0 * r * (n - m).abs() as f64;
    let expo = -1.0 / (2.0 * a * a + a * a * a);
    let rhs = (7.0 * a).exp2() * mu_b * (MESH_SAFETY * phi.cnorm) * (1.0 + d).powf(expo);
    Ok((lhs, rhs))
}

/// The concrete cancellative bound on the line: returns
/// (|∫_{B(x,R)} e^{i(n-m)y} φ(y) dy|, 2π μ(B) ‖φ‖_Lip (1 + 2R|n-m|)^{-1}).
pub fn real_cancellative_check<F: Fn(f64) -> Complex64 + Copy>(
    phi: F,
    x: f64,
    radius: f64,
    n: i64,
    m: i64,
    quad_m: usize,
) -> Result<(f64, f64)> {
    if !(radius > 0.0) {
        return Err(Error::Domain("ball radius must be positive".into()));
    }
    let lhs = midpoint(x - radius, x + radius, quad_m, |y| {
        phi(y) * Complex64::from_polar(1.0, (n - m) as f64 * y)
    })
    .norm();
    let norm = MESH_SAFETY * lip_norm_mesh(phi, x - radius, x + radius, DEFAULT_MESH);
    let d = 2.0 * radius * (n - m).abs() as f64;
    let rhs = 2.0 * PI * (2.0 * radius) * norm / (1.0 + d);
    Ok((lhs, rhs))
}
