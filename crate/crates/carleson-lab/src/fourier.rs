//! 2π-periodic signals: Fourier coefficients, partial sums, mollification,
//! and the averaged modulated projection L_N.
//!
//! A signal is a callable plus its samples on the uniform grid 2πj/M with
//! M a power of two. All integrals use the uniform periodic rule, which is
//! exact for trigonometric polynomials of degree below M/2; coefficient
//! indices are guarded at M/4 against aliasing. Coefficients are cached
//! per signal after first computation.

use crate::kernels::{dirichlet_kernel_auto, lprime_n};
use crate::quad::{midpoint, PeriodicGrid};
use crate::rng::CounterRng;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Deserialize;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex};

type EvalFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A 2π-periodic complex signal with uniform samples.
pub struct PeriodicSignal {
    eval: EvalFn,
    samples: Vec<Complex64>,
    m: usize,
    coeffs: Mutex<HashMap<i64, Complex64>>,
}

impl Clone for PeriodicSignal {
    fn clone(&self) -> Self {
        PeriodicSignal {
            eval: self.eval.clone(),
            samples: self.samples.clone(),
            m: self.m,
            coeffs: Mutex::new(self.coeffs.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for PeriodicSignal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodicSignal").field("m", &self.m).finish()
    }
}

#[derive(Deserialize)]
struct SignalDoc {
    kind: String,
    #[serde(rename = "M")]
    m: usize,
    #[serde(default)]
    values: Vec<serde_json::Value>,
}

fn check_m(m: usize) -> Result<()> {
    if m < 8 || !m.is_power_of_two() {
        return Err(Error::Domain(format!(
            "sample count M = {m} must be a power of two, at least 8"
        )));
    }
    Ok(())
}

impl PeriodicSignal {
    pub fn from_fn<F: Fn(f64) -> Complex64 + Send + Sync + 'static>(m: usize, f: F) -> Result<Self> {
        check_m(m)?;
        // probe the 2π-periodicity the type promises
        for probe in [0.11, 1.7, 3.9, 5.3] {
            let (a, b) = (f(probe), f(probe + TAU));
            if (a - b).norm() > 1e-12 * (1.0 + a.norm()) {
                return Err(Error::Domain(format!(
                    "callable is not 2π-periodic at x = {probe}: {a} vs {b}"
                )));
            }
        }
        let grid = PeriodicGrid::new(m);
        let samples: Vec<Complex64> = grid.nodes().map(&f).collect();
        Ok(PeriodicSignal {
            eval: Arc::new(f),
            samples,
            m,
            coeffs: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_real_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(m: usize, f: F) -> Result<Self> {
        Self::from_fn(m, move |x| Complex64::new(f(x), 0.0))
    }

    /// Signal from raw samples; evaluation between nodes is periodic
    /// linear interpolation.
    pub fn from_samples(values: Vec<Complex64>) -> Result<Self> {
        let m = values.len();
        check_m(m)?;
        let data = values.clone();
        let eval = move |x: f64| -> Complex64 {
            let t = (x / TAU).rem_euclid(1.0) * m as f64;
            let j = t.floor() as usize % m;
            let frac = t - t.floor();
            data[j] * (1.0 - frac) + data[(j + 1) % m] * frac
        };
        Ok(PeriodicSignal {
            eval: Arc::new(eval),
            samples: values,
            m,
            coeffs: Mutex::new(HashMap::new()),
        })
    }

    /// Named standard signals.
    pub fn builtin(name: &str, m: usize) -> Result<Self> {
        match name {
            "one" => Self::from_real_fn(m, |_| 1.0),
            "cos" => Self::from_real_fn(m, f64::cos),
            "exp_cos" => Self::from_real_fn(m, |x| x.cos().exp()),
            "square" => Self::from_real_fn(m, |x| if x.sin() >= 0.0 { 1.0 } else { -1.0 }),
            "tent" => Self::from_real_fn(m, |x| {
                let t = (x - PI).rem_euclid(TAU);
                let d = t.min(TAU - t);
                (1.0 - d).max(0.0)
            }),
            other => Err(Error::Parse(format!("unknown builtin signal {other:?}"))),
        }
    }

    /// Load from `{"kind": "builtin:<name>" | "samples", "M": .., "values": [..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SignalDoc = serde_json::from_str(text)?;
        if let Some(name) = doc.kind.strip_prefix("builtin:") {
            return Self::builtin(name, doc.m);
        }
        if doc.kind != "samples" {
            return Err(Error::Parse(format!("unknown signal kind {:?}", doc.kind)));
        }
        let mut values = Vec::with_capacity(doc.values.len());
        for v in &doc.values {
            let c = match v {
                serde_json::Value::Number(x) => {
                    Complex64::new(x.as_f64().ok_or_else(|| Error::Parse("bad number".into()))?, 0.0)
                }
                serde_json::Value::Array(pair) if pair.len() == 2 => Complex64::new(
                    pair[0].as_f64().ok_or_else(|| Error::Parse("bad re".into()))?,
                    pair[1].as_f64().ok_or_else(|| Error::Parse("bad im".into()))?,
                ),
                _ => return Err(Error::Parse("values must be numbers or [re, im]".into())),
            };
            values.push(c);
        }
        if values.len() != doc.m {
            return Err(Error::Parse("values length must equal M".into()));
        }
        Self::from_samples(values)
    }

    /// Random trigonometric polynomial of the given degree with
    /// coefficients uniform in the complex unit square.
    pub fn random_trig(m: usize, degree: u32, seed: u64) -> Result<Self> {
        let mut rng = CounterRng::new(seed);
        let d = degree as i64;
        let coeffs: Vec<(i64, Complex64)> = (-d..=d)
            .map(|n| (n, Complex64::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0))))
            .collect();
        Self::from_fn(m, move |x| {
            coeffs
                .iter()
                .map(|&(n, c)| c * Complex64::from_polar(1.0, n as f64 * x))
                .sum()
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid(&self) -> PeriodicGrid {
        PeriodicGrid::new(self.m)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    /// Anti-aliasing guard: public coefficients stop at M/4.
    pub fn coeff_guard(&self) -> i64 {
        (self.m / 4) as i64
    }

    /// Fourier coefficient (1/2π) ∫ f e^{-inx} dx over the sample grid.
    /// Exact for trigonometric polynomials of degree < M/2.
    pub fn fourier_coeff(&self, n: i64) -> Result<Complex64> {
        if n.abs() > self.coeff_guard() {
            return Err(Error::Aliasing {
                n,
                guard: self.coeff_guard(),
                m: self.m,
            });
        }
        Ok(self.coeff_any(n))
    }

    /// Unguarded coefficient for internal use (|n| < M/2 stays exact on
    /// band-limited data; the averaged projection needs indices up to
    /// 2(2N-1) under its own 2N ≤ M/4 precondition).
    fn coeff_any(&self, n: i64) -> Complex64 {
        if let Some(&c) = self.coeffs.lock().unwrap().get(&n) {
            return c;
        }
        let mf = self.m as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in self.samples.iter().enumerate() {
            acc += v * Complex64::from_polar(1.0, -(n as f64) * TAU * j as f64 / mf);
        }
        let c = acc / mf;
        self.coeffs.lock().unwrap().insert(n, c);
        c
    }

    /// Discrete L^2[0,2π] norm via the sample grid.
    pub fn l2_norm(&self) -> f64 {
        (self.grid().weight() * self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.grid().weight() * self.samples.iter().map(|v| v.norm()).sum::<f64>()
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Evaluation route for partial Fourier sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    /// Σ_{|n| ≤ N} f̂_n e^{inx}
    Direct,
    /// (1/2π) ∫ f(y) K_N(x-y) dy by quadrature
    Convolution,
}

/// N-th partial Fourier sum of the signal at x.
pub fn partial_sum(f: &PeriodicSignal, n: u32, x: f64, method: SumMethod) -> Result<Complex64> {
    if i64::from(n) > f.coeff_guard() {
        return Err(Error::Aliasing {
            n: i64::from(n),
            guard: f.coeff_guard(),
            m: f.m(),
        });
    }
    match method {
        SumMethod::Direct => {
            let mut acc = f.coeff_any(0);
            for k in 1..=i64::from(n) {
                acc += f.coeff_any(k) * Complex64::from_polar(1.0, k as f64 * x)
                    + f.coeff_any(-k) * Complex64::from_polar(1.0, -(k as f64) * x);
            }
            Ok(acc)
        }
        SumMethod::Convolution => {
            let grid = f.grid();
            let w = grid.weight() / TAU;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in f.samples().iter().enumerate() {
                acc += v * dirichlet_kernel_auto(n, x - grid.node(j)) * w;
            }
            Ok(acc)
        }
    }
}

/// Mollification f * φ_δ with the standard smooth bump
/// c exp(-1/(1-(t/δ)^2)) on (-δ, δ), normalized to unit mass under the
/// same quadrature rule so constants are reproduced exactly.
pub fn mollify(f: &PeriodicSignal, delta: f64) -> Result<PeriodicSignal> {
    if !(delta > 0.0 && delta < PI) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, π)")));
    }
    const NODES: usize = 512;
    let bump = move |t: f64| {
        let u = t / delta;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - u * u)).exp()
        }
    };
    let mass = crate::quad::midpoint_real(-delta, delta, NODES, bump);
    let eval = f.eval.clone();
    let m = f.m();
    PeriodicSignal::from_fn(m, move |x| {
        midpoint(-delta, delta, NODES, |t| eval(x - t) * bump(t)) / mass
    })
}

/// Approximate Hilbert transform L_N g(x) =
/// (1/N) Σ_{n=0}^{N-1} M_{N+n} S_{N+n} M_{-N-n} g(x), evaluated through
/// shifted Fourier coefficients. Requires 2N ≤ M/4.
pub fn approx_hilbert_ln(g: &PeriodicSignal, n: u32, x: f64) -> Result<Complex64> {
    if n == 0 || 2 * (n as usize) > g.m() / 4 {
        return Err(Error::Aliasing {
            n: 2 * i64::from(n),
            guard: (g.m() / 4) as i64,
            m: g.m(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in n..(2 * n) {
        // S_k(M_{-k} g)(x) = Σ_{|m| ≤ k} ĝ_{m+k} e^{imx}
        let mut proj = Complex64::new(0.0, 0.0);
        for mm in -i64::from(k)..=i64::from(k) {
            proj += g.coeff_any(mm + i64::from(k)) * Complex64::from_polar(1.0, mm as f64 * x);
        }
        acc += Complex64::from_polar(1.0, f64::from(k) * x) * proj;
    }
    Ok(acc / f64::from(n))
}

/// The same operator through its convolution representation
/// (1/2π) ∫ g(y) L'(x-y) dy.
pub fn approx_hilbert_ln_conv(g: &PeriodicSignal, n: u32, x: f64) -> Result<Complex64> {
    if n == 0 || 2 * (n as usize) > g.m() / 4 {
        return Err(Error::Aliasing {
            n: 2 * i64::from(n),
            guard: (g.m() / 4) as i64,
            m: g.m(),
        });
    }
    let grid = g.grid();
    let w = grid.weight() / TAU;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &v) in g.samples().iter().enumerate() {
        acc += v * lprime_n(n, x - grid.node(j)) * w;
    }
    Ok(acc)
}

/// Sup error of S_N f against f on the sample grid, for N = 0..=n_max.
pub fn convergence_scan(f: &PeriodicSignal, n_max: u32) -> Result<Vec<(u32, f64)>> {
    if i64::from(n_max) > f.coeff_guard() {
        return Err(Error::Aliasing {
            n: i64::from(n_max),
            guard: f.coeff_guard(),
            m: f.m(),
        });
    }
    let grid = f.grid();
    let mut running: Vec<Complex64> = vec![f.coeff_any(0); f.m()];
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let sup = |sums: &[Complex64]| {
        sums.iter()
            .zip(f.samples())
            .map(|(s, v)| (s - v).norm())
            .fold(0.0, f64::max)
    };
    out.push((0, sup(&running)));
    for k in 1..=n_max {
        let (cp, cm) = (f.coeff_any(i64::from(k)), f.coeff_any(-i64::from(k)));
        for (j, s) in running.iter_mut().enumerate() {
            let x = grid.node(j);
            *s += cp * Complex64::from_polar(1.0, f64::from(k) * x)
                + cm * Complex64::from_polar(1.0, -f64::from(k) * x);
        }
        out.push((k, sup(&running)));
    }
    Ok(out)
}

/// Σ_{N < |n| ≤ M/4} |f̂_n|: the computable tail that dominates the sup
/// error of S_N for functions with summable coefficients.
pub fn coeff_tail(f: &PeriodicSignal, n: u32) -> f64 {
    let guard = f.coeff_guard();
    let mut acc = 0.0;
    for k in (i64::from(n) + 1)..=guard {
        acc += f.coeff_any(k).norm() + f.coeff_any(-k).norm();
    }
    acc
}
