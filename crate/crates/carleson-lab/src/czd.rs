//! Ball covering of open sets and the Calderón–Zygmund decomposition.
//!
//! In the finite model a subset O of the cloud is "open" exactly when
//! every x ∈ O has positive distance δ(x) to the complement; the covering
//! balls are B(x, δ(x)/6) selected greedily in ascending index order, and
//! the decomposition splits f at a level α into a bounded good part and
//! mean-zero bad parts supported on the disjointified 3-dilates.

use crate::kernels::kappa;
use crate::space::{BallRef, PointCloudSpace};
use crate::util::IndexSet;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// One covering ball: center, small radius δ/6, and the distance δ to
/// the complement it was derived from.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoveringBall {
    pub center: usize,
    pub radius: f64,
    pub delta: f64,
}

impl CoveringBall {
    pub fn ball(&self, k: f64) -> BallRef {
        BallRef::new(self.center, k * self.radius)
    }
}

/// Greedy ball covering of a proper "open" subset: pairwise-disjoint
/// B(x_j, δ(x_j)/6) whose 3-dilates cover O, whose 7-dilates meet the
/// complement, and whose 3-dilates overlap at most 2^{6a} deep.
pub fn ball_covering(space: &PointCloudSpace, o_set: &IndexSet) -> Result<Vec<CoveringBall>> {
    let n = space.n();
    if o_set.universe() != n {
        return Err(Error::Domain("subset universe mismatch".into()));
    }
    if o_set.len() == n {
        return Err(Error::Domain(
            "ball covering needs a proper subset (O ≠ X)".into(),
        ));
    }
    let complement: Vec<usize> = o_set.complement().iter().collect();
    let mut covered = IndexSet::new(n);
    let mut out = Vec::new();
    for x in o_set.iter() {
        let delta = complement
            .iter()
            .map(|&y| space.dist(x, y))
            .fold(f64::INFINITY, f64::min);
        let ball = BallRef::new(x, delta / 6.0);
        let members = space.ball_set(ball)?;
        if !members.intersects(&covered) {
            covered.union_with(&members);
            out.push(CoveringBall {
                center: x,
                radius: delta / 6.0,
                delta,
            });
        }
    }
    Ok(out)
}

/// One bad part: its containing 3-dilate and the sparse values.
#[derive(Debug, Clone)]
pub struct BadPart {
    pub ball3: BallRef,
    /// (point index, value) pairs; the support Q_j
    pub values: Vec<(usize, Complex64)>,
}

/// Calderón–Zygmund decomposition f = g + Σ_j b_j at level alpha.
#[derive(Debug, Clone)]
pub struct CzDecomposition {
    pub alpha: f64,
    pub g: Vec<Complex64>,
    pub bad: Vec<BadPart>,
    /// E_α = X: the whole-space special case was taken
    pub special_case: bool,
}

impl CzDecomposition {
    /// Reconstruct g + Σ b_j pointwise.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let mut out = self.g.clone();
        for part in &self.bad {
            for &(i, v) in &part.values {
                out[i] += v;
            }
        }
        out
    }

    /// JSON dump for inspection.
    pub fn dump_json(&self, space: &PointCloudSpace) -> String {
        #[derive(Serialize)]
        struct BallDoc {
            c: usize,
            r: f64,
        }
        #[derive(Serialize)]
        struct Doc {
            alpha: f64,
            balls: Vec<BallDoc>,
            #[serde(rename = "gNorm1")]
            g_norm1: f64,
            #[serde(rename = "badNorms")]
            bad_norms: Vec<f64>,
            special_case: bool,
        }
        let g_norm1 = self
            .g
            .iter()
            .zip(space.weights())
            .map(|(v, w)| v.norm() * w)
            .sum();
        let doc = Doc {
            alpha: self.alpha,
            balls: self
                .bad
                .iter()
                .map(|p| BallDoc {
                    c: p.ball3.center,
                    r: p.ball3.radius,
                })
                .collect(),
            g_norm1,
            bad_norms: self
                .bad
                .iter()
                .map(|p| p.values.iter().map(|(i, v)| v.norm() * space.weight(*i)).sum())
                .collect(),
            special_case: self.special_case,
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

/// Split f at level alpha: outside E_α = {M|f| > α} the good part is f
/// itself; on E_α it is the Q_j-average of f over the greedy
/// disjointification Q_j of the covering 3-dilates, and b_j collects the
/// centered remainder on Q_j. When E_α is the whole cloud the split is
/// the mean plus a single global bad part.
pub fn cz_decompose(
    space: &PointCloudSpace,
    f: &[Complex64],
    alpha: f64,
) -> Result<CzDecomposition> {
    let n = space.n();
    if f.len() != n {
        return Err(Error::Domain("value vector length mismatch".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("level alpha = {alpha} must be positive")));
    }
    let absf: Vec<f64> = f.iter().map(|v| v.norm()).collect();
    let mf = space.global_maximal(&absf, 1.0)?;
    let e_alpha = IndexSet::from_members(n, (0..n).filter(|&i| mf[i] > alpha));

    if e_alpha.len() == n {
        // whole-space case: g is the μ-average of f, one global bad part
        let mean: Complex64 = f
            .iter()
            .zip(space.weights())
            .map(|(v, w)| v * *w)
            .sum::<Complex64>()
            / space.total_measure();
        let g = vec![mean; n];
        let values: Vec<(usize, Complex64)> = (0..n).map(|i| (i, f[i] - mean)).collect();
        return Ok(CzDecomposition {
            alpha,
            g,
            bad: vec![BadPart {
                ball3: BallRef::new(space.o(), 2.0 * space.diameter() + 1.0),
                values,
            }],
            special_case: true,
        });
    }

    let balls = ball_covering(space, &e_alpha)?;
    let j_count = balls.len();
    let small: Vec<IndexSet> = balls
        .iter()
        .map(|b| space.ball_set(b.ball(1.0)))
        .collect::<Result<_>>()?;
    let three: Vec<IndexSet> = balls
        .iter()
        .map(|b| space.ball_set(b.ball(3.0)))
        .collect::<Result<_>>()?;

    // Q_j = B_{3,j} \ (∪_{i<j} Q_i ∪ ∪_{i>j} B_i), via suffix unions of
    // the small balls
    let mut suffix = vec![IndexSet::new(n); j_count + 1];
    for j in (0..j_count).rev() {
        let mut s = suffix[j + 1].clone();
        s.union_with(&small[j]);
        suffix[j] = s;
    }
    let mut claimed = IndexSet::new(n);
    let mut g: Vec<Complex64> = f.to_vec();
    let mut bad = Vec::with_capacity(j_count);
    for j in 0..j_count {
        let mut q = three[j].clone();
        q.subtract(&claimed);
        q.subtract(&suffix[j + 1]);
        claimed.union_with(&q);
        let mass = q.measure(space.weights());
        if mass <= 0.0 {
            return Err(Error::Contract(format!(
                "disjointified piece {j} lost its core"
            )));
        }
        let avg = q
            .iter()
            .map(|i| f[i] * space.weight(i))
            .sum::<Complex64>()
            / mass;
        let mut values = Vec::new();
        for i in q.iter() {
            g[i] = avg;
            values.push((i, f[i] - avg));
        }
        bad.push(BadPart {
            ball3: balls[j].ball(3.0),
            values,
        });
    }
    // every point of E_α must be claimed by exactly one Q_j
    if claimed != e_alpha {
        return Err(Error::Contract(
            "disjointified pieces do not exhaust the level set".into(),
        ));
    }
    Ok(CzDecomposition {
        alpha,
        g,
        bad,
        special_case: false,
    })
}


/// Check every decomposition invariant and return human-readable
/// descriptions of any violations: pointwise reconstruction, the good
/// part's sup and L1 bounds, support/mean-zero/L1 control of each bad
/// part, the summed ball-measure and bad-L1 bounds, and the bounded
/// overlap of the carrying balls.
pub fn verify_decomposition(
    space: &PointCloudSpace,
    f: &[Complex64],
    dec: &CzDecomposition,
) -> Vec<String> {
    let mut failures = Vec::new();
    let a = f64::from(space.doubling_exponent());
    let alpha = dec.alpha;
    let maxf = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = maxf.max(1.0);
    let rec = dec.reconstruct();
    for i in 0..f.len() {
        if (rec[i] - f[i]).norm() > 1e-12 * scale {
            failures.push(format!("reconstruction: g + sum of bad parts differs from f at point {i}"));
            break;
        }
    }
    let l1f: f64 = f.iter().zip(space.weights()).map(|(v, w)| v.norm() * w).sum();
    let l1g: f64 = dec
        .g
        .iter()
        .zip(space.weights())
        .map(|(v, w)| v.norm() * w)
        .sum();
    if l1g > l1f + 1e-9 * l1f.max(1.0) {
        failures.push(format!("good-l1: {l1g} > {l1f}"));
    }
    let gcap = (3.0 * a).exp2() * alpha;
    for (i, v) in dec.g.iter().enumerate() {
        if v.norm() > gcap + 1e-12 * scale {
            failures.push(format!("good-sup: |g({i})| = {} > {gcap}", v.norm()));
            break;
        }
    }
    let mut sum_b_l1 = 0.0;
    let mut sum_mu3 = 0.0;
    for (j, part) in dec.bad.iter().enumerate() {
        let ball_set = match space.ball_set(part.ball3) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("bad ball {j}: {e}"));
                continue;
            }
        };
        let mut mean = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for &(i, v) in &part.values {
            if !ball_set.contains(i) {
                failures.push(format!("bad-support: part {j} leaks outside its ball"));
            }
            mean += v * space.weight(i);
            l1 += v.norm() * space.weight(i);
        }
        if mean.norm() > 1e-10 * scale {
            failures.push(format!("bad-mean-zero: part {j} mean {}", mean.norm()));
        }
        let mu3 = space.ball_measure(part.ball3).expect("valid ball");
        if l1 > (2.0 * a + 1.0).exp2() * alpha * mu3 + 1e-9 * scale {
            failures.push(format!("bad-l1-local: part {j}: {l1}"));
        }
        sum_b_l1 += l1;
        sum_mu3 += mu3;
    }
    if sum_mu3 > (6.0 * a).exp2() / alpha * l1f + 1e-9 {
        failures.push(format!("ball-mass-sum: {sum_mu3}"));
    }
    if sum_b_l1 > 2.0 * l1f + 1e-9 {
        failures.push(format!("bad-l1-total: {sum_b_l1} > 2 x {l1f}"));
    }
    let cap = 1usize << (6 * space.doubling_exponent());
    for x in 0..space.n() {
        let overlap = dec
            .bad
            .iter()
            .filter(|p| space.dist(x, p.ball3.center) < p.ball3.radius)
            .count();
        if overlap > cap {
            failures.push(format!("overlap: point {x} in {overlap} balls"));
            break;
        }
    }
    failures
}

/// log2 of the weak (1,1) constant 2^{a³+21a}.
pub fn weak11_log2_constant(a: u32) -> f64 {
    let a = f64::from(a);
    a * a * a + 21.0 * a
}

/// One level of the weak (1,1) experiment.
#[derive(Debug, Clone, Serialize)]
pub struct Weak11Row {
    pub alpha: f64,
    /// μ{ |T_r f| > α }
    pub level_measure: f64,
    pub lhs_log2: f64,
    pub rhs_log2: f64,
    pub pass: bool,
    /// decomposition route: μ{ |T_r g| > α/2 } and its bound, in log2
    pub good_measure: f64,
    pub good_rhs_log2: f64,
    pub bad_measure: f64,
    pub bad_rhs_log2: f64,
}

/// Discrete truncated singular operator on the cloud:
/// T_r f(x_i) = Σ_{j : r ≤ ρ(x_i,x_j)} w_j κ(x_i - x_j) f(x_j).
pub fn cloud_truncated_hilbert(
    space: &PointCloudSpace,
    f: &[Complex64],
    r: f64,
) -> Result<Vec<Complex64>> {
    if !(r > 0.0) {
        return Err(Error::Domain("truncation radius must be positive".into()));
    }
    let n = space.n();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    // κ vanishes past distance 1, so only the window r ≤ ρ < 1 matters
    for (i, slot) in out.iter_mut().enumerate() {
        let xi = space
            .position(i)
            .ok_or_else(|| Error::Domain("cloud operator needs a line cloud".into()))?;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in space.ball_members(BallRef::new(i, 1.0))? {
            let d = space.dist(i, j);
            if d >= r {
                acc += f[j] * kappa(xi - space.position(j).unwrap()) * space.weight(j);
            }
        }
        *slot = acc;
    }
    Ok(out)
}

/// Weak (1,1) sweep: for each α check
/// μ({|T_r f| > α}) ≤ (2^{a³+21a}/α) Σ w |f| in the log2 domain, and
/// report the decomposition-route pieces (good part vs 2^{2a³+3a+2} c,
/// bad part vs 2^{7a}/c + 2^{a³+11a+4}, with c = 2^{-a³-12a-4}).
pub fn weak11_experiment(
    space: &PointCloudSpace,
    f: &[Complex64],
    r: f64,
    alphas: &[f64],
) -> Result<Vec<Weak11Row>> {
    let a = f64::from(space.doubling_exponent());
    let l1: f64 = f
        .iter()
        .zip(space.weights())
        .map(|(v, w)| v.norm() * w)
        .sum();
    let trf = cloud_truncated_hilbert(space, f, r)?;
    let level = |vals: &[Complex64], cut: f64| -> f64 {
        vals.iter()
            .zip(space.weights())
            .filter(|(v, _)| v.norm() > cut)
            .map(|(_, w)| w)
            .sum()
    };
    let log2c = weak11_log2_constant(space.doubling_exponent());
    // constants of the decomposition route
    let c_log2 = -(a * a * a + 12.0 * a + 4.0);
    let good_const_log2 = 2.0 * a * a * a + 3.0 * a + 2.0 + c_log2;
    let bad_const_log2 = ((7.0 * a - c_log2).exp2() + (a * a * a + 11.0 * a + 4.0).exp2()).log2();
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        if !(alpha > 0.0) {
            return Err(Error::Domain("levels must be positive".into()));
        }
        let lm = level(&trf, alpha);
        let rhs_log2 = log2c - alpha.log2() + l1.log2();
        let lhs_log2 = if lm > 0.0 { lm.log2() } else { f64::NEG_INFINITY };
        // decomposition at level α' = c α; when α' is at or below the
        // average the decomposition degenerates to the whole-space case,
        // which still satisfies both route bounds
        let alpha_prime = c_log2.exp2() * alpha;
        let dec = cz_decompose(space, f, alpha_prime)?;
        let trg = cloud_truncated_hilbert(space, &dec.g, r)?;
        // T_r b = T_r f - T_r g by linearity
        let trb: Vec<Complex64> = trf.iter().zip(&trg).map(|(a, b)| a - b).collect();
        let good_measure = level(&trg, alpha / 2.0);
        let bad_measure = level(&trb, alpha / 2.0);
        rows.push(Weak11Row {
            alpha,
            level_measure: lm,
            lhs_log2,
            rhs_log2,
            pass: lhs_log2 <= rhs_log2,
            good_measure,
            good_rhs_log2: good_const_log2 - alpha.log2() + l1.log2(),
            bad_measure,
            bad_rhs_log2: bad_const_log2 - alpha.log2() + l1.log2(),
        });
    }
    Ok(rows)
}
