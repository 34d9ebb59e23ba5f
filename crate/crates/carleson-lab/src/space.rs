//! Finite doubling metric measure spaces.
//!
//! A space is a weighted point cloud: indices 0..n-1, a metric (either a
//! full symmetric table or positions on the line), and a positive weight
//! per point playing the role of μ. "Almost everywhere" degenerates to
//! "at every point", integrals become weighted sums, and every covering
//! or maximal-function statement is exactly checkable.
//!
//! Construction validates the metric axioms on sampled triples and the
//! doubling condition μ(B(x,2R)) ≤ 2^a μ(B(x,R)) on a probe set of all
//! centers times dyadic radii; violations refuse the space.

use crate::rng::CounterRng;
use crate::util::IndexSet;
use crate::{Error, Result};
use serde::Deserialize;
use std::sync::OnceLock;

/// Open ball reference: membership is strict, ρ(center, y) < radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallRef {
    pub center: usize,
    pub radius: f64,
}

impl BallRef {
    pub fn new(center: usize, radius: f64) -> Self {
        BallRef { center, radius }
    }

    /// Same center, radius scaled by `k` (the B_{k,j} of covering lemmas).
    pub fn dilate(&self, k: f64) -> Self {
        BallRef {
            center: self.center,
            radius: self.radius * k,
        }
    }
}

/// Ball family plus exponent for the maximal function M_{B,p}.
#[derive(Debug, Clone)]
pub struct MaximalConfig {
    pub balls: Vec<BallRef>,
    pub p: f64,
}

#[derive(Debug, Clone)]
enum Metric {
    /// Points on the real line; distance |x - y|. Kept sorted for O(log n)
    /// ball queries.
    Euclidean1d {
        pos: Vec<f64>,
        /// indices sorted by position
        order: Vec<usize>,
        /// prefix weights in sorted order, len n+1
        wprefix: Vec<f64>,
    },
    /// Full distance table, row-major.
    Table { n: usize, d: Vec<f64> },
}

/// Finite metric measure space with doubling exponent `a` and reference
/// point `o`.
#[derive(Debug, Clone)]
pub struct PointCloudSpace {
    metric: Metric,
    weights: Vec<f64>,
    o: usize,
    a: u32,
    total: f64,
    diameter: f64,
    min_gap: f64,
    family: OnceLock<Vec<BallRef>>,
}

#[derive(Deserialize)]
struct SpaceDoc {
    #[serde(default)]
    points: Vec<f64>,
    metric: String,
    #[serde(default)]
    dist: Vec<Vec<f64>>,
    weights: Vec<f64>,
    o: usize,
    a: u32,
}

impl PointCloudSpace {
    /// Points on the line with the standard metric.
    pub fn new_euclidean1d(pos: Vec<f64>, weights: Vec<f64>, o: usize, a: u32) -> Result<Self> {
        if pos.len() != weights.len() || pos.is_empty() {
            return Err(Error::Domain(
                "positions and weights must be nonempty and equal-length".into(),
            ));
        }
        if pos.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("positions must be finite".into()));
        }
        let n = pos.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| pos[i].total_cmp(&pos[j]));
        let mut wprefix = Vec::with_capacity(n + 1);
        wprefix.push(0.0);
        for &i in &order {
            wprefix.push(wprefix.last().unwrap() + weights[i]);
        }
        let metric = Metric::Euclidean1d { pos, order, wprefix };
        Self::finish(metric, weights, o, a)
    }

    /// Arbitrary metric from a symmetric table.
    pub fn new_table(dist: Vec<Vec<f64>>, weights: Vec<f64>, o: usize, a: u32) -> Result<Self> {
        let n = weights.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) || n == 0 {
            return Err(Error::Domain("distance table must be square n x n".into()));
        }
        let mut d = Vec::with_capacity(n * n);
        for row in &dist {
            d.extend_from_slice(row);
        }
        Self::finish(Metric::Table { n, d }, weights, o, a)
    }

    /// Load from the JSON document
    /// `{"points": [...], "metric": "euclidean1d"|"table", "dist": [[...]],
    ///   "weights": [...], "o": 0, "a": 4}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpaceDoc = serde_json::from_str(text)?;
        match doc.metric.as_str() {
            "euclidean1d" => Self::new_euclidean1d(doc.points, doc.weights, doc.o, doc.a),
            "table" => Self::new_table(doc.dist, doc.weights, doc.o, doc.a),
            other => Err(Error::Parse(format!("unknown metric kind {other:?}"))),
        }
    }

    /// Uniform line cloud on [a, b] with n points, weight = spacing.
    pub fn uniform_line(a: f64, b: f64, n: usize, doubling_a: u32) -> Result<Self> {
        let h = (b - a) / n as f64;
        let pos: Vec<f64> = (0..n).map(|i| a + (i as f64 + 0.5) * h).collect();
        let weights = vec![h; n];
        Self::new_euclidean1d(pos, weights, n / 2, doubling_a)
    }

    fn finish(metric: Metric, weights: Vec<f64>, o: usize, a: u32) -> Result<Self> {
        let n = weights.len();
        if o >= n {
            return Err(Error::Domain(format!("reference point {o} out of range")));
        }
        if a < 4 {
            return Err(Error::Domain("doubling exponent must be at least 4".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain("weights must be positive and finite".into()));
        }
        let total = weights.iter().sum();
        let mut space = PointCloudSpace {
            metric,
            weights,
            o,
            a,
            total,
            diameter: 0.0,
            min_gap: f64::INFINITY,
            family: OnceLock::new(),
        };
        space.validate_metric()?;
        let (diameter, min_gap) = space.extremal_distances()?;
        space.diameter = diameter;
        space.min_gap = min_gap;
        if let Some(w) = space.doubling_violation() {
            return Err(Error::Domain(format!(
                "doubling violated: mu(B({c},{r2})) = {m2} > 2^{a} * mu(B({c},{r1})) = {bound} \
                 (ratio {ratio:.3})",
                c = w.center,
                r2 = 2.0 * w.radius,
                r1 = w.radius,
                a = space.a,
                m2 = w.big,
                bound = w.bound,
                ratio = w.big / w.small.max(f64::MIN_POSITIVE),
            )));
        }
        Ok(space)
    }

    fn validate_metric(&self) -> Result<()> {
        let n = self.n();
        match &self.metric {
            Metric::Euclidean1d { .. } => {}
            Metric::Table { d, .. } => {
                for i in 0..n {
                    if d[i * n + i] != 0.0 {
                        return Err(Error::Domain(format!("dist({i},{i}) must be 0")));
                    }
                    for j in (i + 1)..n {
                        let dij = d[i * n + j];
                        if dij != d[j * n + i] {
                            return Err(Error::Domain(format!("dist({i},{j}) asymmetric")));
                        }
                        if !(dij > 0.0) || !dij.is_finite() {
                            return Err(Error::Domain(format!(
                                "dist({i},{j}) must be positive and finite"
                            )));
                        }
                    }
                }
                // triangle inequality on all triples for small n, sampled otherwise
                let check = |i: usize, j: usize, k: usize| -> Result<()> {
                    if d[i * n + k] > d[i * n + j] + d[j * n + k] + 1e-12 {
                        return Err(Error::Domain(format!(
                            "triangle inequality fails on ({i},{j},{k})"
                        )));
                    }
                    Ok(())
                };
                if n <= 48 {
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                check(i, j, k)?;
                            }
                        }
                    }
                } else {
                    let mut rng = CounterRng::new(0x5EED_7B1E);
                    for _ in 0..200_000 {
                        check(rng.index(n), rng.index(n), rng.index(n))?;
                    }
                }
            }
        }
        Ok(())
    }

    fn extremal_distances(&self) -> Result<(f64, f64)> {
        match &self.metric {
            Metric::Euclidean1d { pos, order, .. } => {
                let lo = pos[order[0]];
                let hi = pos[*order.last().unwrap()];
                let mut gap = f64::INFINITY;
                for w in order.windows(2) {
                    let g = pos[w[1]] - pos[w[0]];
                    if g <= 0.0 {
                        return Err(Error::Domain(
                            "distinct points must have positive distance".into(),
                        ));
                    }
                    gap = gap.min(g);
                }
                Ok((hi - lo, gap))
            }
            Metric::Table { n, d } => {
                let mut diam = 0.0f64;
                let mut gap = f64::INFINITY;
                for i in 0..*n {
                    for j in (i + 1)..*n {
                        diam = diam.max(d[i * n + j]);
                        gap = gap.min(d[i * n + j]);
                    }
                }
                Ok((diam, gap))
            }
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn o(&self) -> usize {
        self.o
    }

    pub fn doubling_exponent(&self) -> u32 {
        self.a
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_measure(&self) -> f64 {
        self.total
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Smallest positive pairwise distance (infinite for a single point).
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Position of a point for line clouds.
    pub fn position(&self, i: usize) -> Option<f64> {
        match &self.metric {
            Metric::Euclidean1d { pos, .. } => Some(pos[i]),
            Metric::Table { .. } => None,
        }
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Euclidean1d { pos, .. } => (pos[i] - pos[j]).abs(),
            Metric::Table { n, d } => d[i * n + j],
        }
    }

    /// Members of the open ball, ρ(center, y) < radius.
    pub fn ball_members(&self, b: BallRef) -> Result<Vec<usize>> {
        self.check_center(b.center)?;
        Ok(match &self.metric {
            Metric::Euclidean1d { pos, order, .. } => {
                let (lo, hi) = self.line_range(pos[b.center], b.radius);
                order[lo..hi].to_vec()
            }
            Metric::Table { .. } => (0..self.n())
                .filter(|&j| self.dist(b.center, j) < b.radius)
                .collect(),
        })
    }

    pub fn ball_set(&self, b: BallRef) -> Result<IndexSet> {
        Ok(IndexSet::from_members(self.n(), self.ball_members(b)?))
    }

    /// μ of the open ball.
    pub fn ball_measure(&self, b: BallRef) -> Result<f64> {
        self.check_center(b.center)?;
        Ok(match &self.metric {
            Metric::Euclidean1d { pos, wprefix, .. } => {
                let (lo, hi) = self.line_range(pos[b.center], b.radius);
                wprefix[hi] - wprefix[lo]
            }
            Metric::Table { .. } => (0..self.n())
                .filter(|&j| self.dist(b.center, j) < b.radius)
                .map(|j| self.weights[j])
                .sum(),
        })
    }

    fn check_center(&self, c: usize) -> Result<()> {
        if c >= self.n() {
            Err(Error::Domain(format!(
                "ball center {c} out of range 0..{}",
                self.n()
            )))
        } else {
            Ok(())
        }
    }

    /// Sorted-order index range covering the open interval (x-r, x+r).
    fn line_range(&self, x: f64, r: f64) -> (usize, usize) {
        match &self.metric {
            Metric::Euclidean1d { pos, order, .. } => {
                if !(r > 0.0) {
                    return (0, 0);
                }
                let lo = order.partition_point(|&i| pos[i] <= x - r);
                let hi = order.partition_point(|&i| pos[i] < x + r);
                (lo, hi)
            }
            Metric::Table { .. } => unreachable!(),
        }
    }

    // ------------------------------------------------------------------
    // doubling probe

    fn probe_radii(&self) -> Vec<f64> {
        if !self.min_gap.is_finite() || self.diameter <= 0.0 {
            return vec![1.0];
        }
        let k_lo = self.min_gap.log2().floor() as i32;
        let k_hi = (4.0 * self.diameter).log2().ceil() as i32;
        (k_lo..=k_hi).map(|k| (k as f64).exp2()).collect()
    }

    fn doubling_violation(&self) -> Option<DoublingProbe> {
        let factor = (self.a as f64).exp2();
        for r in self.probe_radii() {
            if 2.0 * r > 4.0 * self.diameter.max(r) {
                continue;
            }
            for c in 0..self.n() {
                let small = self.ball_measure(BallRef::new(c, r)).unwrap();
                let big = self.ball_measure(BallRef::new(c, 2.0 * r)).unwrap();
                if big > factor * small {
                    return Some(DoublingProbe {
                        center: c,
                        radius: r,
                        small,
                        big,
                        bound: factor * small,
                    });
                }
            }
        }
        None
    }

    /// Worst doubling ratio μ(B(x,2R))/μ(B(x,R)) observed over the probe
    /// set, with its witness. For a valid space the ratio is ≤ 2^a.
    pub fn doubling_report(&self) -> DoublingProbe {
        let mut worst = DoublingProbe {
            center: 0,
            radius: self.probe_radii()[0],
            small: self.total,
            big: self.total,
            bound: (self.a as f64).exp2() * self.total,
        };
        let mut worst_ratio = 0.0f64;
        for r in self.probe_radii() {
            for c in 0..self.n() {
                let small = self.ball_measure(BallRef::new(c, r)).unwrap();
                let big = self.ball_measure(BallRef::new(c, 2.0 * r)).unwrap();
                let ratio = big / small.max(f64::MIN_POSITIVE);
                if ratio > worst_ratio {
                    worst_ratio = ratio;
                    worst = DoublingProbe {
                        center: c,
                        radius: r,
                        small,
                        big,
                        bound: (self.a as f64).exp2() * small,
                    };
                }
            }
        }
        worst
    }

    // ------------------------------------------------------------------
    // Vitali selection

    /// Greedy selection of pairwise-disjoint balls by decreasing radius
    /// (ties by input order). Every input ball meets a selected ball of
    /// radius at least its own, so the 3-dilates of the selection cover
    /// the union of the family.
    pub fn vitali_select(&self, balls: &[BallRef]) -> Result<Vec<BallRef>> {
        let mut idx: Vec<usize> = (0..balls.len()).collect();
        idx.sort_by(|&i, &j| balls[j].radius.total_cmp(&balls[i].radius).then(i.cmp(&j)));
        let mut selected: Vec<BallRef> = Vec::new();
        let mut covered = IndexSet::new(self.n());
        let mut sets: Vec<IndexSet> = Vec::new();
        for &i in &idx {
            let set = self.ball_set(balls[i])?;
            // pairwise member-set disjointness against all accepted balls
            if !set.intersects(&covered) {
                covered.union_with(&set);
                sets.push(set);
                selected.push(balls[i]);
            }
        }
        Ok(selected)
    }

    // ------------------------------------------------------------------
    // maximal functions

    /// M_{B,p} u: per point, sup over family balls containing it of the
    /// p-th power ball average of |u|, to the 1/p. Zero off the family.
    pub fn maximal_function(&self, cfg: &MaximalConfig, u: &[f64]) -> Result<Vec<f64>> {
        if cfg.p < 1.0 {
            return Err(Error::Domain(format!("exponent p = {} below 1", cfg.p)));
        }
        if u.len() != self.n() {
            return Err(Error::Domain("value vector length mismatch".into()));
        }
        let v: Vec<f64> = u.iter().map(|x| x.abs().powf(cfg.p)).collect();
        let mut out = vec![0.0; self.n()];
        for &b in &cfg.balls {
            let members = self.ball_members(b)?;
            if members.is_empty() {
                continue;
            }
            let mass: f64 = members.iter().map(|&i| self.weights[i]).sum();
            let avg = members.iter().map(|&i| self.weights[i] * v[i]).sum::<f64>() / mass;
            for &i in &members {
                if avg > out[i] {
                    out[i] = avg;
                }
            }
        }
        for x in &mut out {
            *x = x.powf(1.0 / cfg.p);
        }
        Ok(out)
    }

    /// Covering centers C(r): greedy maximal r-separated sets per dyadic
    /// annulus B(o, r 2^k), in ascending point-index order. Every point of
    /// the space lies within distance r (strictly) of some center.
    pub fn covering_centers(&self, r: f64) -> Result<Vec<usize>> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("covering radius {r} must be positive")));
        }
        let n = self.n();
        let mut all = IndexSet::new(n);
        let mut k = 0u32;
        loop {
            let rad = r * f64::from(1u32 << k.min(60));
            let annulus = self.ball_members(BallRef::new(self.o, rad))?;
            // greedy maximal r-separated subset of the annulus
            let mut accepted: Vec<usize> = Vec::new();
            for &x in &annulus {
                if self.separated_from_all(x, &accepted, r) {
                    accepted.push(x);
                }
            }
            for &x in &accepted {
                all.insert(x);
            }
            if annulus.len() == n || rad > 4.0 * self.diameter.max(r) {
                break;
            }
            k += 1;
        }
        Ok(all.iter().collect())
    }

    fn separated_from_all(&self, x: usize, accepted: &[usize], r: f64) -> bool {
        match &self.metric {
            Metric::Euclidean1d { pos, .. } => {
                // accepted arrives in ascending index order, not position
                // order; scan is still cheap because conflicts are local.
                accepted.iter().all(|&y| (pos[x] - pos[y]).abs() >= r)
            }
            Metric::Table { .. } => accepted.iter().all(|&y| self.dist(x, y) >= r),
        }
    }

    /// The generated ball family B_inf behind the global maximal function:
    /// dyadic radii 2^k from the smallest pairwise distance up to four
    /// diameters, centers from `covering_centers(2^k)`, each center also
    /// carrying the doubled radius 2^{k+1} so that every metric ball is
    /// contained in a family ball of comparable measure.
    pub fn maximal_family(&self) -> &[BallRef] {
        self.family.get_or_init(|| {
            let mut fam = Vec::new();
            for r in self.probe_radii() {
                let centers = self.covering_centers(r).expect("positive radius");
                for c in centers {
                    fam.push(BallRef::new(c, r));
                    fam.push(BallRef::new(c, 2.0 * r));
                }
            }
            fam
        })
    }

    /// Global maximal function M(|w|^{p1})^{1/p1} with
    /// M v = 2^{2a} sup over the generated family of ball averages of v.
    pub fn global_maximal(&self, w: &[f64], p1: f64) -> Result<Vec<f64>> {
        if p1 < 1.0 {
            return Err(Error::Domain(format!("exponent p1 = {p1} below 1")));
        }
        let cfg = MaximalConfig {
            balls: self.maximal_family().to_vec(),
            p: p1,
        };
        let factor = (2.0 * self.a as f64).exp2().powf(1.0 / p1);
        let mut out = self.maximal_function(&cfg, w)?;
        for x in &mut out {
            *x *= factor;
        }
        Ok(out)
    }
}

/// One doubling probe: the measures of B(center, radius) and its double.
#[derive(Debug, Clone, Copy)]
pub struct DoublingProbe {
    pub center: usize,
    pub radius: f64,
    pub small: f64,
    pub big: f64,
    pub bound: f64,
}

/// Layer-cake evaluation of the weighted p-norm:
/// p ∫_0^∞ λ^{p-1} μ({u ≥ λ}) dλ, integrated exactly over the sorted
/// distinct values of u. Agrees with Σ w_i u_i^p identically.
pub fn layer_cake_norm(u: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::Domain(format!("exponent p = {p} below 1")));
    }
    if u.len() != weights.len() {
        return Err(Error::Domain("value/weight length mismatch".into()));
    }
    if u.iter().any(|&x| x < 0.0) {
        return Err(Error::Domain("layer cake needs nonnegative values".into()));
    }
    let mut idx: Vec<usize> = (0..u.len()).collect();
    idx.sort_by(|&i, &j| u[i].total_cmp(&u[j]));
    // suffix measures over the sorted order; the distribution function is
    // constant between consecutive distinct values
    let mut acc = 0.0;
    let mut suffix = weights.iter().sum::<f64>();
    let mut prev = 0.0f64;
    let mut i = 0;
    while i < idx.len() {
        let v = u[idx[i]];
        let mut drop = 0.0;
        let mut j = i;
        while j < idx.len() && u[idx[j]] == v {
            drop += weights[idx[j]];
            j += 1;
        }
        if v > prev {
            // μ({u ≥ λ}) = suffix for λ in (prev, v]
            acc += suffix * (v.powf(p) - prev.powf(p));
            prev = v;
        }
        suffix -= drop;
        i = j;
    }
    Ok(acc)
}
