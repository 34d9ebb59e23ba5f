//! Tile structures over a dyadic grid.
//!
//! Frequencies are integers n acting by x ↦ nx; for a cube I the core
//! ball I° = B(c(I), D^{s(I)}/4) carries the metric
//! d_{I°}(n, m) = 2 R |n - m| with R = D^{s(I)}/4. Frequency balls are
//! finite subsets of the frequency set, so every inclusion in the tile
//! axioms is decided exactly.
//!
//! Construction: per cube a greedy maximal 0.3-separated center set
//! Z(I), the iteratively disjointified Ω₁ from the 0.7-balls, and the
//! top-down recursion assembling Ω from the minimal strict parent.

use crate::space::{BallRef, PointCloudSpace};
use crate::grid::GridStructure;
use crate::util::IndexSet;
use crate::{Error, Result};
use serde::Serialize;

/// One tile: a cube of the grid, a central frequency, and its frequency
/// set Ω (as indices into the structure's frequency list).
#[derive(Debug, Clone)]
pub struct Tile {
    pub cube: usize,
    pub freq: i64,
    pub omega: IndexSet,
    /// the auxiliary Ω₁ used by the recursion, kept for inspection
    pub omega1: IndexSet,
}

/// Tiles over a grid with the finite frequency set Q(X).
#[derive(Debug, Clone)]
pub struct TileStructure {
    pub tiles: Vec<Tile>,
    pub qx: Vec<i64>,
    /// tile indices per cube, in Z(I) enumeration order
    pub per_cube: Vec<Vec<usize>>,
    /// Z(I) per cube, in greedy acceptance order
    pub centers: Vec<Vec<i64>>,
}

impl TileStructure {
    /// Core-ball radius of a cube: R = D^{s}/4.
    pub fn core_radius(&self, grid: &GridStructure, cube: usize) -> f64 {
        0.25 * grid.scale_radius(grid.cubes[cube].scale)
    }

    /// Frequency ball {q ∈ Q(X) : 2R|q - z| < radius} as index set.
    pub fn freq_ball(&self, r_core: f64, z: i64, radius: f64) -> IndexSet {
        freq_ball_in(&self.qx, r_core, z, radius)
    }

    /// d_p distance between two frequencies at a tile's cube.
    pub fn d_p(&self, grid: &GridStructure, tile: usize, n: i64, m: i64) -> f64 {
        2.0 * self.core_radius(grid, self.tiles[tile].cube) * ((n - m).abs() as f64)
    }

    /// Tile order p ≤ q: cube inclusion with reversed frequency inclusion.
    pub fn tile_le(&self, grid: &GridStructure, p: usize, q: usize) -> bool {
        grid.cube_le(self.tiles[p].cube, self.tiles[q].cube)
            && self.tiles[q].omega.is_subset(&self.tiles[p].omega)
    }

    /// Wiggle order λ·p ≲ λ'·q: cube inclusion plus frequency-ball
    /// inclusion B_q(Q(q), λ') ⊆ B_p(Q(p), λ), decided exactly on Q(X).
    pub fn wiggle_le(&self, grid: &GridStructure, p: usize, lam: f64, q: usize, lam2: f64) -> bool {
        if !grid.cube_le(self.tiles[p].cube, self.tiles[q].cube) {
            return false;
        }
        let bq = self.freq_ball(
            self.core_radius(grid, self.tiles[q].cube),
            self.tiles[q].freq,
            lam2,
        );
        let bp = self.freq_ball(
            self.core_radius(grid, self.tiles[p].cube),
            self.tiles[p].freq,
            lam,
        );
        bq.is_subset(&bp)
    }
}

/// Frequency ball over an explicit frequency list.
fn freq_ball_in(qx: &[i64], r_core: f64, z: i64, radius: f64) -> IndexSet {
    IndexSet::from_members(
        qx.len(),
        qx.iter()
            .enumerate()
            .filter(|(_, &q)| 2.0 * r_core * ((q - z).abs() as f64) < radius)
            .map(|(i, _)| i),
    )
}

/// Build the tile structure for a grid over the frequency set `qx`.
pub fn build_tiles(grid: &GridStructure, qx: &[i64]) -> Result<TileStructure> {
    if qx.is_empty() {
        return Err(Error::Domain("frequency set must be nonempty".into()));
    }
    let mut qx = qx.to_vec();
    qx.sort_unstable();
    qx.dedup();
    let nf = qx.len();
    let mut ts = TileStructure {
        tiles: Vec::new(),
        qx: qx.clone(),
        per_cube: vec![Vec::new(); grid.cubes.len()],
        centers: vec![Vec::new(); grid.cubes.len()],
    };

    // per cube: greedy Z(I) and the Ω₁ partition pieces
    for ci in 0..grid.cubes.len() {
        let r = ts.core_radius(grid, ci);
        let ball = |z: i64, radius: f64| freq_ball_in(&qx, r, z, radius);
        let mut accepted: Vec<i64> = Vec::new();
        let mut blocked03 = IndexSet::new(nf);
        for &z in &qx {
            let b = ball(z, 0.3);
            if !b.intersects(&blocked03) {
                blocked03.union_with(&b);
                accepted.push(z);
            }
        }
        // Ω₁ in acceptance order
        let mut union03 = IndexSet::new(nf);
        let balls03: Vec<IndexSet> = accepted.iter().map(|&z| ball(z, 0.3)).collect();
        for b in &balls03 {
            union03.union_with(b);
        }
        let mut taken = IndexSet::new(nf);
        for (k, &z) in accepted.iter().enumerate() {
            let mut om1 = ball(z, 0.7);
            let mut strip = union03.clone();
            strip.subtract(&balls03[k]);
            om1.subtract(&strip);
            om1.subtract(&taken);
            taken.union_with(&om1);
            let ti = ts.tiles.len();
            ts.tiles.push(Tile {
                cube: ci,
                freq: z,
                omega: IndexSet::new(nf),
                omega1: om1,
            });
            ts.per_cube[ci].push(ti);
        }
        ts.centers[ci] = accepted;
    }

    // Ω by descending scale: the top carries Ω₁, every other cube pulls
    // from its minimal strict parent
    let mut order: Vec<usize> = (0..grid.cubes.len()).collect();
    order.sort_by_key(|&ci| std::cmp::Reverse(grid.cubes[ci].scale));
    for &ci in &order {
        if ci == grid.top {
            let ids = ts.per_cube[ci].clone();
            for ti in ids {
                ts.tiles[ti].omega = ts.tiles[ti].omega1.clone();
            }
            continue;
        }
        let parent = minimal_strict_parent(grid, ci).ok_or_else(|| {
            Error::Contract(format!("cube {ci} has no strict parent in the grid"))
        })?;
        let ids = ts.per_cube[ci].clone();
        let parent_ids = ts.per_cube[parent].clone();
        for ti in ids {
            let r = ts.core_radius(grid, ci);
            let mut omega = ts.freq_ball(r, ts.tiles[ti].freq, 0.2);
            for &pj in &parent_ids {
                // z' ∈ Z(J) ∩ Ω₁(p): the parent-center tiles feeding p
                let zp = ts.tiles[pj].freq;
                let zi = ts.qx.binary_search(&zp).expect("center in qx");
                if ts.tiles[ti].omega1.contains(zi) {
                    let parent_omega = ts.tiles[pj].omega.clone();
                    omega.union_with(&parent_omega);
                }
            }
            ts.tiles[ti].omega = omega;
        }
    }
    Ok(ts)
}

/// The inclusion-minimal cube strictly above `ci` (larger scale, superset
/// members). Unique by the dyadic property.
pub fn minimal_strict_parent(grid: &GridStructure, ci: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for cj in 0..grid.cubes.len() {
        if cj == ci || !grid.cube_le(ci, cj) {
            continue;
        }
        best = match best {
            None => Some(cj),
            Some(b) if grid.cubes[cj].scale < grid.cubes[b].scale => Some(cj),
            other => other,
        };
    }
    best
}

#[derive(Debug, Clone, Serialize)]
pub struct TileFailure {
    pub axiom: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TileReport {
    pub failures: Vec<TileFailure>,
}

impl TileReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive check of the tile axioms: per-cube disjoint covering of
/// Q(X), frequency nesting, the 0.2/1.0 ball squeeze, the frequency
/// cover by 0.7-balls around Z(I), and radius monotonicity of the core
/// metrics along cube inclusion.
pub fn verify_tiles(grid: &GridStructure, ts: &TileStructure) -> TileReport {
    let nf = ts.qx.len();
    let mut failures = Vec::new();

    for (ci, tile_ids) in ts.per_cube.iter().enumerate() {
        // disjoint covering of Q(X)
        let mut seen = IndexSet::new(nf);
        let mut double = false;
        for &ti in tile_ids {
            if ts.tiles[ti].omega.intersects(&seen) {
                double = true;
            }
            seen.union_with(&ts.tiles[ti].omega);
        }
        if double {
            failures.push(TileFailure {
                axiom: "frequency-partition",
                witness: format!("cube {ci}: overlapping Ω pieces"),
            });
        }
        if seen.len() != nf {
            failures.push(TileFailure {
                axiom: "frequency-partition",
                witness: format!("cube {ci}: Ω pieces miss part of Q(X)"),
            });
        }
        // frequency cover by 0.7-balls around Z(I)
        let r = ts.core_radius(grid, ci);
        let mut cover = IndexSet::new(nf);
        for &z in &ts.centers[ci] {
            cover.union_with(&ts.freq_ball(r, z, 0.7));
        }
        if cover.len() != nf {
            failures.push(TileFailure {
                axiom: "frequency-cover",
                witness: format!("cube {ci}: 0.7-balls around Z(I) miss Q(X)"),
            });
        }
    }

    // ball squeeze per tile
    for (ti, t) in ts.tiles.iter().enumerate() {
        let r = ts.core_radius(grid, t.cube);
        let inner = ts.freq_ball(r, t.freq, 0.2);
        let outer = ts.freq_ball(r, t.freq, 1.0);
        if !inner.is_subset(&t.omega) || !t.omega.is_subset(&outer) {
            failures.push(TileFailure {
                axiom: "frequency-squeeze",
                witness: format!("tile {ti} (cube {}, freq {})", t.cube, t.freq),
            });
        }
    }

    // frequency nesting: enumerate nested cube pairs once, then compare
    // the tiles that live on them
    for ci in 0..grid.cubes.len() {
        for cj in 0..grid.cubes.len() {
            if !grid.cube_le(ci, cj) {
                continue;
            }
            for &p in &ts.per_cube[ci] {
                for &q in &ts.per_cube[cj] {
                    if p == q {
                        continue;
                    }
                    let (tp, tq) = (&ts.tiles[p], &ts.tiles[q]);
                    if tp.omega.intersects(&tq.omega) && !tq.omega.is_subset(&tp.omega) {
                        failures.push(TileFailure {
                            axiom: "frequency-nesting",
                            witness: format!("tiles {p} and {q}"),
                        });
                    }
                }
            }
        }
    }

    // monotone core metrics: cube inclusion implies radius monotonicity
    for i in 0..grid.cubes.len() {
        for j in 0..grid.cubes.len() {
            if grid.cube_le(i, j)
                && grid.scale_radius(grid.cubes[i].scale) > grid.scale_radius(grid.cubes[j].scale)
            {
                failures.push(TileFailure {
                    axiom: "monotone-cube-metrics",
                    witness: format!("cubes {i} ⊆ {j} with decreasing radius"),
                });
            }
        }
    }

    TileReport { failures }
}

/// Synthetic data the E-sets and densities are computed against.
#[derive(Debug, Clone)]
pub struct TileContext {
    pub f_set: IndexSet,
    pub g_set: IndexSet,
    /// per-point frequency Q(x) ∈ Q(X)
    pub qmap: Vec<i64>,
    pub sigma1: Vec<i32>,
    pub sigma2: Vec<i32>,
}

impl TileContext {
    /// Deterministic random context over the cloud.
    pub fn random(space: &PointCloudSpace, qx: &[i64], s_max: i32, seed: u64) -> Self {
        let mut rng = crate::rng::CounterRng::new(seed);
        let n = space.n();
        let mut f_set = IndexSet::new(n);
        let mut g_set = IndexSet::new(n);
        let mut qmap = Vec::with_capacity(n);
        let mut sigma1 = Vec::with_capacity(n);
        let mut sigma2 = Vec::with_capacity(n);
        for _ in 0..n {
            if rng.f64() < 0.5 {
                f_set.insert(qmap.len());
            }
            if rng.f64() < 0.5 {
                g_set.insert(qmap.len());
            }
            qmap.push(qx[rng.index(qx.len())]);
            let lo = rng.int(-(s_max as i64), s_max as i64) as i32;
            let hi = rng.int(lo as i64, s_max as i64) as i32;
            sigma1.push(lo);
            sigma2.push(hi);
        }
        TileContext {
            f_set,
            g_set,
            qmap,
            sigma1,
            sigma2,
        }
    }
}

/// E(p) = {x ∈ I(p) : Q(x) ∈ Ω(p), σ₁(x) ≤ s(p) ≤ σ₂(x)}.
pub fn e_set(grid: &GridStructure, ts: &TileStructure, ctx: &TileContext, p: usize) -> IndexSet {
    let t = &ts.tiles[p];
    let s = grid.cubes[t.cube].scale;
    IndexSet::from_members(
        grid.n,
        grid.cubes[t.cube].members.iter().filter(|&x| {
            let qi = ts.qx.binary_search(&ctx.qmap[x]);
            matches!(qi, Ok(qi) if t.omega.contains(qi))
                && ctx.sigma1[x] <= s
                && s <= ctx.sigma2[x]
        }),
    )
}

/// E₁(p) = {x ∈ I(p) ∩ G : Q(x) ∈ Ω(p)}.
pub fn e1_set(grid: &GridStructure, ts: &TileStructure, ctx: &TileContext, p: usize) -> IndexSet {
    let t = &ts.tiles[p];
    IndexSet::from_members(
        grid.n,
        grid.cubes[t.cube].members.iter().filter(|&x| {
            ctx.g_set.contains(x)
                && matches!(ts.qx.binary_search(&ctx.qmap[x]), Ok(qi) if t.omega.contains(qi))
        }),
    )
}

/// E₂(λ, p) = {x ∈ I(p) ∩ G : Q(x) ∈ B_p(Q(p), λ)}.
pub fn e2_set(
    grid: &GridStructure,
    ts: &TileStructure,
    ctx: &TileContext,
    lambda: f64,
    p: usize,
) -> IndexSet {
    let t = &ts.tiles[p];
    let ball = ts.freq_ball(ts.core_radius(grid, t.cube), t.freq, lambda);
    IndexSet::from_members(
        grid.n,
        grid.cubes[t.cube].members.iter().filter(|&x| {
            ctx.g_set.contains(x)
                && matches!(ts.qx.binary_search(&ctx.qmap[x]), Ok(qi) if ball.contains(qi))
        }),
    )
}

const LAMBDA_GRID: [f64; 10] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0];

/// dens₁ over the finite λ-grid: sup over p' in the set, λ, and tiles p
/// below some member of the set with λp' ≲ λp, of
/// λ^{-a} μ(E₂(λ, p)) / μ(I(p)).
pub fn dens1(
    space: &PointCloudSpace,
    grid: &GridStructure,
    ts: &TileStructure,
    ctx: &TileContext,
    pset: &[usize],
) -> f64 {
    let a = f64::from(space.doubling_exponent());
    // P(P'): tiles whose cube sits inside some member's cube
    let candidates: Vec<usize> = (0..ts.tiles.len())
        .filter(|&p| {
            pset.iter()
                .any(|&pp| grid.cube_le(ts.tiles[p].cube, ts.tiles[pp].cube))
        })
        .collect();
    let mut best = 0.0f64;
    for &pp in pset {
        for &lambda in &LAMBDA_GRID {
            for &p in &candidates {
                if !ts.wiggle_le(grid, pp, lambda, p, lambda) {
                    continue;
                }
                let e2 = e2_set(grid, ts, ctx, lambda, p);
                let mu_i = grid.cubes[ts.tiles[p].cube].members.measure(space.weights());
                if mu_i > 0.0 {
                    let v = lambda.powf(-a) * e2.measure(space.weights()) / mu_i;
                    if v > best {
                        best = v;
                    }
                }
            }
        }
    }
    best
}

/// dens₂ over the dyadic radius grid r = 4 D^{s(p')} 2^j, j = 0..=10,
/// capped once the ball swallows the cloud: sup of μ(F ∩ B)/μ(B).
pub fn dens2(
    space: &PointCloudSpace,
    grid: &GridStructure,
    ts: &TileStructure,
    ctx: &TileContext,
    pset: &[usize],
) -> f64 {
    let mut best = 0.0f64;
    for &pp in pset {
        let t = &ts.tiles[pp];
        let c = grid.cubes[t.cube].center;
        let base = 4.0 * grid.scale_radius(grid.cubes[t.cube].scale);
        for j in 0..=10 {
            let r = base * f64::from(1u32 << j);
            let ball = space.ball_set(BallRef::new(c, r)).expect("valid center");
            let mu = ball.measure(space.weights());
            if mu > 0.0 {
                let mut inter = ball.clone();
                inter.intersect_with(&ctx.f_set);
                let v = inter.measure(space.weights()) / mu;
                if v > best {
                    best = v;
                }
            }
            if ball.len() == space.n() {
                break;
            }
        }
    }
    best
}

/// Candidate forest: trees (top tile, member tiles), the stacking
/// parameter n, and the separation parameter Z.
#[derive(Debug, Clone)]
pub struct ForestCandidate {
    pub trees: Vec<(usize, Vec<usize>)>,
    pub n: u32,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForestFailure {
    pub axiom: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForestVerdict {
    pub failures: Vec<ForestFailure>,
}

impl ForestVerdict {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_axioms(&self) -> Vec<&'static str> {
        let mut v: Vec<&'static str> = self.failures.iter().map(|f| f.axiom).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Antichain check: no two distinct tiles of the set comparable under ≤.
/// Returns the first offending pair.
pub fn check_antichain(
    grid: &GridStructure,
    ts: &TileStructure,
    set: &[usize],
) -> Option<(usize, usize)> {
    for (i, &p) in set.iter().enumerate() {
        for (j, &q) in set.iter().enumerate() {
            if i != j && ts.tile_le(grid, p, q) {
                return Some((p, q));
            }
        }
    }
    None
}

/// Forest verifier: checks the six axioms and reports every failure with
/// a witness.
pub fn check_forest(
    space: &PointCloudSpace,
    grid: &GridStructure,
    ts: &TileStructure,
    ctx: &TileContext,
    cand: &ForestCandidate,
) -> ForestVerdict {
    let mut failures = Vec::new();
    let a = f64::from(space.doubling_exponent());

    for (u, tree) in &cand.trees {
        if tree.is_empty() {
            failures.push(ForestFailure {
                axiom: "forest1",
                witness: format!("tree at tile {u} is empty"),
            });
        }
        for &p in tree {
            if ts.tiles[p].cube == ts.tiles[*u].cube {
                failures.push(ForestFailure {
                    axiom: "forest1",
                    witness: format!("tile {p} shares its cube with the top {u}"),
                });
            } else if !ts.wiggle_le(grid, p, 4.0, *u, 1.0) {
                failures.push(ForestFailure {
                    axiom: "forest1",
                    witness: format!("4·{p} ≲ {u} fails"),
                });
            }
            // forest6
            let t = &ts.tiles[p];
            let ball = space
                .ball_set(BallRef::new(
                    grid.cubes[t.cube].center,
                    8.0 * grid.scale_radius(grid.cubes[t.cube].scale),
                ))
                .expect("valid center");
            if !ball.is_subset(&grid.cubes[ts.tiles[*u].cube].members) {
                failures.push(ForestFailure {
                    axiom: "forest6",
                    witness: format!("8-ball of tile {p} escapes the top cube of {u}"),
                });
            }
        }
        // forest2: convexity within the tree
        for &p in tree {
            for &pq in tree {
                if p == pq {
                    continue;
                }
                for mid in 0..ts.tiles.len() {
                    if tree.contains(&mid) {
                        continue;
                    }
                    if ts.tile_le(grid, p, mid) && ts.tile_le(grid, mid, pq) {
                        failures.push(ForestFailure {
                            axiom: "forest2",
                            witness: format!("chain {p} ≤ {mid} ≤ {pq} leaves the tree at {u}"),
                        });
                    }
                }
            }
        }
        // forest4: density cap
        let d1 = dens1(space, grid, ts, ctx, tree);
        let cap = (4.0 * a + 1.0 - f64::from(cand.n)).exp2();
        if d1 > cap {
            failures.push(ForestFailure {
                axiom: "forest4",
                witness: format!("dens1 = {d1} exceeds 2^(4a+1-n) = {cap} at tree {u}"),
            });
        }
    }

    // forest3: stacking bound on the tops
    let cap = f64::from(cand.n).exp2();
    for x in 0..space.n() {
        let stack = cand
            .trees
            .iter()
            .filter(|(u, _)| grid.cubes[ts.tiles[*u].cube].members.contains(x))
            .count() as f64;
        if stack > cap {
            failures.push(ForestFailure {
                axiom: "forest3",
                witness: format!("point {x} stacked {stack} > 2^n"),
            });
            break;
        }
    }

    // forest5: cross-tree frequency separation
    let threshold = (cand.z * f64::from(cand.n + 1)).exp2();
    for (ui, (u, _)) in cand.trees.iter().enumerate() {
        for (vi, (_, tree_v)) in cand.trees.iter().enumerate() {
            if ui == vi {
                continue;
            }
            for &p in tree_v {
                if grid.cube_le(ts.tiles[p].cube, ts.tiles[*u].cube) {
                    let d = ts.d_p(grid, p, ts.tiles[p].freq, ts.tiles[*u].freq);
                    if d <= threshold {
                        failures.push(ForestFailure {
                            axiom: "forest5",
                            witness: format!(
                                "tiles {p} (other tree) and top {u}: d_p = {d} ≤ {threshold}"
                            ),
                        });
                    }
                }
            }
        }
    }

    ForestVerdict { failures }
}


/// A self-contained forest test bed: a grid and tile structure on a line
/// cloud, a context, a candidate satisfying all six forest axioms, and
/// six mutations each violating exactly one named axiom.
pub struct ForestFixture {
    pub space: PointCloudSpace,
    pub grid: GridStructure,
    pub tiles: TileStructure,
    pub ctx: TileContext,
    pub base: ForestCandidate,
    pub mutations: Vec<(&'static str, ForestCandidate)>,
}

/// Build the fixture: D = 16, S = 2 on a 512-point cloud over [0, 120]
/// with frequencies -40..=40. The base forest has two trees: one rooted
/// at the top cube holding the frequency-40 tiles of every scale-1 cube,
/// the frequency-40 tiles of the scale-0 subcubes of one chosen scale-1
/// cube C2 ≠ C1, and the deep tiles below one of those subcubes whose Ω
/// contains 40; and one tree rooted at C1 holding its interior
/// frequency-(-40) scale-0 tiles.
pub fn forest_fixture() -> Result<ForestFixture> {
    let space = PointCloudSpace::uniform_line(0.0, 120.0, 512, 4)?;
    let grid = crate::grid::build_grid(&space, 2, 16.0)?;
    let qx: Vec<i64> = (-40..=40).collect();
    let ts = build_tiles(&grid, &qx)?;

    let tile_at = |cube: usize, freq: i64| -> Result<usize> {
        ts.per_cube[cube]
            .iter()
            .copied()
            .find(|&t| ts.tiles[t].freq == freq)
            .ok_or_else(|| Error::Contract(format!("no tile at cube {cube} freq {freq}")))
    };

    // ball8(p) ⊆ members(c) is the forest6 condition
    let ball8_inside = |cube: usize, container: &IndexSet| -> bool {
        let c = &grid.cubes[cube];
        space
            .ball_set(BallRef::new(
                c.center,
                8.0 * grid.scale_radius(c.scale),
            ))
            .map(|b| b.is_subset(container))
            .unwrap_or(false)
    };

    // C1: a scale-1 cube with interior scale-0 subcubes and at least one
    // boundary subcube whose 8-ball escapes (for the forest6 mutation)
    let mut chosen = None;
    for (ci, c) in grid.cubes.iter().enumerate() {
        if c.scale != 1 {
            continue;
        }
        let subs: Vec<usize> = (0..grid.cubes.len())
            .filter(|&cj| grid.cubes[cj].scale == 0 && grid.cube_le(cj, ci))
            .collect();
        let interior: Vec<usize> = subs
            .iter()
            .copied()
            .filter(|&cj| ball8_inside(cj, &c.members))
            .collect();
        let edge: Vec<usize> = subs
            .iter()
            .copied()
            .filter(|&cj| !ball8_inside(cj, &c.members))
            .collect();
        if interior.len() >= 2 && !edge.is_empty() {
            chosen = Some((ci, interior, edge));
            break;
        }
    }
    let (c1, c1_interior, c1_edge) =
        chosen.ok_or_else(|| Error::Contract("no suitable scale-1 cube for the fixture".into()))?;

    let u_top = tile_at(grid.top, 40)?;
    let u1 = tile_at(c1, -40)?;
    let q40 = ts.qx.binary_search(&40).expect("40 in qx");

    // C2: some other scale-1 cube carrying the deep branch of the tree
    let c2 = (0..grid.cubes.len())
        .find(|&cj| grid.cubes[cj].scale == 1 && cj != c1)
        .ok_or_else(|| Error::Contract("fixture needs two scale-1 cubes".into()))?;
    let c2_subs: Vec<usize> = (0..grid.cubes.len())
        .filter(|&cj| grid.cubes[cj].scale == 0 && grid.cube_le(cj, c2))
        .collect();
    let c0_star = *c2_subs
        .first()
        .ok_or_else(|| Error::Contract("C2 has no scale-0 subcube".into()))?;

    // tree of the top: every scale-1 frequency-40 tile, the scale-0
    // frequency-40 tiles under C2, and the deep tiles under C0* whose Ω
    // contains 40
    let mut top_tree: Vec<usize> = Vec::new();
    for (ti, t) in ts.tiles.iter().enumerate() {
        let scale = grid.cubes[t.cube].scale;
        if scale == 1 && t.freq == 40 {
            top_tree.push(ti);
        }
        if scale == 0 && t.freq == 40 && grid.cube_le(t.cube, c2) {
            top_tree.push(ti);
        }
        if scale == -1 && t.omega.contains(q40) && grid.cube_le(t.cube, c0_star) {
            top_tree.push(ti);
        }
    }
    // tree of u1: interior frequency-(-40) scale-0 tiles under C1
    let mut c1_tree: Vec<usize> = Vec::new();
    for &cj in &c1_interior {
        c1_tree.push(tile_at(cj, -40)?);
    }

    let ctx = TileContext {
        f_set: IndexSet::full(space.n()),
        g_set: IndexSet::full(space.n()),
        qmap: vec![-40; space.n()],
        sigma1: vec![-2; space.n()],
        sigma2: vec![2; space.n()],
    };

    let base = ForestCandidate {
        trees: vec![(u_top, top_tree.clone()), (u1, c1_tree.clone())],
        n: 1,
        z: 2.0,
    };

    let mut mutations: Vec<(&'static str, ForestCandidate)> = Vec::new();

    // forest1: adjoin a frequency far from the top of u1's tree
    {
        let mut m = base.clone();
        m.trees[1].1.push(tile_at(c1_interior[0], -25)?);
        mutations.push(("forest1", m));
    }
    // forest2: remove the middle of a three-scale chain in the top tree
    {
        // find a scale-0 frequency-40 tile off C1 with a deep child in
        // the tree and a scale-1 ancestor in the tree
        let mut middle = None;
        'search: for &mid in &top_tree {
            let tm = &ts.tiles[mid];
            if grid.cubes[tm.cube].scale != 0 || grid.cube_le(tm.cube, c1) {
                continue;
            }
            for &q in &top_tree {
                if grid.cubes[ts.tiles[q].cube].scale == -1 && ts.tile_le(&grid, q, mid) {
                    for &pp in &top_tree {
                        if grid.cubes[ts.tiles[pp].cube].scale == 1
                            && ts.tile_le(&grid, mid, pp)
                        {
                            middle = Some(mid);
                            break 'search;
                        }
                    }
                }
            }
        }
        let mid = middle
            .ok_or_else(|| Error::Contract("no three-scale chain in the top tree".into()))?;
        let mut m = base.clone();
        m.trees[0].1.retain(|&t| t != mid);
        mutations.push(("forest2", m));
    }
    // forest3: drop the stacking allowance below the actual overlap
    {
        let mut m = base.clone();
        m.n = 0;
        mutations.push(("forest3", m));
    }
    // forest4: raise n so the density cap drops below dens1 of u1's tree;
    // the separation parameter shrinks so forest5 stays satisfied
    {
        let mut m = base.clone();
        m.n = 22;
        m.z = 0.1;
        mutations.push(("forest4", m));
    }
    // forest5: blow up the separation parameter
    {
        let mut m = base.clone();
        m.z = 13.0;
        mutations.push(("forest5", m));
    }
    // forest6: adjoin a boundary tile whose 8-ball escapes C1
    {
        let mut m = base.clone();
        m.trees[1].1.push(tile_at(c1_edge[0], -40)?);
        mutations.push(("forest6", m));
    }

    Ok(ForestFixture {
        space,
        grid,
        tiles: ts,
        ctx,
        base,
        mutations,
    })
}

/// Stable JSON dump of a tile structure.
pub fn tiles_to_json(grid: &GridStructure, ts: &TileStructure) -> String {
    #[derive(Serialize)]
    struct TileDoc {
        cube: usize,
        scale: i32,
        freq: i64,
        omega: Vec<i64>,
    }
    #[derive(Serialize)]
    struct Doc {
        qx: Vec<i64>,
        tiles: Vec<TileDoc>,
    }
    let doc = Doc {
        qx: ts.qx.clone(),
        tiles: ts
            .tiles
            .iter()
            .map(|t| TileDoc {
                cube: t.cube,
                scale: grid.cubes[t.cube].scale,
                freq: t.freq,
                omega: t.omega.iter().map(|i| ts.qx[i]).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}
