//! Christ-type dyadic grid construction on a finite doubling space.
//!
//! The construction follows the classical recipe: greedy maximal nets Y_k
//! with pairwise-disjoint D^k-balls at every scale, auxiliary sets
//! I_1/I_2 assembled from the previous scale, and the disjointified I_3
//! built scale by scale in net-enumeration order. The final grid keeps
//! the cubes contained in the top cube around the reference point.
//!
//! The four structural axioms (cover, dyadic nesting, top containment,
//! ball squeeze) are verified exhaustively; the small-boundary property
//! is only measured, reporting the effective exponent attainable at the
//! configured scale base.

use crate::space::{BallRef, PointCloudSpace};
use crate::util::IndexSet;
use crate::{Error, Result};
use serde::Serialize;

/// One dyadic cube: its member set, scale in [-S, S], and center point.
#[derive(Debug, Clone)]
pub struct Cube {
    pub members: IndexSet,
    pub scale: i32,
    pub center: usize,
}

/// A grid structure over a point cloud.
#[derive(Debug, Clone)]
pub struct GridStructure {
    pub cubes: Vec<Cube>,
    pub d: f64,
    pub s_max: i32,
    /// index of the top cube I_3(o, S) in `cubes`
    pub top: usize,
    pub n: usize,
}

impl GridStructure {
    pub fn scale_radius(&self, scale: i32) -> f64 {
        self.d.powi(scale)
    }

    /// Cube inclusion: member containment with the scale order.
    pub fn cube_le(&self, i: usize, j: usize) -> bool {
        self.cubes[i].scale <= self.cubes[j].scale
            && self.cubes[i].members.is_subset(&self.cubes[j].members)
    }
}

/// Greedy maximal nets Y_k for k = -S..=S (indexed k + S): the reference
/// point comes first, then ascending point index; a candidate joins when
/// its D^k-ball is member-disjoint from the balls of all accepted points
/// and it lies in B(o, 4 D^S - D^k).
pub fn build_separated_nets(
    space: &PointCloudSpace,
    s_max: i32,
    d: f64,
) -> Result<Vec<Vec<usize>>> {
    if !(d > 4.0) {
        return Err(Error::Domain(format!("scale base D = {d} must exceed 4")));
    }
    if s_max < 1 {
        return Err(Error::Domain("top scale must be at least 1".into()));
    }
    let n = space.n();
    let mut nets = Vec::with_capacity((2 * s_max + 1) as usize);
    for k in -s_max..=s_max {
        let rk = d.powi(k);
        let eligible = space.ball_set(BallRef::new(space.o(), 4.0 * d.powi(s_max) - rk))?;
        let mut accepted: Vec<usize> = Vec::new();
        let mut blocked = IndexSet::new(n);
        let try_point = |x: usize, accepted: &mut Vec<usize>, blocked: &mut IndexSet| {
            if !eligible.contains(x) {
                return;
            }
            let ball = space.ball_set(BallRef::new(x, rk)).expect("valid center");
            if !ball.intersects(blocked) {
                blocked.union_with(&ball);
                accepted.push(x);
            }
        };
        try_point(space.o(), &mut accepted, &mut blocked);
        for x in 0..n {
            if x != space.o() {
                try_point(x, &mut accepted, &mut blocked);
            }
        }
        if accepted.is_empty() || accepted[0] != space.o() {
            return Err(Error::Domain(format!(
                "net at scale {k} failed to include the reference point"
            )));
        }
        nets.push(accepted);
    }
    Ok(nets)
}

/// Volumetric cardinality cap for a net at the given parameters, in log2:
/// a (3 + 2 S log2 D). Reported, never asserted.
pub fn net_cardinality_bound_log2(a: u32, s_max: i32, d: f64) -> f64 {
    f64::from(a) * (3.0 + 2.0 * s_max as f64 * d.log2())
}

/// Build the grid: base-scale sets are balls, higher scales aggregate the
/// previous scale's I_3 cubes, and the final family keeps cubes inside
/// the top cube.
pub fn build_grid(space: &PointCloudSpace, s_max: i32, d: f64) -> Result<GridStructure> {
    let nets = build_separated_nets(space, s_max, d)?;
    let n = space.n();
    let mut all: Vec<Cube> = Vec::new();
    // I_3 sets of the previous scale, in net order
    let mut prev3: Vec<(usize, IndexSet)> = Vec::new();
    for k in -s_max..=s_max {
        let net = &nets[(k + s_max) as usize];
        let rk = d.powi(k);
        // I_1 and I_2 per net point
        let (i1s, i2s): (Vec<IndexSet>, Vec<IndexSet>) = if k == -s_max {
            let i1s = net
                .iter()
                .map(|&y| space.ball_set(BallRef::new(y, rk)))
                .collect::<Result<Vec<_>>>()?;
            let i2s = net
                .iter()
                .map(|&y| space.ball_set(BallRef::new(y, 2.0 * rk)))
                .collect::<Result<Vec<_>>>()?;
            (i1s, i2s)
        } else {
            let mut i1s = Vec::with_capacity(net.len());
            let mut i2s = Vec::with_capacity(net.len());
            for &y in net {
                let mut i1 = IndexSet::new(n);
                let mut i2 = IndexSet::new(n);
                for &(yp, ref set) in &prev3 {
                    let dist = space.dist(y, yp);
                    if dist < rk {
                        i1.union_with(set);
                    }
                    if dist < 2.0 * rk {
                        i2.union_with(set);
                    }
                }
                i1s.push(i1);
                i2s.push(i2);
            }
            (i1s, i2s)
        };
        // X_k = union of the I_1
        let mut xk = IndexSet::new(n);
        for i1 in &i1s {
            xk.union_with(i1);
        }
        // I_3 in enumeration order
        let mut taken = IndexSet::new(n);
        let mut cur3: Vec<(usize, IndexSet)> = Vec::with_capacity(net.len());
        for (j, &y) in net.iter().enumerate() {
            let mut i3 = i2s[j].clone();
            i3.subtract(&xk);
            i3.subtract(&taken);
            i3.union_with(&i1s[j]);
            taken.union_with(&i3);
            cur3.push((y, i3));
        }
        for &(y, ref set) in &cur3 {
            all.push(Cube {
                members: set.clone(),
                scale: k,
                center: y,
            });
        }
        prev3 = cur3;
    }
    // the top cube is I_3(o, S); o is first in the top-scale net
    let top_set = prev3[0].1.clone();
    debug_assert_eq!(prev3[0].0, space.o());
    let mut cubes: Vec<Cube> = all
        .into_iter()
        .filter(|c| c.members.is_subset(&top_set))
        .collect();
    cubes.sort_by_key(|c| (c.scale, c.center));
    let top = cubes
        .iter()
        .position(|c| c.scale == s_max && c.center == space.o())
        .ok_or_else(|| Error::Contract("top cube missing from final family".into()))?;
    Ok(GridStructure {
        cubes,
        d,
        s_max,
        top,
        n,
    })
}

/// One axiom failure with a human-readable witness.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomFailure {
    pub axiom: &'static str,
    pub witness: String,
}

/// Boundary-mass measurement for one cube and threshold.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryRow {
    pub cube: usize,
    pub scale: i32,
    pub t: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub failures: Vec<AxiomFailure>,
    /// largest κ with boundary ratio ≤ 2 t^κ across all measured (cube, t)
    pub kappa_eff: Option<f64>,
    pub boundary: Vec<BoundaryRow>,
}

impl GridReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<GridReport> {
        if let Some(f) = self.failures.first() {
            return Err(Error::Axiom {
                axiom: f.axiom,
                witness: f.witness.clone(),
            });
        }
        Ok(self)
    }
}

/// Exhaustive verification of the four structural axioms plus the
/// boundary-measure report over the thresholds `t_list`.
pub fn verify_grid(space: &PointCloudSpace, grid: &GridStructure, t_list: &[f64]) -> GridReport {
    let mut failures = Vec::new();
    let cubes = &grid.cubes;
    let n = grid.n;

    // per-scale unions for the cover axiom
    let mut scale_union: std::collections::BTreeMap<i32, IndexSet> = Default::default();
    for c in cubes {
        scale_union
            .entry(c.scale)
            .or_insert_with(|| IndexSet::new(n))
            .union_with(&c.members);
    }
    for (ci, c) in cubes.iter().enumerate() {
        for k in -grid.s_max..c.scale {
            let ok = scale_union
                .get(&k)
                .map(|u| c.members.is_subset(u))
                .unwrap_or(false);
            if !ok {
                failures.push(AxiomFailure {
                    axiom: "cover",
                    witness: format!("cube {ci} (scale {}) not covered at scale {k}", c.scale),
                });
            }
        }
    }

    // dyadic nesting: non-disjoint cubes with ordered scales must nest
    for i in 0..cubes.len() {
        for j in 0..cubes.len() {
            if i == j || cubes[i].scale > cubes[j].scale {
                continue;
            }
            if cubes[i].members.intersects(&cubes[j].members)
                && !cubes[i].members.is_subset(&cubes[j].members)
            {
                failures.push(AxiomFailure {
                    axiom: "nesting",
                    witness: format!(
                        "cubes {i} (scale {}) and {j} (scale {}) overlap without nesting",
                        cubes[i].scale, cubes[j].scale
                    ),
                });
            }
        }
    }

    // top cube
    let top = &cubes[grid.top];
    if top.scale != grid.s_max || top.center != space.o() {
        failures.push(AxiomFailure {
            axiom: "top-cube",
            witness: "top cube has wrong scale or center".into(),
        });
    }
    for (ci, c) in cubes.iter().enumerate() {
        if !c.members.is_subset(&top.members) {
            failures.push(AxiomFailure {
                axiom: "top-cube",
                witness: format!("cube {ci} escapes the top cube"),
            });
        }
    }

    // squeeze: B(c, D^s/4) ⊆ I ⊆ B(c, 4 D^s)
    for (ci, c) in cubes.iter().enumerate() {
        let r = grid.scale_radius(c.scale);
        let inner = space
            .ball_set(BallRef::new(c.center, 0.25 * r))
            .expect("valid center");
        let outer = space
            .ball_set(BallRef::new(c.center, 4.0 * r))
            .expect("valid center");
        if !inner.is_subset(&c.members) {
            failures.push(AxiomFailure {
                axiom: "squeeze",
                witness: format!("cube {ci}: inner ball escapes the cube"),
            });
        }
        if !c.members.is_subset(&outer) {
            failures.push(AxiomFailure {
                axiom: "squeeze",
                witness: format!("cube {ci}: cube escapes the outer ball"),
            });
        }
    }

    // boundary-measure report
    let mut boundary = Vec::new();
    let mut kappa_eff: Option<f64> = None;
    for (ci, c) in cubes.iter().enumerate() {
        if c.members.is_empty() {
            continue;
        }
        let dists = boundary_distances(space, &c.members);
        let mu = c.members.measure(space.weights());
        for &t in t_list {
            let cut = t * grid.scale_radius(c.scale);
            let mass: f64 = c
                .members
                .iter()
                .zip(&dists)
                .filter(|&(_, &d)| d <= cut)
                .map(|(i, _)| space.weight(i))
                .sum();
            let ratio = mass / mu;
            boundary.push(BoundaryRow {
                cube: ci,
                scale: c.scale,
                t,
                ratio,
            });
            if t < 1.0 && ratio > 0.0 {
                // ratio ≤ 2 t^κ  ⟺  κ ≤ log(ratio/2) / log t
                let cap = (ratio / 2.0).ln() / t.ln();
                kappa_eff = Some(match kappa_eff {
                    Some(k) => k.min(cap),
                    None => cap,
                });
            }
        }
    }

    GridReport {
        failures,
        kappa_eff,
        boundary,
    }
}

/// Distance from each member of the set (in iteration order) to the
/// complement of the set.
fn boundary_distances(space: &PointCloudSpace, set: &IndexSet) -> Vec<f64> {
    let members: Vec<usize> = set.iter().collect();
    if space.position(0).is_some() {
        // line cloud: sweep the sorted positions once in each direction
        let n = space.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| space.position(a).unwrap().total_cmp(&space.position(b).unwrap()));
        let mut nearest = vec![f64::INFINITY; n];
        let mut last_out: Option<f64> = None;
        for &i in &order {
            let p = space.position(i).unwrap();
            if set.contains(i) {
                if let Some(q) = last_out {
                    nearest[i] = p - q;
                }
            } else {
                last_out = Some(p);
            }
        }
        last_out = None;
        for &i in order.iter().rev() {
            let p = space.position(i).unwrap();
            if set.contains(i) {
                if let Some(q) = last_out {
                    nearest[i] = nearest[i].min(q - p);
                }
            } else {
                last_out = Some(p);
            }
        }
        members.iter().map(|&i| nearest[i]).collect()
    } else {
        let complement: Vec<usize> = set.complement().iter().collect();
        members
            .iter()
            .map(|&i| {
                complement
                    .iter()
                    .map(|&j| space.dist(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }
}

/// Stable JSON dump (field and cube order are deterministic functions of
/// the construction inputs).
pub fn grid_to_json(grid: &GridStructure) -> String {
    #[derive(Serialize)]
    struct CubeDoc {
        scale: i32,
        center: usize,
        members: Vec<usize>,
    }
    #[derive(Serialize)]
    struct Doc {
        #[serde(rename = "D")]
        d: f64,
        #[serde(rename = "S")]
        s: i32,
        top: usize,
        n: usize,
        cubes: Vec<CubeDoc>,
    }
    let doc = Doc {
        d: grid.d,
        s: grid.s_max,
        top: grid.top,
        n: grid.n,
        cubes: grid
            .cubes
            .iter()
            .map(|c| CubeDoc {
                scale: c.scale,
                center: c.center,
                members: c.members.iter().collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}
