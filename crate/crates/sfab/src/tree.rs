//! Explicit rank-one buildings: homogeneous `(q+1)`-regular trees and
//! semi-homogeneous `(q0+1, q1+1)` trees, truncated at a fixed depth.
//!
//! The tree is the one case where spheres, boundary cylinders, horocycle
//! coweights and the averaging operators can be enumerated directly, so
//! everything here is a ground-truth oracle for the general formulas.
//! Every check is evaluated only on data fully resolved before the
//! truncation depth, which keeps all comparisons exact.
//!
//! Conventions: the root has type 0; types alternate along edges. Type-0
//! vertices have degree `q1 + 1`, type-1 vertices degree `q0 + 1`. When
//! `q0 = q1` every vertex is a good vertex and the lattice distance is the
//! graph distance; when `q0 != q1` only type-0 vertices are good and one
//! lattice step is two graph steps.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::qlaurent::Rat;
use crate::{Error, Result};

const NODE_CAP: u64 = 16_000_000;

#[derive(Clone, Copy)]
struct Node {
    parent: u32,
    child_start: u32,
    child_count: u8,
    depth: u8,
}

/// A truncated rank-one building.
pub struct TreeBuilding {
    pub q0: u32,
    pub q1: u32,
    pub depth: u32,
    nodes: Vec<Node>,
    level_start: Vec<u32>,
}

impl TreeBuilding {
    /// Number of children of a vertex at the given depth (the edge to the
    /// parent is not counted; the root has no parent).
    fn branching(q0: u32, q1: u32, depth: u32) -> u32 {
        if depth == 0 {
            q1 + 1
        } else if depth % 2 == 1 {
            q0
        } else {
            q1
        }
    }

    /// Build the truncated tree; errors when the node count would exceed
    /// the cap or the depth exceeds 14.
    pub fn build(q0: u32, q1: u32, depth: u32) -> Result<TreeBuilding> {
        if q0 < 1 || q1 < 1 {
            return Err(Error::BadInput("tree parameters must be >= 1".into()));
        }
        if depth > 14 || depth == 0 {
            return Err(Error::Truncation(format!(
                "depth {depth} outside the supported range 1..=14"
            )));
        }
        let mut total: u64 = 1;
        let mut shell: u64 = 1;
        for d in 0..depth {
            shell *= Self::branching(q0, q1, d) as u64;
            total += shell;
            if total > NODE_CAP {
                return Err(Error::TreeSize(total, NODE_CAP));
            }
        }
        let mut nodes = Vec::with_capacity(total as usize);
        nodes.push(Node {
            parent: u32::MAX,
            child_start: 1,
            child_count: 0,
            depth: 0,
        });
        let mut level_start = vec![0u32, 1u32];
        for d in 0..depth {
            let (lo, hi) = (level_start[d as usize], level_start[d as usize + 1]);
            let branch = Self::branching(q0, q1, d);
            for v in lo..hi {
                let start = nodes.len() as u32;
                nodes[v as usize].child_start = start;
                nodes[v as usize].child_count = branch as u8;
                for _ in 0..branch {
                    nodes.push(Node {
                        parent: v,
                        child_start: 0,
                        child_count: 0,
                        depth: (d + 1) as u8,
                    });
                }
            }
            level_start.push(nodes.len() as u32);
        }
        Ok(TreeBuilding {
            q0,
            q1,
            depth,
            nodes,
            level_start,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_semi_homogeneous(&self) -> bool {
        self.q0 != self.q1
    }

    /// Graph steps per lattice step.
    pub fn lambda_unit(&self) -> u32 {
        if self.is_semi_homogeneous() {
            2
        } else {
            1
        }
    }

    pub fn node_depth(&self, v: u32) -> u32 {
        self.nodes[v as usize].depth as u32
    }

    pub fn node_type(&self, v: u32) -> u8 {
        self.nodes[v as usize].depth % 2
    }

    pub fn is_good(&self, v: u32) -> bool {
        !self.is_semi_homogeneous() || self.node_type(v) == 0
    }

    pub fn root(&self) -> u32 {
        0
    }

    /// Vertices at a given depth.
    pub fn level(&self, d: u32) -> std::ops::Range<u32> {
        self.level_start[d as usize]..self.level_start[d as usize + 1]
    }

    /// Leaves at the truncation depth; each represents one boundary end
    /// (the ray from the root through it).
    pub fn ends(&self) -> std::ops::Range<u32> {
        self.level(self.depth)
    }

    pub fn parent(&self, v: u32) -> u32 {
        self.nodes[v as usize].parent
    }

    pub fn first_child(&self, v: u32) -> u32 {
        self.nodes[v as usize].child_start
    }

    fn ancestor(&self, mut v: u32, steps: u32) -> u32 {
        for _ in 0..steps {
            v = self.parent(v);
        }
        v
    }

    /// Deepest common ancestor.
    pub fn meet(&self, mut a: u32, mut b: u32) -> u32 {
        let (da, db) = (self.node_depth(a), self.node_depth(b));
        if da > db {
            a = self.ancestor(a, da - db);
        } else {
            b = self.ancestor(b, db - da);
        }
        while a != b {
            a = self.parent(a);
            b = self.parent(b);
        }
        a
    }

    /// Graph distance.
    pub fn dist(&self, a: u32, b: u32) -> u32 {
        let m = self.meet(a, b);
        self.node_depth(a) + self.node_depth(b) - 2 * self.node_depth(m)
    }

    /// Lattice distance between good vertices.
    pub fn lambda_dist(&self, a: u32, b: u32) -> Result<i64> {
        let d = self.dist(a, b);
        let u = self.lambda_unit();
        if !d.is_multiple_of(u) {
            return Err(Error::BadInput(
                "lattice distance requested between vertices of different types".into(),
            ));
        }
        Ok((d / u) as i64)
    }

    fn collect_descendants(&self, v: u32, down: u32, skip_child: u32, out: &mut Vec<u32>) {
        if down == 0 {
            out.push(v);
            return;
        }
        let n = self.nodes[v as usize];
        for c in n.child_start..n.child_start + n.child_count as u32 {
            if c != skip_child {
                self.collect_descendants(c, down - 1, u32::MAX, out);
            }
        }
    }

    /// All vertices at graph distance exactly `r` from `x`, or an error
    /// when the sphere would cross the truncation boundary.
    pub fn sphere(&self, x: u32, r: u32) -> Result<Vec<u32>> {
        if self.node_depth(x) + r > self.depth {
            return Err(Error::Truncation(format!(
                "sphere of radius {r} around a depth-{} vertex exceeds depth {}",
                self.node_depth(x),
                self.depth
            )));
        }
        Ok(self.sphere_clipped(x, r))
    }

    /// The part of the distance-`r` sphere inside the truncated tree.
    pub fn sphere_clipped(&self, x: u32, r: u32) -> Vec<u32> {
        if r == 0 {
            return vec![x];
        }
        let mut out = Vec::new();
        let mut anchor = x;
        let mut skip = u32::MAX;
        let up_max = r.min(self.node_depth(x));
        for up in 0..=up_max {
            let down = r - up;
            if self.node_depth(anchor) + down <= self.depth {
                self.collect_descendants(anchor, down, skip, &mut out);
            }
            skip = anchor;
            if up < up_max {
                anchor = self.parent(anchor);
            }
        }
        out
    }

    /// `|V_k(x)|` for the lattice radius `k`.
    pub fn sphere_count(&self, x: u32, k: i64) -> Result<u64> {
        if k == 0 {
            return Ok(1);
        }
        let r = (k as u32) * self.lambda_unit();
        Ok(self.sphere(x, r)?.len() as u64)
    }

    /// Horocycle coweight `h(x, y; end)` in lattice units. The end must
    /// extend strictly past the confluence of the two rays.
    pub fn horocycle(&self, x: u32, y: u32, end: u32) -> Result<i64> {
        if !self.is_good(x) || !self.is_good(y) {
            return Err(Error::BadInput(
                "horocycles are defined on good vertices".into(),
            ));
        }
        let mx = self.meet(x, end);
        let my = self.meet(y, end);
        // Both meets are ancestors of the end leaf; the deeper one is where
        // the two rays have merged.
        let z = if self.node_depth(mx) >= self.node_depth(my) {
            mx
        } else {
            my
        };
        if z == end {
            return Err(Error::Truncation(
                "end does not extend past the ray confluence".into(),
            ));
        }
        let dx = self.dist(x, z) as i64;
        let dy = self.dist(y, z) as i64;
        let u = self.lambda_unit() as i64;
        debug_assert_eq!((dx - dy).rem_euclid(u), 0);
        Ok((dx - dy) / u)
    }

    /// Census of horocycle values over the lattice sphere `V_k(root)`
    /// toward the given end.
    pub fn horocycle_census(&self, k: i64, end: u32) -> Result<BTreeMap<i64, u64>> {
        let x = self.root();
        let mut counts = BTreeMap::new();
        for y in self.sphere(x, (k as u32) * self.lambda_unit())? {
            let h = self.horocycle(x, y, end)?;
            *counts.entry(h).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Geometric structure constant `a_{k,l;m} = (N_m / (N_k N_l))
    /// |V_k(x) cap V_l(y)|` with `y` at lattice distance `m` from the
    /// root; verified independent of the choice of `y`.
    pub fn structure_count(&self, k: i64, l: i64, m: i64) -> Result<Rat> {
        let u = self.lambda_unit();
        let x = self.root();
        let ys = self.sphere(x, (m as u32) * u)?;
        if ys.is_empty() {
            return Err(Error::Truncation("empty target sphere".into()));
        }
        let sphere_k = self.sphere(x, (k as u32) * u)?;
        let count_for = |y: u32| -> u64 {
            sphere_k
                .iter()
                .filter(|&&z| self.dist(z, y) == (l as u32) * u)
                .count() as u64
        };
        let c0 = count_for(ys[0]);
        let c1 = count_for(ys[ys.len() / 2]);
        if c0 != c1 {
            return Err(Error::Inconsistent {
                identity: "geometric structure count",
                detail: "intersection count depends on the base pair".into(),
            });
        }
        let nk = Rat::from_integer(self.sphere_count(x, k)?.into());
        let nl = Rat::from_integer(self.sphere_count(x, l)?.into());
        let nm = Rat::from_integer(self.sphere_count(x, m)?.into());
        Ok(nm / (nk * nl) * Rat::from_integer(c0.into()))
    }

    /// Boundary cylinder mass `nu_x(Omega_x(z)) = 1 / N_{dist(x,z)}`.
    pub fn cylinder_mass(&self, x: u32, z: u32) -> Result<Rat> {
        let k = self.lambda_dist(x, z)?;
        Ok(Rat::from_integer(self.sphere_count(x, k)?.into()).recip())
    }

    /// Radon-Nikodym data for a common resolved cylinder: the exact mass
    /// ratio `nu_y / nu_x` on `Omega_x(z) = Omega_y(z)` and the horocycle
    /// value `h(x, y; end)` for an end through `z`.
    ///
    /// `z` must lie strictly past both `x` and `y` (the two geodesics must
    /// enter it through the same edge) and strictly above the leaves, so
    /// that the cylinder and the horocycle are fully resolved.
    pub fn rn_ratio(&self, x: u32, y: u32, z: u32) -> Result<(Rat, i64)> {
        if x != y {
            let zx = self.meet(x, z);
            let zy = self.meet(y, z);
            if z == zx || z == zy {
                return Err(Error::BadInput(
                    "cylinder base must lie strictly past both observation points".into(),
                ));
            }
        }
        if self.node_depth(z) >= self.depth {
            return Err(Error::Truncation(
                "cylinder not resolved before the leaves".into(),
            ));
        }
        // Any end through z: take the leftmost descendant leaf.
        let mut end = z;
        while self.node_depth(end) < self.depth {
            end = self.first_child(end);
        }
        let h = self.horocycle(x, y, end)?;
        let mass_x = self.cylinder_mass(x, z)?;
        let mass_y = self.cylinder_mass(y, z)?;
        Ok((mass_y / mass_x, h))
    }

    /// The modular factor `r` on one lattice unit: `sqrt(q)` for the
    /// homogeneous tree, `sqrt(q0 q1)` for the semi-homogeneous one.
    pub fn r_unit(&self) -> f64 {
        if self.is_semi_homogeneous() {
            ((self.q0 as f64) * (self.q1 as f64)).sqrt()
        } else {
            (self.q1 as f64).sqrt()
        }
    }

    /// Boundary-integral eigenvalue: `(1/N_k) sum_{z in V_k(root)}
    /// (u r)^{h(root, z; end)}`.
    pub fn boundary_integral_hom(&self, k: i64, u: Complex64, end: u32) -> Result<Complex64> {
        let census = self.horocycle_census(k, end)?;
        let n = self.sphere_count(self.root(), k)? as f64;
        let ur = u * self.r_unit();
        let mut acc = Complex64::new(0.0, 0.0);
        for (&h, &count) in &census {
            acc += ur.powi(h as i32) * (count as f64);
        }
        Ok(acc / n)
    }

    /// The averaging operator at lattice radius `k`, compressed to radial
    /// functions (exact shell transition counts).
    pub fn radial_operator(&self, k: i64) -> RadialOperator {
        RadialOperator::new(self.q0, self.q1, self.depth, self.lambda_unit(), k)
    }

    /// Rayleigh-quotient estimate of `|A_k|` by power iteration of the
    /// truncated operator (radially compressed; the Perron eigenvector of
    /// the truncated operator is radial, so nothing is lost). The
    /// truncated value sits a few percent below the infinite-tree norm at
    /// practical depths; `radial_norm_extrapolated` sharpens it.
    pub fn power_iteration_norm(&self, k: i64, iters: usize) -> f64 {
        self.radial_operator(k).power_iteration(iters)
    }
}

/// The averaging operator at lattice radius `k` on radial functions of a
/// depth-truncated tree, in the orthonormal shell basis.
pub struct RadialOperator {
    pub levels: usize,
    /// Symmetrized matrix, row-major `(levels+1)^2`.
    pub sym: Vec<f64>,
    /// Shell sizes.
    pub shell: Vec<f64>,
}

impl RadialOperator {
    fn new(q0: u32, q1: u32, depth: u32, unit: u32, k: i64) -> RadialOperator {
        let levels = depth as usize;
        let m = (k as u32) * unit;
        let branch = |d: u32| TreeBuilding::branching(q0, q1, d) as u128;
        let mut shell = vec![0u128; levels + 1];
        shell[0] = 1;
        for d in 0..levels {
            shell[d + 1] = shell[d] * branch(d as u32);
        }
        // count(l -> l'): targets at graph distance m from a depth-l vertex
        // landing at depth l'. A geodesic goes up j steps then down m - j,
        // the first downward step avoiding the arrival edge.
        let count = |l: u32, lp: u32| -> u128 {
            let sum = l as i64 + m as i64 - lp as i64;
            if sum < 0 || sum % 2 != 0 || lp > depth {
                return 0;
            }
            let j = (sum / 2) as u32;
            if j > l || j > m {
                return 0;
            }
            let down = m - j;
            let top = l - j;
            if down == 0 {
                return 1;
            }
            let exclude = u128::from(j > 0);
            let mut c = branch(top) - exclude;
            for d in (top + 1)..(top + down) {
                c *= branch(d);
            }
            c
        };
        let n_k: u128 = count(0, m);
        let dim = levels + 1;
        let mut sym = vec![0.0f64; dim * dim];
        for l in 0..=levels as u32 {
            for lp in 0..=levels as u32 {
                let c = count(l, lp);
                if c == 0 {
                    continue;
                }
                // Detailed balance of the counts makes this symmetric.
                debug_assert_eq!(shell[l as usize] * c, shell[lp as usize] * count(lp, l));
                sym[(l as usize) * dim + lp as usize] = (c as f64) / (n_k as f64)
                    * ((shell[l as usize] as f64) / (shell[lp as usize] as f64)).sqrt();
            }
        }
        RadialOperator {
            levels,
            sym,
            shell: shell.iter().map(|&s| s as f64).collect(),
        }
    }

    /// Spectral-norm estimate: power iteration of the square (the
    /// operator is parity-alternating for odd radii, which would zero out
    /// a naive Rayleigh quotient), then `|A v|` on the converged vector.
    pub fn power_iteration(&self, iters: usize) -> f64 {
        let dim = self.levels + 1;
        let mut v = vec![0.0f64; dim];
        v[0] = 1.0;
        let mut av = vec![0.0f64; dim];
        let mut aav = vec![0.0f64; dim];
        let apply = |v: &[f64], out: &mut [f64], sym: &[f64]| {
            for (r, slot) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (c, vc) in v.iter().enumerate() {
                    acc += sym[r * dim + c] * vc;
                }
                *slot = acc;
            }
        };
        for _ in 0..iters {
            apply(&v, &mut av, &self.sym);
            apply(&av, &mut aav, &self.sym);
            let norm = aav.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            for (x, y) in v.iter_mut().zip(&aav) {
                *x = y / norm;
            }
        }
        apply(&v, &mut av, &self.sym);
        av.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Power iteration of the radial truncated operator without materializing
/// the tree (the node count plays no role in the radial compression).
pub fn radial_power_iteration(q0: u32, q1: u32, k: i64, depth: u32, iters: usize) -> f64 {
    let unit = if q0 != q1 { 2 } else { 1 };
    RadialOperator::new(q0, q1, depth, unit, k).power_iteration(iters)
}

/// Power-iteration estimates at a ladder of depths, extrapolated against
/// the leading `1/(depth + 2)^2` Dirichlet truncation error.
pub fn radial_norm_extrapolated(q0: u32, q1: u32, k: i64, depths: &[u32], iters: usize) -> f64 {
    assert!(depths.len() >= 2);
    let unit = if q0 != q1 { 2 } else { 1 };
    let pts: Vec<(f64, f64)> = depths
        .iter()
        .map(|&d| {
            let est = RadialOperator::new(q0, q1, d, unit, k).power_iteration(iters);
            let x = 1.0 / ((d as f64 + 2.0) * (d as f64 + 2.0));
            (x, est)
        })
        .collect();
    // Least-squares fit est = rho - c x; the intercept is the estimate.
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (sy - slope * sx) / n
}
