//! Discrete estimate of the confined Willmore minimum w(a).
//!
//! A profile is a polyline from one axis point to the other. Meridian
//! curvature comes from circumscribed circles of node triples, parallel
//! curvature from the chord tangent, and areas from dual frustum bands, so
//! that W ≈ Σ ¼H²ᵢAᵢ. The penalized objective
//!
//! ```text
//! E = W + μ(area − a)² + μ Σ max(0, |pᵢ| − 1)² wᵢ
//! ```
//!
//! is minimized by L-BFGS with Armijo backtracking, using central finite
//! differences of the local energy for the gradient and penalty continuation
//! in μ.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bump::{bump_surface, bump_upper_bound, BumpSpec};
use crate::error::{Error, Result};
use crate::geometry::{Orientation, ProfileSegment, ProfileSpline, RevolutionSurface};
use crate::neck::{build_double_sphere, double_sphere_skeleton, segments_cross};
use crate::quadrature::Tolerance;

pub const DEFAULT_NODES: usize = 400;

/// Quadrature tolerance for the spline cross-check.
const SPLINE_TOL: f64 = 1e-8;

/// Nodes closer than this are treated as coincident.
const COINCIDENT: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteProfile {
    nodes: Vec<[f64; 2]>,
}

impl DiscreteProfile {
    pub fn new(nodes: Vec<[f64; 2]>) -> Result<Self> {
        let p = Self::unchecked(nodes)?;
        if p.self_intersects() {
            return Err(Error::DegenerateProfile("profile polyline intersects itself".into()));
        }
        Ok(p)
    }

    fn unchecked(mut nodes: Vec<[f64; 2]>) -> Result<Self> {
        let n = nodes.len();
        if n < 4 {
            return Err(Error::DegenerateProfile(format!("{n} nodes, need at least 4")));
        }
        if nodes[0][0].abs() > 1e-12 || nodes[n - 1][0].abs() > 1e-12 {
            return Err(Error::DegenerateProfile("end nodes must lie on the axis".into()));
        }
        nodes[0][0] = 0.0;
        nodes[n - 1][0] = 0.0;
        if let Some(i) = (1..n - 1).find(|&i| !(nodes[i][0] > 0.0)) {
            return Err(Error::DegenerateProfile(format!("node {i} has x = {} ≤ 0", nodes[i][0])));
        }
        if let Some(i) = (0..n - 1).find(|&i| dist(nodes[i], nodes[i + 1]) < COINCIDENT) {
            return Err(Error::DegenerateProfile(format!("nodes {i} and {} coincide", i + 1)));
        }
        Ok(Self { nodes })
    }

    /// Half great circle of a sphere, south pole first.
    pub fn sphere(radius: f64, center_y: f64, segments: usize) -> Result<Self> {
        let nodes = (0..=segments)
            .map(|i| {
                let th = -PI / 2.0 + PI * i as f64 / segments as f64;
                let (s, c) = th.sin_cos();
                [if i == 0 || i == segments { 0.0 } else { radius * c }, center_y + radius * s]
            })
            .collect();
        Self::new(nodes)
    }

    /// Resamples a closed profile at uniform arclength.
    pub fn from_surface(surface: &RevolutionSurface, segments: usize) -> Result<Self> {
        if !surface.is_closed() {
            return Err(Error::DegenerateProfile("surface must be closed".into()));
        }
        let dense = surface.sample(4096);
        Self::new(resample_polyline(&dense, segments))
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    /// Number of edges N.
    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Dual arclength per node.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { dist(self.nodes[i - 1], self.nodes[i]) } else { 0.0 };
                let r = if i + 1 < n { dist(self.nodes[i], self.nodes[i + 1]) } else { 0.0 };
                0.5 * (l + r)
            })
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.nodes.windows(2).map(|w| dist(w[0], w[1])).sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.nodes.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max)
    }

    /// Ratio of the longest to the shortest edge.
    pub fn edge_ratio(&self) -> f64 {
        let (lo, hi) = self
            .nodes
            .windows(2)
            .map(|w| dist(w[0], w[1]))
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), l| (lo.min(l), hi.max(l)));
        hi / lo
    }

    pub fn to_spline(&self) -> Result<ProfileSpline> {
        ProfileSpline::fit(&self.nodes)
    }

    pub fn to_surface(&self) -> Result<RevolutionSurface> {
        RevolutionSurface::new(
            "probe",
            vec![ProfileSegment::Spline(Box::new(self.to_spline()?))],
            Orientation::InteriorLeft,
        )
    }

    /// Same number of nodes, equally spaced in arclength along the spline fit.
    pub fn redistribute(&self) -> Result<Self> {
        let spline = self.to_spline()?;
        let [a, b] = spline.range();
        let m = 16 * self.segments();
        let dense: Vec<[f64; 2]> = (0..=m)
            .map(|i| {
                let v = spline.eval(a + (b - a) * i as f64 / m as f64);
                [v[0], v[1]]
            })
            .collect();
        Self::new(resample_polyline(&dense, self.segments()))
    }

    /// True when two non-adjacent edges cross, using a uniform grid hash.
    pub fn self_intersects(&self) -> bool {
        polyline_crosses(&self.nodes)
    }

    /// Smallest distance between nodes on parts of the profile that are more
    /// than two edges apart and not joined by a short path along it.
    pub fn min_branch_distance(&self) -> f64 {
        let n = self.nodes.len();
        let mut arclen = vec![0.0; n];
        for i in 1..n {
            arclen[i] = arclen[i - 1] + dist(self.nodes[i - 1], self.nodes[i]);
        }
        let cell = self.length() / self.segments() as f64 * 4.0;
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in self.nodes.iter().enumerate() {
            grid.entry(cell_of(*p, cell)).or_default().push(i);
        }
        let mut best = f64::INFINITY;
        let mut check = |i: usize, j: usize| {
            let d = dist(self.nodes[i], self.nodes[j]);
            // nodes along the same branch are within ~ their arclength apart
            if (arclen[i] - arclen[j]).abs() > 3.0 * d.max(cell) {
                best = best.min(d);
            }
        };
        for (i, p) in self.nodes.iter().enumerate() {
            let (cx, cy) = cell_of(*p, cell);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = grid.get(&(cx + dx, cy + dy)) {
                        for &j in list {
                            if j > i {
                                check(i, j);
                            }
                        }
                    }
                }
            }
        }
        if best.is_finite() {
            return best;
        }
        // no close pairs: fall back to a coarse global scan
        let stride = (n / 200).max(1);
        let idx: Vec<usize> = (0..n).step_by(stride).collect();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                let d = dist(self.nodes[i], self.nodes[j]);
                if (arclen[i] - arclen[j]).abs() > 3.0 * d {
                    best = best.min(d);
                }
            }
        }
        best
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn cell_of(p: [f64; 2], cell: f64) -> (i64, i64) {
    ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
}

fn polyline_crosses(nodes: &[[f64; 2]]) -> bool {
    let n = nodes.len();
    if n < 4 {
        return false;
    }
    let mean = nodes.windows(2).map(|w| dist(w[0], w[1])).sum::<f64>() / (n - 1) as f64;
    let cell = mean * 2.0;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for e in 0..n - 1 {
        let (a, b) = (nodes[e], nodes[e + 1]);
        let (x0, y0) = cell_of([a[0].min(b[0]), a[1].min(b[1])], cell);
        let (x1, y1) = cell_of([a[0].max(b[0]), a[1].max(b[1])], cell);
        if (x1 - x0 + 1) * (y1 - y0 + 1) > 4096 {
            // pathological long edge: brute force
            for f in 0..n - 1 {
                if f + 1 < e || f > e + 1 {
                    if segments_cross(a, b, nodes[f], nodes[f + 1]) {
                        return true;
                    }
                }
            }
            continue;
        }
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                let list = grid.entry((cx, cy)).or_default();
                for &f in list.iter() {
                    if f + 1 < e && segments_cross(a, b, nodes[f], nodes[f + 1]) {
                        return true;
                    }
                }
                list.push(e);
            }
        }
    }
    false
}

fn resample_polyline(dense: &[[f64; 2]], segments: usize) -> Vec<[f64; 2]> {
    let mut cum = Vec::with_capacity(dense.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in dense.windows(2) {
        acc += dist(w[0], w[1]);
        cum.push(acc);
    }
    let total = acc;
    let mut out = Vec::with_capacity(segments + 1);
    let mut k = 0;
    for i in 0..=segments {
        let s = total * i as f64 / segments as f64;
        while k + 2 < cum.len() && cum[k + 1] < s {
            k += 1;
        }
        let span = cum[k + 1] - cum[k];
        let f = if span > 0.0 { ((s - cum[k]) / span).clamp(0.0, 1.0) } else { 0.0 };
        out.push([
            dense[k][0] + f * (dense[k + 1][0] - dense[k][0]),
            dense[k][1] + f * (dense[k + 1][1] - dense[k][1]),
        ]);
    }
    out[0] = dense[0];
    out[segments] = dense[dense.len() - 1];
    out[0][0] = 0.0;
    out[segments][0] = 0.0;
    out
}

/// Signed curvature of the circle through a, b, c (positive for a left turn).
fn circumcurvature(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1]];
    let v = [c[0] - b[0], c[1] - b[1]];
    let cross = u[0] * v[1] - u[1] * v[0];
    if cross == 0.0 {
        return 0.0;
    }
    2.0 * cross / (dist(a, b) * dist(b, c) * dist(a, c))
}

/// Per-node contributions: (¼H²A, A, confinement excess² · w).
fn node_terms(nodes: &[[f64; 2]], i: usize) -> [f64; 3] {
    let n = nodes.len();
    let p = nodes[i];
    let (prev, next) = if i == 0 {
        let q = nodes[1];
        ([-q[0], q[1]], q)
    } else if i == n - 1 {
        let q = nodes[n - 2];
        (q, [-q[0], q[1]])
    } else {
        (nodes[i - 1], nodes[i + 1])
    };
    let k1 = circumcurvature(prev, p, next);
    let k2 = if i == 0 || i == n - 1 {
        k1
    } else {
        let t = [next[0] - prev[0], next[1] - prev[1]];
        t[1] / t[0].hypot(t[1]) / p[0]
    };
    let h = k1 + k2;
    let mut area = 0.0;
    let mut weight = 0.0;
    if i > 0 {
        let q = nodes[i - 1];
        let m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
        let l = dist(p, m);
        area += PI * (p[0] + m[0]) * l;
        weight += l;
    }
    if i + 1 < n {
        let q = nodes[i + 1];
        let m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
        let l = dist(p, m);
        area += PI * (p[0] + m[0]) * l;
        weight += l;
    }
    let excess = (p[0].hypot(p[1]) - 1.0).max(0.0);
    [0.25 * h * h * area, area, excess * excess * weight]
}

fn totals(nodes: &[[f64; 2]]) -> [f64; 3] {
    let mut t = [0.0; 3];
    for i in 0..nodes.len() {
        let v = node_terms(nodes, i);
        for k in 0..3 {
            t[k] += v[k];
        }
    }
    t
}

/// (area, willmore) of the discrete profile.
pub fn discrete_energy(profile: &DiscreteProfile) -> (f64, f64) {
    let t = totals(&profile.nodes);
    (t[1], t[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub nodes: usize,
    pub fd_step: f64,
    pub penalties: Vec<f64>,
    pub max_iterations: usize,
    pub grad_tol: f64,
    pub redistribute_every: usize,
    /// Redistribution only happens when the edge-length ratio exceeds this.
    pub redistribute_ratio: f64,
    pub armijo_c: f64,
    pub memory: usize,
    /// A stage also ends when the objective drops by less than
    /// `stall_rel · |E|` over `stall_window` iterations.
    pub stall_window: usize,
    pub stall_rel: f64,
    /// A stalled stage counts as converged only below this gradient norm.
    pub stall_grad: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_NODES,
            fd_step: 1e-6,
            penalties: vec![1e2, 1e3, 1e4, 1e5],
            max_iterations: 20_000,
            grad_tol: 1e-6,
            redistribute_every: 50,
            redistribute_ratio: 2.0,
            armijo_c: 1e-4,
            memory: 10,
            stall_window: 200,
            stall_rel: 1e-10,
            stall_grad: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Gradient,
    Stagnation,
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub mu: f64,
    pub iterations: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub stop: StopReason,
    /// Accepted steps never increased the objective within this stage.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub a_target: f64,
    pub profile: DiscreteProfile,
    pub w_est: f64,
    /// Willmore energy of the spline fit, by quadrature; `None` when the fit
    /// cannot be integrated.
    pub w_spline: Option<f64>,
    pub area: f64,
    pub area_error: f64,
    /// max |p| − 1 over the nodes.
    pub confinement_violation: f64,
    pub iterations: usize,
    pub converged: bool,
    pub min_branch_distance: f64,
    pub stages: Vec<StageSummary>,
}

struct Objective {
    a_target: f64,
    mu: f64,
}

impl Objective {
    fn value(&self, t: [f64; 3]) -> f64 {
        let d = t[1] - self.a_target;
        t[0] + self.mu * d * d + self.mu * t[2]
    }

    /// Central finite-difference gradient with respect to displacements of
    /// each node along its frozen normal.
    fn gradient(&self, nodes: &mut [[f64; 2]], normals: &[[f64; 2]], base: [f64; 3], h: f64) -> Vec<f64> {
        let n = nodes.len();
        let d0 = base[1] - self.a_target;
        let local = |nodes: &[[f64; 2]], i: usize| {
            let mut s = [0.0; 3];
            for j in i.saturating_sub(1)..=(i + 1).min(n - 1) {
                let v = node_terms(nodes, j);
                for k in 0..3 {
                    s[k] += v[k];
                }
            }
            s
        };
        (0..n)
            .map(|i| {
                let before = local(nodes, i);
                let orig = nodes[i];
                let mut delta = [0.0; 2];
                for (k, sign) in [1.0, -1.0].iter().enumerate() {
                    nodes[i] = [orig[0] + sign * h * normals[i][0], orig[1] + sign * h * normals[i][1]];
                    let after = local(nodes, i);
                    let dw = after[0] - before[0];
                    let da = after[1] - before[1];
                    let dc = after[2] - before[2];
                    delta[k] = dw + self.mu * da * (2.0 * d0 + da) + self.mu * dc;
                }
                nodes[i] = orig;
                (delta[0] - delta[1]) / (2.0 * h)
            })
            .collect()
    }
}

/// Unit normals from chord tangents; vertical at the poles.
fn node_normals(nodes: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                [0.0, -1.0]
            } else if i == n - 1 {
                [0.0, 1.0]
            } else {
                let t = [nodes[i + 1][0] - nodes[i - 1][0], nodes[i + 1][1] - nodes[i - 1][1]];
                let l = t[0].hypot(t[1]);
                [t[1] / l, -t[0] / l]
            }
        })
        .collect()
}

fn apply_step(nodes: &[[f64; 2]], normals: &[[f64; 2]], dir: &[f64], step: f64) -> Vec<[f64; 2]> {
    nodes
        .iter()
        .zip(normals)
        .zip(dir)
        .map(|((p, nu), d)| [p[0] + step * d * nu[0], p[1] + step * d * nu[1]])
        .collect()
}

fn admissible(nodes: &[[f64; 2]]) -> bool {
    let n = nodes.len();
    (1..n - 1).all(|i| nodes[i][0] > 0.0)
        && (0..n - 1).all(|i| dist(nodes[i], nodes[i + 1]) > COINCIDENT)
        && !polyline_crosses(nodes)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

type Pair = (Vec<f64>, Vec<f64>, f64);

/// L-BFGS two-loop recursion for the direction −H·g.
fn lbfgs_direction(g: &[f64], hist: &[Pair]) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(hist.len());
    for (s, y, rho) in hist.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = hist.last() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), a) in hist.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter().map(|v| -v).collect()
}

/// Penalized descent towards a profile of area `a_target` inside the unit ball.
///
/// Nodes move along normals that are frozen between rebase points every
/// `redistribute_every` iterations; at a rebase the nodes are respaced
/// uniformly if their edge lengths have drifted beyond `redistribute_ratio`.
pub fn minimize(a_target: f64, init: Option<DiscreteProfile>, config: &ProbeConfig) -> Result<ProbeResult> {
    if !(a_target >= 4.0 * PI - 1e-12 && a_target <= 16.0 * PI + 1e-12) {
        return Err(Error::Range(format!("target area {a_target} outside [4π, 16π]")));
    }
    if config.penalties.is_empty() || config.nodes < 4 {
        return Err(Error::Range("probe needs at least one penalty and four nodes".into()));
    }
    let profile = match init {
        Some(p) => p,
        None => DiscreteProfile::sphere((a_target / (4.0 * PI)).sqrt().min(1.0), 0.0, config.nodes)?,
    };
    let mut nodes = profile.nodes;
    let mut stages = Vec::new();
    let mut iterations = 0usize;
    let per_stage = config.max_iterations / config.penalties.len();
    for &mu in &config.penalties {
        let obj = Objective { a_target, mu };
        let mut normals = node_normals(&nodes);
        let mut hist: Vec<Pair> = Vec::new();
        let mut t = totals(&nodes);
        let mut e = obj.value(t);
        let mut g = obj.gradient(&mut nodes, &normals, t, config.fd_step);
        let mut gnorm = norm(&g);
        let mut monotone = true;
        let mut stop = StopReason::IterationLimit;
        let mut it = 0;
        let mut recent = std::collections::VecDeque::new();
        while it < per_stage {
            if gnorm <= config.grad_tol {
                stop = StopReason::Gradient;
                break;
            }
            recent.push_back(e);
            if recent.len() > config.stall_window {
                let old = recent.pop_front().unwrap_or(e);
                if old - e <= config.stall_rel * e.abs().max(1.0) {
                    stop = StopReason::Stagnation;
                    break;
                }
            }
            if it > 0 && it % config.redistribute_every == 0 {
                let current = DiscreteProfile { nodes: nodes.clone() };
                if current.edge_ratio() > config.redistribute_ratio {
                    if let Ok(p) = current.redistribute() {
                        nodes = p.nodes;
                        t = totals(&nodes);
                        e = obj.value(t);
                        recent.clear();
                    }
                }
                normals = node_normals(&nodes);
                hist.clear();
                g = obj.gradient(&mut nodes, &normals, t, config.fd_step);
                gnorm = norm(&g);
            }
            let mut dir = lbfgs_direction(&g, &hist);
            let mut slope = dot(&g, &dir);
            if !(slope < 0.0) {
                hist.clear();
                dir = g.iter().map(|v| -v).collect();
                slope = -gnorm * gnorm;
            }
            let mut step = if hist.is_empty() { (1e-3 / gnorm).min(1.0) } else { 1.0 };
            let mut accepted = None;
            for _ in 0..60 {
                let trial = apply_step(&nodes, &normals, &dir, step);
                if admissible(&trial) {
                    let tt = totals(&trial);
                    let et = obj.value(tt);
                    if et <= e + config.armijo_c * step * slope {
                        accepted = Some((trial, tt, et));
                        break;
                    }
                }
                step *= 0.5;
            }
            let Some((mut trial, tt, et)) = accepted else {
                if hist.is_empty() {
                    stop = StopReason::Stagnation;
                    break;
                }
                hist.clear();
                it += 1;
                continue;
            };
            if et > e {
                monotone = false;
            }
            let gt = obj.gradient(&mut trial, &normals, tt, config.fd_step);
            let s: Vec<f64> = dir.iter().map(|d| d * step).collect();
            let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-300 {
                hist.push((s, y, 1.0 / sy));
                if hist.len() > config.memory {
                    hist.remove(0);
                }
            }
            nodes = trial;
            t = tt;
            e = et;
            g = gt;
            gnorm = norm(&g);
            it += 1;
        }
        iterations += it;
        stages.push(StageSummary {
            mu,
            iterations: it,
            objective: e,
            grad_norm: gnorm,
            stop,
            monotone,
        });
    }
    let profile = DiscreteProfile::unchecked(nodes)?;
    let (area, w_est) = discrete_energy(&profile);
    let w_spline = profile
        .to_surface()
        .and_then(|s| s.report_with(Tolerance::uniform(SPLINE_TOL)))
        .map(|r| r.willmore)
        .ok();
    let converged = stages.last().is_some_and(|s| match s.stop {
        StopReason::Gradient => true,
        StopReason::Stagnation => s.grad_norm <= config.stall_grad,
        StopReason::IterationLimit => false,
    });
    Ok(ProbeResult {
        a_target,
        w_est,
        w_spline,
        area,
        area_error: area - a_target,
        confinement_violation: profile.max_radius() - 1.0,
        iterations,
        converged,
        min_branch_distance: profile.min_branch_distance(),
        stages,
        profile,
    })
}

/// Starting profiles drawn from the constructions: the default sphere, the
/// bump surface of area `a` when reachable, neck skeletons at r = 0.7 and
/// r = 0.95 shrunk to area at most `a`, and the double sphere of area 8π
/// at r = 0.99 shrunk likewise.
pub fn construction_inits(a: f64, segments: usize) -> Vec<(String, DiscreteProfile)> {
    let mut out = Vec::new();
    if let Ok(p) = DiscreteProfile::sphere((a / (4.0 * PI)).sqrt().min(1.0), 0.0, segments) {
        out.push(("sphere".to_string(), p));
    }
    if let Ok(b) = bump_upper_bound(a) {
        if let Ok(p) = BumpSpec::unchecked(b.s, b.t)
            .and_then(|spec| bump_surface(&spec))
            .and_then(|s| DiscreteProfile::from_surface(&s, segments))
        {
            out.push((format!("bump(s={:.4})", b.s), p));
        }
    }
    let mut fitted = |label: String, surface: Result<RevolutionSurface>| {
        let p = surface.and_then(|s| {
            let area = s.report()?.area;
            let shrunk = s.dilate((a / area).sqrt().min(1.0))?;
            DiscreteProfile::from_surface(&shrunk, segments)
        });
        if let Ok(p) = p {
            out.push((label, p));
        }
    };
    for r in [0.7, 0.95] {
        fitted(format!("skeleton(r={r})"), double_sphere_skeleton(r).map(|n| n.surface));
    }
    fitted(
        "double_sphere(r=0.99)".to_string(),
        build_double_sphere(0.99, 8.0 * PI, None).map(|n| n.surface),
    );
    out
}

/// Runs [`minimize`] from every construction start and keeps the result with
/// the lowest final objective.
pub fn minimize_multistart(a_target: f64, config: &ProbeConfig) -> Result<(String, ProbeResult)> {
    let mut best: Option<(String, ProbeResult)> = None;
    let mut last_err = None;
    for (label, init) in construction_inits(a_target, config.nodes) {
        match minimize(a_target, Some(init), config) {
            Ok(r) => {
                let better = best.as_ref().is_none_or(|(_, b)| final_objective(&r) < final_objective(b));
                if better {
                    best = Some((label, r));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::Construction("no starting profile".into())))
}

fn final_objective(r: &ProbeResult) -> f64 {
    r.stages.last().map_or(f64::INFINITY, |s| s.objective)
}

/// Outcome of comparing a probe estimate with the bounds a ≤ w(a) ≤ upper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub a: f64,
    pub w_est: f64,
    pub upper: f64,
    pub tol_lower: f64,
    pub tol_upper: f64,
    /// w_est − (a − tol_lower); negative on failure.
    pub lower_margin: f64,
    /// (upper + tol_upper) − w_est; negative on failure.
    pub upper_margin: f64,
    pub pass: bool,
}

/// Discretization error bound used for the lower tolerance: the relative gap
/// between the discrete and spline energies.
pub fn discretization_error(result: &ProbeResult) -> f64 {
    result.w_spline.map_or(f64::INFINITY, |w| (result.w_est - w).abs())
}

pub fn sandwich_check(a: f64, result: &ProbeResult, upper: f64) -> Result<Sandwich> {
    if !result.converged {
        return Err(Error::Range("probe result did not converge".into()));
    }
    let tol_lower = (1e-3 * a).max(discretization_error(result));
    let tol_upper = 1e-6;
    let lower_margin = result.w_est - (a - tol_lower);
    let upper_margin = upper + tol_upper - result.w_est;
    Ok(Sandwich {
        a,
        w_est: result.w_est,
        upper,
        tol_lower,
        tol_upper,
        lower_margin,
        upper_margin,
        pass: lower_margin >= 0.0 && upper_margin >= 0.0,
    })
}
