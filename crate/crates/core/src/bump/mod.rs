//! Inward bump on the north pole of the unit sphere.
//!
//! The upper hemisphere is replaced, over the disk of radius `s`, by the graph
//! ψ(ρ) = √(1−ρ²) − t·η(ρ/s) with `t = α s²`. For α above the threshold
//! α* the indentation increases the area by ≈ 2π α s⁴ C_η while the mean
//! curvature stays bounded, which makes W − 4π grow like √(a − 4π).

pub mod eta;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BumpGraph, Orientation, ProfileSegment, RevolutionSurface, Side};
use crate::quadrature::{integrate, integrate_vec, Tolerance};
use crate::roots::bisect;
use eta::EtaKind;

/// Largest support scale of the bump family.
pub const S_MAX: f64 = 0.3;
/// Largest support scale used when building upper-bound surfaces.
pub const S_UPPER: f64 = 0.8;

/// The two η-integrals of the leading-order area expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaMoments {
    /// ∫₀¹ ϱ² η′(ϱ) dϱ (negative).
    pub linear: f64,
    /// ∫₀¹ (ϱ/2) η′(ϱ)² dϱ.
    pub quadratic: f64,
}

impl EtaMoments {
    pub fn compute(eta: EtaKind) -> Self {
        let tol = Tolerance::uniform(1e-13);
        let linear = integrate(|u| Ok(u * u * eta.eval(u).1), 0.0, 1.0, tol).expect("smooth integrand");
        let quadratic = integrate(|u| Ok(0.5 * u * eta.eval(u).1.powi(2)), 0.0, 1.0, tol).expect("smooth integrand");
        Self { linear, quadratic }
    }

    /// ∫₀¹ (ϱ²η′ + α(ϱ/2)η′²) dϱ.
    pub fn bracket(&self, alpha: f64) -> f64 {
        self.linear + alpha * self.quadratic
    }

    /// Ratio at which the bracket vanishes.
    pub fn alpha_star(&self) -> f64 {
        self.linear.abs() / self.quadratic
    }
}

/// α* for the given profile.
pub fn compute_alpha_star(eta: EtaKind) -> f64 {
    EtaMoments::compute(eta).alpha_star()
}

/// Parameters of one member of the bump family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub s: f64,
    pub t: f64,
    pub alpha: f64,
    pub eta: EtaKind,
    pub alpha_star: f64,
    /// Bracket value at `alpha`; area excess ≈ 2π α s⁴ C_η.
    pub c_eta: f64,
}

impl BumpSpec {
    /// Validated spec with `t = alpha * s²`.
    pub fn new(s: f64, alpha: f64) -> Result<Self> {
        if !(s > 0.0 && s <= S_MAX) {
            return Err(Error::Range(format!("support scale s = {s} outside (0, {S_MAX}]")));
        }
        Self::unchecked(s, alpha * s * s)
    }

    /// Spec with explicit amplitude; only requires 0 < s < 1 and t < t₀.
    pub fn unchecked(s: f64, t: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Range(format!("support scale s = {s} outside (0, 1)")));
        }
        let limit = amplitude_limit(s, EtaKind::StdBump);
        if !(t >= 0.0) || t >= limit {
            return Err(Error::Amplitude {
                t,
                reason: format!("graph must stay above the equator (t₀ = {limit:.6})"),
            });
        }
        let m = EtaMoments::compute(EtaKind::StdBump);
        let alpha = t / (s * s);
        Ok(Self {
            s,
            t,
            alpha,
            eta: EtaKind::StdBump,
            alpha_star: m.alpha_star(),
            c_eta: m.bracket(alpha),
        })
    }

    pub fn graph(&self) -> BumpGraph {
        BumpGraph {
            s: self.s,
            t: self.t,
            eta: self.eta,
        }
    }

    /// Leading-order area excess 2π α s⁴ C_η.
    pub fn asymptotic_area_excess(&self) -> f64 {
        2.0 * PI * self.alpha * self.s.powi(4) * self.c_eta
    }
}

/// Largest amplitude t₀ keeping ψ > 0 on [0, s], found on a fine grid.
pub fn amplitude_limit(s: f64, eta: EtaKind) -> f64 {
    let n = 10_000;
    (0..n)
        .map(|i| {
            let rho = s * i as f64 / n as f64;
            let e = eta.eval(rho / s).0;
            if e > 0.0 {
                (1.0 - rho * rho).sqrt() / e
            } else {
                f64::INFINITY
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Unit sphere with the bump grown into its north pole.
pub fn build_bump_sphere(s: f64, alpha: f64) -> Result<RevolutionSurface> {
    bump_surface(&BumpSpec::new(s, alpha)?)
}

/// Surface for an already validated spec.
pub fn bump_surface(spec: &BumpSpec) -> Result<RevolutionSurface> {
    let theta_s = spec.s.acos();
    let segments = vec![
        ProfileSegment::arc([0.0, 0.0], 1.0, -PI / 2.0, theta_s),
        ProfileSegment::Graph {
            bump: spec.graph(),
            radius: 1.0,
            center_y: 0.0,
            side: Side::Upper,
            rho: [spec.s, 0.0],
        },
    ];
    let surface = RevolutionSurface::new(
        format!("bump(s={}, t={})", spec.s, spec.t),
        segments,
        Orientation::InteriorLeft,
    )?;
    Ok(surface)
}

/// Excess of area and Willmore energy of the bumped cap over the spherical cap.
///
/// Both are integrated in difference form over [0, s], so small excesses keep
/// their relative accuracy.
pub fn cap_excess(bump: &BumpGraph, tol: Tolerance) -> Result<(f64, f64)> {
    let s = bump.s;
    let ts = bump.t / s;
    let [da, dw] = integrate_vec(
        |rho| {
            let (_, e1, _) = bump.eta.eval(rho / s);
            let w = (1.0 - rho * rho).sqrt();
            let g0 = 1.0 / w;
            // g² − g₀² = 2ρ/√(1−ρ²)·(t/s)η′ + (t/s)²η′²
            let dg2 = 2.0 * rho / w * ts * e1 + ts * ts * e1 * e1;
            let g = (g0 * g0 + dg2).sqrt();
            let dg = dg2 / (g + g0);
            let h = graph_mean_curvature(bump, rho);
            // ¼H²g − g₀ = g(¼H² − 1) + (g − g₀)
            let dwill = g * (0.25 * h * h - 1.0) + dg;
            Ok([2.0 * PI * rho * dg, 2.0 * PI * rho * dwill])
        },
        0.0,
        s,
        tol,
    )?;
    Ok((da, dw))
}

/// Mean curvature of the graph, upward normal, from ψ′ and ψ″.
fn graph_mean_curvature(bump: &BumpGraph, rho: f64) -> f64 {
    let (_, d1, d2) = bump.psi(rho);
    let g2 = 1.0 + d1 * d1;
    let g = g2.sqrt();
    if rho > 0.0 {
        -(d2 / (g2 * g) + d1 / (rho * g))
    } else {
        -2.0 * d2
    }
}

/// a(s) − 4π for t = α s².
pub fn area_excess(s: f64, alpha: f64) -> Result<f64> {
    let spec = BumpSpec::new(s, alpha)?;
    Ok(cap_excess(&spec.graph(), Tolerance::uniform(1e-13))?.0)
}

/// Largest |H| over the bumped cap, sampled and polished.
pub fn max_abs_mean_curvature(spec: &BumpSpec) -> f64 {
    let g = spec.graph();
    let n = 4000;
    let f = |rho: f64| graph_mean_curvature(&g, rho).abs();
    let mut best = (0.0, 0usize);
    for i in 0..=n {
        let v = f(spec.s * i as f64 / n as f64);
        if v > best.0 {
            best = (v, i);
        }
    }
    let h = spec.s / n as f64;
    let mut l = (h * (best.1 as f64 - 1.0)).max(0.0);
    let mut r = (h * (best.1 as f64 + 1.0)).min(spec.s);
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let m1 = r - gr * (r - l);
        let m2 = l + gr * (r - l);
        if f(m1) < f(m2) {
            l = m1;
        } else {
            r = m2;
        }
    }
    best.0.max(f(0.5 * (l + r)))
}

/// One row of a bump sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpRow {
    pub s: f64,
    pub t: f64,
    pub area: f64,
    pub area_excess: f64,
    pub willmore: f64,
    pub willmore_excess: f64,
    /// Local log-log slope against the previous row; NaN on the first row.
    pub slope_partial: f64,
    pub max_abs_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSweep {
    pub alpha: f64,
    pub rows: Vec<BumpRow>,
    /// Least-squares slope of log(W − 4π) against log(a − 4π).
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Evaluates the family at each `s` (sorted ascending) for fixed α.
pub fn sweep_bump(s_list: &[f64], alpha: f64) -> Result<BumpSweep> {
    let mut s_sorted = s_list.to_vec();
    s_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut rows: Vec<BumpRow> = Vec::with_capacity(s_sorted.len());
    for &s in &s_sorted {
        let spec = BumpSpec::new(s, alpha)?;
        let (da, dw) = cap_excess(&spec.graph(), Tolerance::uniform(1e-13))?;
        let slope_partial = match rows.last() {
            Some(prev) => (dw.ln() - prev.willmore_excess.ln()) / (da.ln() - prev.area_excess.ln()),
            None => f64::NAN,
        };
        rows.push(BumpRow {
            s,
            t: spec.t,
            area: 4.0 * PI + da,
            area_excess: da,
            willmore: 4.0 * PI + dw,
            willmore_excess: dw,
            slope_partial,
            max_abs_mean: max_abs_mean_curvature(&spec),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.area_excess.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.willmore_excess.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(BumpSweep {
        alpha,
        rows,
        slope,
        intercept,
        r_squared,
    })
}

/// Ordinary least squares y ≈ slope·x + intercept, with R².
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, intercept, r2)
}

/// Log-spaced grid of `n` scales between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// A bump surface with area exactly `a` and its Willmore energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpBound {
    pub area: f64,
    pub willmore: f64,
    pub s: f64,
    pub t: f64,
}

/// Upper bound on w(a) from a bump surface of area exactly `a`.
///
/// Scales up to [`S_UPPER`] use t = 2α*s²; beyond that the scale is held at
/// [`S_UPPER`] and the amplitude grows.
pub fn bump_upper_bound(a: f64) -> Result<BumpBound> {
    let target = a - 4.0 * PI;
    if target < 0.0 {
        return Err(Error::Range(format!("bump surfaces have area ≥ 4π, requested {a}")));
    }
    if target == 0.0 {
        return Ok(BumpBound {
            area: 4.0 * PI,
            willmore: 4.0 * PI,
            s: 0.0,
            t: 0.0,
        });
    }
    let tol = Tolerance::uniform(1e-13);
    let alpha = 2.0 * compute_alpha_star(EtaKind::StdBump);
    let excess = |s: f64, t: f64| cap_excess(&BumpGraph::new(s, t), tol).map(|v| v.0);
    let top = excess(S_UPPER, alpha * S_UPPER * S_UPPER)?;
    let (s, t) = if target <= top {
        let s = bisect(|s| excess(s, alpha * s * s).map(|v| v - target), 1e-3, S_UPPER, 1e-14)?;
        (s, alpha * s * s)
    } else {
        let t_hi = 0.98 * amplitude_limit(S_UPPER, EtaKind::StdBump);
        if excess(S_UPPER, t_hi)? < target {
            return Err(Error::Range(format!("area {a} beyond the reach of the bump family")));
        }
        let t = bisect(|t| excess(S_UPPER, t).map(|v| v - target), alpha * S_UPPER * S_UPPER, t_hi, 1e-14)?;
        (S_UPPER, t)
    };
    let (da, dw) = cap_excess(&BumpGraph::new(s, t), tol)?;
    Ok(BumpBound {
        area: 4.0 * PI + da,
        willmore: 4.0 * PI + dw,
        s,
        t,
    })
}
