//! Integral identities and the Willmore–area bound, evaluated by quadrature.
//!
//! With x^⊥ = (p·ν)ν and H⃗ = −Hν, the first-variation identity reads
//!
//! ```text
//! ar(Σ) = W − ¼∫(2 p·ν − H)² − ∫(1 − (p·ν)²) + Σ_∂ 2πx (p·η)
//! ```
//!
//! where the last sum runs over boundary circles with outward conormal η and
//! vanishes on closed surfaces. The area defect identity is
//! `ar − 4π = −∫(1 − (p·ν)² + ½q²)K` with q² = |p|² − (p·ν)².

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ReportResiduals, RevolutionSurface, SurfaceReport, TAU_CONF};
use crate::quadrature::Tolerance;

/// Points per segment for pointwise checks.
pub const POINTWISE_SAMPLES: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub area: f64,
    pub willmore: f64,
    pub residual_first_variation: f64,
    /// W − area; only defined for confined surfaces.
    pub willmore_area_gap: Option<f64>,
    pub residual_area_defect: f64,
    /// ∫K − 4π; closed surfaces only.
    pub residual_gauss_bonnet: Option<f64>,
    /// (W − 4π) − ½∫|Å|²; closed surfaces only.
    pub residual_tracefree: Option<f64>,
    /// max |2|Å|² − (H² − 4K)| / max(1, κ₁² + κ₂²) over sample points.
    pub pointwise_tracefree: f64,
    /// True when some sampled point has K < 0.
    pub has_negative_gauss: bool,
    pub confined: bool,
    pub closed: bool,
}

/// Both sides of the area defect identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaDefect {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Integral terms shared by all identities, computed on one set of nodes.
#[derive(Debug, Clone, Copy)]
struct Terms {
    area: f64,
    willmore: f64,
    gauss: f64,
    tracefree: f64,
    penalty: f64,
    support_defect: f64,
    defect_closed: f64,
    defect_open: f64,
}

fn terms(surface: &RevolutionSurface, tol: Tolerance) -> Result<Terms> {
    let v = surface.integrate_vec(
        |f| {
            let pn = f.support;
            let q2 = (f.radius_sq() - pn * pn).max(0.0);
            let d = 2.0 * pn - f.mean;
            [
                1.0,
                0.25 * f.mean * f.mean,
                f.gauss,
                0.5 * f.tracefree_sq,
                0.25 * d * d,
                1.0 - pn * pn,
                (1.0 - pn * pn + 0.5 * q2) * f.gauss,
                (pn * pn - 0.5 * q2) * f.gauss,
            ]
        },
        tol,
    )?;
    Ok(Terms {
        area: v[0],
        willmore: v[1],
        gauss: v[2],
        tracefree: v[3],
        penalty: v[4],
        support_defect: v[5],
        defect_closed: v[6],
        defect_open: v[7],
    })
}

/// Σ over boundary circles of 2πx (p·η).
fn boundary_term(surface: &RevolutionSurface) -> f64 {
    if surface.is_closed() {
        return 0.0;
    }
    let segs = surface.segments();
    let (first, last) = (&segs[0], &segs[segs.len() - 1]);
    let mut total = 0.0;
    let p = first.start_point();
    let t = first.start_tangent();
    total += 2.0 * PI * p[0] * -(p[0] * t[0] + p[1] * t[1]);
    let p = last.end_point();
    let t = last.end_tangent();
    total += 2.0 * PI * p[0] * (p[0] * t[0] + p[1] * t[1]);
    total
}

fn first_variation_residual(surface: &RevolutionSurface, t: &Terms) -> f64 {
    let rhs = t.willmore - t.penalty - t.support_defect + boundary_term(surface);
    (t.area - rhs).abs()
}

fn area_defect_from(surface: &RevolutionSurface, t: &Terms) -> AreaDefect {
    if surface.is_closed() {
        let lhs = t.area - 4.0 * PI;
        let rhs = -t.defect_closed;
        AreaDefect { lhs, rhs, residual: (lhs - rhs).abs() }
    } else {
        AreaDefect {
            lhs: t.area,
            rhs: t.defect_open,
            residual: (t.area - t.defect_open).abs(),
        }
    }
}

/// |area − (W − ¼∫|H⃗ + 2x^⊥|² − ∫(1 − |x^⊥|²) + boundary)|.
pub fn verify_first_variation(surface: &RevolutionSurface) -> Result<f64> {
    verify_first_variation_with(surface, Tolerance::default())
}

pub fn verify_first_variation_with(surface: &RevolutionSurface, tol: Tolerance) -> Result<f64> {
    let t = terms(surface, tol)?;
    Ok(first_variation_residual(surface, &t))
}

/// W − area for a confined surface.
pub fn willmore_area_gap(surface: &RevolutionSurface) -> Result<f64> {
    willmore_area_gap_with(surface, Tolerance::default())
}

pub fn willmore_area_gap_with(surface: &RevolutionSurface, tol: Tolerance) -> Result<f64> {
    let max_radius = surface.max_radius();
    if max_radius > 1.0 + TAU_CONF {
        return Err(Error::NotConfined { max_radius });
    }
    let r = surface.report_with(tol)?;
    Ok(r.willmore - r.area)
}

/// Area defect identity. On open surfaces the form ar = ∫((p·ν)² − ½q²)K is used.
pub fn verify_area_defect(surface: &RevolutionSurface) -> Result<AreaDefect> {
    let t = terms(surface, Tolerance::default())?;
    Ok(area_defect_from(surface, &t))
}

/// Largest normalized deviation of 2|Å|² from H² − 4K over sample points,
/// and whether a point with K < 0 was seen.
pub fn pointwise_tracefree(surface: &RevolutionSurface, samples: usize) -> Result<(f64, bool)> {
    let mut worst = 0.0f64;
    let mut negative = false;
    for (i, seg) in surface.segments().iter().enumerate() {
        let [a, b] = seg.range();
        for k in 0..=samples {
            let t = a + (b - a) * k as f64 / samples as f64;
            let f = surface.frame(i, t)?;
            let h2 = f.mean * f.mean;
            let scale = f.kappa_meridian.powi(2) + f.kappa_parallel.powi(2);
            let dev = (2.0 * f.tracefree_sq - (h2 - 4.0 * f.gauss)).abs() / scale.max(1.0);
            worst = worst.max(dev);
            negative |= f.gauss < 0.0;
        }
    }
    Ok((worst, negative))
}

/// Runs every identity on one set of quadrature nodes.
pub fn verify_all(surface: &RevolutionSurface) -> Result<IdentityReport> {
    verify_all_with(surface, Tolerance::default())
}

pub fn verify_all_with(surface: &RevolutionSurface, tol: Tolerance) -> Result<IdentityReport> {
    let t = terms(surface, tol)?;
    let closed = surface.is_closed();
    let confined = surface.max_radius() <= 1.0 + TAU_CONF;
    let (pointwise, has_negative_gauss) = pointwise_tracefree(surface, POINTWISE_SAMPLES)?;
    let out = IdentityReport {
        area: t.area,
        willmore: t.willmore,
        residual_first_variation: first_variation_residual(surface, &t),
        willmore_area_gap: confined.then_some(t.willmore - t.area),
        residual_area_defect: area_defect_from(surface, &t).residual,
        residual_gauss_bonnet: closed.then_some(t.gauss - 4.0 * PI),
        residual_tracefree: closed.then_some((t.willmore - 4.0 * PI) - t.tracefree),
        pointwise_tracefree: pointwise,
        has_negative_gauss,
        confined,
        closed,
    };
    let finite = [out.residual_first_variation, out.residual_area_defect, out.pointwise_tracefree]
        .iter()
        .chain(out.residual_gauss_bonnet.iter())
        .chain(out.residual_tracefree.iter())
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::QuadratureFailure {
            estimate: f64::NAN,
            error: f64::NAN,
        });
    }
    Ok(out)
}

/// A surface report with identity residuals attached.
pub fn report_with_residuals(surface: &RevolutionSurface, tol: Tolerance) -> Result<SurfaceReport> {
    let mut report = surface.report_with(tol)?;
    let ids = verify_all_with(surface, tol)?;
    report.residuals = Some(ReportResiduals {
        first_variation: ids.residual_first_variation,
        area_defect: Some(ids.residual_area_defect),
        gauss_bonnet: ids.residual_gauss_bonnet,
        tracefree: ids.residual_tracefree,
    });
    Ok(report)
}
