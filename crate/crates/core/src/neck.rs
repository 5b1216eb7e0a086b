//! Two nested spheres joined by a catenoid neck.
//!
//! For an inner radius `r < 1` a small sphere S_{r₁}(x₁, y₁) touching the unit
//! sphere from inside at angle β is joined to the inner sphere S_r by a
//! catenary with waist λ, all junctions tangent. The tangency conditions
//! reduce to F(r, r₁, β) = 0, which is solved by Newton's method with
//! continuation from r = 0.999. Revolving the resulting curve gives the upper
//! half Σ₊; adding the lower unit hemisphere and the lower half of S_r, with a
//! bump tuned to meet the area target, gives a closed surface of area 8π.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bump::eta::EtaKind;
use crate::bump::{amplitude_limit, cap_excess, compute_alpha_star, S_UPPER};
use crate::error::{Error, Result};
use crate::geometry::{Branch, BumpGraph, Orientation, ProfileSegment, RevolutionSurface, Side};
use crate::quadrature::Tolerance;
use crate::roots::bisect;

/// Lower end of the solver's continuation range.
pub const R_MIN: f64 = 0.5;
/// Newton iterations allowed per continuation step.
pub const MAX_NEWTON: usize = 50;
/// Accepted residual |F|.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Continuation start and step.
pub const CONTINUATION_START: f64 = 0.999;
pub const CONTINUATION_STEP: f64 = 0.01;

/// sin²β · arccosh(1/sin β), continued by 0 at β → 0.
fn neck_log_term(beta: f64) -> f64 {
    if beta <= 1e-12 {
        return 0.0;
    }
    let s = beta.sin();
    s * s * (1.0 / s).acosh()
}

/// The tangency map F(r, r₁, β).
pub fn eval_f(r: f64, r1: f64, beta: f64) -> [f64; 2] {
    let (sb, cb) = beta.sin_cos();
    [
        r * cb + 2.0 * r * neck_log_term(beta) - r1 * cb - (1.0 - r1) * sb,
        (r + r1) * sb - (1.0 - r1) * cb,
    ]
}

/// ∂F/∂(r₁, β) as rows [∂F₁, ∂F₂].
pub fn jacobian(r: f64, r1: f64, beta: f64) -> [[f64; 2]; 2] {
    let (sb, cb) = beta.sin_cos();
    let log_term = if beta <= 1e-12 { 0.0 } else { 4.0 * r * sb * cb * (1.0 / sb).acosh() };
    [
        [-cb + sb, -r * sb + log_term - 2.0 * r * sb + r1 * sb - (1.0 - r1) * cb],
        [sb + cb, (r + r1) * cb + (1.0 - r1) * sb],
    ]
}

/// ∂F/∂r.
pub fn d_f_dr(beta: f64) -> [f64; 2] {
    let (sb, cb) = beta.sin_cos();
    [cb + 2.0 * neck_log_term(beta), sb]
}

/// Solved neck parameters for one inner radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeckSolution {
    pub r: f64,
    pub r1: f64,
    pub beta: f64,
    pub x1: f64,
    pub y1: f64,
    pub x0: f64,
    pub y0: f64,
    pub lambda: f64,
    pub residual: f64,
}

impl NeckSolution {
    /// Fills the derived quantities from (r, r₁, β).
    pub fn from_parameters(r: f64, r1: f64, beta: f64) -> Self {
        let (sb, cb) = beta.sin_cos();
        let x1 = (1.0 - r1) * cb;
        let y1 = (1.0 - r1) * sb;
        let x0 = r * sb;
        let lambda = x0 * sb;
        let y0 = 0.5 * (y1 + (r + r1) * cb);
        let f = eval_f(r, r1, beta);
        Self {
            r,
            r1,
            beta,
            x1,
            y1,
            x0,
            y0,
            lambda,
            residual: f[0].hypot(f[1]),
        }
    }

    /// det ∂F/∂(r₁, β) at the solution.
    pub fn jacobian_det(&self) -> f64 {
        let j = jacobian(self.r, self.r1, self.beta);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// Parameter of the catenary junctions, arccosh(x₀/λ).
    pub fn catenary_extent(&self) -> f64 {
        (1.0 / self.beta.sin()).acosh()
    }

    fn check_domain(&self) -> Result<()> {
        if !(self.r1 > 0.0 && self.r1 < 1.0) {
            return Err(Error::Domain(format!("r1 = {} not in (0, 1)", self.r1)));
        }
        if !(self.beta > 0.0 && self.beta < PI / 2.0) {
            return Err(Error::Domain(format!("beta = {} not in (0, π/2)", self.beta)));
        }
        Ok(())
    }
}

/// Newton iteration on (r₁, β) from an initial guess.
pub fn newton(r: f64, guess: (f64, f64)) -> Result<(f64, f64)> {
    let (mut r1, mut beta) = guess;
    let norm = |f: [f64; 2]| f[0].hypot(f[1]);
    let mut res = norm(eval_f(r, r1, beta));
    for _ in 0..MAX_NEWTON {
        if res == 0.0 {
            break;
        }
        let f = eval_f(r, r1, beta);
        let j = jacobian(r, r1, beta);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SolverFailure {
                r,
                r1,
                beta,
                reason: "singular Jacobian".into(),
            });
        }
        let d_r1 = -(j[1][1] * f[0] - j[0][1] * f[1]) / det;
        let d_beta = -(-j[1][0] * f[0] + j[0][0] * f[1]) / det;
        // damp to stay inside 0 < β < π/2 and to decrease |F|
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let nb = beta + step * d_beta;
            let nr = r1 + step * d_r1;
            if nb > 0.0 && nb < PI / 2.0 {
                let nres = norm(eval_f(r, nr, nb));
                if nres < res || (res < RESIDUAL_TOL && nres <= res) {
                    r1 = nr;
                    beta = nb;
                    res = nres;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            // stagnated at the rounding floor
            break;
        }
        if (d_r1.abs() + d_beta.abs()) * step < 1e-17 {
            break;
        }
    }
    if !(res <= RESIDUAL_TOL) {
        return Err(Error::SolverFailure {
            r,
            r1,
            beta,
            reason: format!("residual {res:e} after {MAX_NEWTON} iterations"),
        });
    }
    Ok((r1, beta))
}

/// Linearization at r = 1: r₁ ≈ r, β ≈ (1 − r)/2.
pub fn linear_guess(r: f64) -> (f64, f64) {
    (r, 0.5 * (1.0 - r))
}

/// Solves the tangency system for inner radius `r ∈ (R_MIN, 1)`.
pub fn solve_neck(r: f64) -> Result<NeckSolution> {
    if !(r > R_MIN && r < 1.0) {
        return Err(Error::Domain(format!("inner radius r = {r} outside ({R_MIN}, 1)")));
    }
    let (r1, beta) = if r >= CONTINUATION_START {
        newton(r, linear_guess(r))?
    } else {
        let mut rc = CONTINUATION_START;
        let mut sol = newton(rc, linear_guess(rc))?;
        while rc > r {
            let next = (rc - CONTINUATION_STEP).max(r);
            // first-order predictor along the solution branch
            let j = jacobian(rc, sol.0, sol.1);
            let fr = d_f_dr(sol.1);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let dr1 = -(j[1][1] * fr[0] - j[0][1] * fr[1]) / det;
            let db = -(-j[1][0] * fr[0] + j[0][0] * fr[1]) / det;
            let h = next - rc;
            let guess = (sol.0 + h * dr1, (sol.1 + h * db).max(1e-6));
            sol = newton(next, guess)?;
            rc = next;
        }
        sol
    };
    let out = NeckSolution::from_parameters(r, r1, beta);
    out.check_domain()?;
    Ok(out)
}

/// Closed-form areas of the four profile pieces and the Willmore energy of Σ₊.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeckEnergies {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a_plus: f64,
    pub w_plus: f64,
    /// Willmore energy of Σ₊ with γ₂ revolved as a torus piece.
    pub w_plus_exact: f64,
}

/// ∫ dθ / (a + b cos θ) over [θ₀, θ₁] ⊂ (−π, π), for 0 ≤ a < b and a positive denominator.
fn inverse_cos_integral(a: f64, b: f64, th0: f64, th1: f64) -> f64 {
    let k = (b * b - a * a).sqrt();
    let p = (b + a).sqrt();
    let q = (b - a).sqrt();
    let g = |th: f64| {
        let t = (0.5 * th).tan();
        ((p + q * t) / (p - q * t)).ln() / k
    };
    g(th1) - g(th0)
}

pub fn closed_form_energies(sol: &NeckSolution) -> NeckEnergies {
    let (r, r1) = (sol.r, sol.r1);
    let (sb, cb) = sol.beta.sin_cos();
    let two_pi = 2.0 * PI;
    let a1 = two_pi * sb;
    let a2 = two_pi * (r1 * (1.0 - r1) * (PI / 2.0) * cb + r1 * r1 * (cb - sb));
    let a3 = two_pi * (r * r * sb * sb * cb + r * r * sb * sb * neck_log_term(sol.beta));
    let a4 = two_pi * r * r * cb;
    let w_plus = PI * PI * (1.0 - r1) / r1 * cb + 4.0 * PI * cb;
    let x1 = sol.x1;
    let torus = 2.0 * PI * (cb - sb) + 0.5 * PI * x1 * x1 / r1 * inverse_cos_integral(x1, r1, sol.beta, sol.beta + PI / 2.0);
    let w_plus_exact = a1 + torus + a4 / (r * r);
    NeckEnergies {
        a1,
        a2,
        a3,
        a4,
        a_plus: a1 + a2 + a3 + a4,
        w_plus,
        w_plus_exact,
    }
}

/// Profile pieces γ₁, γ₂, γ₃⁺, γ₃⁻, γ₄ from (1, 0) over the top to (r, 0),
/// scaled by `scale` and reflected in y when `mirrored`.
fn sigma_plus_segments(sol: &NeckSolution) -> Vec<ProfileSegment> {
    let b = sol.beta;
    let u = sol.catenary_extent();
    vec![
        ProfileSegment::arc([0.0, 0.0], 1.0, 0.0, b),
        ProfileSegment::arc([sol.x1, sol.y1], sol.r1, b, b + PI / 2.0),
        ProfileSegment::catenary(sol.lambda, sol.y0, Branch::Plus, u, 0.0),
        ProfileSegment::catenary(sol.lambda, sol.y0, Branch::Minus, 0.0, u),
        ProfileSegment::arc([0.0, 0.0], sol.r, PI / 2.0 - b, 0.0),
    ]
}

fn mirror(seg: &ProfileSegment) -> ProfileSegment {
    match seg {
        ProfileSegment::Arc { center, radius, theta } => ProfileSegment::Arc {
            center: [center[0], -center[1]],
            radius: *radius,
            theta: [-theta[0], -theta[1]],
        },
        ProfileSegment::Catenary { lambda, y0, branch, u } => ProfileSegment::Catenary {
            lambda: *lambda,
            y0: -y0,
            branch: match branch {
                Branch::Plus => Branch::Minus,
                Branch::Minus => Branch::Plus,
            },
            u: *u,
        },
        ProfileSegment::Graph {
            bump,
            radius,
            center_y,
            side,
            rho,
        } => ProfileSegment::Graph {
            bump: *bump,
            radius: *radius,
            center_y: -center_y,
            side: match side {
                Side::Upper => Side::Lower,
                Side::Lower => Side::Upper,
            },
            rho: *rho,
        },
        ProfileSegment::Spline(_) => seg.clone(),
    }
}

fn construction_error(e: Error) -> Error {
    match e {
        Error::Junction { index, reason } => Error::Construction(format!("junction {index}: {reason}")),
        other => other,
    }
}

/// Upper half Σ₊ as an open chain from (1, 0) to (r, 0).
pub fn build_sigma_plus(sol: &NeckSolution) -> Result<RevolutionSurface> {
    sol.check_domain()?;
    RevolutionSurface::open(
        format!("sigma_plus(r={})", sol.r),
        sigma_plus_segments(sol),
        Orientation::InteriorLeft,
    )
    .map_err(construction_error)
}

/// A closed neck surface with its construction data.
#[derive(Debug, Clone, PartialEq)]
pub struct NeckSurface {
    pub surface: RevolutionSurface,
    pub solution: NeckSolution,
    /// Number of nested spheres.
    pub k: usize,
    /// Bump scale and amplitude on the innermost sphere.
    pub bump_s: f64,
    pub bump_t: f64,
    /// Area predicted from closed forms and the bump excess.
    pub predicted_area: f64,
}

/// Tunes a bump on the innermost sphere (radius `inner`) so that the total area
/// reaches `target`, given the area `fixed` of everything else plus the
/// un-bumped inner hemisphere.
fn tune_bump(inner: f64, fixed: f64, target: f64, scale: Option<f64>) -> Result<(f64, f64)> {
    let deficit = (target - fixed) / (inner * inner);
    if deficit < 0.0 {
        return Err(Error::Range(format!(
            "area without bump already exceeds the target by {:e}",
            -deficit * inner * inner
        )));
    }
    if deficit == 0.0 {
        return Ok((scale.unwrap_or(0.1), 0.0));
    }
    let tol = Tolerance::uniform(1e-13);
    let excess = |s: f64, t: f64| cap_excess(&BumpGraph::new(s, t), tol).map(|v| v.0);
    let alpha_star = compute_alpha_star(EtaKind::StdBump);
    let s = match scale {
        Some(s) => s,
        None => {
            let alpha = 2.0 * alpha_star;
            if excess(S_UPPER, alpha * S_UPPER * S_UPPER)? < deficit {
                S_UPPER
            } else {
                bisect(|s| excess(s, alpha * s * s).map(|v| v - deficit), 1e-3, S_UPPER, 1e-14)?
            }
        }
    };
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Range(format!("bump scale {s} outside (0, 1)")));
    }
    let t_lo = alpha_star * s * s;
    let t_hi = 0.98 * amplitude_limit(s, EtaKind::StdBump);
    if t_lo >= t_hi || excess(s, t_hi)? < deficit {
        return Err(Error::Range(format!(
            "area deficit {:e} unreachable with bump scale s = {s}; use a larger s",
            deficit * inner * inner
        )));
    }
    let t = bisect(|t| excess(s, t).map(|v| v - deficit), t_lo, t_hi, 1e-15)?;
    let reached = fixed + inner * inner * excess(s, t)?;
    if (reached - target).abs() > 1e-10 {
        return Err(Error::Range(format!("area tuning stalled at {reached} (target {target})")));
    }
    Ok((s, t))
}

/// Closed surface of two nested spheres joined by a neck, area `target_area`.
pub fn build_double_sphere(r: f64, target_area: f64, bump_scale: Option<f64>) -> Result<NeckSurface> {
    build_nested(2, r, Some(target_area), bump_scale)
}

/// Double sphere without the area-tuning bump: lower unit hemisphere, Σ₊ and
/// the lower hemisphere of S_r.
pub fn double_sphere_skeleton(r: f64) -> Result<NeckSurface> {
    build_nested(2, r, None, None)
}

/// `k` nested spheres joined by necks, without the area-tuning bump.
pub fn nested_skeleton(k: usize, r: f64) -> Result<NeckSurface> {
    build_nested(k, r, None, None)
}

/// `k` nested spheres of radii r^i joined by `k − 1` alternating necks.
pub fn nested_family(k: usize, r: f64) -> Result<NeckSurface> {
    build_nested(k, r, Some(4.0 * PI * k as f64), None)
}

fn build_nested(k: usize, r: f64, target_area: Option<f64>, bump_scale: Option<f64>) -> Result<NeckSurface> {
    if !(2..=4).contains(&k) {
        return Err(Error::Range(format!("k = {k} not in {{2, 3, 4}}")));
    }
    let sol = solve_neck(r)?;
    let energies = closed_form_energies(&sol);
    let necks = k - 1;
    let mut segments = Vec::new();
    // outer lower hemisphere, then the first neck over the top
    segments.push(ProfileSegment::arc([0.0, 0.0], 1.0, -PI / 2.0, 0.0));
    let mut fixed = 2.0 * PI;
    let mut scale = 1.0;
    for i in 0..necks {
        let mut piece: Vec<ProfileSegment> = sigma_plus_segments(&sol).iter().map(|s| s.scaled(scale)).collect();
        if i % 2 == 1 {
            piece = piece.iter().map(mirror).collect();
        }
        segments.extend(piece);
        fixed += energies.a_plus * scale * scale;
        scale *= r;
    }
    // innermost sphere: remaining hemisphere with the tuning bump at its pole
    let inner = scale;
    fixed += 2.0 * PI * inner * inner;
    let pole_down = necks % 2 == 1;
    let (s, t) = match target_area {
        Some(target) => tune_bump(inner, fixed, target, bump_scale)?,
        None => (0.0, 0.0),
    };
    let sign = if pole_down { -1.0 } else { 1.0 };
    let (theta_end, graph) = if target_area.is_some() {
        let graph = ProfileSegment::Graph {
            bump: BumpGraph::new(s, t),
            radius: inner,
            center_y: 0.0,
            side: if pole_down { Side::Lower } else { Side::Upper },
            rho: [s, 0.0],
        };
        (sign * s.acos(), Some(graph))
    } else {
        (sign * PI / 2.0, None)
    };
    // the last neck arc continues as the inner hemisphere
    if let Some(ProfileSegment::Arc { theta, .. }) = segments.last_mut() {
        theta[1] = theta_end;
    }
    segments.extend(graph);
    let label = if k == 2 {
        format!("double_sphere(r={r})")
    } else {
        format!("nested(k={k}, r={r})")
    };
    let surface = RevolutionSurface::new(label, segments, Orientation::InteriorLeft).map_err(construction_error)?;
    if k > 2 && polyline_self_intersects(&surface.sample(400)) {
        return Err(Error::Construction("necks interfere".into()));
    }
    let da = if t > 0.0 {
        cap_excess(&BumpGraph::new(s, t), Tolerance::uniform(1e-13))?.0
    } else {
        0.0
    };
    Ok(NeckSurface {
        surface,
        solution: sol,
        k,
        bump_s: s,
        bump_t: t,
        predicted_area: fixed + inner * inner * da,
    })
}

/// True when two non-adjacent edges of the polyline cross.
pub fn polyline_self_intersects(points: &[[f64; 2]]) -> bool {
    let pts: Vec<[f64; 2]> = {
        let mut v: Vec<[f64; 2]> = Vec::with_capacity(points.len());
        for p in points {
            if v.last().is_none_or(|q| (q[0] - p[0]).hypot(q[1] - p[1]) > 1e-14) {
                v.push(*p);
            }
        }
        v
    };
    let n = pts.len();
    if n < 4 {
        return false;
    }
    for i in 0..n - 1 {
        for j in i + 2..n - 1 {
            if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                return true;
            }
        }
    }
    false
}

pub(crate) fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_vanishes_at_the_degenerate_point() {
        assert_eq!(eval_f(1.0, 1.0, 0.0), [0.0, 0.0]);
        let f = eval_f(1.0, 1.0, 0.1);
        assert!(f[0].abs() > 1e-3 || f[1].abs() > 1e-3);
    }

    #[test]
    fn second_component_is_the_tangent_relation() {
        for &(r, r1) in &[(0.9, 0.95), (0.7, 0.8), (0.99, 0.3)] {
            let beta = ((1.0f64 - r1) / (r + r1)).atan();
            assert!(eval_f(r, r1, beta)[1].abs() < 1e-15);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let (r, r1, b) = (0.93, 0.95, 0.07);
        let j = jacobian(r, r1, b);
        let h = 1e-7;
        for k in 0..2 {
            let fd_r1 = (eval_f(r, r1 + h, b)[k] - eval_f(r, r1 - h, b)[k]) / (2.0 * h);
            let fd_b = (eval_f(r, r1, b + h)[k] - eval_f(r, r1, b - h)[k]) / (2.0 * h);
            assert!((j[k][0] - fd_r1).abs() < 1e-7);
            assert!((j[k][1] - fd_b).abs() < 1e-7);
        }
        assert!((jacobian(1.0, 1.0, 0.0)[0][0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_radius_outside_domain() {
        assert!(matches!(solve_neck(1.0), Err(Error::Domain(_))));
        assert!(matches!(solve_neck(0.4), Err(Error::Domain(_))));
    }

    #[test]
    fn derived_quantities_follow_the_reduced_system() {
        let s = solve_neck(0.9).unwrap();
        let (sb, cb) = s.beta.sin_cos();
        assert!((s.x1 - (1.0 - s.r1) * cb).abs() < 1e-15);
        assert!((s.lambda - s.x0 * sb).abs() < 1e-15);
        assert!(s.residual <= RESIDUAL_TOL);
        assert!(s.jacobian_det().abs() > 1e-3);
    }

    #[test]
    fn crossing_detection() {
        assert!(segments_cross([0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]));
        assert!(!segments_cross([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]));
        let zig = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.5, -1.0]];
        assert!(polyline_self_intersects(&zig));
    }
}
