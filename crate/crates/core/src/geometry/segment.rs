//! Profile segments in the (x, y) half-plane, x ≥ 0.
//!
//! Every segment carries a parameter range `[p0, p1]`; the segment is traversed
//! from `p0` to `p1`, so `p0 > p1` reverses the natural direction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bump::eta::EtaKind;
use crate::error::{Error, Result};
use crate::geometry::spline::ProfileSpline;

/// Which catenary branch: y = y₀ ± λ·u with x = λ·cosh u.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Which hemisphere a graph segment sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Upper,
    Lower,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        }
    }
}

/// Radial height function ψ_{s,t}(ρ) = √(1−ρ²) − t·η(ρ/s) of an indented unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpGraph {
    pub s: f64,
    pub t: f64,
    pub eta: EtaKind,
}

impl BumpGraph {
    pub fn new(s: f64, t: f64) -> Self {
        Self {
            s,
            t,
            eta: EtaKind::StdBump,
        }
    }

    /// ψ, ψ′, ψ″ at ρ ∈ [0, 1).
    pub fn psi(&self, rho: f64) -> (f64, f64, f64) {
        let (e, e1, e2) = self.eta.eval(rho / self.s);
        let w = (1.0 - rho * rho).sqrt();
        let psi = w - self.t * e;
        let d1 = -rho / w - self.t / self.s * e1;
        let d2 = -1.0 / (w * w * w) - self.t / (self.s * self.s) * e2;
        (psi, d1, d2)
    }
}

/// One piece of a generating curve.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSegment {
    /// center + radius·(cos θ, sin θ) for θ over `theta`.
    Arc {
        center: [f64; 2],
        radius: f64,
        theta: [f64; 2],
    },
    /// (λ cosh u, y₀ ± λ u) for u over `u`.
    Catenary {
        lambda: f64,
        y0: f64,
        branch: Branch,
        u: [f64; 2],
    },
    /// (R ρ, y_c ± R ψ(ρ)) for ρ over `rho`: an indented sphere of radius R.
    Graph {
        bump: BumpGraph,
        radius: f64,
        center_y: f64,
        side: Side,
        rho: [f64; 2],
    },
    /// Fitted spline through a closed discrete profile.
    Spline(Box<ProfileSpline>),
}

/// Position and parameter derivatives along the natural parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
    pub ddx: f64,
    pub ddy: f64,
}

impl ProfileSegment {
    pub fn arc(center: [f64; 2], radius: f64, theta0: f64, theta1: f64) -> Self {
        ProfileSegment::Arc {
            center,
            radius,
            theta: [theta0, theta1],
        }
    }

    /// Unit-sphere style arc from the south pole to the north pole of a circle on the axis.
    pub fn meridian(center_y: f64, radius: f64) -> Self {
        Self::arc([0.0, center_y], radius, -PI / 2.0, PI / 2.0)
    }

    pub fn catenary(lambda: f64, y0: f64, branch: Branch, u0: f64, u1: f64) -> Self {
        ProfileSegment::Catenary {
            lambda,
            y0,
            branch,
            u: [u0, u1],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ProfileSegment::Arc { .. } => "arc",
            ProfileSegment::Catenary { .. } => "catenary",
            ProfileSegment::Graph { .. } => "graph_bump",
            ProfileSegment::Spline(_) => "spline",
        }
    }

    /// Traversal range `[start, end]`.
    pub fn range(&self) -> [f64; 2] {
        match self {
            ProfileSegment::Arc { theta, .. } => *theta,
            ProfileSegment::Catenary { u, .. } => *u,
            ProfileSegment::Graph { rho, .. } => *rho,
            ProfileSegment::Spline(s) => s.range(),
        }
    }

    /// +1 when traversed along increasing parameter, −1 otherwise.
    pub fn direction(&self) -> f64 {
        let [a, b] = self.range();
        if b >= a {
            1.0
        } else {
            -1.0
        }
    }

    /// Parameter values where the integrand may lose smoothness.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ProfileSegment::Spline(s) => s.breakpoints().to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [a, b] = self.range();
        if !(a.is_finite() && b.is_finite()) || a == b {
            return Err(Error::InvalidSegment(format!("{}: empty or non-finite range", self.kind())));
        }
        match self {
            ProfileSegment::Arc { radius, center, .. } => {
                if !(*radius > 0.0) || !center.iter().all(|c| c.is_finite()) {
                    return Err(Error::InvalidSegment("arc radius must be positive".into()));
                }
            }
            ProfileSegment::Catenary { lambda, y0, .. } => {
                if !(*lambda > 0.0) || !y0.is_finite() {
                    return Err(Error::InvalidSegment("catenary waist must be positive".into()));
                }
            }
            ProfileSegment::Graph { bump, radius, rho, .. } => {
                if !(*radius > 0.0) || !(bump.s > 0.0) || !(bump.t >= 0.0) {
                    return Err(Error::InvalidSegment("graph needs radius > 0, s > 0, t ≥ 0".into()));
                }
                if rho.iter().any(|r| !(0.0..1.0).contains(r)) {
                    return Err(Error::InvalidSegment("graph range must lie in [0, 1)".into()));
                }
            }
            ProfileSegment::Spline(_) => {}
        }
        Ok(())
    }

    /// Position and derivatives with respect to the natural parameter.
    pub fn jet(&self, p: f64) -> Jet {
        match self {
            ProfileSegment::Arc { center, radius, .. } => {
                let (s, c) = p.sin_cos();
                Jet {
                    x: center[0] + radius * c,
                    y: center[1] + radius * s,
                    dx: -radius * s,
                    dy: radius * c,
                    ddx: -radius * c,
                    ddy: -radius * s,
                }
            }
            ProfileSegment::Catenary { lambda, y0, branch, .. } => {
                let sg = branch.sign();
                let (sh, ch) = (p.sinh(), p.cosh());
                Jet {
                    x: lambda * ch,
                    y: y0 + sg * lambda * p,
                    dx: lambda * sh,
                    dy: sg * lambda,
                    ddx: lambda * ch,
                    ddy: 0.0,
                }
            }
            ProfileSegment::Graph {
                bump,
                radius,
                center_y,
                side,
                ..
            } => {
                let sg = side.sign();
                let (psi, d1, d2) = bump.psi(p);
                Jet {
                    x: radius * p,
                    y: center_y + sg * radius * psi,
                    dx: *radius,
                    dy: sg * radius * d1,
                    ddx: 0.0,
                    ddy: sg * radius * d2,
                }
            }
            ProfileSegment::Spline(s) => {
                let [x, y, dx, dy, ddx, ddy] = s.eval(p);
                Jet { x, y, dx, dy, ddx, ddy }
            }
        }
    }

    pub fn point(&self, p: f64) -> [f64; 2] {
        let j = self.jet(p);
        [j.x, j.y]
    }

    pub fn start_point(&self) -> [f64; 2] {
        self.point(self.range()[0])
    }

    pub fn end_point(&self) -> [f64; 2] {
        self.point(self.range()[1])
    }

    /// Unit tangent in the traversal direction at parameter `p`.
    pub fn tangent(&self, p: f64) -> [f64; 2] {
        let j = self.jet(p);
        let d = self.direction();
        let n = j.dx.hypot(j.dy);
        [d * j.dx / n, d * j.dy / n]
    }

    pub fn start_tangent(&self) -> [f64; 2] {
        self.tangent(self.range()[0])
    }

    pub fn end_tangent(&self) -> [f64; 2] {
        self.tangent(self.range()[1])
    }

    /// The same segment scaled about the origin.
    pub fn scaled(&self, f: f64) -> Self {
        match self {
            ProfileSegment::Arc { center, radius, theta } => ProfileSegment::Arc {
                center: [center[0] * f, center[1] * f],
                radius: radius * f,
                theta: *theta,
            },
            ProfileSegment::Catenary { lambda, y0, branch, u } => ProfileSegment::Catenary {
                lambda: lambda * f,
                y0: y0 * f,
                branch: *branch,
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
                radius: radius * f,
                center_y: center_y * f,
                side: *side,
                rho: *rho,
            },
            ProfileSegment::Spline(s) => ProfileSegment::Spline(Box::new(s.scaled(f))),
        }
    }

    /// Largest |p| over the segment.
    pub fn max_radius(&self) -> f64 {
        let [a, b] = self.range();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if let ProfileSegment::Arc { center, radius, .. } = self {
            // farthest point of the full circle lies along the center direction
            let mut best = self.point(lo).iter().map(|c| c * c).sum::<f64>().sqrt();
            best = best.max(self.point(hi).iter().map(|c| c * c).sum::<f64>().sqrt());
            let cn = center[0].hypot(center[1]);
            let phi = if cn > 0.0 { center[1].atan2(center[0]) } else { lo };
            for k in -2..=2 {
                let th = phi + 2.0 * PI * k as f64;
                if th >= lo && th <= hi {
                    best = best.max(cn + radius);
                }
            }
            return best;
        }
        let norm = |p: f64| {
            let q = self.point(p);
            q[0].hypot(q[1])
        };
        let n = 2048;
        let mut best_i = 0;
        let mut best = f64::MIN;
        for i in 0..=n {
            let p = lo + (hi - lo) * i as f64 / n as f64;
            let v = norm(p);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        // golden-section polish in the bracketing cells
        let h = (hi - lo) / n as f64;
        let mut l = (lo + h * (best_i as f64 - 1.0)).max(lo);
        let mut r = (lo + h * (best_i as f64 + 1.0)).min(hi);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let m1 = r - g * (r - l);
            let m2 = l + g * (r - l);
            if norm(m1) < norm(m2) {
                l = m1;
            } else {
                r = m2;
            }
        }
        best.max(norm(0.5 * (l + r)))
    }

    /// Smallest x over the interior of the segment (sampled).
    pub fn min_interior_x(&self) -> f64 {
        let [a, b] = self.range();
        let n = 512;
        (1..n)
            .map(|i| self.point(a + (b - a) * i as f64 / n as f64)[0])
            .fold(f64::INFINITY, f64::min)
    }
}
