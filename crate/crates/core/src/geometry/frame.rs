use crate::error::{Error, Result};
use crate::geometry::segment::ProfileSegment;

/// Pointwise geometry of the revolved surface at one profile point.
///
/// Curvatures are taken with respect to `normal`; with the default orientation
/// (interior on the left of the traversed profile) the unit sphere has H = 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFrame {
    pub position: [f64; 2],
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
    /// Meridian principal curvature κ₁.
    pub kappa_meridian: f64,
    /// Parallel principal curvature κ₂.
    pub kappa_parallel: f64,
    /// H = κ₁ + κ₂.
    pub mean: f64,
    /// K = κ₁ κ₂.
    pub gauss: f64,
    /// |Å|² = (κ₁ − κ₂)² / 2.
    pub tracefree_sq: f64,
    /// 2πx, the parallel circumference.
    pub area_factor: f64,
    /// p · ν; |x^⊥| = |p · ν|.
    pub support: f64,
    /// |dγ/dp| along the natural parameter.
    pub speed: f64,
}

impl PointFrame {
    pub(crate) fn from_parts(position: [f64; 2], tangent: [f64; 2], k1: f64, k2: f64, speed: f64) -> Self {
        let normal = [tangent[1], -tangent[0]];
        let d = k1 - k2;
        Self {
            position,
            tangent,
            normal,
            kappa_meridian: k1,
            kappa_parallel: k2,
            mean: k1 + k2,
            gauss: k1 * k2,
            tracefree_sq: 0.5 * d * d,
            area_factor: 2.0 * std::f64::consts::PI * position[0],
            support: position[0] * normal[0] + position[1] * normal[1],
            speed,
        }
    }

    /// Same point with the opposite unit normal.
    pub fn flipped(&self) -> Self {
        Self {
            normal: [-self.normal[0], -self.normal[1]],
            kappa_meridian: -self.kappa_meridian,
            kappa_parallel: -self.kappa_parallel,
            mean: -self.mean,
            support: -self.support,
            ..*self
        }
    }

    /// |p|².
    pub fn radius_sq(&self) -> f64 {
        self.position[0] * self.position[0] + self.position[1] * self.position[1]
    }
}

/// Points with x below this are treated as lying on the axis.
pub const AXIS_EPS: f64 = 1e-15;

/// Frame at parameter `t`; fails on the axis.
pub fn frame_at(segment: &ProfileSegment, t: f64) -> Result<PointFrame> {
    frame_at_with(segment, t, false)
}

/// Frame at parameter `t`. With `pole_limit`, a point on the axis gets the
/// umbilical limit κ₂ = κ₁ instead of an error.
pub fn frame_at_with(segment: &ProfileSegment, t: f64, pole_limit: bool) -> Result<PointFrame> {
    let [a, b] = segment.range();
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if !(t >= lo - slack && t <= hi + slack) {
        return Err(Error::ParameterOutOfRange { param: t, lo, hi });
    }
    let j = segment.jet(t);
    let dir = segment.direction();
    let (dx, dy) = (dir * j.dx, dir * j.dy);
    let speed = dx.hypot(dy);
    if !(speed > 0.0) {
        return Err(Error::InvalidSegment(format!("zero speed at parameter {t}")));
    }
    let tangent = [dx / speed, dy / speed];
    let k1 = (dx * j.ddy - dy * j.ddx) / (speed * speed * speed);
    let k2 = if j.x > AXIS_EPS {
        tangent[1] / j.x
    } else if pole_limit {
        k1
    } else {
        return Err(Error::AxisSingularity { param: t });
    };
    Ok(PointFrame::from_parts([j.x.max(0.0), j.y], tangent, k1, k2, speed))
}
