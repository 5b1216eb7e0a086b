//! Closed chains of profile segments revolved about the y-axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::frame::{frame_at_with, PointFrame};
use crate::geometry::segment::ProfileSegment;
use crate::quadrature::{integrate_vec, Tolerance};

/// Endpoint coincidence tolerance.
pub const TAU_POS: f64 = 1e-10;
/// Junction tangent angle tolerance (radians).
pub const TAU_TAN: f64 = 1e-8;
/// Confinement slack on max |p|.
pub const TAU_CONF: f64 = 1e-9;

/// Side of the traversed profile that bounds the enclosed volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Interior on the left: a profile running from the south pole to the
    /// north pole through x > 0 gets the outward normal.
    #[default]
    InteriorLeft,
    InteriorRight,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionSurface {
    pub label: String,
    segments: Vec<ProfileSegment>,
    orientation: Orientation,
    closed: bool,
}

impl RevolutionSurface {
    /// A closed sphere-type surface: C¹ chain with both ends on the axis.
    pub fn new(label: impl Into<String>, segments: Vec<ProfileSegment>, orientation: Orientation) -> Result<Self> {
        let s = Self::open(label, segments, orientation)?;
        let first = s.segments[0].start_point();
        let last = s.segments[s.segments.len() - 1].end_point();
        if first[0].abs() > TAU_POS || last[0].abs() > TAU_POS {
            return Err(Error::NotClosed(format!(
                "chain ends at x = {:e} and x = {:e}, not on the axis",
                first[0], last[0]
            )));
        }
        Ok(Self { closed: true, ..s })
    }

    /// A C¹ chain that may have boundary circles at its ends.
    pub fn open(label: impl Into<String>, segments: Vec<ProfileSegment>, orientation: Orientation) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSurface("no segments".into()));
        }
        for seg in &segments {
            seg.validate()?;
            if seg.min_interior_x() < 0.0 {
                return Err(Error::InvalidSurface(format!("{} crosses the axis", seg.kind())));
            }
        }
        for (i, w) in segments.windows(2).enumerate() {
            let p = w[0].end_point();
            let q = w[1].start_point();
            let gap = (p[0] - q[0]).hypot(p[1] - q[1]);
            if gap > TAU_POS {
                return Err(Error::Junction {
                    index: i,
                    reason: format!("position gap {gap:e}"),
                });
            }
            let angle = tangent_gap(w[0].end_tangent(), w[1].start_tangent());
            if angle > TAU_TAN {
                return Err(Error::Junction {
                    index: i,
                    reason: format!("tangent gap {angle:e} rad"),
                });
            }
        }
        let first = segments[0].start_point();
        let last = segments[segments.len() - 1].end_point();
        let closed = first[0].abs() <= TAU_POS && last[0].abs() <= TAU_POS;
        Ok(Self {
            label: label.into(),
            segments,
            orientation,
            closed,
        })
    }

    pub fn unit_sphere() -> Self {
        Self::sphere(1.0, 0.0)
    }

    /// Round sphere of radius `radius` centred at (0, `center_y`).
    pub fn sphere(radius: f64, center_y: f64) -> Self {
        Self::new(
            format!("sphere(radius={radius})"),
            vec![ProfileSegment::meridian(center_y, radius)],
            Orientation::InteriorLeft,
        )
        .expect("round sphere is a valid surface")
    }

    pub fn segments(&self) -> &[ProfileSegment] {
        &self.segments
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Largest tangent mismatch over interior junctions.
    pub fn max_junction_angle(&self) -> f64 {
        self.segments
            .windows(2)
            .map(|w| tangent_gap(w[0].end_tangent(), w[1].start_tangent()))
            .fold(0.0, f64::max)
    }

    /// Oriented frame at parameter `t` of segment `index`.
    pub fn frame(&self, index: usize, t: f64) -> Result<PointFrame> {
        let f = frame_at_with(&self.segments[index], t, true)?;
        Ok(match self.orientation {
            Orientation::InteriorLeft => f,
            Orientation::InteriorRight => f.flipped(),
        })
    }

    /// ∫_Σ f dH² for several integrands sharing the same nodes.
    pub fn integrate_vec<const N: usize, F>(&self, f: F, tol: Tolerance) -> Result<[f64; N]>
    where
        F: Fn(&PointFrame) -> [f64; N],
    {
        let mut total = [0.0; N];
        for (i, seg) in self.segments.iter().enumerate() {
            let [a, b] = seg.range();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut cuts = vec![lo];
            cuts.extend(seg.breakpoints().into_iter().filter(|&c| c > lo && c < hi));
            cuts.push(hi);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in cuts.windows(2) {
                let part = integrate_vec(
                    |t| {
                        let fr = self.frame(i, t)?;
                        let v = f(&fr);
                        let m = fr.area_factor * fr.speed;
                        Ok(v.map(|x| x * m))
                    },
                    w[0],
                    w[1],
                    tol,
                )?;
                for k in 0..N {
                    total[k] += part[k];
                }
            }
        }
        Ok(total)
    }

    /// ∫_Σ f dH² with the default tolerance.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&PointFrame) -> f64,
    {
        self.integrate_vec(|fr| [f(fr)], Tolerance::default()).map(|v| v[0])
    }

    pub fn max_radius(&self) -> f64 {
        self.segments.iter().map(|s| s.max_radius()).fold(0.0, f64::max)
    }

    pub fn is_confined(&self) -> bool {
        self.max_radius() <= 1.0 + TAU_CONF
    }

    pub fn report(&self) -> Result<SurfaceReport> {
        self.report_with(Tolerance::default())
    }

    pub fn report_with(&self, tol: Tolerance) -> Result<SurfaceReport> {
        let [area, willmore, gauss, tracefree] = self.integrate_vec(
            |f| [1.0, 0.25 * f.mean * f.mean, f.gauss, 0.5 * f.tracefree_sq],
            tol,
        )?;
        let max_radius = self.max_radius();
        Ok(SurfaceReport {
            label: self.label.clone(),
            area,
            willmore,
            gauss_integral: gauss,
            tracefree_integral: tracefree,
            max_radius,
            confined: max_radius <= 1.0 + TAU_CONF,
            closed: self.closed,
            residuals: None,
        })
    }

    /// The surface scaled about the origin by `factor`.
    pub fn dilate(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidSurface(format!("dilation factor {factor} must be positive")));
        }
        Ok(Self {
            label: self.label.clone(),
            segments: self.segments.iter().map(|s| s.scaled(factor)).collect(),
            orientation: self.orientation,
            closed: self.closed,
        })
    }

    /// Samples points along the whole chain, `per_segment` per segment.
    pub fn sample(&self, per_segment: usize) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        for seg in &self.segments {
            let [a, b] = seg.range();
            for i in 0..=per_segment {
                out.push(seg.point(a + (b - a) * i as f64 / per_segment as f64));
            }
        }
        out
    }
}

fn tangent_gap(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.atan2(dot).abs()
}

/// Identity residuals attached to a report by the verifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportResiduals {
    pub first_variation: f64,
    pub area_defect: Option<f64>,
    pub gauss_bonnet: Option<f64>,
    pub tracefree: Option<f64>,
}

/// Integral scalars of a revolved surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub label: String,
    pub area: f64,
    /// ¼∫H².
    pub willmore: f64,
    /// ∫K.
    pub gauss_integral: f64,
    /// ½∫|Å|².
    pub tracefree_integral: f64,
    pub max_radius: f64,
    pub confined: bool,
    pub closed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residuals: Option<ReportResiduals>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_sphere_report() {
        let r = RevolutionSurface::unit_sphere().report().unwrap();
        assert!((r.area - 4.0 * PI).abs() < 1e-9);
        assert!((r.willmore - 4.0 * PI).abs() < 1e-9);
        assert!((r.gauss_integral - 4.0 * PI).abs() < 1e-9);
        assert!(r.tracefree_integral.abs() < 1e-9);
        assert!(r.confined && r.closed);
    }

    #[test]
    fn half_sphere_integrals() {
        let s = RevolutionSurface::sphere(0.5, 0.0);
        let one = s.integrate(|_| 1.0).unwrap();
        let k = s.integrate(|f| f.gauss).unwrap();
        let w = s.integrate(|f| 0.25 * f.mean * f.mean).unwrap();
        assert!((one - PI).abs() < 1e-9);
        assert!((k - 4.0 * PI).abs() < 1e-9);
        assert!((w - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn dilation_scales_area_and_keeps_energy() {
        let s = RevolutionSurface::unit_sphere().dilate(0.5).unwrap();
        let r = s.report().unwrap();
        assert!((r.area - PI).abs() < 1e-9);
        assert!((r.willmore - 4.0 * PI).abs() < 1e-9);
        assert!(RevolutionSurface::unit_sphere().dilate(0.0).is_err());
    }

    #[test]
    fn rejects_gaps_and_kinks() {
        let a = ProfileSegment::arc([0.0, 0.0], 1.0, -PI / 2.0, 0.0);
        let b = ProfileSegment::arc([0.0, 0.0], 1.0, 1e-6, PI / 2.0);
        assert!(matches!(
            RevolutionSurface::new("gap", vec![a.clone(), b], Orientation::InteriorLeft),
            Err(Error::Junction { .. })
        ));
        // cusp: the chain turns back on itself at (1, 0)
        let c = ProfileSegment::arc([0.0, 0.0], 1.0, 0.0, -0.5);
        assert!(RevolutionSurface::new("kink", vec![a.clone(), c], Orientation::InteriorLeft).is_err());
        assert!(matches!(
            RevolutionSurface::new("open", vec![a], Orientation::InteriorLeft),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn flipped_orientation_negates_mean_curvature() {
        let s = RevolutionSurface::new("in", vec![ProfileSegment::meridian(0.0, 1.0)], Orientation::InteriorRight).unwrap();
        let h = s.integrate(|f| f.mean).unwrap();
        assert!((h + 8.0 * PI).abs() < 1e-9);
    }
}
