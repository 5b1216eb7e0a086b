//! Serialization: surface JSON, CSV tables and SVG plots.
//!
//! Surfaces are exchanged as
//! `{"label": ..., "orientation": ..., "segments": [...]}` where each segment
//! is tagged by `"type"`: `arc`, `catenary`, `graph_bump` or `spline`. Graph
//! segments default to the upper cap of the unit sphere traversed from the
//! rim `ρ = s` to the pole, so `{"type":"graph_bump","s":s,"t":t,"eta":"std_bump"}`
//! is enough for the bump family. Floats are written by serde_json in
//! shortest round-trip form, which reproduces every f64 exactly.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bump::eta::EtaKind;
use crate::bump::BumpSweep;
use crate::error::{Error, Result};
use crate::geometry::{Branch, BumpGraph, Orientation, ProfileSegment, ProfileSpline, RevolutionSurface, Side};
use crate::sweep::Sweep;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SegmentJson {
    Arc {
        center: [f64; 2],
        radius: f64,
        theta: [f64; 2],
    },
    Catenary {
        lambda: f64,
        y0: f64,
        branch: Branch,
        u: [f64; 2],
    },
    GraphBump {
        s: f64,
        t: f64,
        #[serde(default)]
        eta: EtaKind,
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        center_y: f64,
        #[serde(default)]
        side: Side,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rho: Option<[f64; 2]>,
    },
    Spline {
        points: Vec<[f64; 2]>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceJson {
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub orientation: Orientation,
    /// Open chains are accepted only when this is set.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub open: bool,
    pub segments: Vec<SegmentJson>,
}

impl From<&ProfileSegment> for SegmentJson {
    fn from(seg: &ProfileSegment) -> Self {
        match seg {
            ProfileSegment::Arc { center, radius, theta } => SegmentJson::Arc {
                center: *center,
                radius: *radius,
                theta: *theta,
            },
            ProfileSegment::Catenary { lambda, y0, branch, u } => SegmentJson::Catenary {
                lambda: *lambda,
                y0: *y0,
                branch: *branch,
                u: *u,
            },
            ProfileSegment::Graph {
                bump,
                radius,
                center_y,
                side,
                rho,
            } => SegmentJson::GraphBump {
                s: bump.s,
                t: bump.t,
                eta: bump.eta,
                radius: *radius,
                center_y: *center_y,
                side: *side,
                rho: Some(*rho),
            },
            ProfileSegment::Spline(sp) => SegmentJson::Spline {
                points: sp.points().to_vec(),
            },
        }
    }
}

impl SegmentJson {
    pub fn to_segment(&self) -> Result<ProfileSegment> {
        let seg = match self {
            SegmentJson::Arc { center, radius, theta } => ProfileSegment::arc(*center, *radius, theta[0], theta[1]),
            SegmentJson::Catenary { lambda, y0, branch, u } => {
                ProfileSegment::catenary(*lambda, *y0, *branch, u[0], u[1])
            }
            SegmentJson::GraphBump {
                s,
                t,
                eta,
                radius,
                center_y,
                side,
                rho,
            } => {
                if !(*s > 0.0 && *s < 1.0) {
                    return Err(Error::Schema(format!("graph_bump s = {s} outside (0, 1)")));
                }
                ProfileSegment::Graph {
                    bump: BumpGraph { s: *s, t: *t, eta: *eta },
                    radius: *radius,
                    center_y: *center_y,
                    side: *side,
                    rho: rho.unwrap_or([*s, 0.0]),
                }
            }
            SegmentJson::Spline { points } => ProfileSegment::Spline(Box::new(ProfileSpline::fit(points)?)),
        };
        seg.validate()?;
        Ok(seg)
    }
}

impl From<&RevolutionSurface> for SurfaceJson {
    fn from(s: &RevolutionSurface) -> Self {
        SurfaceJson {
            label: s.label.clone(),
            orientation: s.orientation(),
            open: !s.is_closed(),
            segments: s.segments().iter().map(SegmentJson::from).collect(),
        }
    }
}

impl SurfaceJson {
    pub fn to_surface(&self) -> Result<RevolutionSurface> {
        let segments = self
            .segments
            .iter()
            .map(SegmentJson::to_segment)
            .collect::<Result<Vec<_>>>()?;
        if self.open {
            RevolutionSurface::open(self.label.clone(), segments, self.orientation)
        } else {
            RevolutionSurface::new(self.label.clone(), segments, self.orientation)
        }
    }
}

/// Parses a surface document. Malformed JSON and unknown segment types are
/// schema errors; geometric violations keep their own error kinds.
pub fn surface_from_json(text: &str) -> Result<RevolutionSurface> {
    let doc: SurfaceJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if doc.segments.is_empty() {
        return Err(Error::Schema("\"segments\" must not be empty".into()));
    }
    doc.to_surface()
}

pub fn surface_to_json(surface: &RevolutionSurface) -> String {
    to_json_pretty(&SurfaceJson::from(surface))
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"));
    text.push('\n');
    text
}

/// A float with 15 significant digits; empty for `None`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.14e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Generic CSV: header row, comma separated, LF line endings.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn bump_sweep_csv(sweep: &BumpSweep) -> String {
    let rows: Vec<Vec<String>> = sweep
        .rows
        .iter()
        .map(|r| {
            vec![
                fmt_num(r.s),
                fmt_num(r.t),
                fmt_num(r.area),
                fmt_num(r.area_excess),
                fmt_num(r.willmore),
                fmt_num(r.willmore_excess),
                fmt_num(r.slope_partial),
            ]
        })
        .collect();
    csv_table(
        &["s", "t", "area", "area_excess", "willmore", "willmore_excess", "slope_partial"],
        &rows,
    )
}

pub fn sweep_csv(sweep: &Sweep) -> String {
    let rows: Vec<Vec<String>> = sweep
        .rows
        .iter()
        .map(|r| {
            vec![
                fmt_num(r.a),
                fmt_num(r.lower_bound),
                fmt_opt(r.upper_bump),
                fmt_opt(r.upper_neck),
                fmt_opt(r.upper),
                fmt_opt(r.w_probe),
                r.source.clone(),
            ]
        })
        .collect();
    csv_table(
        &["a", "lower_bound", "upper_bump", "upper_neck", "upper", "w_probe", "source"],
        &rows,
    )
}

/// Key/value CSV for flat JSON-like records.
pub fn record_csv<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema("record is not an object".into()))?;
    let rows: Vec<Vec<String>> = obj
        .iter()
        .filter(|(_, v)| !v.is_array() && !v.is_object())
        .map(|(k, v)| {
            let val = match v {
                serde_json::Value::Number(n) => n.as_f64().map(fmt_num).unwrap_or_else(|| n.to_string()),
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                other => other.to_string(),
            };
            vec![k.clone(), val]
        })
        .collect();
    Ok(csv_table(&["field", "value"], &rows))
}

const SVG_SIZE: f64 = 480.0;
const SVG_MARGIN: f64 = 40.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let w = SVG_SIZE - 2.0 * SVG_MARGIN;
        let u = SVG_MARGIN + (p[0] - self.x0) / (self.x1 - self.x0) * w;
        let v = SVG_SIZE - SVG_MARGIN - (p[1] - self.y0) / (self.y1 - self.y0) * w;
        (u, v)
    }

    fn path(&self, pts: &[[f64; 2]]) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (u, v) = self.map(*p);
            let _ = write!(d, "{}{u:.3},{v:.3} ", if i == 0 { "M" } else { "L" });
        }
        d.trim_end().to_string()
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">\n<title>{}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        xml_escape(title)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Meridian section of the surface (profile and its mirror image) inside the
/// unit circle.
pub fn profile_svg(surface: &RevolutionSurface) -> String {
    let frame = Frame {
        x0: -1.1,
        x1: 1.1,
        y0: -1.1,
        y1: 1.1,
    };
    let pts = surface.sample(256);
    let mirror: Vec<[f64; 2]> = pts.iter().map(|p| [-p[0], p[1]]).collect();
    let circle: Vec<[f64; 2]> = (0..=720)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / 720.0;
            [th.cos(), th.sin()]
        })
        .collect();
    let mut out = svg_open(&surface.label);
    let _ = writeln!(
        out,
        "<path id=\"unit-circle\" d=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>",
        frame.path(&circle)
    );
    let (ax0, ay0) = frame.map([0.0, -1.1]);
    let (ax1, ay1) = frame.map([0.0, 1.1]);
    let _ = writeln!(
        out,
        "<line id=\"axis\" x1=\"{ax0:.3}\" y1=\"{ay0:.3}\" x2=\"{ax1:.3}\" y2=\"{ay1:.3}\" stroke=\"#cccccc\"/>"
    );
    let _ = writeln!(
        out,
        "<path id=\"profile\" d=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>",
        frame.path(&pts)
    );
    let _ = writeln!(
        out,
        "<path id=\"profile-mirror\" d=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>",
        frame.path(&mirror)
    );
    out.push_str("</svg>\n");
    out
}

/// Bounds on w(a) against a, with the line W = a and the fitted
/// 4π + c·√(a − 4π) curve when a fit is available.
pub fn sweep_svg(sweep: &Sweep) -> String {
    let a_lo = sweep.rows.first().map(|r| r.a).unwrap_or(4.0 * PI);
    let a_hi = sweep.rows.last().map(|r| r.a).unwrap_or(4.0 * PI + 1.0).max(a_lo + 1e-9);
    let ws: Vec<f64> = sweep
        .rows
        .iter()
        .flat_map(|r| [Some(r.lower_bound), r.upper, r.w_probe])
        .flatten()
        .filter(|w| w.is_finite())
        .collect();
    let w_lo = ws.iter().copied().fold(a_lo, f64::min);
    let w_hi = ws.iter().copied().fold(a_hi, f64::max).max(w_lo + 1e-9);
    let pad_a = 0.05 * (a_hi - a_lo);
    let pad_w = 0.05 * (w_hi - w_lo);
    let frame = Frame {
        x0: a_lo - pad_a,
        x1: a_hi + pad_a,
        y0: w_lo - pad_w,
        y1: w_hi + pad_w,
    };
    let mut out = svg_open("w(a) bounds");
    let diag = [[a_lo, a_lo], [a_hi, a_hi]];
    let _ = writeln!(
        out,
        "<path id=\"line-w-equals-a\" d=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>",
        frame.path(&diag)
    );
    let series = |f: &dyn Fn(&crate::sweep::SweepRow) -> Option<f64>| -> Vec<[f64; 2]> {
        sweep.rows.iter().filter_map(|r| f(r).map(|w| [r.a, w])).collect()
    };
    let upper = series(&|r| r.upper);
    if upper.len() > 1 {
        let _ = writeln!(
            out,
            "<path id=\"upper\" d=\"{}\" fill=\"none\" stroke=\"#b03030\" stroke-width=\"1.5\"/>",
            frame.path(&upper)
        );
    }
    for (i, p) in series(&|r| r.w_probe).iter().enumerate() {
        let (u, v) = frame.map(*p);
        let _ = writeln!(
            out,
            "<circle id=\"probe-{i}\" cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"3\" fill=\"#1f7a3a\"/>"
        );
    }
    if let Some(fit) = sweep.fit {
        let curve: Vec<[f64; 2]> = (0..=200)
            .map(|i| {
                let a = a_lo.max(4.0 * PI) + (a_hi - a_lo.max(4.0 * PI)) * i as f64 / 200.0;
                [a, 4.0 * PI + fit.intercept + fit.slope * (a - 4.0 * PI).max(0.0).sqrt()]
            })
            .filter(|p| p[1] <= frame.y1)
            .collect();
        if curve.len() > 1 {
            let _ = writeln!(
                out,
                "<path id=\"sqrt-fit\" d=\"{}\" fill=\"none\" stroke=\"#d08a00\" stroke-dasharray=\"2 2\"/>",
                frame.path(&curve)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_round_trip() {
        let s = RevolutionSurface::unit_sphere();
        let back = surface_from_json(&surface_to_json(&s)).unwrap();
        assert_eq!(back.segments(), s.segments());
    }

    #[test]
    fn minimal_bump_document() {
        let s = 0.2;
        let text = format!(
            r#"{{"label":"b","segments":[{{"type":"arc","center":[0,0],"radius":1,"theta":[{},{}]}},{{"type":"graph_bump","s":{s},"t":0.004,"eta":"std_bump"}}]}}"#,
            -PI / 2.0,
            f64::acos(s)
        );
        let surf = surface_from_json(&text).unwrap();
        assert!(surf.is_closed());
        assert!(surf.report().unwrap().area < 4.0 * PI);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(surface_from_json("{"), Err(Error::Schema(_))));
        assert!(matches!(surface_from_json(r#"{"segments":[]}"#), Err(Error::Schema(_))));
        assert!(matches!(
            surface_from_json(r#"{"segments":[{"type":"ellipse"}]}"#),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn csv_uses_fifteen_digits_and_lf() {
        let t = csv_table(&["x"], &[vec![fmt_num(PI)]]);
        assert_eq!(t, "x\n3.14159265358979e0\n");
        assert!(!t.contains('\r'));
    }

    #[test]
    fn profile_svg_is_deterministic() {
        let s = RevolutionSurface::unit_sphere();
        let a = profile_svg(&s);
        assert_eq!(a, profile_svg(&s));
        assert!(a.contains("unit-circle") && a.contains("id=\"profile\""));
    }
}
