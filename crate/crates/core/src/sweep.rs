//! Bounds on w(a) assembled from the constructions.
//!
//! The lower bound is w(a) ≥ a. Upper bounds come from the bump family at
//! area a and from the neck family: a construction of area A and energy W
//! bounds w on all of [4π, A], as shrinking it keeps W and keeps it inside
//! the ball. The envelope is the pointwise minimum, made nondecreasing by
//! taking the minimum over all larger areas.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bump::{bump_upper_bound, linear_fit};
use crate::error::{Error, Result};
use crate::neck::{build_double_sphere, double_sphere_skeleton, nested_family, nested_skeleton};

/// Inner radii of the neck skeletons used for upper bounds.
pub const SKELETON_RADII: [f64; 9] = [0.55, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.995, 0.999];
/// Inner radii of the area-tuned double spheres.
pub const DOUBLE_SPHERE_RADII: [f64; 5] = [0.99, 0.995, 0.999, 0.9995, 0.9999];

/// One construction usable as an upper bound for all areas up to `area`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub label: String,
    pub area: f64,
    pub willmore: f64,
}

/// Neck-family constructions: the unit sphere, skeletons, tuned double
/// spheres and nested k = 3, 4 surfaces with and without tuning.
pub fn neck_constructions() -> Vec<Construction> {
    let mut out = vec![Construction {
        label: "sphere".into(),
        area: 4.0 * PI,
        willmore: 4.0 * PI,
    }];
    let mut push = |label: String, built: Result<crate::neck::NeckSurface>| {
        if let Ok(n) = built {
            if let Ok(rep) = n.surface.report() {
                out.push(Construction {
                    label,
                    area: rep.area,
                    willmore: rep.willmore,
                });
            }
        }
    };
    for r in SKELETON_RADII {
        push(format!("skeleton(r={r})"), double_sphere_skeleton(r));
    }
    for r in DOUBLE_SPHERE_RADII {
        push(format!("double_sphere(r={r})"), build_double_sphere(r, 8.0 * PI, None));
    }
    for k in [3, 4] {
        push(format!("nested(k={k}, r=0.999)"), nested_family(k, 0.999));
        for r in [0.9, 0.99, 0.999] {
            push(format!("nested_skeleton(k={k}, r={r})"), nested_skeleton(k, r));
        }
    }
    out
}

/// Best neck-family bound at area `a`: the least energy among constructions
/// with area at least `a`.
pub fn neck_upper_bound(a: f64, table: &[Construction]) -> Option<(f64, String)> {
    table
        .iter()
        .filter(|c| c.area >= a)
        .min_by(|x, y| x.willmore.total_cmp(&y.willmore))
        .map(|c| (c.willmore, c.label.clone()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub lower_bound: f64,
    pub upper_neck: Option<f64>,
    pub upper_bump: Option<f64>,
    /// Nondecreasing envelope of the defined upper bounds.
    pub upper: Option<f64>,
    pub w_probe: Option<f64>,
    pub source: String,
}

/// Least-squares fit of upper_bump − 4π against √(a − 4π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqrtFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub fit: Option<SqrtFit>,
}

/// Evenly spaced areas in [a_min, a_max].
pub fn area_grid(a_min: f64, a_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(a_min >= 4.0 * PI - 1e-12 && a_max >= a_min && a_max <= 16.0 * PI + 1e-12) {
        return Err(Error::Range(format!("area range [{a_min}, {a_max}] not inside [4π, 16π]")));
    }
    if steps == 0 {
        return Err(Error::Range("at least one step is required".into()));
    }
    if steps == 1 {
        return Ok(vec![a_min]);
    }
    Ok((0..steps)
        .map(|i| a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Rows of bounds at each area, with `probe` optionally supplying W estimates.
pub fn sweep_bounds<P>(areas: &[f64], probe: Option<P>) -> Result<Sweep>
where
    P: Fn(f64) -> Option<f64>,
{
    let table = neck_constructions();
    let mut rows: Vec<SweepRow> = areas
        .iter()
        .map(|&a| {
            let bump = bump_upper_bound(a).ok().map(|b| b.willmore);
            let neck = neck_upper_bound(a, &table);
            let mut source = Vec::new();
            let upper = match (bump, &neck) {
                (Some(b), Some((n, label))) => {
                    source.push(if b <= *n { "bump".to_string() } else { label.clone() });
                    Some(b.min(*n))
                }
                (Some(b), None) => {
                    source.push("bump".into());
                    Some(b)
                }
                (None, Some((n, label))) => {
                    source.push(label.clone());
                    Some(*n)
                }
                (None, None) => None,
            };
            SweepRow {
                a,
                lower_bound: a,
                upper_neck: neck.map(|n| n.0),
                upper_bump: bump,
                upper,
                w_probe: probe.as_ref().and_then(|p| p(a)),
                source: source.join(";"),
            }
        })
        .collect();
    rows.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut running: Option<f64> = None;
    for row in rows.iter_mut().rev() {
        if let Some(u) = row.upper {
            running = Some(running.map_or(u, |r: f64| r.min(u)));
        }
        if running.is_some() && running != row.upper {
            row.source.push_str(";envelope");
        }
        row.upper = running;
    }
    let fit = sqrt_fit(&rows);
    Ok(Sweep { rows, fit })
}

fn sqrt_fit(rows: &[SweepRow]) -> Option<SqrtFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.a > 4.0 * PI)
        .filter_map(|r| r.upper_bump.map(|u| ((r.a - 4.0 * PI).sqrt(), u - 4.0 * PI)))
        .unzip();
    if xs.len() < 3 {
        return None;
    }
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Some(SqrtFit {
        slope,
        intercept,
        r_squared,
        points: xs.len(),
    })
}
