//! Closed-curve cubic spline through a half profile.
//!
//! The profile nodes run from one axis point to the other through x > 0. They
//! are mirrored across the axis to form a closed curve, and a periodic cubic
//! spline with chord-length parameters is fitted through it. By symmetry the
//! fitted x is odd and y is even about both poles, so the revolved surface
//! closes with horizontal tangents.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpline {
    points: Vec<[f64; 2]>,
    knots: Vec<f64>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    mx: Vec<f64>,
    my: Vec<f64>,
    half_end: usize,
}

impl ProfileSpline {
    /// Fits through `points` (first and last on the axis, x ≈ 0).
    pub fn fit(points: &[[f64; 2]]) -> Result<Self> {
        let n = points.len();
        if n < 3 {
            return Err(Error::InvalidSegment("spline needs at least 3 points".into()));
        }
        let mut pts: Vec<[f64; 2]> = points.to_vec();
        pts[0][0] = 0.0;
        pts[n - 1][0] = 0.0;
        // closed loop: p0 .. p_{n-1}, mirrored p_{n-2} .. p1
        let mut xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        let mut ys: Vec<f64> = pts.iter().map(|p| p[1]).collect();
        for p in pts[1..n - 1].iter().rev() {
            xs.push(-p[0]);
            ys.push(p[1]);
        }
        let m = xs.len();
        let mut knots = Vec::with_capacity(m + 1);
        knots.push(0.0);
        for i in 0..m {
            let j = (i + 1) % m;
            let h = (xs[j] - xs[i]).hypot(ys[j] - ys[i]);
            if !(h > 0.0) {
                return Err(Error::InvalidSegment(format!("coincident spline nodes at {i}")));
            }
            knots.push(knots[i] + h);
        }
        let mx = periodic_second_derivatives(&knots, &xs);
        let my = periodic_second_derivatives(&knots, &ys);
        Ok(Self {
            points: pts,
            knots,
            xs,
            ys,
            mx,
            my,
            half_end: n - 1,
        })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Parameter range of the x ≥ 0 half.
    pub fn range(&self) -> [f64; 2] {
        [0.0, self.knots[self.half_end]]
    }

    /// Interior knots of the half profile.
    pub fn breakpoints(&self) -> &[f64] {
        &self.knots[1..self.half_end]
    }

    /// Position and first two derivatives: (x, y, x', y', x'', y'').
    pub fn eval(&self, t: f64) -> [f64; 6] {
        let m = self.xs.len();
        let i = match self.knots[..=m].binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(m - 1),
            Err(i) => i.saturating_sub(1).min(m - 1),
        };
        let j = (i + 1) % m;
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        let seg = |v: &[f64], mm: &[f64]| {
            let val = a * v[i] + b * v[j] + ((a * a * a - a) * mm[i] + (b * b * b - b) * mm[j]) * h * h / 6.0;
            let d1 = (v[j] - v[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * mm[i] + (3.0 * b * b - 1.0) / 6.0 * h * mm[j];
            let d2 = a * mm[i] + b * mm[j];
            (val, d1, d2)
        };
        let (x, dx, ddx) = seg(&self.xs, &self.mx);
        let (y, dy, ddy) = seg(&self.ys, &self.my);
        [x, y, dx, dy, ddx, ddy]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let pts: Vec<[f64; 2]> = self.points.iter().map(|p| [p[0] * factor, p[1] * factor]).collect();
        // chord-length parametrization scales linearly, so refitting cannot fail
        Self::fit(&pts).expect("scaled spline refit")
    }
}

/// Second derivatives of the periodic interpolating cubic spline.
fn periodic_second_derivatives(knots: &[f64], v: &[f64]) -> Vec<f64> {
    let m = v.len();
    let h: Vec<f64> = (0..m).map(|i| knots[i + 1] - knots[i]).collect();
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let hp = h[(i + m - 1) % m];
        let hn = h[i];
        sub[i] = hp;
        diag[i] = 2.0 * (hp + hn);
        sup[i] = hn;
        let vp = v[(i + m - 1) % m];
        let vn = v[(i + 1) % m];
        rhs[i] = 6.0 * ((vn - v[i]) / hn - (v[i] - vp) / hp);
    }
    solve_cyclic(&sub, &diag, &sup, &rhs)
}

/// Cyclic tridiagonal solve via Sherman–Morrison.
fn solve_cyclic(a: &[f64], b: &[f64], c: &[f64], r: &[f64]) -> Vec<f64> {
    let n = b.len();
    let alpha = c[n - 1];
    let beta = a[0];
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;
    let x = solve_tridiagonal(a, &bb, c, r);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(a, &bb, c, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], r: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    dp[0] = r[0] / b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (r[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn semicircle(n: usize) -> Vec<[f64; 2]> {
        (0..=n)
            .map(|i| {
                let th = -PI / 2.0 + PI * i as f64 / n as f64;
                [th.cos(), th.sin()]
            })
            .collect()
    }

    #[test]
    fn interpolates_nodes() {
        let pts = semicircle(20);
        let s = ProfileSpline::fit(&pts).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let e = s.eval(s.knots[i]);
            assert!((e[0] - p[0]).abs() < 1e-12 && (e[1] - p[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn poles_are_horizontal_and_odd() {
        let s = ProfileSpline::fit(&semicircle(16)).unwrap();
        let [t0, t1] = s.range();
        for t in [t0, t1] {
            let e = s.eval(t);
            assert!(e[0].abs() < 1e-14);
            assert!(e[3].abs() < 1e-12, "y' at pole = {}", e[3]);
            assert!(e[4].abs() < 1e-10, "x'' at pole = {}", e[4]);
        }
    }

    #[test]
    fn approximates_circle_curvature() {
        let s = ProfileSpline::fit(&semicircle(200)).unwrap();
        let [t0, t1] = s.range();
        for k in 1..50 {
            let t = t0 + (t1 - t0) * k as f64 / 50.0;
            let [_, _, dx, dy, ddx, ddy] = s.eval(t);
            let kappa = (dx * ddy - dy * ddx) / (dx * dx + dy * dy).powf(1.5);
            assert!((kappa - 1.0).abs() < 1e-3, "kappa {kappa}");
        }
    }
}
