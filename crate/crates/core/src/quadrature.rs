//! Adaptive Gauss–Legendre quadrature.
//!
//! A fixed 16-point rule is applied on an interval and on its two halves; the
//! halves are accepted when they agree with the whole to within tolerance,
//! otherwise each half is subdivided again, up to [`MAX_DEPTH`] levels.
//! Integrands are vector valued; all components share the same nodes.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Order of the fixed rule.
pub const ORDER: usize = 16;
/// Maximum dyadic subdivision depth.
pub const MAX_DEPTH: u32 = 20;
/// Default absolute and relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Absolute/relative tolerance pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: DEFAULT_TOL,
            rel: DEFAULT_TOL,
        }
    }
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Self { abs: tol, rel: tol }
    }
}

/// Nodes and weights of the Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// The shared 16-point rule.
    pub fn order16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(ORDER))
    }

    /// Maps the rule onto `[a, b]` and sums `f` at the mapped nodes.
    pub fn apply<const N: usize, F>(&self, a: f64, b: f64, f: &mut F) -> Result<[f64; N]>
    where
        F: FnMut(f64) -> Result<[f64; N]>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = [0.0; N];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x)?;
            for k in 0..N {
                acc[k] += w * v[k];
            }
        }
        for a in acc.iter_mut() {
            *a *= half;
        }
        Ok(acc)
    }
}

/// Legendre polynomial P_n(z) and its derivative.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Integrates a vector-valued function over `[a, b]` adaptively.
///
/// `a > b` is allowed and flips the sign, matching the oriented integral.
pub fn integrate_vec<const N: usize, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<[f64; N]>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    if a == b {
        return Ok([0.0; N]);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let rule = GaussLegendre::order16();
    let whole = rule.apply(lo, hi, &mut f)?;
    let scale = whole.map(f64::abs);
    let mut out = [0.0; N];
    let mut worst = 0.0f64;
    refine(rule, &mut f, lo, hi, whole, 0, 1.0, &scale, tol, &mut out, &mut worst)?;
    Ok(out.map(|v| sign * v))
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_vec::<1, _>(|x| f(x).map(|v| [v]), a, b, tol).map(|v| v[0])
}

#[allow(clippy::too_many_arguments)]
fn refine<const N: usize, F>(
    rule: &GaussLegendre,
    f: &mut F,
    a: f64,
    b: f64,
    whole: [f64; N],
    depth: u32,
    frac: f64,
    scale: &[f64; N],
    tol: Tolerance,
    out: &mut [f64; N],
    worst: &mut f64,
) -> Result<()>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let m = 0.5 * (a + b);
    let left = rule.apply(a, m, f)?;
    let right = rule.apply(m, b, f)?;
    let mut ok = true;
    let mut err_max = 0.0f64;
    for k in 0..N {
        let halves = left[k] + right[k];
        let err = (halves - whole[k]).abs();
        let allowed = tol.abs.max(tol.rel * scale[k].max(halves.abs())) * frac;
        err_max = err_max.max(err);
        if !(err <= allowed) {
            ok = false;
        }
    }
    if ok {
        for k in 0..N {
            out[k] += left[k] + right[k];
        }
        return Ok(());
    }
    if depth + 1 >= MAX_DEPTH {
        *worst = worst.max(err_max);
        let mut estimate = out[0];
        estimate += left[0] + right[0];
        return Err(Error::QuadratureFailure {
            estimate,
            error: *worst,
        });
    }
    refine(rule, f, a, m, left, depth + 1, 0.5 * frac, scale, tol, out, worst)?;
    refine(rule, f, m, b, right, depth + 1, 0.5 * frac, scale, tol, out, worst)
}
