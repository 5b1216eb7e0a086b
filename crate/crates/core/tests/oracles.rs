//! Independent oracles for the graph curvature formulas and the neck system.

use std::f64::consts::PI;

use confined_willmore::bump::{amplitude_limit, bump_surface, eta::EtaKind, BumpSpec};
use confined_willmore::neck::{build_sigma_plus, closed_form_energies, solve_neck};
use proptest::prelude::*;

/// η(u) = exp(1 − 1/(1 − u²)) and its first two derivatives, written out by hand.
fn eta(u: f64) -> (f64, f64, f64) {
    let q = 1.0 - u * u;
    if q <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let e = (1.0 - 1.0 / q).exp();
    let e1 = -2.0 * u * e / (q * q);
    let e2 = 4.0 * u * u * e / q.powi(4) - 2.0 * e * (1.0 / (q * q) + 4.0 * u * u / q.powi(3));
    (e, e1, e2)
}

/// Surface area element of the graph ψ(r) = √(1 − r²) − t η(r/s).
fn g_oracle(r: f64, s: f64, t: f64) -> f64 {
    let (_, e1, _) = eta(r / s);
    let g2 = 1.0 / (1.0 - r * r) + 2.0 * r / (1.0 - r * r).sqrt() * (t / s) * e1 + (t / s).powi(2) * e1 * e1;
    g2.sqrt()
}

/// Mean curvature from the expanded divergence form.
fn h_oracle(r: f64, s: f64, t: f64) -> f64 {
    let (_, e1, e2) = eta(r / s);
    let w = 1.0 - r * r;
    let g3h = 2.0 * w.powf(-1.5)
        + t / (s * s) * e2
        + t / s / r * e1
        + 3.0 * t / s * r / w * e1
        + 3.0 * (t / s).powi(2) / w.sqrt() * e1 * e1
        + (t / s).powi(3) / r * e1.powi(3);
    g3h / g_oracle(r, s, t).powi(3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn graph_frame_matches_expanded_formulas(
        s in 0.01f64..0.3,
        t_frac in 0.0f64..0.95,
        r_frac in 0.01f64..0.99,
    ) {
        let t = t_frac * amplitude_limit(s, EtaKind::StdBump);
        let r = r_frac * s;
        let surf = bump_surface(&BumpSpec::unchecked(s, t).unwrap()).unwrap();
        let f = surf.frame(1, r).unwrap();
        let g = g_oracle(r, s, t);
        let h = h_oracle(r, s, t);
        prop_assert!((f.speed - g).abs() <= 1e-10 * g, "g: {} vs {}", f.speed, g);
        prop_assert!((f.mean - h).abs() <= 1e-10 * h.abs().max(1.0), "H: {} vs {}", f.mean, h);
    }
}

/// F₂ = 0 solved for r₁ in terms of (r, β).
fn r1_of(r: f64, beta: f64) -> f64 {
    (beta.cos() - r * beta.sin()) / (beta.sin() + beta.cos())
}

/// F₁ along the curve F₂ = 0.
fn reduced(r: f64, beta: f64) -> f64 {
    let (sb, cb) = beta.sin_cos();
    let r1 = r1_of(r, beta);
    r * cb + 2.0 * r * sb * sb * (1.0 / sb).acosh() - r1 * cb - (1.0 - r1) * sb
}

/// Smallest positive root of the reduced equation by scan and bisection.
fn beta_oracle(r: f64) -> f64 {
    let n = 20_000;
    let hi = PI / 4.0;
    let mut prev = (1e-15, reduced(r, 1e-15));
    for i in 1..=n {
        let b = hi * i as f64 / n as f64;
        let v = reduced(r, b);
        if prev.1.signum() != v.signum() {
            let (mut lo, mut up) = (prev.0, b);
            let flo = prev.1;
            for _ in 0..200 {
                let mid = 0.5 * (lo + up);
                if (reduced(r, mid) > 0.0) == (flo > 0.0) {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            return 0.5 * (lo + up);
        }
        prev = (b, v);
    }
    panic!("no root for r = {r}");
}

#[test]
fn neck_solution_matches_bisection_oracle() {
    for r in [0.55, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999] {
        let sol = solve_neck(r).unwrap();
        let beta = beta_oracle(r);
        assert!((sol.beta - beta).abs() < 1e-10, "r = {r}: beta {} vs {beta}", sol.beta);
        assert!((sol.r1 - r1_of(r, beta)).abs() < 1e-10, "r = {r}: r1");
    }
}

#[test]
fn neck_derivatives_at_degenerate_end() {
    let h = 1e-4;
    let (b1, b2) = (beta_oracle(1.0 - h), beta_oracle(1.0 - 2.0 * h));
    // One-sided second-order difference at r = 1, where β = 0 and r₁ = 1.
    let d_beta = (3.0 * 0.0 - 4.0 * b1 + b2) / (2.0 * h);
    let d_r1 = (3.0 * 1.0 - 4.0 * r1_of(1.0 - h, b1) + r1_of(1.0 - 2.0 * h, b2)) / (2.0 * h);
    assert!((d_beta + 0.5).abs() < 1e-3, "beta' = {d_beta}");
    assert!((d_r1 - 1.0).abs() < 1e-3, "r1' = {d_r1}");
}

/// Composite Simpson rule for ∫ 2πx |γ′| over each segment, with |γ′| from
/// central differences of sampled points.
fn simpson_area(surface: &confined_willmore::RevolutionSurface) -> f64 {
    let n = 20_000;
    surface
        .segments()
        .iter()
        .map(|seg| {
            let [a, b] = seg.range();
            let h = (b - a) / n as f64;
            let f = |p: f64| {
                let d = 1e-6 * (b - a).abs();
                let q0 = seg.point(p - d);
                let q1 = seg.point(p + d);
                let speed = (q1[0] - q0[0]).hypot(q1[1] - q0[1]) / (2.0 * d);
                2.0 * PI * seg.point(p)[0] * speed
            };
            let mut sum = f(a) + f(b);
            for i in 1..n {
                sum += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            (sum * h / 3.0).abs()
        })
        .sum()
}

#[test]
fn neck_area_closed_form_against_simpson() {
    for r in [0.9, 0.95] {
        let sol = solve_neck(r).unwrap();
        let a = closed_form_energies(&sol).a_plus;
        let simpson = simpson_area(&build_sigma_plus(&sol).unwrap());
        assert!((a - simpson).abs() < 1e-6 * a, "r = {r}: {a} vs {simpson}");
    }
}
