//! Acceptance suite: one PASS/FAIL line per criterion, with the sub-checks
//! indented below it. Exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use confined_willmore::bump::{
    bump_upper_bound, build_bump_sphere, compute_alpha_star, eta::EtaKind, log_grid, max_abs_mean_curvature,
    sweep_bump, BumpSpec,
};
use confined_willmore::identity::verify_all;
use confined_willmore::neck::{build_double_sphere, build_sigma_plus, closed_form_energies, solve_neck};
use confined_willmore::probe::{minimize, minimize_multistart, sandwich_check, ProbeConfig, ProbeResult};
use confined_willmore::sweep::sweep_bounds;
use confined_willmore::RevolutionSurface;

const FOUR_PI: f64 = 4.0 * PI;

// Criterion 1
const A_LIMIT_R: f64 = 1.0 - 1e-6;
const A_LIMIT_TOL: f64 = 1e-4;
const A_PRIME_EXPECTED: f64 = 2.0 * PI * (2.0 - PI / 2.0);
const A_PRIME_REL: f64 = 1e-3;
const W_PRIME_EXPECTED: f64 = -PI * PI;
const W_PRIME_REL: f64 = 1e-3;
const R1_PRIME_EXPECTED: f64 = 1.0;
const BETA_PRIME_EXPECTED: f64 = -0.5;
const PARAM_PRIME_TOL: f64 = 1e-3;
const FD_STEP: f64 = 1e-5;

// Criterion 2
const ORACLE_RADII: [f64; 3] = [0.9, 0.95, 0.99];
const ORACLE_REL: f64 = 1e-8;

// Criterion 3
const IDENTITY_TOL: f64 = 1e-6;
const POINTWISE_TOL: f64 = 1e-12;

// Criterion 4
const GAP_FLOOR: f64 = -1e-6;
const GAP_STRICT: f64 = 1e-4;
/// Distance from 4π or 8π below which an area counts as one of them.
const SPECIAL_AREA_ABS: f64 = 1e-6;

// Criterion 5
const SLOPE_EXPECTED: f64 = 0.5;
const SLOPE_TOL: f64 = 0.05;
const R2_MIN: f64 = 0.99;

// Criterion 6
const DS_AREA_TOL: f64 = 1e-9;
const DS_W_TOL: f64 = 0.05;

// Criterion 7
const SPHERE_W_REL: f64 = 5e-3;
const EIGHT_PI_W_REL: f64 = 0.02;

// Criterion 8
const H_VARIATION: f64 = 0.05;

// Criterion 9
const DILATION_W_REL: f64 = 1e-8;
const DILATION_A_REL: f64 = 1e-10;

struct Criterion {
    id: usize,
    title: &'static str,
    checks: Vec<(bool, String)>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: usize, title: &'static str) -> Self {
        Self {
            id,
            title,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, pass: bool, detail: String) {
        self.checks.push((pass, detail));
    }

    fn note(&mut self, detail: String) {
        self.notes.push(detail);
    }

    fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.0)
    }

    fn print(&self) {
        println!(
            "criterion {}: {} | {}",
            self.id,
            if self.pass() { "PASS" } else { "FAIL" },
            self.title
        );
        for (ok, d) in &self.checks {
            println!("    [{}] {d}", if *ok { "ok" } else { "FAIL" });
        }
        for n in &self.notes {
            println!("    [info] {n}");
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// One-sided second-order difference at r = 1 from values at 1, 1−h, 1−2h.
fn backward_derivative(f0: f64, f1: f64, f2: f64, h: f64) -> f64 {
    (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h)
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "closed-form limits of the neck construction at r -> 1");
    let sol = solve_neck(A_LIMIT_R).expect("neck solve near r = 1");
    let a_lim = closed_form_energies(&sol).a_plus;
    c.check(
        (a_lim - FOUR_PI).abs() <= A_LIMIT_TOL,
        format!("A+(1-1e-6) = {a_lim:.10}, 4pi = {FOUR_PI:.10}, |diff| = {:.3e} (tol {A_LIMIT_TOL:e})", (a_lim - FOUR_PI).abs()),
    );

    let h = FD_STEP;
    let s1 = solve_neck(1.0 - h).unwrap();
    let s2 = solve_neck(1.0 - 2.0 * h).unwrap();
    let (e1, e2) = (closed_form_energies(&s1), closed_form_energies(&s2));

    let a_prime = backward_derivative(FOUR_PI, e1.a_plus, e2.a_plus, h);
    c.check(
        rel(a_prime, A_PRIME_EXPECTED) <= A_PRIME_REL,
        format!(
            "A+'(1) = {a_prime:.6}, expected {A_PRIME_EXPECTED:.6}, rel err {:.3e} (tol {A_PRIME_REL:e})",
            rel(a_prime, A_PRIME_EXPECTED)
        ),
    );
    c.note(format!(
        "A+'(1) against the stated decimal 8.53446: rel err {:.3e}; 8pi - pi^2 = {:.6}",
        rel(a_prime, 8.53446),
        8.0 * PI - PI * PI
    ));

    let w_prime = backward_derivative(FOUR_PI, e1.w_plus, e2.w_plus, h);
    c.check(
        rel(w_prime, W_PRIME_EXPECTED) <= W_PRIME_REL,
        format!(
            "W+'(1) from the closed form = {w_prime:.6}, expected {W_PRIME_EXPECTED:.6}, rel err {:.3e} (tol {W_PRIME_REL:e})",
            rel(w_prime, W_PRIME_EXPECTED)
        ),
    );
    let w_prime_exact = backward_derivative(FOUR_PI, e1.w_plus_exact, e2.w_plus_exact, h);
    c.note(format!("W+'(1) of the exact torus-piece energy = {w_prime_exact:.6}"));

    let r1_prime = backward_derivative(1.0, s1.r1, s2.r1, h);
    let beta_prime = backward_derivative(0.0, s1.beta, s2.beta, h);
    c.check(
        (r1_prime - R1_PRIME_EXPECTED).abs() <= PARAM_PRIME_TOL,
        format!("r1'(1) = {r1_prime:.6}, expected {R1_PRIME_EXPECTED} (tol {PARAM_PRIME_TOL:e})"),
    );
    c.check(
        (beta_prime - BETA_PRIME_EXPECTED).abs() <= PARAM_PRIME_TOL,
        format!("beta'(1) = {beta_prime:.6}, expected {BETA_PRIME_EXPECTED} (tol {PARAM_PRIME_TOL:e})"),
    );
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "quadrature of the assembled neck piece against closed forms");
    for r in ORACLE_RADII {
        let sol = solve_neck(r).unwrap();
        let e = closed_form_energies(&sol);
        let rep = build_sigma_plus(&sol).unwrap().report().unwrap();
        c.check(
            rel(rep.area, e.a_plus) <= ORACLE_REL,
            format!("r = {r}: area {:.12} vs A+ {:.12}, rel {:.2e}", rep.area, e.a_plus, rel(rep.area, e.a_plus)),
        );
        c.check(
            rel(rep.willmore, e.w_plus) <= ORACLE_REL,
            format!(
                "r = {r}: Willmore {:.12} vs closed form {:.12}, rel {:.2e}",
                rep.willmore,
                e.w_plus,
                rel(rep.willmore, e.w_plus)
            ),
        );
        c.note(format!(
            "r = {r}: Willmore vs exact torus-piece form {:.12}, rel {:.2e}",
            e.w_plus_exact,
            rel(rep.willmore, e.w_plus_exact)
        ));
    }
    c
}

struct CorpusEntry {
    label: String,
    surface: RevolutionSurface,
}

fn corpus(probes: &[(String, ProbeResult)]) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for rho in [0.3, 0.5, 0.9, 1.0] {
        out.push(CorpusEntry {
            label: format!("sphere(rho={rho})"),
            surface: RevolutionSurface::sphere(rho, 0.0),
        });
    }
    for r in [0.99, 0.995, 0.999, 0.9995, 0.9999] {
        out.push(CorpusEntry {
            label: format!("double_sphere(r={r})"),
            surface: build_double_sphere(r, 2.0 * FOUR_PI, None).unwrap().surface,
        });
    }
    let alpha = 2.0 * compute_alpha_star(EtaKind::StdBump);
    for s in [0.02, 0.05, 0.1, 0.2, 0.3] {
        out.push(CorpusEntry {
            label: format!("bump(s={s})"),
            surface: build_bump_sphere(s, alpha).unwrap(),
        });
    }
    for (label, p) in probes {
        match p.profile.to_surface() {
            Ok(surface) => out.push(CorpusEntry {
                label: label.clone(),
                surface,
            }),
            Err(e) => println!("    [info] {label}: spline surface unavailable: {e}"),
        }
    }
    out
}

fn criterion_3_4(corpus: &[CorpusEntry]) -> (Criterion, Criterion) {
    let mut c3 = Criterion::new(3, "identity suite on the surface corpus");
    let mut c4 = Criterion::new(4, "lower bound W >= area on confined corpus surfaces");
    c3.note(format!("corpus size {}", corpus.len()));
    for e in corpus {
        let ids = match verify_all(&e.surface) {
            Ok(r) => r,
            Err(err) => {
                c3.check(false, format!("{}: evaluation failed: {err}", e.label));
                continue;
            }
        };
        let gb = ids.residual_gauss_bonnet.unwrap_or(f64::NAN);
        let tf = ids.residual_tracefree.unwrap_or(f64::NAN);
        let worst = [ids.residual_first_variation.abs(), ids.residual_area_defect.abs(), gb.abs(), tf.abs()]
            .into_iter()
            .fold(0.0, f64::max);
        let ok = worst <= IDENTITY_TOL && ids.pointwise_tracefree <= POINTWISE_TOL;
        c3.check(
            ok,
            format!(
                "{}: first variation {:.1e}, area defect {:.1e}, Gauss-Bonnet {:.1e}, trace-free {:.1e}, pointwise {:.1e}",
                e.label, ids.residual_first_variation, ids.residual_area_defect, gb, tf, ids.pointwise_tracefree
            ),
        );
        match ids.willmore_area_gap {
            Some(gap) => {
                let special = [FOUR_PI, 2.0 * FOUR_PI]
                    .iter()
                    .any(|&a| (ids.area - a).abs() <= SPECIAL_AREA_ABS);
                let floor = if special { GAP_FLOOR } else { GAP_STRICT };
                c4.check(
                    gap >= floor,
                    format!(
                        "{}: area/4pi = {:.6}, W - area = {gap:.3e} (required >= {floor:e})",
                        e.label,
                        ids.area / FOUR_PI
                    ),
                );
            }
            None => c4.note(format!("{}: not confined, skipped", e.label)),
        }
    }
    (c3, c4)
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "square-root growth of the bump family");
    let alpha = 2.0 * compute_alpha_star(EtaKind::StdBump);
    let sweep = sweep_bump(&log_grid(0.02, 0.2, 8), alpha).unwrap();
    c.check(
        (sweep.slope - SLOPE_EXPECTED).abs() <= SLOPE_TOL,
        format!("log-log slope {:.4}, expected {SLOPE_EXPECTED} +- {SLOPE_TOL}", sweep.slope),
    );
    c.check(sweep.r_squared >= R2_MIN, format!("R^2 = {:.6} (min {R2_MIN})", sweep.r_squared));
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "double sphere approaches area and energy 8pi");
    let target = 2.0 * FOUR_PI;
    let mut ws = Vec::new();
    for r in [0.999, 0.9995, 0.9999] {
        let rep = build_double_sphere(r, target, None).unwrap().surface.report().unwrap();
        if r == 0.999 {
            c.check(
                (rep.area - target).abs() <= DS_AREA_TOL,
                format!("r = {r}: area - 8pi = {:.3e} (tol {DS_AREA_TOL:e})", rep.area - target),
            );
            c.check(
                (rep.willmore - target).abs() <= DS_W_TOL,
                format!(
                    "r = {r}: W = {:.6}, 8pi = {target:.6}, |diff| = {:.4} (tol {DS_W_TOL})",
                    rep.willmore,
                    (rep.willmore - target).abs()
                ),
            );
        }
        ws.push((r, rep.willmore));
    }
    let decreasing = ws.windows(2).all(|w| w[1].1 < w[0].1);
    c.check(
        decreasing,
        format!(
            "W along r: {}",
            ws.iter().map(|(r, w)| format!("{r} -> {w:.6}")).collect::<Vec<_>>().join(", ")
        ),
    );
    c
}

fn criterion_7(probes: &[(String, ProbeResult)], labels: &[String]) -> Criterion {
    let mut c = Criterion::new(7, "probe sandwich a <= W_est <= upper bound");
    for ((tag, p), init) in probes.iter().zip(labels) {
        let a = p.a_target;
        let ratio = a / FOUR_PI;
        c.note(format!(
            "{tag}: init {init}, W_est/4pi = {:.6}, spline W/4pi = {}, area error {:.1e}, confinement {:.1e}, iterations {}, converged {}, branch distance {:.2e}",
            p.w_est / FOUR_PI,
            p.w_spline.map_or("n/a".to_string(), |w| format!("{:.6}", w / FOUR_PI)),
            p.area_error,
            p.confinement_violation,
            p.iterations,
            p.converged,
            p.min_branch_distance
        ));
        if (ratio - 1.0).abs() < 1e-12 {
            c.check(
                rel(p.w_est, FOUR_PI) <= SPHERE_W_REL,
                format!("a = 4pi: W_est/4pi = {:.6} (tol {SPHERE_W_REL})", p.w_est / FOUR_PI),
            );
        } else if (ratio - 2.0).abs() < 1e-12 {
            c.check(
                rel(p.w_est, 2.0 * FOUR_PI) <= EIGHT_PI_W_REL,
                format!("a = 8pi: W_est/8pi = {:.6} (tol {EIGHT_PI_W_REL})", p.w_est / (2.0 * FOUR_PI)),
            );
        } else {
            let (upper, source) = match bump_upper_bound(a) {
                Ok(b) => (b.willmore, "bump family at area a".to_string()),
                Err(_) => {
                    let rows = sweep_bounds(&[a], None::<fn(f64) -> Option<f64>>).unwrap().rows;
                    let row = &rows[0];
                    (row.upper.unwrap_or(f64::INFINITY), format!("construction envelope ({})", row.source))
                }
            };
            match sandwich_check(a, p, upper) {
                Ok(s) => c.check(
                    s.pass,
                    format!(
                        "a = {ratio}*4pi: lower margin {:.3e}, upper margin {:.3e}, upper/4pi = {:.6} from {source}",
                        s.lower_margin,
                        s.upper_margin,
                        upper / FOUR_PI
                    ),
                ),
                Err(e) => c.check(
                    false,
                    format!(
                        "a = {ratio}*4pi: {e}; W_est/4pi = {:.6}, bounds [{ratio}, {:.6}] from {source}",
                        p.w_est / FOUR_PI,
                        upper / FOUR_PI
                    ),
                ),
            }
        }
    }
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(8, "uniform mean curvature bound across bump scales");
    let alpha = 2.0 * compute_alpha_star(EtaKind::StdBump);
    let hs: Vec<(f64, f64)> = [0.02, 0.05, 0.1, 0.2]
        .iter()
        .map(|&s| (s, max_abs_mean_curvature(&BumpSpec::new(s, alpha).unwrap())))
        .collect();
    let lo = hs.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
    let hi = hs.iter().map(|h| h.1).fold(0.0, f64::max);
    let variation = (hi - lo) / lo;
    c.check(
        variation <= H_VARIATION,
        format!(
            "max |H|: {}; spread (max-min)/min = {variation:.4} (tol {H_VARIATION})",
            hs.iter().map(|(s, h)| format!("s={s} -> {h:.6}")).collect::<Vec<_>>().join(", ")
        ),
    );
    c
}

fn criterion_9(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new(9, "dilation invariance of W and quadratic scaling of area");
    for e in corpus {
        let Ok(base) = e.surface.report() else {
            c.check(false, format!("{}: base report failed", e.label));
            continue;
        };
        let mut worst_w: f64 = 0.0;
        let mut worst_a: f64 = 0.0;
        for k in [0.5, 0.9] {
            match e.surface.dilate(k).and_then(|s| s.report()) {
                Ok(r) => {
                    worst_w = worst_w.max(rel(r.willmore, base.willmore));
                    worst_a = worst_a.max(rel(r.area, k * k * base.area));
                }
                Err(_) => {
                    worst_w = f64::INFINITY;
                    worst_a = f64::INFINITY;
                }
            }
        }
        c.check(
            worst_w <= DILATION_W_REL && worst_a <= DILATION_A_REL,
            format!("{}: W rel {worst_w:.1e}, area rel {worst_a:.1e}", e.label),
        );
    }
    c
}

fn run_probes() -> (Vec<(String, ProbeResult)>, Vec<String>) {
    let config = ProbeConfig::default();
    let mut out = Vec::new();
    let mut labels = Vec::new();
    let sphere = minimize(FOUR_PI, None, &config).expect("probe at 4pi");
    out.push(("probe(a=4pi)".to_string(), sphere));
    labels.push("sphere".to_string());
    for ratio in [1.05, 1.1, 2.0] {
        let (label, r) = minimize_multistart(ratio * FOUR_PI, &config).expect("multistart probe");
        out.push((format!("probe(a={ratio}*4pi)"), r));
        labels.push(label);
    }
    (out, labels)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results = vec![criterion_1(), criterion_2()];
    let (probes, labels) = run_probes();
    let corpus_probes: Vec<(String, ProbeResult)> = probes
        .iter()
        .filter(|(tag, _)| tag != "probe(a=1.1*4pi)")
        .cloned()
        .collect();
    let corpus = corpus(&corpus_probes);
    let (c3, c4) = criterion_3_4(&corpus);
    results.extend([c3, c4, criterion_5(), criterion_6(), criterion_7(&probes, &labels), criterion_8()]);
    results.push(criterion_9(&corpus));
    println!();
    for c in &results {
        c.print();
    }
    let passed = results.iter().filter(|c| c.pass()).count();
    println!(
        "\nacceptance: {passed}/{} criteria passed in {:.1} s",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
