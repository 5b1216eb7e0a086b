use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use confined_willmore::bump::{compute_alpha_star, eta::EtaKind, sweep_bump, BumpSpec};
use confined_willmore::identity::{report_with_residuals, verify_all_with};
use confined_willmore::io::{
    bump_sweep_csv, csv_table, fmt_num, profile_svg, record_csv, surface_from_json, surface_to_json, sweep_csv,
    sweep_svg, to_json_pretty,
};
use confined_willmore::neck::{build_double_sphere, build_sigma_plus, closed_form_energies, solve_neck};
use confined_willmore::probe::{minimize, minimize_multistart, ProbeConfig};
use confined_willmore::quadrature::Tolerance;
use confined_willmore::sweep::{area_grid, sweep_bounds};
use confined_willmore::{Error, RevolutionSurface};

const EXIT_TOLERANCE: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_GEOMETRY: u8 = 3;
const EXIT_NECK: u8 = 4;
const EXIT_BUMP: u8 = 5;
const EXIT_PROBE: u8 = 6;

/// Confined Willmore surfaces in the unit ball.
#[derive(Parser, Debug)]
#[command(name = "cw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum NeckEmit {
    /// Solved parameters and closed-form energies.
    Solution,
    /// Surface JSON of the open neck piece.
    SigmaPlus,
    /// Surface JSON of the closed double sphere of area 8π.
    DoubleSphere,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BumpEmit {
    Table,
    Surface,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Init {
    Sphere,
    Multistart,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Area, Willmore energy and curvature integrals of a surface JSON file.
    Report {
        surface: PathBuf,
        /// Also write the profile plot here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Solve the neck system at inner radius r.
    Neck {
        #[arg(long)]
        r: f64,
        #[arg(long, value_enum, default_value_t = NeckEmit::Solution)]
        emit: NeckEmit,
    },
    /// Evaluate the bump family at one or more scales s.
    Bump {
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<f64>,
        /// Amplitude ratio t/s²; defaults to twice the critical ratio.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = BumpEmit::Table)]
        emit: BumpEmit,
    },
    /// Penalized descent for the least Willmore energy at fixed area.
    Optimize {
        /// Target area; accepts a number or a multiple of pi such as `8pi`.
        #[arg(long, value_parser = parse_area)]
        area: f64,
        #[arg(long, default_value_t = 400)]
        nodes: usize,
        #[arg(long, value_enum, default_value_t = Init::Sphere)]
        init: Init,
        #[arg(long, default_value_t = 20_000)]
        max_iterations: usize,
    },
    /// Check the integral identities on a surface JSON file.
    Verify {
        surface: PathBuf,
        /// Tolerance on integrated residuals.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Tolerance on the normalized pointwise trace-free residual.
        #[arg(long, default_value_t = 1e-12)]
        pointwise_tol: f64,
    },
    /// Upper and lower bounds on w(a) over an area grid.
    Sweep {
        #[arg(long, value_parser = parse_area)]
        a_min: f64,
        #[arg(long, value_parser = parse_area)]
        a_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        /// Also run the optimizer at every grid point.
        #[arg(long)]
        probe: bool,
        #[arg(long, default_value_t = 400)]
        nodes: usize,
    },
}

fn parse_area(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (body, unit) = match t.strip_suffix("pi") {
        Some(k) => (k.trim_end_matches('*'), PI),
        None => (t, 1.0),
    };
    if body.is_empty() {
        return Ok(unit);
    }
    body.split('*')
        .map(|f| f.trim().parse::<f64>())
        .try_fold(unit, |acc, f| f.map(|v| acc * v))
        .map_err(|e| format!("invalid area `{text}`: {e}"))
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn module(code: u8) -> impl Fn(Error) -> Failure {
        move |e| match e {
            Error::Schema(_) => Failure::new(EXIT_SCHEMA, e.to_string()),
            _ => Failure::new(code, e.to_string()),
        }
    }
}

/// Output text plus whether every checked tolerance held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

fn quad_tolerance() -> Result<Tolerance, Failure> {
    match std::env::var("CW_QUAD_TOL") {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(Tolerance::uniform(t)),
            _ => Err(Failure::new(EXIT_SCHEMA, format!("CW_QUAD_TOL must be a positive number, got `{v}`"))),
        },
        Err(_) => Ok(Tolerance::default()),
    }
}

fn read_surface(path: &Path) -> Result<RevolutionSurface, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_SCHEMA, format!("cannot read {}: {e}", path.display())))?;
    surface_from_json(&text).map_err(Failure::module(EXIT_GEOMETRY))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::new(EXIT_SCHEMA, format!("cannot write {}: {e}", path.display())))
}

fn cmd_report(surface: &Path, svg: Option<&Path>, format: Format, tol: Tolerance) -> Result<Outcome, Failure> {
    let surf = read_surface(surface)?;
    let report = report_with_residuals(&surf, tol).map_err(Failure::module(EXIT_GEOMETRY))?;
    if let Some(p) = svg {
        write_file(p, &profile_svg(&surf))?;
    }
    let text = match format {
        Format::Json => to_json_pretty(&report),
        Format::Csv => record_csv(&report).map_err(Failure::module(EXIT_GEOMETRY))?,
        Format::Svg => profile_svg(&surf),
    };
    Ok(Outcome::ok(text))
}

fn cmd_neck(r: f64, emit: NeckEmit, format: Format, tol: Tolerance) -> Result<Outcome, Failure> {
    let fail = Failure::module(EXIT_NECK);
    let sol = solve_neck(r).map_err(&fail)?;
    let energies = closed_form_energies(&sol);
    let surface = match emit {
        NeckEmit::Solution | NeckEmit::SigmaPlus => build_sigma_plus(&sol).map_err(&fail)?,
        NeckEmit::DoubleSphere => build_double_sphere(r, 8.0 * PI, None).map_err(&fail)?.surface,
    };
    let text = match (format, emit) {
        (Format::Svg, _) => profile_svg(&surface),
        (Format::Json, NeckEmit::Solution) => {
            let rep = surface.report_with(tol).map_err(&fail)?;
            to_json_pretty(&json!({
                "solution": sol,
                "energies": energies,
                "quadrature": { "area": rep.area, "willmore": rep.willmore },
            }))
        }
        (Format::Csv, NeckEmit::Solution) => {
            let mut merged = serde_json::to_value(sol).map_err(|e| Failure::new(EXIT_NECK, e.to_string()))?;
            let extra = serde_json::to_value(energies).map_err(|e| Failure::new(EXIT_NECK, e.to_string()))?;
            if let (Some(m), Some(x)) = (merged.as_object_mut(), extra.as_object()) {
                m.extend(x.clone());
            }
            record_csv(&merged).map_err(&fail)?
        }
        (Format::Json, _) => surface_to_json(&surface),
        (Format::Csv, _) => nodes_csv(&surface.sample(256)),
    };
    Ok(Outcome::ok(text))
}

fn nodes_csv(points: &[[f64; 2]]) -> String {
    let rows: Vec<Vec<String>> = points.iter().map(|p| vec![fmt_num(p[0]), fmt_num(p[1])]).collect();
    csv_table(&["x", "y"], &rows)
}

fn cmd_bump(s: &[f64], alpha: Option<f64>, emit: BumpEmit, format: Format) -> Result<Outcome, Failure> {
    let fail = Failure::module(EXIT_BUMP);
    let alpha = alpha.unwrap_or_else(|| 2.0 * compute_alpha_star(EtaKind::StdBump));
    let first = s.first().copied().ok_or_else(|| Failure::new(EXIT_SCHEMA, "--s needs a value"))?;
    let surface = || -> Result<RevolutionSurface, Failure> {
        let spec = BumpSpec::new(first, alpha).map_err(&fail)?;
        confined_willmore::bump::bump_surface(&spec).map_err(&fail)
    };
    let text = match (format, emit) {
        (Format::Svg, _) => profile_svg(&surface()?),
        (Format::Json, BumpEmit::Surface) => surface_to_json(&surface()?),
        (Format::Csv, BumpEmit::Surface) => nodes_csv(&surface()?.sample(256)),
        (Format::Json, BumpEmit::Table) => to_json_pretty(&sweep_bump(s, alpha).map_err(&fail)?),
        (Format::Csv, BumpEmit::Table) => bump_sweep_csv(&sweep_bump(s, alpha).map_err(&fail)?),
    };
    Ok(Outcome::ok(text))
}

fn probe_config(nodes: usize, max_iterations: usize) -> ProbeConfig {
    ProbeConfig {
        nodes,
        max_iterations,
        ..ProbeConfig::default()
    }
}

fn cmd_optimize(area: f64, nodes: usize, init: Init, max_iterations: usize, format: Format) -> Result<Outcome, Failure> {
    let fail = Failure::module(EXIT_PROBE);
    let config = probe_config(nodes, max_iterations);
    let (label, result) = match init {
        Init::Sphere => ("sphere".to_string(), minimize(area, None, &config).map_err(&fail)?),
        Init::Multistart => minimize_multistart(area, &config).map_err(&fail)?,
    };
    let text = match format {
        Format::Json => to_json_pretty(&json!({ "init": label, "result": result })),
        Format::Csv => nodes_csv(result.profile.nodes()),
        Format::Svg => profile_svg(&result.profile.to_surface().map_err(&fail)?),
    };
    Ok(Outcome {
        text,
        ok: result.converged,
    })
}

fn cmd_verify(surface: &Path, tol: f64, pointwise_tol: f64, format: Format, qtol: Tolerance) -> Result<Outcome, Failure> {
    let surf = read_surface(surface)?;
    let rep = verify_all_with(&surf, qtol).map_err(Failure::module(EXIT_GEOMETRY))?;
    let mut checks: Vec<(&str, f64, f64, bool)> = vec![
        ("first_variation", rep.residual_first_variation, tol, rep.residual_first_variation.abs() <= tol),
        ("area_defect", rep.residual_area_defect, tol, rep.residual_area_defect.abs() <= tol),
        ("pointwise_tracefree", rep.pointwise_tracefree, pointwise_tol, rep.pointwise_tracefree <= pointwise_tol),
    ];
    if let Some(g) = rep.residual_gauss_bonnet {
        checks.push(("gauss_bonnet", g, tol, g.abs() <= tol));
    }
    if let Some(t) = rep.residual_tracefree {
        checks.push(("tracefree", t, tol, t.abs() <= tol));
    }
    if let Some(gap) = rep.willmore_area_gap {
        checks.push(("willmore_minus_area", gap, -tol, gap >= -tol));
    }
    let ok = checks.iter().all(|c| c.3);
    let text = match format {
        Format::Json | Format::Svg => {
            let list: Vec<_> = checks
                .iter()
                .map(|(n, v, t, p)| json!({ "name": n, "value": v, "tolerance": t, "pass": p }))
                .collect();
            to_json_pretty(&json!({ "report": rep, "checks": list, "pass": ok }))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|(n, v, t, p)| vec![n.to_string(), fmt_num(*v), fmt_num(*t), p.to_string()])
                .collect();
            csv_table(&["check", "value", "tolerance", "pass"], &rows)
        }
    };
    Ok(Outcome { text, ok })
}

fn cmd_sweep(a_min: f64, a_max: f64, steps: usize, probe: bool, nodes: usize, format: Format) -> Result<Outcome, Failure> {
    let fail = Failure::module(EXIT_BUMP);
    let areas = area_grid(a_min, a_max, steps).map_err(&fail)?;
    let probed: Vec<Option<f64>> = if probe {
        let config = probe_config(nodes, 20_000);
        areas
            .par_iter()
            .map(|&a| {
                minimize_multistart(a, &config)
                    .ok()
                    .filter(|(_, r)| r.converged)
                    .map(|(_, r)| r.w_est)
            })
            .collect()
    } else {
        vec![None; areas.len()]
    };
    let lookup = |a: f64| {
        areas
            .iter()
            .position(|&x| x == a)
            .and_then(|i| probed[i])
    };
    let sweep = sweep_bounds(&areas, Some(lookup)).map_err(&fail)?;
    let ok = sweep
        .rows
        .iter()
        .all(|r| r.upper.map_or(true, |u| r.lower_bound <= u + 1e-6));
    let text = match format {
        Format::Json => to_json_pretty(&sweep),
        Format::Csv => sweep_csv(&sweep),
        Format::Svg => sweep_svg(&sweep),
    };
    Ok(Outcome { text, ok })
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let tol = quad_tolerance()?;
    match cli.command {
        Command::Report { surface, svg } => cmd_report(&surface, svg.as_deref(), cli.format, tol),
        Command::Neck { r, emit } => cmd_neck(r, emit, cli.format, tol),
        Command::Bump { s, alpha, emit } => cmd_bump(&s, alpha, emit, cli.format),
        Command::Optimize {
            area,
            nodes,
            init,
            max_iterations,
        } => cmd_optimize(area, nodes, init, max_iterations, cli.format),
        Command::Verify {
            surface,
            tol: t,
            pointwise_tol,
        } => cmd_verify(&surface, t, pointwise_tol, cli.format, tol),
        Command::Sweep {
            a_min,
            a_max,
            steps,
            probe,
            nodes,
        } => cmd_sweep(a_min, a_max, steps, probe, nodes, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(outcome) => {
            if let Some(path) = out {
                if let Err(f) = write_file(&path, &outcome.text) {
                    eprintln!("error: {}", f.message);
                    return ExitCode::from(f.code);
                }
            } else {
                print!("{}", outcome.text);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: requested tolerances not met");
                ExitCode::from(EXIT_TOLERANCE)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
