use crate::config::{default_tolerance, glancing_operator_branches, ExperimentConfig, Expectation, SourceKind, SweepConfig};
use crate::error::{io_err, CliError, CliResult};
use crate::json;
use crate::report::{Report, SweepEntry, SweepStatus, Verdict};
use collar_core::helmholtz::{
    kernel_column, solve_mode, AnnulusSpec, BoundaryCondition, Frequency, ModeIndex, RadialBasis, RadialGridFunction,
    DEFAULT_POINTS_PER_WAVELENGTH,
};
use collar_core::scaling::{sweep_with_progress, NormKind, RegimeRecipe, SweepPoint, SweepResult, SweepSpec};
use collar_core::special_fn::{
    bessel_j_series, bessel_jy, debye_hankel, half_integer_jy, large_argument_hankel, transitional_bessel,
    uniform_bessel, EvalPath, Order, SpecialFnConfig,
};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Instant;

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
    }
    // write then rename, so an interrupted run never leaves a torn file
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    std::fs::rename(&tmp, path).map_err(io_err(path))
}

fn out_dir(config: &ExperimentConfig) -> PathBuf {
    config.out.clone().unwrap_or_else(|| PathBuf::from("collar-out"))
}

// ---------------------------------------------------------------- bessel

/// Evaluation route for `collar bessel`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// best available path
    Auto,
    /// half-integer closed form
    Exact,
    /// ascending series (J only)
    Series,
    Uniform,
    Transitional,
    Debye,
    LargeArgument,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Exact => "exact",
            Method::Series => "series",
            Method::Uniform => "uniform",
            Method::Transitional => "transitional",
            Method::Debye => "debye",
            Method::LargeArgument => "large_argument",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselRow {
    pub method: &'static str,
    pub nu: f64,
    pub z: f64,
    pub j: f64,
    pub y: f64,
    pub modulus_sq: f64,
    pub path: String,
    pub est_rel_error: f64,
    /// why a method declined, empty otherwise
    pub note: String,
}

fn path_name(p: EvalPath) -> &'static str {
    p.name()
}

pub fn bessel_row(nu: f64, z: f64, method: Method) -> CliResult<BesselRow> {
    if !(z >= 0.0 && z.is_finite()) {
        return Err(CliError::Config(format!("z must be finite and >= 0, got {z}")));
    }
    let order = Order::new(nu).map_err(|e| CliError::Config(format!("bad order {nu}: {e}")))?;
    let cfg = SpecialFnConfig::default();
    let pair = |j: f64, y: f64, path: &str, est: f64| BesselRow {
        method: method.name(),
        nu,
        z,
        j,
        y,
        modulus_sq: j * j + y * y,
        path: path.into(),
        est_rel_error: est,
        note: String::new(),
    };
    let outcome: collar_core::Result<BesselRow> = (|| match method {
        Method::Auto => {
            let (j, y) = bessel_jy(order, z, &cfg)?;
            Ok(pair(j.value, y.value, path_name(j.regime_used), j.est_rel_error.max(y.est_rel_error)))
        }
        Method::Exact => {
            let m = order.half_integer_index().ok_or_else(|| {
                collar_core::Error::Unsupported(format!("closed form needs a half-integer order, got {nu}"))
            })?;
            let v = half_integer_jy(m, z)?;
            Ok(pair(v.j_f64()?, v.y_f64()?, "exact", 4.0 * f64::EPSILON))
        }
        Method::Series => {
            let j = bessel_j_series(order, z, &cfg)?;
            let mut row = pair(j.value, f64::NAN, "series", j.est_rel_error);
            row.note = "series gives J only".into();
            Ok(row)
        }
        Method::Uniform | Method::Transitional => {
            let (j, y) = if method == Method::Uniform {
                uniform_bessel(order, z / nu, &cfg)?
            } else {
                transitional_bessel(order, (z - nu) / nu.cbrt(), &cfg)?
            };
            Ok(pair(j.value, y.value, path_name(j.regime_used), j.est_rel_error.max(y.est_rel_error)))
        }
        Method::Debye | Method::LargeArgument => {
            let h = if method == Method::Debye {
                debye_hankel(order, z, &cfg)?
            } else {
                large_argument_hankel(order, z, &cfg)?
            };
            Ok(pair(h.value.re, h.value.im, path_name(h.regime_used), h.est_rel_error))
        }
    })();
    match outcome {
        Ok(r) => Ok(r),
        Err(e @ collar_core::Error::Domain { .. }) => Err(CliError::Config(format!("nu={nu}, z={z}: {e}"))),
        Err(e) => {
            let mut row = pair(f64::NAN, f64::NAN, "refused", f64::NAN);
            row.modulus_sq = f64::NAN;
            row.note = e.to_string();
            Ok(row)
        }
    }
}

pub fn bessel_table(nu: f64, zs: &[f64], methods: &[Method]) -> CliResult<Vec<BesselRow>> {
    let mut rows = Vec::new();
    for &z in zs {
        for &m in methods {
            rows.push(bessel_row(nu, z, m)?);
        }
    }
    Ok(rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn bessel_csv(rows: &[BesselRow]) -> String {
    let mut out = String::from("method,nu,z,j,y,modulus_sq,path,est_rel_error,note\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{},{:.8e},{}",
            r.method,
            r.nu,
            r.z,
            r.j,
            r.y,
            r.modulus_sq,
            r.path,
            r.est_rel_error,
            csv_field(&r.note)
        );
    }
    out
}

// ---------------------------------------------------------------- solve

#[derive(Debug, Clone, Serialize)]
struct Tolerances {
    boundary: Option<f64>,
    neumann: Option<f64>,
    /// not checked for a spike, whose source is not a grid function the
    /// difference stencil can reproduce
    pde: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct SolveRecord {
    config_hash: String,
    source: SourceKind,
    metadata: collar_core::helmholtz::SolutionMetadata,
    tolerances: Tolerances,
    /// spike position, when the source is a spike
    spike_node: Option<f64>,
    pass: bool,
    failures: Vec<String>,
}

/// Summary line per mode, plus the files written.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
    pub failures: Vec<String>,
}

pub fn cmd_solve(config: &ExperimentConfig, modes: &[u32]) -> CliResult<SolveOutcome> {
    let sc = &config.solve;
    let lam = Frequency::new(sc.lambda.unwrap_or(config.lambda_min))?;
    let spec = AnnulusSpec::with_refinement(
        config.alpha,
        lam,
        config.cutoff,
        config.quadrature.points_per_wavelength.unwrap_or(DEFAULT_POINTS_PER_WAVELENGTH),
        config.quadrature.refine.unwrap_or(1),
    )?;
    let f = match sc.source {
        SourceKind::Constant => RadialGridFunction::sample(&spec, |_| num(1.0, 0.0))?,
        SourceKind::Smooth => RadialGridFunction::sample(&spec, |r| num((3.0 * r).cos(), r - 1.0))?,
        SourceKind::Spike { index } => {
            if index >= spec.len() {
                return Err(CliError::Config(format!("spike index {index} outside 0..{}", spec.len())));
            }
            let mut g = RadialGridFunction::zeros(&spec);
            g.values[index] = num(1.0, 0.0);
            g
        }
    };
    let dir = out_dir(config);
    let mut out = SolveOutcome { lines: Vec::new(), files: Vec::new(), failures: Vec::new() };
    for &l in modes {
        let mode = ModeIndex::new(l);
        let sol = solve_mode(mode, lam, config.bc, &f, &spec, sc.quadrature)?;
        let meta = sol.metadata(sc.pde_probes)?;
        let tol = Tolerances {
            boundary: (config.bc == BoundaryCondition::Dirichlet).then_some(sc.tol_boundary),
            neumann: (config.bc == BoundaryCondition::Neumann).then_some(sc.tol_neumann),
            pde: (!matches!(sc.source, SourceKind::Spike { .. })).then_some(sc.tol_pde),
        };
        let mut failures = Vec::new();
        let mut check = |what: &str, value: f64, limit: Option<f64>| {
            if let Some(limit) = limit {
                if !(value <= limit) {
                    failures.push(format!("l={l}: {what} residual {value:.3e} exceeds {limit:.1e}"));
                }
            }
        };
        check("boundary", meta.residual_boundary, tol.boundary);
        check("neumann", meta.residual_neumann, tol.neumann);
        check("pde", meta.residual_pde, tol.pde);

        let stem = format!("solve_l{l}");
        let csv_path = dir.join(format!("{stem}.csv"));
        write_file(&csv_path, &sol.values.to_csv())?;
        out.files.push(csv_path);
        let spike_node = match sc.source {
            SourceKind::Spike { index } => {
                let s = spec.nodes()[index];
                let basis = RadialBasis::new(mode, lam, config.bc)?;
                let col = kernel_column(&basis, s, &spec)?;
                let p = dir.join(format!("{stem}_kernel.csv"));
                write_file(&p, &col.to_csv())?;
                out.files.push(p);
                Some(s)
            }
            _ => None,
        };
        out.lines.push(format!(
            "l={l:<6} boundary {:.3e}  neumann {:.3e}  pde {:.3e}  {}",
            meta.residual_boundary,
            meta.residual_neumann,
            meta.residual_pde,
            if failures.is_empty() { "ok" } else { "FAIL" }
        ));
        let record = SolveRecord {
            config_hash: config.hash(),
            source: sc.source,
            metadata: meta,
            tolerances: tol,
            spike_node,
            pass: failures.is_empty(),
            failures: failures.clone(),
        };
        let json_path = dir.join(format!("{stem}.json"));
        write_file(&json_path, &json::to_string(&record).map_err(|e| CliError::Config(e.to_string()))?)?;
        out.files.push(json_path);
        out.failures.extend(failures);
    }
    Ok(out)
}

fn num(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------- sweep

/// Notes attached to a finished sweep.
pub fn sweep_flags(s: &SweepConfig, alpha: f64, result: &SweepResult) -> Vec<String> {
    let mut flags: Vec<String> =
        result.dropped.iter().map(|(l, why)| format!("lambda={l} dropped: {why}")).collect();
    if let (NormKind::OperatorNorm, RegimeRecipe::Glancing { beta }) = (s.kind, s.recipe) {
        let tol = match s.expectation(alpha) {
            Some(Expectation::Band { tolerance, .. }) => tolerance,
            _ => default_tolerance(s.kind, s.recipe, alpha),
        };
        let (a, b) = glancing_operator_branches(alpha, beta);
        let slope = result.fit.slope;
        if (slope - a).abs() > 2.0 * tol && (slope - b).abs() > 2.0 * tol {
            flags.push(format!(
                "slope {slope:.4} matches neither glancing branch ({a:.4}, {b:.4}) within {:.2}",
                2.0 * tol
            ));
        }
    }
    flags
}

fn run_one(config: &ExperimentConfig, s: &SweepConfig) -> SweepEntry {
    let spec = SweepSpec {
        kind: s.kind,
        recipe: s.recipe,
        alpha: config.alpha,
        lambdas: config.lambdas(),
        cutoff: s.cutoff.unwrap_or(config.cutoff),
        weighting: s.weighting,
    };
    let partial = Mutex::new(Vec::<SweepPoint>::new());
    let outcome = sweep_with_progress(&spec, |p| partial.lock().expect("progress lock").push(*p));
    match outcome {
        Ok(result) => {
            let verdict = s.expectation(config.alpha).map(|e| Verdict::new(e, result.fit.slope));
            SweepEntry {
                name: s.name.clone(),
                status: SweepStatus::Complete,
                error: None,
                flags: sweep_flags(s, config.alpha, &result),
                result: Some(result),
                partial_points: Vec::new(),
                verdict,
            }
        }
        Err(e) => {
            let mut pts = partial.into_inner().expect("progress lock");
            pts.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
            SweepEntry {
                name: s.name.clone(),
                status: SweepStatus::Failed,
                error: Some(e.to_string()),
                result: None,
                partial_points: pts,
                verdict: None,
                flags: Vec::new(),
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Timing {
    name: String,
    seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Timings {
    sweeps: Vec<Timing>,
    total_seconds: f64,
}

/// Runs every configured sweep in order, rewriting `report.json` after each
/// one. When `stop` is raised the remaining sweeps are recorded as
/// interrupted.
pub fn cmd_sweep(config: &ExperimentConfig, stop: &AtomicBool, log: &mut dyn FnMut(&str)) -> CliResult<Report> {
    let dir = out_dir(config);
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let sweeps = config.sweep_list();
    let mut report = Report::new(config);
    let mut timings = Timings { sweeps: Vec::new(), total_seconds: 0.0 };
    let start = Instant::now();
    let flush = |report: &Report, timings: &Timings| -> CliResult<()> {
        let text = json::to_string(report).map_err(|e| CliError::Config(e.to_string()))?;
        write_file(&dir.join("report.json"), &text)?;
        let t = json::to_string(timings).map_err(|e| CliError::Config(e.to_string()))?;
        write_file(&dir.join("timings.json"), &t)
    };
    for (i, s) in sweeps.iter().enumerate() {
        if stop.load(Ordering::SeqCst) {
            for rest in &sweeps[i..] {
                report.push(SweepEntry {
                    name: rest.name.clone(),
                    status: SweepStatus::Interrupted,
                    error: None,
                    result: None,
                    partial_points: Vec::new(),
                    verdict: None,
                    flags: Vec::new(),
                });
            }
            break;
        }
        let t0 = Instant::now();
        let entry = run_one(config, s);
        timings.sweeps.push(Timing { name: s.name.clone(), seconds: t0.elapsed().as_secs_f64() });
        if let Some(r) = &entry.result {
            write_file(&dir.join(format!("{}.csv", s.name)), &r.to_csv())?;
            if config.plot {
                write_file(&dir.join(format!("{}.svg", s.name)), &r.to_svg(&s.name))?;
            }
        }
        log(&format!("[{}/{}] {}", i + 1, sweeps.len(), report_line(&entry)));
        report.push(entry);
        timings.total_seconds = start.elapsed().as_secs_f64();
        flush(&report, &timings)?;
    }
    timings.total_seconds = start.elapsed().as_secs_f64();
    flush(&report, &timings)?;
    Ok(report)
}

fn report_line(e: &SweepEntry) -> String {
    match (&e.verdict, &e.error) {
        (Some(v), _) => format!("{} {}", e.name, v.summary),
        (None, Some(err)) => format!("{} ERROR: {err}", e.name),
        (None, None) => format!(
            "{} slope {:.4}",
            e.name,
            e.result.as_ref().map_or(f64::NAN, |r| r.fit.slope)
        ),
    }
}

// ---------------------------------------------------------------- report

/// Reads a written report, returning its table and exit code; with `plot`
/// the SVGs are regenerated next to it.
pub fn cmd_report(path: &Path, plot: bool) -> CliResult<(String, u8)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{} is not a report: {e}", path.display())))?;
    let (table, code) = crate::report::table_from_json(&v).map_err(CliError::Config)?;
    if plot {
        let dir = path.parent().unwrap_or(Path::new("."));
        for s in v["sweeps"].as_array().into_iter().flatten() {
            if s["result"].is_null() {
                continue;
            }
            let r: SweepResult = serde_json::from_value(s["result"].clone())
                .map_err(|e| CliError::Config(format!("bad sweep result: {e}")))?;
            let name = s["name"].as_str().unwrap_or("sweep");
            write_file(&dir.join(format!("{name}.svg")), &r.to_svg(name))?;
        }
    }
    Ok((table, code))
}
